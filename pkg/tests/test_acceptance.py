"""Acceptance criteria 1-11, each with its runtime limit.

Every test records one PASS/FAIL line; the lines are printed in the pytest
summary, or directly when this file is run as a script.
"""

import json
import random
import sys
import time
from contextlib import contextmanager
from math import lcm
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import ACCEPTANCE_LINES  # noqa: E402

from glab.cli import main  # noqa: E402
from glab.exact_linalg import cokernel_structure, is_injective, is_surjective  # noqa: E402
from glab.fixtures import adjoint_fixture, conjugation_fixture, random_module  # noqa: E402
from glab.galgebra import hull_algebra, invariant_subalgebra, schur_cone_pair, sym_algebra, torsion_bound  # noqa: E402
from glab.gmodule import SubgroupTag, adjoint_sl2, base_change, invariants, sym_power, sym_power_matrix  # noqa: E402
from glab.grosshans import hull_embedding, is_unit_after_inverting  # noqa: E402
from glab.induction import cartan_multiply, hom_group_comparison, nabla, standard_module  # noqa: E402
from glab.reductivity import (  # noqa: E402
    PROVEN,
    check_power_reductivity,
    gr_mod_p_comparison,
    lift_invariants,
    p_power_surjectivity,
    power_surjectivity,
)
from glab.root_data import Weight  # noqa: E402

TASKS = Path(__file__).resolve().parent.parent / "tasks"


@contextmanager
def criterion(number: int, title: str, limit: float):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        ACCEPTANCE_LINES.append(f"{status} criterion {number:>2}: {title} ({elapsed:.2f}s, limit {limit:g}s)")


def test_criterion_01_trace_power_reductivity():
    with criterion(1, "trace fixture: d = 2, degree-1 cokernel 2, witness maps to lambda^2", 1):
        fx = conjugation_fixture(2)
        r = check_power_reductivity(fx.phi, 8)
        assert r.status == PROVEN and r.degree == 2
        assert r.cokernels[1] == [2]
        # the trace a + d goes to 2*lambda
        assert fx.phi.matrix.apply((1, 0, 0, 1)) == (2,)
        assert sym_power_matrix(fx.phi.matrix, 2).apply(r.witness) == (1,)
        assert r.witness_expression == "a*d - b*c"


def _oracle_invariant_rank(M, d: int) -> int:
    # rational invariants of S^d M = (weight-0 multiplicity) - (weight-2 multiplicity)
    ch = sym_power(M, d).character()
    return ch[Weight.of(0)] - ch[Weight.of(2)]


def test_criterion_02_conjugation_invariant_ring():
    fx = conjugation_fixture(4)
    oracle = [_oracle_invariant_rank(fx.module, d) for d in range(1, 5)]
    assert oracle == [1, 2, 2, 3]
    with criterion(2, "conjugation invariants: generators in degrees 1 and 2, ranks 1, 2, 2, 3", 10):
        res = invariant_subalgebra(fx.algebra, SubgroupTag.FullG, 4)
        assert res.generator_degrees == [1, 2]
        assert [res.ranks[d] for d in range(1, 5)] == oracle


def test_criterion_03_mod_2_invariant_of_sl2():
    with criterion(3, "S(sl2): degree-2 invariants rank 1, H lifts with exponent 2, mod-2 degree-1 rank 1", 1):
        fx = adjoint_fixture(4)
        assert invariants(sym_power(fx.module, 2)).rank == 1
        v = lift_invariants(fx.mod2, 2)
        assert v.exponent_of("H") == 2
        inv2 = invariants(base_change(fx.module, 2))
        assert inv2.rank == 1 and inv2.basis == [(0, 1, 0)]


def test_criterion_04_unipotent_negative_control(capsys):
    with criterion(4, "unipotent control: inconclusive for d <= 8, exit code 2", 5):
        code = main(["run", str(TASKS / "unipotent_control.json"), "--d-max", "8"])
        report = json.loads(capsys.readouterr().out)
        assert code == 2
        assert report["status"] == "inconclusive"
        assert sorted(int(d) for d in report["results"]["cokernels"]) == list(range(1, 9))


def test_criterion_05_costandard_base_change():
    with criterion(5, "nabla_m base change on the nose, m <= 6, n in 2..5; top weight rank 1", 1):
        for m in range(7):
            N = nabla(m)
            assert len(N.weight_blocks[Weight.of(m)]) == 1
            for n in (2, 3, 4, 5):
                a, b = base_change(N, n), nabla(m, n)
                assert a.weights == b.weights
                assert a.raising == b.raising and a.lowering == b.lowering
                assert len(b.weight_blocks[Weight.of(m)]) == 1


def test_criterion_06_hull_properties_on_random_modules():
    with criterion(6, "50 random modules: dominant U+-weights, injective hull map, (gr M)^U+ = M^U+", 60):
        rng = random.Random(20240601)
        for _ in range(50):
            M = random_module(rng, max_weight=6)
            up = invariants(M, SubgroupTag.UPlus)
            assert all(w.coords[0] >= 0 for w in up.weights)
            e = hull_embedding(M)
            assert is_injective(e.map.matrix)
            assert invariants(e.filtration.total, SubgroupTag.UPlus).character() == up.character()


def test_criterion_07_hom_group_comparison():
    with criterion(7, "Hom(Delta_lam, M) vs (M^U+)_lam on 30 seeded fixtures", 60):
        rng = random.Random(7)
        for _ in range(30):
            modulus = rng.choice([0, 0, 2, 3, 4])
            M = random_module(rng, max_weight=5, modulus=modulus)
            dominant = sorted({w.coords[0] for w in M.weights if w.coords[0] >= 0})
            lam = rng.choice(dominant)
            left, right = hom_group_comparison(lam, M)
            assert left == right


def test_criterion_08_torsion_bound():
    with criterion(8, "torsion bound of S(sl2) at D = 2 is 2; inverting 2 gives isomorphisms", 5):
        A = sym_algebra(adjoint_sl2(), 2)
        tb = torsion_bound(A, 2)
        assert tb.bound == 2
        assert tb.factors[1] == cokernel_structure(standard_module(2).embedding.matrix) == [1, 1, 2]
        for d in range(3):
            assert all(is_unit_after_inverting(f, [2]) for f in tb.factors[d])


def test_criterion_09_power_surjectivity_of_the_hull():
    with criterion(9, "S(sl2), D = 4: hull power-surjective, mod-2 witnesses 2-powers, gr A -> gr(A/2A) proven", 120):
        A = sym_algebra(adjoint_sl2(), 8)
        H, emb = hull_algebra(A)
        v = power_surjectivity(emb, max_degree=4)
        assert v.status == PROVEN
        covered = {(w.degree, w.element) for w in v.witnesses}
        for d in range(5):
            for i in range(H.rank(d)):
                assert (d, H.expression(d, H.basis_vector(d, i))) in covered
        v2 = p_power_surjectivity(emb, 2, max_degree=4)
        assert v2.status == PROVEN
        assert all(w.exponent & (w.exponent - 1) == 0 for w in v2.witnesses)
        g = gr_mod_p_comparison(A, 2, max_degree=4)
        assert g.status == PROVEN


def test_criterion_10_schur_cone():
    with criterion(10, "Schur cone lambda = 2, D = 3: t = 2 bounds every cokernel; monic relations within 4", 30):
        pair = schur_cone_pair(2, 3, exponent_bound=4)
        assert pair.t == 2
        for d, factors in pair.factors.items():
            assert pair.t % lcm(*factors) == 0
        assert len(pair.relations) == pair.S_prime.rank(1)
        assert all(r is not None and r.degree <= 4 for r in pair.relations)


def test_criterion_11_cartan_multiplication():
    with criterion(11, "Cartan multiplication onto over Z and Z/2 for a + b <= 8", 1):
        for n in (0, 2):
            for a in range(9):
                for b in range(9 - a):
                    assert is_surjective(cartan_multiply(a, b, n).matrix)


if __name__ == "__main__":
    import pytest

    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
