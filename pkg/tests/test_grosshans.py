import random
from collections import Counter

import pytest

from glab.exact_linalg import IntMatrix, LinearSolver, is_injective
from glab.fixtures import random_module
from glab.gmodule import (
    SubgroupTag,
    WeightSubmodule,
    adjoint_sl2,
    direct_sum,
    hom_g,
    invariants,
    standard_rep,
    sym_power,
    tensor,
    trivial,
    validate,
)
from glab.grosshans import filtration_level, graded, has_good_filtration, hull, hull_embedding, is_unit_after_inverting
from glab.induction import delta, nabla
from glab.root_data import Weight


def test_filtration_levels_of_adjoint():
    M = adjoint_sl2()
    assert filtration_level(M, 0).rank == 0
    assert filtration_level(M, 1).rank == 0
    assert filtration_level(M, 2) == WeightSubmodule.full(M)
    assert filtration_level(M, 50).rank == 3
    assert filtration_level(trivial(3), 0).rank == 3


def test_graded_pieces():
    assert graded(trivial(2)).degrees == [0]
    g = graded(adjoint_sl2())
    assert g.degrees == [2] and g.graded_ranks() == {2: 3}
    assert validate(g.pieces[2].module).ok
    assert graded(direct_sum(nabla(2), trivial(1))).degrees == [0, 2]


def test_hull_examples():
    assert hull(trivial(2)).ranks() == {"0": 2}
    assert hull(adjoint_sl2()).ranks() == {"2": 3}
    V = standard_rep()
    assert hull(tensor(V, V)).ranks() == {"0": 1, "2": 3}
    assert hull(tensor(V, V)).total.rank == 4


def test_hull_embedding_examples():
    e = hull_embedding(trivial(2))
    assert e.map.matrix == IntMatrix.identity(2)
    e = hull_embedding(adjoint_sl2())
    assert e.cokernel() == [1, 1, 2]
    assert e.map.is_equivariant()
    assert hull_embedding(direct_sum(nabla(2), nabla(0))).cokernel() == [1, 1, 1, 1]
    assert hull_embedding(tensor(standard_rep(), standard_rep())).cokernel() == [1, 1, 1, 1]


def test_good_filtration():
    for m in range(5):
        assert has_good_filtration(nabla(m)).good
    assert not has_good_filtration(adjoint_sl2()).good
    assert has_good_filtration(adjoint_sl2(), [2]).good
    assert has_good_filtration(delta(3), [3]).good
    assert not has_good_filtration(delta(3), [2]).good
    assert is_unit_after_inverting(12, [2, 3]) and not is_unit_after_inverting(0, [2])


def _in_span(maps, matrix) -> bool:
    if not maps:
        return matrix.is_zero()
    vecs = [tuple(x for r in f.matrix.rows for x in r) for f in maps]
    A = IntMatrix.from_columns(vecs, len(vecs[0]), matrix.modulus)
    target = tuple(x for r in matrix.rows for x in r)
    return LinearSolver(A).solve(target) is not None


@pytest.mark.parametrize("seed", range(8))
def test_hull_embedding_agrees_with_hom_g(seed):
    M = random_module(random.Random(seed), max_weight=4)
    e = hull_embedding(M)
    assert e.map.is_equivariant()
    # on each graded piece the explicit map is an integral combination of hom_g maps
    filt = e.filtration
    for i in filt.degrees:
        G = filt.pieces[i].module
        s = e.hull.summand(Weight.of(i))
        if s is None:
            continue
        N = tensor(s.costandard, trivial(s.multiplicity))
        cols = range(filt.offsets[i], filt.offsets[i] + G.rank)
        rows = range(s.offset, s.offset + N.rank)
        block = e.map.matrix.select(rows=rows, cols=cols)
        assert _in_span(hom_g(G, N), block)


def test_properties_on_random_modules():
    rng = random.Random(2024)
    for _ in range(15):
        M = random_module(rng, max_weight=5)
        up = invariants(M, SubgroupTag.UPlus)
        assert all(w.coords[0] >= 0 for w in up.weights)
        e = hull_embedding(M)
        assert is_injective(e.map.matrix)
        assert invariants(e.filtration.total, SubgroupTag.UPlus).character() == up.character()


def test_filtration_is_exhaustive_and_g_stable():
    M = sym_power(adjoint_sl2(), 2)
    f = graded(M)
    assert sum(f.graded_ranks().values()) == M.rank
    for i in range(0, 5):
        assert filtration_level(M, i).is_g_stable()
    assert Counter(f.total_heights) == Counter({0: 1, 4: 5})
