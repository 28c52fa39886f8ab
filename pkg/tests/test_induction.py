import random

import pytest

from glab.errors import InvalidCharacteristicError, NotDominantError, NotHighestWeightError
from glab.exact_linalg import IntMatrix, cokernel_structure, is_surjective
from glab.fixtures import random_module
from glab.gmodule import (
    SubgroupTag,
    adjoint_sl2,
    base_change,
    dual,
    hom_g,
    invariants,
    standard_rep,
    sym_power,
    tensor,
    trivial,
    validate,
)
from glab.induction import (
    cartan_multiply,
    costandard,
    delta,
    evaluation_map,
    hom_group_comparison,
    nabla,
    standard_module,
    steinberg,
    top_invariants,
    universal_weyl_map,
)
from glab.root_data import Weight


def test_costandard_examples():
    assert nabla(0).rank == 1 and validate(nabla(0)).ok
    assert costandard(-3).underlying.rank == 0
    assert costandard(-3).highest_vector_index is None
    N = nabla(2)
    assert sorted(w.coords[0] for w in N.weights) == [-2, 0, 2]


@pytest.mark.parametrize("m, factors", [(0, [1]), (1, [1, 1]), (2, [1, 1, 2]), (3, [1, 1, 3, 3])])
def test_weyl_embedding_cokernel(m, factors):
    emb = standard_module(m).embedding
    assert emb.is_equivariant()
    assert cokernel_structure(emb.matrix) == factors


def test_weyl_embedding_is_iso_for_large_p():
    for m in range(5):
        for p in (5, 7):
            if p > m:
                assert is_surjective(standard_module(m, p).embedding.matrix)


def test_standard_module_requires_dominance():
    with pytest.raises(NotDominantError):
        standard_module(-1)
    with pytest.raises(NotDominantError):
        evaluation_map(-2)


def test_evaluation_map():
    assert evaluation_map(0).matrix == IntMatrix.identity(1)
    ev = evaluation_map(2)
    assert ev.weight == Weight.of(2)
    assert len(ev.source.weight_blocks[Weight.of(2)]) == 1
    # composed with the Weyl embedding the top line still maps isomorphically
    emb = standard_module(2).embedding
    top = emb.source.rank - 1
    assert abs(ev(emb.matrix.column(top))[0]) == 1


def test_base_change_of_costandard_is_on_the_nose():
    for m in range(7):
        for n in (2, 3, 4, 5):
            a, b = base_change(nabla(m), n), nabla(m, n)
            assert a.weights == b.weights
            assert a.raising == b.raising and a.lowering == b.lowering
    assert base_change(trivial(2), 3).raising == {}


def test_steinberg():
    assert steinberg(1, 2).underlying.rank == 2
    assert steinberg(2, 3).highest_weight == Weight.of(8)
    with pytest.raises(InvalidCharacteristicError):
        steinberg(1, 4)


@pytest.mark.parametrize("p", [2, 3])
def test_steinberg_is_self_dual_mod_p(p):
    St = steinberg(1, p, p).underlying
    emb = standard_module(p - 1, p).embedding
    # Delta -> nabla is an isomorphism at the Steinberg weight
    assert is_surjective(emb.matrix)
    assert len(hom_g(dual(St), St)) == 1


def test_universal_weyl_map_examples():
    res = universal_weyl_map(2, nabla(2))
    assert cokernel_structure(res.map.matrix) == [1, 1, 2]
    res = universal_weyl_map(3, delta(3))
    assert cokernel_structure(res.map.matrix) == [1, 1, 1, 1]
    V = standard_rep()
    res = universal_weyl_map(2, tensor(V, V))
    assert res.kernel_weights == []
    assert res.cokernel_weights == [Weight.of(0)]
    assert res.kernel_below and res.top_not_in_cokernel


def test_universal_weyl_map_rejects_non_maximal_weights():
    with pytest.raises(NotHighestWeightError):
        universal_weyl_map(0, nabla(2))
    with pytest.raises(NotHighestWeightError):
        universal_weyl_map(4, nabla(2))


def test_hom_group_comparison_examples():
    assert hom_group_comparison(0, trivial(1)) == ([0], [0])
    left, right = hom_group_comparison(2, adjoint_sl2())
    assert left == right == [0]
    S = sym_power(standard_rep(), 2)
    assert hom_group_comparison(4, tensor(S, S)) == ([0], [0])
    assert hom_group_comparison(2, nabla(2, 4)) == ([4], [4])


def test_hom_group_comparison_on_random_modules():
    rng = random.Random(7)
    for _ in range(10):
        M = random_module(rng, max_weight=4)
        for w in sorted({w.coords[0] for w in M.weights if w.coords[0] >= 0}):
            left, right = hom_group_comparison(w, M)
            assert left == right


def test_cartan_multiply():
    assert cartan_multiply(0, 3).matrix == IntMatrix.identity(4)
    V = standard_rep()
    f = cartan_multiply(1, 1)
    assert f.source.weights == tensor(V, V).weights
    assert f.is_equivariant() and is_surjective(f.matrix)
    g = cartan_multiply(2, 2, 2)
    assert g.is_equivariant() and is_surjective(g.matrix)


def test_top_invariants():
    assert top_invariants(adjoint_sl2(), 2) == [(1, 0, 0)]
    assert top_invariants(adjoint_sl2(), 0) == []
    assert invariants(nabla(3), SubgroupTag.UPlus).rank == 1
