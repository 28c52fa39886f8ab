import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glab.exact_linalg import IntMatrix, is_injective
from glab.fixtures import coordinate_module, matrix_module, random_module
from glab.gmodule import (
    GMap,
    GModule,
    SubgroupTag,
    WeightSubmodule,
    adjoint_sl2,
    base_change,
    direct_sum,
    dual,
    hom_g,
    identity_map,
    invariants,
    standard_rep,
    subquotient,
    sym_power,
    sym_power_map,
    tensor,
    tensor_map,
    trivial,
    validate,
)
from glab.induction import cartan_multiply, nabla, standard_module
from glab.root_data import A1, Weight


def weights(M):
    return sorted(w.coords[0] for w in M.weights)


def test_standard_rep():
    V = standard_rep()
    assert validate(V).ok
    assert invariants(V).rank == 0
    assert V.character() == Counter({Weight.of(1): 1, Weight.of(-1): 1})


def test_adjoint():
    M = adjoint_sl2()
    assert weights(M) == [-2, 0, 2]
    assert validate(M).ok
    assert invariants(M).rank == 0
    inv = invariants(sym_power(M, 2))
    assert inv.rank == 1
    S2 = sym_power(M, 2)
    labels = [S2.label(i) for i in range(S2.rank)]
    b = inv.basis[0]
    # H^2 + 4XY up to sign
    terms = {labels[i]: x for i, x in enumerate(b) if x}
    assert terms in ({"H^2": 1, "X*Y": 4}, {"H^2": -1, "X*Y": -4})


def test_dual():
    assert dual(trivial(3)).weights == trivial(3).weights
    assert weights(dual(standard_rep())) == [-1, 1]
    for m in range(5):
        S = sym_power(standard_rep(), m)
        assert validate(dual(S)).ok
        assert len(hom_g(S, dual(S))) == 1


def test_tensor():
    V = standard_rep()
    assert V.character() == tensor(V, trivial(1)).character()
    assert weights(tensor(V, V)) == [-2, 0, 0, 2]
    assert invariants(tensor(V, dual(V))).rank == 1
    assert validate(tensor(adjoint_sl2(), V)).ok


def test_sym_power():
    V = standard_rep()
    S0 = sym_power(adjoint_sl2(), 0)
    assert S0.rank == 1 and S0.weights == (A1.zero(),)
    assert weights(sym_power(V, 2)) == [-2, 0, 2]
    S3 = sym_power(V, 3)
    # basis x^3, x^2*y, x*y^2, y^3; E^(2)(x y^2) = x^3
    assert [S3.label(i) for i in range(4)] == ["x^3", "x^2*y", "x*y^2", "y^3"]
    assert S3.op("E", 0, 2).column(2) == (1, 0, 0, 0)
    assert S3.op("E", 0, 2).column(3) == (0, 3, 0, 0)


def test_validate_detects_broken_commutation():
    V = standard_rep()
    broken = GModule(A1, 0, V.weights, {(0, 1): V.op("E", 0, 1).scale(2)}, dict(V.lowering))
    rep = validate(broken)
    assert not rep.ok
    assert any("comm" in v.identity or "[E" in v.identity for v in rep.violations)


def test_validate_fixtures():
    for M in (standard_rep(), adjoint_sl2(), matrix_module(), coordinate_module(), nabla(4), adjoint_sl2(2)):
        assert validate(M).ok


def test_invariants_examples():
    assert invariants(trivial(3)).rank == 3
    inv = invariants(coordinate_module())
    assert inv.rank == 1
    assert {coordinate_module().label(i) for i, x in enumerate(inv.basis[0]) if x} == {"a", "d"}
    up = invariants(adjoint_sl2(), SubgroupTag.UPlus)
    assert up.rank == 1 and up.weights == [Weight.of(2)]
    assert up.basis == [(1, 0, 0)]


def test_invariants_jump_mod_2():
    assert invariants(adjoint_sl2()).rank == 0
    inv2 = invariants(adjoint_sl2(2))
    assert inv2.basis == [(0, 1, 0)]


def test_hom_g_examples():
    M = adjoint_sl2()
    maps = hom_g(M, M)
    assert len(maps) == 1
    assert maps[0].matrix in (IntMatrix.identity(3), IntMatrix.identity(3).scale(-1))
    assert hom_g(trivial(1), adjoint_sl2()) == []
    S2 = sym_power(standard_rep(), 2)
    assert len(hom_g(S2, S2)) == 1


def test_characters():
    V = standard_rep()
    assert trivial(2).character() == Counter({A1.zero(): 2})
    assert weights(sym_power(V, 2)) == [-2, 0, 2]
    assert tensor(V, V).character() == direct_sum(sym_power(V, 2), trivial(1)).character()


def test_gmap_equivariance_checks():
    V = standard_rep()
    assert identity_map(V).is_equivariant()
    swap = GMap(V, V, IntMatrix.from_rows([[0, 1], [1, 0]]))
    assert not swap.is_equivariant()
    assert swap.failures()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_random_modules_validate(seed):
    M = random_module(random.Random(seed), max_weight=4)
    assert validate(M).ok
    D = dual(M)
    assert validate(D).ok
    assert dual(D).character() == M.character()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.integers(1, 2))
def test_sym_power_functoriality(a, b, d):
    # Delta_a (x) Delta_b -> nabla_a (x) nabla_b -> nabla_{a+b}
    g = tensor_map(standard_module(a).embedding, standard_module(b).embedding)
    f = cartan_multiply(a, b)
    lhs = sym_power_map(f.compose(g), d)
    rhs = sym_power_map(f, d).compose(sym_power_map(g, d))
    assert lhs.matrix == rhs.matrix
    assert lhs.is_equivariant()


def test_tensor_map_identity():
    V = standard_rep()
    T = tensor_map(identity_map(V), identity_map(V))
    assert T.matrix == IntMatrix.identity(4)
    assert T.is_equivariant()


def test_base_change_commutes_with_constructions():
    V = standard_rep()
    for n in (2, 3, 4):
        a = base_change(sym_power(tensor(V, adjoint_sl2()), 2), n)
        b = sym_power(tensor(standard_rep(n), adjoint_sl2(n)), 2)
        assert a.raising == b.raising and a.lowering == b.lowering


def test_base_change_of_invariants_is_not_exact():
    # sl2 has no invariants over Z, but H is invariant over Z/2
    M = adjoint_sl2()
    assert invariants(M).rank == 0
    assert invariants(base_change(M, 2)).rank == 1


def test_serialization_round_trip():
    M = tensor(adjoint_sl2(3), standard_rep(3))
    N = GModule.from_dict(M.to_dict())
    assert N.modulus == 3 and N.weights == M.weights
    assert N.raising == M.raising and N.lowering == M.lowering


def test_weight_submodules_and_subquotients():
    M = tensor(standard_rep(), standard_rep())
    sub = invariants(M, SubgroupTag.FullG).to_submodule()
    assert sub.rank == 1 and sub.is_g_stable()
    full = WeightSubmodule.full(M)
    assert sub <= full
    Q, q, lifts = subquotient(full, sub)
    assert Q.rank == 3 and validate(Q).ok
    assert weights(Q) == [-2, 0, 2]
    assert is_injective(IntMatrix.from_columns(lifts, M.rank))


def test_incompatible_moduli_rejected():
    with pytest.raises(Exception):
        tensor(standard_rep(2), standard_rep(3))
