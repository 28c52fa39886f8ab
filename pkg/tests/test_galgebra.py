import pytest

from glab.errors import NonFreeQuotientError, NotDominantError, TruncationError
from glab.exact_linalg import cokernel_structure
from glab.fixtures import adjoint_fixture, conjugation_fixture
from glab.galgebra import (
    ConeAlgebra,
    EquivariantIdeal,
    HullAlgebra,
    SubalgebraOf,
    format_vector,
    grosshans_graded_algebra,
    hull_algebra,
    invariant_subalgebra,
    multicone,
    projection_map,
    quotient,
    reduce_algebra,
    schur_cone_pair,
    sym_algebra,
    torsion_bound,
    verify_axioms,
)
from glab.gmodule import SubgroupTag, adjoint_sl2, standard_rep, trivial
from glab.reductivity import power_surjectivity


def test_format_vector():
    assert format_vector(["a", "b"], (0, 0)) == "0"
    assert format_vector(["a", "b"], (1, -1)) == "a - b"
    assert format_vector(["a", "b"], (-2, 3)) == "-2*a + 3*b"


def test_sym_algebra_examples():
    A = sym_algebra(adjoint_sl2(), 0)
    assert A.rank(0) == 1 and A.labels(0) == ["1"]
    with pytest.raises(TruncationError):
        A.rank(1)
    A = sym_algebra(adjoint_sl2(), 3)
    assert [A.rank(d) for d in range(4)] == [1, 3, 6, 10]
    assert A.labels(1) == ["X", "H", "Y"]
    C = conjugation_fixture(2).algebra
    assert C.labels(1) == ["a", "b", "c", "d"]
    assert C.expression(2, C.multiply(1, (1, 0, 0, 0), 1, (0, 0, 0, 1))) == "a*d"


def test_truncation_is_enforced_by_products():
    A = sym_algebra(standard_rep(), 2)
    with pytest.raises(TruncationError):
        A.multiply(2, A.basis_vector(2, 0), 1, A.basis_vector(1, 0))


@pytest.mark.parametrize("make", [
    lambda: sym_algebra(adjoint_sl2(), 4),
    lambda: grosshans_graded_algebra(sym_algebra(adjoint_sl2(), 4)),
    lambda: HullAlgebra(sym_algebra(adjoint_sl2(), 4)),
    lambda: conjugation_fixture(3).quotient,
    lambda: adjoint_fixture(3).mod2,
    lambda: ConeAlgebra(lambda d: 2 * d, 4),
])
def test_algebra_axioms(make):
    assert verify_axioms(make(), 4) == []


def test_quotients():
    A = sym_algebra(adjoint_sl2(), 3)
    Q = quotient(A, [])
    assert [Q.rank(d) for d in range(4)] == [A.rank(d) for d in range(4)]
    fx = conjugation_fixture(3)
    assert [fx.quotient.rank(d) for d in range(4)] == [1, 1, 1, 1]
    assert fx.quotient.modulus == 0
    M2 = adjoint_fixture(3).mod2
    assert M2.modulus == 2
    assert [M2.rank(d) for d in range(4)] == [1, 3, 6, 10]
    assert projection_map(fx.quotient).is_algebra_map()


def test_non_free_quotient_rejected():
    A = sym_algebra(standard_rep(), 2)
    with pytest.raises(NonFreeQuotientError):
        quotient(A, [(1, (2, 0))])


def test_ideal_is_g_stable_closure():
    A = sym_algebra(adjoint_sl2(), 2)
    J = EquivariantIdeal(A, [(1, (1, 0, 0))])  # X generates all of sl2
    assert J.degree(1).rank == 3
    assert J.degree(2).rank == 6


def test_invariant_subalgebra_examples():
    conj = invariant_subalgebra(conjugation_fixture(4).algebra, SubgroupTag.FullG, 4)
    assert conj.generator_degrees == [1, 2]
    assert [g.expression for g in conj.generators] == ["a + d", "a*d - b*c"]
    assert [conj.ranks[d] for d in range(5)] == [1, 1, 2, 2, 3]
    adj = invariant_subalgebra(sym_algebra(adjoint_sl2(), 4), SubgroupTag.FullG, 4)
    assert adj.generator_degrees == [2]
    assert adj.generators[0].expression == "4*X*Y + H^2"
    assert [adj.ranks[d] for d in range(5)] == [1, 0, 1, 0, 1]
    U = invariant_subalgebra(sym_algebra(standard_rep(), 4), SubgroupTag.UPlus, 4)
    assert [U.ranks[d] for d in range(5)] == [1] * 5
    assert [g.expression for g in U.generators] == ["x"]


def test_grosshans_graded_algebra_heights():
    A = sym_algebra(adjoint_sl2(), 4)
    gr = grosshans_graded_algebra(A)
    assert set(gr.heights(1)) == {2}
    T = sym_algebra(trivial(2), 3)
    grT = grosshans_graded_algebra(T)
    assert [grT.rank(d) for d in range(4)] == [T.rank(d) for d in range(4)]
    assert set(grT.heights(3)) == {0}
    # X^k is U+-invariant of weight 2k and sits at height 2k
    for k in range(1, 5):
        x = A.power(1, A.basis_vector(1, 0), k)
        f = gr.filtration(k)
        assert f.filtration_degree(x) == 2 * k


def test_hull_algebra():
    A = sym_algebra(adjoint_sl2(), 2)
    H, emb = hull_algebra(A)
    assert H.hull(1).ranks() == {"2": 3}
    assert cokernel_structure(emb.matrices[1]) == [1, 1, 2]
    assert emb.matrices[0].to_lists() == [[1]]
    assert emb.is_algebra_map()
    assert emb.is_equivariant()


def test_torsion_bound():
    assert torsion_bound(sym_algebra(adjoint_sl2(), 2), 2).bound == 2
    assert torsion_bound(sym_algebra(standard_rep(), 3), 3).bound == 1
    C2 = torsion_bound(conjugation_fixture(2).algebra, 2).bound
    C3 = torsion_bound(conjugation_fixture(3).algebra, 3).bound
    assert C2 is not None and C3 % C2 == 0


def test_schur_cone_pair():
    p1 = schur_cone_pair(1, 3)
    assert p1.t == 1 and p1.integral
    p2 = schur_cone_pair(2, 2)
    assert p2.factors[1] == [1, 1, 2]
    assert p2.t == 2
    # over Z/p with p > 2 * D * lam the two algebras agree
    p = schur_cone_pair(2, 2, modulus=11)
    assert all(f == 1 for fs in p.factors.values() for f in fs)
    with pytest.raises(NotDominantError):
        schur_cone_pair(-1, 2)


def test_multicone():
    mc = multicone([1], 4)
    assert [mc.algebra.rank(d) for d in range(5)] == [1, 2, 3, 4, 5]
    assert mc.all_surjective
    empty = multicone([], 3)
    assert [empty.algebra.rank(d) for d in range(4)] == [1, 0, 0, 0]
    assert multicone([1], 2, modulus=2).surjective[(1, 1)]


def test_power_of_x_in_even_subalgebra():
    # Z[x^2] inside Z[x] with trivial action: x needs exponent 2
    A = sym_algebra(trivial(1), 4)
    S = SubalgebraOf(A, {d: [A.basis_vector(d, 0)] if d % 2 == 0 else [] for d in range(5)})
    v = power_surjectivity(S.inclusion(), [(1, A.basis_vector(1, 0))], s_max=4)
    assert v.proven and v.witnesses[0].exponent == 2


def test_reduce_algebra_matches_base_change():
    A = sym_algebra(adjoint_sl2(), 2)
    R = reduce_algebra(A, 2)
    assert R.modulus == 2
    assert R.module(1).op("E", 0, 1) == adjoint_sl2(2).op("E", 0, 1)
