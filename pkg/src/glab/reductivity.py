"""Checkers for power reductivity, lifting of invariants and power-surjectivity.

Every positive answer carries a witness that is re-verified by exact
arithmetic before it is returned. A search that runs out of degrees or
exponents answers "inconclusive": a truncated computation can exhibit
powers but never rule them out.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import reduce as _fold
from itertools import combinations
from math import factorial, lcm
from typing import Iterable, Sequence

from sympy import factorint

from .errors import NotEquivariantError, NotSurjectiveError
from .exact_linalg import IntMatrix, LinearSolver, Vector, cokernel_structure
from .galgebra import (
    AlgebraMap,
    GradedGAlgebra,
    GrosshansGradedAlgebra,
    MonicRelation,
    QuotientAlgebra,
    format_vector,
    monic_relation,
    reduce_algebra,
)
from .gmodule import GMap, SubgroupTag, invariants, sym_power, sym_power_matrix
from .root_data import check_characteristic

PROVEN = "proven-within-bounds"
INCONCLUSIVE = "inconclusive"


@dataclass
class Witness:
    degree: int
    element: str
    exponent: int
    preimage: str

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "element": self.element,
            "exponent": self.exponent,
            "preimage": self.preimage,
        }


@dataclass
class PowerSurjectivityVerdict:
    status: str
    witnesses: list[Witness]
    missing: list[tuple[int, str]]
    max_degree: int
    max_exponent: int
    exponents: str = "any"
    universal: bool | None = None
    t: int | None = None

    @property
    def proven(self) -> bool:
        return self.status == PROVEN

    def exponent_of(self, element: str) -> int | None:
        for w in self.witnesses:
            if w.element == element:
                return w.exponent
        return None

    def to_dict(self) -> dict:
        out = {
            "status": self.status,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "missing": [{"degree": d, "element": e} for d, e in self.missing],
            "bounds": {"degree": self.max_degree, "exponent": self.max_exponent},
            "exponents": self.exponents,
        }
        if self.universal is not None:
            out["universal_within_bounds"] = self.universal
            out["t"] = self.t
        return out


def _verdict(witnesses, missing, D, s_max, exponents="any") -> PowerSurjectivityVerdict:
    status = PROVEN if not missing else INCONCLUSIVE
    return PowerSurjectivityVerdict(status, witnesses, missing, D, s_max, exponents)


# ---------------------------------------------------------------------------
# power reductivity of a surjection onto a cyclic module
# ---------------------------------------------------------------------------


@dataclass
class PowerReductivityResult:
    status: str
    degree: int | None
    witness: Vector | None
    witness_expression: str | None
    cokernels: dict[int, list[int]]  # degree -> cokernel of (S^d M)^G -> S^d L
    d_max: int

    def succeeded(self, d: int) -> bool:
        return self.cokernels.get(d) == [1]

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "degree": self.degree,
            "witness": self.witness_expression,
            "cokernels": {str(d): c for d, c in self.cokernels.items()},
            "d_max": self.d_max,
        }


def check_power_reductivity(
    phi: GMap,
    d_max: int = 8,
    subgroup: SubgroupTag = SubgroupTag.FullG,
    stop_at_first: bool = True,
) -> PowerReductivityResult:
    """Smallest d <= d_max with (S^d M)^H -> S^d L onto, for phi: M -> L cyclic."""
    M, L = phi.source, phi.target
    if L.rank != 1 or L.raising or L.lowering or not L.weights[0].is_zero():
        raise NotEquivariantError("target must be a cyclic module with trivial action")
    if any(f != 1 for f in cokernel_structure(phi.matrix)):
        raise NotSurjectiveError("phi is not surjective")
    phi.check(subgroup)
    cokernels: dict[int, list[int]] = {}
    found = None
    for d in range(1, d_max + 1):
        Sd = sym_power(M, d)
        inv = invariants(Sd, subgroup)
        P = sym_power_matrix(phi.matrix, d, M.modulus)
        if inv.rank:
            images = P @ inv.inclusion_matrix()
        else:
            images = IntMatrix.zeros(1, 0, M.modulus)
        cokernels[d] = cokernel_structure(images)
        if found is None:
            sol = LinearSolver(images).solve((1,)) if inv.rank else None
            if sol is not None:
                w = [0] * Sd.rank
                for c, b in zip(sol, inv.basis):
                    for i, x in enumerate(b):
                        w[i] += c * x
                n = M.modulus
                w = tuple(x % n for x in w) if n else tuple(w)
                assert P.apply(w) == (1,), "witness does not map to the generator power"
                labels = [Sd.label(i) for i in range(Sd.rank)]
                found = (d, w, format_vector(labels, w))
                if stop_at_first:
                    break
    if found is None:
        return PowerReductivityResult(INCONCLUSIVE, None, None, None, cokernels, d_max)
    return PowerReductivityResult(PROVEN, found[0], found[1], found[2], cokernels, d_max)


# ---------------------------------------------------------------------------
# lifting invariants through a quotient
# ---------------------------------------------------------------------------


class _InvariantImage:
    """Images of A^G_d in (A/J)_d, with cached solvers."""

    def __init__(self, Q: QuotientAlgebra):
        self.Q = Q
        self._cache: dict[int, tuple[list[Vector], list[Vector], LinearSolver | None]] = {}

    def get(self, d: int):
        if d not in self._cache:
            A = self.Q.parent
            inv = A.invariants(d)
            imgs = [self.Q.project(d, b) for b in inv.basis]
            solver = LinearSolver(IntMatrix.from_columns(imgs, self.Q.rank(d), self.Q.modulus)) if imgs else None
            self._cache[d] = (inv.basis, imgs, solver)
        return self._cache[d]

    def preimage(self, d: int, v: Sequence[int]) -> Vector | None:
        basis, _, solver = self.get(d)
        if not any(v):
            return (0,) * self.Q.parent.rank(d)
        if solver is None:
            return None
        c = solver.solve(v)
        if c is None:
            return None
        out = [0] * self.Q.parent.rank(d)
        for ci, b in zip(c, basis):
            for i, x in enumerate(b):
                out[i] += ci * x
        return tuple(out)

    def images(self, d: int) -> list[Vector]:
        return self.get(d)[1]


def lift_invariants(
    Q: QuotientAlgebra, max_degree: int | None = None, s_max: int = 8
) -> PowerSurjectivityVerdict:
    """For each basis invariant b of (A/J)^G find the least m with b^m lifting to A^G."""
    D = Q.truncation if max_degree is None else min(max_degree, Q.truncation)
    image = _InvariantImage(Q)
    A = Q.parent
    witnesses, missing = [], []
    for d in range(1, D + 1):
        for b in Q.invariants(d).basis:
            expr = Q.expression(d, b)
            hit = None
            for m in range(1, s_max + 1):
                if d * m > Q.truncation:
                    break
                c = Q.power(d, b, m)
                pre = image.preimage(d * m, c)
                if pre is not None:
                    assert Q.project(d * m, pre) == c
                    hit = Witness(d, expr, m, A.expression(d * m, pre))
                    break
            if hit is None:
                missing.append((d, expr))
            else:
                witnesses.append(hit)
    return _verdict(witnesses, missing, D, s_max)


@dataclass
class IntegralityWitness:
    degree: int
    element: str
    relation: MonicRelation | None
    coefficients: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "element": self.element,
            "relation_degree": None if self.relation is None else self.relation.degree,
            "coefficients": self.coefficients,
        }


def int_property_witness(
    Q: QuotientAlgebra, max_degree: int | None = None, s_max: int = 8
) -> list[IntegralityWitness]:
    """Monic relations for invariants of A/J over the image of A^G."""
    D = Q.truncation if max_degree is None else min(max_degree, Q.truncation)
    image = _InvariantImage(Q)
    out = []
    for d in range(1, D + 1):
        for b in Q.invariants(d).basis:
            rel = monic_relation(Q, d, b, image.images, s_max)
            coeffs = []
            if rel is not None:
                coeffs = [Q.expression((i + 1) * d, a) for i, a in enumerate(rel.coefficients)]
            out.append(IntegralityWitness(d, Q.expression(d, b), rel, coeffs))
    return out


def integrality_consistency(
    lift: PowerSurjectivityVerdict, relations: Sequence[IntegralityWitness]
) -> list[str]:
    """Compare lift exponents with monic-relation degrees.

    A power b^m in the image gives the relation x^m - b^m, so the relation
    degree is at most m; conversely a relation of degree k forces a lifting
    power of exponent at most k!. Returns the violated inequalities.
    """
    bad = []
    for r in relations:
        m = lift.exponent_of(r.element)
        k = None if r.relation is None else r.relation.degree
        if m is not None and (k is None or k > m):
            bad.append(f"{r.element}: lift exponent {m} but relation degree {k}")
        if k is not None and m is not None and m > factorial(k):
            bad.append(f"{r.element}: lift exponent {m} exceeds {k}!")
    return bad


# ---------------------------------------------------------------------------
# power-surjectivity of algebra maps
# ---------------------------------------------------------------------------


def default_test_set(
    T: GradedGAlgebra, max_degree: int, seed: int = 0, pair_limit: int = 32
) -> list[tuple[int, Vector]]:
    """Basis vectors in each degree plus sums of pairs of them (sampled with a fixed seed)."""
    rng = random.Random(seed)
    out = []
    for d in range(0, max_degree + 1):
        r = T.rank(d)
        out += [(d, T.basis_vector(d, i)) for i in range(r)]
        pairs = list(combinations(range(r), 2))
        if len(pairs) > pair_limit:
            pairs = sorted(rng.sample(pairs, pair_limit))
        for i, j in pairs:
            v = [0] * r
            v[i] = v[j] = 1
            out.append((d, tuple(v)))
    return out


def _allowed_exponents(s_max: int, p: int | None) -> list[int]:
    if p is None:
        return list(range(1, s_max + 1))
    out, s = [], 1
    while s <= s_max:
        out.append(s)
        s *= p
    return out


def power_surjectivity(
    f: AlgebraMap,
    test_set: Iterable[tuple[int, Sequence[int]]] | None = None,
    max_degree: int | None = None,
    s_max: int = 8,
    seed: int = 0,
    p: int | None = None,
) -> PowerSurjectivityVerdict:
    """Find, for each test element, a power in the image of f.

    Exponents are tried in increasing order (only powers of p when p is
    given), so the reported witnesses are minimal.
    """
    T = f.target
    D = f.truncation if max_degree is None else min(max_degree, f.truncation)
    elements = list(test_set) if test_set is not None else default_test_set(T, D, seed)
    exps = _allowed_exponents(s_max, p)
    witnesses, missing = [], []
    for d, c in elements:
        c = tuple(c)
        expr = T.expression(d, c)
        hit = None
        for s in exps:
            if d * s > f.truncation:
                break
            cs = T.power(d, c, s)
            pre = f.preimage(d * s, cs)
            if pre is not None:
                assert f(d * s, pre) == cs
                hit = Witness(d, expr, s, f.source.expression(d * s, pre))
                break
        if hit is None:
            missing.append((d, expr))
        else:
            witnesses.append(hit)
    label = "any" if p is None else f"powers of {p}"
    return _verdict(witnesses, missing, D, s_max, label)


def map_torsion(f: AlgebraMap, max_degree: int | None = None) -> int | None:
    """Least t with t * target contained in the image, or None if some cokernel is infinite."""
    D = f.truncation if max_degree is None else min(max_degree, f.truncation)
    factors = [x for d in range(D + 1) for x in f.cokernel(d)]
    if any(x == 0 for x in factors):
        return None
    return _fold(lcm, factors, 1)


def p_power_surjectivity(
    f: AlgebraMap,
    p: int,
    test_set: Iterable[tuple[int, Sequence[int]]] | None = None,
    max_degree: int | None = None,
    s_max: int = 8,
    seed: int = 0,
) -> PowerSurjectivityVerdict:
    """Power-surjectivity mod p with exponents restricted to powers of p.

    When f is defined over Z, the verdict also carries the torsion t of its
    cokernels; if every prime of t is p and the search succeeds, the map is
    flagged universally power-surjective within the bounds.
    """
    check_characteristic(p)
    if p == 0:
        raise ValueError("p must be a prime")
    t = map_torsion(f, max_degree) if f.target.modulus == 0 else None
    g = f if f.target.modulus == p else f.reduce(p)
    verdict = power_surjectivity(g, test_set, max_degree, s_max, seed, p=p)
    verdict.t = t
    verdict.universal = bool(t is not None and verdict.proven and set(factorint(t)) <= {p})
    return verdict


# ---------------------------------------------------------------------------
# gr A -> gr(A/pA)
# ---------------------------------------------------------------------------


def gr_reduction_map(A: GradedGAlgebra, p: int) -> AlgebraMap:
    """The height-preserving map gr A -> gr(A/pA) induced by reduction mod p."""
    check_characteristic(p)
    grA = GrosshansGradedAlgebra(A)
    grB = GrosshansGradedAlgebra(reduce_algebra(A, p))
    mats = {}
    for d in range(A.truncation + 1):
        fB = grB.filtration(d)
        cols = []
        for h, l in grA.lifts(d):
            v = tuple(x % p for x in l)
            if not fB.level(h).contains(v):
                raise AssertionError("reduction does not respect the height filtration")
            if h in fB.pieces:
                cols.append(fB.embed_class(h, fB.class_in(h, v)))
            else:
                cols.append(grB.zero(d))
        mats[d] = IntMatrix.from_columns(cols, grB.rank(d), p)
    return AlgebraMap(grA, grB, mats)


def gr_mod_p_comparison(
    A: GradedGAlgebra,
    p: int,
    max_degree: int | None = None,
    s_max: int = 8,
    seed: int = 0,
) -> PowerSurjectivityVerdict:
    f = gr_reduction_map(A, p)
    return power_surjectivity(f, None, max_degree, s_max, seed, p=p)
