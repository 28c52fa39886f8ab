"""The height filtration of a module, its associated graded, and the hull.

M_{<=i} is the largest G-submodule whose weights all have height <= i. It
is found by a closure iteration: start from the weight spaces of height
<= i and repeatedly discard vectors that some operator sends outside the
current candidate.

The hull of M is the sum over dominant lam of nabla_lam (x) W_lam, where
W_lam is the weight-lam part of the U+-invariants of M. The associated
graded embeds into it; the cokernel of this embedding measures how far M
is from having a good filtration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import UnsupportedDatumError
from .exact_linalg import IntMatrix, Sublattice, Vector, cokernel_structure, inverse, kernel_basis
from .gmodule import (
    GMap,
    GModule,
    SubgroupTag,
    WeightSubmodule,
    direct_sum,
    invariants,
    subquotient,
    tensor,
    trivial,
    zero_module,
)
from .induction import nabla
from .root_data import Weight, grosshans_height, is_dominant
from sympy import factorint


def height(M: GModule, w: Weight) -> int:
    return grosshans_height(M.datum, w)


def filtration_level(M: GModule, i: int) -> WeightSubmodule:
    """M_{<=i} as a saturated, G-stable sum of weight pieces."""
    blocks = M.weight_blocks
    pieces = {
        w: Sublattice.full(len(idx), M.modulus)
        for w, idx in blocks.items()
        if height(M, w) <= i
    }
    cand = WeightSubmodule(M, pieces)
    ops = [m for d in (M.raising, M.lowering) for m in d.values()]
    for _ in range(M.rank + 2):
        changed = False
        new = {}
        for w, idx in blocks.items():
            piece = cand.pieces[w]
            if piece.rank == 0:
                new[w] = piece
                continue
            B = piece.basis_matrix()
            full_B = IntMatrix.from_columns([cand.embed(w, b) for b in piece.basis], M.rank, M.modulus)
            conds = []
            for m in ops:
                img = m @ full_B
                for u, uidx in blocks.items():
                    sub = img.select(rows=uidx)
                    if not sub.is_zero():
                        conds.append(cand.pieces[u].equations @ sub)
            if conds:
                K = kernel_basis(IntMatrix.vstack(conds))
                if K.ncols < piece.rank:
                    changed = True
                    piece = Sublattice.span((B @ K).columns(), len(idx), M.modulus)
            new[w] = piece
        cand = WeightSubmodule(M, new)
        if not changed:
            return cand
    raise AssertionError("closure iteration did not stabilize")


@dataclass
class GradedPiece:
    degree: int
    module: GModule
    q: IntMatrix  # classes of vectors in M_{<=i}
    lifts: list[Vector]


class GrosshansFiltration:
    """All levels M_{<=i} and the graded pieces gr_i M of a module."""

    def __init__(self, M: GModule):
        self.base = M
        heights = [height(M, w) for w in M.weights]
        top = max(heights, default=-1)
        self.levels: dict[int, WeightSubmodule] = {-1: WeightSubmodule.zero(M)}
        self.pieces: dict[int, GradedPiece] = {}
        for i in range(0, top + 1):
            lev = filtration_level(M, i)
            self.levels[i] = lev
            if lev.rank > self.levels[i - 1].rank:
                Q, q, lifts = subquotient(lev, self.levels[i - 1])
                self.pieces[i] = GradedPiece(i, Q, q, lifts)
        self.top = top

    def level(self, i: int) -> WeightSubmodule:
        if i < 0:
            return self.levels[-1]
        return self.levels[min(i, self.top)] if self.top >= 0 else self.levels[-1]

    @property
    def degrees(self) -> list[int]:
        return sorted(self.pieces)

    def graded_ranks(self) -> dict[int, int]:
        return {i: p.module.rank for i, p in sorted(self.pieces.items())}

    @cached_property
    def offsets(self) -> dict[int, int]:
        out, off = {}, 0
        for i in self.degrees:
            out[i] = off
            off += self.pieces[i].module.rank
        return out

    @cached_property
    def total(self) -> GModule:
        """gr M as one module, pieces in increasing degree."""
        mods = [self.pieces[i].module for i in self.degrees]
        if not mods:
            return zero_module(self.base.modulus, self.base.datum)
        return direct_sum(*mods)

    @cached_property
    def total_heights(self) -> list[int]:
        return [i for i in self.degrees for _ in range(self.pieces[i].module.rank)]

    def filtration_degree(self, v: Sequence[int]) -> int | None:
        """Smallest i with v in M_{<=i} (None for v = 0)."""
        if not any(v):
            return None
        for i in self.degrees:
            if self.levels[i].contains(v):
                return i
        raise AssertionError("filtration does not exhaust the module")

    def class_in(self, i: int, v: Sequence[int]) -> Vector:
        """Class of v (assumed in M_{<=i}) in gr_i, as coordinates of gr_i."""
        if i not in self.pieces:
            return ()
        if not self.level(i).contains(v):
            raise ValueError(f"vector is not in filtration level {i}")
        return self.pieces[i].q.apply(v)

    def class_of(self, v: Sequence[int]) -> tuple[int | None, Vector]:
        """Leading class: (i, class in gr_i) for the smallest admissible i."""
        i = self.filtration_degree(v)
        if i is None:
            return None, ()
        return i, self.class_in(i, v)

    def embed_class(self, i: int, c: Sequence[int]) -> Vector:
        """Coordinates of a gr_i class inside the total module."""
        v = [0] * self.total.rank
        off = self.offsets[i]
        for k, x in enumerate(c):
            v[off + k] = x
        return tuple(v)


def graded(M: GModule) -> GrosshansFiltration:
    return GrosshansFiltration(M)


# ---------------------------------------------------------------------------
# hull
# ---------------------------------------------------------------------------


@dataclass
class HullSummand:
    weight: Weight
    costandard: GModule
    top_space: list[Vector]  # basis of W_lam inside the base module
    offset: int

    @property
    def multiplicity(self) -> int:
        return len(self.top_space)


@dataclass
class HullModule:
    base: GModule
    summands: list[HullSummand]
    total: GModule

    def summand(self, w: Weight) -> HullSummand | None:
        for s in self.summands:
            if s.weight == w:
                return s
        return None

    def ranks(self) -> dict[str, int]:
        return {str(s.weight): s.costandard.rank * s.multiplicity for s in self.summands}


def _require_a1(M: GModule) -> None:
    if M.datum.rank != 1:
        raise UnsupportedDatumError("the hull is implemented for A1 only")


def hull(M: GModule) -> HullModule:
    _require_a1(M)
    inv = invariants(M, SubgroupTag.UPlus)
    tops: dict[Weight, list[Vector]] = {}
    for b, w in zip(inv.basis, inv.weights):
        tops.setdefault(w, []).append(b)
    summands, mods, off = [], [], 0
    for w in sorted(tops, key=lambda u: (height(M, u), u)):
        assert is_dominant(M.datum, w), "U+-invariants only occur in dominant weights"
        N = nabla(w.coords[0], M.modulus)
        k = len(tops[w])
        summands.append(HullSummand(w, N, tops[w], off))
        mods.append(tensor(N, trivial(k, M.modulus)))
        off += N.rank * k
    total = direct_sum(*mods) if mods else zero_module(M.modulus, M.datum)
    return HullModule(M, summands, total)


@dataclass
class HullEmbedding:
    filtration: GrosshansFiltration
    hull: HullModule
    map: GMap

    def cokernel(self) -> list[int]:
        return cokernel_structure(self.map.matrix)


def hull_embedding(M: GModule, filt: GrosshansFiltration | None = None) -> HullEmbedding:
    """The injective equivariant map gr M -> hull(M).

    A vector v of weight mu in gr_i goes to x^(i-k) y^k (x) w with
    k = (i - mu)/2, where w is the class of E^(k) v read in the basis of
    W_i; this is the unique equivariant map that is the identity on the
    top weight spaces.
    """
    _require_a1(M)
    filt = filt or graded(M)
    H = hull(M)
    n = M.modulus
    grt = filt.total
    rows = [[0] * grt.rank for _ in range(H.total.rank)]
    for i in filt.degrees:
        piece = filt.pieces[i]
        lam = Weight((i,))
        s = H.summand(lam)
        if s is None:
            continue
        G = piece.module
        top_idx = G.weight_blocks.get(lam, ())
        # W_lam expressed on the top block of gr_i; invertible by construction
        T = IntMatrix.from_rows(
            [[piece.q.apply(w)[t] for w in s.top_space] for t in top_idx],
            ncols=len(s.top_space),
            modulus=n,
        )
        Tinv = inverse(T)
        k_mult = s.multiplicity
        off = filt.offsets[i]
        for col in range(G.rank):
            mu = G.weights[col].coords[0]
            k = (i - mu) // 2
            raised = G.op("E", 0, k).column(col)
            coords = Tinv.apply(tuple(raised[t] for t in top_idx))
            for j, x in enumerate(coords):
                if x:
                    rows[s.offset + k * k_mult + j][off + col] = x
    f = GMap(grt, H.total, IntMatrix.from_rows(rows, ncols=grt.rank, modulus=n))
    return HullEmbedding(filt, H, f)


@dataclass
class GoodFiltrationResult:
    good: bool
    cokernel_factors: list[int]
    inverted_primes: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "good": self.good,
            "cokernel_factors": self.cokernel_factors,
            "inverted_primes": list(self.inverted_primes),
        }


def is_unit_after_inverting(f: int, primes: Iterable[int]) -> bool:
    if f == 0:
        return False
    return all(p in set(primes) for p in factorint(f))


def has_good_filtration(M: GModule, inverted_primes: Iterable[int] = ()) -> GoodFiltrationResult:
    """Is gr M -> hull(M) an isomorphism (after inverting the given primes)?"""
    primes = tuple(sorted(set(inverted_primes)))
    factors = hull_embedding(M).cokernel()
    good = all(is_unit_after_inverting(f, primes) for f in factors)
    return GoodFiltrationResult(good, factors, primes)
