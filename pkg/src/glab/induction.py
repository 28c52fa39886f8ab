"""Costandard and standard modules for SL2, and the maps between them.

For a dominant weight m the costandard module is modelled as S^m of the
standard representation, with basis x^(m-k) y^k at index k (so index 0 is
the highest weight vector). The standard module is its dual, placed inside
it by the unique equivariant map that is the identity on the top line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import NotDominantError, NotHighestWeightError, UnsupportedDatumError
from .exact_linalg import IntMatrix, cokernel_structure, image_membership, kernel_basis, submodule_structure
from .gmodule import (
    GMap,
    GModule,
    SubgroupTag,
    base_change,
    dual,
    hom_g,
    invariants,
    standard_rep,
    sym_power,
    tensor,
    trivial,
    zero_module,
)
from .root_data import A1, Weight, steinberg_weight

WeightLike = Union[int, Weight]


def _m(lam: WeightLike) -> int:
    if isinstance(lam, Weight):
        if len(lam) != 1:
            raise UnsupportedDatumError("induction is implemented for A1 only")
        return lam.coords[0]
    return int(lam)


@dataclass(frozen=True, eq=False)
class CostandardModule:
    underlying: GModule
    highest_weight: Weight
    highest_vector_index: int | None  # None for the zero module


@dataclass(frozen=True, eq=False)
class StandardModule:
    underlying: GModule
    highest_weight: Weight
    embedding: GMap  # into the costandard module of the same weight

    @property
    def highest_vector_index(self) -> int:
        # dual basis vector of y^m
        return self.underlying.rank - 1


def costandard(lam: WeightLike, modulus: int = 0) -> CostandardModule:
    m = _m(lam)
    if m < 0:
        return CostandardModule(zero_module(modulus), Weight((m,)), None)
    return CostandardModule(sym_power(standard_rep(modulus), m), Weight((m,)), 0)


def nabla(m: int, modulus: int = 0) -> GModule:
    return costandard(m, modulus).underlying


def standard_module(lam: WeightLike, modulus: int = 0) -> StandardModule:
    m = _m(lam)
    if m < 0:
        raise NotDominantError(f"weight {m} is not dominant")
    N = nabla(m)
    D = dual(N)
    maps = hom_g(D, N)
    assert len(maps) == 1, "equivariant maps from the dual should form a rank-1 lattice"
    f = maps[0].matrix
    top = f[0, m]
    assert abs(top) == 1, "the equivariant map is primitive on the top line"
    emb = GMap(D, N, f.scale(top))
    if modulus:
        emb = emb.reduce(modulus)
    return StandardModule(emb.source, Weight((m,)), emb)


def delta(m: int, modulus: int = 0) -> GModule:
    return standard_module(m, modulus).underlying


def steinberg(r: int, p: int, modulus: int = 0) -> CostandardModule:
    """St_r = nabla of the Steinberg weight."""
    return costandard(steinberg_weight(A1, r, p), modulus)


@dataclass(frozen=True, eq=False)
class WeightProjection:
    """A T-equivariant map from a module onto one of its weight spaces."""

    source: GModule
    weight: Weight
    matrix: IntMatrix

    def __call__(self, v):
        return self.matrix.apply(v)


def evaluation_map(lam: WeightLike, modulus: int = 0) -> WeightProjection:
    """Projection of the costandard module onto its highest weight line."""
    m = _m(lam)
    if m < 0:
        raise NotDominantError(f"weight {m} is not dominant")
    N = nabla(m, modulus)
    row = [1] + [0] * m
    return WeightProjection(N, Weight((m,)), IntMatrix.from_rows([row], ncols=m + 1, modulus=modulus))


def cartan_multiply(a: WeightLike, b: WeightLike, modulus: int = 0) -> GMap:
    """Polynomial multiplication nabla_a (x) nabla_b -> nabla_(a+b)."""
    ma, mb = _m(a), _m(b)
    if ma < 0 or mb < 0:
        raise NotDominantError("Cartan multiplication needs dominant weights")
    src = tensor(nabla(ma, modulus), nabla(mb, modulus))
    tgt = nabla(ma + mb, modulus)
    rows = [[0] * src.rank for _ in range(tgt.rank)]
    for i in range(ma + 1):
        for j in range(mb + 1):
            rows[i + j][i * (mb + 1) + j] = 1
    return GMap(src, tgt, IntMatrix.from_rows(rows, ncols=src.rank, modulus=modulus))


# ---------------------------------------------------------------------------
# universal property of Weyl modules
# ---------------------------------------------------------------------------


def _is_maximal(M: GModule, m: int) -> bool:
    return not any(w.coords[0] > m and (w.coords[0] - m) % 2 == 0 for w in M.weights)


def top_invariants(M: GModule, lam: WeightLike) -> list[tuple[int, ...]]:
    """Basis of the weight-lam part of the U+-invariants of M."""
    w = Weight((_m(lam),))
    return invariants(M, SubgroupTag.UPlus).weight_space(w)


@dataclass
class WeylMapResult:
    weight: Weight
    map: GMap
    kernel_weights: list[Weight]
    cokernel_weights: list[Weight]

    @property
    def kernel_below(self) -> bool:
        """Every weight of the kernel is strictly below the highest weight."""
        return all(w < self.weight for w in self.kernel_weights)

    @property
    def top_not_in_cokernel(self) -> bool:
        return self.weight not in self.cokernel_weights

    def to_dict(self) -> dict:
        return {
            "weight": str(self.weight),
            "kernel_weights": [str(w) for w in self.kernel_weights],
            "cokernel_weights": [str(w) for w in self.cokernel_weights],
        }


def universal_weyl_map(lam: WeightLike, M: GModule) -> WeylMapResult:
    """The map Delta_lam (x) W -> M with W the weight-lam U+-invariants of M.

    On delta (x) w the map is the unique equivariant map Delta_lam -> M
    sending the top vector to w.
    """
    m = _m(lam)
    if m < 0:
        raise NotDominantError(f"weight {m} is not dominant")
    if not _is_maximal(M, m):
        raise NotHighestWeightError(f"weight {m} is not a maximal weight of the module")
    W = top_invariants(M, m)
    if not W:
        raise NotHighestWeightError(f"no U+-invariants of weight {m}")
    n = M.modulus
    D = delta(m, n)
    top = D.rank - 1
    maps = hom_g(D, M)
    # coordinates of f_i(top) in the basis W
    idx = M.weight_blocks[Weight((m,))]
    Wmat = IntMatrix.from_columns([tuple(w[i] for i in idx) for w in W], len(idx), n)
    ev_cols = []
    for f in maps:
        img = f.matrix.column(top)
        c = image_membership(Wmat, tuple(img[i] for i in idx))
        assert c is not None, "top vector must land in the U+-invariants"
        ev_cols.append(c)
    Ev = IntMatrix.from_columns(ev_cols, len(W), n)
    assert kernel_basis(Ev).ncols == 0, "an equivariant map is determined by the top vector"
    k = len(W)
    src = tensor(D, trivial(k, n))
    rows = [[0] * src.rank for _ in range(M.rank)]
    for j in range(k):
        e = tuple(int(i == j) for i in range(k))
        c = image_membership(Ev, e)
        assert c is not None, "evaluation at the top vector must be onto the invariants"
        g = None
        for ci, f in zip(c, maps):
            if ci:
                g = f.matrix.scale(ci) if g is None else g + f.matrix.scale(ci)
        for i in range(M.rank):
            for s in range(D.rank):
                rows[i][s * k + j] = g[i, s]
    U = GMap(src, M, IntMatrix.from_rows(rows, ncols=src.rank, modulus=n))
    kernel_weights = sorted({src.weights[next(i for i, x in enumerate(v) if x)] for v in _kernel_vectors(U)})
    coker = []
    for w, tidx in M.weight_blocks.items():
        sidx = src.weight_blocks.get(w, ())
        block = U.matrix.select(rows=tidx, cols=sidx) if sidx else IntMatrix.zeros(len(tidx), 0, n)
        if any(f != 1 for f in cokernel_structure(block)):
            coker.append(w)
    return WeylMapResult(Weight((m,)), U, kernel_weights, sorted(coker))


def _kernel_vectors(f: GMap) -> list[tuple[int, ...]]:
    out = []
    S = f.source
    for w, idx in S.weight_blocks.items():
        K = kernel_basis(f.matrix.select(cols=idx))
        for v in K.columns():
            full = [0] * S.rank
            for i, x in zip(idx, v):
                full[i] = x
            out.append(tuple(full))
    return out


def hom_group_comparison(lam: WeightLike, M: GModule) -> tuple[list[int], list[int]]:
    """Group structures of Hom_G(Delta_lam, M) and of (M^{U+})_lam."""
    m = _m(lam)
    if m < 0:
        raise NotDominantError(f"weight {m} is not dominant")
    n = M.modulus
    D = delta(m, n)
    homs = hom_g(D, M)
    if homs:
        vecs = [tuple(x for r in f.matrix.rows for x in r) for f in homs]
        left = submodule_structure(IntMatrix.from_columns(vecs, len(vecs[0]), n))
    else:
        left = []
    W = top_invariants(M, m)
    right = submodule_structure(IntMatrix.from_columns(W, M.rank, n)) if W else []
    return left, right
