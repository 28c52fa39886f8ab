"""Weight-graded modules with divided-power operator actions.

A :class:`GModule` is a free module over Z or Z/n with a weight attached to
every basis vector and, for every simple root alpha and level k >= 1, the
matrices of the divided powers E_alpha^(k) and F_alpha^(k). Levels are
stored independently because over Z/p the operator E^(p) is not a function
of E.

Duals use the antipode: on M^# the level-k raising operator is
(-1)^k transpose(E^(k)) and the lowering one is (-1)^k transpose(F^(k)).
Weights of M^# are the negated weights of M.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import (
    DimensionError,
    NotEquivariantError,
    UnsupportedDatumError,
    UnsupportedRingError,
)
from .exact_linalg import (
    IntMatrix,
    Sublattice,
    Vector,
    kernel_basis,
    quotient_coordinates,
    submodule_structure,
)
from .root_data import A1, RootDatum, Weight

OpKey = tuple[int, int]  # (simple root index, divided-power level)


class SubgroupTag(enum.Enum):
    FullG = "G"
    Torus = "T"
    UPlus = "U+"
    UMinus = "U-"
    BorelPlus = "B+"
    BorelMinus = "B-"


def _prune(ops: Mapping[OpKey, IntMatrix]) -> dict[OpKey, IntMatrix]:
    return {k: m for k, m in sorted(ops.items()) if not m.is_zero()}


@dataclass(frozen=True, eq=False)
class GModule:
    datum: RootDatum
    modulus: int
    weights: tuple[Weight, ...]
    raising: Mapping[OpKey, IntMatrix]
    lowering: Mapping[OpKey, IntMatrix]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        r = len(self.weights)
        for ops in (self.raising, self.lowering):
            for (a, k), m in ops.items():
                if m.shape != (r, r):
                    raise DimensionError(f"operator {(a, k)} has shape {m.shape}, module rank {r}")
                if k < 1 or not 0 <= a < self.datum.rank:
                    raise ValueError(f"bad operator key {(a, k)}")
        if self.labels is not None and len(self.labels) != r:
            raise DimensionError("one label per basis vector is required")

    # -- basic data -------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.weights)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else f"e{i}"

    def op(self, kind: str, alpha: int, level: int) -> IntMatrix:
        """E (kind 'E') or F (kind 'F') at the given divided-power level."""
        if level == 0:
            return IntMatrix.identity(self.rank, self.modulus)
        ops = self.raising if kind == "E" else self.lowering
        m = ops.get((alpha, level))
        return m if m is not None else IntMatrix.zeros(self.rank, self.rank, self.modulus)

    def has_op(self, kind: str, alpha: int, level: int) -> bool:
        return (alpha, level) in (self.raising if kind == "E" else self.lowering)

    @cached_property
    def weight_blocks(self) -> dict[Weight, tuple[int, ...]]:
        """Basis indices grouped by weight, highest weight first."""
        blocks: dict[Weight, list[int]] = {}
        for i, w in enumerate(self.weights):
            blocks.setdefault(w, []).append(i)
        return {w: tuple(blocks[w]) for w in sorted(blocks, reverse=True)}

    @cached_property
    def nilpotency_bound(self) -> tuple[int, ...]:
        """Per simple root, an N with E^(k) = F^(k) = 0 for all k >= N."""
        out = []
        for a in range(self.datum.rank):
            pairings = [w.coords[a] for w in self.weights]
            spread = max(pairings) - min(pairings) if pairings else 0
            out.append(1 + spread // 2)
        return tuple(out)

    def character(self) -> Counter:
        return Counter(self.weights)

    def with_labels(self, labels: Sequence[str]) -> GModule:
        return GModule(self.datum, self.modulus, self.weights, self.raising, self.lowering, tuple(labels))

    def reduce(self, n: int) -> GModule:
        return base_change(self, n)

    def __repr__(self) -> str:
        ring = f"Z/{self.modulus}" if self.modulus else "Z"
        return f"GModule({self.datum.label}, {ring}, rank={self.rank})"

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        def triples(m: IntMatrix):
            return [[i, j, x] for i, r in enumerate(m.rows) for j, x in enumerate(r) if x]

        def ops(d):
            return [{"root": a, "level": k, "entries": triples(m)} for (a, k), m in sorted(d.items())]

        out = {
            "ring": f"Z/{self.modulus}" if self.modulus else "Z",
            "weights": [list(w.coords) for w in self.weights],
            "raising": ops(self.raising),
            "lowering": ops(self.lowering),
        }
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_dict(cls, data: Mapping, datum: RootDatum = A1) -> GModule:
        ring = data.get("ring", "Z")
        modulus = 0 if ring == "Z" else int(ring.split("/")[1])
        weights = tuple(
            Weight(tuple(w) if isinstance(w, (list, tuple)) else (w,)) for w in data["weights"]
        )
        r = len(weights)

        def ops(entries):
            out = {}
            for e in entries:
                rows = [[0] * r for _ in range(r)]
                for i, j, x in e["entries"]:
                    rows[i][j] += x
                out[(e["root"], e["level"])] = IntMatrix.from_rows(rows, ncols=r, modulus=modulus)
            return _prune(out)

        labels = tuple(data["labels"]) if "labels" in data else None
        return cls(datum, modulus, weights, ops(data.get("raising", [])), ops(data.get("lowering", [])), labels)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass
class Violation:
    identity: str
    detail: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    checks: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, identity: str, detail: str) -> None:
        self.violations.append(Violation(identity, detail))

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": self.checks,
            "violations": [{"identity": v.identity, "detail": v.detail} for v in self.violations],
        }


def _first_diff(a: IntMatrix, b: IntMatrix) -> str:
    for i, (r, s) in enumerate(zip(a.rows, b.rows)):
        for j, (x, y) in enumerate(zip(r, s)):
            if x != y:
                return f"entry ({i},{j}): {x} != {y}"
    return "shapes differ"


def validate(M: GModule) -> ValidationReport:
    """Check the defining identities of the operator data."""
    rep = ValidationReport()
    d = M.datum
    n = M.modulus
    bounds = M.nilpotency_bound
    for kind, sign in (("E", 1), ("F", -1)):
        ops = M.raising if kind == "E" else M.lowering
        for (a, k), m in ops.items():
            shift = d.simple_root(a) * (sign * k)
            rep.checks += 1
            for i, row in enumerate(m.rows):
                for j, x in enumerate(row):
                    if x and M.weights[i] != M.weights[j] + shift:
                        rep.add(
                            "weight shift",
                            f"{kind}_{a}^({k}) sends basis {j} (weight {M.weights[j]}) "
                            f"to basis {i} (weight {M.weights[i]})",
                        )
                        break
            if k >= bounds[a]:
                rep.checks += 1
                rep.add("nilpotency", f"{kind}_{a}^({k}) is nonzero beyond bound {bounds[a]}")
        for a in range(d.rank):
            top = bounds[a]
            for i in range(1, top):
                for j in range(1, top - i + 1):
                    rep.checks += 1
                    lhs = M.op(kind, a, i) @ M.op(kind, a, j)
                    rhs = M.op(kind, a, i + j).scale(comb(i + j, i))
                    if lhs != rhs:
                        rep.add(
                            "divided-power composition",
                            f"{kind}_{a}^({i}) {kind}_{a}^({j}) != C({i + j},{i}) "
                            f"{kind}_{a}^({i + j}): {_first_diff(lhs, rhs)}",
                        )
    for a in range(d.rank):
        E, F = M.op("E", a, 1), M.op("F", a, 1)
        for b in range(d.rank):
            rep.checks += 1
            Fb = M.op("F", b, 1)
            lhs = E @ Fb - Fb @ E
            if a == b:
                diag = [w.coords[a] for w in M.weights]
                rhs = IntMatrix.diagonal(diag, n) if M.rank else lhs
            else:
                rhs = IntMatrix.zeros(M.rank, M.rank, n)
            if lhs != rhs:
                rep.add("sl2 commutation", f"[E_{a}, F_{b}] mismatch: {_first_diff(lhs, rhs)}")
    return rep


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def _require_a1(datum: RootDatum) -> None:
    if datum.rank != 1:
        raise UnsupportedDatumError(f"only type A1 is supported here, got {datum.label}")


def _mat(rows, modulus: int) -> IntMatrix:
    return IntMatrix.from_rows(rows, ncols=len(rows), modulus=modulus)


def trivial(k: int, modulus: int = 0, datum: RootDatum = A1) -> GModule:
    return GModule(datum, modulus, (datum.zero(),) * k, {}, {})


def zero_module(modulus: int = 0, datum: RootDatum = A1) -> GModule:
    return trivial(0, modulus, datum)


def standard_rep(modulus: int = 0, datum: RootDatum = A1) -> GModule:
    """Basis v+ (weight 1, label x) and v- (weight -1, label y)."""
    _require_a1(datum)
    E = _mat([[0, 1], [0, 0]], modulus)
    F = _mat([[0, 0], [1, 0]], modulus)
    return GModule(datum, modulus, (Weight((1,)), Weight((-1,))), {(0, 1): E}, {(0, 1): F}, ("x", "y"))


def adjoint_sl2(modulus: int = 0) -> GModule:
    """sl2 under the adjoint action, basis X, H, Y of weights 2, 0, -2.

    E acts as ad X and F as ad Y: E Y = H, E H = -2X, F X = -H, F H = 2Y.
    """
    raising = {
        (0, 1): _mat([[0, -2, 0], [0, 0, 1], [0, 0, 0]], modulus),
        (0, 2): _mat([[0, 0, -1], [0, 0, 0], [0, 0, 0]], modulus),
    }
    lowering = {
        (0, 1): _mat([[0, 0, 0], [-1, 0, 0], [0, 2, 0]], modulus),
        (0, 2): _mat([[0, 0, 0], [0, 0, 0], [-1, 0, 0]], modulus),
    }
    w = (Weight((2,)), Weight((0,)), Weight((-2,)))
    return GModule(A1, modulus, w, _prune(raising), _prune(lowering), ("X", "H", "Y"))


def base_change(M: GModule, n: int) -> GModule:
    """Reduce every operator mod n (base change to Z/n)."""
    if M.modulus and M.modulus % n:
        raise UnsupportedRingError(f"cannot base change Z/{M.modulus} to Z/{n}")
    ops = lambda d: _prune({k: m.reduce(n) for k, m in d.items()})
    return GModule(M.datum, n, M.weights, ops(M.raising), ops(M.lowering), M.labels)


def dual(M: GModule) -> GModule:
    def flip(d):
        return _prune({(a, k): m.transpose().scale((-1) ** k) for (a, k), m in d.items()})

    labels = tuple(f"{l}*" for l in M.labels) if M.labels is not None else None
    return GModule(M.datum, M.modulus, tuple(-w for w in M.weights), flip(M.raising), flip(M.lowering), labels)


def _check_compatible(M: GModule, N: GModule) -> None:
    if M.datum != N.datum:
        raise UnsupportedDatumError("modules over different root data")
    if M.modulus != N.modulus:
        raise UnsupportedRingError(f"ring mismatch: {M.modulus} vs {N.modulus}")


def tensor(M: GModule, N: GModule) -> GModule:
    """M (x) N with basis index i * rank(N) + j, acting through the coproduct."""
    _check_compatible(M, N)
    weights = tuple(u + v for u in M.weights for v in N.weights)
    ops: dict[str, dict[OpKey, IntMatrix]] = {"E": {}, "F": {}}
    for kind in ("E", "F"):
        for a in range(M.datum.rank):
            bm, bn = M.nilpotency_bound[a], N.nilpotency_bound[a]
            for k in range(1, bm + bn - 1):
                acc = None
                for i in range(max(0, k - bn + 1), min(k, bm - 1) + 1):
                    if i and not M.has_op(kind, a, i) or (k - i) and not N.has_op(kind, a, k - i):
                        continue
                    term = IntMatrix.kron(M.op(kind, a, i), N.op(kind, a, k - i))
                    acc = term if acc is None else acc + term
                if acc is not None:
                    ops[kind][(a, k)] = acc
    labels = None
    if M.labels is not None and N.labels is not None:
        labels = tuple(f"{l}⊗{m}" for l in M.labels for m in N.labels)
    return GModule(M.datum, M.modulus, weights, _prune(ops["E"]), _prune(ops["F"]), labels)


def direct_sum(*mods: GModule) -> GModule:
    if not mods:
        raise ValueError("direct_sum needs at least one summand")
    for m in mods[1:]:
        _check_compatible(mods[0], m)
    n = mods[0].modulus
    total = sum(m.rank for m in mods)
    offsets = [0]
    for m in mods:
        offsets.append(offsets[-1] + m.rank)
    keys = {k for m in mods for k in (*m.raising, *m.lowering)}
    ops: dict[str, dict[OpKey, IntMatrix]] = {"E": {}, "F": {}}
    for kind in ("E", "F"):
        for key in sorted(keys):
            rows = [[0] * total for _ in range(total)]
            for m, off in zip(mods, offsets):
                src = m.raising if kind == "E" else m.lowering
                if key in src:
                    for i, r in enumerate(src[key].rows):
                        for j, x in enumerate(r):
                            rows[off + i][off + j] = x
            ops[kind][key] = IntMatrix.from_rows(rows, ncols=total, modulus=n)
    labels = None
    if all(m.labels is not None for m in mods):
        labels = tuple(l for m in mods for l in m.labels)
    weights = tuple(w for m in mods for w in m.weights)
    return GModule(mods[0].datum, n, weights, _prune(ops["E"]), _prune(ops["F"]), labels)


# -- symmetric powers --------------------------------------------------------

Monomial = tuple[int, ...]  # sorted tuple of basis indices


def monomial_basis(rank: int, d: int) -> list[Monomial]:
    return list(combinations_with_replacement(range(rank), d))


def _merge(a: Monomial, b: Monomial) -> Monomial:
    return tuple(sorted(a + b))


def _poly_mul(p: dict, q: dict, n: int) -> dict:
    out: dict = {}
    for ma, ca in p.items():
        for mb, cb in q.items():
            m = _merge(ma, mb)
            out[m] = out.get(m, 0) + ca * cb
    if n:
        out = {m: c % n for m, c in out.items()}
    return {m: c for m, c in out.items() if c}


def monomial_label(labels: Sequence[str], mono: Monomial) -> str:
    if not mono:
        return "1"
    parts = []
    for i in sorted(set(mono)):
        e = mono.count(i)
        parts.append(labels[i] if e == 1 else f"{labels[i]}^{e}")
    return "*".join(parts)


def sym_power(M: GModule, d: int) -> GModule:
    """S^d M on the monomial basis, in lexicographic order of index tuples."""
    if d < 0:
        raise ValueError("symmetric power degree must be >= 0")
    basis = monomial_basis(M.rank, d)
    index = {m: i for i, m in enumerate(basis)}
    n = M.modulus
    weights = tuple(
        sum((M.weights[i] for i in mono), M.datum.zero()) for mono in basis
    )
    ops: dict[str, dict[OpKey, IntMatrix]] = {"E": {}, "F": {}}
    size = len(basis)
    for kind in ("E", "F"):
        for a in range(M.datum.rank):
            top = max(0, (M.nilpotency_bound[a] - 1) * d)
            # action series of a single basis vector: level -> polynomial
            single = []
            for j in range(M.rank):
                s = {0: {(j,): 1}}
                for k in range(1, M.nilpotency_bound[a]):
                    col = M.op(kind, a, k).column(j)
                    poly = {(i,): x for i, x in enumerate(col) if x}
                    if poly:
                        s[k] = poly
                single.append(s)
            mats = {k: [[0] * size for _ in range(size)] for k in range(1, top + 1)}
            for col_idx, mono in enumerate(basis):
                series = {0: {(): 1}}
                for j in mono:
                    new: dict[int, dict] = {}
                    for k1, p in series.items():
                        for k2, q in single[j].items():
                            prod = _poly_mul(p, q, n)
                            if not prod:
                                continue
                            acc = new.setdefault(k1 + k2, {})
                            for m, c in prod.items():
                                acc[m] = acc.get(m, 0) + c
                    series = new
                for k, poly in series.items():
                    if k == 0:
                        continue
                    rows = mats[k]
                    for m, c in poly.items():
                        rows[index[m]][col_idx] += c
            for k, rows in mats.items():
                ops[kind][(a, k)] = IntMatrix.from_rows(rows, ncols=size, modulus=n)
    labels = None
    if M.labels is not None:
        labels = tuple(monomial_label(M.labels, m) for m in basis)
    return GModule(M.datum, n, weights, _prune(ops["E"]), _prune(ops["F"]), labels)


# ---------------------------------------------------------------------------
# T-stable submodules and subquotients
# ---------------------------------------------------------------------------


class WeightSubmodule:
    """A T-stable direct summand of a GModule, stored weight block by block.

    ``pieces[mu]`` is a :class:`Sublattice` in the coordinates of the
    weight-mu block of the ambient module.
    """

    def __init__(self, module: GModule, pieces: Mapping[Weight, Sublattice]):
        self.module = module
        blocks = module.weight_blocks
        self.pieces = {
            w: pieces[w] if w in pieces else Sublattice.zero(len(idx), module.modulus)
            for w, idx in blocks.items()
        }

    @classmethod
    def full(cls, M: GModule) -> WeightSubmodule:
        return cls(M, {w: Sublattice.full(len(idx), M.modulus) for w, idx in M.weight_blocks.items()})

    @classmethod
    def zero(cls, M: GModule) -> WeightSubmodule:
        return cls(M, {})

    @classmethod
    def span(cls, M: GModule, vectors: Iterable[Sequence[int]]) -> WeightSubmodule:
        """Saturated span of the weight components of ``vectors``."""
        comps: dict[Weight, list] = {w: [] for w in M.weight_blocks}
        for v in vectors:
            for w, idx in M.weight_blocks.items():
                part = tuple(v[i] for i in idx)
                if any(part):
                    comps[w].append(part)
        return cls(
            M,
            {w: Sublattice.span(g, len(M.weight_blocks[w]), M.modulus) for w, g in comps.items()},
        )

    @property
    def rank(self) -> int:
        return sum(p.rank for p in self.pieces.values())

    def embed(self, w: Weight, local: Sequence[int]) -> Vector:
        v = [0] * self.module.rank
        for i, x in zip(self.module.weight_blocks[w], local):
            v[i] = x
        return tuple(v)

    def basis(self) -> list[Vector]:
        return [self.embed(w, b) for w, p in self.pieces.items() for b in p.basis]

    def basis_weights(self) -> list[Weight]:
        return [w for w, p in self.pieces.items() for _ in p.basis]

    def contains(self, v: Sequence[int]) -> bool:
        for w, idx in self.module.weight_blocks.items():
            if not self.pieces[w].contains(tuple(v[i] for i in idx)):
                return False
        return True

    def __le__(self, other: WeightSubmodule) -> bool:
        return all(other.contains(b) for b in self.basis())

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightSubmodule) and self <= other and other <= self

    def is_g_stable(self) -> bool:
        M = self.module
        mats = [m for d in (M.raising, M.lowering) for m in d.values()]
        return all(self.contains(m.apply(b)) for b in self.basis() for m in mats)


def subquotient(big: WeightSubmodule, small: WeightSubmodule) -> tuple[GModule, IntMatrix, list[Vector]]:
    """The GModule big/small for G-stable direct summands small <= big.

    Returns ``(Q, q, lifts)`` where ``q`` (rank Q x rank M) sends a vector of
    ``big`` to its class and ``lifts[j]`` is a weight vector of ``big``
    representing the j-th basis vector of Q.
    """
    M = big.module
    n = M.modulus
    q_rows: list[list[int]] = []
    lifts: list[Vector] = []
    weights: list[Weight] = []
    for w, idx in M.weight_blocks.items():
        qw, lw = quotient_coordinates(big.pieces[w], small.pieces[w])
        for row in qw.rows:
            full = [0] * M.rank
            for i, x in zip(idx, row):
                full[i] = x
            q_rows.append(full)
        for l in lw:
            lifts.append(big.embed(w, l))
            weights.append(w)
    q = IntMatrix.from_rows(q_rows, ncols=M.rank, modulus=n)
    L = IntMatrix.from_columns(lifts, M.rank, n)
    ops: dict[str, dict[OpKey, IntMatrix]] = {"E": {}, "F": {}}
    for kind, src in (("E", M.raising), ("F", M.lowering)):
        for key, m in src.items():
            img = m @ L
            for col in img.columns():
                if not big.contains(col):
                    raise NotEquivariantError("outer submodule is not G-stable")
            ops[kind][key] = q @ img
    Q = GModule(M.datum, n, tuple(weights), _prune(ops["E"]), _prune(ops["F"]))
    return Q, q, lifts


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


def _conditions(tag: SubgroupTag) -> tuple[bool, bool, bool]:
    """(weight zero only, killed by E, killed by F)."""
    return {
        SubgroupTag.FullG: (True, True, True),
        SubgroupTag.Torus: (True, False, False),
        SubgroupTag.UPlus: (False, True, False),
        SubgroupTag.UMinus: (False, False, True),
        SubgroupTag.BorelPlus: (True, True, False),
        SubgroupTag.BorelMinus: (True, False, True),
    }[tag]


@dataclass
class InvariantSpace:
    module: GModule
    subgroup: SubgroupTag
    basis: list[Vector]
    weights: list[Weight]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def inclusion_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.basis, self.module.rank, self.module.modulus)

    def structure(self) -> list[int]:
        """Abelian-group structure of the invariant submodule."""
        return submodule_structure(self.inclusion_matrix())

    def character(self) -> Counter:
        return Counter(self.weights)

    def weight_space(self, w: Weight) -> list[Vector]:
        return [b for b, u in zip(self.basis, self.weights) if u == w]

    def as_module(self) -> GModule:
        """The invariants as a trivial G-module (only for FullG)."""
        if self.subgroup is not SubgroupTag.FullG:
            raise ValueError("only G-invariants form a trivial G-module")
        return trivial(self.rank, self.module.modulus, self.module.datum)

    def inclusion(self) -> GMap:
        return GMap(self.as_module(), self.module, self.inclusion_matrix())

    def to_submodule(self) -> WeightSubmodule:
        return WeightSubmodule.span(self.module, self.basis)


def invariants(M: GModule, h: SubgroupTag = SubgroupTag.FullG) -> InvariantSpace:
    """Vectors fixed by the subgroup h, weight block by weight block.

    Over Z the result is a basis of a saturated sublattice. Over Z/n it is a
    generating set of the invariant submodule (a basis when n is prime).
    """
    zero_only, by_e, by_f = _conditions(h)
    mats = []
    if by_e:
        mats += list(M.raising.values())
    if by_f:
        mats += list(M.lowering.values())
    basis, weights = [], []
    for w, idx in M.weight_blocks.items():
        if zero_only and not w.is_zero():
            continue
        if mats:
            stacked = IntMatrix.vstack([m.select(cols=idx) for m in mats])
            nz = [i for i, r in enumerate(stacked.rows) if any(r)]
            stacked = stacked.select(rows=nz)
            K = kernel_basis(stacked)
            local = K.columns()
        else:
            local = [tuple(int(i == j) for j in range(len(idx))) for i in range(len(idx))]
        for v in local:
            full = [0] * M.rank
            for i, x in zip(idx, v):
                full[i] = x
            basis.append(tuple(full))
            weights.append(w)
    return InvariantSpace(M, h, basis, weights)


# ---------------------------------------------------------------------------
# equivariant maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GMap:
    source: GModule
    target: GModule
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.rank, self.source.rank):
            raise DimensionError(
                f"map matrix {self.matrix.shape} does not fit {self.source.rank} -> {self.target.rank}"
            )

    def __call__(self, v: Sequence[int]) -> Vector:
        return self.matrix.apply(v)

    def compose(self, other: GMap) -> GMap:
        """self after other."""
        return GMap(other.source, self.target, self.matrix @ other.matrix)

    def failures(self, h: SubgroupTag = SubgroupTag.FullG) -> list[str]:
        S, T = self.source, self.target
        out = []
        with_torus, by_e, by_f = _conditions(h)
        if with_torus:
            for j, r in enumerate(self.matrix.columns()):
                for i, x in enumerate(r):
                    if x and S.weights[j] != T.weights[i]:
                        out.append(f"basis {j} of weight {S.weights[j]} hits weight {T.weights[i]}")
        kinds = (["E"] if by_e else []) + (["F"] if by_f else [])
        for kind in kinds:
            for a in range(S.datum.rank):
                top = max(S.nilpotency_bound[a], T.nilpotency_bound[a])
                for k in range(1, top):
                    lhs = self.matrix @ S.op(kind, a, k)
                    rhs = T.op(kind, a, k) @ self.matrix
                    if lhs != rhs:
                        out.append(f"does not commute with {kind}_{a}^({k}): {_first_diff(lhs, rhs)}")
        return out

    def is_equivariant(self, h: SubgroupTag = SubgroupTag.FullG) -> bool:
        return not self.failures(h)

    def check(self, h: SubgroupTag = SubgroupTag.FullG) -> GMap:
        bad = self.failures(h)
        if bad:
            raise NotEquivariantError("; ".join(bad[:3]))
        return self

    def reduce(self, n: int) -> GMap:
        return GMap(base_change(self.source, n), base_change(self.target, n), self.matrix.reduce(n))


def identity_map(M: GModule) -> GMap:
    return GMap(M, M, IntMatrix.identity(M.rank, M.modulus))


def tensor_map(f: GMap, g: GMap) -> GMap:
    return GMap(tensor(f.source, g.source), tensor(f.target, g.target), IntMatrix.kron(f.matrix, g.matrix))


def sym_power_matrix(f: IntMatrix, d: int, modulus: int = 0) -> IntMatrix:
    """Matrix of S^d f on monomial bases, for f given as a matrix."""
    src = monomial_basis(f.ncols, d)
    tgt = monomial_basis(f.nrows, d)
    index = {m: i for i, m in enumerate(tgt)}
    n = modulus or f.modulus
    cols = [{(i,): x for i, x in enumerate(f.column(j)) if x} for j in range(f.ncols)]
    rows = [[0] * len(src) for _ in tgt]
    for c, mono in enumerate(src):
        poly = {(): 1}
        for j in mono:
            poly = _poly_mul(poly, cols[j], n)
        for m, x in poly.items():
            rows[index[m]][c] += x
    return IntMatrix.from_rows(rows, ncols=len(src), modulus=n)


def sym_power_map(f: GMap, d: int) -> GMap:
    return GMap(sym_power(f.source, d), sym_power(f.target, d), sym_power_matrix(f.matrix, d, f.target.modulus))


def hom_g(M: GModule, N: GModule) -> list[GMap]:
    """A basis of the equivariant maps M -> N (as invariants of M^# (x) N)."""
    _check_compatible(M, N)
    inv = invariants(tensor(dual(M), N), SubgroupTag.FullG)
    rn = N.rank
    maps = []
    for w in inv.basis:
        rows = [[w[i * rn + j] for i in range(M.rank)] for j in range(rn)]
        maps.append(GMap(M, N, IntMatrix.from_rows(rows, ncols=M.rank, modulus=M.modulus)))
    return maps
