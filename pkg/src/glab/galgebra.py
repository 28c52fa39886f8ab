"""Degree-truncated graded commutative algebras with a G-action.

Every algebra exposes its degree-d piece as a GModule (``module(d)``) and a
bilinear product on coordinate vectors (``multiply``). Products whose
degree exceeds the truncation raise :class:`TruncationError`; nothing is
ever silently dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce as _fold
from math import lcm
from typing import Callable, Iterable, Sequence

from .errors import DimensionError, NonFreeQuotientError, NotDominantError, TruncationError
from .exact_linalg import (
    IntMatrix,
    LinearSolver,
    Sublattice,
    Vector,
    _diagonalize,
    cokernel_structure,
    hermite_rows,
    image_membership,
    is_surjective,
)
from .gmodule import (
    GMap,
    GModule,
    SubgroupTag,
    base_change,
    invariants,
    monomial_basis,
    sym_power,
    tensor,
    trivial,
    zero_module,
)
from .grosshans import GrosshansFiltration, HullModule, graded, hull, hull_embedding
from .induction import cartan_multiply, nabla, standard_module
from .root_data import A1, Weight


def _add(u: Sequence[int], v: Sequence[int], n: int) -> Vector:
    return tuple((a + b) % n if n else a + b for a, b in zip(u, v))


def _scale(c: int, v: Sequence[int], n: int) -> Vector:
    return tuple((c * a) % n if n else c * a for a in v)


def format_vector(labels: Sequence[str], v: Sequence[int]) -> str:
    """Render a coordinate vector as a linear combination of labels."""
    terms = []
    for lab, c in zip(labels, v):
        if not c:
            continue
        if lab == "1":
            body = str(abs(c))
        elif abs(c) == 1:
            body = lab
        else:
            body = f"{abs(c)}*{lab}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


class GradedGAlgebra:
    """Base class: subclasses implement ``_build_module`` and ``basis_product``."""

    def __init__(self, truncation: int, modulus: int, datum=A1):
        if truncation < 0:
            raise ValueError("truncation must be >= 0")
        self.truncation = truncation
        self.modulus = modulus
        self.datum = datum
        self._modules: dict[int, GModule] = {}
        self._products: dict[tuple[int, int, int, int], dict[int, int]] = {}

    # -- subclass hooks ---------------------------------------------------
    def _build_module(self, d: int) -> GModule:
        raise NotImplementedError

    def _basis_product(self, d: int, i: int, e: int, j: int) -> dict[int, int]:
        raise NotImplementedError

    def labels(self, d: int) -> list[str]:
        M = self.module(d)
        return [M.label(i) for i in range(M.rank)]

    # -- public API -------------------------------------------------------
    def _check_degree(self, d: int) -> None:
        if d < 0 or d > self.truncation:
            raise TruncationError(f"degree {d} is outside the truncation 0..{self.truncation}")

    def module(self, d: int) -> GModule:
        self._check_degree(d)
        if d not in self._modules:
            self._modules[d] = self._build_module(d)
        return self._modules[d]

    def rank(self, d: int) -> int:
        return self.module(d).rank

    def basis_vector(self, d: int, i: int) -> Vector:
        return tuple(int(k == i) for k in range(self.rank(d)))

    def zero(self, d: int) -> Vector:
        return (0,) * self.rank(d)

    def unit(self) -> Vector:
        return self.basis_vector(0, 0)

    def basis_product(self, d: int, i: int, e: int, j: int) -> dict[int, int]:
        if d > e or (d == e and i > j):
            d, i, e, j = e, j, d, i
        key = (d, i, e, j)
        if key not in self._products:
            self._check_degree(d + e)
            self._products[key] = self._basis_product(d, i, e, j)
        return self._products[key]

    def multiply(self, d: int, x: Sequence[int], e: int, y: Sequence[int]) -> Vector:
        self._check_degree(d + e)
        n = self.modulus
        out = [0] * self.rank(d + e)
        xs = [(i, a) for i, a in enumerate(x) if a]
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in xs:
            for j, b in ys:
                for k, c in self.basis_product(d, i, e, j).items():
                    out[k] += a * b * c
        return tuple(v % n for v in out) if n else tuple(out)

    def power(self, d: int, x: Sequence[int], s: int) -> Vector:
        if s == 0:
            return self.unit()
        acc, deg = tuple(x), d
        for _ in range(s - 1):
            acc = self.multiply(deg, acc, d, x)
            deg += d
        return acc

    def mult_matrix(self, d: int, e: int) -> IntMatrix:
        """Matrix of A_d (x) A_e -> A_{d+e} in the tensor basis i * rank_e + j."""
        rd, re, rt = self.rank(d), self.rank(e), self.rank(d + e)
        rows = [[0] * (rd * re) for _ in range(rt)]
        for i in range(rd):
            for j in range(re):
                for k, c in self.basis_product(d, i, e, j).items():
                    rows[k][i * re + j] += c
        return IntMatrix.from_rows(rows, ncols=rd * re, modulus=self.modulus)

    def expression(self, d: int, v: Sequence[int]) -> str:
        return format_vector(self.labels(d), v)

    def invariants(self, d: int, h: SubgroupTag = SubgroupTag.FullG):
        return invariants(self.module(d), h)


# ---------------------------------------------------------------------------
# symmetric algebras and quotients
# ---------------------------------------------------------------------------


class SymAlgebra(GradedGAlgebra):
    """The symmetric algebra S(M) up to degree D, on monomial bases."""

    def __init__(self, M: GModule, truncation: int):
        super().__init__(truncation, M.modulus, M.datum)
        self.generator_module = M
        self._bases: dict[int, dict] = {}

    def _build_module(self, d: int) -> GModule:
        if d == 0:
            return trivial(1, self.modulus, self.datum).with_labels(["1"])
        return sym_power(self.generator_module, d)

    def _monomials(self, d: int) -> tuple[list, dict]:
        if d not in self._bases:
            monos = monomial_basis(self.generator_module.rank, d)
            self._bases[d] = (monos, {m: i for i, m in enumerate(monos)})
        return self._bases[d]

    def monomial(self, d: int, i: int) -> tuple[int, ...]:
        return self._monomials(d)[0][i]

    def _basis_product(self, d, i, e, j):
        a, b = self.monomial(d, i), self.monomial(e, j)
        return {self._monomials(d + e)[1][tuple(sorted(a + b))]: 1}


def sym_algebra(M: GModule, truncation: int) -> SymAlgebra:
    return SymAlgebra(M, truncation)


class ReducedAlgebra(GradedGAlgebra):
    """A (x) Z/p for an algebra A over Z, with the same bases."""

    def __init__(self, base: GradedGAlgebra, p: int):
        super().__init__(base.truncation, p, base.datum)
        self.base = base

    def _build_module(self, d):
        return base_change(self.base.module(d), self.modulus)

    def _basis_product(self, d, i, e, j):
        p = self.modulus
        return {k: c % p for k, c in self.base.basis_product(d, i, e, j).items() if c % p}

    def labels(self, d):
        return self.base.labels(d)


def reduce_algebra(A: GradedGAlgebra, p: int) -> GradedGAlgebra:
    if isinstance(A, SymAlgebra):
        return SymAlgebra(base_change(A.generator_module, p), A.truncation)
    return ReducedAlgebra(A, p)


def _weight_parts(M: GModule, v: Sequence[int]) -> dict[Weight, Vector]:
    out = {}
    for w, idx in M.weight_blocks.items():
        part = tuple(v[i] for i in idx)
        if any(part):
            out[w] = part
    return out


@dataclass
class IdealDegree:
    """The degree-d part of an ideal, weight block by weight block (HNF rows)."""

    blocks: dict[Weight, list[Vector]]

    @property
    def rank(self) -> int:
        return sum(len(b) for b in self.blocks.values())


class EquivariantIdeal:
    """G-stable ideal generated by homogeneous elements, up to the truncation.

    J_d is the abelian group generated by the degree-d generators, by the
    products A_e J_{d-e} (e >= 1) and by everything the divided powers send
    these to. It is not saturated: J = (2) stays 2A.
    """

    def __init__(self, A: GradedGAlgebra, generators: Iterable[tuple[int, Sequence[int]]]):
        self.algebra = A
        self.generators = [(d, tuple(v)) for d, v in generators]
        for d, v in self.generators:
            if d > A.truncation:
                raise TruncationError(f"generator of degree {d} exceeds truncation {A.truncation}")
            if len(v) != A.rank(d):
                raise DimensionError(f"generator of degree {d} has {len(v)} coordinates, expected {A.rank(d)}")
        self._degrees: dict[int, IdealDegree] = {}

    def _span(self, M: GModule, vectors: Iterable[Sequence[int]]) -> IdealDegree:
        comps: dict[Weight, list] = {w: [] for w in M.weight_blocks}
        for v in vectors:
            for w, part in _weight_parts(M, v).items():
                comps[w].append(part)
        n = M.modulus
        return IdealDegree(
            {w: hermite_rows(g, len(M.weight_blocks[w]), n) for w, g in comps.items()}
        )

    def _vectors(self, M: GModule, deg: IdealDegree) -> list[Vector]:
        out = []
        for w, rows in deg.blocks.items():
            idx = M.weight_blocks[w]
            for r in rows:
                v = [0] * M.rank
                for i, x in zip(idx, r):
                    v[i] = x
                out.append(tuple(v))
        return out

    def degree(self, d: int) -> IdealDegree:
        if d in self._degrees:
            return self._degrees[d]
        A = self.algebra
        M = A.module(d)
        vecs = [v for e, v in self.generators if e == d]
        for e in range(1, d + 1):
            lower = self.basis(d - e)
            for i in range(A.rank(e)):
                x = A.basis_vector(e, i)
                vecs += [A.multiply(e, x, d - e, v) for v in lower]
        cur = self._span(M, vecs)
        ops = [m for src in (M.raising, M.lowering) for m in src.values()]
        while True:
            base = self._vectors(M, cur)
            nxt = self._span(M, base + [m.apply(v) for m in ops for v in base])
            if nxt.blocks == cur.blocks:
                break
            cur = nxt
        self._degrees[d] = cur
        return cur

    def basis(self, d: int) -> list[Vector]:
        return self._vectors(self.algebra.module(d), self.degree(d))

    def contains(self, d: int, v: Sequence[int]) -> bool:
        M = self.algebra.module(d)
        n = M.modulus
        for w, part in _weight_parts(M, v).items():
            rows = self.degree(d).blocks[w]
            if not rows:
                return False
            G = IntMatrix.from_columns(rows, len(part), n)
            if image_membership(G, part) is None:
                return False
        return True


class QuotientAlgebra(GradedGAlgebra):
    """A / J for an equivariant ideal J, required to be free over Z or Z/n."""

    def __init__(self, A: GradedGAlgebra, generators: Iterable[tuple[int, Sequence[int]]]):
        self.parent = A
        self.ideal = EquivariantIdeal(A, generators)
        self._data: dict[int, tuple] = {}
        moduli = set()
        for d in range(A.truncation + 1):
            self._data[d] = self._quotient_data(d)
            moduli |= self._data[d][0]
        moduli.discard(1)
        if A.modulus:
            if moduli - {0}:
                raise NonFreeQuotientError(f"quotient is not free over Z/{A.modulus}")
            n = A.modulus
        elif moduli <= {0}:
            n = 0
        elif len(moduli) == 1:
            n = moduli.pop()
        else:
            raise NonFreeQuotientError(f"quotient has mixed cyclic factors {sorted(moduli)}")
        super().__init__(A.truncation, n, A.datum)
        self._modules.clear()
        self._project: dict[int, IntMatrix] = {}
        self._lifts: dict[int, list[Vector]] = {}
        for d in range(A.truncation + 1):
            self._finish_degree(d)

    def _quotient_data(self, d: int):
        A = self.parent
        M = A.module(d)
        deg = self.ideal.degree(d)
        factors_seen = set()
        per_block = {}
        for w, idx in M.weight_blocks.items():
            rows = deg.blocks[w]
            size = len(idx)
            if rows:
                cert = _diagonalize(IntMatrix.from_columns(rows, size, M.modulus), True, False, True)
                diag = list(cert.invariant_factors) + [0] * (size - len(cert.invariant_factors))
                L, Li = cert.left_transform, cert.left_inverse
            else:
                diag = [0] * size
                L = Li = IntMatrix.identity(size, M.modulus)
            keep = [k for k, f in enumerate(diag) if f != 1]
            factors_seen |= {diag[k] for k in keep}
            per_block[w] = (keep, L, Li)
        return factors_seen, per_block

    def _finish_degree(self, d: int) -> None:
        A = self.parent
        M = A.module(d)
        n = self.modulus
        _, per_block = self._data[d]
        q_rows, lifts, weights, labels = [], [], [], []
        for w, idx in M.weight_blocks.items():
            keep, L, Li = per_block[w]
            for k in keep:
                row = [0] * M.rank
                for i, x in zip(idx, L.rows[k]):
                    row[i] = x
                q_rows.append(row)
                lift = [0] * M.rank
                for i, x in zip(idx, Li.column(k)):
                    lift[i] = x
                lifts.append(tuple(lift))
                weights.append(w)
        q = IntMatrix.from_rows(q_rows, ncols=M.rank, modulus=n)
        ops = {"E": {}, "F": {}}
        for kind, src in (("E", M.raising), ("F", M.lowering)):
            for key, m in src.items():
                cols = [q.apply(m.apply(l)) for l in lifts]
                mat = IntMatrix.from_columns(cols, len(lifts), n)
                if not mat.is_zero():
                    ops[kind][key] = mat
        for l in lifts:
            labels.append(format_vector(A.labels(d), tuple(x % n for x in l) if n else l))
        self._modules[d] = GModule(A.datum, n, tuple(weights), ops["E"], ops["F"], tuple(labels))
        self._project[d] = q
        self._lifts[d] = lifts

    def _build_module(self, d):  # all degrees are built eagerly
        return self._modules[d]

    def project(self, d: int, v: Sequence[int]) -> Vector:
        return self._project[d].apply(v)

    def projection_matrix(self, d: int) -> IntMatrix:
        return self._project[d]

    def lift(self, d: int, v: Sequence[int]) -> Vector:
        out = [0] * self.parent.rank(d)
        for c, l in zip(v, self._lifts[d]):
            if c:
                for i, x in enumerate(l):
                    out[i] += c * x
        return tuple(out)

    def _basis_product(self, d, i, e, j):
        A = self.parent
        prod = A.multiply(d, self._lifts[d][i], e, self._lifts[e][j])
        return {k: c for k, c in enumerate(self.project(d + e, prod)) if c}


def quotient(A: GradedGAlgebra, generators: Iterable[tuple[int, Sequence[int]]]) -> QuotientAlgebra:
    return QuotientAlgebra(A, generators)


# ---------------------------------------------------------------------------
# algebra maps
# ---------------------------------------------------------------------------


class AlgebraMap:
    """A degreewise linear map between truncated algebras.

    ``matrices[d]`` has shape (target rank, source rank) over the target ring.
    """

    def __init__(self, source: GradedGAlgebra, target: GradedGAlgebra, matrices: dict[int, IntMatrix]):
        self.source = source
        self.target = target
        self.matrices = matrices
        self.truncation = min(source.truncation, target.truncation, max(matrices, default=-1))
        self._solvers: dict[int, LinearSolver] = {}

    def __call__(self, d: int, v: Sequence[int]) -> Vector:
        return self.matrices[d].apply(v)

    def preimage(self, d: int, v: Sequence[int]) -> Vector | None:
        if d not in self._solvers:
            self._solvers[d] = LinearSolver(self.matrices[d])
        return self._solvers[d].solve(v)

    def cokernel(self, d: int) -> list[int]:
        return cokernel_structure(self.matrices[d])

    def product_failures(self, max_degree: int | None = None) -> list[str]:
        """Pairs of basis vectors where f(xy) != f(x)f(y)."""
        S, T = self.source, self.target
        top = self.truncation if max_degree is None else min(max_degree, self.truncation)
        bad = []
        for d in range(top + 1):
            for e in range(d, top - d + 1):
                for i in range(S.rank(d)):
                    for j in range(S.rank(e)):
                        if d == e and j < i:
                            continue
                        x, y = S.basis_vector(d, i), S.basis_vector(e, j)
                        lhs = self(d + e, S.multiply(d, x, e, y))
                        rhs = T.multiply(d, self(d, x), e, self(e, y))
                        if lhs != rhs:
                            bad.append(f"degrees ({d},{e}) basis ({i},{j})")
        return bad

    def is_algebra_map(self, max_degree: int | None = None) -> bool:
        return not self.product_failures(max_degree)

    def is_equivariant(self) -> bool:
        return all(
            GMap(self.source.module(d), self.target.module(d), m).is_equivariant()
            for d, m in self.matrices.items()
        )

    def reduce(self, p: int) -> AlgebraMap:
        return AlgebraMap(
            reduce_algebra(self.source, p),
            reduce_algebra(self.target, p),
            {d: m.reduce(p) for d, m in self.matrices.items()},
        )


def projection_map(Q: QuotientAlgebra) -> AlgebraMap:
    return AlgebraMap(Q.parent, Q, {d: Q.projection_matrix(d) for d in range(Q.truncation + 1)})


# ---------------------------------------------------------------------------
# Grosshans graded algebra and hull algebra
# ---------------------------------------------------------------------------


class GrosshansGradedAlgebra(GradedGAlgebra):
    """gr A, bigraded by polynomial degree and height.

    The product of classes of height i and j is the class of the product of
    lifts in height i + j.
    """

    def __init__(self, A: GradedGAlgebra):
        super().__init__(A.truncation, A.modulus, A.datum)
        self.base = A
        self._filtrations: dict[int, GrosshansFiltration] = {}
        self._lift_mats: dict[int, list[tuple[int, Vector]]] = {}

    def filtration(self, d: int) -> GrosshansFiltration:
        self._check_degree(d)
        if d not in self._filtrations:
            self._filtrations[d] = graded(self.base.module(d))
        return self._filtrations[d]

    def _build_module(self, d):
        return self.filtration(d).total

    def heights(self, d: int) -> list[int]:
        return self.filtration(d).total_heights

    def lifts(self, d: int) -> list[tuple[int, Vector]]:
        """(height, lift in A_d) for each basis vector of gr A_d."""
        if d not in self._lift_mats:
            f = self.filtration(d)
            self._lift_mats[d] = [(i, l) for i in f.degrees for l in f.pieces[i].lifts]
        return self._lift_mats[d]

    def labels(self, d):
        A = self.base
        return [f"[{format_vector(A.labels(d), l)}]_{h}" for h, l in self.lifts(d)]

    def _basis_product(self, d, i, e, j):
        hi, li = self.lifts(d)[i]
        hj, lj = self.lifts(e)[j]
        prod = self.base.multiply(d, li, e, lj)
        f = self.filtration(d + e)
        h = hi + hj
        if h not in f.pieces:
            if not f.level(h).contains(prod):
                raise AssertionError("product escapes the expected filtration level")
            return {}
        c = f.class_in(h, prod)
        off = f.offsets[h]
        return {off + k: x for k, x in enumerate(c) if x}

    def class_of(self, d: int, v: Sequence[int]) -> Vector:
        """Leading class of an element of A_d, as a vector of gr A_d."""
        f = self.filtration(d)
        i, c = f.class_of(v)
        if i is None:
            return self.zero(d)
        return f.embed_class(i, c)


def grosshans_graded_algebra(A: GradedGAlgebra) -> GrosshansGradedAlgebra:
    return GrosshansGradedAlgebra(A)


class HullAlgebra(GradedGAlgebra):
    """hull(gr A): degree d is the sum of nabla_lam (x) W_lam over the U+-invariants of A_d.

    Products multiply the nabla factors by Cartan multiplication and the
    W factors inside A.
    """

    def __init__(self, A: GradedGAlgebra, gr: GrosshansGradedAlgebra | None = None):
        super().__init__(A.truncation, A.modulus, A.datum)
        self.base = A
        self.gr = gr or GrosshansGradedAlgebra(A)
        self._hulls: dict[int, HullModule] = {}
        self._lattices: dict[tuple[int, Weight], Sublattice] = {}
        self._embeddings: dict[int, IntMatrix] = {}

    def hull(self, d: int) -> HullModule:
        self._check_degree(d)
        if d not in self._hulls:
            self._hulls[d] = hull(self.base.module(d))
        return self._hulls[d]

    def _build_module(self, d):
        return self.hull(d).total

    def labels(self, d):
        out = []
        A = self.base
        for s in self.hull(d).summands:
            m = s.weight.coords[0]
            for k in range(m + 1):
                mono = "*".join(p for p in (_pow("x", m - k), _pow("y", k)) if p) or "1"
                for w in s.top_space:
                    out.append(f"{mono}⊗({format_vector(A.labels(d), w)})")
        return out

    def _top_lattice(self, d: int, w: Weight) -> Sublattice:
        key = (d, w)
        if key not in self._lattices:
            M = self.base.module(d)
            idx = M.weight_blocks[w]
            s = self.hull(d).summand(w)
            self._lattices[key] = Sublattice([tuple(b[i] for i in idx) for b in s.top_space], len(idx), M.modulus)
        return self._lattices[key]

    def _locate(self, d: int, i: int):
        for s in self.hull(d).summands:
            size = s.costandard.rank * s.multiplicity
            if s.offset <= i < s.offset + size:
                k, j = divmod(i - s.offset, s.multiplicity)
                return s, k, j
        raise IndexError(i)

    def _basis_product(self, d, i, e, j):
        s1, k1, j1 = self._locate(d, i)
        s2, k2, j2 = self._locate(e, j)
        A = self.base
        w = A.multiply(d, s1.top_space[j1], e, s2.top_space[j2])
        lam = s1.weight + s2.weight
        s = self.hull(d + e).summand(lam)
        if s is None:
            assert not any(w), "product of top vectors must be a top vector"
            return {}
        M = A.module(d + e)
        idx = M.weight_blocks[lam]
        c = self._top_lattice(d + e, lam).coords(tuple(w[t] for t in idx))
        assert c is not None, "product of U+-invariants must be U+-invariant"
        k = k1 + k2
        return {s.offset + k * s.multiplicity + t: x for t, x in enumerate(c) if x}

    def embedding_matrix(self, d: int) -> IntMatrix:
        if d not in self._embeddings:
            self._embeddings[d] = hull_embedding(self.base.module(d), self.gr.filtration(d)).map.matrix
        return self._embeddings[d]

    def embedding(self) -> AlgebraMap:
        return AlgebraMap(self.gr, self, {d: self.embedding_matrix(d) for d in range(self.truncation + 1)})


def _pow(v: str, e: int) -> str:
    return "" if e == 0 else (v if e == 1 else f"{v}^{e}")


def hull_algebra(A: GradedGAlgebra) -> tuple[HullAlgebra, AlgebraMap]:
    H = HullAlgebra(A)
    return H, H.embedding()


# ---------------------------------------------------------------------------
# invariant subalgebras
# ---------------------------------------------------------------------------


@dataclass
class Generator:
    degree: int
    vector: Vector
    expression: str

    def to_dict(self) -> dict:
        return {"degree": self.degree, "expression": self.expression}


@dataclass
class InvariantSubalgebra:
    algebra: GradedGAlgebra
    subgroup: SubgroupTag
    ranks: dict[int, int]
    bases: dict[int, list[Vector]]
    generators: list[Generator]

    @property
    def generator_degrees(self) -> list[int]:
        return [g.degree for g in self.generators]

    def to_dict(self) -> dict:
        return {
            "subgroup": self.subgroup.value,
            "ranks": {str(d): r for d, r in self.ranks.items()},
            "generators": [g.to_dict() for g in self.generators],
        }


def invariant_subalgebra(
    A: GradedGAlgebra, h: SubgroupTag = SubgroupTag.FullG, max_degree: int | None = None
) -> InvariantSubalgebra:
    """Invariants degree by degree and a generating set found lowest degree first.

    A degree-d invariant becomes a new generator when it is not in the
    lattice spanned by products of lower-degree generators.
    """
    D = A.truncation if max_degree is None else min(max_degree, A.truncation)
    n = A.modulus
    gens: list[Generator] = []
    sub: dict[int, list[Vector]] = {0: [A.unit()]}
    ranks, bases = {}, {}
    for d in range(0, D + 1):
        inv = A.invariants(d, h)
        ranks[d] = inv.rank
        bases[d] = inv.basis
        if d == 0:
            continue
        prods = []
        for g in gens:
            for v in sub.get(d - g.degree, []):
                prods.append(A.multiply(g.degree, g.vector, d - g.degree, v))
        span = hermite_rows(prods, A.rank(d), n)
        new: list[Vector] = []
        for b in inv.basis:
            cur = span + new
            if not cur or image_membership(IntMatrix.from_columns(cur, A.rank(d), n), b) is None:
                new.append(b)
        minimal = _minimal_new_generators(inv.basis, span, A.rank(d), n)
        if minimal is not None and len(minimal) < len(new):
            new = minimal
        for b in new:
            gens.append(Generator(d, b, A.expression(d, b)))
        sub[d] = hermite_rows(span + new, A.rank(d), n)
    return InvariantSubalgebra(A, h, ranks, bases, gens)


def _minimal_new_generators(inv_basis, span, dim, n) -> list[Vector] | None:
    """Lifts of a minimal generating set of (invariants) / (decomposables)."""
    if not inv_basis:
        return []
    try:
        lat = Sublattice(inv_basis, dim, n)
    except Exception:
        return None
    k = lat.rank
    cols = [lat.coords(v) for v in span]
    if any(c is None for c in cols):
        return None
    if not cols:
        return list(inv_basis)
    C = IntMatrix.from_columns(cols, k, n)
    cert = _diagonalize(C, True, False, True)
    diag = list(cert.invariant_factors) + [0] * (k - len(cert.invariant_factors))
    Li = cert.left_inverse
    B = lat.basis_matrix()
    return [B.apply(Li.column(i)) for i, f in enumerate(diag) if f != 1]


# ---------------------------------------------------------------------------
# torsion bound, cones
# ---------------------------------------------------------------------------


@dataclass
class TorsionBound:
    bound: int | None
    factors: dict[int, list[int]]
    free_degrees: list[int]

    @property
    def finite(self) -> bool:
        return not self.free_degrees

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "factors": {str(d): f for d, f in self.factors.items()},
            "free_degrees": self.free_degrees,
        }


def torsion_bound(A: GradedGAlgebra, max_degree: int | None = None, hull_alg: HullAlgebra | None = None) -> TorsionBound:
    """Smallest n with n * hull contained in gr A, degree by degree."""
    D = A.truncation if max_degree is None else min(max_degree, A.truncation)
    H = hull_alg or HullAlgebra(A)
    factors, free = {}, []
    for d in range(D + 1):
        f = cokernel_structure(H.embedding_matrix(d))
        factors[d] = f
        if any(x == 0 for x in f):
            free.append(d)
    if free:
        return TorsionBound(None, factors, free)
    return TorsionBound(_fold(lcm, (x for f in factors.values() for x in f), 1), factors, [])


class ConeAlgebra(GradedGAlgebra):
    """Degree d is nabla of ``weight_of(d)`` (or zero); products are Cartan maps."""

    def __init__(self, weight_of: Callable[[int], int | None], truncation: int, modulus: int = 0):
        super().__init__(truncation, modulus, A1)
        self.weight_of = weight_of

    def _build_module(self, d):
        m = self.weight_of(d)
        if m is None:
            return zero_module(self.modulus)
        return nabla(m, self.modulus)

    def _basis_product(self, d, i, e, j):
        a, b = self.weight_of(d), self.weight_of(e)
        if a is None or b is None:
            return {}
        return {i + j: 1}

    def labels(self, d):
        m = self.weight_of(d)
        if m is None:
            return []
        return ["*".join(p for p in (_pow("x", m - k), _pow("y", k)) if p) or "1" for k in range(m + 1)]


class SubalgebraOf(GradedGAlgebra):
    """A G-stable graded subalgebra given by lattice bases inside a parent."""

    def __init__(self, parent: GradedGAlgebra, bases: dict[int, list[Vector]]):
        super().__init__(parent.truncation, parent.modulus, parent.datum)
        self.parent = parent
        self.bases = bases
        self._mats = {d: IntMatrix.from_columns(b, parent.rank(d), parent.modulus) for d, b in bases.items()}

    def coords(self, d: int, v: Sequence[int]) -> Vector | None:
        return image_membership(self._mats[d], v)

    def _build_module(self, d):
        P = self.parent.module(d)
        B = self._mats[d]
        ops = {"E": {}, "F": {}}
        for kind, src in (("E", P.raising), ("F", P.lowering)):
            for key, m in src.items():
                cols = []
                for b in self.bases[d]:
                    c = self.coords(d, m.apply(b))
                    if c is None:
                        raise AssertionError("subalgebra piece is not G-stable")
                    cols.append(c)
                mat = IntMatrix.from_columns(cols, len(self.bases[d]), self.modulus)
                if not mat.is_zero():
                    ops[kind][key] = mat
        weights = []
        for b in self.bases[d]:
            i = next(k for k, x in enumerate(b) if x)
            weights.append(P.weights[i])
        labels = [format_vector(self.parent.labels(d), b) for b in self.bases[d]]
        return GModule(P.datum, self.modulus, tuple(weights), ops["E"], ops["F"], tuple(labels))

    def _basis_product(self, d, i, e, j):
        prod = self.parent.multiply(d, self.bases[d][i], e, self.bases[e][j])
        c = self.coords(d + e, prod)
        assert c is not None, "subalgebra is not closed under multiplication"
        return {k: x for k, x in enumerate(c) if x}

    def inclusion(self) -> AlgebraMap:
        return AlgebraMap(self, self.parent, dict(self._mats))


@dataclass
class MonicRelation:
    element: Vector
    degree: int  # of the relation in the variable
    coefficients: list[Vector]  # a_1..a_k, a_i of degree i * deg(element)

    def to_dict(self) -> dict:
        return {"degree": self.degree}


def monic_relation(
    target: GradedGAlgebra,
    d: int,
    b: Sequence[int],
    sub_bases: Callable[[int], list[Vector]],
    max_exponent: int,
) -> MonicRelation | None:
    """Search b^k + a_1 b^(k-1) + ... + a_k = 0 with a_i in the given lattices.

    ``sub_bases(deg)`` returns spanning vectors of the allowed coefficients
    in degree ``deg`` of ``target``.
    """
    n = target.modulus
    pows = [target.unit(), tuple(b)]
    for k in range(1, max_exponent + 1):
        if k * d > target.truncation:
            return None
        if k >= 2:
            pows.append(target.multiply((k - 1) * d, pows[k - 1], d, b))
        cols, owners = [], []
        for i in range(1, k + 1):
            for a in sub_bases(i * d):
                cols.append(target.multiply(i * d, a, (k - i) * d, pows[k - i]))
                owners.append((i, a))
        if not cols:
            continue
        neg = tuple(-x for x in pows[k])
        sol = image_membership(IntMatrix.from_columns(cols, target.rank(k * d), n), neg)
        if sol is None:
            continue
        coeffs = [target.zero(i * d) for i in range(1, k + 1)]
        for c, (i, a) in zip(sol, owners):
            if c:
                coeffs[i - 1] = _add(coeffs[i - 1], _scale(c, a, n), n)
        # re-verify exactly
        total = pows[k]
        for i, a in enumerate(coeffs, start=1):
            total = _add(total, target.multiply(i * d, a, (k - i) * d, pows[k - i]), n)
        assert not any(total), "monic relation failed re-verification"
        return MonicRelation(tuple(b), k, coeffs)
    return None


@dataclass
class SchurConePair:
    weight: int
    truncation: int
    S: SubalgebraOf
    S_prime: ConeAlgebra
    factors: dict[int, list[int]]
    t: int
    relations: list[MonicRelation | None]

    @property
    def integral(self) -> bool:
        return all(r is not None for r in self.relations)

    def to_dict(self) -> dict:
        return {
            "weight": self.weight,
            "truncation": self.truncation,
            "t": self.t,
            "factors": {str(d): f for d, f in self.factors.items()},
            "relations": [None if r is None else r.degree for r in self.relations],
            "integral": self.integral,
        }


def schur_cone_pair(lam: int, truncation: int, modulus: int = 0, exponent_bound: int = 4) -> SchurConePair:
    """S generated by Delta_lam inside S' with S'_d = nabla_{d lam}.

    The cone S' is built up to max(truncation, exponent_bound) so that monic
    relations for degree-one elements can be searched up to the bound.
    """
    if lam < 0:
        raise NotDominantError(f"weight {lam} is not dominant")
    top = max(truncation, exponent_bound)
    Sp = ConeAlgebra(lambda d: d * lam, top, modulus)
    emb = standard_module(lam, modulus).embedding.matrix
    bases = {0: [Sp.unit()], 1: hermite_rows(emb.columns(), lam + 1, modulus)}
    for d in range(2, top + 1):
        prods = [Sp.multiply(d - 1, u, 1, v) for u in bases[d - 1] for v in bases[1]]
        bases[d] = hermite_rows(prods, Sp.rank(d), modulus)
    S = SubalgebraOf(Sp, bases)
    factors = {}
    for d in range(truncation + 1):
        factors[d] = cokernel_structure(S._mats[d])
    t = _fold(lcm, (x for f in factors.values() for x in f), 1) if all(
        x != 0 for f in factors.values() for x in f
    ) else 0
    rels = [
        monic_relation(Sp, 1, Sp.basis_vector(1, i), lambda deg: bases[deg], exponent_bound)
        for i in range(Sp.rank(1))
    ]
    return SchurConePair(lam, truncation, S, Sp, factors, t, rels)


@dataclass
class Multicone:
    algebra: ConeAlgebra
    generators: list[int]
    surjective: dict[tuple[int, int], bool]

    @property
    def all_surjective(self) -> bool:
        return all(self.surjective.values())

    def to_dict(self) -> dict:
        return {
            "generators": self.generators,
            "degrees": [d for d in range(self.algebra.truncation + 1) if self.algebra.weight_of(d) is not None],
            "all_surjective": self.all_surjective,
        }


def multicone(weights: Sequence[int], truncation: int, modulus: int = 0) -> Multicone:
    """Sum of nabla_m over the monoid generated by ``weights`` (m <= truncation)."""
    for w in weights:
        if w < 0:
            raise NotDominantError(f"weight {w} is not dominant")
    monoid = {0}
    frontier = [0]
    while frontier:
        m = frontier.pop()
        for w in weights:
            if w and m + w <= truncation and m + w not in monoid:
                monoid.add(m + w)
                frontier.append(m + w)
    C = ConeAlgebra(lambda d: d if d in monoid else None, truncation, modulus)
    surj = {}
    for a in sorted(monoid):
        for b in sorted(monoid):
            if a <= b and a + b <= truncation:
                surj[(a, b)] = is_surjective(cartan_multiply(a, b, modulus).matrix)
    return Multicone(C, list(weights), surj)


# ---------------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------------


def verify_axioms(A: GradedGAlgebra, max_degree: int | None = None) -> list[str]:
    """Check unit, commutativity, associativity and equivariance on basis vectors."""
    D = A.truncation if max_degree is None else min(max_degree, A.truncation)
    bad = []
    u = A.unit()
    for d in range(D + 1):
        for i in range(A.rank(d)):
            x = A.basis_vector(d, i)
            if A.multiply(0, u, d, x) != x:
                bad.append(f"unit fails on degree {d} basis {i}")
    for d in range(D + 1):
        for e in range(d, D - d + 1):
            for i in range(A.rank(d)):
                for j in range(A.rank(e)):
                    # the product cache is symmetric, so ask the raw product both ways round
                    if A._basis_product(d, i, e, j) != A._basis_product(e, j, d, i):
                        bad.append(f"commutativity fails at ({d},{i}),({e},{j})")
            if A.rank(d) and A.rank(e):
                m = A.mult_matrix(d, e)
                src = tensor(A.module(d), A.module(e))
                if not GMap(src, A.module(d + e), m).is_equivariant():
                    bad.append(f"multiplication A_{d} x A_{e} is not equivariant")
    for d in range(1, D + 1):
        for e in range(1, D - d + 1):
            for f in range(1, D - d - e + 1):
                for i in range(A.rank(d)):
                    x = A.basis_vector(d, i)
                    for j in range(A.rank(e)):
                        y = A.basis_vector(e, j)
                        xy = A.multiply(d, x, e, y)
                        for k in range(A.rank(f)):
                            z = A.basis_vector(f, k)
                            if A.multiply(d + e, xy, f, z) != A.multiply(d, x, e + f, A.multiply(e, y, f, z)):
                                bad.append(f"associativity fails at degrees ({d},{e},{f})")
    return bad

