"""Exact linear algebra over Z and Z/n.

Entries are Python ints, so intermediate growth never overflows. A modulus
of 0 means the integers; any n >= 2 means Z/n with entries kept in
``range(n)``.

Everything reduces to one deterministic Smith normal form routine: pivots
are chosen by smallest absolute value (smallest residue over Z/n) with the
lowest (row, column) index breaking ties, so certificates are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionError, UnsupportedRingError

Vector = tuple[int, ...]


def _red(x: int, n: int) -> int:
    return x % n if n else x


def _eye(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, optionally with entries in Z/modulus."""

    rows: tuple[Vector, ...]
    ncols: int
    modulus: int = 0

    # -- construction -----------------------------------------------------
    @classmethod
    def from_rows(
        cls, rows: Iterable[Sequence[int]], ncols: int | None = None, modulus: int = 0
    ) -> IntMatrix:
        if modulus < 0 or modulus == 1:
            raise ValueError(f"modulus must be 0 or >= 2, got {modulus}")
        rows = [tuple(r) for r in rows]
        if ncols is None:
            if not rows:
                raise DimensionError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise DimensionError(f"ragged row of length {len(r)}, expected {ncols}")
        if modulus:
            rows = [tuple(x % modulus for x in r) for r in rows]
        return cls(tuple(rows), ncols, modulus)

    @classmethod
    def from_columns(
        cls, columns: Iterable[Sequence[int]], nrows: int, modulus: int = 0
    ) -> IntMatrix:
        cols = [tuple(c) for c in columns]
        for c in cols:
            if len(c) != nrows:
                raise DimensionError(f"column of length {len(c)}, expected {nrows}")
        rows = [tuple(c[i] for c in cols) for i in range(nrows)]
        return cls.from_rows(rows, ncols=len(cols), modulus=modulus)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, modulus: int = 0) -> IntMatrix:
        return cls(tuple((0,) * ncols for _ in range(nrows)), ncols, modulus)

    @classmethod
    def identity(cls, n: int, modulus: int = 0) -> IntMatrix:
        return cls(tuple(tuple(r) for r in _eye(n)), n, modulus)

    @classmethod
    def diagonal(cls, entries: Sequence[int], modulus: int = 0) -> IntMatrix:
        n = len(entries)
        return cls.from_rows(
            [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)],
            ncols=n,
            modulus=modulus,
        )

    # -- shape and access -------------------------------------------------
    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def transpose(self) -> IntMatrix:
        return IntMatrix(
            tuple(tuple(r[j] for r in self.rows) for j in range(self.ncols)),
            len(self.rows),
            self.modulus,
        )

    @property
    def T(self) -> IntMatrix:
        return self.transpose()

    def select(
        self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None
    ) -> IntMatrix:
        rr = range(self.nrows) if rows is None else rows
        cc = range(self.ncols) if cols is None else cols
        return IntMatrix(
            tuple(tuple(self.rows[i][j] for j in cc) for i in rr), len(cc), self.modulus
        )

    def reduce(self, n: int) -> IntMatrix:
        """Entrywise reduction mod ``n`` (base change Z -> Z/n)."""
        if n < 2:
            raise ValueError("reduction needs n >= 2")
        if self.modulus and self.modulus % n:
            raise UnsupportedRingError(f"cannot reduce Z/{self.modulus} to Z/{n}")
        return IntMatrix.from_rows(self.rows, ncols=self.ncols, modulus=n)

    def lift(self) -> IntMatrix:
        return IntMatrix(self.rows, self.ncols, 0)

    # -- arithmetic -------------------------------------------------------
    def _result_modulus(self, other: IntMatrix) -> int:
        a, b = self.modulus, other.modulus
        if a and b and a != b:
            raise UnsupportedRingError(f"ring mismatch: Z/{a} vs Z/{b}")
        return a or b

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.ncols:
            raise DimensionError(f"vector of length {len(v)} for {self.shape} matrix")
        n = self.modulus
        nz = [(j, x) for j, x in enumerate(v) if x]
        out = []
        for r in self.rows:
            s = 0
            for j, x in nz:
                a = r[j]
                if a:
                    s += a * x
            out.append(s % n if n else s)
        return tuple(out)

    def __matmul__(self, other):
        if not isinstance(other, IntMatrix):
            return self.apply(other)
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        n = self._result_modulus(other)
        brows = [[(j, b) for j, b in enumerate(r) if b] for r in other.rows]
        m = other.ncols
        out = []
        for r in self.rows:
            acc = [0] * m
            for k, a in enumerate(r):
                if a:
                    for j, b in brows[k]:
                        acc[j] += a * b
            out.append(tuple(x % n for x in acc) if n else tuple(acc))
        return IntMatrix(tuple(out), m, n)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        n = self._result_modulus(other)
        return IntMatrix.from_rows(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            ncols=self.ncols,
            modulus=n,
        )

    def __neg__(self) -> IntMatrix:
        return self.scale(-1)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix.from_rows(
            [[c * a for a in r] for r in self.rows], ncols=self.ncols, modulus=self.modulus
        )

    @staticmethod
    def vstack(mats: Sequence[IntMatrix], ncols: int | None = None, modulus: int = 0) -> IntMatrix:
        if not mats:
            if ncols is None:
                raise DimensionError("vstack of nothing needs ncols")
            return IntMatrix.zeros(0, ncols, modulus)
        c = mats[0].ncols
        if any(m.ncols != c for m in mats):
            raise DimensionError("vstack with mismatched column counts")
        n = max(m.modulus for m in mats)
        return IntMatrix.from_rows([r for m in mats for r in m.rows], ncols=c, modulus=n)

    @staticmethod
    def kron(a: IntMatrix, b: IntMatrix) -> IntMatrix:
        n = a._result_modulus(b)
        rows = [[0] * (a.ncols * b.ncols) for _ in range(a.nrows * b.nrows)]
        bnz = [[(j, y) for j, y in enumerate(r) if y] for r in b.rows]
        for i, ar in enumerate(a.rows):
            for j, x in enumerate(ar):
                if not x:
                    continue
                for k, brow in enumerate(bnz):
                    out = rows[i * b.nrows + k]
                    for l, y in brow:
                        out[j * b.ncols + l] += x * y
        return IntMatrix.from_rows(rows, ncols=a.ncols * b.ncols, modulus=n)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SnfCertificate:
    """``left_transform @ m @ right_transform`` is diagonal with these factors.

    Over Z/n the factors are the divisors ``gcd(d, n)`` (0 for a zero
    entry). The inverse transforms are only present when requested.
    """

    left_transform: IntMatrix | None
    right_transform: IntMatrix | None
    invariant_factors: tuple[int, ...]
    shape: tuple[int, int]
    modulus: int = 0
    left_inverse: IntMatrix | None = None
    right_inverse: IntMatrix | None = None

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d)

    def diagonal(self) -> IntMatrix:
        r, c = self.shape
        rows = [[0] * c for _ in range(r)]
        for i, d in enumerate(self.invariant_factors):
            rows[i][i] = d
        return IntMatrix.from_rows(rows, ncols=c, modulus=self.modulus)


def _unit_normalizer(p: int, n: int) -> tuple[int, int]:
    """Return a unit u of Z/n with u*p = gcd(p, n), and its inverse."""
    g = gcd(p, n)
    step = n // g
    u = pow((p // g) % step, -1, step) if step > 1 else 1
    while gcd(u, n) != 1:
        u += step
    return u % n, pow(u, -1, n)


def _diagonalize(
    m: IntMatrix, track_left: bool, track_right: bool, inverses: bool
) -> SnfCertificate:
    nr, nc, n = m.nrows, m.ncols, m.modulus
    a = [list(r) for r in m.rows]
    L = _eye(nr) if track_left else None
    Li = _eye(nr) if track_left and inverses else None
    R = _eye(nc) if track_right else None
    Ri = _eye(nc) if track_right and inverses else None

    def red_row(row):
        if n:
            for k in range(len(row)):
                row[k] %= n

    def add_row(i, j, q):  # row_i += q * row_j
        for mat in (a, L):
            if mat is None:
                continue
            ri, rj = mat[i], mat[j]
            for k, x in enumerate(rj):
                if x:
                    ri[k] += q * x
            red_row(ri)
        if Li is not None:  # col_j -= q * col_i
            for r in Li:
                if r[i]:
                    r[j] = _red(r[j] - q * r[i], n)

    def add_col(i, j, q):  # col_i += q * col_j
        for mat in (a, R):
            if mat is None:
                continue
            for r in mat:
                if r[j]:
                    r[i] = _red(r[i] + q * r[j], n)
        if Ri is not None:  # row_j -= q * row_i
            rj, ri = Ri[j], Ri[i]
            for k, x in enumerate(ri):
                if x:
                    rj[k] -= q * x
            red_row(rj)

    def swap_rows(i, j):
        if i == j:
            return
        for mat in (a, L):
            if mat is not None:
                mat[i], mat[j] = mat[j], mat[i]
        if Li is not None:
            for r in Li:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i == j:
            return
        for mat in (a, R):
            if mat is not None:
                for r in mat:
                    r[i], r[j] = r[j], r[i]
        if Ri is not None:
            Ri[i], Ri[j] = Ri[j], Ri[i]

    def scale_row(i, u, uinv):
        for mat in (a, L):
            if mat is not None:
                mat[i] = [_red(u * x, n) for x in mat[i]]
        if Li is not None:
            for r in Li:
                r[i] = _red(r[i] * uinv, n)

    key = (lambda x: x) if n else abs
    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            row = a[i]
            for j in range(t, nc):
                x = row[j]
                if x and (best is None or key(x) < best[0]):
                    best = (key(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                x = a[i][t]
                if x:
                    add_row(i, t, -(x // p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                x = a[t][j]
                if x:
                    add_col(j, t, -(x // p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                cand = [(key(a[i][t]), 0, i) for i in range(t, nr) if a[i][t]]
                cand += [(key(a[t][j]), 1, j) for j in range(t + 1, nc) if a[t][j]]
                _, kind, idx = min(cand)
                if kind == 0:
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            p = a[t][t]
            if n:
                if p != gcd(p, n):
                    u, uinv = _unit_normalizer(p, n)
                    scale_row(t, u, uinv)
            elif p < 0:
                scale_row(t, -1, -1)
            p = a[t][t]
            bad = None
            for i in range(t + 1, nr):
                row = a[i]
                for j in range(t + 1, nc):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        t += 1

    diag = tuple(a[i][i] for i in range(min(nr, nc)))

    def wrap(mat, size):
        return None if mat is None else IntMatrix(tuple(map(tuple, mat)), size, n)

    return SnfCertificate(
        left_transform=wrap(L, nr),
        right_transform=wrap(R, nc),
        invariant_factors=diag,
        shape=(nr, nc),
        modulus=n,
        left_inverse=wrap(Li, nr),
        right_inverse=wrap(Ri, nc),
    )


def smith_normal_form(m: IntMatrix, inverses: bool = False) -> SnfCertificate:
    """Smith normal form over Z with unimodular left and right transforms."""
    if m.modulus:
        raise UnsupportedRingError("smith_normal_form is defined over Z only")
    return _diagonalize(m, True, True, inverses)


def snf_mod(m: IntMatrix, inverses: bool = False) -> SnfCertificate:
    """Smith-style diagonalization over the matrix's own ring (Z or Z/n)."""
    return _diagonalize(m, True, True, inverses)


# ---------------------------------------------------------------------------
# Kernels, images, cokernels
# ---------------------------------------------------------------------------


def hermite_rows(vectors: Iterable[Sequence[int]], dim: int, modulus: int = 0) -> list[Vector]:
    """Echelon basis of the row span, reduced above pivots.

    Over Z this is the Hermite normal form (positive pivots, entries above a
    pivot in ``[0, pivot)``); over a prime field it is the reduced row
    echelon form. Over composite Z/n the result generates the same submodule.
    """
    n = modulus
    rows = []
    for v in vectors:
        if len(v) != dim:
            raise DimensionError(f"vector of length {len(v)}, expected {dim}")
        r = [_red(x, n) for x in v]
        if any(r):
            rows.append(r)
    key = (lambda x: x) if n else abs
    r = 0
    for col in range(dim):
        if r >= len(rows):
            break
        found = False
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][col]]
            if not nz:
                break
            found = True
            piv = min(nz, key=lambda i: (key(rows[i][col]), i))
            rows[r], rows[piv] = rows[piv], rows[r]
            p = rows[r][col]
            clean = True
            for i in range(r + 1, len(rows)):
                x = rows[i][col]
                if x:
                    q = x // p
                    rows[i] = [_red(y - q * z, n) for y, z in zip(rows[i], rows[r])]
                    if rows[i][col]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        p = rows[r][col]
        if n:
            if p != gcd(p, n):
                u, _ = _unit_normalizer(p, n)
                rows[r] = [_red(u * y, n) for y in rows[r]]
        elif p < 0:
            rows[r] = [-y for y in rows[r]]
        p = rows[r][col]
        for i in range(r):
            q = rows[i][col] // p
            if q:
                rows[i] = [_red(y - q * z, n) for y, z in zip(rows[i], rows[r])]
        r += 1
    return [tuple(v) for v in rows[:r] if any(v)]


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns spanning ``{v : m v = 0}``.

    Over Z the columns are a basis of the (automatically saturated) kernel
    lattice, in Hermite normal form. Over Z/n they generate the kernel
    submodule; for prime n they are a basis.
    """
    n = m.modulus
    cert = _diagonalize(m, False, True, False)
    R = cert.right_transform
    diag = cert.invariant_factors
    vecs = []
    for i in range(m.ncols):
        d = diag[i] if i < len(diag) else 0
        col = R.column(i)
        if not n:
            if d == 0:
                vecs.append(col)
        else:
            s = n // gcd(d, n)
            if s % n:
                vecs.append(tuple((s * x) % n for x in col))
    basis = hermite_rows(vecs, m.ncols, n)
    return IntMatrix.from_columns(basis, m.ncols, n)


class LinearSolver:
    """Answers repeated ``m x = v`` queries from one diagonalization of m."""

    def __init__(self, m: IntMatrix):
        self.matrix = m
        self._cert = _diagonalize(m, True, True, False)

    def solve(self, v: Sequence[int]) -> Vector | None:
        m = self.matrix
        if len(v) != m.nrows:
            raise DimensionError(f"vector of length {len(v)} for {m.shape} matrix")
        n = m.modulus
        if not any(_red(x, n) for x in v):
            return (0,) * m.ncols
        cert = self._cert
        c = cert.left_transform.apply(v)
        diag = cert.invariant_factors
        y = [0] * m.ncols
        for i, ci in enumerate(c):
            d = diag[i] if i < len(diag) else 0
            if d == 0:
                if _red(ci, n):
                    return None
                continue
            if ci % d:
                return None
            y[i] = ci // d
        x = cert.right_transform.apply(y)
        assert m.apply(x) == tuple(_red(t, n) for t in v)
        return x


def image_membership(m: IntMatrix, v: Sequence[int]) -> Vector | None:
    """Return some x with ``m @ x == v`` exactly, or None if v is not in the image."""
    if len(v) != m.nrows:
        raise DimensionError(f"vector of length {len(v)} for {m.shape} matrix")
    if not any(_red(x, m.modulus) for x in v):
        return (0,) * m.ncols
    return LinearSolver(m).solve(v)


def cokernel_structure(m: IntMatrix) -> list[int]:
    """Factors f_i with ``coker m = (+) Z/f_i`` (f = 0 stands for a free summand).

    One factor per row of ``m``. Over Z/n a missing pivot contributes n.
    The map is surjective exactly when every factor is 1.
    """
    n = m.modulus
    diag = _diagonalize(m, False, False, False).invariant_factors
    pad = n if n else 0
    out = [d if d else pad for d in diag]
    return out + [pad] * (m.nrows - len(diag))


def is_surjective(m: IntMatrix) -> bool:
    return all(f == 1 for f in cokernel_structure(m))


def is_injective(m: IntMatrix) -> bool:
    return kernel_basis(m).ncols == 0


def rank(m: IntMatrix) -> int:
    return _diagonalize(m, False, False, False).rank


def submodule_structure(m: IntMatrix) -> list[int]:
    """Abelian-group structure of the column span of ``m``.

    Over Z the span is free: one 0 per rank. Over Z/n it is a sum of cyclic
    groups Z/k; their orders are listed so each divides the next.
    """
    n = m.modulus
    diag = _diagonalize(m, False, False, False).invariant_factors
    if not n:
        return [0] * sum(1 for d in diag if d)
    # the divisors form a chain, so sorting the orders gives a divisibility chain
    return sorted(n // d for d in diag if d)


def inverse(m: IntMatrix) -> IntMatrix:
    """Inverse of a square matrix that is invertible over its ring."""
    if m.nrows != m.ncols:
        raise DimensionError("only square matrices can be inverted")
    cert = _diagonalize(m, True, True, False)
    if any(d != 1 for d in cert.invariant_factors):
        raise ValueError("matrix is not invertible over its ring")
    return cert.right_transform @ cert.left_transform


def column_lattice_basis(
    generators: Iterable[Sequence[int]], dim: int, modulus: int = 0
) -> list[Vector]:
    """Canonical generators (a basis over Z or a field) of the span of ``generators``."""
    return hermite_rows(generators, dim, modulus)


# ---------------------------------------------------------------------------
# Saturated sublattices
# ---------------------------------------------------------------------------


class Sublattice:
    """A direct summand of ``R^dim`` (R = Z or Z/n) with exact coordinates.

    Over Z this is a saturated sublattice; over a prime field, a subspace.
    Membership and coordinates are answered with precomputed integer
    matrices: ``equations @ v == 0`` iff v lies in the sublattice, and then
    ``coordinate_map @ v`` gives its coordinates in ``basis``.
    """

    __slots__ = ("dim", "modulus", "basis", "coordinate_map", "equations")

    def __init__(self, basis: Sequence[Sequence[int]], dim: int, modulus: int = 0):
        self.dim = dim
        self.modulus = modulus
        self.basis = tuple(tuple(_red(x, modulus) for x in b) for b in basis)
        k = len(self.basis)
        B = IntMatrix.from_columns(self.basis, dim, modulus)
        cert = _diagonalize(B, True, True, False)
        if list(cert.invariant_factors) != [1] * k:
            raise UnsupportedRingError(
                "basis does not span a direct summand "
                f"(factors {list(cert.invariant_factors)})"
            )
        L = cert.left_transform
        self.coordinate_map = cert.right_transform @ L.select(rows=range(k))
        self.equations = L.select(rows=range(k, dim))

    @classmethod
    def span(
        cls, generators: Iterable[Sequence[int]], dim: int, modulus: int = 0
    ) -> Sublattice:
        """Saturation of the span of ``generators`` (the span itself over a field)."""
        gens = [tuple(g) for g in generators]
        if not gens:
            return cls((), dim, modulus)
        G = IntMatrix.from_columns(gens, dim, modulus)
        cert = _diagonalize(G, True, False, True)
        nonzero = [d for d in cert.invariant_factors if d]
        if modulus and any(d != 1 for d in nonzero):
            raise UnsupportedRingError(
                f"span over Z/{modulus} is not a free direct summand"
            )
        Li = cert.left_inverse
        basis = [Li.column(i) for i in range(len(nonzero))]
        return cls(hermite_rows(basis, dim, modulus), dim, modulus)

    @classmethod
    def full(cls, dim: int, modulus: int = 0) -> Sublattice:
        return cls([tuple(r) for r in _eye(dim)], dim, modulus)

    @classmethod
    def zero(cls, dim: int, modulus: int = 0) -> Sublattice:
        return cls((), dim, modulus)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.basis, self.dim, self.modulus)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.equations.apply(v))

    def coords(self, v: Sequence[int]) -> Vector | None:
        if not self.contains(v):
            return None
        return self.coordinate_map.apply(v)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def __repr__(self) -> str:
        ring = f"Z/{self.modulus}" if self.modulus else "Z"
        return f"Sublattice(rank={self.rank}, dim={self.dim}, ring={ring})"


def quotient_coordinates(big: Sublattice, small: Sublattice) -> tuple[IntMatrix, list[Vector]]:
    """Coordinates on ``big / small`` for direct summands ``small <= big``.

    Returns ``(q, lifts)``: ``q`` maps a vector of ``big`` (in ambient
    coordinates) to its class, and ``lifts[j]`` is an ambient vector in
    ``big`` whose class is the j-th basis vector of the quotient.
    """
    n = big.modulus
    kb, ks = big.rank, small.rank
    cols = []
    for b in small.basis:
        c = big.coords(b)
        if c is None:
            raise ValueError("small lattice is not contained in big lattice")
        cols.append(c)
    C = IntMatrix.from_columns(cols, kb, n)
    cert = _diagonalize(C, True, False, True)
    if list(cert.invariant_factors) != [1] * ks:
        raise UnsupportedRingError("inner lattice is not a direct summand of the outer one")
    L, Li = cert.left_transform, cert.left_inverse
    q = L.select(rows=range(ks, kb)) @ big.coordinate_map
    B = big.basis_matrix()
    lifts = [B.apply(Li.column(j)) for j in range(ks, kb)]
    return q, lifts
