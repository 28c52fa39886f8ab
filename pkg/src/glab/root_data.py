"""Root data, weights and the height function on the weight lattice.

Weights are integer vectors in the basis of fundamental weights, so for A1
a weight is a single integer and the standard representation has weights
+1 and -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from sympy import isprime

from .errors import InvalidCharacteristicError


@dataclass(frozen=True, order=True)
class Weight:
    coords: tuple[int, ...]

    @classmethod
    def of(cls, *coords: int) -> Weight:
        return cls(tuple(coords))

    @classmethod
    def zero(cls, rank: int) -> Weight:
        return cls((0,) * rank)

    def __add__(self, other: Weight) -> Weight:
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: Weight) -> Weight:
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> Weight:
        return Weight(tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> Weight:
        return Weight(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __len__(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        if len(self.coords) == 1:
            return str(self.coords[0])
        return "(" + ",".join(map(str, self.coords)) + ")"


@dataclass(frozen=True)
class RootDatum:
    """A simply connected root datum given by its Cartan matrix.

    ``positive_coroots[k]`` holds the coefficients of the k-th positive
    coroot in the basis of simple coroots, so the pairing of a weight (in
    fundamental coordinates) with it is a dot product. ``positive_roots``
    are the matching roots written as weights.
    """

    label: str
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[Weight, ...]
    positive_coroots: tuple[tuple[int, ...], ...]
    # the standard Borel subgroup B carries the negative roots; B+ the positive ones
    borel_convention: str = field(default="B negative, B+ positive", compare=False)

    @property
    def rank(self) -> int:
        return len(self.cartan)

    def coroot_pairings(self) -> tuple[tuple[int, ...], ...]:
        """Matrix of pairings of fundamental weight i with simple coroot j."""
        r = self.rank
        return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))

    def simple_root(self, i: int) -> Weight:
        # alpha_i = sum_j <alpha_i, alpha_j^v> omega_j
        return Weight(tuple(self.cartan[j][i] for j in range(self.rank)))

    def fundamental_weight(self, i: int) -> Weight:
        return Weight(tuple(int(i == j) for j in range(self.rank)))

    def pairing(self, w: Weight, coroot: Sequence[int]) -> int:
        return sum(a * c for a, c in zip(w.coords, coroot))

    def zero(self) -> Weight:
        return Weight.zero(self.rank)

    def weight(self, *coords: int) -> Weight:
        if len(coords) != self.rank:
            raise ValueError(f"{self.label} weights have {self.rank} coordinates")
        return Weight(tuple(coords))


def type_a(n: int) -> RootDatum:
    """The simply connected root datum of type A_n (SL_{n+1})."""
    if n < 1:
        raise ValueError("type A_n needs n >= 1")
    cartan = tuple(
        tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n))
        for i in range(n)
    )
    coroots = []
    roots = []
    for a in range(n):
        for b in range(a, n):
            c = tuple(1 if a <= k <= b else 0 for k in range(n))
            coroots.append(c)
            roots.append(
                Weight(tuple(sum(cartan[j][k] * c[k] for k in range(n)) for j in range(n)))
            )
    return RootDatum(f"A{n}", cartan, tuple(roots), tuple(coroots))


A1 = type_a(1)


def grosshans_height(d: RootDatum, gamma: Weight) -> int:
    """Sum of the pairings of gamma with all positive coroots."""
    return sum(d.pairing(gamma, c) for c in d.positive_coroots)


def is_dominant(d: RootDatum, lam: Weight) -> bool:
    return all(x >= 0 for x in lam.coords)


def rho(d: RootDatum) -> Weight:
    return Weight((1,) * d.rank)


def check_characteristic(p: int) -> int:
    if p < 0 or (p > 0 and not isprime(p)):
        raise InvalidCharacteristicError(f"characteristic must be 0 or a prime, got {p}")
    return p


def steinberg_weight(d: RootDatum, r: int, p: int) -> Weight:
    """(p^r - 1) rho in characteristic p, and r rho in characteristic 0."""
    if r < 1:
        raise ValueError("r must be a positive integer")
    check_characteristic(p)
    return rho(d) * (p**r - 1 if p else r)


def max_norm(w: Weight) -> int:
    """Length of a weight, measured as its max-norm in fundamental coordinates."""
    return max((abs(x) for x in w.coords), default=0)
