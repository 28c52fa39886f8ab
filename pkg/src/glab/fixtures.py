"""Worked example modules and algebras used by ``glab check`` and the tests."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .exact_linalg import IntMatrix
from .galgebra import QuotientAlgebra, SymAlgebra, quotient, sym_algebra
from .gmodule import GMap, GModule, adjoint_sl2, dual, standard_rep, sym_power, tensor, trivial
from .induction import delta, nabla


def matrix_module(modulus: int = 0) -> GModule:
    """2x2 matrices under conjugation, basis E11, E12, E21, E22."""
    V = standard_rep(modulus)
    return tensor(V, dual(V)).with_labels(["E11", "E12", "E21", "E22"])


def coordinate_module(modulus: int = 0) -> GModule:
    """Linear coordinates a, b, c, d on 2x2 matrices."""
    return dual(matrix_module(modulus)).with_labels(["a", "b", "c", "d"])


@dataclass
class ConjugationFixture:
    module: GModule  # coordinates a, b, c, d
    phi: GMap  # restriction to the scalar matrices
    algebra: SymAlgebra
    quotient: QuotientAlgebra  # coordinate ring of the scalar line


def conjugation_fixture(truncation: int = 4) -> ConjugationFixture:
    M = coordinate_module()
    L = trivial(1).with_labels(["l"])
    phi = GMap(M, L, IntMatrix.from_rows([[1, 0, 0, 1]])).check()
    A = sym_algebra(M, truncation)
    # kernel of restriction to scalars is generated by b, c and a - d
    Q = quotient(A, [(1, (0, 1, 0, 0)), (1, (0, 0, 1, 0)), (1, (1, 0, 0, -1))])
    return ConjugationFixture(M, phi, A, Q)


@dataclass
class AdjointFixture:
    module: GModule
    algebra: SymAlgebra
    mod2: QuotientAlgebra  # A / 2A


def adjoint_fixture(truncation: int = 4) -> AdjointFixture:
    M = adjoint_sl2()
    A = sym_algebra(M, truncation)
    return AdjointFixture(M, A, quotient(A, [(0, (2,))]))


@dataclass
class UnipotentFixture:
    module: GModule
    phi: GMap  # kills x, sends y to the generator


def unipotent_fixture() -> UnipotentFixture:
    V = standard_rep()
    L = trivial(1).with_labels(["l"])
    return UnipotentFixture(V, GMap(V, L, IntMatrix.from_rows([[0, 1]])))


def random_module(rng: random.Random, max_weight: int = 6, modulus: int = 0) -> GModule:
    """A small tensor or symmetric power of costandard/standard modules.

    Highest weights stay <= max_weight.
    """
    kind = rng.choice(["nabla", "delta", "tensor", "sym", "sum_tensor"])
    if kind == "nabla":
        return nabla(rng.randint(0, max_weight), modulus)
    if kind == "delta":
        return delta(rng.randint(0, max_weight), modulus)
    if kind == "tensor":
        a = rng.randint(0, max_weight // 2)
        b = rng.randint(0, max_weight - a)
        left = nabla(a, modulus) if rng.random() < 0.5 else delta(a, modulus)
        right = nabla(b, modulus) if rng.random() < 0.5 else delta(b, modulus)
        return tensor(left, right)
    if kind == "sym":
        base = rng.choice([1, 2])
        d = rng.randint(1, max_weight // base)
        src = standard_rep(modulus) if base == 1 else adjoint_sl2(modulus)
        return sym_power(src, d)
    a = rng.randint(0, 2)
    return tensor(adjoint_sl2(modulus), nabla(a, modulus))
