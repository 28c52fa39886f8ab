import pytest

from glab.errors import InvalidCharacteristicError
from glab.root_data import (
    A1,
    Weight,
    check_characteristic,
    grosshans_height,
    is_dominant,
    max_norm,
    rho,
    steinberg_weight,
    type_a,
)


def test_height_in_a1():
    assert grosshans_height(A1, A1.zero()) == 0
    for m in range(6):
        assert grosshans_height(A1, A1.fundamental_weight(0) * m) == m


def test_height_of_rho_in_a2():
    A2 = type_a(2)
    assert len(A2.positive_roots) == 3
    assert grosshans_height(A2, rho(A2)) == 4


def test_dominance():
    assert is_dominant(A1, A1.zero())
    assert not is_dominant(A1, Weight.of(-1))
    assert not is_dominant(type_a(2), Weight.of(2, -1))
    assert is_dominant(type_a(2), Weight.of(2, 1))


def test_steinberg_weights():
    assert steinberg_weight(A1, 1, 2) == Weight.of(1)
    assert steinberg_weight(A1, 2, 3) == Weight.of(8)
    assert steinberg_weight(A1, 3, 0) == Weight.of(3)


def test_characteristic_checks():
    assert check_characteristic(0) == 0
    assert check_characteristic(7) == 7
    for bad in (4, 1, -3, 9):
        with pytest.raises(InvalidCharacteristicError):
            check_characteristic(bad)


def test_weight_arithmetic_and_printing():
    a, b = Weight.of(2), Weight.of(-1)
    assert a + b == Weight.of(1)
    assert a - b == Weight.of(3)
    assert -a == Weight.of(-2)
    assert str(a) == "2"
    assert (a * 3).coords == (6,)
    assert max_norm(Weight.of(3, -5)) == 5
    assert sorted([a, b, Weight.of(0)]) == [b, Weight.of(0), a]


def test_a1_pairing_with_coroot():
    alpha = A1.simple_root(0)
    assert A1.pairing(alpha, A1.positive_coroots[0]) == 2
