import random

import pytest

from qclaw.errors import DimensionMismatch, FrameMismatch, NotDivisible, NotSkewSymmetric
from qclaw.laurent import LaurentPolynomial
from qclaw.qcoeff import P, QCoeff
from qclaw.qtorus import (
    ToricFrame,
    decompose_along,
    elem_arith,
    from_ordered_coordinates,
    left_divide_exact,
    monomial_mul,
    ordered_monomial,
    p_divisible,
    right_divide_exact,
    specialize_q1,
    to_ordered_coordinates,
)

RANK1 = ToricFrame(((0, -1), (1, 0)))


def random_element(frame, rng, terms=3):
    x = frame.zero()
    for _ in range(terms):
        e = [rng.randint(-2, 2) for _ in range(frame.rank)]
        x = x + frame.monomial(e, QCoeff({rng.randint(-2, 2): rng.randint(-3, 3) or 1}))
    return x


def test_generators_q_commute():
    x1, x2 = RANK1.gen(1), RANK1.gen(2)
    # X_1 X_2 = q^(lambda_12) X_2 X_1
    assert x1 * x2 == (x2 * x1).scale(QCoeff.q_power(-2))
    assert monomial_mul(RANK1, (1, 0), (0, 1)) == (QCoeff.q_power(-1), (1, 1))


def test_frame_validation():
    with pytest.raises(NotSkewSymmetric):
        ToricFrame(((0, 1), (1, 0)))
    with pytest.raises(DimensionMismatch):
        ToricFrame(((0, 1, 2), (-1, 0, 0)))
    with pytest.raises(DimensionMismatch):
        RANK1.monomial((1, 2, 3))


def test_product_is_associative():
    rng = random.Random(11)
    frame = ToricFrame(((0, 1, -2), (-1, 0, 1), (2, -1, 0)))
    for _ in range(20):
        a, b, c = (random_element(frame, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert elem_arith(a, b, "add") == a + b


def test_frames_do_not_mix():
    other = ToricFrame(((0, 1), (-1, 0)), frame_id="other")
    with pytest.raises(FrameMismatch):
        RANK1.gen(1) + other.gen(1)


def test_left_and_right_division():
    rng = random.Random(5)
    for _ in range(20):
        g = random_element(RANK1, rng, terms=2)
        h = random_element(RANK1, rng)
        if g.is_zero():
            continue
        assert left_divide_exact(g * h, g) == h
        assert right_divide_exact(h * g, g) == h


def test_division_failure():
    x1, x2 = RANK1.gen(1), RANK1.gen(2)
    with pytest.raises(NotDivisible):
        left_divide_exact(RANK1.one(), x1 + x2)
    with pytest.raises(ZeroDivisionError):
        left_divide_exact(x1, RANK1.zero())


def test_decompose_along_example():
    x = RANK1.monomial((1, 1)) + RANK1.monomial((2, 0))
    parts = decompose_along(x, 1).parts
    assert parts[1] == RANK1.monomial((0, 1), QCoeff.q_power(1))
    assert parts[2] == RANK1.one()
    assert set(parts) == {1, 2}


def test_decompose_reassembles():
    rng = random.Random(2)
    for _ in range(10):
        x = random_element(RANK1, rng, terms=4)
        assert decompose_along(x, 2).reassemble() == x


def test_specialize_q1():
    x = RANK1.monomial((-1, 1), QCoeff({1: 2, 0: -1})) + RANK1.monomial((0, 0), 3)
    expected = LaurentPolynomial(2, {(-1, 1): 1, (0, 0): 3})
    assert specialize_q1(x) == expected


def test_specialize_is_multiplicative():
    rng = random.Random(8)
    for _ in range(10):
        a, b = random_element(RANK1, rng), random_element(RANK1, rng)
        assert (a * b).specialize() == a.specialize() * b.specialize()


def test_p_divisible():
    x = RANK1.gen(1).scale(P)
    assert p_divisible(x) == 1
    assert p_divisible(RANK1.gen(1)) == 0
    assert p_divisible(x + RANK1.gen(2)) == 0


def test_ordered_basis_conversion():
    # X_1 X_2 = q^(-1/2) M(1,1) in the rank-1 frame
    assert RANK1.gen(1) * RANK1.gen(2) == ordered_monomial(RANK1, (1, 1))
    assert ordered_monomial(RANK1, (1, 1)) == RANK1.monomial((1, 1), QCoeff.q_power(-1))
    x = RANK1.monomial((2, 3), 5) + RANK1.monomial((-1, 1))
    assert from_ordered_coordinates(RANK1, to_ordered_coordinates(x)) == x


def test_text():
    x = RANK1.monomial((-1, 1)) + RANK1.monomial((-1, 0), QCoeff({0: 1, 1: 1}))
    assert str(x) == "(1 + 1*q^(1/2)) * M[-1,0] + 1 * M[-1,1]"
    assert str(RANK1.zero()) == "0"
