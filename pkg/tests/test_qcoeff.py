import math
import random
from fractions import Fraction

import pytest

from qclaw.errors import NotDivisible
from qclaw.qcoeff import ONE, P, QCoeff, coeff_arith, divide_by_p_exact, eval_at_one, p_valuation


def test_arithmetic_and_text():
    a = QCoeff({1: 1, 0: 2})
    b = QCoeff.q_power(-1, 3)
    assert str(a) == "2 + 1*q^(1/2)"
    assert str(a + b) == "3*q^(-1/2) + 2 + 1*q^(1/2)"
    assert a * b == QCoeff({0: 3, -1: 6})
    assert coeff_arith(a, b, "add") == a + b
    assert coeff_arith(a, b, "mul") == a * b
    assert coeff_arith(a, b, "neg") == -a
    assert a - a == 0
    assert str(QCoeff()) == "0"


def test_parse_inverts_str():
    rng = random.Random(3)
    for _ in range(50):
        c = QCoeff({rng.randint(-5, 5): Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(4)})
        assert QCoeff.parse(str(c)) == c


def test_eval_at_one():
    assert eval_at_one(QCoeff({2: 3, -1: -1})) == 2
    assert eval_at_one(P) == 0
    assert ONE.eval_at_one() == 1


def test_p_valuation():
    assert p_valuation(P**3 * QCoeff({0: 2, 5: 1})) == 3
    assert p_valuation(QCoeff({4: 1})) == 0
    assert p_valuation(QCoeff()) == math.inf
    # q - 1 = p * (q^(1/2) + 1)
    assert p_valuation(QCoeff({2: 1, 0: -1})) == 1


def test_divide_by_p():
    x = QCoeff({3: 1, -2: -1})
    assert divide_by_p_exact(x) * P == x
    with pytest.raises(NotDivisible):
        divide_by_p_exact(QCoeff({1: 1}))


def test_exact_div():
    a = QCoeff({0: 1, 1: 1})
    b = QCoeff({-2: 2, 3: -1, 1: 1})
    assert (a * b).exact_div(a) == b
    assert QCoeff({4: 6}).exact_div(QCoeff.q_power(1, 2)) == QCoeff({3: 3})
    with pytest.raises(NotDivisible):
        QCoeff({0: 1, 2: 1}).exact_div(a)
    with pytest.raises(ZeroDivisionError):
        a.exact_div(QCoeff())


def test_negative_powers_only_for_units():
    assert QCoeff.q_power(2, 3) ** -1 == QCoeff.q_power(-2, Fraction(1, 3))
    with pytest.raises(NotDivisible):
        P**-1
