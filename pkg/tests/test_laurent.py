import pytest

from qclaw.errors import DimensionMismatch, NotDivisible
from qclaw.laurent import LaurentPolynomial, default_names


def x(i, n=2):
    return LaurentPolynomial.variable(n, i)


def test_text_is_descending_with_signs():
    f = x(1) ** -1 * x(2) + x(1) ** -1
    assert str(f) == "x1^-1*x2 + x1^-1"
    g = 3 * x(1) - x(2) ** 2 - 1
    assert str(g) == "3*x1 - x2^2 - 1"
    assert str(LaurentPolynomial(2)) == "0"
    assert (x(1) - 2).to_text(["a", "b"]) == "a - 2"


def test_divide_exact():
    f = x(1) + x(2) + 1
    g = x(1) * x(2) ** -1 - 3
    assert (f * g).divide_exact(g) == f
    assert (x(2) + 1).divide_exact(x(1)) == x(1) ** -1 * x(2) + x(1) ** -1
    with pytest.raises(NotDivisible):
        (x(1) + 1).divide_exact(x(1) + x(2))


def test_powers_and_dimension_checks():
    assert (x(1) + 1) ** 2 == x(1) ** 2 + 2 * x(1) + 1
    with pytest.raises(NotDivisible):
        (x(1) + 1) ** -1
    with pytest.raises(DimensionMismatch):
        x(1) + x(1, n=3)
    assert default_names(3) == ["x1", "x2", "x3"]
