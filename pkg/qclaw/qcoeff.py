"""
Exact arithmetic in the coefficient ring R = Q[q^(1/2), q^(-1/2)].

An element is stored as a sparse map k -> c meaning sum of c * q^(k/2) with exact
rational c. The specialization q^(1/2) -> 1 and divisibility by p = q^(1/2) - 1
are the two operations everything else is built on.
"""

import math
import re
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

from .errors import NotDivisible

Scalar = Union[int, Fraction]

_TERM_RE = re.compile(r"^(?P<c>[-+]?\d+(?:/\d+)?)(?:\*q\^\((?P<k>[-+]?\d+)/2\))?$")


class QCoeff:
    """Immutable Laurent polynomial in q^(1/2) with rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[int, Scalar]] = None):
        clean: Dict[int, Fraction] = {}
        for k, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                clean[int(k)] = c
        self._terms = clean

    # Constructors
    @classmethod
    def constant(cls, c: Scalar) -> "QCoeff":
        return cls({0: c})

    @classmethod
    def q_power(cls, k: int, coeff: Scalar = 1) -> "QCoeff":
        """Return coeff * q^(k/2)."""
        return cls({k: coeff})

    @classmethod
    def _from_clean(cls, terms: Dict[int, Fraction]) -> "QCoeff":
        out = cls.__new__(cls)
        out._terms = terms
        return out

    @classmethod
    def parse(cls, text: str) -> "QCoeff":
        """Inverse of str(): terms joined by ' + ', each `c*q^(k/2)` or a bare rational."""
        text = text.strip()
        if text == "0":
            return cls()
        terms: Dict[int, Fraction] = {}
        for raw in text.split(" + "):
            match = _TERM_RE.match(raw.strip())
            if not match:
                raise ValueError(f"malformed coefficient term: {raw!r}")
            k = int(match.group("k") or 0)
            terms[k] = terms.get(k, Fraction(0)) + Fraction(match.group("c"))
        return cls(terms)

    # Accessors
    @property
    def terms(self) -> Dict[int, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def min_exponent(self) -> int:
        return min(self._terms)

    def max_exponent(self) -> int:
        return max(self._terms)

    # Ring structure
    @staticmethod
    def _coerce(other: object) -> Optional["QCoeff"]:
        if isinstance(other, QCoeff):
            return other
        if isinstance(other, (int, Fraction)):
            return QCoeff.constant(other)
        return None

    def __add__(self, other: object) -> "QCoeff":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for k, c in other._terms.items():
            s = terms.get(k, 0) + c
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        return QCoeff._from_clean(terms)

    __radd__ = __add__

    def __neg__(self) -> "QCoeff":
        return QCoeff._from_clean({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: object) -> "QCoeff":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> "QCoeff":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other: object) -> "QCoeff":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: Dict[int, Fraction] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = k1 + k2
                terms[k] = terms.get(k, 0) + c1 * c2
        return QCoeff(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "QCoeff":
        if n < 0:
            if not self.is_monomial():
                raise NotDivisible(f"{self} is not a unit of R")
            (k, c), = self._terms.items()
            return QCoeff.q_power(k * n, c**n)
        result = QCoeff.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "QCoeff":
        """Multiply by the unit q^(k/2)."""
        return QCoeff._from_clean({e + k: c for e, c in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if not self._terms:
            return hash(0)
        if set(self._terms) == {0}:
            return hash(self._terms[0])
        return hash(tuple(sorted(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # Specialization and divisibility
    def eval_at_one(self) -> Fraction:
        return sum(self._terms.values(), Fraction(0))

    def exact_div(self, other: "QCoeff") -> "QCoeff":
        """Return self / other when the quotient lies in R; raise NotDivisible otherwise."""
        other = self._coerce(other)
        if other is None or other.is_zero():
            raise ZeroDivisionError("division by zero in R")
        if self.is_zero():
            return QCoeff()
        if other.is_monomial():
            (k, c), = other._terms.items()
            return QCoeff._from_clean({e - k: v / c for e, v in self._terms.items()})

        top, lead = other.max_exponent(), other._terms[other.max_exponent()]
        floor = self.min_exponent() - other.min_exponent()
        remainder = dict(self._terms)
        quotient: Dict[int, Fraction] = {}
        while remainder:
            e = max(remainder)
            qe = e - top
            if qe < floor:
                raise NotDivisible(f"{self} is not divisible by {other} in R")
            c = remainder[e] / lead
            quotient[qe] = c
            for k, v in other._terms.items():
                key = k + qe
                s = remainder.get(key, 0) - c * v
                if s:
                    remainder[key] = s
                else:
                    remainder.pop(key, None)
        return QCoeff._from_clean(quotient)

    def divide_by_p(self) -> "QCoeff":
        if self.eval_at_one() != 0:
            raise NotDivisible(f"{self} is not divisible by p = q^(1/2) - 1")
        return self.exact_div(P)

    def p_valuation(self) -> Union[int, float]:
        if self.is_zero():
            return math.inf
        v = 0
        x = self
        while x.eval_at_one() == 0:
            x = x.exact_div(P)
            v += 1
        return v

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in sorted(self._terms.items()):
            parts.append(str(c) if k == 0 else f"{c}*q^({k}/2)")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"QCoeff('{self}')"


ONE = QCoeff.constant(1)
# p = q^(1/2) - 1, the prime whose residue field is K_1
P = QCoeff({1: 1, 0: -1})


def coeff_arith(a: QCoeff, b: QCoeff, op: str) -> QCoeff:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown coefficient operation: {op}")


def eval_at_one(a: QCoeff) -> Fraction:
    return a.eval_at_one()


def p_valuation(a: QCoeff) -> Union[int, float]:
    """Largest v with p^v dividing a; math.inf for a = 0."""
    return a.p_valuation()


def divide_by_p_exact(a: QCoeff) -> QCoeff:
    return a.divide_by_p()
