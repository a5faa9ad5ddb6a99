"""Commutative Laurent polynomials over Q, the q = 1 shadow of a based quantum torus."""

from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import DimensionMismatch, NotDivisible

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


def default_names(n: int) -> List[str]:
    return [f"x{i}" for i in range(1, n + 1)]


def format_monomial(exponent: Exponent, names: Sequence[str]) -> str:
    factors = []
    for name, e in zip(names, exponent):
        if e == 1:
            factors.append(name)
        elif e != 0:
            factors.append(f"{name}^{e}")
    return "*".join(factors) if factors else "1"


def degree_box(exponents: Sequence[Exponent]) -> Tuple[Exponent, Exponent]:
    """Coordinatewise minimum and maximum of a nonempty support."""
    return (
        tuple(min(col) for col in zip(*exponents)),
        tuple(max(col) for col in zip(*exponents)),
    )


class LaurentPolynomial:
    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Optional[Mapping[Sequence[int], Scalar]] = None):
        self.nvars = nvars
        clean: Dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise DimensionMismatch(f"exponent {e} does not have length {nvars}")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self._terms = clean

    @classmethod
    def _from_clean(cls, nvars: int, terms: Dict[Exponent, Fraction]) -> "LaurentPolynomial":
        out = cls.__new__(cls)
        out.nvars = nvars
        out._terms = terms
        return out

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: Scalar = 1) -> "LaurentPolynomial":
        exponent = tuple(exponent)
        return cls(len(exponent), {exponent: coeff})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "LaurentPolynomial":
        """The 1-based i-th variable x_i."""
        e = [0] * nvars
        e[i - 1] = 1
        return cls.monomial(e)

    @classmethod
    def constant(cls, nvars: int, c: Scalar = 1) -> "LaurentPolynomial":
        return cls(nvars, {(0,) * nvars: c})

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, Fraction]]:
        return iter(sorted(self._terms.items(), reverse=True))

    def exponents(self) -> List[Exponent]:
        return sorted(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def leading(self) -> Tuple[Exponent, Fraction]:
        e = max(self._terms)
        return e, self._terms[e]

    def _check(self, other: "LaurentPolynomial") -> None:
        if other.nvars != self.nvars:
            raise DimensionMismatch(f"Laurent polynomials in {self.nvars} and {other.nvars} variables")

    def _coerce(self, other: object) -> Optional["LaurentPolynomial"]:
        if isinstance(other, LaurentPolynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPolynomial.constant(self.nvars, other)
        return None

    def __add__(self, other: object) -> "LaurentPolynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for e, c in other._terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return LaurentPolynomial._from_clean(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial._from_clean(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: object) -> "LaurentPolynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: object) -> "LaurentPolynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return LaurentPolynomial._from_clean(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPolynomial":
        if n < 0:
            if len(self._terms) != 1:
                raise NotDivisible(f"{self} is not a unit")
            (e, c), = self._terms.items()
            return LaurentPolynomial.monomial(tuple(n * x for x in e), c**n)
        result = LaurentPolynomial.constant(self.nvars)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(self.nvars, other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.nvars, tuple(sorted(self._terms.items()))))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def divide_exact(self, g: "LaurentPolynomial") -> "LaurentPolynomial":
        """
        Return h with g * h == self, or raise NotDivisible.

        Leading terms in lex order are matched one at a time; every quotient exponent
        must stay inside the coordinatewise degree box of any true quotient, which
        bounds the loop.
        """
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return LaurentPolynomial(self.nvars)
        y_lo, y_hi = degree_box(list(self._terms))
        g_lo, g_hi = degree_box(list(g._terms))
        lo = tuple(a - b for a, b in zip(y_lo, g_lo))
        hi = tuple(a - b for a, b in zip(y_hi, g_hi))
        lead_e, lead_c = g.leading()

        remainder = self
        quotient: Dict[Exponent, Fraction] = {}
        while not remainder.is_zero():
            e, c = remainder.leading()
            b = tuple(x - y for x, y in zip(e, lead_e))
            if any(x < low or x > high for x, low, high in zip(b, lo, hi)):
                raise NotDivisible(f"{self} is not divisible by {g}")
            coeff = c / lead_c
            quotient[b] = coeff
            remainder = remainder - g * LaurentPolynomial.monomial(b, coeff)
        return LaurentPolynomial._from_clean(self.nvars, quotient)

    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        if not self._terms:
            return "0"
        names = list(names) if names else default_names(self.nvars)
        out = ""
        for i, (e, c) in enumerate(self.items()):
            mono = format_monomial(e, names)
            mag = abs(c)
            if mono == "1":
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if i == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LaurentPolynomial('{self}')"
