"""
Based quantum tori T_q(Lambda) in a normalized monomial basis.

Monomials satisfy M(a) M(b) = q^(Lambda(a, b)/2) M(a + b) with Lambda(a, b) = a^T Lambda b,
so that the generators X_i = M(e_i) obey X_i X_j = q^(lambda_ij) X_j X_i. The ordered
products X_1^a_1 ... X_m^a_m differ from M(a) by an explicit unit, see ordered_monomial().
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import DimensionMismatch, FrameMismatch, NotDivisible, NotSkewSymmetric
from .laurent import LaurentPolynomial, degree_box, format_monomial
from .qcoeff import QCoeff

Exponent = Tuple[int, ...]
Matrix = Tuple[Tuple[int, ...], ...]
Scalar = Union[int, Fraction, QCoeff]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def check_skew_symmetric(matrix: Matrix) -> None:
    m = len(matrix)
    for i, row in enumerate(matrix):
        if len(row) != m:
            raise DimensionMismatch(f"commutation matrix must be {m}x{m}", row=i + 1)
        for j in range(i, m):
            if matrix[i][j] != -matrix[j][i]:
                raise NotSkewSymmetric("matrix is not skew-symmetric", row=i + 1, col=j + 1)


@dataclass(frozen=True)
class ToricFrame:
    """A skew-symmetric integer matrix together with a label naming the seed it came from."""

    commutation: Matrix
    frame_id: str = "initial"

    def __post_init__(self) -> None:
        matrix = as_matrix(self.commutation)
        if not matrix:
            raise DimensionMismatch("a frame needs positive rank")
        check_skew_symmetric(matrix)
        object.__setattr__(self, "commutation", matrix)

    @property
    def rank(self) -> int:
        return len(self.commutation)

    def form(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Lambda(a, b) = a^T Lambda b."""
        total = 0
        for ai, row in zip(a, self.commutation):
            if ai:
                total += ai * sum(r * bj for r, bj in zip(row, b))
        return total

    def ordered_exponent(self, a: Sequence[int]) -> int:
        """s(a) = sum_{i<j} a_i a_j lambda_ij, so X_1^a_1 ... X_m^a_m = q^(s(a)/2) M(a)."""
        m = self.rank
        return sum(a[i] * a[j] * self.commutation[i][j] for i in range(m) for j in range(i + 1, m))

    def check_exponent(self, a: Sequence[int]) -> Exponent:
        a = tuple(int(x) for x in a)
        if len(a) != self.rank:
            raise DimensionMismatch(f"exponent vector {a} does not have length {self.rank}")
        return a

    def monomial(self, a: Sequence[int], coeff: Scalar = 1) -> "TorusElement":
        return TorusElement(self, {self.check_exponent(a): coeff})

    def gen(self, i: int) -> "TorusElement":
        """X_i = M(e_i), 1-based."""
        e = [0] * self.rank
        e[i - 1] = 1
        return self.monomial(e)

    def one(self) -> "TorusElement":
        return self.monomial((0,) * self.rank)

    def zero(self) -> "TorusElement":
        return TorusElement(self, {})


def _as_qcoeff(c: Scalar) -> QCoeff:
    return c if isinstance(c, QCoeff) else QCoeff.constant(c)


def _accumulate(terms: Dict[Exponent, QCoeff], e: Exponent, c: QCoeff) -> None:
    s = terms[e] + c if e in terms else c
    if s.is_zero():
        terms.pop(e, None)
    else:
        terms[e] = s


class TorusElement:
    """A finite R-linear combination of normalized monomials M(c) of one frame."""

    __slots__ = ("frame", "_terms")

    def __init__(self, frame: ToricFrame, terms: Optional[Mapping[Sequence[int], Scalar]] = None):
        self.frame = frame
        clean: Dict[Exponent, QCoeff] = {}
        for e, c in (terms or {}).items():
            _accumulate(clean, frame.check_exponent(e), _as_qcoeff(c))
        self._terms = clean

    @classmethod
    def _from_clean(cls, frame: ToricFrame, terms: Dict[Exponent, QCoeff]) -> "TorusElement":
        out = cls.__new__(cls)
        out.frame = frame
        out._terms = terms
        return out

    @property
    def terms(self) -> Dict[Exponent, QCoeff]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, QCoeff]]:
        return iter(sorted(self._terms.items()))

    def exponents(self) -> List[Exponent]:
        return sorted(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def leading(self) -> Tuple[Exponent, QCoeff]:
        e = max(self._terms)
        return e, self._terms[e]

    def with_frame(self, frame: ToricFrame) -> "TorusElement":
        """The same coefficients read in another frame of the same rank."""
        if frame.rank != self.frame.rank:
            raise FrameMismatch(f"cannot move an element of rank {self.frame.rank} to rank {frame.rank}")
        return TorusElement._from_clean(frame, dict(self._terms))

    def _same_frame(self, other: "TorusElement") -> None:
        if other.frame != self.frame:
            raise FrameMismatch(f"elements live in different frames: {self.frame.frame_id!r} vs {other.frame.frame_id!r}")

    def _coerce(self, other: object) -> Optional["TorusElement"]:
        if isinstance(other, TorusElement):
            self._same_frame(other)
            return other
        if isinstance(other, (int, Fraction, QCoeff)):
            return self.frame.one() * _as_qcoeff(other) if other else self.frame.zero()
        return None

    def __add__(self, other: object) -> "TorusElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for e, c in other._terms.items():
            _accumulate(terms, e, c)
        return TorusElement._from_clean(self.frame, terms)

    __radd__ = __add__

    def __neg__(self) -> "TorusElement":
        return TorusElement._from_clean(self.frame, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: object) -> "TorusElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> "TorusElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def scale(self, c: Scalar) -> "TorusElement":
        c = _as_qcoeff(c)
        if c.is_zero():
            return self.frame.zero()
        return TorusElement._from_clean(self.frame, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other: object) -> "TorusElement":
        if isinstance(other, (int, Fraction, QCoeff)):
            return self.scale(other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        self._same_frame(other)
        frame = self.frame
        terms: Dict[Exponent, QCoeff] = {}
        for b, cb in other._terms.items():
            lam_b = [sum(r * bj for r, bj in zip(row, b)) for row in frame.commutation]
            for a, ca in self._terms.items():
                k = sum(ai * lb for ai, lb in zip(a, lam_b))
                e = tuple(x + y for x, y in zip(a, b))
                _accumulate(terms, e, (ca * cb).shift(k))
        return TorusElement._from_clean(frame, terms)

    def __rmul__(self, other: object) -> "TorusElement":
        if isinstance(other, (int, Fraction, QCoeff)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "TorusElement":
        if n < 0:
            if not self.is_monomial():
                raise NotDivisible("only monomials are invertible in a quantum torus")
            (e, c), = self._terms.items()
            # M(a)^n = M(na) because Lambda(a, a) = 0
            return TorusElement._from_clean(self.frame, {tuple(n * x for x in e): c**n})
        result = self.frame.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, QCoeff)):
            other = self._coerce(other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.frame == other.frame and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.frame, tuple(sorted(self._terms.items()))))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def specialize(self) -> LaurentPolynomial:
        return LaurentPolynomial(self.frame.rank, {e: c.eval_at_one() for e, c in self._terms.items()})

    def p_valuation(self) -> Union[int, float]:
        if not self._terms:
            return math.inf
        return min(c.p_valuation() for c in self._terms.values())

    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items()):
            coeff = str(c) if c.is_monomial() else f"({c})"
            if names:
                parts.append(f"{coeff} * {format_monomial(e, names)}")
            else:
                parts.append(f"{coeff} * M[{','.join(str(x) for x in e)}]")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"TorusElement({self.frame.frame_id!r}, '{self}')"


@dataclass
class Decomposition:
    """x = sum_j M(e_k)^j * c_j with every c_j supported on vectors whose k-th entry is 0."""

    frame: ToricFrame
    direction: int
    parts: Dict[int, TorusElement]

    def reassemble(self) -> TorusElement:
        gen = self.frame.gen(self.direction)
        total = self.frame.zero()
        for j, c in sorted(self.parts.items()):
            total = total + (gen**j) * c
        return total


def monomial_mul(frame: ToricFrame, a: Sequence[int], b: Sequence[int]) -> Tuple[QCoeff, Exponent]:
    a, b = frame.check_exponent(a), frame.check_exponent(b)
    return QCoeff.q_power(frame.form(a, b)), tuple(x + y for x, y in zip(a, b))


def elem_arith(x: TorusElement, y: Union[TorusElement, Scalar], op: str) -> TorusElement:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "scalar_mul":
        return x.scale(y)
    raise ValueError(f"unknown torus operation: {op}")


def _divide(y: TorusElement, g: TorusElement, left: bool) -> TorusElement:
    y._same_frame(g)
    if g.is_zero():
        raise ZeroDivisionError("division by zero torus element")
    frame = y.frame
    if y.is_zero():
        return frame.zero()
    # Any true quotient has its support in this box: for each coordinate, the extreme
    # degrees of a product are the sums of the extreme degrees of the factors.
    y_lo, y_hi = degree_box(list(y._terms))
    g_lo, g_hi = degree_box(list(g._terms))
    lo = tuple(s - t for s, t in zip(y_lo, g_lo))
    hi = tuple(s - t for s, t in zip(y_hi, g_hi))
    a, ca = g.leading()

    remainder = y
    quotient: Dict[Exponent, QCoeff] = {}
    while not remainder.is_zero():
        e, ce = remainder.leading()
        b = tuple(s - t for s, t in zip(e, a))
        if any(x < low or x > high for x, low, high in zip(b, lo, hi)):
            raise NotDivisible(f"{y} is not {'left' if left else 'right'}-divisible by {g}")
        twist = frame.form(a, b) if left else frame.form(b, a)
        coeff = ce.exact_div(ca.shift(twist))
        quotient[b] = coeff
        term = TorusElement._from_clean(frame, {b: coeff})
        remainder = remainder - (g * term if left else term * g)
    return TorusElement._from_clean(frame, quotient)


def left_divide_exact(y: TorusElement, g: TorusElement) -> TorusElement:
    """Return h with g * h == y, or raise NotDivisible."""
    return _divide(y, g, left=True)


def right_divide_exact(y: TorusElement, g: TorusElement) -> TorusElement:
    """Return h with h * g == y, or raise NotDivisible."""
    return _divide(y, g, left=False)


def decompose_along(x: TorusElement, k: int) -> Decomposition:
    frame = x.frame
    if not 1 <= k <= frame.rank:
        raise DimensionMismatch(f"direction {k} outside 1..{frame.rank}")
    idx = k - 1
    e_k = tuple(1 if i == idx else 0 for i in range(frame.rank))
    buckets: Dict[int, Dict[Exponent, QCoeff]] = {}
    for e, c in x._terms.items():
        j = e[idx]
        r = tuple(0 if i == idx else v for i, v in enumerate(e))
        # M(j e_k) M(r) = q^(j Lambda(e_k, r)/2) M(j e_k + r)
        buckets.setdefault(j, {})[r] = c.shift(-j * frame.form(e_k, r))
    parts = {j: TorusElement._from_clean(frame, terms) for j, terms in buckets.items()}
    return Decomposition(frame=frame, direction=k, parts=parts)


def specialize_q1(x: TorusElement) -> LaurentPolynomial:
    return x.specialize()


def p_divisible(x: TorusElement) -> Union[int, float]:
    """Minimum p-valuation over the coefficients; >= 1 exactly when x lies in pT."""
    return x.p_valuation()


def ordered_monomial(frame: ToricFrame, a: Sequence[int]) -> TorusElement:
    """X_1^a_1 ... X_m^a_m written in the normalized basis."""
    a = frame.check_exponent(a)
    return frame.monomial(a, QCoeff.q_power(frame.ordered_exponent(a)))


def to_ordered_coordinates(x: TorusElement) -> Dict[Exponent, QCoeff]:
    """Coefficients of x with respect to the ordered-product basis X^a."""
    return {e: c.shift(-x.frame.ordered_exponent(e)) for e, c in x._terms.items()}


def from_ordered_coordinates(frame: ToricFrame, coeffs: Mapping[Sequence[int], Scalar]) -> TorusElement:
    total = frame.zero()
    for a, c in coeffs.items():
        total = total + ordered_monomial(frame, a).scale(c)
    return total
