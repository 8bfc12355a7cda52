"""Dense univariate polynomials over exact rationals.

A Poly stores coefficients ascending by power, trailing zeros stripped,
every entry a Fraction. Instances are immutable and hashable, so they can
sit in tuples, dicts and test fixtures without defensive copies.

The zero polynomial has an empty coefficient tuple; its degree is the
sentinel -1. That convention makes degree bounds such as deg(a_n) <= n
hold for null sequences without special cases, but any code that needs
"degree exactly n" must test is_zero first.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import MathDomainError, ParseError
from .rationals import format_rational, parse_rational

Scalar = Fraction | int


class Poly:
    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs: tuple[Fraction, ...] = tuple(cs)

    @staticmethod
    def constant(c: Scalar) -> "Poly":
        return Poly((c,))

    @staticmethod
    def monomial(power: int, c: Scalar = 1) -> "Poly":
        if power < 0:
            raise MathDomainError("monomial power must be >= 0")
        return Poly((0,) * power + (c,))

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Degree, with -1 as the zero-polynomial sentinel."""
        return len(self._coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def leading(self) -> Fraction:
        if not self._coeffs:
            raise MathDomainError("zero polynomial has no leading coefficient")
        return self._coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return bool(self._coeffs) and self._coeffs[-1] == 1

    def coefficient(self, power: int) -> Fraction:
        if 0 <= power < len(self._coeffs):
            return self._coeffs[power]
        return Fraction(0)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self._coeffs))

    def __mul__(self, other: "Poly | Scalar") -> "Poly":
        if isinstance(other, Poly):
            a, b = self._coeffs, other._coeffs
            if not a or not b:
                return ZERO
            out = [Fraction(0)] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        out[i + j] += ai * bj
            return Poly(out)
        c = Fraction(other)
        if c == 0:
            return ZERO
        return Poly(tuple(c * x for x in self._coeffs))

    def __rmul__(self, other: Scalar) -> "Poly":
        return self.__mul__(other)

    def __call__(self, point: Scalar) -> Fraction:
        """Evaluate by Horner's scheme."""
        acc = Fraction(0)
        x = Fraction(point)
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        """self(inner(x)), Horner's scheme over Poly."""
        acc = ZERO
        for c in reversed(self._coeffs):
            acc = acc * inner + Poly.constant(c)
        return acc

    def divmod_linear(self, root: Scalar) -> tuple["Poly", Fraction]:
        """Synthetic division by (x - root): self = q*(x - root) + r."""
        if not self._coeffs:
            return ZERO, Fraction(0)
        r = Fraction(root)
        acc = Fraction(0)
        out: list[Fraction] = []
        for c in reversed(self._coeffs):
            acc = acc * r + c
            out.append(acc)
        rem = out.pop()
        # Horner walks top-down, so the quotient came out reversed
        return Poly(reversed(out)), rem

    def divmod_by(self, divisor: "Poly") -> tuple["Poly", "Poly"]:
        """Long division: self = q*divisor + r with deg r < deg divisor."""
        if divisor.is_zero:
            raise MathDomainError("division by the zero polynomial")
        rem = list(self._coeffs)
        dd = divisor.degree
        lead = divisor.leading
        if len(rem) - 1 < dd:
            return ZERO, self
        q = [Fraction(0)] * (len(rem) - dd)
        for i in range(len(rem) - dd - 1, -1, -1):
            c = rem[i + dd] / lead
            if c:
                q[i] = c
                for j, djc in enumerate(divisor._coeffs):
                    rem[i + j] -= c * djc
        return Poly(q), Poly(rem[:dd])

    def derivative(self) -> "Poly":
        return Poly(tuple(k * c for k, c in enumerate(self._coeffs) if k))

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


ZERO = Poly()
ONE = Poly((1,))
X = Poly((0, 1))


def format_poly(f: Poly) -> str:
    """Human-readable form, highest power first, e.g. "x^2 - 1/2"."""
    if f.is_zero:
        return "0"
    parts: list[str] = []
    for k in range(f.degree, -1, -1):
        c = f.coefficient(k)
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = format_rational(mag)
        else:
            xk = "x" if k == 1 else f"x^{k}"
            body = xk if mag == 1 else f"{format_rational(mag)} {xk}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def poly_to_strings(f: Poly) -> list[str]:
    """JSON form: ascending coefficient list of rational strings."""
    return [format_rational(c) for c in f.coeffs]


def poly_from_strings(items: list[str | int]) -> Poly:
    if isinstance(items, (str, bytes)) or not isinstance(items, Sequence):
        raise ParseError("polynomial payload must be a list of rational strings")
    return Poly(tuple(parse_rational(c) for c in items))
