"""Exact rational arithmetic, Stirling tables and polynomials in ``n``.

Rationals are :class:`fractions.Fraction` throughout; they are always stored
in lowest terms with a positive denominator, which is the canonical form the
rest of the package relies on.

A :class:`RationalPolynomial` holds sparse rational coefficients in one of two
bases: ordinary powers ``n**d`` or falling factorials ``(n)_d``.  Moments of
the clique count come out of the profile enumeration naturally in the falling
factorial basis; asymptotic questions (leading terms) need the monomial one.
"""
from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .errors import OrderRangeError

Number = Union[int, Fraction]

DEFAULT_STIRLING_ORDER = 32


def binomial(a: int, b: int) -> int:
    """C(a, b) for ``a >= 0``; zero when ``b`` is outside ``0..a``."""
    if a < 0:
        raise ValueError(f"binomial needs a >= 0, got {a}")
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def falling_factorial(x: Number, m: int) -> Number:
    """x (x-1) ... (x-m+1), the empty product being 1."""
    out: Number = 1
    for i in range(m):
        out *= x - i
    return out


class StirlingTable:
    """Signed first-kind and second-kind Stirling numbers up to ``max_order``.

    Row ``m`` of ``first_kind_signed`` holds the coefficients of ``(x)_m`` in
    powers of ``x``; row ``m`` of ``second_kind`` holds the coefficients of
    ``x**m`` in falling factorials.  The two lower-triangular matrices are
    inverse to each other.
    """

    def __init__(self, max_order: int = DEFAULT_STIRLING_ORDER):
        if max_order < 0:
            raise ValueError("max_order must be non-negative")
        self.max_order = max_order
        first = [[1]]
        second = [[1]]
        for m in range(1, max_order + 1):
            prev_f, prev_s = first[-1], second[-1]
            row_f = [0] * (m + 1)
            row_s = [0] * (m + 1)
            for j in range(1, m + 1):
                up_f = prev_f[j] if j < m else 0
                up_s = prev_s[j] if j < m else 0
                row_f[j] = prev_f[j - 1] - (m - 1) * up_f
                row_s[j] = j * up_s + prev_s[j - 1]
            first.append(row_f)
            second.append(row_s)
        self._first = tuple(tuple(r) for r in first)
        self._second = tuple(tuple(r) for r in second)

    def _check(self, m: int, j: int) -> None:
        if not (0 <= j <= m <= self.max_order):
            raise OrderRangeError(
                f"Stirling lookup ({m}, {j}) outside 0 <= j <= m <= {self.max_order}"
            )

    def first_kind_signed(self, m: int, j: int) -> int:
        self._check(m, j)
        return self._first[m][j]

    def second_kind(self, m: int, j: int) -> int:
        self._check(m, j)
        return self._second[m][j]

    def first_row(self, m: int) -> tuple[int, ...]:
        self._check(m, m)
        return self._first[m]

    def second_row(self, m: int) -> tuple[int, ...]:
        self._check(m, m)
        return self._second[m]


@lru_cache(maxsize=None)
def _table_of_size(size: int) -> StirlingTable:
    return StirlingTable(size)


def stirling_table(min_order: int = DEFAULT_STIRLING_ORDER) -> StirlingTable:
    """Shared read-only table covering at least ``min_order``.

    Sizes are rounded up to a multiple of the default so that only a handful
    of tables are ever built.
    """
    size = DEFAULT_STIRLING_ORDER
    while size < min_order:
        size += DEFAULT_STIRLING_ORDER
    return _table_of_size(size)


def stirling_second(m: int, j: int) -> int:
    """Stirling number of the second kind S(m, j); zero for j outside 0..m."""
    if m < 0:
        raise OrderRangeError(f"negative order {m}")
    if not 0 <= j <= m:
        return 0
    return stirling_table(m).second_kind(m, j)


def stirling_first_signed(m: int, j: int) -> int:
    """Signed Stirling number of the first kind s(m, j); zero for j outside 0..m."""
    if m < 0:
        raise OrderRangeError(f"negative order {m}")
    if not 0 <= j <= m:
        return 0
    return stirling_table(m).first_kind_signed(m, j)


class Basis(str, enum.Enum):
    MONOMIAL = "monomial"
    FALLING = "ff"


class RationalPolynomial:
    """Immutable univariate polynomial in ``n`` with exact rational coefficients.

    Parameters
    ----------
    coefficients : mapping of degree to rational
        Zero entries are dropped.
    basis : Basis
        ``Basis.MONOMIAL`` means ``sum c_d n**d``; ``Basis.FALLING`` means
        ``sum c_d (n)_d``.
    """

    __slots__ = ("_coeffs", "_basis")

    def __init__(self, coefficients: Mapping[int, Number] | None = None,
                 basis: Basis | str = Basis.MONOMIAL):
        basis = Basis(basis)
        coeffs: dict[int, Fraction] = {}
        for d, c in (coefficients or {}).items():
            if d < 0:
                raise ValueError(f"negative degree {d}")
            c = Fraction(c)
            if c:
                coeffs[int(d)] = c
        self._coeffs = coeffs
        self._basis = basis

    # construction helpers

    @classmethod
    def zero(cls, basis: Basis | str = Basis.MONOMIAL) -> "RationalPolynomial":
        return cls({}, basis)

    @classmethod
    def constant(cls, c: Number, basis: Basis | str = Basis.MONOMIAL) -> "RationalPolynomial":
        return cls({0: c}, basis)

    @classmethod
    def from_list(cls, coeffs: Iterable[Number],
                  basis: Basis | str = Basis.MONOMIAL) -> "RationalPolynomial":
        """Build from a dense list, lowest degree first."""
        return cls(dict(enumerate(coeffs)), basis)

    # accessors

    @property
    def basis(self) -> Basis:
        return self._basis

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def coefficient(self, d: int) -> Fraction:
        return self._coeffs.get(d, Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def degree(self) -> int | float:
        """Largest stored degree; ``-inf`` for the zero polynomial.

        The degree is the same in both bases since ``(n)_d`` is monic.
        """
        return max(self._coeffs) if self._coeffs else -math.inf

    def leading_term(self) -> tuple[int, Fraction] | None:
        """(degree, coefficient of n**degree), or None for the zero polynomial."""
        if not self._coeffs:
            return None
        d = max(self._coeffs)
        return d, self._coeffs[d]

    def dense(self) -> list[Fraction]:
        if not self._coeffs:
            return []
        return [self.coefficient(d) for d in range(max(self._coeffs) + 1)]

    # basis handling

    def to_basis(self, target: Basis | str) -> "RationalPolynomial":
        return convert_basis(self, target)

    def monomial(self) -> "RationalPolynomial":
        return convert_basis(self, Basis.MONOMIAL)

    def falling(self) -> "RationalPolynomial":
        return convert_basis(self, Basis.FALLING)

    # evaluation and arithmetic

    def __call__(self, n: Number) -> Fraction:
        return poly_eval(self, n)

    def __neg__(self) -> "RationalPolynomial":
        return RationalPolynomial({d: -c for d, c in self._coeffs.items()}, self._basis)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPolynomial.constant(other, self._basis)
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return poly_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPolynomial.constant(other, self._basis)
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return poly_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return poly_scale(self, other)
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return poly_scale(self, 1 / Fraction(other))
        return NotImplemented

    def __pow__(self, e: int) -> "RationalPolynomial":
        if e < 0:
            raise ValueError("negative exponent")
        out = RationalPolynomial.constant(1)
        base = self.monomial()
        while e:
            if e & 1:
                out = poly_mul(out, base)
            base = poly_mul(base, base)
            e >>= 1
        return out.to_basis(self._basis)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalPolynomial.constant(other)
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        if self._basis == other._basis:
            return self._coeffs == other._coeffs
        return self._coeffs == other.to_basis(self._basis)._coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.monomial()._coeffs.items())))

    def __repr__(self) -> str:
        return f"RationalPolynomial({self._format()}, basis={self._basis.value!r})"

    def __str__(self) -> str:
        return self._format()

    def _format(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for d in sorted(self._coeffs, reverse=True):
            c = self._coeffs[d]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if d == 0:
                body = str(mag)
            else:
                term = f"n^{d}" if self._basis is Basis.MONOMIAL else f"(n)_{d}"
                if d == 1 and self._basis is Basis.MONOMIAL:
                    term = "n"
                body = term if mag == 1 else f"{mag}*{term}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    # serialization

    def to_json(self) -> list[dict]:
        """JSON-ready list of terms, highest degree first.

        Numerators and denominators are decimal strings because they routinely
        exceed 64 bits.
        """
        return [
            {
                "degree": d,
                "numerator": str(c.numerator),
                "denominator": str(c.denominator),
                "basis": self._basis.value,
            }
            for d, c in sorted(self._coeffs.items(), reverse=True)
        ]

    @classmethod
    def from_json(cls, terms: list[dict],
                  basis: Basis | str | None = None) -> "RationalPolynomial":
        bases = {t["basis"] for t in terms}
        if len(bases) > 1:
            raise ValueError(f"mixed bases in serialized polynomial: {sorted(bases)}")
        if bases:
            found = Basis(bases.pop())
            if basis is not None and Basis(basis) != found:
                raise ValueError(f"expected basis {Basis(basis).value}, found {found.value}")
            basis = found
        coeffs = {}
        for t in terms:
            d = int(t["degree"])
            if d in coeffs:
                raise ValueError(f"duplicate degree {d}")
            coeffs[d] = Fraction(int(t["numerator"]), int(t["denominator"]))
        return cls(coeffs, basis or Basis.MONOMIAL)


def falling_factorial_poly(m: int) -> RationalPolynomial:
    """(n)_m = n (n-1) ... (n-m+1) in the monomial basis."""
    if m < 0:
        raise ValueError("order must be non-negative")
    row = stirling_table(m).first_row(m)
    return RationalPolynomial(dict(enumerate(row)), Basis.MONOMIAL)


def convert_basis(p: RationalPolynomial, target: Basis | str) -> RationalPolynomial:
    """Re-express ``p`` exactly in ``target`` basis."""
    target = Basis(target)
    if p.basis is target or p.is_zero():
        return RationalPolynomial(p.coefficients, target)
    table = stirling_table(int(p.degree()))
    out: dict[int, Fraction] = {}
    if target is Basis.FALLING:
        # n^d = sum_j S(d, j) (n)_j
        for d, c in p.coefficients.items():
            for j, s in enumerate(table.second_row(d)):
                if s:
                    out[j] = out.get(j, 0) + c * s
    else:
        # (n)_d = sum_j s(d, j) n^j
        for d, c in p.coefficients.items():
            for j, s in enumerate(table.first_row(d)):
                if s:
                    out[j] = out.get(j, 0) + c * s
    return RationalPolynomial(out, target)


def poly_eval(p: RationalPolynomial, n: Number) -> Fraction:
    if p.basis is Basis.MONOMIAL:
        acc = Fraction(0)
        if p.is_zero():
            return acc
        for d in range(int(p.degree()), -1, -1):  # Horner
            acc = acc * n + p.coefficient(d)
        return acc
    total = Fraction(0)
    ff: Number = 1
    coeffs = p.coefficients
    top = int(p.degree()) if coeffs else -1
    for d in range(top + 1):
        if d in coeffs:
            total += coeffs[d] * ff
        ff *= n - d
    return total


def poly_add(p: RationalPolynomial, q: RationalPolynomial) -> RationalPolynomial:
    """Sum, expressed in the basis of ``p``."""
    q = convert_basis(q, p.basis)
    out = p.coefficients
    for d, c in q.coefficients.items():
        out[d] = out.get(d, 0) + c
    return RationalPolynomial(out, p.basis)


def poly_scale(p: RationalPolynomial, c: Number) -> RationalPolynomial:
    c = Fraction(c)
    return RationalPolynomial({d: v * c for d, v in p.coefficients.items()}, p.basis)


def poly_mul(p: RationalPolynomial, q: RationalPolynomial) -> RationalPolynomial:
    """Product, expressed in the basis of ``p``; multiplication happens in powers of n."""
    a = convert_basis(p, Basis.MONOMIAL).coefficients
    b = convert_basis(q, Basis.MONOMIAL).coefficients
    out: dict[int, Fraction] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return convert_basis(RationalPolynomial(out, Basis.MONOMIAL), p.basis)


def poly_leading_term(p: RationalPolynomial) -> tuple[int, Fraction] | None:
    """Leading monomial term after all cancellation, or None for zero."""
    return convert_basis(p, Basis.MONOMIAL).leading_term()


def taylor_shift(p: RationalPolynomial, a: Number) -> RationalPolynomial:
    """The monomial-basis polynomial t -> p(a + t)."""
    coeffs = convert_basis(p, Basis.MONOMIAL).dense()
    # repeated synthetic division
    c = list(coeffs)
    deg = len(c) - 1
    for i in range(deg):
        for j in range(deg - 1, i - 1, -1):
            c[j] += a * c[j + 1]
    return RationalPolynomial.from_list(c, Basis.MONOMIAL)
