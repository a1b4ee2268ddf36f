"""Dense truncated power series in q with exact rational coefficients.

A QSeries holds the coefficients of sum(c_m * q^m) for 0 <= m <= order, the
truncation order being inclusive.  Coefficients are exact (Python int or
fractions.Fraction, never floats); integer coefficients are kept as ints so
that the common all-integer computations stay fast, which changes nothing
semantically since ints embed in the rationals.

Binary operations require both operands to carry the same order.  A mismatch
raises OrderMismatchError instead of silently truncating, so precision is
always explicit at the call site.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import NonInvertibleError, OrderMismatchError, ParameterError


class QSeries:
    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        if order < 0:
            raise ParameterError(f"truncation order must be >= 0, got {order}")
        coeffs = tuple(coeffs)
        if len(coeffs) != order + 1:
            raise ParameterError(
                f"need {order + 1} coefficients for order {order}, got {len(coeffs)}"
            )
        for c in coeffs:
            if not isinstance(c, (int, Fraction)):
                raise ParameterError(f"coefficient {c!r} is not an exact rational")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls(order, (0,) * (order + 1))

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls(order, (1,) + (0,) * order)

    @classmethod
    def monomial(cls, order: int, exponent: int, coeff=1) -> "QSeries":
        """coeff * q^exponent, the zero series if exponent exceeds the order."""
        if exponent < 0:
            raise ParameterError(f"exponent must be >= 0, got {exponent}")
        c = [0] * (order + 1)
        if exponent <= order:
            c[exponent] = coeff
        return cls(order, c)

    # -- queries -----------------------------------------------------------

    def coeff(self, m: int):
        """Coefficient of q^m; asking beyond the order is an error."""
        if not 0 <= m <= self.order:
            raise ParameterError(f"exponent {m} outside truncation order {self.order}")
        return self.coeffs[m]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self):
        """Smallest exponent with nonzero coefficient, None for the zero series."""
        for m, c in enumerate(self.coeffs):
            if c:
                return m
        return None

    # -- arithmetic --------------------------------------------------------

    def _require_same_order(self, other: "QSeries"):
        if self.order != other.order:
            raise OrderMismatchError(
                f"order mismatch: {self.order} vs {other.order}"
            )

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        self._require_same_order(other)
        return QSeries(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        self._require_same_order(other)
        return QSeries(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return QSeries(self.order, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries(self.order, [other * a for a in self.coeffs])
        if not isinstance(other, QSeries):
            return NotImplemented
        self._require_same_order(other)
        n = self.order
        res = [0] * (n + 1)
        b = other.coeffs
        for i, ai in enumerate(self.coeffs):
            if ai:
                for j in range(n + 1 - i):
                    bj = b[j]
                    if bj:
                        res[i + j] += ai * bj
        return QSeries(n, res)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ParameterError(f"series power must be a nonnegative int, got {e}")
        result = QSeries.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def shift(self, a: int) -> "QSeries":
        """Multiply by q^a, dropping everything beyond the order."""
        if a < 0:
            raise ParameterError(f"shift must be >= 0, got {a}")
        n = self.order
        res = [0] * (n + 1)
        for m in range(n + 1 - a):
            res[m + a] = self.coeffs[m]
        return QSeries(n, res)

    # -- protocol ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        # ints and equal Fractions hash alike, so no normalization is needed
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"QSeries({self.order}, {format_qseries(self)!r})"


def invert_unit(s: QSeries) -> QSeries:
    """Multiplicative inverse of a series with nonzero constant term."""
    c0 = s.coeffs[0]
    if c0 == 0:
        raise NonInvertibleError("cannot invert a series with zero constant term")
    n = s.order
    res = [0] * (n + 1)
    res[0] = 1 if c0 == 1 else Fraction(1, 1) / c0
    for m in range(1, n + 1):
        acc = 0
        for i in range(1, m + 1):
            ai = s.coeffs[i]
            if ai:
                acc += ai * res[m - i]
        res[m] = -acc if c0 == 1 else -acc / c0
    return QSeries(n, res)


# -- cached building blocks -------------------------------------------------
#
# Every evaluator denominator is a power of 1 - q^n, so these four factories
# cover all kernels that appear in nested sums.  They are cached because the
# same (n, k, order) triples recur across thousands of lattice points.


def bracket(n: int, order: int) -> QSeries:
    """The series 1 - q^n."""
    if n <= 0:
        raise ParameterError(f"bracket argument must be >= 1, got {n}")
    c = [0] * (order + 1)
    c[0] = 1
    if n <= order:
        c[n] = -1
    return QSeries(order, c)


@lru_cache(maxsize=None)
def inv_bracket_pow(n: int, k: int, order: int) -> QSeries:
    """1 / (1 - q^n)^k via the negative binomial expansion (integer coefficients)."""
    if n <= 0 or k < 0:
        raise ParameterError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    if k == 0:
        return QSeries.one(order)
    c = [0] * (order + 1)
    t = 0
    while n * t <= order:
        c[n * t] = comb(t + k - 1, k - 1)
        t += 1
    return QSeries(order, c)


@lru_cache(maxsize=None)
def pow_kernel(n: int, k: int, order: int) -> QSeries:
    """q^n / (1 - q^n)^k."""
    return inv_bracket_pow(n, k, order).shift(n) if n <= order else QSeries.zero(order)


@lru_cache(maxsize=None)
def bz_kernel(n: int, k: int, order: int) -> QSeries:
    """q^(n(k-1)) / (1 - q^n)^k."""
    a = n * (k - 1)
    if a > order:
        return QSeries.zero(order)
    return inv_bracket_pow(n, k, order).shift(a)


@lru_cache(maxsize=None)
def sz_kernel(n: int, k: int, order: int) -> QSeries:
    """q^(nk) / (1 - q^n)^k; the empty factor 1 when k = 0."""
    if k == 0:
        return QSeries.one(order)
    a = n * k
    if a > order:
        return QSeries.zero(order)
    return inv_bracket_pow(n, k, order).shift(a)


# -- rendering ---------------------------------------------------------------


def _coeff_str(c) -> str:
    return str(c)


def format_qseries(s: QSeries) -> str:
    """Human form like 'q + 2q^2 - (1/2)q^3'; '0' for the zero series."""
    parts = []
    for m, c in enumerate(s.coeffs):
        if not c:
            continue
        mag = -c if c < 0 else c
        if m == 0:
            body = _coeff_str(mag)
        else:
            var = "q" if m == 1 else f"q^{m}"
            if mag == 1:
                body = var
            elif isinstance(mag, Fraction) and mag.denominator != 1:
                body = f"({mag}){var}"
            else:
                body = f"{mag}{var}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def series_to_json(s: QSeries) -> dict:
    return {"order": s.order, "coeffs": [_coeff_str(c) for c in s.coeffs]}


def series_from_json(data: dict) -> QSeries:
    try:
        order = int(data["order"])
        raw = data["coeffs"]
    except (KeyError, TypeError) as exc:
        raise ParameterError(f"malformed series document: {exc}") from exc
    coeffs = []
    for text in raw:
        f = Fraction(text)
        coeffs.append(f.numerator if f.denominator == 1 else f)
    return QSeries(order, coeffs)
