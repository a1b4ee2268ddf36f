"""Truncated multivariate generating functions over exact q-series.

A MultiPoly is a polynomial in formal variables u_1..u_nvars whose
coefficients are QSeries, truncated so that every variable exponent stays at
or below maxdeg.  Products drop anything past the cap, so a MultiPoly is
always the image of the corresponding exact series under "forget variable
exponents above maxdeg and q-powers above order"; identities checked
coefficientwise on truncations are therefore exact statements about the
range they cover.

xi_genfun packs the nested-sum values into one MultiPoly: the coefficient at
exponent tuple e is xi(eps, e+1) for the same window.  Odd-position variables
(1-indexed) track the repetition count of a pair, even-position ones the
entry size.  Window-shift and cut-one-level identities then become polynomial
statements, and every check here is stated cross-multiplied: 1 - q^n is a
unit in the coefficient ring, q^m - q^n is not, and nothing below ever
divides by the latter.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product

from .combinat import eo_count, kappa, tilings
from .errors import OrderMismatchError, ParameterError
from .models import check_window, xi_value
from .report import Report
from .series import QSeries, bracket, inv_bracket_pow


class MultiPoly:
    """Polynomial with QSeries coefficients, capped at maxdeg per variable."""

    __slots__ = ("nvars", "maxdeg", "order", "_terms")

    def __init__(self, nvars: int, maxdeg: int, order: int, terms=None):
        if not isinstance(nvars, int) or nvars < 0:
            raise ParameterError(f"nvars must be an int >= 0, got {nvars!r}")
        if not isinstance(maxdeg, int) or maxdeg < 0:
            raise ParameterError(f"maxdeg must be an int >= 0, got {maxdeg!r}")
        if not isinstance(order, int) or order < 0:
            raise ParameterError(f"order must be an int >= 0, got {order!r}")
        clean: dict[tuple, QSeries] = {}
        for e, s in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars or any(not isinstance(x, int) or x < 0 for x in e):
                raise ParameterError(f"bad exponent {e} for nvars={nvars}")
            if any(x > maxdeg for x in e):
                raise ParameterError(f"exponent {e} exceeds maxdeg={maxdeg}")
            if not isinstance(s, QSeries):
                raise ParameterError(f"coefficient at {e} is not a QSeries")
            if s.order != order:
                raise OrderMismatchError(
                    f"coefficient at {e} has order {s.order}, expected {order}"
                )
            if not s.is_zero():
                clean[e] = s
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "maxdeg", maxdeg)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    @classmethod
    def zero(cls, nvars: int, maxdeg: int, order: int) -> "MultiPoly":
        return cls(nvars, maxdeg, order)

    @classmethod
    def one(cls, nvars: int, maxdeg: int, order: int) -> "MultiPoly":
        return cls(nvars, maxdeg, order, {(0,) * nvars: QSeries.one(order)})

    def coeff(self, e) -> QSeries:
        e = tuple(e)
        if len(e) != self.nvars:
            raise ParameterError(f"exponent {e} has wrong arity for nvars={self.nvars}")
        return self._terms.get(e, QSeries.zero(self.order))

    def terms(self):
        """Pairs (exponent tuple, QSeries) in sorted exponent order."""
        return tuple(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def _require_compatible(self, other: "MultiPoly"):
        if (self.nvars, self.maxdeg, self.order) != (
            other.nvars,
            other.maxdeg,
            other.order,
        ):
            raise OrderMismatchError(
                f"incompatible shapes {(self.nvars, self.maxdeg, self.order)} "
                f"vs {(other.nvars, other.maxdeg, other.order)}"
            )

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._require_compatible(other)
        merged = dict(self._terms)
        for e, s in other._terms.items():
            merged[e] = merged[e] + s if e in merged else s
        return MultiPoly(self.nvars, self.maxdeg, self.order, merged)

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return MultiPoly(
            self.nvars, self.maxdeg, self.order, {e: -s for e, s in self._terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QSeries)):
            return MultiPoly(
                self.nvars,
                self.maxdeg,
                self.order,
                {e: s * other for e, s in self._terms.items()},
            )
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._require_compatible(other)
        out: dict[tuple, QSeries] = {}
        for e1, s1 in self._terms.items():
            for e2, s2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if any(x > self.maxdeg for x in e):
                    continue
                prod = s1 * s2
                out[e] = out[e] + prod if e in out else prod
        return MultiPoly(self.nvars, self.maxdeg, self.order, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, QSeries)):
            return self.__mul__(other)
        return NotImplemented

    def embed(self, nvars_new: int, positions) -> "MultiPoly":
        """Send variable j to slot positions[j] of a wider polynomial."""
        positions = tuple(positions)
        if len(positions) != self.nvars or len(set(positions)) != self.nvars:
            raise ParameterError(f"positions {positions} must be {self.nvars} distinct slots")
        if any(not isinstance(p, int) or not 0 <= p < nvars_new for p in positions):
            raise ParameterError(f"positions {positions} out of range for nvars={nvars_new}")
        out: dict[tuple, QSeries] = {}
        for e, s in self._terms.items():
            new_e = [0] * nvars_new
            for j, x in enumerate(e):
                new_e[positions[j]] = x
            out[tuple(new_e)] = s
        return MultiPoly(nvars_new, self.maxdeg, self.order, out)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            (self.nvars, self.maxdeg, self.order)
            == (other.nvars, other.maxdeg, other.order)
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.nvars, self.maxdeg, self.order, tuple(sorted(self._terms))))

    def __repr__(self):
        return (
            f"MultiPoly(nvars={self.nvars}, maxdeg={self.maxdeg}, "
            f"order={self.order}, {len(self._terms)} terms)"
        )


def _unit_exp(nvars: int, i: int) -> tuple:
    e = [0] * nvars
    e[i] = 1
    return tuple(e)


def _poly(nvars: int, maxdeg: int, order: int, entries) -> MultiPoly:
    """Build from (exponent, QSeries) pairs, silently truncating past maxdeg."""
    terms: dict[tuple, QSeries] = {}
    for e, s in entries:
        e = tuple(e)
        if any(x > maxdeg for x in e):
            continue
        terms[e] = terms[e] + s if e in terms else s
    return MultiPoly(nvars, maxdeg, order, terms)


def _pair_cap(nvars: int, maxdeg: int, order: int, N: int, vy: int, vx: int) -> MultiPoly:
    # (1 - q^N) - u_vy - u_vx + u_vy u_vx; the two-variable top-boundary factor
    one = QSeries.one(order)
    ey, ex = _unit_exp(nvars, vy), _unit_exp(nvars, vx)
    both = tuple(a + b for a, b in zip(ey, ex))
    return _poly(
        nvars,
        maxdeg,
        order,
        [((0,) * nvars, bracket(N, order)), (ey, -one), (ex, -one), (both, one)],
    )


def xi_genfun(eps: int, M: int, N: int, r: int, maxdeg: int, order: int) -> MultiPoly:
    """Generating function of xi values: coefficient at e is xi(eps, e+1)."""
    if eps not in (0, 1):
        raise ParameterError(f"eps must be 0 or 1, got {eps!r}")
    check_window(M, N)
    if not isinstance(r, int) or r < 0:
        raise ParameterError(f"r must be an int >= 0, got {r!r}")
    if not isinstance(maxdeg, int) or maxdeg < 0:
        raise ParameterError(f"maxdeg must be an int >= 0, got {maxdeg!r}")
    return _xi_genfun(eps, M, N, r, maxdeg, order)


@lru_cache(maxsize=None)
def _xi_genfun(eps, M, N, r, maxdeg, order):
    terms = {}
    for e in product(range(maxdeg + 1), repeat=2 * r):
        c = tuple(x + 1 for x in e)
        terms[e] = xi_value(eps, c, N=N, M=M, order=order)
    return MultiPoly(2 * r, maxdeg, order, terms)


def boundary_scaled(gp: MultiPoly, N: int) -> MultiPoly:
    """Multiply by one top-boundary factor per variable pair."""
    if gp.nvars % 2:
        raise ParameterError(f"need an even variable count, got {gp.nvars}")
    out = gp
    for i in range(gp.nvars // 2):
        out = out * _pair_cap(gp.nvars, gp.maxdeg, gp.order, N, 2 * i, 2 * i + 1)
    return out


def difference_kernels(eps: int, M: int, N: int, maxdeg: int, order: int):
    """The two geometric kernels of the window-shift identity.

    Returns (row, corner): row is univariate in the height variable off the
    inner boundary, corner is bivariate in (entry, height).  Both are plain
    truncated expansions; the shift identity relates their differences.
    """
    if eps not in (0, 1):
        raise ParameterError(f"eps must be 0 or 1, got {eps!r}")
    if not isinstance(M, int) or not isinstance(N, int) or not 0 < M < N:
        raise ParameterError(f"need ints 0 < M < N, got M={M!r}, N={N!r}")
    if not isinstance(maxdeg, int) or maxdeg < 0:
        raise ParameterError(f"maxdeg must be an int >= 0, got {maxdeg!r}")

    one = QSeries.one(order)
    row = _poly(
        1, maxdeg, order, [((t,), inv_bracket_pow(N - M, t, order)) for t in range(maxdeg + 1)]
    )
    if eps:
        lift = QSeries.monomial(order, M) * inv_bracket_pow(M, 1, order)
        row = row * _poly(1, maxdeg, order, [((0,), one), ((1,), lift)])

    geo_height = _poly(
        2, maxdeg, order, [((0, t), inv_bracket_pow(N - M, t, order)) for t in range(maxdeg + 1)]
    )
    geo_entry = _poly(
        2, maxdeg, order, [((t, 0), inv_bracket_pow(M, t + 1, order)) for t in range(maxdeg + 1)]
    )
    cap = _pair_cap(2, maxdeg, order, N, 1, 0)
    scalar = QSeries.monomial(order, M)
    if eps:
        scalar = scalar * inv_bracket_pow(M, 1, order)
    corner = geo_height * cap * geo_entry * scalar
    return row, corner


def compare_polys(identity: str, params: dict, lhs: MultiPoly, rhs: MultiPoly) -> Report:
    """Report equality, witnessing the first mismatched (exponent, q-power)."""
    if (lhs.nvars, lhs.maxdeg, lhs.order) != (rhs.nvars, rhs.maxdeg, rhs.order):
        witness = {
            "reason": "shape mismatch",
            "lhs": (lhs.nvars, lhs.maxdeg, lhs.order),
            "rhs": (rhs.nvars, rhs.maxdeg, rhs.order),
        }
        return Report(identity, params, "fail", witness)
    exps = sorted(set(dict(lhs.terms())) | set(dict(rhs.terms())))
    for e in exps:
        a, b = lhs.coeff(e), rhs.coeff(e)
        if a != b:
            for m in range(lhs.order + 1):
                if a.coeffs[m] != b.coeffs[m]:
                    witness = {
                        "exponent": list(e),
                        "q_power": m,
                        "lhs": str(a.coeffs[m]),
                        "rhs": str(b.coeffs[m]),
                    }
                    return Report(identity, params, "fail", witness)
    return Report(identity, params, "pass")


def verify_b_diff(eps: int, M: int, N: int, maxdeg: int, order: int) -> Report:
    """Differences of the corner kernel reduce to differences of the row kernel."""
    params = {"eps": eps, "M": M, "N": N, "maxdeg": maxdeg, "order": order}
    row, corner = difference_kernels(eps, M, N, maxdeg, order)
    # three slots: 0 = entry variable, 1 and 2 = the two height arguments
    lhs = corner.embed(3, (0, 1)) - corner.embed(3, (0, 2))
    scalar = QSeries.monomial(order, N)
    if eps:
        scalar = scalar * inv_bracket_pow(N, 1, order)
    rhs = (row.embed(3, (1,)) - row.embed(3, (2,))) * scalar
    return compare_polys("b-diff", params, lhs, rhs)


def verify_g_diff(eps: int, M: int, N: int, r: int, maxdeg: int, order: int) -> Report:
    """Peeling the inner boundary down one level, cross-multiplied.

    (b(N-M) - u1)(b(M) - u2) * F[M-1,N] agrees with
    b(N-M)(b(M) - u2)(1 + q^M u1 / b(M))^eps * F[M,N]
    + b(N-M) q^M / b(M)^eps * F[M,N] with the first pair of variables deleted,
    writing b(n) for 1 - q^n and F for xi_genfun.
    """
    if not isinstance(M, int) or not isinstance(N, int) or not 0 < M < N:
        raise ParameterError(f"need ints 0 < M < N, got M={M!r}, N={N!r}")
    if not isinstance(r, int) or r < 1:
        raise ParameterError(f"need r >= 1, got {r!r}")
    params = {"eps": eps, "M": M, "N": N, "r": r, "maxdeg": maxdeg, "order": order}
    nv = 2 * r
    one = QSeries.one(order)
    bNM = bracket(N - M, order)
    bM = bracket(M, order)

    peel_y = _poly(nv, maxdeg, order, [((0,) * nv, bNM), (_unit_exp(nv, 0), -one)])
    peel_x = _poly(nv, maxdeg, order, [((0,) * nv, bM), (_unit_exp(nv, 1), -one)])
    lhs = peel_y * peel_x * xi_genfun(eps, M - 1, N, r, maxdeg, order)

    full = xi_genfun(eps, M, N, r, maxdeg, order)
    term = peel_x * full
    if eps:
        lift = QSeries.monomial(order, M) * inv_bracket_pow(M, 1, order)
        term = term * _poly(nv, maxdeg, order, [((0,) * nv, one), (_unit_exp(nv, 0), lift)])
    scalar = QSeries.monomial(order, M)
    if eps:
        scalar = scalar * inv_bracket_pow(M, 1, order)
    dropped = xi_genfun(eps, M, N, r - 1, maxdeg, order).embed(nv, tuple(range(2, nv)))
    rhs = (term + dropped * scalar) * bNM
    return compare_polys("g-diff", params, lhs, rhs)


def verify_recurrence(eps: int, M: int, N: int, r: int, maxdeg: int, order: int) -> Report:
    """Raising the top boundary one level, cross-multiplied.

    The product of the chained two-variable boundary factors against the
    window raised to N+1 agrees with (q^M - q^N) times the signed sum, over
    partial domino covers T, of the boundary-scaled genfun on the surviving
    variables, weighted by (q^N / (1-q^N)^eps)^(covered pairs).
    """
    if eps not in (0, 1):
        raise ParameterError(f"eps must be 0 or 1, got {eps!r}")
    check_window(M, N)
    if not isinstance(r, int) or r < 0:
        raise ParameterError(f"r must be an int >= 0, got {r!r}")
    params = {"eps": eps, "M": M, "N": N, "r": r, "maxdeg": maxdeg, "order": order}
    nv = 2 * r
    one = QSeries.one(order)
    # q^M - q^N, valid for M = 0 too; never a unit, so both sides carry it
    window_gap = QSeries.monomial(order, M) - QSeries.monomial(order, N)

    lhs = xi_genfun(eps, M, N + 1, r, maxdeg, order)
    if r == 0:
        lhs = lhs * window_gap
    else:
        lhs = lhs * _poly(
            nv,
            maxdeg,
            order,
            [((0,) * nv, window_gap), (_unit_exp(nv, 0), -QSeries.monomial(order, M))],
        )
        for i in range(1, r):
            lhs = lhs * _pair_cap(nv, maxdeg, order, N, 2 * i - 1, 2 * i)
        lhs = lhs * _poly(
            nv, maxdeg, order, [((0,) * nv, bracket(N, order)), (_unit_exp(nv, nv - 1), -one)]
        )

    total = MultiPoly.zero(nv, maxdeg, order)
    for T in tilings(r):
        kap = kappa(T)
        small = boundary_scaled(xi_genfun(eps, M, N, r - kap, maxdeg, order), N)
        survivors = tuple(p - 1 for p in range(1, nv + 1) if p not in set(T))
        scalar = QSeries.monomial(order, N * kap)
        if eps:
            scalar = scalar * inv_bracket_pow(N, kap, order)
        sign = (-1) ** eo_count(T)
        total = total + small.embed(nv, survivors) * (scalar * sign)
    rhs = total * window_gap
    return compare_polys("recurrence", params, lhs, rhs)
