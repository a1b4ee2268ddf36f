"""Nested-sum evaluators.

Every model here is a sum over tuples M < n_1 (<= or <) n_2 ... < N (finite
window) or 0 < n_1 < n_2 < ... (infinite, truncated at the series order) of a
product of one factor per position.  The factor kinds that occur:

    pow   q^n / (1-q^n)^k
    bz    q^(n(k-1)) / (1-q^n)^k
    sz    q^(nk) / (1-q^n)^k
    bar   1 / (1-q^(N-n))
    geo   q^(N-n) / (1-q^(N-n))

All evaluation is by a suffix recursion memoized on (position, lower bound),
so shared tails are computed once.  The same walkers run over three value
rings: truncated integer/rational q-series, exact rationals at a fixed
rational q (|q| not 0 or 1), and the classical limits where pow becomes
1/n^k and bar becomes 1/(N-n).

Truncation of the infinite sums is exact: each admissible index puts a factor
of valuation >= n_r on the last variable, so every lattice point outside the
enumerated range contributes nothing below the truncation order.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import AdmissibilityError, MembershipError, ParameterError
from .report import Report, compare_values
from .series import QSeries, bz_kernel, inv_bracket_pow, pow_kernel, sz_kernel
from .words import (
    BAR1,
    H1,
    H0,
    AlgebraElement,
    BarIndex,
    bar_from_pairs,
    check_pairs,
    diamond_from_pairs,
    index_from_word,
    pairs_from_bar,
)


def check_window(M: int, N: int):
    if not (isinstance(M, int) and isinstance(N, int) and 0 <= M < N):
        raise ParameterError(f"need integers 0 <= M < N, got M={M}, N={N}")


def check_q_sample(q) -> Fraction:
    q = Fraction(q)
    if q in (0, 1, -1):
        raise ParameterError(f"q sample must avoid 0, 1 and -1, got {q}")
    return q


def _check_order(order: int) -> int:
    if not isinstance(order, int) or order < 0:
        raise ParameterError(f"truncation order must be an int >= 0, got {order!r}")
    return order


# -- value rings --------------------------------------------------------------


class _SeriesValues:
    def __init__(self, order: int):
        self.order = order
        self.one = QSeries.one(order)
        self.zero = QSeries.zero(order)

    def pow_factor(self, n, k):
        return pow_kernel(n, k, self.order)

    def bz_factor(self, n, k):
        return bz_kernel(n, k, self.order)

    def sz_factor(self, n, k):
        return sz_kernel(n, k, self.order)

    def bar_factor(self, m):
        return inv_bracket_pow(m, 1, self.order)

    def geo_factor(self, m):
        return pow_kernel(m, 1, self.order)


class _PointValues:
    def __init__(self, q: Fraction):
        self.q = q
        self.one = Fraction(1)
        self.zero = Fraction(0)

    def _bracket(self, n):
        b = 1 - self.q**n
        if b == 0:
            raise ParameterError(f"1 - q^{n} vanishes at q = {self.q}")
        return b

    def pow_factor(self, n, k):
        return self.q**n / self._bracket(n) ** k

    def bz_factor(self, n, k):
        return self.q ** (n * (k - 1)) / self._bracket(n) ** k

    def sz_factor(self, n, k):
        return self.q ** (n * k) / self._bracket(n) ** k if k else Fraction(1)

    def bar_factor(self, m):
        return 1 / self._bracket(m)

    def geo_factor(self, m):
        return self.q**m / self._bracket(m)


class _ClassicalValues:
    one = Fraction(1)
    zero = Fraction(0)

    def pow_factor(self, n, k):
        return Fraction(1, n**k)

    bz_factor = pow_factor

    def bar_factor(self, m):
        return Fraction(1, m)


# -- the finite walker ---------------------------------------------------------
#
# A slot per position holds the alternative (kind, k, gap) factor choices at
# that position; gap 1 forces the next variable strictly above, gap 0 allows
# a tie.  Positions where an entry equal to 1 may flip to the boundary factor
# simply carry two choices, which replaces the outer sum over subsets.


def _factor(vals, kind, k, n, N):
    if kind == "pow":
        return vals.pow_factor(n, k)
    if kind == "bz":
        return vals.bz_factor(n, k)
    if kind == "sz":
        return vals.sz_factor(n, k)
    if kind == "bar":
        return vals.bar_factor(N - n)
    if kind == "geo":
        return vals.geo_factor(N - n)
    raise ParameterError(f"unknown factor kind {kind!r}")


def _finite_sum(slots, M, N, vals):
    r = len(slots)
    memo = {}

    def suffix(j, low):
        if j == r:
            return vals.one
        key = (j, low)
        cached = memo.get(key)
        if cached is not None:
            return cached
        total = vals.zero
        for n in range(low, N):
            for kind, k, gap in slots[j]:
                total = total + _factor(vals, kind, k, n, N) * suffix(j + 1, n + gap)
        memo[key] = total
        return total

    return suffix(0, M + 1)


def _dagger_slots(entries):
    return tuple(
        (("bar", 0, 0),) if e is BAR1 else (("pow", e, 1),) for e in entries
    )


def _strict_slots(kind, k):
    return tuple(((kind, e, 1),) for e in k)


def _diamond_slots(variant, k):
    main, aux = ("pow", "bar") if variant == "dagger" else ("bz", "geo")
    slots = []
    for e in k:
        if e == 1:
            slots.append(((aux, 0, 0), (main, 1, 1)))
        else:
            slots.append(((main, e, 1),))
    return tuple(slots)


def _reflected_slots(k):
    # weak blocks of size k_j; the first variable of each block carries the
    # q^(N-n) factor, later ones 1/(1-q^n); strict step between blocks
    slots = []
    for kj in k:
        for t in range(1, kj + 1):
            kind = "geo" if t == 1 else "bz"
            slots.append(((kind, 1, 1 if t == kj else 0),))
    return tuple(slots)


# -- index validation ----------------------------------------------------------


def _as_bar_index(k) -> BarIndex:
    return k if isinstance(k, BarIndex) else BarIndex(tuple(k))


def _check_plain(k) -> tuple:
    k = tuple(k)
    for e in k:
        if not isinstance(e, int) or e < 1:
            raise ParameterError(f"index entries must be ints >= 1, got {k}")
    return k


def _check_admissible_plain(k) -> tuple:
    k = _check_plain(k)
    if k and k[-1] == 1:
        raise AdmissibilityError(f"index {k} must not end with entry 1")
    return k


def _check_sz_index(k) -> tuple:
    k = tuple(k)
    for e in k:
        if not isinstance(e, int) or e < 0:
            raise ParameterError(f"entries must be ints >= 0, got {k}")
    if k and k[-1] == 0:
        raise AdmissibilityError(f"index {k} must not end with entry 0")
    return k


# -- finite models ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _finite_series(family, entries, M, N, order):
    builders = {
        "dagger": _dagger_slots,
        "bz": lambda k: _strict_slots("bz", k),
        "diamond-dagger": lambda k: _diamond_slots("dagger", k),
        "diamond-bz": lambda k: _diamond_slots("bz", k),
        "reflected": _reflected_slots,
    }
    return _finite_sum(builders[family](entries), M, N, _SeriesValues(order))


def zeta_dagger_finite(k, *, N: int, order: int, M: int = 0) -> QSeries:
    """Double-truncated weak sum over an admissible bar index."""
    k = _as_bar_index(k)
    if not k.is_admissible():
        raise AdmissibilityError(f"{k!r} ends with a bar entry")
    check_window(M, N)
    return _finite_series("dagger", k.entries, M, N, _check_order(order))


def zeta_bz_finite(k, *, N: int, order: int) -> QSeries:
    """Truncated strict sum with factors q^(n(k-1))/(1-q^n)^k; any index."""
    k = _check_plain(k)
    check_window(0, N)
    return _finite_series("bz", k, 0, N, _check_order(order))


def zeta_diamond_finite(variant: str, k, *, N: int, order: int, M: int = 0) -> QSeries:
    """Boundary-augmented finite sums; entries equal to 1 may flip to the
    q^(N-n)-type factor with a weak tie.  The index must not end in 1."""
    if variant not in ("dagger", "bz"):
        raise ParameterError(f"variant must be 'dagger' or 'bz', got {variant!r}")
    k = _check_admissible_plain(k)
    check_window(M, N)
    if variant == "bz" and M != 0:
        raise ParameterError("the bz variant is only defined with M = 0")
    return _finite_series(f"diamond-{variant}", k, M, N, _check_order(order))


def zeta_reflected_blocks(k, *, N: int, order: int) -> QSeries:
    """Weak-block sum whose first block variables carry q^(N-n)/(1-q^(N-n))."""
    k = _check_plain(k)
    check_window(0, N)
    return _finite_series("reflected", k, 0, N, _check_order(order))


def xi_value(eps: int, c, *, N: int, order: int, M: int = 0) -> QSeries:
    """The two-parameter family interpolating the finite models.

    eps = 0 reads the pairs (l_j, k_j) as l_j - 1 bar entries before k_j;
    eps = 1 reads them as l_j - 1 ones before k_j + 1 in the diamond model.
    """
    c = check_pairs(c)
    if eps == 0:
        return zeta_dagger_finite(bar_from_pairs(c), N=N, order=order, M=M)
    if eps == 1:
        return zeta_diamond_finite(
            "dagger", diamond_from_pairs(c), N=N, order=order, M=M
        )
    raise ParameterError(f"eps must be 0 or 1, got {eps!r}")


# -- infinite models --------------------------------------------------------------


@lru_cache(maxsize=None)
def _dagger_infinite(pairs, order):
    # run-length form: strict skeleton 0 = n_0 < n_1 < ... < n_r with the
    # weakly tied bar variables of each run counted by a binomial weight
    vals = _SeriesValues(order)
    r = len(pairs) // 2
    memo = {}

    def suffix(j, nprev):
        if j == r:
            return vals.one
        key = (j, nprev)
        cached = memo.get(key)
        if cached is not None:
            return cached
        l, k = pairs[2 * j], pairs[2 * j + 1]
        total = vals.zero
        for n in range(nprev + 1, order + 1):
            mult = comb(n - nprev + l - 2, l - 1)
            total = total + mult * (vals.pow_factor(n, k) * suffix(j + 1, n))
        memo[key] = total
        return total

    return suffix(0, 0)


@lru_cache(maxsize=None)
def _strict_infinite(kind, k, order):
    vals = _SeriesValues(order)
    r = len(k)
    memo = {}

    def suffix(j, low):
        if j == r:
            return vals.one
        key = (j, low)
        cached = memo.get(key)
        if cached is not None:
            return cached
        total = vals.zero
        for n in range(low, order + 1):
            total = total + _factor(vals, kind, k[j], n, None) * suffix(j + 1, n + 1)
        memo[key] = total
        return total

    return suffix(0, 1)


def zeta_infinite(model: str, k, *, order: int) -> QSeries:
    """Truncated value of the untruncated sum; the index must be admissible."""
    _check_order(order)
    if model == "dagger":
        k = _as_bar_index(k)
        if not k.is_admissible():
            raise AdmissibilityError(f"{k!r} ends with a bar entry")
        return _dagger_infinite(pairs_from_bar(k), order)
    if model == "bz":
        k = _check_plain(k)
        if k and k[-1] < 2:
            raise AdmissibilityError(f"index {k} must end with an entry >= 2")
        return _strict_infinite("bz", k, order)
    if model == "sz":
        return _strict_infinite("sz", _check_sz_index(k), order)
    raise ParameterError(f"unknown infinite model {model!r}")


def zeta_poly(k, polys, *, order: int) -> QSeries:
    """Strict sum of Q_j(q^n) / (1-q^n)^(k_j) for numerator polynomials Q_j.

    deg Q_j <= k_j is required, and the last polynomial must vanish at 0 so
    the sum converges.  Polynomials are coefficient sequences, low degree
    first, with int or Fraction entries.
    """
    k = _check_plain(k)
    _check_order(order)
    if len(polys) != len(k):
        raise ParameterError(f"need {len(k)} polynomials, got {len(polys)}")
    coeffs = []
    for j, poly in enumerate(polys):
        cs = tuple(poly)
        for c in cs:
            if not isinstance(c, (int, Fraction)):
                raise ParameterError(f"polynomial coefficient {c!r} is not exact")
        if len(cs) > k[j] + 1:
            raise ParameterError(
                f"polynomial {j + 1} has degree {len(cs) - 1} > k_{j + 1} = {k[j]}"
            )
        coeffs.append(cs)
    if k and (not coeffs[-1] or coeffs[-1][0] != 0):
        raise ParameterError("the last polynomial must have zero constant term")

    vals = _SeriesValues(order)

    def poly_at(cs, n):
        out = vals.zero
        for t, c in enumerate(cs):
            if c and n * t <= order:
                out = out + QSeries.monomial(order, n * t, c)
        return out

    r = len(k)
    memo = {}

    def suffix(j, low):
        if j == r:
            return vals.one
        key = (j, low)
        cached = memo.get(key)
        if cached is not None:
            return cached
        total = vals.zero
        for n in range(low, order + 1):
            factor = poly_at(coeffs[j], n) * inv_bracket_pow(n, k[j], order)
            total = total + factor * suffix(j + 1, n + 1)
        memo[key] = total
        return total

    return suffix(0, 1)


# -- classical limits -------------------------------------------------------------


@lru_cache(maxsize=None)
def classical_zeta(k, N: int) -> Fraction:
    """Strict truncated harmonic sum of 1/(n_1^(k_1) ... n_r^(k_r))."""
    k = _check_plain(k)
    check_window(0, N)
    return _finite_sum(_strict_slots("pow", k), 0, N, _ClassicalValues())


@lru_cache(maxsize=None)
def classical_zeta_blocks(c, N: int) -> Fraction:
    """Block sums with l_j - 1 leading factors 1/(N-n) per block."""
    c = check_pairs(c)
    check_window(0, N)
    entries = bar_from_pairs(c).entries
    return _finite_sum(_dagger_slots(entries), 0, N, _ClassicalValues())


@lru_cache(maxsize=None)
def classical_zeta_diamond(k, N: int) -> Fraction:
    """Classical boundary-augmented sum; ones may flip to 1/(N-n) with a tie."""
    k = _check_admissible_plain(k)
    check_window(0, N)
    return _finite_sum(_diamond_slots("dagger", k), 0, N, _ClassicalValues())


# -- linear extension over words ---------------------------------------------------


def as_element(u) -> AlgebraElement:
    if isinstance(u, AlgebraElement):
        return u
    if isinstance(u, str):
        return AlgebraElement.word(u)
    raise ParameterError(f"expected a word or an element, got {u!r}")


Z_MODELS = ("dagger_finite", "bz_finite", "dagger_inf", "bz_inf", "classical")


def z_map(model: str, u, *, N: int | None = None, order: int | None = None,
          M: int = 0):
    """Evaluate a word or integer combination of words, linearly.

    Words must lie in H1; the infinite bz model further requires H0 so that
    its sums converge.  Returns a QSeries, or a Fraction for 'classical'.
    """
    if model not in Z_MODELS:
        raise ParameterError(f"unknown model {model!r}; choose one of {Z_MODELS}")
    u = as_element(u)
    if not u.in_space(H1):
        raise MembershipError("element must lie in H1 (words empty or y-headed)")
    if model == "bz_inf" and not u.in_space(H0):
        raise MembershipError("infinite bz evaluation needs H0 (words ending in x)")
    if model == "classical":
        if N is None:
            raise ParameterError("classical evaluation needs N")
        return sum(
            (c * classical_zeta(index_from_word(w), N) for w, c in u.terms()),
            Fraction(0),
        )
    if order is None:
        raise ParameterError(f"model {model!r} needs a truncation order")
    if model in ("dagger_finite", "bz_finite") and N is None:
        raise ParameterError(f"model {model!r} needs N")
    total = QSeries.zero(order)
    for w, c in u.terms():
        k = index_from_word(w)
        if model == "dagger_finite":
            val = zeta_dagger_finite(BarIndex(k), N=N, order=order, M=M)
        elif model == "bz_finite":
            val = zeta_bz_finite(k, N=N, order=order)
        elif model == "dagger_inf":
            val = zeta_infinite("dagger", BarIndex(k), order=order)
        else:
            val = zeta_infinite("bz", k, order=order)
        total = total + c * val
    return total


# -- rational points ----------------------------------------------------------------


_POINT_FAMILIES = ("dagger", "bz", "diamond-dagger", "diamond-bz")


@lru_cache(maxsize=None)
def _finite_point(family, entries, M, N, q):
    slots = {
        "dagger": _dagger_slots,
        "bz": lambda k: _strict_slots("bz", k),
        "diamond-dagger": lambda k: _diamond_slots("dagger", k),
        "diamond-bz": lambda k: _diamond_slots("bz", k),
    }[family](entries)
    return _finite_sum(slots, M, N, _PointValues(q))


def eval_at_rational_q(model: str, k, q, *, N: int, M: int = 0) -> Fraction:
    """Exact value of a finite model at a rational q with |q| not 0 or 1."""
    if model not in _POINT_FAMILIES:
        raise ParameterError(
            f"unknown model {model!r}; choose one of {_POINT_FAMILIES}"
        )
    q = check_q_sample(q)
    check_window(M, N)
    if model == "dagger":
        entries = _as_bar_index(k).entries
    elif model == "bz":
        entries = _check_plain(k)
        if M != 0:
            raise ParameterError("the bz model is only defined with M = 0")
    else:
        entries = _check_admissible_plain(k)
        if model == "diamond-bz" and M != 0:
            raise ParameterError("the diamond-bz model is only defined with M = 0")
    return _finite_point(model, entries, M, N, q)


def z_map_at_q(model: str, u, q, *, N: int, M: int = 0) -> Fraction:
    """Linear extension of the finite dagger/bz models at a rational q."""
    if model not in ("dagger", "bz"):
        raise ParameterError(f"model must be 'dagger' or 'bz', got {model!r}")
    u = as_element(u)
    if not u.in_space(H1):
        raise MembershipError("element must lie in H1 (words empty or y-headed)")
    q = check_q_sample(q)
    total = Fraction(0)
    for w, c in u.terms():
        total += c * eval_at_rational_q(model, index_from_word(w), q, N=N, M=M)
    return total


def verify_bridge(w: str, N: int, q) -> Report:
    """Check the substitution law tying the two finite models on one word:
    the dagger value at 1/q equals (-1)^len(w) times the bz value at q."""
    if not isinstance(w, str):
        raise ParameterError("verify_bridge takes a single word")
    q = check_q_sample(q)
    lhs = z_map_at_q("dagger", w, Fraction(1) / q, N=N)
    rhs = (-1) ** len(w) * z_map_at_q("bz", w, q, N=N)
    return compare_values("bridge", {"word": w, "N": N, "q": str(q)}, lhs, rhs)
