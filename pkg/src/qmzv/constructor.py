"""Recursive construction of expansion words.

expansion_word(eps, c) builds, for a flattened pair index c of even length,
the integer combination of words whose evaluation reproduces the nested sum
xi(eps, c).  The recursion peels entries of c: subsets B of positions with
entry > 1 lose one from each chosen entry, and position sets A of 1-entries
that form a partial domino tiling are deleted outright, with signs driven by
the even-odd domino counts and a binomial redistribution.  classical versions
keep only the top-weight surviving terms.

The module-level sign constants exist so the test suite can flip exactly one
and watch identities fail; they are not configuration.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

from .errors import ParameterError
from .words import AlgebraElement, theta
from .combinat import (
    alpha,
    beta,
    beta_after,
    eo_count,
    index_surgery,
    kappa,
    oe_count,
    sigma_image,
    split_ones,
    tilings,
)

_TERM1_SIGN = -1
_EO_SIGN = -1
_D_PREFACTOR_SIGN = -1

_cache: dict = {}


def clear_cache():
    _cache.clear()


def _check_flat(c) -> tuple:
    c = tuple(c)
    if len(c) % 2:
        raise ParameterError(f"flattened pair index must have even length, got {c}")
    for e in c:
        if not isinstance(e, int) or e < 1:
            raise ParameterError(f"entries must be ints >= 1, got {c}")
    return c


def reverse_pairs(c) -> tuple:
    """(l1,k1,...,lr,kr) -> (kr,lr,...,k1,l1): full reversal."""
    return tuple(reversed(_check_flat(c)))


def _yx(k: int) -> AlgebraElement:
    return AlgebraElement.word("y" + "x" * k)


def _subsets(positions):
    for n in range(len(positions) + 1):
        yield from combinations(positions, n)


def _signed_range(a: int, b: int) -> AlgebraElement:
    # sum_{h=a+1}^{b} y x^(h-1), read backwards with a minus when a > b
    sign = 1
    if a > b:
        a, b, sign = b, a, -1
    total = AlgebraElement.zero()
    for h in range(a + 1, b + 1):
        total = total + _yx(h - 1)
    return sign * total


def expansion_word(eps: int, c) -> AlgebraElement:
    """The recursive expansion; eps=0 targets the bar model, eps=1 the
    boundary-augmented one."""
    if eps not in (0, 1):
        raise ParameterError(f"eps must be 0 or 1, got {eps!r}")
    c = _check_flat(c)
    key = (eps, c)
    cached = _cache.get(key)
    if cached is not None:
        return cached
    if not c:
        out = AlgebraElement.one()
        _cache[key] = out
        return out

    r = len(c) // 2
    ones, gt1 = split_ones(c)
    total = AlgebraElement.zero()

    for B in _subsets(gt1):
        if not B:
            continue
        sub = expansion_word(eps, index_surgery(c, (), B))
        sign = (-1) ** len(B)
        a, b = alpha(B), beta(B)
        total = total + _TERM1_SIGN * sign * (sub * AlgebraElement.word("x" * a))
        total = total + sign * (sub * _signed_range(a, b))

    ones_set = set(ones)
    for A in tilings(r):
        if not A or not set(A) <= ones_set:
            continue
        kap = kappa(A)
        eo_sign = _EO_SIGN ** eo_count(A)
        for B in _subsets(gt1):
            sub = expansion_word(eps, index_surgery(c, A, B))
            tail = beta_after(A, B)
            for h in range(1, kap + 1):
                coeff = (
                    eo_sign
                    * (-1) ** (len(B) + kap - h)
                    * comb(kap - 1, h - 1)
                )
                total = total + coeff * (sub * _yx(h + eps * kap + tail - 1))

    _cache[key] = total
    return total


def dagger_word(c) -> AlgebraElement:
    """Expansion evaluated by the bar-model Z map; lands in H1."""
    return expansion_word(0, c)


def bz_word(c) -> AlgebraElement:
    """Signed theta twist of the eps=1 expansion; all entries end up >= 2."""
    c = _check_flat(c)
    return _D_PREFACTOR_SIGN ** sum(c) * theta(expansion_word(1, c))


def classical_expansion_word(eps: int, c) -> AlgebraElement:
    """Top-weight limit of expansion_word: only domino-free B (and, in the
    deletion term, tilings A with domino-free renumbered B) survive."""
    if eps not in (0, 1):
        raise ParameterError(f"eps must be 0 or 1, got {eps!r}")
    c = _check_flat(c)
    key = ("classical", eps, c)
    cached = _cache.get(key)
    if cached is not None:
        return cached
    if not c:
        out = AlgebraElement.one()
        _cache[key] = out
        return out

    r = len(c) // 2
    ones, gt1 = split_ones(c)
    total = AlgebraElement.zero()

    for B in _subsets(gt1):
        if not B or eo_count(B) != 0:
            continue
        sub = classical_expansion_word(eps, index_surgery(c, (), B))
        sign = (-1) ** len(B)
        total = total + _TERM1_SIGN * sign * (sub * AlgebraElement.word("x" * len(B)))
        if len(B) >= 2:
            total = total - sign * (sub * _yx(len(B) - 1))

    ones_set = set(ones)
    for A in tilings(r):
        if not set(A) <= ones_set:
            continue
        kap = kappa(A)
        eo_sign = _EO_SIGN ** eo_count(A)
        for B in _subsets(gt1):
            if len(A) + len(B) < 2 or oe_count(sigma_image(A, B)) != 0:
                continue
            sub = classical_expansion_word(eps, index_surgery(c, A, B))
            coeff = eo_sign * (-1) ** len(B)
            total = total + coeff * (sub * _yx((1 + eps) * kap + len(B) - 1))

    _cache[key] = total
    return total


def classical_dagger_word(c) -> AlgebraElement:
    return classical_expansion_word(0, c)


def classical_bz_word(c) -> AlgebraElement:
    return classical_expansion_word(1, c)
