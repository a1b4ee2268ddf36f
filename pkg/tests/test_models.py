"""Evaluator tests.

Frozen expected series were derived by hand or by the brute-force lattice
oracles defined at the top of this file; the oracles enumerate lattice points
directly with itertools and never touch the suffix-memoized walkers under
test.
"""

from fractions import Fraction
from itertools import product

import pytest

from qmzv.errors import AdmissibilityError, MembershipError, ParameterError
from qmzv.series import QSeries, bracket, inv_bracket_pow, invert_unit, pow_kernel
from qmzv.words import (
    BAR1,
    BarIndex,
    bar_from_pairs,
    diamond_from_pairs,
    word_from_index,
)
from qmzv import models


# -- brute-force oracles -------------------------------------------------------


def geom(n, order):
    # q^n/(1-q^n) truncated
    return [1 if m and m % n == 0 else 0 for m in range(order + 1)]


def series_divisor_counts(order):
    out = [0] * (order + 1)
    for n in range(1, order + 1):
        for m in range(n, order + 1, n):
            out[m] += 1
    return out


def series_sigma1(order):
    out = [0] * (order + 1)
    for n in range(1, order + 1):
        for m in range(n, order + 1, n):
            out[m] += n
    return out


def brute_dagger_finite(entries, M, N, order):
    """Direct lattice enumeration of the weak/strict bar sum."""
    r = len(entries)
    total = QSeries.zero(order)
    if r == 0:
        return QSeries.one(order)

    def factor(e, n):
        if e is BAR1:
            return inv_bracket_pow(N - n, 1, order)
        return pow_kernel(n, e, order)

    def rec(j, low, acc):
        nonlocal total
        if j == r:
            total = total + acc
            return
        for n in range(low, N):
            gap = 0 if entries[j] is BAR1 else 1
            rec(j + 1, n + gap, acc * factor(entries[j], n))

    rec(0, M + 1, QSeries.one(order))
    return total


def brute_classical_blocks(c, N):
    """Block lattice with l_j-1 weak 1/(N-n) factors then 1/n^k, strict
    between blocks; literal nested loops."""
    pairs = [(c[2 * i], c[2 * i + 1]) for i in range(len(c) // 2)]
    total = Fraction(0)

    def rec(i, low, acc):
        nonlocal total
        if i == len(pairs):
            total += acc
            return
        l, k = pairs[i]
        for block in weak_chains(low, N, l):
            f = acc
            for n in block[:-1]:
                f *= Fraction(1, N - n)
            f *= Fraction(1, block[-1] ** k)
            rec(i + 1, block[-1] + 1, f)

    def weak_chains(low, top, length):
        if length == 0:
            yield ()
            return
        for n in range(low, top):
            for rest in weak_chains(n, top, length - 1):
                yield (n,) + rest

    rec(0, 1, Fraction(1))
    return total


def brute_classical_diamond(k, N):
    # weak chain, strict after positions outside A; A ranges over 1-entries
    total = Fraction(0)
    ones = [i for i, e in enumerate(k) if e == 1]
    r = len(k)
    for bits in product((False, True), repeat=len(ones)):
        A = {ones[i] for i, b in enumerate(bits) if b}
        for point in product(range(1, N), repeat=r):
            if any(
                point[i] > point[i + 1]
                or (i not in A and point[i] == point[i + 1])
                for i in range(r - 1)
            ):
                continue
            val = Fraction(1)
            for i, n in enumerate(point):
                val *= Fraction(1, N - n) if i in A else Fraction(1, n ** k[i])
            total += val
    return total


# -- finite models ----------------------------------------------------------------


def test_dagger_finite_examples():
    s = models.zeta_dagger_finite(BarIndex((BAR1, 1)), N=2, order=10)
    assert s.coeffs == tuple(range(11))  # q/(1-q)^2
    assert models.zeta_dagger_finite((), N=3, order=5) == QSeries.one(5)
    s = models.zeta_dagger_finite((1,), N=2, order=6)
    assert s.coeffs == (0, 1, 1, 1, 1, 1, 1)  # q/(1-q)


def test_dagger_finite_matches_brute_force():
    entries_pool = [
        (),
        (1,),
        (2,),
        (BAR1, 1),
        (BAR1, 2),
        (1, 1),
        (BAR1, BAR1, 1),
        (2, BAR1, 1),
        (BAR1, 1, 2),
    ]
    for entries, M, N in product(entries_pool, (0, 1, 2), (2, 3, 4)):
        if M >= N:
            continue
        got = models.zeta_dagger_finite(BarIndex(entries), M=M, N=N, order=12)
        assert got == brute_dagger_finite(entries, M, N, 12), (entries, M, N)


def test_dagger_finite_rejects_bad_input():
    with pytest.raises(AdmissibilityError):
        models.zeta_dagger_finite(BarIndex((1, BAR1)), N=3, order=5)
    with pytest.raises(ParameterError):
        models.zeta_dagger_finite((1,), N=2, M=2, order=5)
    with pytest.raises(ParameterError):
        models.zeta_dagger_finite((1,), N=0, order=5)


def test_bz_finite_examples():
    s = models.zeta_bz_finite((3,), N=2, order=8)
    # q^2/(1-q)^3: coefficient of q^m is C(m, 2)
    assert s.coeffs == tuple(m * (m - 1) // 2 for m in range(9))
    assert models.zeta_bz_finite((), N=4, order=6) == QSeries.one(6)
    # (1,2) at N=3: only lattice point (1,2), factors 1/(1-q) and q^2/(1-q^2)^2
    order = 12
    expected = inv_bracket_pow(1, 1, order) * (
        QSeries.monomial(order, 2, 1) * inv_bracket_pow(2, 2, order)
    )
    assert models.zeta_bz_finite((1, 2), N=3, order=order) == expected


def test_diamond_finite_examples():
    s = models.zeta_diamond_finite("bz", (1, 2), N=2, order=10)
    assert s.coeffs == tuple(m * (m - 1) // 2 for m in range(11))  # q^2/(1-q)^3
    for N in (2, 3, 5):
        lhs = models.zeta_diamond_finite("dagger", (2,), N=N, order=10)
        rhs = QSeries.zero(10)
        for n in range(1, N):
            rhs = rhs + pow_kernel(n, 2, 10)
        assert lhs == rhs
    assert models.zeta_diamond_finite("bz", (), N=2, order=4) == QSeries.one(4)


def test_diamond_finite_rejects_bad_input():
    with pytest.raises(AdmissibilityError):
        models.zeta_diamond_finite("bz", (2, 1), N=3, order=5)
    with pytest.raises(ParameterError):
        models.zeta_diamond_finite("bz", (1, 2), N=3, M=1, order=5)
    with pytest.raises(ParameterError):
        models.zeta_diamond_finite("weird", (1, 2), N=3, order=5)
    # dagger variant does accept M > 0
    models.zeta_diamond_finite("dagger", (1, 2), N=3, M=1, order=5)


def test_xi_dispatch():
    assert models.xi_value(0, (1, 2), N=4, order=10) == models.zeta_dagger_finite(
        (2,), N=4, order=10
    )
    assert models.xi_value(1, (1, 1), N=4, order=10) == models.zeta_diamond_finite(
        "dagger", (2,), N=4, order=10
    )
    s = models.xi_value(0, (2, 1), N=2, order=10)
    assert s.coeffs == tuple(range(11))
    with pytest.raises(ParameterError):
        models.xi_value(2, (1, 1), N=2, order=5)


# -- infinite models ---------------------------------------------------------------


def test_infinite_dagger_divisor_series():
    assert models.zeta_infinite("dagger", (1,), order=5).coeffs == (0, 1, 2, 2, 3, 2)
    assert (
        models.zeta_infinite("dagger", (1,), order=30).coeffs
        == tuple(series_divisor_counts(30))
    )


def test_infinite_dagger_bz_coincide_at_two():
    d = models.zeta_infinite("dagger", (2,), order=20)
    b = models.zeta_infinite("bz", (2,), order=20)
    assert d == b
    assert d.coeffs == tuple(series_sigma1(20))


def test_infinite_empty_and_errors():
    assert models.zeta_infinite("sz", (), order=4) == QSeries.one(4)
    with pytest.raises(AdmissibilityError):
        models.zeta_infinite("dagger", BarIndex((2, BAR1)), order=4)
    with pytest.raises(AdmissibilityError):
        models.zeta_infinite("bz", (2, 1), order=4)
    with pytest.raises(AdmissibilityError):
        models.zeta_infinite("sz", (1, 0), order=4)
    with pytest.raises(ParameterError):
        models.zeta_infinite("nope", (1,), order=4)


def test_infinite_dagger_weak_tie_brute_force():
    # (b,2): bar entries carry no factor at infinite level, so the value is
    # the weak double sum over 0 < n1 <= n2 of q^{n2}/(1-q^{n2})^2
    order = 14
    want = QSeries.zero(order)
    for n2 in range(1, order + 1):
        for _ in range(1, n2 + 1):
            want = want + pow_kernel(n2, 2, order)
    got = models.zeta_infinite("dagger", BarIndex((BAR1, 2)), order=order)
    assert got == want


def test_sz_zero_blocks_binomial_oracle():
    # zeta_sz({0}^{l-1}, k) has the run-length form
    # sum_{0<n} C(n-1, l-1) q^{nk}/(1-q^n)^k
    from math import comb

    order = 16
    for l, k in product((1, 2, 3), (1, 2)):
        idx = (0,) * (l - 1) + (k,)
        want = QSeries.zero(order)
        for n in range(1, order + 1):
            c = comb(n - 1, l - 1)
            if c and n * k <= order:
                want = want + c * inv_bracket_pow(n, k, order).shift(n * k)
        assert models.zeta_infinite("sz", idx, order=order) == want, (l, k)


def test_poly_model():
    assert models.zeta_poly((2,), [(0, 1)], order=12) == models.zeta_infinite(
        "dagger", (2,), order=12
    )
    assert models.zeta_poly((2,), [(0, 0, 1)], order=12) == models.zeta_infinite(
        "sz", (2,), order=12
    )
    assert models.zeta_poly((1,), [(0, 1)], order=12) == models.zeta_infinite(
        "dagger", (1,), order=12
    )
    with pytest.raises(ParameterError):
        models.zeta_poly((2,), [(1, 1)], order=6)  # constant term in last poly
    with pytest.raises(ParameterError):
        models.zeta_poly((1,), [(0, 1, 1)], order=6)  # degree 2 > k = 1
    with pytest.raises(ParameterError):
        models.zeta_poly((1, 2), [(0, 1)], order=6)  # arity mismatch


def test_poly_model_two_rows():
    # mixed numerators across two positions against a literal lattice loop
    order = 12
    ks = (1, 2)
    polys = [(0, 1), (0, 0, 1)]
    want = QSeries.zero(order)
    for n2 in range(1, order + 1):
        if 2 * n2 > order:
            break
        f2 = inv_bracket_pow(n2, 2, order).shift(2 * n2)
        for n1 in range(1, n2):
            want = want + inv_bracket_pow(n1, 1, order).shift(n1) * f2
    assert models.zeta_poly(ks, polys, order=order) == want


# -- Z maps -----------------------------------------------------------------------


def test_z_map_examples():
    assert models.z_map("dagger_finite", "", N=3, order=6) == QSeries.one(6)
    s = models.z_map("dagger_finite", "yx", N=2, order=10)
    assert s.coeffs == tuple(range(11))
    assert models.z_map("classical", "yx", N=5) == Fraction(205, 144)


def test_z_map_membership():
    with pytest.raises(MembershipError):
        models.z_map("dagger_finite", "xy", N=2, order=5)
    with pytest.raises(MembershipError):
        models.z_map("bz_inf", "y", order=5)  # (1) not admissible for bz
    with pytest.raises(ParameterError):
        models.z_map("dagger_finite", "y", order=5)  # missing N
    with pytest.raises(ParameterError):
        models.z_map("classical", "y")  # missing N


def test_z_map_linearity():
    from qmzv.words import AlgebraElement

    u = AlgebraElement.word("yx", 3) - AlgebraElement.word("y", 2)
    got = models.z_map("dagger_finite", u, N=3, order=8)
    want = 3 * models.z_map("dagger_finite", "yx", N=3, order=8) - 2 * models.z_map(
        "dagger_finite", "y", N=3, order=8
    )
    assert got == want


# -- classical sums ----------------------------------------------------------------


def test_classical_fixtures():
    assert models.classical_zeta((3,), 3) == Fraction(9, 8)
    assert models.classical_zeta_diamond((1, 2), 3) == Fraction(9, 8)
    assert models.classical_zeta_blocks((), 5) == 1
    assert models.classical_zeta_blocks((2, 1), 3) == Fraction(5, 4)
    assert models.classical_zeta((2,), 3) == Fraction(5, 4)


def test_classical_against_brute_force():
    for c in [(1, 1), (2, 1), (1, 2), (2, 2), (1, 1, 1, 1), (3, 1), (1, 1, 2, 1)]:
        for N in range(1, 7):
            assert models.classical_zeta_blocks(c, N) == brute_classical_blocks(c, N)
    for k in [(2,), (3,), (1, 2), (2, 2), (1, 1, 2), (2, 1, 2)]:
        for N in range(1, 7):
            assert models.classical_zeta_diamond(k, N) == brute_classical_diamond(
                k, N
            ), (k, N)


def test_classical_diamond_rejects_trailing_one():
    with pytest.raises(AdmissibilityError):
        models.classical_zeta_diamond((2, 1), 4)


# -- rational points ---------------------------------------------------------------


def test_eval_at_rational_q_examples():
    assert models.eval_at_rational_q("dagger", (1,), 2, N=2) == -2
    assert models.eval_at_rational_q("bz", (3,), Fraction(1, 2), N=2) == 2
    assert models.eval_at_rational_q("dagger", (), 5, N=3) == 1
    for bad in (0, 1, -1):
        with pytest.raises(ParameterError):
            models.eval_at_rational_q("dagger", (1,), bad, N=2)


def test_eval_at_rational_q_matches_series():
    # at |q|<1 rationals the truncated series disagrees with the exact value,
    # but both evaluators must agree term by term on the lattice: compare the
    # exact value against an independent Fraction-by-hand expansion
    q = Fraction(3)
    N = 4
    entries = (BAR1, 2)
    val = models.eval_at_rational_q("dagger", entries, q, N=N)
    want = Fraction(0)
    for n1 in range(1, N):
        for n2 in range(n1, N):
            want += Fraction(1, 1 - q ** (N - n1)) * (q**n2 / (1 - q**n2) ** 2)
    assert val == want


def test_verify_bridge():
    for w in ("", "y", "yx", "yxx", "yxy", "yyx"):
        for N in (1, 2, 3, 4):
            for q in (2, Fraction(1, 2), -2, Fraction(5, 7)):
                rep = models.verify_bridge(w, N, q)
                assert rep.passed, (w, N, q, rep.witness)


def test_bridge_example_values():
    assert models.z_map_at_q("dagger", "yx", Fraction(1, 2), N=2) == 2
    assert models.z_map_at_q("bz", "yx", 2, N=2) == 2
    assert models.z_map_at_q("dagger", "y", Fraction(1, 2), N=2) == 1
    assert -models.z_map_at_q("bz", "y", 2, N=2) == 1


# -- structural invariants ----------------------------------------------------------


def all_plain_indices(max_weight):
    out = [()]
    def rec(prefix, rem):
        for k in range(1, rem + 1):
            out.append(prefix + (k,))
            rec(prefix + (k,), rem - k)
    rec((), max_weight)
    return out


def test_stabilization_dagger():
    # coefficients below N of the finite value equal the infinite value
    pairs_pool = [(), (1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (1, 1, 1, 1)]
    for c in pairs_pool:
        k = bar_from_pairs(c)
        inf = models.zeta_infinite("dagger", k, order=8)
        for N in range(1, 9):
            fin = models.zeta_dagger_finite(k, N=N, order=8)
            for m in range(min(N, 9)):
                assert fin.coeff(m) == inf.coeff(m), (c, N, m)


def test_stabilization_bz_and_diamond():
    for k in [(2,), (3,), (1, 2), (2, 2), (1, 1, 2), (2, 3)]:
        inf = models.zeta_infinite("bz", k, order=8)
        for N in range(1, 9):
            fin = models.zeta_bz_finite(k, N=N, order=8)
            dia = models.zeta_diamond_finite("bz", k, N=N, order=8)
            for m in range(min(N, 9)):
                assert fin.coeff(m) == inf.coeff(m), (k, N, m)
                assert dia.coeff(m) == inf.coeff(m), (k, N, m)


def test_diamond_collapse_without_ones():
    for k in [(2,), (3,), (2, 2), (2, 3), (4, 2)]:
        for N in (2, 3, 5):
            assert models.zeta_diamond_finite("bz", k, N=N, order=12) == (
                models.zeta_bz_finite(k, N=N, order=12)
            )


def test_forward_difference_laws():
    order = 20
    for u in ("", "y", "yx", "yxx"):
        for k in (1, 2):
            for N in (1, 2, 3, 4):
                big = models.z_map(
                    "dagger_finite", u + "y" + "x" * (k - 1), N=N + 1, order=order
                )
                small = models.z_map(
                    "dagger_finite", u + "y" + "x" * (k - 1), N=N, order=order
                )
                base = models.z_map("dagger_finite", u, N=N, order=order)
                kernel = QSeries.monomial(order, N, 1) * invert_unit(
                    bracket(N, order)
                ) ** k
                assert big - small == kernel * base, (u, k, N)


def test_forward_difference_x_multiplier():
    order = 20
    for u in ("y", "yx"):
        for k in (1, 2):
            for N in (1, 2, 3):
                du = models.z_map("dagger_finite", u + "x" * k, N=N + 1, order=order) - (
                    models.z_map("dagger_finite", u + "x" * k, N=N, order=order)
                )
                base = models.z_map("dagger_finite", u, N=N + 1, order=order) - (
                    models.z_map("dagger_finite", u, N=N, order=order)
                )
                assert du == invert_unit(bracket(N, order)) ** k * base, (u, k, N)


def test_integrality_of_z_maps():
    for k in all_plain_indices(4):
        w = word_from_index(k)
        for N in (2, 4, 6):
            for s in (
                models.z_map("dagger_finite", w, N=N, order=10),
                models.z_map("bz_finite", w, N=N, order=10),
            ):
                assert all(isinstance(cf, int) and cf >= 0 for cf in s.coeffs), (k, N)


def test_classical_is_q_one_specialization():
    # sanity tying the q-lattice to the classical one: at each lattice point
    # the specialized factor q^n/(1-q^n)^k -> 1/n^k and 1/(1-q^{N-n}) -> 1/(N-n)
    # reproduce the classical evaluators; the brute-force walkers above do
    # exactly that, so cross-check them against the library on a joint grid
    for c in [(1, 1), (2, 1), (1, 2), (1, 1, 1, 1), (2, 2)]:
        for N in range(1, 7):
            assert models.classical_zeta_blocks(c, N) == brute_classical_blocks(c, N)
    for k in [(2,), (1, 2), (1, 1, 2)]:
        for N in range(1, 7):
            assert models.classical_zeta_diamond(k, N) == brute_classical_diamond(k, N)


def test_reflected_blocks_single_case():
    # k=(2), N=2: single point n11=n12=1 gives q/(1-q)^2
    s = models.zeta_reflected_blocks((2,), N=2, order=10)
    assert s.coeffs == tuple(range(11))


def test_reflected_blocks_matches_dagger():
    for k in [(1,), (2,), (3,), (1, 1), (2, 1), (1, 2), (2, 2), (1, 1, 1)]:
        for N in range(1, 6):
            lhs = models.zeta_dagger_finite(BarIndex(k), N=N, order=15)
            rhs = models.zeta_reflected_blocks(k, N=N, order=15)
            assert lhs == rhs, (k, N)
