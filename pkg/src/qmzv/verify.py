"""Desk-scale verification suite: every identity, bounded grids, exact math.

Each verifier compares two independently computed sides and returns a Report;
run_suite enumerates all instances inside a SuiteConfig's bounds.  Failures
are data, not exceptions, and carry a coefficient-level witness.  The case
list is generated in a fixed order and reports are merged in that order, so
identical configs produce byte-identical JSON no matter how the work is
scheduled.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .constructor import (
    classical_expansion_word,
    expansion_word,
    bz_word,
    reverse_pairs,
)
from .errors import ParameterError
from .genfun import verify_b_diff, verify_g_diff, verify_recurrence
from .models import (
    check_q_sample,
    classical_zeta_blocks,
    classical_zeta_diamond,
    verify_bridge,
    xi_value,
    z_map,
    zeta_dagger_finite,
    zeta_diamond_finite,
    zeta_infinite,
    zeta_reflected_blocks,
)
from .report import Report, compare_series
from .transforms import verify_transform
from .words import (
    BarIndex,
    bar_from_pairs,
    check_pairs,
    diamond_from_pairs,
    word_from_index,
)


# -- instance enumeration -----------------------------------------------------------


def pair_indices(max_weight: int) -> list:
    """Flattened pair tuples (even length, entries >= 1) with sum <= max_weight."""
    out = [()]

    def extend(prefix, budget):
        for l in range(1, budget):
            for k in range(1, budget - l + 1):
                cur = prefix + (l, k)
                out.append(cur)
                extend(cur, budget - l - k)

    extend((), max_weight)
    return out


def plain_indices(max_weight: int) -> list:
    """Index tuples (entries >= 1) with sum <= max_weight, the empty one first."""
    out = [()]

    def extend(prefix, budget):
        for k in range(1, budget + 1):
            cur = prefix + (k,)
            out.append(cur)
            extend(cur, budget - k)

    extend((), max_weight)
    return out


# -- single-identity verifiers ------------------------------------------------------


def verify_main_finite(eps: int, c, N: int, order: int) -> Report:
    """Nested-sum value vs evaluated constructed word, window (0, N)."""
    c = check_pairs(c)
    params = {"eps": eps, "c": c, "N": N, "order": order}
    lhs = xi_value(eps, c, N=N, order=order)
    rhs = z_map("dagger_finite", expansion_word(eps, c), N=N, order=order)
    return compare_series("main-finite", params, lhs, rhs)


def verify_main_finite_bz(c, N: int, order: int, qsamples=()) -> Report:
    """Strict-model side: series equality plus rational-point sign bridges."""
    c = check_pairs(c)
    qsamples = tuple(check_q_sample(q) for q in qsamples)
    params = {
        "c": c,
        "N": N,
        "order": order,
        "q_samples": tuple(str(q) for q in qsamples),
    }
    word = bz_word(c)
    lhs = zeta_diamond_finite("bz", diamond_from_pairs(c), N=N, order=order)
    rhs = z_map("bz_finite", word, N=N, order=order)
    series_report = compare_series("main-finite-bz", params, lhs, rhs)
    if not series_report.passed:
        return series_report
    for q in qsamples:
        for w, _ in word.terms():
            bridge = verify_bridge(w, N, q)
            if not bridge.passed:
                witness = dict(bridge.witness or {})
                witness.update({"word": w, "q": str(q)})
                return Report("main-finite-bz", params, "fail", witness)
    return Report("main-finite-bz", params, "pass")


def verify_main_infinite(side: str, c, order: int) -> Report:
    """Limit statement, checked on the independent infinite evaluators."""
    c = check_pairs(c)
    params = {"side": side, "c": c, "order": order}
    if side == "dagger":
        lhs = zeta_infinite("dagger", bar_from_pairs(c), order=order)
        rhs = z_map("dagger_inf", expansion_word(0, c), order=order)
    elif side == "bz":
        lhs = zeta_infinite("bz", diamond_from_pairs(c), order=order)
        rhs = z_map("bz_inf", bz_word(c), order=order)
    else:
        raise ParameterError(f"side must be 'dagger' or 'bz', got {side!r}")
    return compare_series("main-infinite", params, lhs, rhs)


def _interleave(l, k) -> tuple:
    l, k = tuple(l), tuple(k)
    if len(l) != len(k):
        raise ParameterError(f"l and k must have equal length, got {l} and {k}")
    return tuple(x for pair in zip(l, k) for x in pair)


def verify_remarks(kind: str, l, k, N: int, order: int) -> Report:
    """Reversal dualities of the finite models and the weak-block reflection."""
    kind = kind.replace("_", "-")
    if kind == "dual-flat":
        c = check_pairs(_interleave(l, k))
        params = {"kind": kind, "c": c, "N": N, "order": order}
        lhs = zeta_dagger_finite(bar_from_pairs(c), N=N, order=order)
        rhs = zeta_dagger_finite(bar_from_pairs(reverse_pairs(c)), N=N, order=order)
        return compare_series("dual-flat", params, lhs, rhs)
    if kind == "dual-diamond":
        c = check_pairs(_interleave(l, k))
        params = {"kind": kind, "c": c, "N": N, "order": order}
        lhs = zeta_diamond_finite("bz", diamond_from_pairs(c), N=N, order=order)
        rhs = zeta_diamond_finite(
            "bz", diamond_from_pairs(reverse_pairs(c)), N=N, order=order
        )
        return compare_series("dual-diamond", params, lhs, rhs)
    if kind == "qmsw":
        if l is not None:
            raise ParameterError("qmsw takes l = None")
        k = tuple(k)
        params = {"kind": kind, "k": k, "N": N, "order": order}
        lhs = zeta_dagger_finite(BarIndex(k), N=N, order=order)
        rhs = zeta_reflected_blocks(k, N=N, order=order)
        return compare_series("qmsw", params, lhs, rhs)
    raise ParameterError(f"unknown remark kind {kind!r}")


def verify_classical(c, N: int) -> Report:
    """Exact rational check of both classical-limit statements."""
    c = check_pairs(c)
    params = {"c": c, "N": N}
    lhs_plain = classical_zeta_blocks(c, N)
    rhs_plain = z_map("classical", classical_expansion_word(0, c), N=N)
    if lhs_plain != rhs_plain:
        witness = {"side": "plain", "lhs": str(lhs_plain), "rhs": str(rhs_plain)}
        return Report("classical", params, "fail", witness)
    lhs_diamond = classical_zeta_diamond(diamond_from_pairs(c), N)
    rhs_diamond = z_map("classical", classical_expansion_word(1, c), N=N)
    if lhs_diamond != rhs_diamond:
        witness = {"side": "diamond", "lhs": str(lhs_diamond), "rhs": str(rhs_diamond)}
        return Report("classical", params, "fail", witness)
    return Report("classical", params, "pass")


# -- injectivity evidence -----------------------------------------------------------


def exact_rank(matrix) -> int:
    """Row rank over the rationals by fraction-exact forward elimination."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][col]
        prow = [x * inv for x in rows[rank]]
        rows[rank] = prow
        for i in range(rank + 1, len(rows)):
            f = rows[i][col]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def independence_check(model: str, max_weight: int, N_list, order: int) -> Report:
    """Full row rank of the word-to-coefficient matrix: evidence, not proof."""
    if model not in ("dagger_finite", "bz_finite"):
        raise ParameterError(f"model must be a finite model, got {model!r}")
    N_list = tuple(N_list)
    words = plain_indices(max_weight)
    params = {
        "model": model,
        "max_weight": max_weight,
        "N_list": N_list,
        "order": order,
    }
    matrix = []
    for k in words:
        word = word_from_index(k)
        row = []
        for N in N_list:
            row.extend(z_map(model, word, N=N, order=order).coeffs)
        matrix.append(row)
    rank = exact_rank(matrix)
    expected = len(words)
    status = "pass" if rank == expected else "fail"
    witness = {"rank": rank, "expected": expected, "evidence": "desk scale only"}
    return Report("independence", params, status, witness)


# -- suite --------------------------------------------------------------------------


_DEFAULT_Q_SAMPLES = ("2", "1/2", "3", "-2", "5/7")


@dataclass(frozen=True)
class SuiteConfig:
    max_weight: int = 5
    max_N: int = 6
    order: int = 20
    maxdeg: int = 2
    max_r: int = 2
    rational_q_samples: tuple = _DEFAULT_Q_SAMPLES
    parallelism: int = 1

    def __post_init__(self):
        for name in ("max_weight", "max_N", "order", "maxdeg", "max_r"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ParameterError(f"{name} must be an int >= 0, got {v!r}")
        if self.max_N < 1:
            raise ParameterError(f"max_N must be >= 1, got {self.max_N}")
        if not isinstance(self.parallelism, int) or self.parallelism < 1:
            raise ParameterError(f"parallelism must be an int >= 1, got {self.parallelism!r}")
        samples = tuple(check_q_sample(Fraction(str(q))) for q in self.rational_q_samples)
        object.__setattr__(self, "rational_q_samples", samples)


def config_from_mapping(data: dict) -> SuiteConfig:
    allowed = {
        "max_weight",
        "max_N",
        "order",
        "maxdeg",
        "max_r",
        "rational_q_samples",
        "parallelism",
    }
    unknown = set(data) - allowed
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    return SuiteConfig(**data)


def config_from_json(text: str) -> SuiteConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParameterError("config must be a flat JSON object")
    return config_from_mapping(data)


def _enumerate_cases(cfg: SuiteConfig):
    """Fixed-order list of (identity, thunk) pairs covering every family."""
    cases = []

    def add(identity, thunk):
        cases.append((identity, thunk))

    pairs = pair_indices(cfg.max_weight)
    plains = plain_indices(cfg.max_weight)
    o = cfg.order

    for c in pairs:
        for N in range(1, cfg.max_N + 1):
            for eps in (0, 1):
                add("main-finite", lambda eps=eps, c=c, N=N: verify_main_finite(eps, c, N, o))
            add(
                "main-finite-bz",
                lambda c=c, N=N: verify_main_finite_bz(c, N, o, cfg.rational_q_samples),
            )
        for side in ("dagger", "bz"):
            add("main-infinite", lambda side=side, c=c: verify_main_infinite(side, c, o))

    for eps in (0, 1):
        for N in range(1, cfg.max_N + 1):
            for M in range(0, N):
                for r in range(0, cfg.max_r + 1):
                    if M >= 1 and r >= 1:
                        add(
                            "g-diff",
                            lambda eps=eps, M=M, N=N, r=r: verify_g_diff(
                                eps, M, N, r, cfg.maxdeg, o
                            ),
                        )
                    add(
                        "recurrence",
                        lambda eps=eps, M=M, N=N, r=r: verify_recurrence(
                            eps, M, N, r, cfg.maxdeg, o
                        ),
                    )
                if M >= 1:
                    add(
                        "b-diff",
                        lambda eps=eps, M=M, N=N: verify_b_diff(eps, M, N, cfg.maxdeg, o),
                    )

    for c in pairs:
        if not c:
            continue
        if len(c) // 2 > cfg.max_r:
            continue
        l, k = c[0::2], c[1::2]
        add("transform", lambda l=l, k=k: verify_transform(1, l, k, o))
        add("transform", lambda l=l, k=k: verify_transform(3, l, k, o))
    for k in plains:
        if k and len(k) <= cfg.max_r:
            add("transform", lambda k=k: verify_transform(2, None, k, o))
            add("transform", lambda k=k: verify_transform(4, None, k, o))

    for c in pairs:
        l, k = c[0::2], c[1::2]
        for N in range(1, cfg.max_N + 1):
            add(
                "dual-flat",
                lambda l=l, k=k, N=N: verify_remarks("dual-flat", l, k, N, o),
            )
            add(
                "dual-diamond",
                lambda l=l, k=k, N=N: verify_remarks("dual-diamond", l, k, N, o),
            )
    for k in plains:
        for N in range(1, cfg.max_N + 1):
            add("qmsw", lambda k=k, N=N: verify_remarks("qmsw", None, k, N, o))

    for c in pairs:
        for N in range(1, cfg.max_N + 1):
            add("classical", lambda c=c, N=N: verify_classical(c, N))

    for k in plains:
        w = word_from_index(k)
        for N in range(1, min(cfg.max_N, 5) + 1):
            for q in cfg.rational_q_samples:
                add("bridge", lambda w=w, N=N, q=q: verify_bridge(w, N, q))

    # Rank evidence needs windows up to 6 and order >= 10 to separate the
    # weight <= 4 words, so this case keeps its own floor under small configs.
    iw = min(cfg.max_weight, 4)
    ilist = tuple(range(1, 7))
    for model in ("dagger_finite", "bz_finite"):
        add(
            "independence",
            lambda model=model: independence_check(model, iw, ilist, max(o, 12)),
        )
    return cases


def _constructor_stats(cfg: SuiteConfig) -> dict:
    max_coeff = 0
    max_terms = 0
    for c in pair_indices(cfg.max_weight):
        for eps in (0, 1):
            u = expansion_word(eps, c)
            max_coeff = max(max_coeff, u.max_abs_coeff())
            max_terms = max(max_terms, len(u.terms()))
    return {"max_abs_coefficient": max_coeff, "max_term_count": max_terms}


def run_suite(cfg: SuiteConfig, filter_identity: str | None = None):
    """Run every case, merge reports in enumeration order, summarize.

    Returns (reports, summary).  Failures are carried as data; the summary's
    "failed" count is what drives exit status upstream.  Observed constructor
    coefficient statistics are recorded, never asserted.
    """
    cases = _enumerate_cases(cfg)
    if filter_identity is not None:
        cases = [(name, thunk) for name, thunk in cases if name == filter_identity]
    if cfg.parallelism > 1 and len(cases) > 1:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            futures = [pool.submit(thunk) for _, thunk in cases]
            reports = [f.result() for f in futures]
    else:
        reports = [thunk() for _, thunk in cases]

    by_identity: dict[str, dict] = {}
    for r in reports:
        slot = by_identity.setdefault(r.identity, {"cases": 0, "failed": 0})
        slot["cases"] += 1
        slot["failed"] += 0 if r.passed else 1
    summary = {
        "cases": len(reports),
        "passed": sum(1 for r in reports if r.passed),
        "failed": sum(1 for r in reports if not r.passed),
        "identities": by_identity,
        "constructor_stats": _constructor_stats(cfg),
    }
    return reports, summary
