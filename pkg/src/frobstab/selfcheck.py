"""Batch consistency suites: every closed formula against an independent route.

Suites never raise on a failed check; failures are collected as report
content.  Random draws come from ``random.Random(seed)`` where the seed is
taken from ``FROBSTAB_SEED`` (default 0), so reports are reproducible.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import ValidationError
from .forms import (
    alternating_tail,
    bound_bn_subsheaf,
    check_zi_instability,
    forms_closed,
    forms_recurrence,
)
from .frobenius import (
    SheafStats,
    VarietyContext,
    bound_pushforward_caseI,
    bound_pushforward_caseII,
    bound_sun,
    deg_pushforward_forms,
    filtration_degree,
    mu_pushforward,
    pushforward_forms_coeff,
    pushforward_stats,
)
from .hn import SlopeProfile, dominates, instability, normalize, polygon_of, refine
from .rational import alt_weighted_binomial_sum, bounded_compositions, format_rational
from .truncated import (
    bound_tl2,
    dvec,
    dvec_literal,
    instability_tl_exact,
    rank_tl,
    rank_tl_oracle,
    tl2_case_value,
    tl2_pairing_coefficient,
    tl_decomposition,
    tl_extremes,
)

GRIDS = {
    "small": {"max_rank": 4, "primes": (2, 3), "trials": 40, "dvec_trials": 10},
    "full": {"max_rank": 6, "primes": (2, 3, 5, 7), "trials": 150, "dvec_trials": 3},
}

MAX_FAILURES_KEPT = 20


def default_seed() -> int:
    raw = os.environ.get("FROBSTAB_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"FROBSTAB_SEED must be an integer, got {raw!r}") from None


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    observations: list[str] = field(default_factory=list)
    failure_count: int = 0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def check(self, ok: bool, describe) -> None:
        self.cases += 1
        if not ok:
            self.failure_count += 1
            if len(self.failures) < MAX_FAILURES_KEPT:
                self.failures.append(describe() if callable(describe) else str(describe))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "cases": self.cases,
            "passed": self.passed,
            "failure_count": self.failure_count,
            "failures": self.failures,
            "observations": self.observations,
        }


def random_slope(rng: random.Random, span: int = 12, max_den: int = 6) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def random_profile(rng: random.Random, max_blocks: int = 4, max_total_rank: int = 6) -> SlopeProfile:
    """Random list of blocks, not necessarily HN-normal."""
    m = rng.randint(1, min(max_blocks, max_total_rank))
    ranks = [1] * m
    for _ in range(rng.randint(0, max_total_rank - m)):
        ranks[rng.randrange(m)] += 1
    return SlopeProfile((r, random_slope(rng)) for r in ranks)


def random_refinement(rng: random.Random, max_total_rank: int = 6):
    """An HN-normal profile with a splittable block, and one refinement of it."""
    while True:
        base = normalize(random_profile(rng, 4, max_total_rank))
        idx = [k for k, b in enumerate(base.blocks) if b.rank >= 2]
        if idx:
            break
    k = rng.choice(idx)
    blk = base.blocks[k]
    r1 = rng.randint(1, blk.rank - 1)
    mu1 = blk.slope + Fraction(rng.randint(0, 12), rng.randint(1, 4))
    return base, refine(base, k, r1, mu1)


def strictly_decreasing_slopes(rng: random.Random, r: int) -> list[Fraction]:
    vals: set[Fraction] = set()
    while len(vals) < r:
        vals.add(random_slope(rng, 30, 5))
    return sorted(vals, reverse=True)


def brute_argmax(xs, p: int, l: int) -> list[tuple[int, ...]]:
    """All exponent vectors (entries <= p-1, sum l) maximizing ``sum k_i x_i``."""
    den = 1
    for x in xs:
        den = den * x.denominator // _gcd(den, x.denominator)
    ints = [int(x * den) for x in xs]
    best, arg = None, []
    for k in bounded_compositions(l, [p - 1] * len(xs)):
        v = sum(a * b for a, b in zip(k, ints))
        if best is None or v > best:
            best, arg = v, [k]
        elif v == best:
            arg.append(k)
    return arg


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# -- suites ------------------------------------------------------------------


def suite_rank_oracle(g) -> SuiteResult:
    res = SuiteResult("rank-tl-oracle")
    for r, p in product(range(1, g["max_rank"] + 1), g["primes"]):
        for l in range(r * (p - 1) + 3):
            a, b = rank_tl(r, p, l), rank_tl_oracle(r, p, l)
            res.check(a == b, lambda: f"r={r} p={p} l={l}: formula {a} vs count {b}")
    return res


def suite_tl_identities(g) -> SuiteResult:
    res = SuiteResult("truncated-algebra-identities")
    for r, p in product(range(1, g["max_rank"] + 1), g["primes"]):
        top = r * (p - 1)
        ranks = [rank_tl(r, p, l) for l in range(top + 1)]
        res.check(sum(ranks) == p**r, lambda: f"r={r} p={p}: total {sum(ranks)} != p^r")
        res.check(ranks == ranks[::-1], lambda: f"r={r} p={p}: duality fails")
        moment = sum(l * k for l, k in enumerate(ranks))
        res.check(
            2 * moment == top * p**r,
            lambda: f"r={r} p={p}: first moment {moment} != r(p-1)p^r/2",
        )
    return res


def suite_dvec_optimality(g, rng) -> SuiteResult:
    res = SuiteResult("dvec-optimality")
    primes = [p for p in g["primes"] if p <= 5]
    for r, p in product(range(1, min(g["max_rank"], 5) + 1), primes):
        for _ in range(g["dvec_trials"]):
            xs = strictly_decreasing_slopes(rng, r)
            for l in range(r * (p - 1) + 1):
                arg = brute_argmax(xs, p, l)
                d = dvec(r, p, l)
                res.check(
                    arg == [d],
                    lambda: f"r={r} p={p} l={l} x={[format_rational(x) for x in xs]}: "
                    f"argmax {arg} vs dvec {d}",
                )
    return res


def suite_tl2(g, rng) -> SuiteResult:
    res = SuiteResult("tl2-bound-and-extremes")
    equality = 0
    for _ in range(g["trials"]):
        prof = random_profile(rng, 4, 6)
        for p in [q for q in g["primes"] if q <= 5]:
            r = prof.total_rank
            i_e = instability(prof)
            for l in range(r * (p - 1) + 1):
                ex = instability_tl_exact(prof, p, l)
                bd = bound_tl2(prof, p, l)
                res.check(ex <= bd, lambda: f"{prof.to_json()} p={p} l={l}: {ex} > {bd}")
                equality += ex == bd
                dec = tl_decomposition(prof, p, l)
                hi, lo = tl_extremes(prof, p, l)
                res.check(
                    (dec.mu_max, dec.mu_min) == (hi, lo),
                    lambda: f"{prof.to_json()} p={p} l={l}: decomposition extremes differ",
                )
                res.check(
                    dec.total_rank == rank_tl(r, p, l),
                    lambda: f"{prof.to_json()} p={p} l={l}: decomposition rank mismatch",
                )
                res.check(
                    tl2_case_value(r, p, l, i_e) == tl2_pairing_coefficient(r, p, l) * i_e,
                    lambda: f"r={r} p={p} l={l}: case table disagrees with dvec pairing",
                )
    res.observations.append(f"bound attained with equality in {equality} cases")
    return res


def suite_refinement(g, rng) -> SuiteResult:
    res = SuiteResult("refinement-monotonicity")
    for _ in range(g["trials"]):
        base, fine = random_refinement(rng)
        res.check(
            dominates(polygon_of(normalize(fine)), polygon_of(base)),
            lambda: f"{fine.to_json()} does not dominate {base.to_json()}",
        )
        p = rng.choice(g["primes"])
        for l in range(base.total_rank * (p - 1) + 1):
            a = instability_tl_exact(base, p, l)
            b = instability_tl_exact(fine, p, l)
            res.check(b >= a, lambda: f"p={p} l={l}: refined {b} < coarse {a}")
    return res


def suite_pushforward(g, rng) -> SuiteResult:
    res = SuiteResult("pushforward-ledger")
    for n, p in product(range(1, g["max_rank"] + 1), g["primes"]):
        for _ in range(5):
            ctx = VarietyContext(n, p, random_slope(rng))
            stats = SheafStats(rng.randint(1, 3), random_slope(rng))
            led = pushforward_stats(ctx, stats)
            res.check(
                p * led.degree == filtration_degree(ctx, stats),
                lambda: f"n={n} p={p}: ledger mismatch",
            )
            res.check(
                mu_pushforward(ctx, mu_pushforward(ctx, stats.slope, 1), 1)
                == mu_pushforward(ctx, stats.slope, 2),
                lambda: f"n={n} p={p}: iteration incoherent",
            )
            for i in range(n + 1):
                rk, deg = deg_pushforward_forms(ctx, i)
                res.check(
                    deg / rk == mu_pushforward(ctx, i * ctx.mu_omega, 1),
                    lambda: f"n={n} p={p} i={i}: forms slope mismatch",
                )
    return res


def suite_forms(g) -> SuiteResult:
    res = SuiteResult("forms-closed-vs-recurrence")
    for n, p in product(range(1, g["max_rank"] + 1), g["primes"]):
        tab = forms_recurrence(n, p)
        res.check(tab.cartier_ok(), lambda: f"n={n} p={p}: Cartier deltas fail")
        for i in range(1, n + 1):
            closed = forms_closed(n, p, i)
            res.check(
                closed == tab.row(i),
                lambda: f"(n={n}, p={p}, i={i}): closed {closed} vs recurrence {tab.row(i)}",
            )
            prev_push = pushforward_forms_coeff(n, p, i - 1)[0]
            res.check(
                tab.row(i).rank_b + tab.row(i - 1).rank_z == prev_push,
                lambda: f"(n={n}, p={p}, i={i}): first sequence not exact in rank",
            )
        top = pushforward_forms_coeff(n, p, n)
        res.check(
            (tab.row(n).rank_z, tab.row(n).degz_coeff) == top,
            lambda: f"n={n} p={p}: Z^n differs from F_*omega",
        )
    return res


def suite_instzix(g) -> SuiteResult:
    res = SuiteResult("instzix-verdicts")
    primes = [p for p in g["primes"] if p >= 3]
    zero_tail = []
    for n in range(2, 9):
        for p in primes:
            tab = forms_recurrence(n, p)
            for i in range(1, n):
                if 2 * i >= n:
                    continue
                v = check_zi_instability(n, p, i, tab)
                res.check(v.exact_destabilizes, lambda: f"n={n} p={p} i={i}: not destabilizing")
                tail = alternating_tail(n, p, i)
                res.check(tail >= 0, lambda: f"n={n} p={p} i={i}: alternating tail {tail} < 0")
                if tail == 0:
                    zero_tail.append((n, p, i))
    if zero_tail:
        res.observations.append(
            f"alternating tail is 0 (not > 0) in {len(zero_tail)} cases, all with "
            f"i={sorted({c[2] for c in zero_tail})}"
        )
    # monotonicity in p is an observation only
    nonmono = []
    for n in range(2, 9):
        for i in range(1, n):
            flags = [check_zi_instability(n, p, i).exact_destabilizes for p in (2, 3, 5, 7, 11)]
            if any(a and not b for a, b in zip(flags, flags[1:])):
                nonmono.append((n, i))
    res.observations.append(
        "exact_destabilizes monotone in p for every (n, i), n <= 8"
        if not nonmono
        else f"exact_destabilizes not monotone in p for (n, i) in {nonmono}"
    )
    return res


def suite_bn(g) -> SuiteResult:
    res = SuiteResult("bn-subsheaf-bound")
    for n, p in product(range(1, min(g["max_rank"], 4) + 1), g["primes"]):
        top = p**n - 1
        for r_b in range(1, top):
            b = bound_bn_subsheaf(n, p, r_b, 1)
            res.check(b < 0, lambda: f"n={n} p={p} r_b={r_b}: bound {b} not negative")
        res.check(bound_bn_subsheaf(n, p, top, 1) == 0, lambda: f"n={n} p={p}: top not 0")
    return res


def suite_pipeline(g, rng) -> SuiteResult:
    res = SuiteResult("bound-pipeline-coherence")
    for n, p in product(range(1, g["max_rank"] + 1), g["primes"]):
        ctx = VarietyContext(n, p, 0, lmax_omega=0, i_omega=0)
        for _ in range(3):
            stats = SheafStats(rng.randint(1, 4), 0, Fraction(rng.randint(0, 9), rng.randint(1, 4)))
            _, total = bound_pushforward_caseII(ctx, stats)
            expect = p ** (n - 1) * stats.rank * stats.instability
            sun = bound_sun(ctx, stats.rank, [stats.instability] * (ctx.top_degree + 1))
            res.check(total == expect == sun, lambda: f"n={n} p={p}: {total} {expect} {sun}")
        ss = VarietyContext(n, p, 0, omega_semistable=True)
        res.check(
            bound_pushforward_caseI(ss, 3) == 0, lambda: f"n={n} p={p}: case I at mu=0 not 0"
        )
    return res


def suite_binomial_identity(g) -> SuiteResult:
    res = SuiteResult("alt-weighted-binomial")
    for n in range(2, 31):
        v = alt_weighted_binomial_sum(n)
        res.check(v == 0, lambda: f"n={n}: sum {v}")
    res.observations.append(f"n=1 gives {alt_weighted_binomial_sum(1)} (identity needs n >= 2)")
    return res


# -- errata: printed statements that fail exact checks ----------------------


def errata(g) -> list[dict]:
    """The three places where a printed statement disagrees with exact computation."""
    notes = []

    bad = []
    for r, p in product(range(1, g["max_rank"] + 1), g["primes"]):
        for l in range(r * (p - 1) + 1):
            lit = dvec_literal(r, p, l)
            if sum(lit) != l:
                bad.append((r, p, l))
    notes.append(
        {
            "id": "dvec-indexing",
            "statement": "d = (p-1, ..., p-1, l - l(p)p, ..., 0) with l(p) = floor(l/p) leading entries",
            "finding": "entries do not sum to l in general; the greedy split l = t(p-1) + s is used",
            "example": {
                "r": 3,
                "p": 3,
                "l": 4,
                "literal": list(dvec_literal(3, 3, 4)),
                "greedy": list(dvec(3, 3, 4)),
            },
            "cases_with_wrong_sum": len(bad),
        }
    )

    conflicts = []
    for n in range(2, 9):
        for p in sorted(set(g["primes"]) | {2}):
            for i in range(1, n):
                if 2 * i >= n:
                    continue
                v = check_zi_instability(n, p, i)
                if v.conflict or not v.exact_destabilizes:
                    conflicts.append(
                        {
                            "n": n,
                            "p": p,
                            "i": i,
                            "exact_first_term": format_rational(v.exact_first_term_ratio),
                            "printed": format_rational(v.printed_sufficient_lhs),
                            "mu_b_coeff": format_rational(v.mu_b_coeff),
                            "exact_destabilizes": v.exact_destabilizes,
                        }
                    )
    notes.append(
        {
            "id": "instzix-simplification",
            "statement": "n C p^{n-1}(p-1) / 2C(p^n-1) = n(p^n-p) / 2(p^n-1)",
            "finding": "equality needs p^{n-1}(p-1) = p^n - p, true only for n = 2; "
            "the printed sufficient inequality can hold while the exact one fails",
            "cases": conflicts,
        }
    )

    strict_gap = []
    for r, p in product(range(1, g["max_rank"] + 1), g["primes"]):
        l = r * (p - 1)
        strict = sum(1 for _ in bounded_compositions(l, [r * (p - 1) - 1]))
        if strict != rank_tl(r, p, l):
            strict_gap.append((r, p))
    notes.append(
        {
            "id": "phi0-strict-inequality",
            "statement": "phi_0 nonzero on (x) Sym^{k_i}(E_i) iff 0 <= k_i < r_i(p-1)",
            "finding": "the top power T^{r(p-1)} has rank 1, so k_i = r_i(p-1) must be allowed; "
            "the inclusive bound is used",
            "single_block_cases_contradicted": len(strict_gap),
        }
    )
    return notes


def run_selfcheck(grid: str = "small", seed: int | None = None) -> dict:
    if grid not in GRIDS:
        raise ValidationError(f"unknown grid {grid!r}; choose from {sorted(GRIDS)}")
    g = GRIDS[grid]
    seed = default_seed() if seed is None else seed
    rng = random.Random(seed)
    suites = [
        suite_rank_oracle(g),
        suite_tl_identities(g),
        suite_dvec_optimality(g, rng),
        suite_tl2(g, rng),
        suite_refinement(g, rng),
        suite_pushforward(g, rng),
        suite_forms(g),
        suite_instzix(g),
        suite_bn(g),
        suite_pipeline(g, rng),
        suite_binomial_identity(g),
    ]
    passed = sum(s.passed for s in suites)
    return {
        "grid": grid,
        "seed": seed,
        "suites": [s.to_json() for s in suites],
        "summary": {
            "suites": len(suites),
            "passed": passed,
            "failed": len(suites) - passed,
            "cases": sum(s.cases for s in suites),
        },
        "errata": errata(g),
    }
