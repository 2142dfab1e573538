"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line (visible even under
output capture) with what was checked and how long it took.
"""

import random
import time
from fractions import Fraction as F
from itertools import product

import pytest

from frobstab.cli import main
from frobstab.forms import bound_bn_subsheaf, check_zi_instability, forms_closed, forms_recurrence
from frobstab.frobenius import (
    SheafStats,
    VarietyContext,
    bound_pushforward_caseI,
    bound_pushforward_caseII,
    bound_sun,
    deg_pushforward_forms,
    mu_pushforward,
    pushforward_forms_coeff,
    pushforward_stats,
)
from frobstab.hn import SlopeProfile, dominates, instability, normalize, polygon_of, refine
from frobstab.rational import binomial, bounded_compositions
from frobstab.selfcheck import default_seed
from frobstab.truncated import dvec, instability_tl_exact, rank_tl, tl_decomposition, tl_extremes


@pytest.fixture
def verdict(capsys):
    t0 = time.perf_counter()

    def emit(number, title, ok, budget, detail=""):
        elapsed = time.perf_counter() - t0
        ok = ok and elapsed < budget
        tag = "PASS" if ok else "FAIL"
        with capsys.disabled():
            print(f"\n[{tag}] criterion {number}: {title} ({elapsed:.2f}s / {budget}s) {detail}")
        assert ok, f"criterion {number} failed: {detail}"

    return emit


@pytest.fixture
def rng():
    return random.Random(default_seed())


def rand_slope(rng, num=30, den=6):
    return F(rng.randint(-num, num), rng.randint(1, den))


def rand_profile(rng, max_blocks, max_rank):
    while True:
        k = rng.randint(1, max_blocks)
        ranks = [rng.randint(1, max_rank) for _ in range(k)]
        if sum(ranks) <= max_rank:
            return SlopeProfile((r, rand_slope(rng)) for r in ranks)


def test_criterion_01_rank_oracle(verdict):
    bad, cases = [], 0
    for r, p in product(range(1, 6), (2, 3, 5, 7)):
        for l in range(r * (p - 1) + 3):
            cases += 1
            count = sum(1 for _ in bounded_compositions(l, [p - 1] * r))
            if rank_tl(r, p, l) != count:
                bad.append((r, p, l))
    verdict(1, "rank_tl equals bounded-composition count", not bad, 5, f"{cases} cases, bad={bad[:5]}")


def test_criterion_02_truncated_identities(verdict):
    bad = []
    for r, p in product(range(1, 6), (2, 3, 5, 7)):
        top = r * (p - 1)
        ranks = [rank_tl(r, p, l) for l in range(top + 1)]
        if sum(ranks) != p**r:
            bad.append(("total", r, p))
        if ranks != ranks[::-1]:
            bad.append(("duality", r, p))
        if 2 * sum(l * x for l, x in enumerate(ranks)) != top * p**r:
            bad.append(("first moment", r, p))
        if rank_tl(r, p, top + 1) != 0:
            bad.append(("vanishing", r, p))
    verdict(2, "total rank, duality, first moment", not bad, 5, f"bad={bad[:5]}")


def test_criterion_03_dvec_optimality(verdict, rng):
    bad, cases = [], 0
    for r, p in product(range(1, 6), (2, 3, 5)):
        vectors = list(product(range(p), repeat=r))
        for _ in range(100):
            xs = set()
            while len(xs) < r:
                xs.add(rand_slope(rng))
            xs = sorted(xs, reverse=True)
            best = {}
            for k in vectors:
                v = sum(a * x for a, x in zip(k, xs))
                l = sum(k)
                if l not in best or v > best[l][0]:
                    best[l] = (v, [k])
                elif v == best[l][0]:
                    best[l][1].append(k)
            for l, (_, args) in best.items():
                cases += 1
                if args != [dvec(r, p, l)]:
                    bad.append((r, p, l, xs))
    verdict(3, "dvec is the unique brute-force argmax", not bad, 30, f"{cases} cases, bad={bad[:2]}")


def test_criterion_04_tl2_bound(verdict, rng):
    bad, cases = [], 0
    for _ in range(1000):
        prof = rand_profile(rng, 4, 6)
        p = rng.choice((2, 3, 5))
        r = prof.total_rank
        i_e = instability(prof)
        for l in range(r * (p - 1) + 1):
            cases += 1
            got = instability_tl_exact(prof, p, l)
            if got > min(l, (r // 2) * (p - 1)) * i_e:
                bad.append(("bound", prof.to_json(), p, l))
            dec = tl_decomposition(prof, p, l)
            if (dec.mu_max, dec.mu_min) != tl_extremes(prof, p, l):
                bad.append(("extremes", prof.to_json(), p, l))
    verdict(4, "Tl2 bound and decomposition extremes", not bad, 60, f"{cases} cases, bad={bad[:2]}")


def test_criterion_05_refinement_monotonicity(verdict, rng):
    bad, pairs = [], 0
    while pairs < 1000:
        base = normalize(rand_profile(rng, 4, 6))
        idx = [k for k, b in enumerate(base.blocks) if b.rank >= 2]
        if not idx:
            continue
        pairs += 1
        k = rng.choice(idx)
        blk = base.blocks[k]
        fine = refine(base, k, rng.randint(1, blk.rank - 1), blk.slope + F(rng.randint(0, 12), rng.randint(1, 4)))
        if not dominates(polygon_of(normalize(fine)), polygon_of(base), equal_degree=True):
            bad.append(("polygon", fine.to_json()))
        p = rng.choice((2, 3, 5))
        for l in range(base.total_rank * (p - 1) + 1):
            if instability_tl_exact(fine, p, l) < instability_tl_exact(base, p, l):
                bad.append(("instability", fine.to_json(), p, l))
    verdict(5, "refinements dominate and raise T^l instability", not bad, 30, f"{pairs} pairs, bad={bad[:2]}")


def test_criterion_06_pushforward_ledger(verdict, rng):
    # deg(F^*F_*E) = p deg(F_*E), so the filtration sum is p * p^n r mu(F_*E)
    bad, cases = [], 0
    for n, p in product(range(1, 5), (2, 3, 5)):
        for _ in range(20):
            mu_e, mu_om = rand_slope(rng), rand_slope(rng)
            r = rng.randint(1, 4)
            ctx = VarietyContext(n, p, mu_om)
            led = pushforward_stats(ctx, SheafStats(r, mu_e))
            total = sum(
                r * rank_tl(n, p, l) * (mu_e + l * mu_om) for l in range(n * (p - 1) + 1)
            )
            lhs = p**n * r * mu_pushforward(ctx, mu_e)
            cases += 1
            if p * lhs != total or led.degree != lhs:
                bad.append(("ledger", n, p, mu_e, mu_om))
            for i in range(n + 1):
                rk, deg = deg_pushforward_forms(ctx, i)
                if deg / rk != mu_pushforward(ctx, i * mu_om):
                    bad.append(("forms", n, p, i))
    ok = not bad
    verdict(
        6,
        "pushforward degree ledger and forms slopes",
        ok,
        5,
        f"{cases} cases; sum over filtration = p * p^n r mu(F_*E) in all, bad={bad[:3]}",
    )


def test_criterion_07_forms_table(verdict):
    bad = []
    for n, p in product(range(1, 7), (2, 3, 5)):
        t = forms_recurrence(n, p)
        for i in range(1, n + 1):
            row, prev = t.row(i), t.row(i - 1)
            if forms_closed(n, p, i) != row:
                bad.append(("closed", n, p, i))
            c = binomial(n, i)
            if (row.rank_z - row.rank_b, row.degz_coeff - row.degb_coeff) != (c, i * c):
                bad.append(("cartier", n, p, i))
            if row.rank_b + prev.rank_z != binomial(n, i - 1) * p**n:
                bad.append(("exactness", n, p, i))
        if (t.row(n).rank_z, t.row(n).degz_coeff) != pushforward_forms_coeff(n, p, n):
            bad.append(("top", n, p))
    verdict(7, "closed forms, Cartier deltas, top row", not bad, 5, f"counterexamples={bad[:5]}")


def test_criterion_08_instzix(verdict):
    bad = []
    for n, p in product(range(3, 9), (3, 5, 7)):
        for i in range(1, n):
            if 2 * i < n and not check_zi_instability(n, p, i).exact_destabilizes:
                bad.append((n, p, i))
    v = check_zi_instability(3, 2, 1)
    flagged = (
        v.conflict
        and v.exact_first_term_ratio == F(6, 7)
        and v.printed_sufficient_lhs == F(9, 7)
    )
    verdict(
        8,
        "B^i destabilizes Z^i for p in {3,5,7}; (3,2,1) conflict flagged",
        not bad and flagged,
        5,
        f"non-destabilizing={bad}, exact 6/7 vs printed 9/7 flagged={flagged}",
    )


def test_criterion_09_bn_bound(verdict):
    bad = []
    for n, p in product(range(1, 5), (2, 3, 5)):
        top = p**n - 1
        for r_b in range(1, top):
            if not bound_bn_subsheaf(n, p, r_b, 1) < 0:
                bad.append((n, p, r_b))
        if bound_bn_subsheaf(n, p, top, 1) != 0:
            bad.append((n, p, top))
    verdict(9, "B^n subsheaf bound negative below full rank", not bad, 5, f"bad={bad[:5]}")


def test_criterion_10_pipeline(verdict, rng):
    bad = []
    for n, p in product(range(1, 5), (2, 3, 5)):
        ctx = VarietyContext(n, p, rng.randint(0, 5), lmax_omega=0, i_omega=0)
        for _ in range(5):
            r = rng.randint(1, 5)
            i_e = F(rng.randint(0, 20), rng.randint(1, 5))
            per_l, total = bound_pushforward_caseII(ctx, SheafStats(r, instability=i_e))
            flat = bound_sun(ctx, r, [i_e] * (n * (p - 1) + 1))
            if not total == p ** (n - 1) * r * i_e == flat:
                bad.append(("caseII", n, p, r, i_e))
        c0 = VarietyContext(n, p, 0, omega_semistable=True)
        if bound_pushforward_caseI(c0, rng.randint(1, 9)) != 0:
            bad.append(("caseI", n, p))
    verdict(10, "case II collapses to p^{n-1} r I(E); case I is 0 at slope 0", not bad, 5, f"bad={bad[:3]}")


def test_criterion_11_selfcheck_full(verdict, capsys):
    import json

    code = main(["selfcheck", "--grid", "full"])
    rep = json.loads(capsys.readouterr().out)
    ids = [n["id"] for n in rep["errata"]]
    ok = (
        code == 0
        and rep["summary"]["failed"] == 0
        and ids == ["dvec-indexing", "instzix-simplification", "phi0-strict-inequality"]
    )
    verdict(
        11,
        "selfcheck --grid full",
        ok,
        300,
        f"exit={code}, suites {rep['summary']['passed']}/{rep['summary']['suites']}, errata={ids}",
    )
