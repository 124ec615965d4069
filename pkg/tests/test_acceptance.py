"""Acceptance suite: one recorded PASS/FAIL line per criterion."""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from apgroups.ap_census import count_brute, count_normalized, count_via_characters, proposition2_check
from apgroups.characters import verify_weil
from apgroups.construction import (
    ConstructionConfig,
    bad_prime_certificate,
    iter_F,
    mult_independent_subset,
    ord_tuple,
    prime_density,
)
from apgroups.field_core import build_context, divisors, factorize, is_prime, primes_upto, subgroup
from apgroups.polynomials import IntPolynomial, resultant, resultant_mod
from apgroups.pseudorandom import (
    LinearFormSystem,
    gt_parameters,
    linear_forms_bound,
    linear_forms_expectation,
    random_system,
    subset_ap_experiment,
)

from conftest import record, small_primes

GRID_PMAX = 300
SEED = 20240101


def grid_instances():
    for p in small_primes(GRID_PMAX):
        ctx = build_context(p)
        for d in ctx.divisors:
            for r in (1, 2, 3):
                # r >= p has no normalised form (only p = 3, r = 3 here)
                if r < p:
                    yield ctx, d, r


@pytest.fixture(scope="module")
def grid():
    rows = []
    for ctx, d, r in grid_instances():
        G = subgroup(ctx, d)
        rows.append((G, r, count_normalized(G, r)))
    return rows


@pytest.fixture(scope="module")
def large_sample():
    rng = random.Random(SEED)
    out = []
    while len(out) < 100:
        p = rng.randrange(10**5, 10**6)
        if not is_prime(p):
            continue
        ds = [d for d in divisors(p - 1) if d > p**0.75]
        G = subgroup(build_context(p), rng.choice(ds))
        out.append((G, 2, count_normalized(G, 2)))
    return out


def test_c01_three_way_census(grid):
    t0 = time.perf_counter()
    bad = []
    for G, r, census in grid:
        brute = count_brute(G, r)
        chars = count_via_characters(G, r).total_aps
        if not brute == census.total_aps == chars:
            bad.append((G.p, G.d, r, brute, census.total_aps, chars))
    elapsed = time.perf_counter() - t0
    ok = not bad
    record("C1 three-way census equality", ok, f"{len(grid)} instances, {len(bad)} mismatches, {elapsed:.1f}s")
    assert ok, bad[:5]


def test_c02_weil_bound():
    worst, checked, fails = 0.0, 0, []
    for p in small_primes(GRID_PMAX):
        ctx = build_context(p)
        for d in ctx.divisors:
            G = subgroup(ctx, d)
            for r in (2, 3):
                if G.index == 1:
                    continue
                rep = verify_weil(G, r)
                checked += rep.tuples_checked
                worst = max(worst, rep.worst_ratio)
                if not rep.passed:
                    fails.append((p, d, r, rep.worst_ratio))
    rng = random.Random(SEED + 2)
    sampled = 0
    while sampled < 50:
        p = rng.randrange(10**3, 10**4)
        if not is_prime(p):
            continue
        ctx = build_context(p)
        ds = [d for d in ctx.divisors if d < p - 1]
        G = subgroup(ctx, rng.choice(ds))
        rep = verify_weil(G, rng.choice((2, 3)), cap=200, seed=sampled)
        worst = max(worst, rep.worst_ratio)
        if not rep.passed:
            fails.append((p, G.d, rep.r, rep.worst_ratio))
        sampled += 1
    ok = not fails
    record("C2 Weil bound |S| <= |I| sqrt(p)", ok, f"{checked} exhaustive tuples + 50 sampled pairs, worst ratio {worst:.4f}")
    assert ok, fails[:5]


def test_c03_main_term_error(grid, large_sample):
    t0 = time.perf_counter()
    bad = [(c.p, c.d, r) for _, r, c in grid + large_sample if not proposition2_check(None, r, census=c).error_ok]
    worst = max(abs(c.N_all - c.main_term) / c.weil_error_bound for _, _, c in grid + large_sample)
    ok = not bad
    record("C3 |N_all - main| <= r sqrt(p)", ok,
           f"{len(grid)} grid + {len(large_sample)} large instances, worst error/bound {worst:.4f}, {time.perf_counter() - t0:.1f}s")
    assert ok, bad[:5]


def test_c04_positivity(grid, large_sample):
    tested, bad = 0, []
    for _, r, c in grid + large_sample:
        if r != 2:
            continue
        if (c.d / (c.p - 1)) ** 2 * (c.p - 2) > 2 * math.sqrt(c.p):
            tested += 1
            if c.total_aps <= 0:
                bad.append((c.p, c.d))
    ok = not bad
    record("C4 positivity above threshold", ok, f"{tested} instances above threshold, {len(bad)} exceptions")
    assert ok, bad


def test_c05_linear_forms():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 5)
    prng = random.Random(SEED + 5)
    bad, worst, n = [], 0.0, 0
    while n < 40:
        p = prng.randrange(500, 3001)
        if not is_prime(p):
            continue
        ctx = build_context(p)
        ds = [d for d in ctx.divisors if d >= p**0.8]
        d = prng.choice(ds)
        m = int(rng.integers(1, 5))
        system = random_system(m, 2, rng, L_bound=3, p=p)
        res = linear_forms_expectation(subgroup(ctx, d), system)
        bound = linear_forms_bound(p, d, m)
        worst = max(worst, res.deviation / bound)
        if res.deviation > bound:
            bad.append((p, d, system))
        n += 1
    closed_bad = []
    for p, d in [(503, 502), (1009, 504), (2003, 1001), (2999, 2998)]:
        G = subgroup(build_context(p), d)
        for m in (1, 2):
            L = ((1, 0), (0, 1))[:m]
            val = linear_forms_expectation(G, LinearFormSystem(L=L, b=(0,) * m)).value
            if abs(val - ((p - 1) / p) ** m) > 1e-12:
                closed_bad.append((p, d, m, val))
    ok = not bad and not closed_bad
    record("C5 linear-forms deviation bound", ok,
           f"40 systems, worst deviation/bound {worst:.4f}, closed-form mismatches {len(closed_bad)}, {time.perf_counter() - t0:.1f}s")
    assert ok, (bad[:3], closed_bad)


def test_c06_gt_parameters():
    ok = all(gt_parameters(r).kappa * 4 * gt_parameters(r).m0 == 1 for r in range(1, 31))
    ok = ok and gt_parameters(2).kappa == Fraction(1, 16)
    record("C6 kappa * 4 * m0 = 1, kappa(2) = 1/16", ok)
    assert ok


def _closure(gens, p):
    seen = {1}
    frontier = [1]
    while frontier:
        frontier = [y for y in {a * g % p for a in frontier for g in gens} if y not in seen]
        seen.update(frontier)
    return len(seen)


def test_c07_order_closure():
    bad, n = [], 0
    for p in small_primes(200):
        ctx = build_context(p)
        for r in range(1, min(4, p - 1) + 1):
            for t in range(1, p):
                terms = [(1 + s * t) % p for s in range(1, r + 1)]
                if 0 in terms:
                    continue
                n += 1
                if ord_tuple(ctx, t, r) != _closure(terms, p):
                    bad.append((p, t, r))
    ok = not bad
    record("C7 ord_tuple equals closure size", ok, f"{n} (p, t, r) cases")
    assert ok, bad[:5]


def _rand_poly(rng):
    deg = rng.randint(0, 6)
    lead = rng.choice((-1, 1)) * rng.randint(1, 100)
    return IntPolynomial([rng.randint(-100, 100) for _ in range(deg)] + [lead])


def test_c08_resultants():
    rng = random.Random(SEED + 8)
    bad = 0
    for _ in range(1000):
        f, g = _rand_poly(rng), _rand_poly(rng)
        r = resultant(f, g)
        if resultant(g, f) != (-1) ** (f.degree * g.degree) * r:
            bad += 1
        for q in (101, 103):
            if f.lc % q and g.lc % q and resultant_mod(f, g, q) != r % q:
                bad += 1
    example = resultant(IntPolynomial([-1, 0, 1]), IntPolynomial([-2, 1]))
    ok = bad == 0 and example == 3
    record("C8 resultant sign-swap, mod-q, Res(x^2-1, x-2)=3", ok, f"1000 pairs, {bad} failures, example {example}")
    assert ok


def _density_oracle(T, eta):
    lo, hi = T ** (0.5 - eta), T ** (0.5 - eta / 2)
    return sum(1 for p in primes_upto(T) if p > 2 and any(lo <= q <= hi for q in set(factorize(int(p) - 1))))


def test_c09_prime_density():
    bad, ratios = [], []
    for T in (10**3, 10**4, 10**5):
        for eta in (0.15, 0.2, 0.25):
            res = prime_density(T, eta)
            ratios.append(f"{T}/{eta}:{res.ratio_to_eta_T_over_logT:.3f}")
            if res.count != _density_oracle(T, eta):
                bad.append((T, eta))
    small = prime_density(100, 0.2).count
    ok = not bad and small == 5
    record("C9 prime density equals oracle", ok, f"T=100 count {small}; ratios to eta T/ln T {' '.join(ratios)}")
    assert ok, bad


def test_c10_certificate():
    t0 = time.perf_counter()
    cfg = ConstructionConfig(r=4, u=2, r0=2)
    shape_ok = all(
        F.coeffs[0] == 0 and F.degree <= cfg.r0 * cfg.u and F.height <= cfg.r ** (2 * cfg.r0 * cfg.u)
        for _, _, _, F in iter_F(cfg)
    )
    cert = bad_prime_certificate(cfg)
    ok = shape_ok and cert.all_nonzero
    record("C10 construction certificate", ok,
           f"{cert.poly_count} F polys, family {len(cert.family)}, {cert.resultant_count} nonzero resultants, "
           f"|Delta|={len(cert.Delta)}, {time.perf_counter() - t0:.2f}s")
    assert ok


def test_c11_mult_independence():
    bad = []
    for r in range(1, 31):
        rank = mult_independent_subset(1, r).rank
        if rank != len(primes_upto(r + 1)) or not rank > math.log(r):
            bad.append((r, rank))
    ok = not bad
    record("C11 rank(z=1) = pi(r+1) > ln r", ok, "r = 1..30")
    assert ok, bad


def test_c12_subset_experiments(grid):
    bad = []
    for G, r, census in grid:
        stats = subset_ap_experiment(G, 1.0, r, strategy="uniform", trials=1, seed=0)
        if stats.raw_counts != [census.total_aps]:
            bad.append((G.p, G.d, r))
    G = subgroup(build_context(101), 100)
    total = count_normalized(G, 2).total_aps
    a = subset_ap_experiment(G, 0.5, 2, strategy="uniform", trials=200, seed=SEED)
    b = subset_ap_experiment(G, 0.5, 2, strategy="uniform", trials=200, seed=SEED)
    z = abs(a.mean_raw - 0.125 * total) / a.std_error_raw
    ok = not bad and z <= 4 and a.to_dict() == b.to_dict() and a.raw_counts == b.raw_counts
    record("C12 subset experiments", ok,
           f"delta=1 mismatches {len(bad)}; mean {a.mean_raw:.1f} vs {0.125 * total:.1f} ({z:.2f} SE); deterministic")
    assert ok, bad[:5]
