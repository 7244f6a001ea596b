"""Acceptance suite: one numbered check per criterion, one pass/fail line each.

Every check validates a stated inequality or identity against an exact
oracle (convolution, enumeration, integer arithmetic, quadrature) at its
stated tolerance.  Run with ``pytest tests/test_acceptance.py -v -s`` to see
the per-criterion lines.

Known-failing: criterion 05 asserts that the fair-coin calibration scan
maximum is identical for n_max = 10^3 and 10^4.  The scaled gap
n^{3/2} * sup_z |pmf - gaussian| is in fact strictly increasing along even n
toward its limit sqrt(2/pi)/4 ~= 0.19947114, so the scan maximum sits at the
largest even n scanned and the two values differ by ~2.2e-5.  The check is
kept as stated rather than weakened; see the calibration provenance string.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

import numpy as np

from lltkit import (
    calibrate_c0_scan,
    calibrated_registry,
    central_envelope,
    chernoff_rho,
    count_via_enumeration,
    count_via_model,
    de_moivre_envelope,
    delta_smoothness,
    effective_pointwise_bound,
    exact_plug_ins,
    h_default,
    iid_sum,
    interval_discrepancy,
    llt_discrepancy,
    make_pmf,
    moments,
    poisson_binomial,
    psi_envelope,
    reconstruct,
    refined_bernoulli_comparison,
    sandwich_envelope,
    scenery_envelope,
    second_moment_check,
    smoothness_stat,
    smoothness_via_extraction,
    split,
    theta,
    xi_law,
)
from lltkit.bounds import binomial_half_pmf
from lltkit.convolve import convolve_all
from lltkit.scenery import SceneryModel, y_covariance_factorization

from .conftest import random_pmf

BERN = make_pmf(0.0, 1.0, [(0, 1), (1, 1)])
UNIFORM3 = make_pmf(0.0, 1.0, [(0, 1), (1, 1), (2, 1)])


def _line(num: int, ok: bool, desc: str) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num:02d}: {desc}")
    return ok


def _pmf_stream(count: int = 1000):
    rng = np.random.default_rng(0xACCE)
    out = []
    while len(out) < count:
        p = random_pmf(rng, max_support=21, require_theta=True)
        level = theta(p) * float(rng.uniform(0.05, 1.0))
        out.append((p, level))
    return out


def test_criterion_01_reconstruction_exactness():
    t0 = time.perf_counter()
    worst = 0.0
    for p, level in _pmf_stream():
        rec = reconstruct(split(p, level))
        gap = max(abs(rec.mass(k) - p.mass(k)) for k in set(p.probs) | set(rec.probs))
        worst = max(worst, gap)
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-14 and elapsed < 5.0
    assert _line(
        1, ok, f"reconstruction exact on 1000 pmfs (worst gap {worst:.2e}, {elapsed:.2f}s)"
    )


def test_criterion_02_identity_suite():
    worst_delta = worst_var = worst_xi = 0.0
    slack = 0.0
    for p, level in _pmf_stream():
        th = theta(p)
        worst_delta = max(worst_delta, abs(delta_smoothness(p) - (2.0 - 2.0 * th)))
        mean, var = moments(p)
        slack = min(slack, var - p.D**2 * th / 4.0)
        _, xi_var = moments(xi_law(split(p, level)))
        worst_xi = max(worst_xi, abs(xi_var - (var - p.D**2 * level / 4.0)))
    ok = worst_delta < 1e-12 and slack > -1e-12 and worst_xi < 1e-12
    assert _line(
        2,
        ok,
        "identities delta = 2 - 2*theta, var >= D^2 theta/4, xi-variance "
        f"(residuals {worst_delta:.2e}, {-slack:.2e}, {worst_xi:.2e})",
    )


def _sandwich_case(summands, thetas):
    law = convolve_all(summands)
    theta_n = math.fsum(thetas)
    hs = [0.25]
    if math.log(theta_n) / theta_n <= 1.0 / 14.0:
        hs.append(h_default(theta_n))
    sd = math.sqrt(law.variance)
    checked = 0
    for h in hs:
        plug = exact_plug_ins(summands, thetas, h)
        k_lo = math.ceil((law.mean - 4.0 * sd - law.pmf.v0) / law.pmf.D)
        k_hi = math.floor((law.mean + 4.0 * sd - law.pmf.v0) / law.pmf.D)
        for k in range(k_lo, k_hi + 1):
            kappa = law.pmf.v0 + law.pmf.D * k
            exact = law.pmf.mass(k)
            rep = sandwich_envelope(summands, thetas, h, kappa, plug, exact=exact)
            if not (rep.lower <= exact <= rep.upper):
                return checked, False
            checked += 1
    return checked, True


def test_criterion_03_sandwich_validity():
    t0 = time.perf_counter()
    total = 0
    ok = True
    for n in (16, 64, 256):
        checked, good = _sandwich_case([BERN] * n, [0.5] * n)
        total += checked
        ok = ok and good
    mix = [BERN if j % 2 == 0 else UNIFORM3 for j in range(60)]
    mix_thetas = [theta(p) for p in mix]
    checked, good = _sandwich_case(mix, mix_thetas)
    total += checked
    ok = ok and good
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 30.0
    assert _line(
        3, ok, f"two-sided sandwich holds at every kappa ({total} points, {elapsed:.2f}s)"
    )


def test_criterion_04_central_envelopes():
    t0 = time.perf_counter()
    n = 1000
    summands = [BERN] * n
    thetas = [0.5] * n
    law = iid_sum(BERN, n)
    theta_n = 500.0
    plug = exact_plug_ins(summands, thetas)
    ok = True
    lim2 = math.sqrt(theta_n / (14.0 * math.log(theta_n)))
    half_width_2 = math.floor(math.sqrt(lim2 * law.variance))
    for k in range(500 - half_width_2, 500 + half_width_2 + 1):
        exact = law.pmf.mass(k)
        rep = central_envelope(summands, thetas, float(k), plug, exact=exact)
        ok = ok and abs(exact - rep.gaussian) <= rep.params["half_width"]
    lim3 = math.sqrt(7.0 * math.log(theta_n) / (2.0 * theta_n))
    half_width_3 = math.floor(math.sqrt(lim3 * law.variance))
    for k in range(500 - half_width_3, 500 + half_width_3 + 1):
        exact = law.pmf.mass(k)
        rep = psi_envelope(summands, thetas, float(k), lambda x: abs(x) ** 3, exact=exact)
        ok = ok and abs(exact - rep.gaussian) <= rep.params["half_width"]
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 60.0
    assert _line(
        4,
        ok,
        f"central envelopes contain |P - gaussian| on their ranges "
        f"(+-{half_width_2}, +-{half_width_3} around 500, {elapsed:.2f}s)",
    )


def test_criterion_05_calibration_stability():
    scan = calibrate_c0_scan(10_000)
    c0_1e3 = float(scan[:1000].max())
    c0_1e4 = float(scan.max())
    dominated = bool((scan <= c0_1e4 + 0.0).all())
    reg = calibrated_registry(10_000)
    recorded = reg.c0 == c0_1e4 and "10000" in reg.provenance
    stable = c0_1e3 == c0_1e4
    ok = stable and dominated and recorded
    assert _line(
        5,
        ok,
        f"calibration scan stability (c0(1e3) = {c0_1e3:.12f}, c0(1e4) = {c0_1e4:.12f}, "
        f"per-n dominated: {dominated}, recorded: {recorded})",
    )


def test_criterion_06_chernoff_dominance():
    ok = True
    for n in (10, 100, 1000):
        law = poisson_binomial([0.5] * n)
        for h10 in range(1, 10):
            h = h10 / 10.0
            ok = ok and law.two_sided_tail(h) <= chernoff_rho([0.5] * n, h)
    assert _line(6, ok, "Chernoff bound dominates exact two-sided tails on the grid")


def test_criterion_07_smoothness_inequalities():
    ok = True
    for n in (16, 64, 256):
        law = iid_sum(BERN, n)
        a_n, b_n = n / 2.0, n / 4.0
        report = interval_discrepancy(law, a_n, b_n)
        check = effective_pointwise_bound(report)
        ok = ok and check.all_pass
        # quadratic brute force over all intervals
        prefix = np.concatenate([[0.0], np.cumsum(report.d)])
        brute = max(
            abs(prefix[j] - prefix[i])
            for i in range(len(prefix))
            for j in range(i + 1, len(prefix))
        )
        ok = ok and abs(brute - report.rho) < 1e-12
        theta_n = n / 2.0
        h = h_default(theta_n) if math.log(theta_n) / theta_n <= 1 / 14 else 0.25
        bound = smoothness_via_extraction([BERN] * n, [0.5] * n, h, b_n)
        ok = ok and bound.value >= smoothness_stat(law, b_n)
    assert _line(
        7, ok, "pointwise/gaussian smoothness inequalities, prefix rho, extraction bound"
    )


def test_criterion_08_scenery_checks():
    inc12 = make_pmf(0.0, 1.0, [(1, 1), (2, 1)])
    inc1 = make_pmf(0.0, 1.0, [(1, 1)])
    ok = True
    for n in (1, 2, 3, 4):
        mom = second_moment_check(SceneryModel(BERN, inc12, n, 0.5))
        ok = ok and abs(mom.identity_residual) < 1e-10
        prof = {r: 0.5 / (1 + 0.3 * r) for r in range(1, 2 * n + 1)}
        mom2 = second_moment_check(SceneryModel(BERN, inc12, n, prof))
        ok = ok and abs(mom2.identity_residual) < 1e-10
    prof4 = {r: 0.5 / (1 + 0.3 * r) for r in range(1, 9)}
    fact = y_covariance_factorization(
        SceneryModel(BERN, inc12, 4, prof4), 1, 3, (0.5, 1.0), (0.0, 0.5)
    )
    ok = ok and abs(fact.lhs - fact.rhs) < 1e-12
    fact0 = y_covariance_factorization(
        SceneryModel(BERN, inc12, 4, 0.5), 1, 3, (0.5, 1.0), (0.0, 0.5)
    )
    ok = ok and abs(fact0.lhs) < 1e-14
    n, h = 16, 0.25
    plug = exact_plug_ins([BERN] * n, [0.5] * n, h)
    plain = sandwich_envelope([BERN] * n, [0.5] * n, h, 8.0, plug)
    composed = scenery_envelope(SceneryModel(BERN, inc1, n, 0.5), h, 8.0)
    ok = ok and composed.lower == plain.lower and composed.upper == plain.upper
    assert _line(
        8, ok, "scenery second moments, covariance factorization, envelope degeneracy"
    )


def test_criterion_09_partition_grid():
    t0 = time.perf_counter()
    ok = True
    for n in range(1, 31):
        for m in range(1, n + 1):
            ok = ok and count_via_model(m, n) == count_via_enumeration(m, n)
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 30.0
    assert _line(
        9, ok, f"tilted-model count equals enumeration on the full grid ({elapsed:.2f}s)"
    )


def test_criterion_10_de_moivre_band():
    n, gamma = 1000, 0.5
    ok = True
    for p, num, den in ((0.5, 1, 2), (0.3, 3, 10)):
        q = 1.0 - p
        width = int(gamma * p * q * n)
        np_center = int(n * p)
        for k in range(np_center - width, np_center + width + 1):
            est, bound = de_moivre_envelope(n, p, k, gamma)
            exact = float(
                Fraction(math.comb(n, k) * num**k * (den - num) ** (n - k), den**n)
            )
            if not est * math.exp(-bound) <= exact <= est * math.exp(bound):
                ok = False
                break
    assert _line(10, ok, "multiplicative binomial band holds at every admissible k")


def test_criterion_11_refined_comparison_rate():
    ns = [16, 32, 64, 128, 256, 512, 1024]
    fitted = []
    beats_plain = True
    for n in ns:
        row = binomial_half_pmf(n)
        z_all = np.arange(n + 1)
        gauss = np.sqrt(2 / (math.pi * n)) * np.exp(-((2 * z_all - n) ** 2) / (2 * n))
        plain = float(np.abs(row - gauss).max())
        half_window = int(5 * math.sqrt(n))
        zs = range(max(0, n // 2 - half_window), min(n, n // 2 + half_window) + 1)
        refined_err = max(abs(float(row[z]) - refined_bernoulli_comparison(n, z)) for z in zs)
        fitted.append(refined_err * n**2.5 / math.log(n) ** 3.5)
        if n >= 64 and refined_err >= plain:
            beats_plain = False
    no_growth = max(fitted) == fitted[0] and fitted[-1] < fitted[0]
    ok = no_growth and beats_plain
    assert _line(
        11,
        ok,
        f"refined comparison: fitted constants {['%.4f' % c for c in fitted]} "
        f"non-growing and beat the plain term for n >= 64",
    )


def test_criterion_12_discrepancy_trend():
    vals = [llt_discrepancy(iid_sum(BERN, n)) for n in (8, 32, 128)]
    decreasing = vals[0] > vals[1] > vals[2]
    evens = make_pmf(0.0, 1.0, [(0, 1), (2, 1)])
    stuck = [llt_discrepancy(iid_sum(evens, n)) for n in (8, 32, 128)]
    bounded_away = min(stuck) > 0.3
    ok = decreasing and bounded_away
    assert _line(
        12,
        ok,
        f"scaled discrepancy decreases ({', '.join('%.4f' % v for v in vals)}) and stays "
        f"above 0.3 for the span-violating law ({', '.join('%.3f' % v for v in stuck)})",
    )
