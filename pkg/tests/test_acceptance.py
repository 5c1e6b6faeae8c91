"""Acceptance gate: one test, and one PASS/FAIL summary line, per criterion."""

import itertools
import math
import subprocess
import sys

import numpy as np
from scipy.optimize import bisect

from kpset import gf2poly as gf
from kpset.bounds import BoundParams, leading_constant, t_zero, theorem_bound
from kpset.experiments import ExperimentConfig, records_to_csv, run_experiment
from kpset.oracle import (verify_character_sum, verify_walsh_series, verify_kp_bound, verify_nu,
                          verify_sandwich, verify_shift_expectation_random, verify_translation,
                          verify_variance)
from kpset.walshcoef import closed_forms, coeff_identity_report


def test_walsh_coefficient_sum_identities(criterion):
    boxes = [(m, b) for s in (1, 2) for m in range(1, 5)
             for b in itertools.product(range((1 << m) + 1), repeat=s)]
    rng = np.random.default_rng(2024)
    boxes += [(3, tuple(int(x) for x in row)) for row in rng.integers(0, 9, size=(200, 3))]
    miss1 = miss2 = 0
    misses_on_empty_boxes = True
    witnesses = []
    for m, b in boxes:
        got = coeff_identity_report(m, b)
        want = closed_forms(m, b)
        if got[0] != want[0]:
            miss1 += 1
            misses_on_empty_boxes &= 0 in b
            if len(witnesses) < 3:
                witnesses.append(f"m={m} b={b}: {got[0]} vs {want[0]}")
        miss2 += got[1] != want[1]
    criterion("coefficient identities: first sum = 1 - prod b, second = prod b (1 - prod b)",
              miss1 == 0 and miss2 == 0,
              f"{len(boxes)} boxes; first misses {miss1}, all on boxes with a zero side: {misses_on_empty_boxes} "
              f"(e.g. {'; '.join(witnesses)}); second misses {miss2}")


def test_walsh_series_reproduces_indicator(criterion):
    results = [verify_walsh_series(m) for m in range(1, 6)]
    worst = max(float(r.max_violation) for r in results)
    criterion("Walsh series of 1[0,b) equals the indicator, m <= 5, tol 1e-9",
              all(r.passed for r in results) and worst <= 1e-9,
              f"{sum(r.instances_checked for r in results)} pairs, max deviation {worst}")


def test_shift_average_of_local_discrepancy_is_zero(criterion):
    runs = [verify_shift_expectation_random(m, s, samples=50, max_n=8, seed=10 * m + s)
            for m, s in [(1, 1), (2, 1), (2, 2), (3, 2)]]
    criterion("shift average of Delta is exactly 0 (50 sets per (m,s), |E| <= 8)",
              all(r.passed for r in runs),
              f"{sum(r.instances_checked for r in runs)} (set, box) pairs")


def test_shifted_korobov_variance_bound(criterion):
    runs = [verify_variance(p, s) for m, s in [(2, 2), (3, 2), (2, 3)] for p in gf.irreducibles(m)]
    criterion("mean of Delta^2 over q and shifts <= (s/2^m) V (1 - V), exact",
              all(r.passed for r in runs),
              f"{len(runs)} moduli, {sum(r.instances_checked for r in runs)} boxes")


def test_korobov_p_set_aggregate_character_sum(criterion):
    cases = [(p, s) for m, s in [(2, 2), (3, 2), (3, 3)] for p in gf.irreducibles(m)]
    runs = [verify_kp_bound(p, s) for p, s in cases]
    worst = [(r.details["max_aggregate"], s) for r, (_, s) in zip(runs, cases)]
    criterion("aggregated character sum of P_p(0..2^m-1) <= s - 1",
              all(r.passed for r in runs), f"{len(runs)} moduli, (max, s) pairs {worst}")


def test_character_sum_equals_dual_indicator(criterion):
    runs = [verify_character_sum(p, s) for m, s in [(2, 2), (3, 2)] for p in gf.irreducibles(m)]
    criterion("2^-m sum_l wal_k(x_l(q)) equals the dual-lattice indicator",
              all(r.passed for r in runs), f"{sum(r.instances_checked for r in runs)} (q, k) pairs")


def test_translation_property(criterion):
    runs = [verify_translation(m, s) for m in range(1, 5) for s in range(1, 4)]
    criterion("x_n(q) xor x_n'(q) = x_(n xor n')(q), m <= 4, s <= 3",
              all(r.passed for r in runs), f"{sum(r.instances_checked for r in runs)} index pairs")


def test_nu_quotient_matches_laurent_division(criterion):
    runs = [verify_nu(m) for m in range(1, 9)]
    criterion("quotient nu_m equals Laurent long division, m <= 8",
              all(r.passed for r in runs), f"{sum(r.instances_checked for r in runs)} (p, g) pairs")


def test_grid_exact_sandwich(criterion):
    runs = [verify_sandwich(m, s, samples=100, max_n=64, seed=100 * m + s) for m in (1, 2, 3) for s in (1, 2)]
    criterion("grid_max <= exact D* <= grid_max + s/2^m (100 sets per (m,s), N <= 64)",
              all(r.passed for r in runs), f"{sum(r.instances_checked for r in runs)} point sets")


def test_leading_constant(criterion):
    c = leading_constant()
    criterion("leading constant = 1.7231 +- 5e-4", abs(c - 1.7231) <= 5e-4, f"{c:.10f}")


def test_t_zero_grid(criterion):
    worst_eq = worst_bis = 0.0
    count = 0
    for m, s, delta in itertools.product(range(1, 11), range(1, 11), (0.1, 0.5, 0.9)):
        for B in (None, 1.0, 10.0):
            params = BoundParams(m, s, delta, B=B)
            Beff = params.variance_budget
            t0 = t_zero(params)
            lhs = 2 * (2 ** m + 1) ** s * math.exp(-t0 * t0 / (2 * Beff + 2 * t0 / 3))
            worst_eq = max(worst_eq, abs(lhs - (1 - delta)) / (1 - delta))
            g = lambda t: (math.log(2) + s * math.log(2 ** m + 1) - t * t / (2 * Beff + 2 * t / 3)
                           - math.log(1 - delta))
            root = bisect(g, 0.0, 1e6, xtol=1e-13, rtol=1e-15, maxiter=500)
            worst_bis = max(worst_bis, abs(root - t0) / t0)
            count += 1
    criterion("t0 solves the Bernstein equation to 1e-9 relative and matches bisection",
              worst_eq <= 1e-9 and worst_bis <= 1e-9,
              f"{count} grid points, equation rel err {worst_eq:.2e}, bisection rel err {worst_bis:.2e}")


def _empirical(mode):
    cfg = ExperimentConfig(m=4, s=2, delta=0.5, mode=mode, trials=200, seed=20260101)
    res = run_experiment(cfg, workers=4)
    bound = theorem_bound(256, 2, 0.5)
    hits = sum(r.upper_bound <= bound for r in res.records)
    return hits / len(res.records), bound, res


def test_theorem1_success_fraction(criterion):
    frac, bound, _ = _empirical("theorem1")
    criterion("random-generator unions: success fraction >= 0.5 (m=4, s=2, delta=0.5, 200 trials)",
              frac >= 0.5, f"fraction {frac:.3f}, bound {bound:.6f}")


def test_theorem2_success_fraction(criterion):
    frac, bound, _ = _empirical("theorem2")
    criterion("Korobov p-set unions: success fraction >= 0.5 (m=4, s=2, delta=0.5, 200 trials)",
              frac >= 0.5, f"fraction {frac:.3f}, bound {bound:.6f}")


def _cli(args, cwd):
    subprocess.run([sys.executable, "-m", "kpset.cli", *args], cwd=cwd, check=True,
                   capture_output=True, text=True)


def test_determinism(criterion, tmp_path):
    same = []
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        for mode in ("thm1", "thm2"):
            _cli(["union", "--mode", mode, "--m", "4", "--s", "3", "--seed", "31337", "--out", f"{mode}.pts"], d)
        _cli(["experiment", "--m", "3", "--s", "2", "--trials", "25", "--seed", "5",
              "--workers", "1" if run == "a" else "4", "--csv", "exp.csv", "--summary", "exp.json"], d)
    for name in ("thm1.pts", "thm1.pts.recipe", "thm2.pts", "thm2.pts.recipe", "exp.csv", "exp.json"):
        same.append((tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes())
    cfg = ExperimentConfig(m=3, s=3, trials=16, seed=8)
    csvs = {records_to_csv(run_experiment(cfg, workers=w).records) for w in (1, 2, 8)}
    same.append(len(csvs) == 1)
    criterion("byte-identical point sets, recipes and CSV across runs and thread counts",
              all(same), f"{sum(same)}/{len(same)} comparisons identical")
