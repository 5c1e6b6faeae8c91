import itertools
import math

import numpy as np
import pytest
from scipy.optimize import bisect

from kpset.bounds import (BoundParams, bennett_h, bennett_tail, bernstein_tail, leading_constant,
                          log_term, pgen_bound, report, t_zero, theorem_bound, union_tail)

GRID = [(m, s, d) for m in (1, 2, 4, 7, 10) for s in (1, 2, 5, 10) for d in (0.1, 0.5, 0.9)]


def _bisect_root(m, s, delta, B):
    f = lambda t: math.log(2) + s * math.log(2 ** m + 1) - t * t / (2 * B + 2 * t / 3) - math.log(1 - delta)
    return bisect(f, 0.0, 1e6, xtol=1e-13, rtol=1e-15, maxiter=500)


def test_bennett_h():
    assert bennett_h(0) == 0
    assert bennett_h(math.e - 1) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(ValueError):
        bennett_h(-0.1)
    us = np.logspace(-6, 6, 400)
    assert all(bennett_h(u) >= u * u / (2 * (1 + u / 3)) * (1 - 1e-12) for u in us)
    assert all(np.diff([bennett_h(u) for u in us]) > 0)


def test_tails():
    assert bennett_tail(1.0, 1.0, 0.0) == 2.0
    assert bernstein_tail(1.0, 1.0, 0.0) == 2.0
    assert bernstein_tail(1.0, 1.0, 1e4) == 0.0
    for v, c in itertools.product((0.1, 1, 3, 30), (0.5, 1, 2)):
        ts = np.linspace(0, 50, 200)
        ben = [bennett_tail(v, c, t) for t in ts]
        assert all(np.diff(ben) <= 1e-15)
        assert all(bennett_tail(v, c, t) <= bernstein_tail(v, c, t) * (1 + 1e-12) for t in ts)
    with pytest.raises(ValueError):
        bennett_tail(0, 1, 1)
    with pytest.raises(ValueError):
        bernstein_tail(1, -1, 1)


def test_bernstein_reproduces_union_integrand():
    params = BoundParams(3, 2, 0.5)
    for t in (0.5, 3.0, 10.0):
        assert union_tail(params, t) == pytest.approx(9 ** 2 * bernstein_tail(2.0, 1.0, t), rel=1e-14)


def test_g_decreasing_in_v():
    for t in (0.1, 1.0, 10.0):
        vs = np.logspace(-3, 3, 300)
        g = [v * bennett_h(t / v) for v in vs]
        assert all(np.diff(g) < 0)


@pytest.mark.parametrize("m,s,delta", GRID)
@pytest.mark.parametrize("Bkind", ["s", 1.0, 10.0])
def test_t_zero_solves_equation(m, s, delta, Bkind):
    B = None if Bkind == "s" else Bkind
    params = BoundParams(m, s, delta, B=B)
    t0 = t_zero(params)
    Beff = params.variance_budget
    L = log_term(m, s, delta)
    assert t0 * t0 - (2 / 3) * L * t0 - 2 * Beff * L == pytest.approx(0, abs=1e-9 * t0 * t0)
    assert union_tail(params, t0) == pytest.approx(1 - delta, rel=1e-9)
    assert t0 == pytest.approx(_bisect_root(m, s, delta, Beff), rel=1e-9)


def test_t_zero_monotone():
    base = t_zero(BoundParams(4, 2, 0.5))
    assert t_zero(BoundParams(5, 2, 0.5)) > base
    assert t_zero(BoundParams(4, 3, 0.5)) > base
    assert t_zero(BoundParams(4, 2, 0.6)) > base


def test_t_zero_reference_value():
    # bisection oracle at m=4, s=2, delta=0.5, B=s (frozen)
    assert t_zero(BoundParams(4, 2, 0.5)) == pytest.approx(8.1593188472590921, rel=1e-12)
    assert _bisect_root(4, 2, 0.5, 2.0) == pytest.approx(8.1593188472590921, rel=1e-12)


def test_param_validation():
    for bad in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            BoundParams(2, 2, bad)
    with pytest.raises(ValueError):
        BoundParams(2, 2, 0.5, B=0)


def test_leading_constant():
    c = leading_constant()
    assert abs(c - 1.7231) <= 5e-4
    assert c > 1
    L = math.log(3)
    assert c == pytest.approx((1 + math.sqrt(1 + 18 / L)) / 3, rel=1e-15)


def test_theorem_bound_value():
    want = leading_constant() * (2 * (math.log(512) + 1) + math.log(2) - math.log(0.5)) / 16
    assert theorem_bound(256, 2, 0.5) == pytest.approx(want, rel=1e-15)
    assert theorem_bound(256, 2, 0.5) == pytest.approx(1.7083891689648238, rel=1e-14)


def test_theorem_bound_shape():
    vals = [theorem_bound(4 ** k, 3, 0.5) for k in range(1, 11)]
    assert all(np.diff(vals[1:]) < 0)
    assert theorem_bound(64, 2, 0.9) > theorem_bound(64, 2, 0.1)
    for bad in (0, 8, 100, 2):
        with pytest.raises(ValueError):
            theorem_bound(bad, 2, 0.5)


@pytest.mark.parametrize("m,s,delta", [(m, s, d) for m in range(1, 11) for s in range(1, 11) for d in (0.1, 0.5, 0.9)])
def test_theorem_bound_dominates_pgen(m, s, delta):
    assert theorem_bound(1 << (2 * m), s, delta) >= pgen_bound(BoundParams(m, s, delta)) - 1e-12


def test_pgen_bound_forms():
    p = BoundParams(5, 3, 0.3, B=2.5)
    assert pgen_bound(p) == pytest.approx(t_zero(p) / 32 + 3 / 32, rel=1e-15)
    tiny = BoundParams(5, 3, 0.3, B=1e-14)
    L = log_term(5, 3, 0.3)
    assert pgen_bound(tiny) == pytest.approx(2 * L / (3 * 32) + 3 / 32, rel=1e-9)


def test_report_keys():
    rep = report(BoundParams(4, 2, 0.5)).to_dict()
    assert list(rep) == ["L", "t_zero", "bernstein_at_t0", "theorem_bound", "pgen_bound"]
    assert rep["bernstein_at_t0"] == pytest.approx(0.5, rel=1e-9)
