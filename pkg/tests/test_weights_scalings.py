import numpy as np
import pytest

from zrblab.scalings import (
    FarFieldScaling,
    ScalingSet,
    dynamic_scalings,
    integrability_ledger,
    paper_scalings,
)
from zrblab.weights import (
    farfield_plateau,
    probe_comparability_constant,
    probe_psi,
    smooth_step,
    smooth_step_derivative,
    tanh_core,
)


class TestTanhCore:
    def test_values(self):
        w = tanh_core()
        s = np.linspace(-5, 5, 201)
        assert np.max(np.abs(w(s) - np.tanh(s))) < 1e-14
        assert np.max(np.abs(w.derivative(s, 1) - 1.0 / np.cosh(s) ** 2)) < 1e-14

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_derivatives_against_finite_differences(self, order):
        w = tanh_core()
        s = np.linspace(-3, 3, 41)
        h = 1e-5
        fd = (w.derivative(s + h, order - 1) - w.derivative(s - h, order - 1)) / (2 * h)
        assert np.max(np.abs(fd - w.derivative(s, order))) < 1e-8


class TestSmoothStep:
    def test_endpoints_and_monotonicity(self):
        t = np.linspace(-0.5, 1.5, 401)
        h = smooth_step(t)
        assert np.all(h[t <= 0] == 0.0)
        assert np.all(h[t >= 1] == 1.0)
        assert np.all(np.diff(h) >= -1e-15)

    def test_symmetry(self):
        t = np.linspace(0.01, 0.99, 99)
        assert np.max(np.abs(smooth_step(t) + smooth_step(1.0 - t) - 1.0)) < 1e-13

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_derivatives_against_finite_differences(self, order):
        t = np.linspace(0.05, 0.95, 37)
        h = 1e-6
        fd = (
            smooth_step_derivative(t + h, order - 1)
            - smooth_step_derivative(t - h, order - 1)
        ) / (2 * h)
        err = np.max(np.abs(fd - smooth_step_derivative(t, order)))
        assert err < 1e-4 * max(1.0, np.max(np.abs(smooth_step_derivative(t, order))))


class TestFarFieldPlateau:
    def test_plateau_values_exact(self):
        w = farfield_plateau()
        assert w(-1.0) == 1.0
        assert w(-2.0) == 1.0
        assert w(0.0) == 0.0
        assert w(1.0) == 0.0
        assert w(-0.9) == pytest.approx(0.9, abs=0)
        assert w(-0.1) == pytest.approx(0.1, abs=0)
        mid = np.linspace(-0.9, -0.1, 33)
        assert np.max(np.abs(w(mid) + mid)) < 1e-15

    def test_slope_is_exactly_minus_one_on_core(self):
        w = farfield_plateau()
        mid = np.linspace(-0.9, -0.1, 33)
        assert np.all(w.derivative(mid, 1) == -1.0)

    def test_sign_properties(self):
        # Phi' <= 0 and s Phi'(s) >= 0 everywhere
        w = farfield_plateau()
        s = np.linspace(-2.0, 1.0, 3001)
        d1 = w.derivative(s, 1)
        assert np.all(d1 <= 1e-15)
        assert np.all(s * d1 >= -1e-15)

    def test_non_increasing_and_smooth_join(self):
        w = farfield_plateau()
        s = np.linspace(-1.2, 0.2, 2801)
        assert np.all(np.diff(w(s)) <= 1e-15)
        # derivative consistent with values (C^1 check via finite differences)
        h = 1e-6
        fd = (w(s + h) - w(s - h)) / (2 * h)
        assert np.max(np.abs(fd - w.derivative(s, 1))) < 1e-4

    def test_second_derivative_consistency(self):
        w = farfield_plateau()
        s = np.linspace(-0.999, -0.001, 997)
        h = 1e-6
        fd = (w.derivative(s + h, 1) - w.derivative(s - h, 1)) / (2 * h)
        scale = max(1.0, np.max(np.abs(w.derivative(s, 2))))
        assert np.max(np.abs(fd - w.derivative(s, 2))) < 1e-3 * scale


class TestProbePsi:
    def test_support_and_flat_top(self):
        w = probe_psi()
        s = np.linspace(-1.0, 0.2, 1201)
        vals = w(s)
        assert np.all(vals >= 0.0)
        assert np.all(vals[(s < -0.75) | (s > -0.25)] == 0.0)
        flat = (s >= -0.6) & (s <= -0.4)
        assert np.max(np.abs(vals[flat] - 1.0)) < 1e-15

    def test_comparable_to_plateau_slope(self):
        consts = probe_comparability_constant()
        assert consts["value_over_phi_prime"] <= 1.0 + 1e-12
        assert consts["slope_over_phi_prime"] < 20.0

    def test_derivative_consistency(self):
        w = probe_psi()
        s = np.linspace(-0.8, -0.2, 601)
        h = 1e-6
        fd = (w(s + h) - w(s - h)) / (2 * h)
        assert np.max(np.abs(fd - w.derivative(s, 1))) < 1e-3


class TestScalingSet:
    def test_positive_and_finite(self):
        for sc in (paper_scalings(), dynamic_scalings()):
            t = np.linspace(0.0, 100.0, 50)
            for fn in (sc.lambda1, sc.lambda2, sc.mu):
                vals = np.asarray(fn(t))
                assert np.all(np.isfinite(vals)) and np.all(vals > 0)

    def test_ratio_identity(self):
        # lambda1/lambda2 = 1/loglog(kappa+t) exactly
        sc = dynamic_scalings()
        t = np.linspace(0.0, 1e4, 77)
        ll = np.log(np.log(sc.kappa + t))
        ratio = np.asarray(sc.lambda1(t)) / np.asarray(sc.lambda2(t))
        assert np.max(np.abs(ratio * ll - 1.0)) < 1e-12

    def test_mu_star_lambda1_ratio_bounded(self):
        # mu lambda1 / mu_star = (kappa+t)/t, so boundedness holds away from
        # t = 0 (mu_star vanishes there); assert on t >= 1
        sc = dynamic_scalings()
        t = np.linspace(1.0, 1e4, 200)
        ratio = np.asarray(sc.mu(t)) * np.asarray(sc.lambda1(t)) / np.asarray(
            sc.mu_star(t)
        )
        assert np.all(np.isfinite(ratio))
        assert ratio.max() / ratio.min() < 20.0

    @pytest.mark.parametrize("name", ["lambda1", "lambda2", "mu"])
    def test_derivatives_against_finite_differences(self, name):
        sc = dynamic_scalings()
        t = np.linspace(0.5, 50.0, 23)
        h = 1e-5
        fn = getattr(sc, name)
        fd = (np.asarray(fn(t + h)) - np.asarray(fn(t - h))) / (2 * h)
        exact = np.asarray(getattr(sc, name + "_dot")(t))
        assert np.max(np.abs(fd - exact) / np.abs(exact)) < 1e-7

    def test_kappa_floor(self):
        with pytest.raises(ValueError):
            ScalingSet(1.0)


class TestFarFieldScaling:
    def test_defaults_and_derivative(self):
        ff = FarFieldScaling(delta=0.1, c1=0.05, base_width=16.0)
        t = np.linspace(0.0, 10.0, 21)
        h = 1e-6
        fd = (np.asarray(ff.lam(t + h)) - np.asarray(ff.lam(t - h))) / (2 * h)
        assert np.max(np.abs(fd - np.asarray(ff.lam_dot(t)))) < 1e-5
        assert np.all(np.asarray(ff.zeta(t)) >= ff.c1 * np.asarray(ff.lam(t)) - 1e-12)

    def test_inverse_lambda_integrable_trend(self):
        # 1/lambda has a convergent tail; lambda'/lambda keeps growing
        ff = FarFieldScaling(delta=0.1, base_width=1.0)
        t = np.logspace(-2, 6, 4001)
        inv = 1.0 / np.asarray(ff.lam(t))
        ratio = np.asarray(ff.lam_dot(t)) / np.asarray(ff.lam(t))
        inv_partial = np.cumsum(0.5 * (inv[1:] + inv[:-1]) * np.diff(t))
        ratio_partial = np.cumsum(0.5 * (ratio[1:] + ratio[:-1]) * np.diff(t))
        # final decade of 1/lambda adds < 0.1% of the total
        n = len(inv_partial)
        assert inv_partial[-1] - inv_partial[n // 8 * 7] < 1e-3 * inv_partial[-1]
        # lambda'/lambda partial integrals keep growing by > 10% per decade
        assert ratio_partial[-1] > 1.1 * ratio_partial[n // 8 * 7]

    def test_validation(self):
        with pytest.raises(ValueError):
            FarFieldScaling(delta=0.0)
        with pytest.raises(ValueError):
            FarFieldScaling(zeta_fn=lambda t: t)


def test_integrability_ledger_split():
    """The convergent/divergent split of the core scaling family.

    On [0, 1e6] with kappa = 3 the three convergent ratios contribute
    under 1% of their total in the final decade while 1/(mu lambda1)
    keeps adding at least 1% per decade.
    """
    ledger = integrability_ledger(kappa=3.0)
    for name in ("inv_mu_lambda2", "lambda1_ratio", "lambda2_ratio", "mu_ratio"):
        assert ledger[name]["increasing"]
        assert ledger[name]["final_decade_share"] < 0.01, name
    assert ledger["inv_mu_lambda1"]["final_decade_share"] >= 0.01
    assert all(d > 0 for d in ledger["inv_mu_lambda1"]["per_decade"])
