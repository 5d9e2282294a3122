import cmath
import math

import numpy as np
import pytest

from oscdelta.core import BarrierParams, Regime, channel
from oscdelta.fs import converge_truncation, solve_fs
from oscdelta.ts import (
    DegenerateClosureError,
    decay_exponents,
    regime_a_closed_form,
    solve_ts,
)


def make(E=2.5, V0=10.0, eps=1.0, Omega=1.0):
    return BarrierParams(V0=V0, eps=eps, Omega=Omega, E=E)


class TestDecayExponents:
    def test_eps_zero_degenerate(self):
        with pytest.raises(DegenerateClosureError):
            decay_exponents(make(eps=0.0))

    def test_positive_real_parts(self):
        for E in (2.5, 1.5, 0.5):
            ex = decay_exponents(make(E=E))
            assert ex.theta_plus.real > 0
            assert ex.theta_minus.real > 0

    def test_characteristic_residual(self):
        p = make(eps=0.7)
        ex = decay_exponents(p)
        for theta, n in ((ex.theta_minus, -2), (ex.theta_plus, 2)):
            k = channel(p, n).k_n
            d = 2j * k / p.B - 1.0
            x = cmath.exp(-theta)
            res = (p.eps / 2) * x * x - d * x + p.eps / 2
            assert abs(res) < 1e-10

    def test_root_product_is_one(self):
        ex = decay_exponents(make(eps=0.3))
        for roots, _ in ex.root_diagnostics.values():
            assert roots[0] * roots[1] == pytest.approx(1.0, abs=1e-10)

    def test_selected_root_inside_unit_circle(self):
        for E in (2.5, 1.5, 0.5):
            for eps in (1.0, 0.1, 0.01):
                ex = decay_exponents(make(E=E, eps=eps))
                for _, x in ex.root_diagnostics.values():
                    assert abs(x) < 1.0 - 1e-12

    def test_small_eps_divergence(self):
        # decaying root -> (eps/2)/d, so Re(theta) ~ -log(eps/2) + O(1)
        for eps in (1e-3, 1e-5):
            ex = decay_exponents(make(eps=eps))
            assert abs(ex.theta_plus.real - (-math.log(eps / 2))) < 2.0

    def test_regime_recorded(self):
        assert decay_exponents(make(E=2.5)).regime is Regime.A
        assert decay_exponents(make(E=0.5)).regime is Regime.C


class TestRegimeAClosedForm:
    def test_matches_quadratic_route(self):
        p = make()
        ex = decay_exponents(p)
        for theta, n in ((ex.theta_minus, -2), (ex.theta_plus, 2)):
            k = channel(p, n).k_n.real
            cos_im, cosh_re = regime_a_closed_form(p.eps, p.B, k)
            assert abs(math.cos(theta.imag)) == pytest.approx(cos_im, abs=1e-10)
            assert math.cosh(theta.real) == pytest.approx(cosh_re, abs=1e-10)

    def test_cos_sign_is_negative(self):
        # cosh >= 1 and cosh * cos = -1/eps force cos(Im theta) < 0; the
        # printed closed form carries the magnitude
        ex = decay_exponents(make())
        assert math.cos(ex.theta_plus.imag) < 0
        assert math.cos(ex.theta_minus.imag) < 0

    def test_sampled_regime_a_grid(self):
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 20:
            E = rng.uniform(2.2, 20.0)
            p = BarrierParams(V0=rng.uniform(2.0, 30.0),
                              eps=rng.uniform(0.05, 1.0),
                              Omega=rng.uniform(0.1, E / 2.2), E=E)
            ex = decay_exponents(p)
            for theta, n in ((ex.theta_minus, -2), (ex.theta_plus, 2)):
                k = channel(p, n).k_n.real
                try:
                    cos_im, cosh_re = regime_a_closed_form(p.eps, p.B, k)
                except ValueError:
                    continue
                assert abs(math.cos(theta.imag)) == pytest.approx(cos_im, abs=1e-10)
                assert math.cosh(theta.real) == pytest.approx(cosh_re, abs=1e-10)
            checked += 1


class TestSolveTs:
    def test_small_eps_limit(self):
        p = make(eps=1e-6)
        sol = solve_ts(p)
        k0 = channel(p, 0).k_n
        r0 = 1.0 / (2j * k0 / p.B - 1.0)
        assert sol.r[0] == pytest.approx(r0, rel=1e-6)
        assert abs(sol.r[1]) < 1e-5
        assert abs(sol.r[-1]) < 1e-5

    def test_continuity(self):
        sol = solve_ts(make())
        assert sol.t[0] == pytest.approx(1.0 + sol.r[0])
        assert sol.t[1] == sol.r[1]

    @pytest.mark.parametrize("E,tol", [(2.5, 0.20), (1.5, 0.20), (0.5, 0.20)])
    def test_fig2_worst_case_agreement(self, E, tol):
        fsol, _ = converge_truncation(make(E=E, eps=1.0))
        tsol = solve_ts(make(E=E, eps=1.0))
        for n in (-1, 0, 1):
            rel = abs(tsol.intensities[n] - fsol.intensities[n]) / fsol.intensities[n]
            assert rel < tol

    def test_fig2d_smaller_eps_tighter(self):
        fsol, _ = converge_truncation(make(eps=0.5))
        tsol = solve_ts(make(eps=0.5))
        for n in (-1, 0, 1):
            rel = abs(tsol.intensities[n] - fsol.intensities[n]) / fsol.intensities[n]
            assert rel < 0.05

    def test_deviation_monotone_in_eps(self):
        devs = []
        for eps in (1.0, 0.5, 0.1, 0.01):
            fsol, _ = converge_truncation(make(eps=eps))
            tsol = solve_ts(make(eps=eps))
            devs.append(max(
                abs(tsol.intensities[n] - fsol.intensities[n]) / fsol.intensities[n]
                for n in (-1, 0, 1)
            ))
        assert all(a >= b for a, b in zip(devs, devs[1:]))

    def test_tail_slopes_match_fs(self):
        # the closure replaces r_{+-2}/r_{+-1} by e^{-theta}; check that
        # ratio on both sides, and the log-linear decay over n = 2..5 on
        # the right side where all channels stay propagating (on the
        # evanescent left side the local rate grows with |n|)
        p = make(eps=0.1)
        ex = decay_exponents(p)
        fsol = solve_fs(p, -30, 30)
        first_r = math.log(abs(fsol.r[1]) / abs(fsol.r[2]))
        first_l = math.log(abs(fsol.r[-1]) / abs(fsol.r[-2]))
        assert first_r == pytest.approx(ex.theta_plus.real, rel=1e-3)
        assert first_l == pytest.approx(ex.theta_minus.real, rel=1e-3)
        right = [abs(fsol.r[n]) for n in range(2, 6)]
        slopes_r = [math.log(a / b) for a, b in zip(right, right[1:])]
        assert abs(np.mean(slopes_r) - ex.theta_plus.real) / ex.theta_plus.real < 0.05
