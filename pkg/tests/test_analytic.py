import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rsengine.analytic import (
    SmoothingKernel,
    TaylorJet,
    complex_gamma,
    dirichlet_eval,
    gamma_v,
    gauss_kronrod,
    integrate_vertical,
    mellin_phi,
    mellin_phi_hat,
    residue_extract,
    smoothed_sum,
    tail_bound,
)
from rsengine.analytic.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES
from rsengine.automorphic import trivial
from rsengine.errors import DomainError, InsufficientXError, JetOrderError, PoleError, QuadratureError
from rsengine.rankin_selberg import RSPair, auxiliary_product, euler_product, rs_lambda_stream

mpmath.mp.dps = 30


def mp_gamma(s):
    return complex(mpmath.gamma(mpmath.mpc(s.real, s.imag)))


class TestGamma:
    def test_examples(self):
        assert complex_gamma(1) == pytest.approx(1, rel=1e-14)
        assert complex_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
        assert abs(complex_gamma(0.5 + 1j) / mp_gamma(0.5 + 1j) - 1) < 1e-12

    @settings(max_examples=300)
    @given(st.floats(-20, 30), st.floats(-60, 60))
    def test_against_mpmath(self, x, y):
        s = complex(x, y)
        if abs(s - round(x)) < 1e-3 and round(x) <= 0:
            return
        ref = mp_gamma(s)
        assert abs(complex_gamma(s) - ref) <= 1e-12 * abs(ref) + 1e-300

    @settings(max_examples=100)
    @given(st.floats(-8, 8), st.floats(-10, 10))
    def test_reflection_and_recurrence(self, x, y):
        s = complex(x, y)
        if abs(y) < 1e-3 and abs(x - round(x)) < 1e-3:
            return
        g = complex_gamma(s)
        assert abs(complex_gamma(s + 1) - s * g) <= 1e-10 * abs(s * g)
        lhs = g * complex_gamma(1 - s)
        rhs = math.pi / cmath.sin(math.pi * s)
        assert abs(lhs - rhs) <= 1e-10 * abs(rhs)

    def test_poles(self):
        for s in (0, -1, -7):
            with pytest.raises(PoleError):
                complex_gamma(s)

    def test_vectorised(self):
        s = np.array([0.5, 1 + 2j, -1.5 + 0.1j])
        assert np.allclose(complex_gamma(s), [complex_gamma(v) for v in s], rtol=1e-15)


class TestGammaV:
    def test_examples(self):
        assert gamma_v(1, "R") == pytest.approx(1, rel=1e-14)
        assert gamma_v(1, "C") == pytest.approx(1 / math.pi, rel=1e-14)

    def test_duplication(self):
        for x in np.linspace(0.2, 6, 12):
            for y in np.linspace(-20, 20, 9):
                s = complex(x, y)
                c = gamma_v(s, "C")
                assert abs(c - gamma_v(s, "R") * gamma_v(s + 1, "R")) <= 1e-10 * abs(c)

    def test_bad_kind(self):
        with pytest.raises(DomainError):
            gamma_v(1, "X")


class TestDirichletEval:
    def test_zeta_two(self, triv):
        stream = rs_lambda_stream(RSPair(triv, triv), 4 * 10**6)
        val = dirichlet_eval(stream, 2, tol=1e-6)
        assert val.tail <= 1e-6
        assert abs(val.value - math.pi**2 / 6) <= 1e-6

    def test_delta_delta_at_three(self, delta_big):
        pair = RSPair(delta_big, delta_big)
        stream = rs_lambda_stream(pair, 10**6)
        val = dirichlet_eval(stream, 3, tol=1e-8)
        assert abs(val.value - euler_product(pair, 3, 10**6)) <= 1e-9

    def test_edge_of_convergence(self, triv):
        stream = rs_lambda_stream(RSPair(triv, triv), 1000)
        with pytest.raises(InsufficientXError):
            dirichlet_eval(stream, 1 + 5j)
        with pytest.raises(InsufficientXError):
            dirichlet_eval(stream, 2, tol=1e-9)

    def test_tail_bound_is_a_bound(self):
        # zeta(3) tail beyond 1000, degree 1, against the exact tail
        exact = float(mpmath.zeta(3) - sum(mpmath.mpf(n) ** -3 for n in range(1, 1001)))
        assert exact <= tail_bound(1, 0.0, 3.0, 1000) <= 10 * exact
        # divisor function d(n): sum_{n > X} d(n) n^-2
        X = 2000
        d = np.zeros(X + 1)
        for k in range(1, X + 1):
            d[k::k] += 1
        exact = float(mpmath.zeta(2) ** 2) - float(np.sum(d[1:] / np.arange(1, X + 1) ** 2.0))
        assert exact <= tail_bound(2, 0.0, 2.0, X)


class TestSmoothedSum:
    def test_zeta_direct_sum(self, triv):
        stream = rs_lambda_stream(RSPair(triv, triv), 100)
        direct = math.fsum(math.exp(-n) / n for n in range(1, 101))
        assert abs(smoothed_sum(stream, 1.0, 1.0) - direct) < 1e-12
        assert abs(direct + math.log(1 - math.exp(-1))) < 1e-12

    def test_large_x_approaches_series(self, delta_rep):
        # sum lambda(n) n^-3 e^(-n/x) -> L(3) as x grows
        stream = rs_lambda_stream(RSPair(delta_rep, delta_rep), 10**5)
        exact = dirichlet_eval(stream, 3.0, tol=1e-5)
        gaps = [abs(smoothed_sum(stream, 3.0, x) - exact.value) for x in (10, 100, 1000)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 1e-2

    def test_floor_and_monotone(self, delta_rep, chi5):
        stream = auxiliary_product(delta_rep, delta_rep, chi5).stream(2000)
        values = [smoothed_sum(stream, 0.99, x).real for x in (1, 2, 5, 10, 20, 40)]
        assert values[3] >= 1 / math.e
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_requires_long_stream(self, triv):
        stream = rs_lambda_stream(RSPair(triv, triv), 400)
        with pytest.raises(InsufficientXError):
            smoothed_sum(stream, 1.0, 10)


class TestMellin:
    def test_examples(self):
        k = SmoothingKernel(7.0, 2.0)
        assert mellin_phi_hat(1, k) == k.x + k.y / 2
        assert mellin_phi(k.x + k.y / 2, k) == 0.5
        assert mellin_phi(3.0, k) == 1 and mellin_phi(9.5, k) == 0

    def test_kernel_validation(self):
        for x, y in ((1, 2), (0, 0), (1, 0)):
            with pytest.raises(DomainError):
                SmoothingKernel(x, y)

    @pytest.mark.parametrize("s", [2 + 3j, 0.5 - 4j, 1.7 + 0.2j, 3 + 10j])
    def test_against_mpmath_quadrature(self, s):
        k = SmoothingKernel(5.0, 2.5)
        f = lambda r: mpmath.mpf(min(1, max(0, (k.x + k.y - r) / k.y))) * r ** (s - 1)
        # r = x t^2 removes the r^(s-1) endpoint singularity
        head = mpmath.quad(lambda t: 2 * k.x**s * t ** (2 * s - 1), [0, 1])
        ramp = mpmath.quad(f, [k.x, k.x + k.y])
        assert abs(mellin_phi_hat(s, k) - complex(head + ramp)) < 1e-10

    def test_near_minus_one(self):
        k = SmoothingKernel(10.0, 4.0)
        assert mellin_phi_hat(-1, k) == pytest.approx(-math.log(1.4) / 4, rel=1e-14)
        for eps in (1e-5, 1e-7, 3e-5j):
            s = -1 + eps
            sm = mpmath.mpc(s.real, s.imag) if isinstance(s, complex) else mpmath.mpf(s)
            ref = (mpmath.mpf(14) ** (sm + 1) - mpmath.mpf(10) ** (sm + 1)) / (4 * (sm * sm + sm))
            assert abs(mellin_phi_hat(s, k) - complex(ref)) < 1e-13

    def test_pole_at_zero(self):
        k = SmoothingKernel(2.0, 1.0)
        with pytest.raises(PoleError):
            mellin_phi_hat(0, k)
        eps = 1e-6
        assert abs(eps * mellin_phi_hat(eps, k) - 1) < 1e-5

    @given(st.floats(0.05, 4), st.floats(-100, 100), st.floats(0.1, 50), st.floats(0.01, 1))
    def test_modulus_bound(self, sigma, t, x, frac):
        k = SmoothingKernel(x, x * frac)
        assert abs(mellin_phi_hat(complex(sigma, t), k)) <= mellin_phi_hat(sigma, k).real * (1 + 1e-12)


def taylor_coeffs(fn, order):
    return [complex(c) for c in mpmath.taylor(fn, 0, order)]


class TestResidue:
    def test_examples(self):
        one = TaylorJet.constant(0, 1, 3)
        assert residue_extract(one, one, one, 1) == 0
        f = TaylorJet(0, (1, 1, 0))
        g = TaylorJet(0, (1, -1, 0))
        h = TaylorJet.exp(0, 3)
        assert residue_extract(f, g, h, 1) == pytest.approx(1)
        # series-multiplication oracle: coefficient of u in (1 - u^2) e^u
        assert taylor_coeffs(lambda u: (1 - u * u) * mpmath.exp(u), 1)[1] == pytest.approx(1)

    @pytest.mark.parametrize("k", [1, 2])
    def test_structural_zero(self, k):
        rng = np.random.default_rng(k)
        for _ in range(10):
            f = TaylorJet(0.3, (0,) + tuple(rng.normal(size=4)))
            g = TaylorJet(0.3, (0,) + tuple(rng.normal(size=4)))
            h = TaylorJet(0.3, tuple(rng.normal(size=5)))
            assert residue_extract(f, g, h, k) == 0

    def test_against_series_product(self):
        rng = np.random.default_rng(7)
        for k in (1, 2, 3):
            f, g, h = (TaylorJet(0, tuple(rng.normal(size=2 * k) + 1j * rng.normal(size=2 * k))) for _ in range(3))
            via_product = ((f**k) * (g**k) * h)[2 * k - 1]
            assert abs(residue_extract(f, g, h, k) - via_product) < 1e-12 * max(1, abs(via_product))

    def test_linear_and_symmetric(self):
        rng = np.random.default_rng(3)
        for k in (1, 2):
            f, g, h1, h2 = (TaylorJet(1j, tuple(rng.normal(size=5))) for _ in range(4))
            combo = TaylorJet(1j, tuple(2 * a - 3 * b for a, b in zip(h1.coefficients, h2.coefficients)))
            r = residue_extract(f, g, combo, k)
            assert abs(r - (2 * residue_extract(f, g, h1, k) - 3 * residue_extract(f, g, h2, k))) < 1e-12
            assert abs(residue_extract(f, g, h1, k) - residue_extract(g, f, h1, k)) < 1e-12

    def test_analytic_jets(self):
        # f = sin(u) + 1, g = cos(u), h = 1/(1-u): compare with mpmath series product
        k = 2
        fc = taylor_coeffs(lambda u: mpmath.sin(u) + 1, 3)
        gc = taylor_coeffs(mpmath.cos, 3)
        hc = taylor_coeffs(lambda u: 1 / (1 - u), 3)
        expected = taylor_coeffs(lambda u: ((mpmath.sin(u) + 1) * mpmath.cos(u)) ** 2 / (1 - u), 3)[3]
        got = residue_extract(TaylorJet(0, fc), TaylorJet(0, gc), TaylorJet(0, hc), k)
        assert abs(got - expected) < 1e-13

    def test_errors(self):
        short = TaylorJet(0, (1, 2))
        with pytest.raises(JetOrderError):
            residue_extract(short, short, short, 2)
        with pytest.raises(DomainError):
            residue_extract(TaylorJet(0, (1, 1)), TaylorJet(1, (1, 1)), TaylorJet(0, (1, 1)), 1)


class TestQuadrature:
    def test_rules_are_exact_on_polynomials(self):
        for deg in range(0, 23):
            exact = 2 / (deg + 1) if deg % 2 == 0 else 0
            assert abs(np.dot(KRONROD_WEIGHTS, NODES**deg) - exact) < 1e-14
            if deg <= 13:
                assert abs(np.dot(GAUSS_WEIGHTS, NODES**deg) - exact) < 1e-14
        assert abs(np.dot(GAUSS_WEIGHTS, NODES**14) - 2 / 15) > 1e-8

    def test_cahen_mellin(self):
        x = 5.0
        res = integrate_vertical(lambda w: complex_gamma(w) * x**w, 2.0, 50.0, tol=1e-10)
        assert res.converged
        assert abs(res.value - math.exp(-1 / x)) < 1e-8

    def test_zero(self):
        assert integrate_vertical(lambda w: 0 * w, 1.0, 10.0).value == 0

    def test_conjugate_symmetric_integrand_is_real(self):
        res = integrate_vertical(lambda w: complex_gamma(w) * 3.0**w / (w + 1), 1.5, 40.0)
        assert abs(res.value.imag) < 1e-12

    def test_scalar_sampler(self):
        res = integrate_vertical(lambda w: cmath.exp(w * w), 0.0, 5.0, tol=1e-12)
        # (1/2pi) integral_{-5}^{5} e^{-t^2} dt
        assert abs(res.value - math.sqrt(math.pi) * math.erf(5) / (2 * math.pi)) < 1e-12

    def test_budget_exhaustion(self):
        with pytest.raises(QuadratureError) as info:
            integrate_vertical(lambda w: np.sin(1e4 * w.imag) * np.exp(np.abs(w.imag) / 10), 1.0, 200.0,
                               tol=1e-14, max_evals=500)
        assert info.value.evaluations <= 500 and info.value.error > 0

    def test_gauss_kronrod_panel(self):
        v, e = gauss_kronrod(np.exp, 0.0, 1.0)
        assert abs(v - (math.e - 1)) < 1e-15 and e < 1e-12
