import io
import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from rsengine.arith import ramanujan_tau, sieve_primes
from rsengine.automorphic import contragredient, gl1, isobaric_sum, newform, twist
from rsengine.characters import character, characters_mod
from rsengine.errors import InsufficientDataError
from rsengine.rankin_selberg import (
    RSPair,
    auxiliary_product,
    check_decoupling,
    check_local_bounds,
    conductor_Q,
    dirichlet_convolve,
    euler_product,
    log_derivative_residual,
    rs_biglambda_stream,
    rs_lambda_stream,
    rs_stream,
    twisted_pair,
)

X = 10**4


def delta_eigen(p):
    return ramanujan_tau(p)[p - 1] / p**5.5


@pytest.fixture(scope="module")
def dd(delta_rep):
    return RSPair(delta_rep, delta_rep)


@pytest.fixture(scope="module")
def symbolic_dd():
    """lambda(p^k), k <= 4, of Delta x Delta as functions of alpha (with beta = 1/alpha)."""
    T, al, be = sympy.symbols("T alpha beta")
    euler = 1 / ((1 - al**2 * T) * (1 - al * be * T) ** 2 * (1 - be**2 * T))
    series = sympy.series(euler, T, 0, 5).removeO()
    coeffs = []
    for k in range(5):
        c = sympy.expand(series.coeff(T, k))
        c = sympy.simplify(c.subs(be, 1 / al))
        coeffs.append(sympy.lambdify(al, c))
    return coeffs


class TestLambdaStream:
    def test_zeta(self, triv):
        s = rs_lambda_stream(RSPair(triv, triv), 1000)
        assert np.array_equal(s.lam[1:], np.ones(1000))

    def test_delta_delta_first_coefficient(self, dd):
        s = rs_lambda_stream(dd, X)
        for p in (2, 3, 5, 97, 9973):
            assert abs(s.lam[p] - delta_eigen(p) ** 2) < 1e-12

    def test_prime_powers_against_symbolic_expansion(self, dd, delta_rep, symbolic_dd):
        s = rs_lambda_stream(dd, X)
        for p in (2, 3, 7, 19):
            alpha = complex(delta_rep.satake_table(np.array([p]))[0, 0])
            for k in range(5):
                if p**k <= X:
                    assert abs(s.lam[p**k] - symbolic_dd[k](alpha)) < 1e-11

    def test_twist_ramified(self, delta_rep, chi5):
        s = rs_lambda_stream(RSPair(delta_rep, gl1(chi5)), X)
        for k in range(1, 6):
            assert s.lam[5**k] == 0

    def test_multiplicative_and_normalised(self, delta_rep, chi5):
        s = rs_lambda_stream(twisted_pair(RSPair(delta_rep, delta_rep), chi5), X)
        assert s.lam[1] == 1
        rng = np.random.default_rng(1)
        for _ in range(2000):
            m, n = (int(v) for v in rng.integers(1, 200, size=2))
            if math.gcd(m, n) == 1 and m * n <= X:
                assert abs(s.lam[m * n] - s.lam[m] * s.lam[n]) < 1e-9

    def test_missing_data(self):
        rep = newform("toy", 2, 1, {p: 0.1 for p in (2, 3, 5, 7)})
        with pytest.raises(InsufficientDataError):
            rs_lambda_stream(RSPair(rep, rep), 20)


class TestBigLambda:
    def test_zeta(self, triv):
        s = rs_biglambda_stream(RSPair(triv, triv), 100)
        assert s.biglam[8] == pytest.approx(math.log(2))
        assert s.biglam[12] == 0

    def test_delta_delta(self, dd):
        s = rs_biglambda_stream(dd, X)
        for p in (2, 3, 101, 9973):
            assert abs(s.biglam[p] - delta_eigen(p) ** 2 * math.log(p)) < 1e-11

    def test_support_on_prime_powers(self, dd):
        s = rs_biglambda_stream(dd, X)
        pp = np.zeros(X + 1, dtype=bool)
        for p in sieve_primes(X):
            pk = int(p)
            while pk <= X:
                pp[pk] = True
                pk *= int(p)
        assert np.all(s.biglam[~pp] == 0)

    @pytest.mark.parametrize("which", ["dd", "twisted", "isobaric"])
    def test_log_derivative_identity(self, which, dd, delta_rep, chi5, triv):
        pair = {
            "dd": dd,
            "twisted": twisted_pair(dd, chi5, 0.4),
            "isobaric": RSPair(isobaric_sum(delta_rep, gl1(chi5)), isobaric_sum(triv, delta_rep)),
        }[which]
        s = rs_stream(pair, X)
        scale = np.abs(s.lam).max() * math.log(X)
        assert log_derivative_residual(s) <= 1e-9 * scale


class TestTwistedPair:
    def test_trivial_twist(self, dd):
        same = twisted_pair(dd, characters_mod(1)[0], 0.0)
        assert np.array_equal(rs_stream(same, 500).lam, rs_stream(dd, 500).lam)

    def test_character_twist(self, dd, chi5):
        s = rs_biglambda_stream(twisted_pair(dd, chi5), X)
        for p in (2, 3, 7, 11, 9973):
            assert abs(s.biglam[p] - delta_eigen(p) ** 2 * chi5(p) * math.log(p)) < 1e-11
        assert s.biglam[5] == 0

    def test_real_twist_keeps_modulus(self, dd):
        a = rs_biglambda_stream(dd, X).biglam
        b = rs_biglambda_stream(twisted_pair(dd, None, 2.5), X).biglam
        assert np.allclose(np.abs(a), np.abs(b), atol=1e-12)
        assert twisted_pair(dd, None, 2.5).left is dd.left


class TestAuxiliaryProduct:
    def test_factor_list(self, delta_rep, chi5):
        aux = auxiliary_product(delta_rep, delta_rep, chi5)
        assert len(aux.factors) == 16
        distinct = aux.distinct_factors()
        assert len(distinct) == 12
        assert sorted(m for _, m, _ in distinct) == [1] * 8 + [2] * 4
        assert aux.isobaric.degree == 8 and aux.pair.degree == 64

    def test_biglambda_is_sum_of_factors(self, delta_rep, chi5):
        aux = auxiliary_product(delta_rep, delta_rep, chi5)
        total = sum(m * rs_biglambda_stream(p, 2000).biglam for _, m, p in aux.distinct_factors())
        assert np.allclose(aux.biglambda(2000), total, atol=1e-12)
        # and agrees with the isobaric Pi x Pi~ directly
        assert np.allclose(aux.biglambda(2000), rs_biglambda_stream(aux.pair, 2000).biglam, atol=1e-11)

    @pytest.mark.parametrize("idx", [1, 2, 3])
    def test_nonnegative(self, delta_rep, idx):
        for q in (5, 8, 12):
            aux = auxiliary_product(delta_rep, delta_rep, character(q, idx % len(characters_mod(q))))
            s = aux.stream(X)
            assert s.lam[1] == 1
            assert s.lam.real[1:].min() >= -1e-9 and s.biglam.real[1:].min() >= -1e-9
            assert np.abs(s.lam.imag).max() <= 1e-9 * max(1, np.abs(s.lam).max())

    def test_nonnegative_mixed(self, delta_rep, chi5, triv):
        aux = auxiliary_product(delta_rep, gl1(character(7, 1), 0.3), chi5)
        s = aux.stream(3000)
        assert s.lam.real[1:].min() >= -1e-9 and s.biglam.real[1:].min() >= -1e-9

    def test_convolution_consistency(self, delta_rep, chi8):
        aux = auxiliary_product(delta_rep, delta_rep, chi8)
        a = aux.lambda_by_convolution(X, np.clongdouble)
        b = aux.lambda_direct(X, np.clongdouble)
        assert np.abs(a[1:] - b[1:]).max() <= 1e-12


class TestConductorQ:
    def test_trivial(self, triv):
        assert conductor_Q(triv, triv, None) == pytest.approx(531441)

    def test_delta(self, delta_rep, chi5):
        assert conductor_Q(delta_rep, delta_rep, chi5) == pytest.approx((80.75**2) ** 8 * 20**16)

    def test_monotone_in_character_conductor(self, delta_rep):
        values = [conductor_Q(delta_rep, delta_rep, gl1(character(7, 1), t)) for t in range(0, 40, 4)]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestInequalities:
    def test_equality_for_contragredient(self, delta_rep, chi5):
        rep = twist(delta_rep, chi5, 0.3)
        report = check_decoupling(RSPair(rep, contragredient(rep)), 3000)
        assert report.ok and abs(report.worst_margin) < 1e-9

    def test_delta_chi5(self, delta_rep, chi5):
        assert check_decoupling(RSPair(delta_rep, gl1(chi5)), X).ok

    def test_lambda_side_vanishes_off_prime_powers(self, delta_rep, chi5):
        pair = RSPair(delta_rep, gl1(chi5))
        for n in (6, 12, 30, 100):
            assert rs_biglambda_stream(pair, 200).biglam[n] == 0
            assert rs_biglambda_stream(RSPair(delta_rep, delta_rep), 200).biglam[n] == 0

    def test_corrupted_table_is_reported(self):
        rep = newform("bad", 2, 1, {2: 2.0, 3: 30.0, 5: 0.1})
        report = check_local_bounds(RSPair(rep, rep), 5)
        assert not report.ok and report.js_violations and report.js_violations[0][0] == 3

    def test_local_bounds(self, delta_rep, chi5, chi8, triv):
        for right in (delta_rep, gl1(chi5), gl1(chi8), twist(delta_rep, chi5), triv):
            assert check_local_bounds(RSPair(delta_rep, right), 10**4).ok


class TestExport:
    def test_csv(self, triv):
        buf = io.StringIO()
        rs_stream(RSPair(triv, triv), 10).to_csv(buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "# pair: trivial x trivial"
        assert lines[1] == "n,re_lambda,im_lambda,re_Lambda,im_Lambda"
        assert len(lines) == 12
        assert float(lines[9].split(",")[3]) == pytest.approx(math.log(2))


def test_euler_product_matches_series(dd):
    s = rs_lambda_stream(dd, 10**5).lam
    n = np.arange(1, 10**5 + 1)
    series = np.sum(s[1:] * n**-4.0)
    assert abs(series - euler_product(dd, 4.0, 10**5)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 200), st.integers(1, 200))
def test_dirichlet_convolution_is_commutative(a, b):
    rng = np.random.default_rng(a * 1000 + b)
    u, v = rng.normal(size=(2, 300))
    assert np.allclose(dirichlet_convolve(u, v), dirichlet_convolve(v, u))


class TestPairConductor:
    def test_trivial_pair(self, triv):
        assert RSPair(triv, triv).analytic_conductor() == 3.0
        assert RSPair(triv, triv).analytic_conductor(4.0) == 7.0

    def test_delta_pair(self, delta_rep):
        pair = RSPair(delta_rep, delta_rep)
        assert sorted(m.real for m, _ in pair.archimedean_shifts()) == [11.0, 12.0, 12.0, 13.0]
        assert pair.analytic_conductor() == 14.0 * 15.0 * 15.0 * 16.0

    def test_levels_and_twist(self, delta_rep, chi5):
        pair = RSPair(gl1(chi5), twist(delta_rep, None, 2.0))
        # 5^2 from the character, level 1 for Delta; mu = 1 + 5.5 and 1 + 6.5 at height 2
        expected = 25 * (abs(6.5 + 2j) + 3) * (abs(7.5 + 2j) + 3)
        assert pair.analytic_conductor() == pytest.approx(expected, rel=1e-15)
