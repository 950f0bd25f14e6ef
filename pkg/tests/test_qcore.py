"""Scalar q-calculus primitives against hand values and brute-force oracles."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from qsobolev import (
    ConvergenceError,
    PoleError,
    QContext,
    basic_hypergeometric,
    q_binomial,
    q_factorial,
    q_falling_factorial,
    q_number,
    q_pochhammer,
    q_pochhammer_inf,
    q_pochhammer_inf_multi,
)
from qsobolev.qcore import _q_falling_factorial, _q_pochhammer

from conftest import close

# direct truncated product at 30 digits (mpmath), frozen as golden
POCHHAMMER_HALF_INF = 0.28878809508660242128
MINUS_Q_HALF_INF = 2.3842310290313717241


@pytest.fixture(scope="module")
def ctx():
    return QContext(Fraction(1, 2))


class TestContext:
    def test_rejects_q_outside_unit_interval(self):
        for bad in (0, 1, -0.5, 1.5, Fraction(7, 3)):
            with pytest.raises(ValueError):
                QContext(bad)

    def test_accepts_rational_strings(self):
        ctx = QContext("2/3")
        assert ctx.q_exact == Fraction(2, 3)
        ctx = QContext("0.6")
        assert ctx.q_exact == Fraction(3, 5)

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            QContext(0.5, eps_product=1e-3)
        with pytest.raises(ValueError):
            QContext(0.5, eps_sum=0.0)
        with pytest.raises(ValueError):
            QContext(0.5, max_terms=10)


class TestQNumber:
    def test_zero(self, ctx):
        assert q_number(ctx, 0) == 0.0

    def test_geometric_sum(self, ctx):
        assert q_number(ctx, 3) == pytest.approx(7 / 4, abs=0)

    def test_negative_index(self, ctx):
        assert q_number(ctx, -1) == pytest.approx(-2.0, abs=0)

    def test_factorial_recurrence(self, ctx):
        rng = random.Random(7)
        for _ in range(20):
            n = rng.randint(1, 50)
            assert close(q_factorial(ctx, n), q_number(ctx, n) * q_factorial(ctx, n - 1), 1e-12)


class TestQFactorial:
    def test_empty(self, ctx):
        assert q_factorial(ctx, 0) == 1.0

    def test_small_values(self, ctx):
        assert q_factorial(ctx, 2) == pytest.approx(3 / 2, abs=0)
        assert q_factorial(ctx, 3) == pytest.approx(21 / 8, rel=1e-15)

    def test_negative_rejected(self, ctx):
        with pytest.raises(ValueError):
            q_factorial(ctx, -1)


class TestQPochhammer:
    def test_empty(self, ctx):
        assert q_pochhammer(ctx, 0.3, 0) == 1.0

    def test_two_factors(self, ctx):
        assert q_pochhammer(ctx, 0.5, 2) == pytest.approx(3 / 8, abs=0)

    def test_vanishing_at_inverse_power(self, ctx):
        # (q^-n0; q)_k = 0 once k > n0
        a = Fraction(1, 2) ** -2
        assert _q_pochhammer(Fraction(1, 2), a, 3) == 0

    def test_split_identity(self, ctx):
        rng = random.Random(11)
        for _ in range(20):
            a = rng.uniform(-2, 2)
            m, n = rng.randint(0, 20), rng.randint(0, 20)
            left = q_pochhammer(ctx, a, m + n)
            right = q_pochhammer(ctx, a, m) * q_pochhammer(ctx, a * ctx.q**m, n)
            assert close(left, right, 1e-12)


class TestQPochhammerInf:
    def test_zero_argument(self, ctx):
        assert q_pochhammer_inf(ctx, 0.0) == 1.0

    def test_golden_half(self, ctx):
        assert q_pochhammer_inf(ctx, 0.5) == pytest.approx(POCHHAMMER_HALF_INF, rel=1e-15)

    def test_multi_argument_norm_factor(self, ctx):
        # (q,-1,-q;q)_inf with (-1;q)_inf = 2 (-q;q)_inf
        multi = q_pochhammer_inf_multi(ctx, [0.5, -1.0, -0.5])
        expected = POCHHAMMER_HALF_INF * 2 * MINUS_Q_HALF_INF**2
        assert multi == pytest.approx(expected, rel=1e-14)
        assert q_pochhammer_inf(ctx, -1.0) == pytest.approx(2 * MINUS_Q_HALF_INF, rel=1e-14)

    def test_ratio_identity(self, ctx):
        rng = random.Random(13)
        for _ in range(20):
            a = rng.uniform(-2, 2)
            n = rng.randint(0, 10)
            lhs = q_pochhammer_inf(ctx, a) / q_pochhammer(ctx, a, n)
            rhs = q_pochhammer_inf(ctx, a * ctx.q**n)
            assert close(lhs, rhs, 1e-12)

    def test_cap_exceeded(self):
        ctx = QContext(0.999, eps_product=1e-18, max_terms=64)
        with pytest.raises(ConvergenceError):
            q_pochhammer_inf(ctx, 0.5)


class TestQBinomial:
    def test_edges(self, ctx):
        assert q_binomial(ctx, 5, 0) == 1.0
        assert q_binomial(ctx, 5, -1) == 0.0
        assert q_binomial(ctx, 5, 6) == 0.0

    def test_small(self, ctx):
        assert q_binomial(ctx, 2, 1) == pytest.approx(1.5, abs=0)

    def test_four_choose_two(self, ctx):
        # brute-force product-ratio oracle in exact arithmetic
        q = Fraction(1, 2)
        qq = lambda n: _q_pochhammer(q, q, n)
        expected = qq(4) / (qq(2) * qq(2))
        assert expected == Fraction(35, 16)
        assert q_binomial(ctx, 4, 2) == pytest.approx(float(expected), rel=1e-15)

    def test_pascal_identity(self, ctx):
        for n in range(2, 31):
            for k in range(1, n):
                lhs = q_binomial(ctx, n, k)
                rhs = q_binomial(ctx, n - 1, k - 1) + ctx.q**k * q_binomial(ctx, n - 1, k)
                assert close(lhs, rhs, 1e-12)


class TestQFallingFactorial:
    def test_empty(self, ctx):
        assert q_falling_factorial(ctx, 3, 0) == 1.0

    def test_reduces_to_q_number(self, ctx):
        assert q_falling_factorial(ctx, 3, 1) == pytest.approx(7 / 4, abs=0)

    def test_vanishes_past_s(self, ctx):
        assert q_falling_factorial(ctx, 3, 4) == 0.0

    def test_matches_pochhammer_form(self, ctx):
        # [s]^(n) = (q^-s; q)_n (q-1)^-n q^(ns - n(n-1)/2)
        q = Fraction(1, 2)
        for s in range(0, 8):
            for n in range(0, 6):
                direct = _q_falling_factorial(q, s, n)
                formula = (
                    _q_pochhammer(q, q**-s, n)
                    * (q - 1) ** -n
                    * q ** (n * s - n * (n - 1) // 2)
                )
                assert direct == formula


class TestBasicHypergeometric:
    def test_z_zero(self, ctx):
        assert basic_hypergeometric(ctx, [0.5], [0.25], 0.0, 10) == 1.0

    def test_terminating_series_stops(self, ctx):
        # upper q^-n makes terms with k > n vanish
        n = 4
        q = ctx.q
        a = q**-n
        v1 = basic_hypergeometric(ctx, [a], [], 0.3, n)
        v2 = basic_hypergeometric(ctx, [a], [], 0.3, n + 5)
        assert close(v1, v2, 1e-13)

    def test_hermite_value(self, ctx):
        # 2phi1(q^-2, 1/x; 0; q, -qx) * q = H_2(x) = x^2 + q - 1 at x = 1/4
        q, x = ctx.q, 0.25
        val = q * basic_hypergeometric(ctx, [q**-2, 1 / x], [0.0], -q * x, 2)
        assert val == pytest.approx(-7 / 16, rel=1e-13)

    def test_pole_detection_names_index(self, ctx):
        with pytest.raises(PoleError, match="#1"):
            basic_hypergeometric(ctx, [0.5], [0.3, ctx.q**-3], 0.1, 6)

    def test_reproduces_hermite_family(self, ctx, hermite_cache):
        # (ASP)-style reconstruction against the recurrence-built family
        cache = hermite_cache(Fraction(1, 2), 12)
        q = ctx.q
        xs = [s * k / 10 for k in range(1, 11) for s in (1, -1)]
        assert len(xs) == 20
        for n in range(13):
            scale = q ** (n * (n - 1) // 2)
            for x in xs:
                got = scale * basic_hypergeometric(ctx, [q**-n, 1 / x], [0.0], -q * x, n)
                want = cache.polys[n].as_float()(x)
                assert close(got, want, 1e-12)
