"""Root finding, critical masses, interlacing and lam-asymptotics."""
from __future__ import annotations

import warnings
from fractions import Fraction

import pytest

from qsobolev import (
    Poly,
    QContext,
    SobolevParams,
    build_hermite,
    build_sobolev,
    find_roots,
    interlacing_check,
    interlacing_check_triple,
    interlacing_lemma_probe,
    lambda0,
    lambda_alpha,
    limit_rate_check,
    limiting_polynomial,
    zero_table,
)

from conftest import close

T1 = dict(q=Fraction(2, 3), alpha=Fraction(-10), j=3, n=7)
T2 = dict(q=Fraction(4, 5), alpha=Fraction(15), j=8, n=10)
T3 = dict(q=Fraction(2, 5), alpha=Fraction(-120), j=5, n=8)
T4 = dict(q=Fraction(1, 2), alpha=Fraction(15), j=3, n=5)


def sobolev_zeros(cfg, lam, n=None):
    ctx = QContext(cfg["q"])
    n = cfg["n"] if n is None else n
    cache = build_sobolev(ctx, SobolevParams(cfg["alpha"], lam, cfg["j"]), n)
    return ctx, cache, find_roots(ctx, cache.polys[n], alpha=float(cfg["alpha"]))


class TestFindRoots:
    def test_quadratic(self):
        ctx = QContext(Fraction(1, 2))
        zs = find_roots(ctx, Poly((-1.0, 0.0, 1.0)))
        assert [z.real for z in zs.roots] == pytest.approx([-1.0, 1.0], abs=1e-14)
        assert zs.all_real()

    def test_degree_one(self):
        ctx = QContext(Fraction(1, 2))
        zs = find_roots(ctx, Poly((3.0, 2.0)))
        assert zs.roots[0].real == pytest.approx(-1.5, abs=1e-14)

    def test_degree_zero_rejected(self):
        ctx = QContext(Fraction(1, 2))
        with pytest.raises(ValueError):
            find_roots(ctx, Poly.one())

    def test_complex_quadruple_from_interior_mass_point(self):
        # alpha inside (-1,1) produces a genuine complex pair: the published
        # quadruple at alpha=1/4, q=3/5, j=2, lam=100
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cfg = dict(q=Fraction(3, 5), alpha=Fraction(1, 4), j=2, n=4)
            _, _, zs = sobolev_zeros(cfg, 100)
        expected = [
            complex(-0.778637, -0.221654),
            complex(-0.778637, 0.221654),
            complex(-0.144763, 0.0),
            complex(0.858505, 0.0),
        ]
        for got, want in zip(zs.roots, expected):
            assert abs(got.real - want.real) <= 1e-5
            assert abs(got.imag - want.imag) <= 1e-5
        assert not zs.all_real()

    def test_classical_quintic_table_row(self, hermite_cache):
        ctx = QContext(Fraction(1, 2))
        cache = hermite_cache(Fraction(1, 2), 5)
        zs = find_roots(ctx, cache.polys[5])
        expected = [-0.99938, -0.46063, 0.0, 0.46063, 0.99938]
        for got, want in zip(sorted(zs.real_roots()), expected):
            assert abs(got - want) <= 1e-4

    def test_zero_set_invariants(self, hermite_cache):
        ctx = QContext(Fraction(2, 3))
        cache = hermite_cache(Fraction(2, 3), 9)
        p = cache.polys[9].as_float()
        zs = find_roots(ctx, p)
        assert len(zs) == 9
        # Vieta: root sum equals minus the second-highest coefficient
        total = sum(zs.roots)
        assert abs(total - (-p.coeff(8))) <= 1e-8 * (1.0 + abs(total))
        # residual bound after polishing
        for z in zs.roots:
            bound = 1e-9 * (1.0 + p.max_abs()) * (1.0 + abs(z)) ** 9
            assert abs(p(z)) <= bound

    def test_deterministic(self):
        ctx = QContext(Fraction(3, 5))
        p = Poly((0.3, -1.2, 0.0, 2.0, 1.0))
        a = find_roots(ctx, p)
        b = find_roots(ctx, p)
        assert a.roots == b.roots


class TestCriticalMasses:
    def test_table1_values(self, hermite_cache):
        ctx = QContext(T1["q"])
        cache = hermite_cache(T1["q"], 10)
        lam0 = lambda0(ctx, cache, 7, 3, T1["alpha"])
        lam_a = lambda_alpha(ctx, cache, 7, 3, T1["alpha"])
        assert close(lam0 / 6.32464e-15, 1.0, 1e-3)
        assert close(lam_a / 5.24853e-12, 1.0, 1e-3)

    def test_table2_values_survive_cancellation(self, hermite_cache):
        # the reciprocal difference loses ~18 digits in doubles; the exact
        # rational path is what this asserts
        ctx = QContext(T2["q"])
        cache = hermite_cache(T2["q"], 12)
        lam0 = lambda0(ctx, cache, 10, 8, T2["alpha"])
        lam_a = lambda_alpha(ctx, cache, 10, 8, T2["alpha"])
        assert close(lam0 / 2.51880e-19, 1.0, 1e-3)
        assert close(lam_a / 4.76010e-17, 1.0, 1e-3)

    def test_zero_sits_on_endpoint_at_lambda0(self, hermite_cache):
        ctx = QContext(T1["q"])
        cache = hermite_cache(T1["q"], 10)
        lam0 = lambda0(ctx, cache, 7, 3, T1["alpha"])
        sc = build_sobolev(ctx, SobolevParams(T1["alpha"], Fraction(lam0), 3), 7)
        p = sc.polys[7].as_float()
        assert abs(p(-1.0)) <= 1e-7 * (1.0 + p.max_abs())

    def test_extreme_zero_reaches_alpha_at_lambda_alpha(self, hermite_cache):
        ctx = QContext(T1["q"])
        cache = hermite_cache(T1["q"], 10)
        lam_a = lambda_alpha(ctx, cache, 7, 3, T1["alpha"])
        sc = build_sobolev(ctx, SobolevParams(T1["alpha"], Fraction(lam_a), 3), 7)
        p = sc.polys[7].as_float()
        assert abs(p(-10.0)) <= 1e-7 * (1.0 + p.max_abs())
        _, _, zs = sobolev_zeros(T1, Fraction(lam_a))
        assert close(min(zs.real_roots()), -10.0, 1e-4)

    def test_trichotomy_around_lambda0(self, hermite_cache):
        ctx = QContext(T1["q"])
        cache = hermite_cache(T1["q"], 10)
        lam0 = Fraction(lambda0(ctx, cache, 7, 3, T1["alpha"]))
        _, _, below = sobolev_zeros(T1, lam0 / 2)
        assert below.all_real() and below.outside_count() == 0
        _, _, above = sobolev_zeros(T1, lam0 * 2)
        assert above.all_real() and above.outside_count() == 1
        assert min(above.real_roots()) < -1.0

    def test_domain_validation(self, hermite_cache):
        ctx = QContext(Fraction(3, 5))
        cache = hermite_cache(Fraction(3, 5), 8)
        with pytest.raises(ValueError):
            lambda0(ctx, cache, 5, 3, 2)  # q^3 * 2 = 0.432 inside (-1,1)
        with pytest.raises(ValueError):
            lambda0(ctx, cache, 3, 3, 10)  # n < j+1


class TestZeroTable:
    def test_lam_zero_column_recovers_classical(self, hermite_cache):
        ctx = QContext(T1["q"])
        cache = hermite_cache(T1["q"], 7)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            tables = zero_table(ctx, SobolevParams(T1["alpha"], 0, T1["j"]), 7, [0])
        classical = find_roots(ctx, cache.polys[7])
        for a, b in zip(tables[0].roots, classical.roots):
            assert abs(a - b) <= 1e-12

    def test_moving_zero_tracks_published_column(self):
        _, _, zs = sobolev_zeros(T1, Fraction(5, 10**13))
        assert close(min(zs.real_roots()), -4.21644, 1e-4)


class TestInterlacingChecks:
    def test_equal_sets_fail_strictness(self):
        vals = [0.1, 0.5, 0.9]
        assert not interlacing_check(vals, vals, "strict-alternation-left")

    def test_basic_alternation(self):
        a, b = [0.0, 1.0], [0.5, 1.5]
        assert interlacing_check(a, b, "strict-alternation-left")
        assert not interlacing_check(a, b, "strict-alternation-right")
        assert interlacing_check(b, a, "strict-alternation-right")

    def test_complex_inputs_rejected(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cfg = dict(q=Fraction(3, 5), alpha=Fraction(1, 4), j=2, n=4)
            _, _, zs = sobolev_zeros(cfg, 100)
        with pytest.raises(ValueError):
            interlacing_check(zs, [0.1, 0.2, 0.3, 0.4], "strict-alternation-left")

    def test_sobolev_vs_classical_patterns(self, hermite_cache):
        # left family: eta_1 < x_1 and x_i < eta_{i+1} < x_{i+1}
        ctx, cache, eta = sobolev_zeros(T1, Fraction(5, 10**13))
        classical = find_roots(ctx, cache.hermite.polys[7])
        assert interlacing_check(eta, classical, "strict-alternation-left")
        # right family at the interlacing-table configuration
        ctx4, cache4, eta4 = sobolev_zeros(T4, Fraction(1, 10**5))
        classical4 = find_roots(ctx4, cache4.hermite.polys[5])
        assert interlacing_check(eta4, classical4, "strict-alternation-right")

    def test_triple_chain_table3(self):
        ctx, cache, eta = sobolev_zeros(T3, Fraction(1, 10**20))
        g = limiting_polynomial(ctx, cache, 8)
        y = find_roots(ctx, g)
        x = find_roots(ctx, cache.hermite.polys[8])
        assert interlacing_check_triple(y, eta, x, "strict-alternation-left")

    def test_triple_chain_table4(self):
        ctx, cache, eta = sobolev_zeros(T4, Fraction(1, 10**9))
        g = limiting_polynomial(ctx, cache, 5)
        y = find_roots(ctx, g)
        x = find_roots(ctx, cache.hermite.polys[5])
        assert interlacing_check_triple(y, eta, x, "strict-alternation-right")


class TestLemmaProbe:
    def test_synthetic_cubics(self):
        ctx = QContext(Fraction(1, 2))
        p = Poly((-15.0, 23.0, -9.0, 1.0))   # roots 1, 3, 5
        qp = Poly((-5.625, 13.75, -7.5, 1.0))  # roots 0.5, 2.5, 4.5
        report = interlacing_lemma_probe(ctx, p, qp, [0.01, 0.1, 1.0, 10.0, 1e6])
        assert report.ok, report.issues
        for measured, target in zip(report.rates_measured, report.rates_target):
            assert abs(measured - target) <= 0.05 * abs(target)

    def test_small_c_continuity(self):
        ctx = QContext(Fraction(1, 2))
        p = Poly((-15.0, 23.0, -9.0, 1.0))
        qp = Poly((-5.625, 13.75, -7.5, 1.0))
        report = interlacing_lemma_probe(ctx, p, qp, [1e-8, 1e-4, 1.0, 1e6])
        assert report.ok
        assert report.eta[0] == pytest.approx([1.0, 3.0, 5.0], abs=1e-4)

    def test_hypothesis_violation_reported(self):
        ctx = QContext(Fraction(1, 2))
        p = Poly((-15.0, 23.0, -9.0, 1.0))
        report = interlacing_lemma_probe(ctx, p, p, [1.0])  # identical zeros
        assert not report.ok
        assert report.issues

    def test_classical_vs_limiting_pair(self):
        # p = H_8, qp = G_8 at the steep-attractor configuration; c = lam K
        ctx, cache, _ = sobolev_zeros(T3, Fraction(1, 10**20))
        g = limiting_polynomial(ctx, cache, 8).as_float()
        p = cache.hermite.polys[8].as_float()
        kjj = float(cache.kjj[8])
        cs = [lam * kjj for lam in (1e-21, 1e-20, 1e-19, 1e-15)]
        report = interlacing_lemma_probe(ctx, p, g, cs)
        # smallest zero falls as the mass grows
        firsts = [row[0] for row in report.eta]
        assert all(b <= a + 1e-9 for a, b in zip(firsts, firsts[1:]))
        assert not [i for i in report.issues if "interlace" in i], report.issues


class TestLimitRates:
    def test_rates_and_monotonicity_table4(self):
        ctx = QContext(T4["q"])
        params = SobolevParams(T4["alpha"], 1, T4["j"])

        def builder(lam):
            return build_sobolev(ctx, params.with_lam(Fraction(lam)), T4["n"])

        grid = [10.0**e for e in range(-2, 11)]
        report = limit_rate_check(ctx, builder, T4["n"], grid)
        assert report.ok, report.issues
        for measured, target in zip(report.rates_measured, report.rates_target):
            assert abs(measured - target) <= 0.05 * abs(target)

    def test_limit_equals_attractor_zeros(self):
        ctx, cache, eta = sobolev_zeros(T4, 10**12)
        g = limiting_polynomial(ctx, cache, 5)
        ys = sorted(find_roots(ctx, g).real_roots())
        for e, y in zip(sorted(eta.real_roots()), ys):
            assert abs(e - y) <= 1e-6 * (1.0 + abs(y))

    def test_grid_validation(self):
        ctx = QContext(T4["q"])
        params = SobolevParams(T4["alpha"], 1, T4["j"])

        def builder(lam):
            return build_sobolev(ctx, params.with_lam(Fraction(lam)), T4["n"])

        with pytest.raises(ValueError):
            limit_rate_check(ctx, builder, T4["n"], [1.0, 100.0])


class TestRealZeroTheorem:
    @pytest.mark.parametrize("cfg,lams", [
        (T1, (Fraction(1, 10**15), Fraction(1, 10**12), Fraction(1), Fraction(10**6))),
        (T4, (Fraction(1, 10**9), Fraction(1, 10**5), Fraction(5))),
    ])
    def test_all_real_at_most_one_outside(self, cfg, lams):
        ctx = QContext(cfg["q"])
        q_j_alpha = float(cfg["q"]) ** cfg["j"] * float(cfg["alpha"])
        for n in range(cfg["j"] + 1, cfg["n"] + 1):
            for lam in lams:
                _, _, zs = sobolev_zeros(cfg, lam, n=n)
                assert zs.all_real()
                assert zs.outside_count() <= 1
                for x in zs.real_roots():
                    if q_j_alpha < -1:
                        assert x < 1.0 + 1e-9  # exterior zero never in [1, inf)
                    else:
                        assert x > -1.0 - 1e-9
