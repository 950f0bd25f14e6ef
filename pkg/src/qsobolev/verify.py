"""Named identity suites over the kernel and Sobolev modules.

Each check clears denominators and compares polynomials coefficient-wise
with magnitude-scaled tolerances, so a pass is meaningful at any parameter
scale.  The CLI `verify` command prints one line per check; tests reuse the
same functions across wider parameter grids.
"""
from __future__ import annotations

from dataclasses import dataclass

from .context import QContext
from .kernel import closed_form_AB, closed_form_CD, kernel_sum
from .poly import Poly, RatFn, cleared_residual, coeffs_close, dq, jhc_subtraction_power
from .sobolev import (
    SobolevCache,
    dq_sobolev_connection,
    dqj_at_alpha_identity,
    hypergeometric_rep,
    ladder_apply,
    limiting_polynomial,
    long_recurrence_coeffs,
    sobolev_inner,
    theta,
    three_term_coeffs,
)

TOL_CONNECTION = 1e-9
TOL_RECURRENCE = 1e-8


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _residual_ok(terms, tol) -> tuple[bool, str]:
    residual, scale = cleared_residual(terms)
    bound = tol * (1.0 + scale)
    worst = residual.max_abs()
    return worst <= bound, f"residual {worst:.3e} vs bound {bound:.3e}"


def check_kernel_closed_forms(ctx: QContext, cache: SobolevCache, n: int) -> list[CheckResult]:
    """A/B and C/D closed forms against the kernel_sum oracle at degree n."""
    h = cache.hermite
    j = cache.params.j
    alpha = cache.params.alpha
    out = []
    hn = h.polys[n].as_float()
    hn1 = h.polys[n - 1].as_float()
    A, B = closed_form_AB(ctx, h, n, j, alpha)
    oracle0 = kernel_sum(ctx, h, n - 1, 0, j, alpha).as_float()
    ok, detail = _residual_ok(
        [(A, hn), (B, hn1), (RatFn.from_poly(-oracle0), Poly.one())], TOL_CONNECTION
    )
    out.append(CheckResult(f"kernel-AB[n={n}]", ok, detail))
    C, D = closed_form_CD(ctx, h, n, j, alpha)
    oracle1 = kernel_sum(ctx, h, n - 1, 1, j, alpha).as_float()
    ok, detail = _residual_ok(
        [(C, hn), (D, hn1), (RatFn.from_poly(-oracle1), Poly.one())], TOL_CONNECTION
    )
    out.append(CheckResult(f"kernel-CD[n={n}]", ok, detail))
    return out


def check_connection(ctx: QContext, cache: SobolevCache, n: int) -> list[CheckResult]:
    """The four E/F representations over {H_n, H_{n-1}} plus their determinants."""
    h = cache.hermite
    hn = h.polys[n].as_float()
    hn1 = h.polys[n - 1].as_float() if n >= 1 else Poly.zero()
    sn = cache.polys[n].as_float()
    sn1 = cache.polys[n - 1].as_float() if n >= 1 else Poly.zero()
    e1, f1 = cache.ef(1, n)
    e2, f2 = cache.ef(2, n)
    e3, f3 = cache.ef(3, n)
    e4, f4 = cache.ef(4, n)
    one = RatFn.from_poly(Poly.one())
    out = []
    for name, target, e, f in (
        ("ConexF-I", sn, e1, f1),
        ("ConexF-II", sn1, e2, f2),
        ("DqHS-E3F3", dq(ctx, sn), e3, f3),
        ("DqHS-E4F4", dq(ctx, sn1), e4, f4),
    ):
        ok, detail = _residual_ok(
            [(one, target), (-e, hn), (-f, hn1)], TOL_CONNECTION
        )
        out.append(CheckResult(f"{name}[n={n}]", ok, detail))
    t12 = theta(ctx, cache, 1, 2, n)
    ok, detail = _residual_ok(
        [(t12, hn), (-f2, sn), (f1, sn1)], TOL_CONNECTION
    )
    out.append(CheckResult(f"ConexF-III[n={n}]", ok, detail))
    ok, detail = _residual_ok(
        [(t12, hn1), (e2, sn), (-e1, sn1)], TOL_CONNECTION
    )
    out.append(CheckResult(f"ConexF-IV[n={n}]", ok, detail))
    return out


def check_dq_connection(ctx: QContext, cache: SobolevCache, n: int) -> CheckResult:
    """Corollary form of D_q S_n against the operator applied to the cache."""
    assembled = dq_sobolev_connection(ctx, cache, n).as_float()
    direct = dq(ctx, cache.polys[n].as_float())
    ok = coeffs_close(assembled, direct, TOL_CONNECTION)
    return CheckResult(f"Dq-connection[n={n}]", ok)


def check_structure_and_ladders(ctx: QContext, cache: SobolevCache, n: int) -> list[CheckResult]:
    sn = cache.polys[n].as_float()
    sn1 = cache.polys[n - 1].as_float() if n >= 1 else Poly.zero()
    t12 = theta(ctx, cache, 1, 2, n)
    t32 = theta(ctx, cache, 3, 2, n)
    t13 = theta(ctx, cache, 1, 3, n)
    t42 = theta(ctx, cache, 4, 2, n)
    t14 = theta(ctx, cache, 1, 4, n)
    out = []
    ok, detail = _residual_ok(
        [(t12, dq(ctx, sn)), (-t32, sn), (-t13, sn1)], TOL_RECURRENCE
    )
    out.append(CheckResult(f"structure-1[n={n}]", ok, detail))
    ok, detail = _residual_ok(
        [(t12, dq(ctx, sn1)), (-t42, sn), (-t14, sn1)], TOL_RECURRENCE
    )
    out.append(CheckResult(f"structure-2[n={n}]", ok, detail))
    lower = ladder_apply(ctx, cache, n, "lowering", cache.polys[n])
    ok, detail = _residual_ok(
        [(lower, Poly.one()), (-t13, sn1)], TOL_RECURRENCE
    )
    out.append(CheckResult(f"ladder-lowering[n={n}]", ok, detail))
    raise_ = ladder_apply(ctx, cache, n, "raising", cache.polys[n - 1] if n >= 1 else Poly.zero())
    ok, detail = _residual_ok(
        [(raise_, Poly.one()), (-t42, sn)], TOL_RECURRENCE
    )
    out.append(CheckResult(f"ladder-raising[n={n}]", ok, detail))
    return out


def check_three_term(ctx: QContext, cache: SobolevCache, n: int) -> CheckResult:
    a, b, c = three_term_coeffs(ctx, cache, n)
    sn1 = cache.polys[n + 1].as_float()
    sn = cache.polys[n].as_float()
    snm = cache.polys[n - 1].as_float() if n >= 1 else Poly.zero()
    ok, detail = _residual_ok(
        [(a, sn1), (-b, sn), (-c, snm)], TOL_RECURRENCE
    )
    return CheckResult(f"three-term-recurrence[n={n}]", ok, detail)


def check_long_recurrence(ctx: QContext, cache: SobolevCache, n: int) -> CheckResult:
    j = cache.params.j
    d = long_recurrence_coeffs(ctx, cache, n)
    lhs = (jhc_subtraction_power(ctx, cache.params.alpha_exact, j + 1) * cache.polys[n]).as_float()
    rhs = Poly.zero()
    for nu, coef in d.items():
        rhs = rhs + cache.polys[nu].as_float().scale(coef)
    ok = coeffs_close(lhs, rhs, 1e-8)
    top_ok = abs(d[n + j + 1] - 1.0) <= 1e-10
    bottom_ok = (n - j - 1 < 0) or d[n - j - 1] > 0.0
    detail = f"d[top]={d[n + j + 1]!r}"
    return CheckResult(f"long-recurrence[n={n}]", ok and top_ok and bottom_ok, detail)


def check_dqj_alpha(ctx: QContext, cache: SobolevCache, n: int) -> CheckResult:
    lhs, rhs = dqj_at_alpha_identity(ctx, cache, n)
    ok = abs(lhs - rhs) <= 1e-9 * (1.0 + abs(rhs))
    return CheckResult(f"Dqj-at-alpha[n={n}]", ok, f"lhs={lhs!r} rhs={rhs!r}")


def check_hinterlacing(ctx: QContext, cache: SobolevCache, n: int) -> CheckResult:
    """Normalised identity (1 + lam K) S_n = H_n + lam K G_n."""
    lamk = cache.params.lam_exact * cache.kjj[n]
    lhs = cache.polys[n].scale(1 + lamk)
    rhs = cache.hermite.polys[n] + limiting_polynomial(ctx, cache, n).scale(lamk)
    ok = coeffs_close(lhs.as_float(), rhs.as_float(), TOL_CONNECTION)
    return CheckResult(f"normalised-identity[n={n}]", ok)


def check_hypergeometric(ctx: QContext, cache: SobolevCache, n: int, xs) -> CheckResult:
    worst = 0.0
    evaluated = 0
    for x in xs:
        try:
            via_series = hypergeometric_rep(ctx, cache, n, x)
        except ValueError:
            continue  # inside a guard zone; try the next sample point
        evaluated += 1
        direct = cache.polys[n].as_float()(x)
        gap = abs(via_series - direct) / (1.0 + abs(direct))
        worst = max(worst, gap)
    ok = evaluated > 0 and worst <= 1e-8
    return CheckResult(
        f"hypergeometric-rep[n={n}]", ok, f"worst gap {worst:.3e} over {evaluated} points"
    )


def check_orthogonality(ctx: QContext, cache: SobolevCache, upto: int) -> CheckResult:
    norms = [sobolev_inner(ctx, cache, p, p) for p in cache.polys[: upto + 1]]
    worst = 0.0
    for m in range(upto + 1):
        for n in range(m):
            val = abs(sobolev_inner(ctx, cache, cache.polys[m], cache.polys[n]))
            bound = 1e-8 * (norms[m] * norms[n]) ** 0.5
            worst = max(worst, val / bound if bound > 0 else float("inf"))
    return CheckResult(f"orthogonality[m,n<={upto}]", worst <= 1.0, f"worst ratio {worst:.3e}")


def run_suite(ctx: QContext, cache: SobolevCache, n_max: int | None = None) -> list[CheckResult]:
    """Identity suite across degrees; n_max defaults to the cache size minus one."""
    top = cache.N - 1 if n_max is None else n_max
    results: list[CheckResult] = []
    for n in range(1, top + 1):
        results.extend(check_kernel_closed_forms(ctx, cache, n))
        results.extend(check_connection(ctx, cache, n))
        results.append(check_dq_connection(ctx, cache, n))
        results.extend(check_structure_and_ladders(ctx, cache, n))
        if n + 1 <= cache.N:
            results.append(check_three_term(ctx, cache, n))
        results.append(check_dqj_alpha(ctx, cache, n))
        if n > cache.params.j:
            results.append(check_hinterlacing(ctx, cache, n))
            if cache.params.lam > 0:
                results.append(check_hypergeometric(ctx, cache, n, (0.37, -0.61)))
    mid = min(top, max(1, top // 2))
    if mid + cache.params.j + 1 <= cache.N:
        results.append(check_long_recurrence(ctx, cache, mid))
    results.append(check_orthogonality(ctx, cache, min(top, 6)))
    return results
