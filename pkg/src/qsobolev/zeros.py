"""Zero finding and zero-behaviour analysis for the Sobolev family.

Aberth-Ehrlich simultaneous iteration with deterministic initial points and
a single Newton polish gives reproducible spectra; the critical masses are
evaluated through exact rational kernel differences because their defining
expressions cancel up to eighteen leading digits at the paper's scales.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .context import QContext, as_fraction
from .hermite import HermiteCache
from .kernel import kernel_value_reduced
from .poly import Poly
from .qcore import _q_falling_factorial
from .sobolev import SobolevCache, SobolevParams, build_sobolev, limiting_polynomial


class RootFindingError(RuntimeError):
    """Aberth iteration hit its cap; carries the best iterate and residuals."""

    def __init__(self, message: str, roots, residuals):
        super().__init__(message)
        self.roots = roots
        self.residuals = residuals


REAL_TOL = 1e-8
BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class ZeroSet:
    """Zeros of one polynomial with location flags.

    is_real uses |Im| <= 1e-8 (1 + |Re|); real zeros within 1e-9 of the
    interval endpoints are flagged on_boundary instead of inside/outside,
    and beyond_alpha marks real zeros strictly past the mass point on the
    far side of the orthogonality interval.
    """

    roots: tuple
    alpha: float | None = None
    is_real: tuple = field(init=False, compare=False)
    inside_interval: tuple = field(init=False, compare=False)
    on_boundary: tuple = field(init=False, compare=False)
    beyond_alpha: tuple = field(init=False, compare=False)

    def __post_init__(self) -> None:
        real_flags, inside, boundary, beyond = [], [], [], []
        a = self.alpha
        for z in self.roots:
            is_real = abs(z.imag) <= REAL_TOL * (1.0 + abs(z.real))
            real_flags.append(is_real)
            x = z.real
            on_b = is_real and abs(abs(x) - 1.0) <= BOUNDARY_TOL
            boundary.append(on_b)
            inside.append(is_real and not on_b and abs(x) < 1.0)
            if a is None or not is_real or -1.0 < a < 1.0:
                beyond.append(False)
            else:
                tol_b = 1e-9 * (1.0 + abs(a))
                beyond.append(x < a - tol_b if a <= -1.0 else x > a + tol_b)
        object.__setattr__(self, "is_real", tuple(real_flags))
        object.__setattr__(self, "inside_interval", tuple(inside))
        object.__setattr__(self, "on_boundary", tuple(boundary))
        object.__setattr__(self, "beyond_alpha", tuple(beyond))

    def __len__(self) -> int:
        return len(self.roots)

    def all_real(self) -> bool:
        return all(self.is_real)

    def real_roots(self) -> list[float]:
        return [z.real for z, r in zip(self.roots, self.is_real) if r]

    def outside_count(self) -> int:
        """Real zeros strictly outside [-1, 1] (boundary hits not counted)."""
        return sum(
            1
            for z, r, b in zip(self.roots, self.is_real, self.on_boundary)
            if r and not b and abs(z.real) > 1.0
        )


def _horner_many(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full_like(z, coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def find_roots(ctx: QContext, p: Poly, alpha: float | None = None) -> ZeroSet:
    """All complex roots by Aberth-Ehrlich simultaneous iteration.

    Deterministic initial points sit on the circle of radius
    1 + max |c_i / c_deg|, at equispaced angles offset by half a step plus
    a fixed phase that breaks conjugate symmetry.  Convergence requires
    every correction to fall below 1e-13 (1 + |root|); 500 iterations at
    most, then one Newton polish per root.  Output is sorted by (Re, Im).
    """
    coeffs = np.array([float(c) for c in p.coeffs], dtype=float)
    deg = len(coeffs) - 1
    if deg < 1:
        raise ValueError("root finding needs degree >= 1")
    monic = coeffs / coeffs[-1]
    dcoeffs = monic[1:] * np.arange(1, deg + 1)
    radius = 1.0 + float(np.max(np.abs(monic[:-1])))
    # Half-step offset alone leaves the start conjugate-symmetric, and the
    # simultaneous iteration preserves that symmetry, stalling on real
    # polynomials whose root count differs from the symmetric pairing
    # (H_3 cycles indefinitely).  The extra fixed phase breaks it while
    # keeping the start deterministic.
    angles = 2.0 * np.pi * (np.arange(deg) + 0.5) / deg + 0.43
    z = radius * np.exp(1j * angles)
    converged = False
    for _ in range(500):
        pz = _horner_many(monic, z)
        dpz = _horner_many(dcoeffs, z)
        dpz = np.where(dpz == 0, 1e-300, dpz)
        newton = pz / dpz
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv_sum = (1.0 / diff).sum(axis=1) - 1.0  # remove the diagonal 1/1
        denom = 1.0 - newton * inv_sum
        w = np.where(denom == 0, newton, newton / denom)
        z = z - w
        if np.all(np.abs(w) <= 1e-13 * (1.0 + np.abs(z))):
            converged = True
            break
    if not converged:
        res = np.abs(_horner_many(monic, z))
        raise RootFindingError(
            f"Aberth iteration did not converge within 500 steps (degree {deg})",
            roots=tuple(z),
            residuals=tuple(res),
        )
    pz = _horner_many(monic, z)
    dpz = _horner_many(dcoeffs, z)
    dpz = np.where(dpz == 0, 1e-300, dpz)
    z = z - pz / dpz
    order = np.lexsort((z.imag, z.real))
    return ZeroSet(tuple(complex(v) for v in z[order]), alpha=alpha)


# -- critical masses ----------------------------------------------------------

def _validated_direction(ctx: QContext, n: int, j: int, alpha) -> int:
    if j < 1:
        raise ValueError(f"derivative order j must be >= 1, got {j}")
    if n < j + 1:
        raise ValueError(f"critical masses need n >= j+1, got n={n}, j={j}")
    qa = ctx.q_exact**j * as_fraction(alpha)
    if -1 < qa < 1:
        raise ValueError(
            f"q^j alpha = {float(qa)!r} lies inside (-1, 1); the zero-location "
            "corollaries do not apply"
        )
    return -1 if qa < 0 else 1


def _critical_mass(ctx: QContext, cache: HermiteCache, n: int, j: int, alpha, point) -> float:
    """W / ([n]^(j) H_{n-j}(a) K~^(0,j)(point, a) / H_n(point) - K~^(j,j)(a, a)).

    K~ are the norm-factor-stripped kernels, so the difference is an exact
    rational; the paper's Table-2 scale loses ~18 digits to cancellation in
    plain doubles.
    """
    a = as_fraction(alpha)
    pt = as_fraction(point)
    fall = _q_falling_factorial(ctx.q_exact, n, j)
    k0 = kernel_value_reduced(ctx, cache, n - 1, 0, j, pt, a)
    kjj = kernel_value_reduced(ctx, cache, n - 1, j, j, a, a)
    hn_pt = cache.polys[n](pt)
    if hn_pt == 0:
        raise ZeroDivisionError("H_n vanishes at the evaluation point")
    delta = fall * cache.polys[n - j](a) * k0 / hn_pt - kjj
    if delta <= 0:
        raise ArithmeticError(
            f"critical-mass denominator is not positive ({float(delta)!r}); "
            "configuration outside the corollary's domain"
        )
    return cache.w_factor / float(delta)


def lambda0(ctx: QContext, cache: HermiteCache, n: int, j: int, alpha) -> float:
    """Mass at which a zero of the Sobolev polynomial sits exactly at -1 or +1.

    The endpoint is -1 when q^j alpha < -1 and +1 when q^j alpha > 1.
    """
    direction = _validated_direction(ctx, n, j, alpha)
    return _critical_mass(ctx, cache, n, j, alpha, Fraction(direction))


def lambda_alpha(ctx: QContext, cache: HermiteCache, n: int, j: int, alpha) -> float:
    """Mass at which the extreme zero of the Sobolev polynomial reaches alpha."""
    _validated_direction(ctx, n, j, alpha)
    return _critical_mass(ctx, cache, n, j, alpha, as_fraction(alpha))


def zero_table(
    ctx: QContext, params_base: SobolevParams, n: int, lambdas: Sequence
) -> list[ZeroSet]:
    """Zero sets of the degree-n Sobolev polynomial across a list of masses."""
    out = []
    for lam in lambdas:
        cache = build_sobolev(ctx, params_base.with_lam(lam), n)
        out.append(find_roots(ctx, cache.polys[n], alpha=params_base.alpha))
    return out


# -- interlacing --------------------------------------------------------------

def _real_sorted(values) -> list[float]:
    if isinstance(values, ZeroSet):
        if not values.all_real():
            raise ValueError("complex zeros present; interlacing needs real spectra")
        out = values.real_roots()
    else:
        out = [float(v) for v in values]
    return sorted(out)


def interlacing_check(a, b, mode: str, tol: float = 1e-12) -> bool:
    """Strict pairwise alternation of two equal-cardinality real zero sets.

    'strict-alternation-left':  a1 < b1 < a2 < b2 < ... (a sits left);
    'strict-alternation-right': b1 < a1 < b2 < a2 < ... (a sits right).
    Every inequality must hold with a gap above tol.
    """
    xs, ys = _real_sorted(a), _real_sorted(b)
    if len(xs) != len(ys):
        raise ValueError(f"zero sets differ in cardinality: {len(xs)} vs {len(ys)}")
    if mode in ("strict-alternation-left", "left"):
        chain = [v for pair in zip(xs, ys) for v in pair]
    elif mode in ("strict-alternation-right", "right"):
        chain = [v for pair in zip(ys, xs) for v in pair]
    else:
        raise ValueError(f"unknown interlacing mode {mode!r}")
    return all(chain[i + 1] - chain[i] > tol for i in range(len(chain) - 1))


def interlacing_check_triple(lower, middle, upper, mode: str, tol: float = 1e-12) -> bool:
    """Full three-family chain from the interlacing theorem.

    left  (q^j alpha < -1): y1 < e1 < x1 < y2 < e2 < x2 < ...
    right (q^j alpha > +1): x1 < e1 < y1 < x2 < e2 < y2 < ...
    with y = lower-family zeros (the lam -> infinity attractors), e = middle
    (Sobolev), x = upper (classical); strictness above tol throughout.
    """
    ys, es, xs = _real_sorted(lower), _real_sorted(middle), _real_sorted(upper)
    if not len(ys) == len(es) == len(xs):
        raise ValueError("interlacing triple needs equal cardinalities")
    if mode in ("strict-alternation-left", "left"):
        chain = [v for triple in zip(ys, es, xs) for v in triple]
    elif mode in ("strict-alternation-right", "right"):
        chain = [v for triple in zip(xs, es, ys) for v in triple]
    else:
        raise ValueError(f"unknown interlacing mode {mode!r}")
    return all(chain[i + 1] - chain[i] > tol for i in range(len(chain) - 1))


# -- linear-combination zero dynamics ------------------------------------------

@dataclass
class LemmaProbeReport:
    """Outcome of probing f = p + c q across a grid of positive c."""

    ok: bool
    issues: list[str]
    c_values: tuple
    eta: list[list[float]]
    rates_measured: list[float]
    rates_target: list[float]


def interlacing_lemma_probe(
    ctx: QContext, p: Poly, qp: Poly, c_values: Sequence[float]
) -> LemmaProbeReport:
    """Check the interlacing-lemma claims for p + c qp over ascending c > 0.

    Hypotheses (positive leading coefficients, real simple zeros of p and qp
    interlacing as y1 < x1 < ... < yn < xn) are validated first and reported
    as issues rather than silently ignored.  For each c the combined zeros
    must satisfy y_k < eta_k < x_k and fall monotonically in c; at the
    largest c the scaled gaps c (eta_k - y_k) must match -p(y_k)/qp'(y_k)
    within 5 percent.
    """
    issues: list[str] = []
    pf, qf = p.as_float(), qp.as_float()
    if pf.coeffs[-1] <= 0 or qf.coeffs[-1] <= 0:
        issues.append("leading coefficients must be positive")
    xs = _real_sorted(find_roots(ctx, pf))
    ys = _real_sorted(find_roots(ctx, qf))
    if len(xs) != pf.degree or len(ys) != qf.degree or pf.degree != qf.degree:
        issues.append("p and qp must have equal degree with all-real zeros")
    else:
        chain = [v for pair in zip(ys, xs) for v in pair]
        if not all(chain[i + 1] > chain[i] for i in range(len(chain) - 1)):
            issues.append("zeros of qp must interlace below the zeros of p")
    cs = [float(c) for c in c_values]
    if any(c <= 0 for c in cs) or list(cs) != sorted(cs):
        issues.append("c grid must be positive and ascending")
    eta: list[list[float]] = []
    rates_measured: list[float] = []
    rates_target: list[float] = []
    if not issues:
        prev = None
        for c in cs:
            combo = pf + qf.scale(c)
            zs = find_roots(ctx, combo)
            if not zs.all_real():
                issues.append(f"combination at c={c!r} has complex zeros")
                break
            cur = _real_sorted(zs)
            eta.append(cur)
            for k, e in enumerate(cur):
                if not ys[k] < e < xs[k]:
                    issues.append(f"zero {k + 1} at c={c!r} leaves (y_k, x_k)")
            if prev is not None:
                slack = [1e-9 * (1.0 + abs(e)) for e in cur]
                if any(cur[k] > prev[k] + slack[k] for k in range(len(cur))):
                    issues.append(f"zero trajectory not non-increasing at c={c!r}")
            prev = cur
        if eta:
            c_last = cs[-1]
            dq_ord = qf.derivative()
            for k, y in enumerate(ys):
                target = -pf(y) / dq_ord(y)
                measured = c_last * (eta[-1][k] - y)
                rates_measured.append(measured)
                rates_target.append(target)
                if abs(measured - target) > 0.05 * abs(target):
                    issues.append(
                        f"rate mismatch at zero {k + 1}: c(eta-y)={measured!r} "
                        f"vs -p(y)/qp'(y)={target!r}"
                    )
    return LemmaProbeReport(not issues, issues, tuple(cs), eta, rates_measured, rates_target)


def _newton_refine_exact(p: Poly, x0: float, steps: int = 2) -> Fraction:
    """Newton-polish a simple root of an exact polynomial in rational arithmetic.

    Two steps from a double-precision estimate give ~60 correct digits,
    enough to resolve zero gaps far below one double ulp.
    """
    pe = p.as_exact()
    dpe = pe.derivative()
    x = Fraction(x0)
    for _ in range(steps):
        x = x - pe(x) / dpe(x)
    return x


@dataclass
class LimitRateReport:
    """lam -> infinity behaviour of the Sobolev zeros against the attractor."""

    ok: bool
    issues: list[str]
    attractor_zeros: list[float]
    eta_by_lambda: list[list[float]]
    rates_measured: list[float]
    rates_target: list[float]


def limit_rate_check(
    ctx: QContext,
    sobolev_builder: Callable[[float], SobolevCache],
    n: int,
    lambda_grid: Sequence[float],
) -> LimitRateReport:
    """Verify monotone convergence of zeros to the limiting polynomial's zeros.

    The grid must ascend and reach at least 1e10.  At its top, the gap of
    each zero to its attractor, scaled by the effective mass
    lam * K^(j,j)_{n-1}(alpha, alpha), must match -H_n(y_l)/G'_n(y_l)
    within 5 percent.  (That mass is the coefficient the normalised
    identity places in front of G_n, so it is the variable in which the
    interlacing lemma's limit statement applies; the gaps themselves
    shrink like 1/(lam K), far below one double ulp, and are therefore
    measured by rational Newton refinement of both roots.)  Zeros must
    move monotonically, falling when q^j alpha < -1 and rising when
    q^j alpha > 1.
    """
    issues: list[str] = []
    lams = [float(v) for v in lambda_grid]
    if list(lams) != sorted(lams) or lams[-1] < 1e10:
        raise ValueError("lambda grid must ascend and reach at least 1e10")
    cache = sobolev_builder(lams[-1])
    qa = ctx.q_exact ** cache.params.j * cache.params.alpha_exact
    if -1 < qa < 1:
        raise ValueError("limit rates need q^j alpha outside (-1, 1)")
    decreasing = qa < -1
    g = limiting_polynomial(ctx, cache, n)
    ys = _real_sorted(find_roots(ctx, g))
    if len(ys) != n:
        issues.append("limiting polynomial has complex zeros")
    hn = cache.hermite.polys[n].as_float()
    g_prime = g.as_float().derivative()
    eta_by_lambda: list[list[float]] = []
    prev = None
    top_cache = cache
    for lam in lams:
        lam_cache = sobolev_builder(lam)
        zs = find_roots(ctx, lam_cache.polys[n])
        if not zs.all_real():
            issues.append(f"complex zeros at lam={lam!r}")
            break
        cur = _real_sorted(zs)
        eta_by_lambda.append(cur)
        if prev is not None:
            for k in range(len(cur)):
                slack = 1e-9 * (1.0 + abs(cur[k]))
                drift = cur[k] - prev[k]
                if decreasing and drift > slack:
                    issues.append(f"zero {k + 1} rose at lam={lam!r} in decreasing mode")
                if not decreasing and drift < -slack:
                    issues.append(f"zero {k + 1} fell at lam={lam!r} in increasing mode")
        prev = cur
        top_cache = lam_cache
    rates_measured: list[float] = []
    rates_target: list[float] = []
    if not issues and eta_by_lambda:
        mass = top_cache.params.lam_exact * top_cache.kjj[n]
        for k, y in enumerate(ys):
            target = -hn(y) / g_prime(y)
            eta_exact = _newton_refine_exact(top_cache.polys[n], eta_by_lambda[-1][k])
            y_exact = _newton_refine_exact(g, y)
            measured = float(mass * (eta_exact - y_exact))
            rates_measured.append(measured)
            rates_target.append(target)
            if abs(measured - target) > 0.05 * abs(target):
                issues.append(
                    f"rate mismatch at zero {k + 1}: lam K (eta-y)={measured!r} "
                    f"vs -H_n(y)/G'(y)={target!r}"
                )
    return LimitRateReport(not issues, issues, ys, eta_by_lambda, rates_measured, rates_target)
