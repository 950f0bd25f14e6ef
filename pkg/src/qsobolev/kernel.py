"""Reproducing kernels of the q-Hermite I family and their closed forms.

kernel_sum is the single source of truth: a finite sum of exact polynomial
products.  The Christoffel-Darboux quotient and the rational closed forms
(the A/B pair for K^(0,j) and the C/D pair for K^(1,j)) are verification
targets reconstructed from the product rule, never primary computation
paths.
"""
from __future__ import annotations

from fractions import Fraction

from .context import QContext, as_fraction
from .hermite import HermiteCache
from .poly import Poly, RatFn, jhc_subtraction_power, q_taylor_poly, ratfn_dq
from .qcore import _q_factorial, _q_number


def kernel_sum(ctx: QContext, cache: HermiteCache, n: int, i: int, j: int, y0) -> Poly:
    """K^(i,j)_n(x, y0) = sum_{k<=n} D_q^i H_k(x) D_q^j H_k(y0) / ||H_k||^2.

    Exact in the polynomial variable; K_(-1) is the zero polynomial.
    """
    if n < -1:
        raise ValueError(f"kernel index must be >= -1, got {n}")
    if i < 0 or j < 0:
        raise ValueError("derivative orders must be >= 0")
    if n > cache.N:
        raise ValueError(f"cache holds degrees up to {cache.N}, kernel needs {n}")
    y = as_fraction(y0)
    out = Poly.zero()
    for k in range(n + 1):
        scalar = cache.dq_hermite(k, j)(y) / cache.norm_exact(k)
        if scalar == 0:
            continue
        out = out + cache.dq_hermite(k, i).scale(scalar)
    return out


def kernel_value(ctx: QContext, cache: HermiteCache, n: int, i: int, j: int, x0, y0) -> Fraction:
    """Scalar K^(i,j)_n(x0, y0), exact."""
    return kernel_sum(ctx, cache, n, i, j, y0)(as_fraction(x0))


def kernel_value_reduced(
    ctx: QContext, cache: HermiteCache, n: int, i: int, j: int, x0, y0
) -> Fraction:
    """Kernel value with the common norm factor W stripped: W * K^(i,j)_n.

    The ratio quantities (limiting polynomial, critical masses) only ever
    need kernels up to this shared factor, and dropping it keeps their
    catastrophic-cancellation differences exactly rational.
    """
    x, y = as_fraction(x0), as_fraction(y0)
    total = Fraction(0)
    for k in range(n + 1):
        total += cache.dq_hermite(k, i)(x) * cache.dq_hermite(k, j)(y) / cache.h_red[k]
    return total


def christoffel_darboux(ctx: QContext, cache: HermiteCache, n: int, x: float, y: float) -> float:
    """(H_{n+1}(x) H_n(y) - H_{n+1}(y) H_n(x)) / ((x - y) ||H_n||^2), x != y."""
    if x == y:
        raise ValueError("Christoffel-Darboux quotient needs x != y")
    if n < 0:
        return 0.0
    hn = cache.polys[n].as_float()
    hn1 = cache.polys[n + 1].as_float()
    return (hn1(x) * hn(y) - hn1(y) * hn(x)) / ((x - y) * cache.sq_norms[n])


def closed_form_AB(
    ctx: QContext, cache: HermiteCache, n: int, j: int, alpha, exact: bool = False
) -> tuple[RatFn, RatFn]:
    """Rational coefficients with K^(0,j)_{n-1}(x, alpha) = A H_n + B H_{n-1}.

    Numerators are [j]_q! times the q-Taylor polynomials of degree j of
    H_{n-1} and H_n at alpha; the shared denominator is
    ||H_{n-1}||^2 (x [-]_q alpha)^(j+1).  exact=True keeps every
    coefficient rational (the norm enters through the one shared float
    factor carried by the cache).
    """
    if n < 1 or j < 0:
        raise ValueError("closed form needs n >= 1 and j >= 0")
    if exact:
        a = as_fraction(alpha)
        fact = _q_factorial(ctx.q_exact, j)
        norm = cache.norm_exact(n - 1)
        low, high = cache.polys[n - 1], cache.polys[n]
    else:
        a = float(alpha)
        fact = float(_q_factorial(ctx.q_exact, j))
        norm = cache.sq_norms[n - 1]
        low, high = cache.polys[n - 1].as_float(), cache.polys[n].as_float()
    den = jhc_subtraction_power(ctx, a, j + 1).scale(norm)
    num_a = q_taylor_poly(ctx, low, a, j).scale(fact)
    num_b = q_taylor_poly(ctx, high, a, j).scale(-fact)
    return RatFn(num_a, den), RatFn(num_b, den)


def closed_form_CD(
    ctx: QContext, cache: HermiteCache, n: int, j: int, alpha, exact: bool = False
) -> tuple[RatFn, RatFn]:
    """Rational coefficients with K^(1,j)_{n-1}(x, alpha) = C H_n + D H_{n-1}.

    Built from the product rule applied to the A/B identity, with D_q H_n
    and D_q H_{n-1} pushed back into the {H_n, H_{n-1}} basis through the
    forward shift and the recurrence.  The prefactor [n-1]_q / gamma_{n-1}
    is used in its cancelled form q^(2-n)/(1-q), which stays finite at n=1.

    Both results share the denominator (q-1) x d(x) d(qx), d being the
    A/B denominator; keeping one denominator object per pair stops the
    degree blow-up in the determinant algebra built on top.
    """
    if n < 1 or j < 0:
        raise ValueError("closed form needs n >= 1 and j >= 0")
    q = ctx.q_exact if exact else ctx.q
    A, B = closed_form_AB(ctx, cache, n, j, alpha, exact=exact)
    ratio = q ** (2 - n) / (1 - q)
    d, na, nb = A.den, A.num, B.num
    d_q, na_q, nb_q = d.scale_x(q), na.scale_x(q), nb.scale_x(q)
    shared_den = (d * d_q).shift_up().scale(q - 1)  # (q-1) x d(x) d(qx)
    x_d = d.shift_up()  # x d(x)
    c_num = na_q * d - na * d_q - (nb_q * x_d).scale(ratio * (q - 1))
    d_num = (
        (na_q * x_d).scale(_q_number(q, n) * (q - 1))
        + (nb_q * x_d.shift_up()).scale(ratio * (q - 1))
        + nb_q * d
        - nb * d_q
    )
    return RatFn(c_num, shared_den), RatFn(d_num, shared_den)
