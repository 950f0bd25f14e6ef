"""Scalar q-calculus primitives.

q-numbers, q-factorials, finite and infinite q-Pochhammer symbols,
q-binomials, q-falling factorials and basic hypergeometric series.

Public functions take a QContext and work in double precision.  The
underscore-prefixed twins are parameterised directly on q so that other
modules can run the same formulas in exact rational arithmetic.
"""
from __future__ import annotations

from math import fsum
from typing import Sequence

from .context import ConvergenceError, QContext


class PoleError(ValueError):
    """A lower hypergeometric parameter hits q^-m inside the summation range."""


# -- generic kernels (q may be a float or a Fraction) -----------------------

def _q_number(q, n: int):
    if n == 0:
        return 0 * q
    return (1 - q**n) / (1 - q)


def _q_factorial(q, n: int):
    if n < 0:
        raise ValueError(f"q-factorial needs n >= 0, got {n}")
    out = 1 + 0 * q
    for k in range(1, n + 1):
        out *= _q_number(q, k)
    return out


def _q_pochhammer(q, a, n: int):
    if n < 0:
        raise ValueError(f"q-Pochhammer needs n >= 0, got {n}")
    out = 1 + 0 * q
    power = 1 + 0 * q
    for _ in range(n):
        out *= 1 - a * power
        power *= q
    return out


def _q_binomial(q, n: int, k: int):
    if n < 0:
        raise ValueError(f"q-binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0 * q
    # (q;q)_n / ((q;q)_k (q;q)_{n-k}), taken as a factor-by-factor ratio
    # to stay exact for rational q and stable for float q.
    out = 1 + 0 * q
    for i in range(1, k + 1):
        out *= (1 - q ** (n - k + i)) / (1 - q**i)
    return out


def _q_falling_factorial(q, s: int, n: int):
    # Equals (q^-s; q)_n (q-1)^-n q^(ns - n(n-1)/2); the product of
    # q-numbers below is the same quantity without the 0/0 hazards.
    if n < 0:
        raise ValueError(f"q-falling factorial needs n >= 0, got {n}")
    out = 1 + 0 * q
    for i in range(n):
        out *= _q_number(q, s - i)
    return out


# -- public context-based API ------------------------------------------------

def q_number(ctx: QContext, n: int) -> float:
    """[n]_q = (1 - q^n)/(1 - q), defined for every integer n."""
    return float(_q_number(ctx.q, n))


def q_factorial(ctx: QContext, n: int) -> float:
    """[n]_q! with [0]_q! = 1."""
    return float(_q_factorial(ctx.q, n))


def q_pochhammer(ctx: QContext, a: float, n: int) -> float:
    """(a; q)_n, the finite shifted factorial."""
    return float(_q_pochhammer(ctx.q, a, n))


def q_pochhammer_inf(ctx: QContext, a: float, base: float | None = None) -> float:
    """(a; base)_inf as a truncated product.

    The product is cut at the first index N with |a| base^N < eps_product,
    leaving a relative tail of roughly |a| base^(N+1) / (1 - base).
    `base` defaults to ctx.q; pass ctx.q**2 for (a; q^2)_inf-type factors.
    """
    b = ctx.q if base is None else float(base)
    if not 0.0 < b < 1.0:
        raise ValueError(f"product base must lie in (0, 1), got {b!r}")
    if a == 0.0:
        return 1.0
    out = 1.0
    tail = abs(a)
    for j in range(ctx.max_terms + 1):
        out *= 1.0 - a * b**j
        if tail < ctx.eps_product:
            return out
        tail *= b
    raise ConvergenceError(
        f"(a;q)_inf truncation needs more than max_terms={ctx.max_terms} factors "
        f"for a={a!r}, base={b!r}; eps_product={ctx.eps_product!r} is too small"
    )


def q_pochhammer_inf_multi(ctx: QContext, args: Sequence[float], base: float | None = None) -> float:
    """(a1, ..., ar; base)_inf = prod of (a_i; base)_inf."""
    out = 1.0
    for a in args:
        out *= q_pochhammer_inf(ctx, a, base=base)
    return out


def q_binomial(ctx: QContext, n: int, k: int) -> float:
    """Gaussian binomial coefficient; 0 outside 0 <= k <= n."""
    return float(_q_binomial(ctx.q, n, k))


def q_falling_factorial(ctx: QContext, s: int, n: int) -> float:
    """[s]_q^(n) = [s]_q [s-1]_q ... [s-n+1]_q, with [s]_q^(0) = 1."""
    return float(_q_falling_factorial(ctx.q, s, n))


def basic_hypergeometric(
    ctx: QContext,
    upper: Sequence[float],
    lower: Sequence[float],
    z: float,
    max_k: int,
) -> float:
    """Partial sum of the r-phi-s basic hypergeometric series.

    Sums k = 0..max_k of
        (a1..ar; q)_k / (b1..bs; q)_k * ((-1)^k q^(k(k-1)/2))^(1+s-r)
        * z^k / (q; q)_k.
    Callers evaluating a terminating series pass max_k = n.  A lower
    parameter of 0 contributes (0; q)_k = 1 and needs no special casing.
    """
    if max_k < 0:
        raise ValueError(f"max_k must be >= 0, got {max_k}")
    q = ctx.q
    for idx, b in enumerate(lower):
        if b == 0.0:
            continue
        power = 1.0
        for m in range(max_k):
            if abs(b * power - 1.0) <= 1e-12 * max(1.0, abs(b * power)):
                raise PoleError(
                    f"lower parameter #{idx} = {b!r} equals q^-{m}: "
                    f"(b;q)_k vanishes for k > {m} inside the summation range"
                )
            power *= q
    exponent = 1 + len(lower) - len(upper)
    terms = [1.0]
    term = 1.0
    for k in range(max_k):
        factor = 1.0
        qk = q**k
        for a in upper:
            factor *= 1.0 - a * qk
        for b in lower:
            factor /= 1.0 - b * qk
        factor /= 1.0 - q ** (k + 1)
        factor *= z
        if exponent:
            factor *= (-qk) ** exponent
        term *= factor
        terms.append(term)
    return fsum(terms)
