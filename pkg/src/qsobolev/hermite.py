"""Discrete q-Hermite I polynomials and their orthogonality machinery.

The cache built here carries exact rational coefficients (q is stored as an
exact fraction inside QContext), which keeps every later identity check and
the severely cancellation-prone threshold computations honest.  Quadrature
weights and final inner-product values are doubles; node values of
polynomials are evaluated in integer arithmetic so that high-degree
orthogonality residuals are limited by the weight accuracy alone.
"""
from __future__ import annotations

from fractions import Fraction
from math import fsum, lcm
from typing import Callable, Sequence

from .context import ConvergenceError, QContext, as_fraction
from .poly import Poly, dq, dq_inv, dq_pow
from .qcore import _q_falling_factorial, _q_number, _q_pochhammer, q_pochhammer_inf


class HermiteCache:
    """H_0..H_N plus recurrence coefficients, norms and lattice weights.

    Immutable after construction apart from internal memo tables; safe to
    share across threads for reading.
    """

    def __init__(self, ctx: QContext, N: int):
        if N < 0:
            raise ValueError(f"cache size N must be >= 0, got {N}")
        self.ctx = ctx
        self.N = N
        q = ctx.q_exact
        # gamma_n = q^(n-1)(1 - q^n); gamma_0 = 0 so H_1 = x regardless.
        self.gammas = tuple(q ** (n - 1) * (1 - q**n) for n in range(N + 1))
        polys = [Poly.one()]
        prev, cur = Poly.zero(), Poly.one()
        for n in range(N):
            nxt = cur.shift_up() - prev.scale(self.gammas[n])
            polys.append(nxt)
            prev, cur = cur, nxt
        self.polys = tuple(polys)
        # (q; q)_n and reduced norms h_n = (q;q)_n q^(n(n-1)/2); the true
        # squared norm is W * h_n with W = (1-q)(q,-1,-q;q)_inf.
        qq = [Fraction(1)]
        for n in range(1, N + 1):
            qq.append(qq[-1] * (1 - q**n))
        self.qq = tuple(qq)
        self.h_red = tuple(qq[n] * q ** (n * (n - 1) // 2) for n in range(N + 1))
        qf = ctx.q
        self.w_factor = (1.0 - qf) * (
            q_pochhammer_inf(ctx, qf)
            * q_pochhammer_inf(ctx, -1.0)
            * q_pochhammer_inf(ctx, -qf)
        )
        self.w_exact = Fraction(self.w_factor)
        self.sq_norms = tuple(float(self.w_exact * h) for h in self.h_red)
        self._dq_memo: dict[tuple[int, int], Poly] = {}
        self._weights: list[float] = []
        self._weight_k0: int | None = None

    # -- memoised D_q powers of H_k (oracle building block) -------------

    def dq_hermite(self, k: int, i: int) -> Poly:
        key = (k, i)
        if key not in self._dq_memo:
            if i == 0:
                self._dq_memo[key] = self.polys[k]
            else:
                self._dq_memo[key] = dq(self.ctx, self.dq_hermite(k, i - 1))
        return self._dq_memo[key]

    def norm_exact(self, n: int) -> Fraction:
        return self.w_exact * self.h_red[n]

    # -- lattice weights w(q^k) = (q^{2k+2}; q^2)_inf --------------------

    def weight(self, k: int) -> float:
        if self._weight_k0 is None:
            q = self.ctx.q
            k0 = 0
            t = q * q
            while t >= self.ctx.eps_product:
                k0 += 1
                t *= q * q
                if k0 > self.ctx.max_terms:
                    raise ConvergenceError("weight ladder depth exceeds max_terms")
            ladder = [1.0] * (k0 + 1)
            q2 = self.ctx.q_exact**2
            for i in range(k0 - 1, -1, -1):
                ladder[i] = ladder[i + 1] * float(1 - q2 ** (i + 1))
            self._weights = ladder
            self._weight_k0 = k0
        return self._weights[k] if k < len(self._weights) else 1.0


def build_hermite(ctx: QContext, N: int) -> HermiteCache:
    """Build H_0..H_N by the three-term recurrence x H_n = H_{n+1} + gamma_n H_{n-1}."""
    return HermiteCache(ctx, N)


def hermite_via_phi21(ctx: QContext, n: int, x: float) -> float:
    """Evaluate H_n(x) through its terminating 2-phi-1 representation.

    The x^-1 upper parameter is never formed: (x^-1; q)_k x^k is expanded
    as prod_{i<k} (x - q^i), a polynomial in x that is fine at x = 0.
    """
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    q = ctx.q
    terms = [1.0]
    term = 1.0
    for k in range(n):
        # ratio of (q^-n; q)_{k+1}/(q^-n; q)_k etc., times (-q)(x - q^k)
        term *= (1.0 - q ** (k - n)) / (1.0 - q ** (k + 1)) * (-q) * (x - q**k)
        terms.append(term)
    return float(ctx.q_exact ** (n * (n - 1) // 2)) * fsum(terms)


def forward_shift(ctx: QContext, cache: HermiteCache, n: int, k: int) -> Poly:
    """D_q^k H_n via the closed form [n]_q^(k) H_{n-k}; zero when n < k."""
    if n < 0 or k < 0:
        raise ValueError("forward shift needs n, k >= 0")
    if n < k:
        return Poly.zero()
    if k == 0:
        return cache.polys[n]
    return cache.polys[n - k].scale(_q_falling_factorial(ctx.q_exact, n, k))


def qdiff_equation_residual(ctx: QContext, cache: HermiteCache, n: int, x: float) -> float:
    """Residual of the second-order q-difference equation at x.

    sigma D_q D_{1/q} H_n + tau D_q H_n + lam_n H_n with sigma = x^2 - 1,
    tau = x/(1-q) and lam_n = [n]_q ([1-n]_q - 1/(1-q)).
    """
    q = ctx.q
    h = cache.polys[n].as_float()
    lam = _q_number(q, n) * (_q_number(q, 1 - n) - 1.0 / (1.0 - q))
    second = dq(ctx, dq_inv(ctx, h))(x)
    first = dq(ctx, h)(x)
    return (x * x - 1.0) * second + x / (1.0 - q) * first + lam * h(x)


# -- Jackson quadrature -------------------------------------------------------

def _tail_sum(ctx: QContext, gen) -> float:
    """Sum terms from gen under the 8-consecutive-small-terms tail rule."""
    terms: list[float] = []
    acc = 0.0
    run = 0
    for count, t in enumerate(gen):
        if count > ctx.max_terms:
            raise ConvergenceError(
                f"Jackson sum did not settle within max_terms={ctx.max_terms}"
            )
        terms.append(t)
        mag = abs(t)
        small = (mag <= ctx.eps_sum * acc) if acc > 0.0 else (mag == 0.0)
        acc += mag
        run = run + 1 if small else 0
        if run >= 8:
            break
    return fsum(terms)


def jackson_integral(ctx: QContext, f: Callable[[float], float], a: float, b: float) -> float:
    """Jackson q-integral of a callable over [a, b] with a < 0 < b, a = 0 or b = 0.

    int_a^b = b(1-q) sum f(q^n b) q^n - a(1-q) sum f(q^n a) q^n, each tail
    truncated by the shared rule; terms are accumulated with exact (fsum)
    summation.
    """
    if not (a < 0.0 < b or a == 0.0 or b == 0.0):
        raise ValueError("bounds must satisfy a < 0 < b, or a = 0, or b = 0")
    if a >= b:
        raise ValueError(f"need a < b, got a={a!r}, b={b!r}")
    q = ctx.q
    total = 0.0

    def one_side(point: float, sign: float):
        scale = sign * (1.0 - q)
        node = point
        k = 0
        while True:
            yield scale * q**k * f(node)
            node *= q
            k += 1

    if b > 0.0:
        total += _tail_sum(ctx, one_side(b, b))
    if a < 0.0:
        total += _tail_sum(ctx, one_side(a, -a))
    return total


class _ExactPolyEval:
    """Integer-scaled evaluator of an exact polynomial on the q-lattice."""

    def __init__(self, p: Poly):
        fracs = [as_fraction(c) for c in p.coeffs]
        self.den_common = lcm(*(c.denominator for c in fracs)) if fracs else 1
        self.nums = [int(c * self.den_common) for c in fracs]
        self.deg = len(fracs) - 1

    def value_at(self, node_num: int, node_den: int) -> tuple[int, int]:
        """P(node_num/node_den) as an un-normalised integer fraction."""
        if self.deg < 0:
            return 0, 1
        acc = self.nums[self.deg]
        bp = 1
        for i in range(self.deg - 1, -1, -1):
            bp *= node_den
            acc = acc * node_num + self.nums[i] * bp
        return acc, self.den_common * bp


def weighted_inner(ctx: QContext, cache: HermiteCache, f: Poly, g: Poly) -> float:
    """<f, g> = int_{-1}^{1} f g (qx, -qx; q)_inf d_q x.

    Node values of the product polynomial are computed exactly (every float
    coefficient is a rational), so the result's accuracy is set by the
    precomputed weight ladder rather than by Horner cancellation; high
    degrees make the naive float path lose orthogonality entirely.
    """
    product = f.as_exact() * g.as_exact()
    if product.is_zero():
        return 0.0
    # f(q^k) + f(-q^k) = 2 * E(q^{2k}) with E the even part of the product.
    even = Poly(product.coeffs[0::2])
    if even.is_zero():
        return 0.0
    evaluator = _ExactPolyEval(even)
    q = ctx.q_exact
    a2, b2 = (q**2).numerator, (q**2).denominator
    a1, b1 = q.numerator, q.denominator
    one_minus_q_num = b1 - a1

    def gen():
        node_num, node_den = 1, 1  # (q^2)^k
        qk_num, qk_den = 1, 1  # q^k
        k = 0
        while True:
            vn, vd = evaluator.value_at(node_num, node_den)
            # term = 2 (1-q) q^k E((q^2)^k) w_k
            num = 2 * one_minus_q_num * qk_num * vn
            den = b1 * qk_den * vd
            yield (num / den) * cache.weight(k)
            node_num *= a2
            node_den *= b2
            qk_num *= a1
            qk_den *= b1
            k += 1

    return _tail_sum(ctx, gen())


def generating_function_check(
    ctx: QContext, cache: HermiteCache, x: float, t: float, K: int
) -> bool:
    """Compare sum_{n<=K} H_n(x) t^n/(q;q)_n against (t^2;q^2)_inf/(xt;q)_inf.

    True when the gap is within 1e-8 plus the geometric bound on the
    truncated tail.
    """
    if not (abs(t) < 1.0 and abs(x * t) < 1.0):
        raise ValueError("generating function check needs |t| < 1 and |xt| < 1")
    if K > cache.N:
        raise ValueError(f"cache holds degrees up to {cache.N}, asked for K={K}")
    ratios = [cache.polys[n].as_float()(x) / float(cache.qq[n]) for n in range(K + 1)]
    lhs = fsum(r * t**n for n, r in enumerate(ratios))
    rhs = q_pochhammer_inf(ctx, t * t, base=ctx.q**2) / q_pochhammer_inf(ctx, x * t)
    c_max = max(abs(r) for r in ratios)
    bound = 1e-8 + c_max * abs(t) ** (K + 1) / (1.0 - abs(t))
    return abs(lhs - rhs) <= bound
