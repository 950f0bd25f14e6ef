"""Dense polynomials, rational functions, and the Euler-Jackson operator.

Coefficients are plain Python numbers: floats for fast verification work,
Fractions when a computation has to stay exact.  Operations never mix a
tolerance into the algebra itself; comparisons live in the *_close helpers.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import frexp, fsum, ldexp
from typing import Iterable, Sequence

from .context import QContext, as_fraction, is_exact
from .qcore import _q_binomial, _q_factorial, _q_number


def _strip(coeffs: Sequence) -> tuple:
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial, coefficients by ascending power.

    The zero polynomial has an empty coefficient tuple and degree -1.
    Trailing zero coefficients are stripped on construction, so the
    reported degree always carries a nonzero leading coefficient.
    """

    coeffs: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _strip(tuple(self.coeffs)))

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls((0,) * k + (c,))

    # -- structure ------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def max_abs(self) -> float:
        return max((abs(float(c)) for c in self.coeffs), default=0.0)

    def as_float(self) -> "Poly":
        return Poly(tuple(float(c) for c in self.coeffs))

    def as_exact(self) -> "Poly":
        return Poly(tuple(as_fraction(c) for c in self.coeffs))

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Poly):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Poly.zero()
            # canonical operand order makes products bit-identical under
            # commutation, which downstream shared-denominator checks rely on
            if (len(a), a) > (len(b), b):
                a, b = b, a
            out = [0] * (len(a) + len(b) - 1)
            for i, ca in enumerate(a):
                if ca == 0:
                    continue
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
            return Poly(out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Poly":
        if c == 0:
            return Poly.zero()
        return Poly(tuple(c * a for a in self.coeffs))

    def shift_up(self, k: int = 1) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Poly((0,) * k + self.coeffs)

    def scale_x(self, gamma) -> "Poly":
        """p(gamma * x) via coefficient rescaling."""
        out, power = [], 1
        for c in self.coeffs:
            out.append(c * power)
            power *= gamma
        return Poly(out)

    def derivative(self) -> "Poly":
        """Ordinary derivative (used by the zero-asymptotics checks)."""
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_naive(self, x):
        """Power-sum evaluation; kept as an independent check on Horner."""
        return sum((c * x**k for k, c in enumerate(self.coeffs)), 0 * x)


def poly_from(coeffs: Iterable) -> Poly:
    return Poly(tuple(coeffs))


# -- Euler-Jackson operator and friends --------------------------------------

def _coeff_q(ctx: QContext, *polys: Poly):
    """Exact q when every coefficient involved is rational, float q otherwise."""
    if all(p.is_exact() for p in polys):
        return ctx.q_exact
    return ctx.q


def dq(ctx: QContext, p: Poly) -> Poly:
    """Euler-Jackson q-derivative: D_q x^k = [k]_q x^(k-1), extended linearly."""
    q = _coeff_q(ctx, p)
    return Poly(tuple(_q_number(q, k) * p.coeffs[k] for k in range(1, len(p.coeffs))))


def dq_pow(ctx: QContext, p: Poly, k: int) -> Poly:
    for _ in range(k):
        p = dq(ctx, p)
    return p


def dq_inv(ctx: QContext, p: Poly) -> Poly:
    """q^-1-difference operator: D_{1/q} x^k = q^(1-k) [k]_q x^(k-1)."""
    q = _coeff_q(ctx, p)
    return Poly(
        tuple(q ** (1 - k) * _q_number(q, k) * p.coeffs[k] for k in range(1, len(p.coeffs)))
    )


def jhc_subtraction_power(ctx: QContext, y, n: int) -> Poly:
    """(x [-]_q y)^n, the Jackson-Hahn-Cigler q-subtraction power.

    Monic of degree n: sum_k [n k]_q q^(k(k-1)/2) (-y)^k x^(n-k).
    """
    if n < 0:
        raise ValueError(f"JHC power needs n >= 0, got {n}")
    q = ctx.q_exact if is_exact(y) else ctx.q
    coeffs = [0] * (n + 1)
    for k in range(n + 1):
        coeffs[n - k] = _q_binomial(q, n, k) * q ** (k * (k - 1) // 2) * (-y) ** k
    return Poly(coeffs)


def q_taylor_poly(ctx: QContext, f: Poly, x0, j: int) -> Poly:
    """q-Taylor polynomial of degree j of f centred at x0.

    Q_{j,q}(x, x0, f) = sum_{k<=j} (D_q^k f)(x0)/[k]_q! * (x [-]_q x0)^k;
    reproduces f exactly once j >= deg f.
    """
    if j < 0:
        raise ValueError(f"q-Taylor degree needs j >= 0, got {j}")
    exact = f.is_exact() and is_exact(x0)
    if not exact:
        f, x0 = f.as_float(), float(x0)
    q = ctx.q_exact if exact else ctx.q
    out = Poly.zero()
    g = f
    for k in range(j + 1):
        out = out + jhc_subtraction_power(ctx, x0, k).scale(g(x0) / _q_factorial(q, k))
        g = dq(ctx, g)
    return out


def q_leibniz_check(ctx: QContext, f: Poly, g: Poly, n: int, tol: float = 1e-11) -> bool:
    """Check D_q^n(fg) = sum_k [n k]_q (D_q^k f)(x) (D_q^{n-k} g)(q^k x)."""
    q = _coeff_q(ctx, f, g)
    lhs = dq_pow(ctx, f * g, n)
    rhs = Poly.zero()
    for k in range(n + 1):
        rhs = rhs + (dq_pow(ctx, f, k) * dq_pow(ctx, g, n - k).scale_x(q**k)).scale(
            _q_binomial(q, n, k)
        )
    return coeffs_close(lhs, rhs, tol)


# -- comparisons --------------------------------------------------------------

def coeffs_close(p: Poly, r: Poly, tol: float = 1e-10) -> bool:
    """Coefficient-wise |dc_i| <= tol * (1 + max |c|) over both operands."""
    scale = 1.0 + max(p.max_abs(), r.max_abs())
    m = max(len(p.coeffs), len(r.coeffs))
    return all(abs(float(p.coeff(i) - r.coeff(i))) <= tol * scale for i in range(m))


def poly_negligible(p: Poly, scale: float, tol: float) -> bool:
    """Every |c_i| <= tol * (1 + scale); scale is the size of cancelled terms."""
    return p.max_abs() <= tol * (1.0 + scale)


# -- rational functions --------------------------------------------------------

@dataclass(frozen=True)
class RatFn:
    """Ratio of two polynomials, never reduced to lowest terms.

    Equality is decided by cross-multiplication, evaluation is defined
    wherever the denominator does not vanish.  Keeping factors unreduced
    avoids ill-conditioned float GCDs; downstream identities clear
    denominators before comparing.
    """

    num: Poly
    den: Poly

    def __post_init__(self) -> None:
        if self.den.is_zero():
            raise ZeroDivisionError("RatFn denominator is identically zero")
        # Stacked kernel denominators carry squared-norm factors ~1e-10 per
        # level and underflow after a few products.  Rescaling num and den
        # by a power of two is exact for float coefficients and leaves the
        # function unchanged; exact rational coefficients never need it.
        scale = self.den.max_abs()
        if (scale > 1e30 or scale < 1e-30) and not (
            self.den.is_exact() and self.num.is_exact()
        ):
            factor = ldexp(1.0, -frexp(scale)[1])
            object.__setattr__(self, "num", self.num.scale(factor))
            object.__setattr__(self, "den", self.den.scale(factor))

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFn":
        return cls(p, Poly.one())

    @classmethod
    def const(cls, c) -> "RatFn":
        return cls(Poly((c,)) if c != 0 else Poly.zero(), Poly.one())

    def __add__(self, other: "RatFn") -> "RatFn":
        # Shared denominators (same object or equal coefficients) add
        # without cross-multiplying; the connection tables are built that
        # way on purpose, and it keeps determinant degrees low.
        if self.den is other.den or self.den.coeffs == other.den.coeffs:
            return RatFn(self.num + other.num, self.den)
        return RatFn(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RatFn") -> "RatFn":
        return self + (-other)

    def __neg__(self) -> "RatFn":
        return RatFn(-self.num, self.den)

    def __mul__(self, other):
        if isinstance(other, RatFn):
            return RatFn(self.num * other.num, self.den * other.den)
        if isinstance(other, Poly):
            return RatFn(self.num * other, self.den)
        return RatFn(self.num.scale(other), self.den)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale_x(self, gamma) -> "RatFn":
        return RatFn(self.num.scale_x(gamma), self.den.scale_x(gamma))

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def as_float(self) -> "RatFn":
        return RatFn(self.num.as_float(), self.den.as_float())

    def eq_cross(self, other: "RatFn", tol: float = 1e-10) -> bool:
        left = self.num * other.den
        right = other.num * self.den
        return coeffs_close(left, right, tol)


def ratfn_dq(ctx: QContext, r: RatFn) -> RatFn:
    """Quotient rule for D_q: the divided difference collapses to
    (u(qx)v(x) - u(x)v(qx)) / ((q-1) x v(x) v(qx)); the numerator always
    carries a zero constant term, cancelled here against the x below.
    """
    q = _coeff_q(ctx, r.num, r.den)
    u_q = r.num.scale_x(q)
    v_q = r.den.scale_x(q)
    top = u_q * r.den - r.num * v_q
    if not top.is_zero() and top.coeffs[0] != 0:
        # Exact cancellation of the constant term can only fail through
        # catastrophic float noise; treat anything visible as a bug.
        raise ArithmeticError("D_q quotient-rule numerator lost its x factor")
    shifted = Poly(top.coeffs[1:]) if not top.is_zero() else Poly.zero()
    return RatFn(shifted, (r.den * v_q).scale(q - 1))


def cleared_residual(terms: Sequence[tuple[RatFn, Poly]]) -> tuple[Poly, float]:
    """Residual of sum_i R_i * p_i = 0 after clearing every denominator.

    Returns (residual polynomial, magnitude scale of the cleared terms);
    the identity holds when the residual is negligible against that scale.
    """
    cleared = []
    for i, (r, p) in enumerate(terms):
        t = r.num * p
        for k, (s, _) in enumerate(terms):
            if k != i:
                t = t * s.den
        cleared.append(t)
    residual = Poly.zero()
    for t in cleared:
        residual = residual + t
    scale = max((t.max_abs() for t in cleared), default=0.0)
    return residual, scale
