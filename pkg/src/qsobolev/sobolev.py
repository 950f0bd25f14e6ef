"""Higher-order q-Hermite I-Sobolev type polynomials.

The family orthogonal under <f,g> + lam * (D_q^j f)(alpha) (D_q^j g)(alpha).
Construction always goes through the kernel connection formula; the rational
connection coefficients (the E/F pairs), the ladder operators, the recurrences
and the hypergeometric form are verification targets layered on top.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import fsum

from .context import QContext, as_fraction
from .hermite import HermiteCache, build_hermite, weighted_inner
from .kernel import closed_form_AB, closed_form_CD, kernel_sum, kernel_value
from .poly import Poly, RatFn, dq, dq_pow, jhc_subtraction_power
from .qcore import _q_falling_factorial, _q_number


@dataclass(frozen=True)
class SobolevParams:
    """Mass point alpha, mass lam >= 0 and q-derivative order j >= 1."""

    alpha: float
    lam: float
    j: int
    alpha_exact: Fraction = field(init=False, repr=False, compare=False)
    lam_exact: Fraction = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.j < 1:
            raise ValueError(f"derivative order j must be >= 1, got {self.j}")
        alpha_exact = as_fraction(self.alpha)
        lam_exact = as_fraction(self.lam)
        if lam_exact < 0:
            raise ValueError(f"mass lam must be >= 0, got {self.lam}")
        object.__setattr__(self, "alpha_exact", alpha_exact)
        object.__setattr__(self, "lam_exact", lam_exact)
        object.__setattr__(self, "alpha", float(alpha_exact))
        object.__setattr__(self, "lam", float(lam_exact))

    def with_lam(self, lam) -> "SobolevParams":
        return SobolevParams(self.alpha, lam, self.j)

    def zero_theorems_apply(self, ctx: QContext) -> bool:
        """Zero-location results need alpha and q^j alpha outside (-1, 1)."""
        a = self.alpha_exact
        qa = ctx.q_exact**self.j * a
        return not (-1 < a < 1) and not (-1 < qa < 1)


class SobolevCache:
    """Sobolev polynomials 0..N plus kernel scalars and connection tables.

    polys[n] carries exact rational coefficients (up to the one float norm
    factor shared by every kernel term).  kjj[n] is K^(j,j)_{n-1}(alpha,alpha),
    mult[n] the lam-weighted multiplier in front of the kernel correction.
    The E/F connection tables run in float rational functions.
    """

    def __init__(self, ctx: QContext, params: SobolevParams, N: int):
        if N < 0:
            raise ValueError(f"cache size N must be >= 0, got {N}")
        self.ctx = ctx
        self.params = params
        self.N = N
        self.zero_theorems_apply = params.zero_theorems_apply(ctx)
        if not self.zero_theorems_apply:
            warnings.warn(
                "alpha or q^j*alpha lies inside (-1, 1): zero-location and "
                "interlacing theorems do not apply to this configuration",
                stacklevel=3,
            )
        self.hermite = build_hermite(ctx, N + 2)
        j = params.j
        alpha = params.alpha_exact
        lam = params.lam_exact
        q = ctx.q_exact

        # kjj[n] = K^(j,j)_{n-1}(alpha, alpha); mult[n] multiplies the
        # kernel correction in the connection formula.
        kjj: list[Fraction] = []
        mult: list[Fraction] = []
        polys: list[Poly] = []
        running_k0j = Poly.zero()  # K^(0,j)_{n-1}(x, alpha)
        running_kjj = Fraction(0)
        for n in range(N + 2):
            kjj.append(Fraction(running_kjj))
            fall = _q_falling_factorial(q, n, j)
            h_at_alpha = self.hermite.polys[n - j](alpha) if n >= j else Fraction(0)
            mult.append(lam * fall * h_at_alpha / (1 + lam * running_kjj))
            if n <= N:
                polys.append(self.hermite.polys[n] - running_k0j.scale(mult[n]))
            # extend the kernels to index n for the next round
            djn = self.hermite.dq_hermite(n, j)(alpha)
            if djn != 0:
                norm = self.hermite.norm_exact(n)
                running_k0j = running_k0j + self.hermite.polys[n].scale(djn / norm)
                running_kjj += djn * djn / norm
        self.kjj = tuple(kjj)
        self.mult = tuple(mult)
        self.polys = tuple(polys)
        self._ef: dict[tuple[int, int], tuple[RatFn, RatFn]] = {}
        self._ef_exact: dict[tuple[int, int], tuple[RatFn, RatFn]] = {}
        self._thetas: dict[tuple[int, int, int], RatFn] = {}
        self._build_ef_tables(self._ef, exact=False)

    # -- E/F connection tables --------------------------------------------

    def _build_ef_tables(self, store: dict, exact: bool) -> None:
        ctx, j = self.ctx, self.params.j
        alpha = self.params.alpha_exact if exact else self.params.alpha
        q = ctx.q_exact if exact else ctx.q
        one = RatFn.from_poly(Poly.one())
        zero = RatFn(Poly.zero(), Poly.one())
        store[(1, 0)] = (one, zero)
        store[(2, 0)] = (zero, one)
        store[(3, 0)] = (zero, zero)
        store[(4, 0)] = (zero, zero)
        prev: dict[str, RatFn] = {}
        for n in range(1, self.N + 2):
            lam_mult = self.mult[n] if exact else float(self.mult[n])
            A, B = closed_form_AB(ctx, self.hermite, n, j, alpha, exact=exact)
            C, D = closed_form_CD(ctx, self.hermite, n, j, alpha, exact=exact)
            e1 = one - A * lam_mult
            f1 = B * (-lam_mult)
            e3 = C * (-lam_mult)
            f3 = RatFn.const(_q_number(q, n)) - D * lam_mult
            cancelled = q ** (2 - n) / (1 - q)  # [n-1]_q / gamma_{n-1}
            if n == 1:
                # lam-part of the n=1 ratio vanishes identically (H_{-j} = 0)
                e2, f2 = zero, one
                e4 = RatFn.const(-cancelled)
                f4 = RatFn.from_poly(Poly.x().scale(cancelled))
            else:
                gamma_prev = self.hermite.gammas[n - 1]
                ratio = (
                    self.mult[n - 1] / gamma_prev
                    if exact
                    else float(self.mult[n - 1]) / float(gamma_prev)
                )
                e2 = prev["B"] * ratio
                f2 = prev["e1"] - e2 * Poly.x()
                e4 = RatFn.const(-cancelled) + prev["D"] * ratio
                f4 = (
                    prev["e3"]
                    + RatFn.from_poly(Poly.x().scale(cancelled))
                    - (prev["D"] * ratio) * Poly.x()
                )
            store[(1, n)] = (e1, f1)
            store[(2, n)] = (e2, f2)
            store[(3, n)] = (e3, f3)
            store[(4, n)] = (e4, f4)
            prev = {"B": B, "D": D, "e1": e1, "e3": e3}

    def ef(self, i: int, n: int, exact: bool = False) -> tuple[RatFn, RatFn]:
        if i not in (1, 2, 3, 4):
            raise ValueError(f"connection family index must be 1..4, got {i}")
        if exact:
            if not self._ef_exact:
                self._build_ef_tables(self._ef_exact, exact=True)
            return self._ef_exact[(i, n)]
        return self._ef[(i, n)]


def build_sobolev(
    ctx: QContext, params: SobolevParams, N: int, generator: str = "connection"
) -> SobolevCache:
    """Construct the family through the kernel connection formula.

    Each polynomial is H_n minus lam [n]_q^(j) H_{n-j}(alpha) /
    (1 + lam K^(j,j)_{n-1}(alpha,alpha)) times K^(0,j)_{n-1}(x, alpha);
    monic by construction, and equal to H_n for n <= j.

    generator="recurrence" instead iterates the rational three-term
    recurrence upward from S_0 = 1, S_-1 = 0 (the connection tables do not
    depend on the polynomials themselves).  The recurrence coefficients are
    high-degree rational functions and amplify rounding, so this path is a
    cross-check, not the default.
    """
    cache = SobolevCache(ctx, params, N)
    if generator == "connection":
        return cache
    if generator != "recurrence":
        raise ValueError(f"generator must be 'connection' or 'recurrence', got {generator!r}")
    regenerated: list[Poly] = [Poly.one()]
    prev, cur = Poly.zero(), Poly.one()
    for n in range(N):
        regenerated.append(_recurrence_step(ctx, cache, n, cur, prev))
        prev, cur = cur, regenerated[-1]
    cache.polys = tuple(
        p if i <= params.j else regenerated[i] for i, p in enumerate(cache.polys)
    )
    return cache


def _recurrence_step(ctx: QContext, cache: SobolevCache, n: int, cur: Poly, prev: Poly) -> Poly:
    """Solve a_n S_{n+1} = b_n S_n + c_n S_{n-1} for the next polynomial.

    Composing the determinant coefficients as float polynomials loses the
    underlying functions entirely (their coefficients dwarf their values),
    so the composition happens value-wise: every determinant is evaluated
    exactly at rational nodes, the quotient of exact values is interpolated
    in exact arithmetic, and only the final coefficients are rounded.
    """
    degree = n + 1
    m = degree + 1

    def tval(key, z: Fraction) -> Fraction:
        i, j2, level = key
        ei, fi = cache.ef(i, level, exact=True)
        ej, fj = cache.ef(j2, level, exact=True)
        det_num = ei.num(z) * fj.num(z) * ej.den(z) * fi.den(z) - ej.num(z) * fi.num(
            z
        ) * ei.den(z) * fj.den(z)
        det_den = ei.den(z) * fj.den(z) * ej.den(z) * fi.den(z)
        return det_num / det_den

    cure, preve = cur.as_exact(), prev.as_exact()
    for base in (Fraction(3, 2), Fraction(7, 5), Fraction(12, 7)):
        nodes = [base + Fraction(k, 9) for k in range(m)]
        try:
            values = []
            for z in nodes:
                alpha = tval((1, 2, n), z) * tval((4, 2, n + 1), z)
                beta = tval((1, 2, n + 1), z) * tval((3, 2, n), z) - tval((1, 2, n), z) * tval(
                    (1, 4, n + 1), z
                )
                gamma = tval((1, 2, n + 1), z) * tval((1, 3, n), z)
                values.append((beta * cure(z) + gamma * preve(z)) / alpha)
        except ZeroDivisionError:
            continue
        # Newton divided differences, expanded to monomial coefficients
        table = list(values)
        for level in range(1, m):
            for i in range(m - 1, level - 1, -1):
                table[i] = (table[i] - table[i - 1]) / (nodes[i] - nodes[i - level])
        poly = Poly(())
        basis = Poly.one()
        for i in range(m):
            poly = poly + basis.scale(table[i])
            basis = basis * Poly((-nodes[i], Fraction(1)))
        if poly.degree == degree and abs(float(poly.coeffs[-1]) - 1.0) <= 1e-9:
            return poly
    raise ArithmeticError(
        f"recurrence step to degree {degree} failed on every sampling grid; "
        "the rational recurrence coefficients are degenerate here"
    )


def sobolev_inner(ctx: QContext, cache: SobolevCache, f: Poly, g: Poly) -> float:
    """<f,g>_lam = weighted integral plus lam (D_q^j f)(alpha)(D_q^j g)(alpha)."""
    j = cache.params.j
    alpha = cache.params.alpha_exact
    fe, ge = f.as_exact(), g.as_exact()
    point = cache.params.lam_exact * dq_pow(ctx, fe, j)(alpha) * dq_pow(ctx, ge, j)(alpha)
    return weighted_inner(ctx, cache.hermite, f, g) + float(point)


def dq_sobolev_connection(ctx: QContext, cache: SobolevCache, n: int) -> Poly:
    """D_q of the n-th Sobolev polynomial assembled from the (1,j) kernel.

    [n]_q H_{n-1} - mult_n K^(1,j)_{n-1}(x, alpha); agrees with applying
    D_q directly to the cached polynomial.
    """
    if n == 0:
        return Poly.zero()
    lead = cache.hermite.polys[n - 1].scale(_q_number(ctx.q_exact, n))
    k1j = kernel_sum(ctx, cache.hermite, n - 1, 1, cache.params.j, cache.params.alpha_exact)
    return lead - k1j.scale(cache.mult[n])


def ef_coefficients(ctx: QContext, cache: SobolevCache, n: int):
    """The four (E_i, F_i) pairs writing the family over {H_n, H_{n-1}}.

    Returned in order E1,F1,E2,F2,E3,F3,E4,F4:
      H_n-level:      S_n       = E1 H_n + F1 H_{n-1}
      shifted:        S_{n-1}   = E2 H_n + F2 H_{n-1}
      derivative:     D_q S_n   = E3 H_n + F3 H_{n-1}
      both:           D_q S_{n-1} = E4 H_n + F4 H_{n-1}
    """
    if n < 0 or n > cache.N + 1:
        raise ValueError(f"connection tables cover 0..{cache.N + 1}, got {n}")
    e1, f1 = cache.ef(1, n)
    e2, f2 = cache.ef(2, n)
    e3, f3 = cache.ef(3, n)
    e4, f4 = cache.ef(4, n)
    return e1, f1, e2, f2, e3, f3, e4, f4


def theta(ctx: QContext, cache: SobolevCache, i: int, j2: int, n: int) -> RatFn:
    """Determinant Theta_{i,j,n} = E_i F_j - E_j F_i of two connection pairs."""
    key = (i, j2, n)
    if key not in cache._thetas:
        ei, fi = cache.ef(i, n)
        ej, fj = cache.ef(j2, n)
        cache._thetas[key] = ei * fj - ej * fi
    return cache._thetas[key]


def ladder_apply(ctx: QContext, cache: SobolevCache, n: int, which: str, target: Poly) -> RatFn:
    """Apply the lowering or raising first-order q-difference operator.

    lowering: Theta_{1,2,n} D_q - Theta_{3,2,n} Id
    raising:  Theta_{1,2,n} D_q - Theta_{1,4,n} Id
    The result is rational; applied to the family members it satisfies
    the cleared-denominator ladder identities.
    """
    t12 = theta(ctx, cache, 1, 2, n)
    if which == "lowering":
        t_id = theta(ctx, cache, 3, 2, n)
    elif which == "raising":
        t_id = theta(ctx, cache, 1, 4, n)
    else:
        raise ValueError(f"which must be 'lowering' or 'raising', got {which!r}")
    tf = target.as_float()
    return t12 * dq(ctx, tf) - t_id * tf


def three_term_coeffs(ctx: QContext, cache: SobolevCache, n: int) -> tuple[RatFn, RatFn, RatFn]:
    """Rational coefficients of the three-term recurrence.

    a_n S_{n+1} = b_n S_n + c_n S_{n-1} with
      a_n = Theta_{1,2,n} Theta_{4,2,n+1},
      b_n = Theta_{1,2,n+1} Theta_{3,2,n} - Theta_{1,2,n} Theta_{1,4,n+1},
      c_n = Theta_{1,2,n+1} Theta_{1,3,n}.
    """
    a = theta(ctx, cache, 1, 2, n) * theta(ctx, cache, 4, 2, n + 1)
    b = theta(ctx, cache, 1, 2, n + 1) * theta(ctx, cache, 3, 2, n) - theta(
        ctx, cache, 1, 2, n
    ) * theta(ctx, cache, 1, 4, n + 1)
    c = theta(ctx, cache, 1, 2, n + 1) * theta(ctx, cache, 1, 3, n)
    return a, b, c


def long_recurrence_coeffs(ctx: QContext, cache: SobolevCache, n: int) -> dict[int, float]:
    """Coefficients of the 2j+3 term recurrence for (x [-]_q alpha)^(j+1) S_n.

    d_{n,nu} = <(x [-]_q alpha)^(j+1) S_n, S_nu>_lam / <S_nu, S_nu>_lam for
    nu = n-j-1 .. n+j+1 (negative nu omitted); d_{n,n+j+1} = 1 and
    d_{n,n-j-1} > 0 by the norm-ratio identity.
    """
    j = cache.params.j
    if n + j + 1 > cache.N:
        raise ValueError(
            f"recurrence at n={n} needs polynomials up to {n + j + 1}, cache holds {cache.N}"
        )
    shifted = jhc_subtraction_power(ctx, cache.params.alpha_exact, j + 1) * cache.polys[n]
    out: dict[int, float] = {}
    for nu in range(max(0, n - j - 1), n + j + 2):
        num = sobolev_inner(ctx, cache, shifted, cache.polys[nu])
        den = sobolev_inner(ctx, cache, cache.polys[nu], cache.polys[nu])
        out[nu] = num / den
    return out


def hypergeometric_rep(ctx: QContext, cache: SobolevCache, n: int, x: float) -> float:
    """Evaluate S_n(x) through its terminating 3-phi-2 representation.

    Guard zones: the representation degenerates where F_{1,n}(x) vanishes
    (identically so for lam = 0 or n < j, where the mass multiplier is zero)
    and where the auxiliary psi_n(x) hits 0 or q^{1-m}; evaluation inside
    a 1e-6 neighbourhood of those sets is rejected.
    """
    if n < 1:
        raise ValueError("hypergeometric form needs n >= 1")
    q = ctx.q
    e1, f1 = cache.ef(1, n)
    e1x, f1x = e1(x), f1(x)
    if abs(f1x) <= 1e-6 * (1.0 + abs(e1x)):
        raise ValueError(
            f"guard: F_(1,{n})({x}) = {f1x:.3e} vanishes; the representation "
            "degenerates (lam = 0 and n < j always land here)"
        )
    nq = _q_number(q, n)
    vartheta = -(q ** (n - 2)) * nq * e1x / f1x - _q_number(q, n - 1)
    denom = (1.0 - q) * vartheta + 1.0
    if abs(denom) <= 1e-6:
        raise ValueError("guard: psi_n(x) pole (1 + (1-q) vartheta vanishes)")
    psi = 1.0 / denom
    if abs(psi) <= 1e-6:
        raise ValueError("guard: psi_n(x) vanishes")
    for m in range(n + 1):
        if abs(psi / q - q ** (-m)) <= 1e-6 * q ** (-m):
            raise ValueError(f"guard: psi_n(x)/q collides with q^-{m}")
    terms = [1.0]
    term = 1.0
    for k in range(n):
        term *= (
            (1.0 - q ** (k - n))
            / (1.0 - q ** (k + 1))
            * (-q)
            * (x - q**k)
            * (1.0 - psi * q**k)
            / (1.0 - psi * q ** (k - 1))
        )
        terms.append(term)
    prefactor = (
        -f1x
        * (1.0 - psi / q)
        * float(ctx.q_exact ** (n * (n - 1) // 2))
        * q ** (2 - n)
        / (nq * psi * (1.0 - q))
    )
    return prefactor * fsum(terms)


def limiting_polynomial(ctx: QContext, cache: SobolevCache, n: int) -> Poly:
    """Coefficient-wise lam -> infinity limit of the n-th Sobolev polynomial.

    H_n - [n]_q^(j) H_{n-j}(alpha) / K^(j,j)_{n-1}(alpha,alpha) *
    K^(0,j)_{n-1}(x, alpha); undefined for n <= j where the kernel scalar
    vanishes.
    """
    j = cache.params.j
    if n <= j:
        raise ValueError(f"limiting polynomial needs n >= j+1 = {j + 1}, got {n}")
    alpha = cache.params.alpha_exact
    fall = _q_falling_factorial(ctx.q_exact, n, j)
    scale = fall * cache.hermite.polys[n - j](alpha) / cache.kjj[n]
    k0j = kernel_sum(ctx, cache.hermite, n - 1, 0, j, alpha)
    return cache.hermite.polys[n] - k0j.scale(scale)


def dqj_at_alpha_identity(ctx: QContext, cache: SobolevCache, n: int) -> tuple[float, float]:
    """Both sides of (D_q^j S_n)(alpha) = (D_q^j H_n)(alpha)/(1 + lam K^(j,j)).

    Returned as (lhs, rhs) so callers can assert the gap at their tolerance.
    """
    j = cache.params.j
    alpha = cache.params.alpha_exact
    lhs = dq_pow(ctx, cache.polys[n], j)(alpha)
    rhs = dq_pow(ctx, cache.hermite.polys[n], j)(alpha) / (
        1 + cache.params.lam_exact * cache.kjj[n]
    )
    return float(lhs), float(rhs)
