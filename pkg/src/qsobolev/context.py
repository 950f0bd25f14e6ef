"""Numerical context threaded through every computation in the package."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isfinite
from numbers import Rational


def as_fraction(value) -> Fraction:
    """Exact rational form of a scalar parameter.

    Floats convert to the binary rational they already are, so no rounding
    happens here; strings accept both "2/3" and decimal literals like "0.6".
    """
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        if not isfinite(value):
            raise ValueError(f"non-finite parameter: {value!r}")
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def is_exact(value) -> bool:
    """True for values carried in exact rational arithmetic."""
    return isinstance(value, Rational)


@dataclass(frozen=True)
class QContext:
    """Base q in (0, 1) plus the truncation/convergence policy.

    q may be passed as a float, a Fraction, or a string such as "2/3".
    The exact rational form is kept alongside the float so that recurrence
    and lattice arithmetic can run exactly when the inputs allow it; the
    severely cancellation-prone quantities (critical masses, orthogonality
    residuals) depend on that.

    eps_product truncates infinite q-Pochhammer products, eps_sum controls
    the Jackson-integral tail rule, and max_terms caps both loops.
    """

    q: float
    eps_product: float = 1e-18
    eps_sum: float = 1e-16
    max_terms: int = 20000
    q_exact: Fraction = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        q_exact = as_fraction(self.q)
        if not 0 < q_exact < 1:
            raise ValueError(f"q must lie strictly inside (0, 1), got {self.q!r}")
        if not 0.0 < self.eps_product <= 1e-6:
            raise ValueError("eps_product must lie in (0, 1e-6]")
        if not 0.0 < self.eps_sum <= 1e-6:
            raise ValueError("eps_sum must lie in (0, 1e-6]")
        if self.max_terms < 64:
            raise ValueError("max_terms must be at least 64")
        object.__setattr__(self, "q_exact", q_exact)
        object.__setattr__(self, "q", float(q_exact))


class ConvergenceError(RuntimeError):
    """A truncated product/sum failed to converge within max_terms."""
