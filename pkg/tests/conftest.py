from __future__ import annotations

from fractions import Fraction

import pytest

from qsobolev import QContext, build_hermite

_CACHE: dict[tuple[Fraction, int], object] = {}


@pytest.fixture(scope="session")
def hermite_cache():
    """Session-wide cache factory: hermite_cache(q, N) builds each (q, N) once."""

    def factory(q, N: int):
        key = (Fraction(q), N)
        if key not in _CACHE:
            _CACHE[key] = build_hermite(QContext(key[0]), N)
        return _CACHE[key]

    return factory


@pytest.fixture(scope="session")
def ctx_half() -> QContext:
    return QContext(Fraction(1, 2))


@pytest.fixture(scope="session")
def ctx_two_thirds() -> QContext:
    return QContext(Fraction(2, 3))


@pytest.fixture(scope="session")
def ctx_three_fifths() -> QContext:
    return QContext(Fraction(3, 5))


def close(a: float, b: float, tol: float) -> bool:
    """Scale-aware closeness: |a - b| <= tol * (1 + |a| + |b|)."""
    return abs(a - b) <= tol * (1.0 + abs(a) + abs(b))
