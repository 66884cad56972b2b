"""Exact lattice-point counting in disks, balls and shells.

Boundary membership is decided by comparing the integer |z|^2 against exact
rational squared radii (floats are converted to the exact rational they
represent), so counts are reproducible and free of rounding at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError, ParameterError

_MAX_RADIUS = {2: 2_000_000.0, 3: 20_000.0}

_VALIDITY_THRESHOLD = {2: 416.0 / 285.0, 3: 16.0 / 9.0}


@dataclass(frozen=True)
class LatticeCountReport:
    dim: int
    radius: float
    count: int
    volume_term: float
    discrepancy: float


@dataclass(frozen=True)
class LatticeIncidenceTotal:
    """Shell count around the origin and the implied incidence total N * a."""

    dim: int
    n_points: int
    s: float
    radius: float
    thickness: float
    shell_points: int
    incidences: int
    valid: bool


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ParameterError(f"radius must be finite, got {x!r}")
        return Fraction(x)
    raise ParameterError(f"expected int, float or Fraction, got {type(x).__name__}")


def _floorsqrt_vec(v: np.ndarray) -> np.ndarray:
    """Exact floor(sqrt(v)) for int64 v >= 0."""
    y = np.sqrt(v.astype(np.float64)).astype(np.int64)
    y -= y * y > v
    y += (y + 1) * (y + 1) <= v
    return y


def _count_le_int(t2: int, dim: int) -> int:
    """#(z in Z^dim with |z|^2 <= t2), integer threshold, vectorized rows."""
    if t2 < 0:
        return 0
    if dim == 2:
        x_max = math.isqrt(t2)
        xs = np.arange(-x_max, x_max + 1, dtype=np.int64)
        return int((2 * _floorsqrt_vec(t2 - xs * xs) + 1).sum())
    total = 0
    for x in range(-math.isqrt(t2), math.isqrt(t2) + 1):
        total += _count_le_int(t2 - x * x, 2)
    return total


def _count_le_frac(t2: Fraction, dim: int) -> int:
    if t2 < 0:
        return 0
    if t2.denominator == 1:
        return _count_le_int(t2.numerator, dim)
    # an exact rational threshold is only ever hit when floor(t2) is,
    # because |z|^2 is an integer
    return _count_le_int(math.floor(t2), dim)


def ball_count(dim: int, R) -> LatticeCountReport:
    """Exact number of integer points z with |z| <= R, plus the discrepancy
    against the ball volume."""
    if dim not in (2, 3):
        raise ParameterError(f"dim must be 2 or 3, got {dim!r}")
    r_frac = _as_fraction(R)
    if r_frac < 0:
        raise ParameterError(f"R must be nonnegative, got {R!r}")
    if float(r_frac) > _MAX_RADIUS[dim]:
        raise CapacityError(f"R={R!r} exceeds the dim-{dim} limit {_MAX_RADIUS[dim]}")
    count = _count_le_frac(r_frac * r_frac, dim)
    r = float(r_frac)
    volume = math.pi * r * r if dim == 2 else 4.0 / 3.0 * math.pi * r**3
    return LatticeCountReport(
        dim=dim, radius=r, count=count, volume_term=volume, discrepancy=count - volume
    )


def _count_lt_frac(t2: Fraction, dim: int) -> int:
    """#(z with |z|^2 < t2)."""
    if t2 <= 0:
        return 0
    below = _count_le_frac(t2, dim)
    if t2.denominator == 1 and dim == 2:
        below -= _boundary_count2(t2.numerator)
    elif t2.denominator == 1 and dim == 3:
        below -= _boundary_count3(t2.numerator)
    return below


def _boundary_count2(t2: int) -> int:
    x_max = math.isqrt(t2)
    total = 0
    for x in range(-x_max, x_max + 1):
        rem = t2 - x * x
        y = math.isqrt(rem)
        if y * y == rem:
            total += 1 if y == 0 else 2
    return total


def _boundary_count3(t2: int) -> int:
    x_max = math.isqrt(t2)
    total = 0
    for x in range(-x_max, x_max + 1):
        total += _boundary_count2(t2 - x * x)
    return total


def shell_count(dim: int, R, w, include_inner_boundary: bool = True) -> int:
    """#(z in Z^dim with R <= |z| <= R + w); with ``include_inner_boundary``
    False the inner boundary is dropped, matching the plain count difference
    c(R + w) - c(R)."""
    if dim not in (2, 3):
        raise ParameterError(f"dim must be 2 or 3, got {dim!r}")
    r_frac = _as_fraction(R)
    w_frac = _as_fraction(w)
    if r_frac <= 0:
        raise ParameterError(f"R must be positive, got {R!r}")
    if w_frac < 0:
        raise ParameterError(f"w must be nonnegative, got {w!r}")
    hi = r_frac + w_frac
    if float(hi) > _MAX_RADIUS[dim]:
        raise CapacityError(f"R+w={float(hi)} exceeds the dim-{dim} limit")
    outer = _count_le_frac(hi * hi, dim)
    if include_inner_boundary:
        return outer - _count_lt_frac(r_frac * r_frac, dim)
    return outer - _count_le_frac(r_frac * r_frac, dim)


def lattice_incidence_total(dim: int, N: int, s: float) -> LatticeIncidenceTotal:
    """Incidence total N * a for the scaled lattice with N points: a counts
    integer points in the shell of radius R and thickness w, where dim 2 uses
    R = sqrt(N)/10, w = sqrt(N) * N^(-1/s) and dim 3 uses R = (N/10)^(1/3),
    w = N^(1/3 - 1/s). ``valid`` records whether s lies above the exponent
    threshold (416/285 in dim 2, 16/9 in dim 3) at which the shell main term
    dominates the known discrepancy bounds."""
    if dim not in (2, 3):
        raise ParameterError(f"dim must be 2 or 3, got {dim!r}")
    if not (isinstance(N, int) and N >= 1):
        raise ParameterError(f"N must be a positive integer, got {N!r}")
    if not s > dim / 2.0:
        raise ParameterError(f"s must exceed dim/2 = {dim / 2}, got {s!r}")
    if dim == 2:
        k = math.isqrt(N)
        if k * k != N:
            raise ParameterError(f"N={N} is not a perfect square")
        radius = Fraction(k, 10)
        thickness = Fraction(float(k * N ** (-1.0 / s)))
    else:
        k = round(N ** (1.0 / 3.0))
        if k**3 != N:
            raise ParameterError(f"N={N} is not a perfect cube")
        radius = Fraction(float((N / 10.0) ** (1.0 / 3.0)))
        thickness = Fraction(float(N ** (1.0 / 3.0 - 1.0 / s)))
    a = shell_count(dim, radius, thickness)
    return LatticeIncidenceTotal(
        dim=dim,
        n_points=N,
        s=float(s),
        radius=float(radius),
        thickness=float(thickness),
        shell_points=a,
        incidences=N * a,
        valid=s > _VALIDITY_THRESHOLD[dim],
    )
