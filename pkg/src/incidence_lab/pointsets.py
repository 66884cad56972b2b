"""Deterministic generators for extremal point configurations.

Coordinates are exact rationals: integer numerators over one shared positive
denominator per axis, so that downstream boundary predicates can run in pure
integer arithmetic. All generators are pure functions; a PointSet is
immutable and safe to share between threads.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CapacityError, InputError, ParameterError

# Refuse to materialize sets larger than this (counting paths that do not
# need explicit points, e.g. the exact Valtr counter, are not affected).
MAX_POINTS = 2_000_000

# Resolution used to store irrational coordinates (the Lenz circles).
ANGLE_RESOLUTION = 1 << 40

# Contraction ratios are snapped to the best rational with denominator below
# this bound whenever that loses less than 1e-9 relative accuracy, so that
# ratios like 1/3 or 1/4 are represented exactly.
_RATIO_MAX_DEN = 10**6
_RATIO_REL_TOL = Fraction(1, 10**9)


@dataclass(frozen=True)
class PointSet:
    """A finite set of d-dimensional points with exact rational coordinates.

    ``numerators[i][j] / denominators[j]`` is coordinate j of point i. All
    points lie in [-1, 1]^dim and are pairwise distinct. ``grid_shape`` and
    ``grid_steps`` are set when the points form a full uniform product grid
    (used by fast counting paths); ``s_dim`` records the dimension parameter
    a construction targets, when it has one.
    """

    dim: int
    denominators: tuple[int, ...]
    numerators: tuple[tuple[int, ...], ...]
    label: str = "custom"
    grid_shape: tuple[int, ...] | None = None
    grid_steps: tuple[Fraction, ...] | None = None
    s_dim: float | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ParameterError(f"dim must be >= 1, got {self.dim}")
        if len(self.denominators) != self.dim:
            raise InputError("one denominator per axis is required")
        if any(den <= 0 for den in self.denominators):
            raise InputError("denominators must be positive")
        if len(self.numerators) > MAX_POINTS:
            raise CapacityError(f"{len(self.numerators)} points exceeds MAX_POINTS={MAX_POINTS}")
        for row in self.numerators:
            if len(row) != self.dim:
                raise InputError("point arity does not match dim")
            for num, den in zip(row, self.denominators):
                if abs(num) > den:
                    raise InputError(f"coordinate {num}/{den} lies outside [-1, 1]")
        if len(set(self.numerators)) != len(self.numerators):
            raise InputError("duplicate points are not allowed")
        if self.grid_shape is not None:
            if len(self.grid_shape) != self.dim or math.prod(self.grid_shape) != len(self.numerators):
                raise InputError("grid_shape inconsistent with the point count")
            if self.grid_steps is None or len(self.grid_steps) != self.dim:
                raise InputError("grid_shape requires one grid step per axis")

    @property
    def n_points(self) -> int:
        return len(self.numerators)

    def coordinate(self, i: int, j: int) -> Fraction:
        return Fraction(self.numerators[i][j], self.denominators[j])

    def point(self, i: int) -> tuple[Fraction, ...]:
        return tuple(self.coordinate(i, j) for j in range(self.dim))

    def to_floats(self) -> np.ndarray:
        """Coordinates as an (n_points, dim) float64 array."""
        cols = []
        for j, den in enumerate(self.denominators):
            nums = [row[j] for row in self.numerators]
            if den < 2**53 and all(abs(v) < 2**53 for v in nums):
                cols.append(np.asarray(nums, dtype=np.float64) / den)
            else:
                cols.append(np.asarray([float(Fraction(v, den)) for v in nums]))
        return np.stack(cols, axis=1) if cols else np.empty((0, 0))


def _check_size(count: int, what: str) -> None:
    if count > MAX_POINTS:
        raise CapacityError(f"{what} would produce {count} points (limit {MAX_POINTS})")


def gen_valtr(n: int, d: int) -> PointSet:
    """The n x ... x n x n^2 grid: (i1/n, ..., i_{d-1}/n, i_d/n^2) with
    0 <= i_j <= n-1 for j < d and 1 <= i_d <= n^2. Exactly n^(d+1) points."""
    if not (isinstance(n, int) and n >= 1):
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    if not (isinstance(d, int) and d >= 2):
        raise ParameterError(f"d must be an integer >= 2, got {d!r}")
    _check_size(n ** (d + 1), f"gen_valtr(n={n}, d={d})")
    head = range(n)
    tail = range(1, n * n + 1)
    rows = tuple(itertools.product(*([head] * (d - 1) + [tail])))
    dens = (n,) * (d - 1) + (n * n,)
    steps = (Fraction(1, n),) * (d - 1) + (Fraction(1, n * n),)
    return PointSet(
        dim=d,
        denominators=dens,
        numerators=rows,
        label="valtr",
        grid_shape=(n,) * (d - 1) + (n * n,),
        grid_steps=steps,
    )


def gen_lenz(N: int) -> PointSet:
    """Two orthogonal unit circles in R^4, N/2 evenly spaced points on each.

    Coordinates are irrational; they are stored as rationals rounded at a
    fixed resolution of 2^-40, which keeps all cross-circle distances within
    ~1e-11 of sqrt(2).
    """
    if not (isinstance(N, int) and N >= 4 and N % 2 == 0):
        raise ParameterError(f"N must be an even integer >= 4, got {N!r}")
    _check_size(N, f"gen_lenz(N={N})")
    half = N // 2
    res = ANGLE_RESOLUTION
    rows = []
    for k in range(half):
        theta = 2.0 * math.pi * k / half
        rows.append((round(math.cos(theta) * res), round(math.sin(theta) * res), 0, 0))
    for k in range(half):
        phi = 2.0 * math.pi * k / half
        rows.append((0, 0, round(math.cos(phi) * res), round(math.sin(phi) * res)))
    return PointSet(dim=4, denominators=(res,) * 4, numerators=tuple(rows), label="lenz")


def gen_lattice(k: int, d: int) -> PointSet:
    """The scaled integer lattice: the k^d points (i1/k, ..., id/k),
    0 <= i_j <= k-1."""
    if not (isinstance(k, int) and k >= 1):
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    if not (isinstance(d, int) and d >= 1):
        raise ParameterError(f"d must be a positive integer, got {d!r}")
    _check_size(k**d, f"gen_lattice(k={k}, d={d})")
    rows = tuple(itertools.product(range(k), repeat=d))
    return PointSet(
        dim=d,
        denominators=(k,) * d,
        numerators=rows,
        label="lattice",
        grid_shape=(k,) * d,
        grid_steps=(Fraction(1, k),) * d,
    )


def _rationalize_ratio(value: float) -> Fraction:
    """Best small-denominator rational for a contraction ratio, falling back
    to the exact binary value of the float when no small fraction is close."""
    exact = Fraction(value)
    cand = exact.limit_denominator(_RATIO_MAX_DEN)
    if cand > 0 and abs(cand - exact) <= exact * _RATIO_REL_TOL:
        return cand
    return exact


@dataclass(frozen=True)
class CantorParams:
    """Parameters of a Cantor-like construction of target dimension alpha.

    Each interval spawns two children of relative length ``ratio`` anchored
    at its ends (the middle 1 - 2*ratio proportion is removed), which makes
    alpha = log 2 / log(1/ratio) hold exactly for the rationalized ratio.
    """

    alpha: float
    levels: int
    ratio: Fraction = field(init=False)
    inverse_ratio: Fraction = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not (isinstance(self.levels, int) and self.levels >= 0):
            raise ParameterError(f"levels must be a nonnegative integer, got {self.levels!r}")
        ratio = _rationalize_ratio(2.0 ** (-1.0 / self.alpha))
        if not (0 < ratio < Fraction(1, 2)):
            raise ParameterError(f"contraction ratio {ratio} not in (0, 1/2)")
        object.__setattr__(self, "ratio", ratio)
        object.__setattr__(self, "inverse_ratio", 1 / ratio)


def gen_cantor_centers(params: CantorParams) -> list[Fraction]:
    """Centers of the 2^levels surviving intervals, in increasing order."""
    _check_size(2**params.levels, f"gen_cantor_centers(levels={params.levels})")
    lam = params.ratio
    lefts = [Fraction(0)]
    length = Fraction(1)
    for _ in range(params.levels):
        offset = length * (1 - lam)
        lefts = [a for left in lefts for a in (left, left + offset)]
        length *= lam
    half = length / 2
    return [left + half for left in lefts]


def _common_denominator_column(values: list[Fraction], den: int) -> list[int]:
    nums = []
    for v in values:
        scaled = v * den
        if scaled.denominator != 1:
            raise InputError(f"{v} is not a multiple of 1/{den}")
        nums.append(int(scaled))
    return nums


def gen_mattila2(alpha: float, levels: int) -> PointSet:
    """Product of a doubled Cantor-center set on the x-axis with an evenly
    spaced column: (C union (C - 1)) x {(k + 1/2)/G, 0 <= k < G} where
    G = ceil((1/ratio)^levels). Size is exactly 2 * 2^levels * G."""
    params = CantorParams(alpha, levels)
    centers = gen_cantor_centers(params)
    grid = math.ceil(params.inverse_ratio**levels)
    _check_size(2 * len(centers) * grid, f"gen_mattila2(alpha={alpha}, levels={levels})")
    xs = [c - 1 for c in centers] + centers
    den_x = 2 * params.ratio.denominator**levels
    x_nums = _common_denominator_column(xs, den_x)
    den_y = 2 * grid
    y_nums = [2 * k + 1 for k in range(grid)]
    rows = tuple((nx, ny) for nx in x_nums for ny in y_nums)
    return PointSet(
        dim=2,
        denominators=(den_x, den_y),
        numerators=rows,
        label="mattila2",
        s_dim=1.0 + alpha,
    )


def gen_mattila3(delta: float, levels: int) -> PointSet:
    """Triple Cantor product C_alpha x C_alpha x C_beta with alpha = 1-delta
    and beta = delta/2; targets dimension s = 2*alpha + beta = 2 - 3*delta/2."""
    if not (0.0 < delta < 2.0 / 3.0):
        raise ParameterError(f"delta must lie in (0, 2/3), got {delta!r}")
    alpha = 1.0 - delta
    beta = delta / 2.0
    pa = CantorParams(alpha, levels)
    pb = CantorParams(beta, levels)
    _check_size(8**levels, f"gen_mattila3(delta={delta}, levels={levels})")
    ca = gen_cantor_centers(pa)
    cb = gen_cantor_centers(pb)
    den_a = 2 * pa.ratio.denominator**levels
    den_b = 2 * pb.ratio.denominator**levels
    a_nums = _common_denominator_column(ca, den_a)
    b_nums = _common_denominator_column(cb, den_b)
    rows = tuple((nx, ny, nz) for nx in a_nums for ny in a_nums for nz in b_nums)
    return PointSet(
        dim=3,
        denominators=(den_a, den_a, den_b),
        numerators=rows,
        label="mattila3",
        s_dim=2.0 * alpha + beta,
    )
