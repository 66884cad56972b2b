"""Finite-field side: subsets of F_q^d, their discrete Fourier transforms
against the additive character exp(2*pi*i*u/q), spheres and paraboloids, and
the Cartesian-product family that makes the pair-count bound sharp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InputError, ParameterError

_MAX_CELLS = 50_000_000
_PAIR_CHUNK = 512


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def _validate_field(q: int, dim: int) -> None:
    if not (isinstance(q, int) and is_prime(q)):
        raise ParameterError(f"q must be prime, got {q!r}")
    if not (isinstance(dim, int) and dim >= 1):
        raise ParameterError(f"dim must be a positive integer, got {dim!r}")
    if q**dim > _MAX_CELLS:
        raise CapacityError(f"q^dim = {q ** dim} cells exceed the limit {_MAX_CELLS}")


@dataclass(frozen=True, eq=False)
class FFSet:
    """A subset of F_q^d stored as a dense boolean indicator grid."""

    q: int
    dim: int
    indicator: np.ndarray
    size: int = -1

    def __post_init__(self):
        _validate_field(self.q, self.dim)
        if self.indicator.shape != (self.q,) * self.dim or self.indicator.dtype != np.bool_:
            raise InputError(f"indicator must be a boolean grid of shape {(self.q,) * self.dim}")
        object.__setattr__(self, "size", int(self.indicator.sum()))

    def coords(self) -> np.ndarray:
        """Member cells as an (size, dim) int64 array."""
        return np.argwhere(self.indicator).astype(np.int64)


@dataclass(frozen=True, eq=False)
class FFSpectrum:
    """Fourier transform f_hat(m) = q^-d sum_x chi(-x . m) f(x) on a grid."""

    q: int
    dim: int
    values: np.ndarray

    @property
    def max_nonzero_mag(self) -> float:
        mags = np.abs(self.values).ravel().copy()
        mags[0] = 0.0  # m = (0, ..., 0) sits at flat index 0
        return float(mags.max())


def ff_sphere(q: int, d: int, t: int) -> FFSet:
    """{x in F_q^d : x_1^2 + ... + x_d^2 = t}."""
    _validate_field(q, d)
    grids = np.indices((q,) * d)
    total = np.zeros((q,) * d, dtype=np.int64)
    for g in grids:
        total += g * g
    return FFSet(q=q, dim=d, indicator=(total % q) == (t % q))


def ff_paraboloid(q: int, d: int, full_square_sum: bool = False) -> FFSet:
    """{x in F_q^d : x_d = x_1^2 + ... + x_{d-1}^2}; with ``full_square_sum``
    the right side also includes x_d^2 (a variant kept for comparison)."""
    _validate_field(q, d)
    if d < 2:
        raise ParameterError("the paraboloid needs dim >= 2")
    grids = np.indices((q,) * d)
    rhs = np.zeros((q,) * d, dtype=np.int64)
    for g in grids[:-1]:
        rhs += g * g
    if full_square_sum:
        rhs += grids[-1] * grids[-1]
    return FFSet(q=q, dim=d, indicator=(rhs % q) == grids[-1])


def ff_fourier(S: FFSet) -> FFSpectrum:
    """Exact-formula DFT, evaluated axis by axis (cost O(d * q^(d+1)))."""
    q = S.q
    k = np.arange(q)
    w = np.exp(-2j * np.pi * np.outer(k, k) / q)
    arr = S.indicator.astype(np.complex128)
    for _ in range(S.dim):
        arr = np.tensordot(w, arr, axes=([1], [0]))
        arr = np.moveaxis(arr, 0, -1)
    return FFSpectrum(q=q, dim=S.dim, values=arr / q**S.dim)


def ff_inverse_at(spec: FFSpectrum, x) -> complex:
    """Inversion f(x) = sum_m chi(x . m) f_hat(m), for spot checks."""
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (spec.dim,):
        raise InputError(f"x must have {spec.dim} coordinates")
    q = spec.q
    phase = np.zeros((q,) * spec.dim)
    for axis, xi in enumerate(x):
        shape = [1] * spec.dim
        shape[axis] = q
        phase = phase + (np.arange(q) * int(xi)).reshape(shape)
    return complex((np.exp(2j * np.pi * phase / q) * spec.values).sum())


def ff_pair_count(E: FFSet, gamma: FFSet, method: str = "brute"):
    """#{(x, y) in E x E : x - y in gamma}.

    ``brute`` enumerates ordered pairs exactly (integer result); ``fourier``
    evaluates |E|^2 |gamma| q^-d + q^(2d) sum_{m != 0} |E_hat(m)|^2
    gamma_hat(m) and returns its real part (the imaginary part must vanish
    to 1e-6).
    """
    if (E.q, E.dim) != (gamma.q, gamma.dim):
        raise ParameterError("E and gamma must live over the same (q, dim)")
    q, d = E.q, E.dim
    if method == "brute":
        pts = E.coords()
        flat = gamma.indicator.ravel()
        strides = np.array([q ** (d - 1 - j) for j in range(d)], dtype=np.int64)
        total = 0
        for i0 in range(0, len(pts), _PAIR_CHUNK):
            block = pts[i0 : i0 + _PAIR_CHUNK]
            diff = (block[:, None, :] - pts[None, :, :]) % q
            total += int(flat[diff @ strides].sum())
        return total
    if method == "fourier":
        e_hat = ff_fourier(E).values
        g_hat = ff_fourier(gamma).values
        weights = (e_hat * e_hat.conj()).real.astype(np.complex128)
        weights.flat[0] = 0.0
        val = E.size**2 * gamma.size / q**d + q ** (2 * d) * (weights * g_hat).sum()
        if abs(val.imag) >= 1e-6:
            raise InputError(f"pair-count imaginary part {val.imag} exceeds 1e-6")
        return float(val.real)
    raise ParameterError(f"unknown method {method!r}")


def sharpness_set(q: int, delta: float, d: int) -> FFSet:
    """The product E = A^(d-1) x B with A = {0, ..., floor(q^(1/2-delta))}
    and B = {0, ..., floor((d-1) q^(1-2 delta))}, all as residues mod q."""
    _validate_field(q, d)
    if d < 2:
        raise ParameterError("sharpness_set needs dim >= 2")
    if not (0.0 < delta <= 0.25):
        raise ParameterError(f"delta must lie in (0, 1/4], got {delta!r}")
    a_max = math.floor(q ** (0.5 - delta))
    b_max = math.floor((d - 1) * q ** (1.0 - 2.0 * delta))
    if b_max >= q:
        raise ParameterError(
            f"(d-1) q^(1-2 delta) = {b_max} wraps around mod q = {q}; increase delta or q"
        )
    indicator = np.zeros((q,) * d, dtype=np.bool_)
    indicator[(slice(0, a_max + 1),) * (d - 1) + (slice(0, b_max + 1),)] = True
    return FFSet(q=q, dim=d, indicator=indicator)


def sharpness_ratio(q: int, delta: float, d: int) -> float:
    """Pair count of the sharpness set against the paraboloid, divided by
    |E|^2 / q. Grows like q^(2 delta), defeating any uniform pair-count
    bound below the |E| ~ q^((d+1)/2) threshold."""
    e = sharpness_set(q, delta, d)
    h = ff_paraboloid(q, d)
    count = ff_pair_count(e, h, method="brute")
    return count * q / e.size**2
