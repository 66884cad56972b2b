"""Scaling experiments: run a counter over a size ladder, fit the log-log
exponent, and compare it against the predicted one.

Every experiment is deterministic given its parameters; the seed and thread
count are recorded in the output so runs can be reproduced byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, ParameterError
from .ffield import sharpness_ratio
from .gauge import EUCLIDEAN, Gauge
from .incidence import annulus_incidences, exact_valtr_incidences, falconer_measure_ratio
from .energy import adaptability_sum
from .latticecount import ball_count, lattice_incidence_total
from .pointsets import gen_lenz, gen_mattila2, gen_mattila3, gen_valtr

DEFAULT_TOLERANCE = 0.12

TWO_SIDED = "two_sided"
UPPER_BOUND = "upper_bound"


@dataclass(frozen=True)
class ScalingSeries:
    """A fitted (size, value) ladder with the predicted exponent and verdict."""

    experiment: str
    points: tuple[tuple[int, float], ...]
    fitted_slope: float
    slope_stderr: float
    predicted: float
    tolerance: float
    comparison: str
    verdict: str
    params: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if len(self.points) < 3:
            raise InputError("a scaling series needs at least 3 ladder points")
        if any(v <= 0 for _, v in self.points):
            raise InputError("scaling series values must be positive")


def fit_exponent(series) -> tuple[float, float]:
    """Least-squares slope of log(value) against log(N), with its standard
    error (0 for an exact power law)."""
    pts = [(int(n), float(v)) for n, v in series]
    if len(pts) < 3:
        raise InputError("need at least 3 points to fit an exponent")
    ns = [n for n, _ in pts]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise InputError("ladder sizes must be strictly increasing")
    if any(v <= 0 for _, v in pts):
        raise InputError("values must be positive for a log-log fit")
    x = np.log([n for n, _ in pts])
    y = np.log([v for _, v in pts])
    xc = x - x.mean()
    sxx = float((xc * xc).sum())
    slope = float((xc * y).sum() / sxx)
    resid = y - (y.mean() + slope * xc)
    dof = len(pts) - 2
    stderr = math.sqrt(float((resid * resid).sum()) / dof / sxx) if dof > 0 else 0.0
    return slope, stderr


@dataclass(frozen=True)
class CrossoverReport:
    """Annulus incidences of a Mattila-type set versus the lattice incidence
    total at the nearest lattice size, at one common scale."""

    dim: int
    s: float
    mattila_points: int
    mattila_count: int
    lattice_points: int
    lattice_count: int
    mattila_wins: bool
    predicted_mattila_wins: bool
    inside_validity_window: bool


def _mattila_set(dim: int, alpha: float | None, delta: float | None, level: int):
    if dim == 2:
        return gen_mattila2(alpha, level)
    return gen_mattila3(delta, level)


def mattila_lattice_crossover(
    dim: int,
    level: int,
    alpha: float | None = None,
    delta: float | None = None,
    threads: int = 1,
) -> CrossoverReport:
    """Compare measured annulus incidences (radius 1, thickness N^(-1/s))
    of the Mattila-type set at ``level`` against the lattice total N * a at
    the nearest perfect-power size."""
    if dim == 2:
        if alpha is None:
            raise ParameterError("dim 2 crossover needs alpha")
        s = 1.0 + alpha
    elif dim == 3:
        if delta is None:
            raise ParameterError("dim 3 crossover needs delta")
        s = 2.0 - 1.5 * delta
    else:
        raise ParameterError(f"dim must be 2 or 3, got {dim!r}")
    pset = _mattila_set(dim, alpha, delta, level)
    n_pts = pset.n_points
    eps = n_pts ** (-1.0 / s)
    count = annulus_incidences(pset, Gauge(EUCLIDEAN, dim), 1.0, eps, threads=threads).count
    k = round(n_pts ** (1.0 / dim))
    lattice_n = k**dim
    lat = lattice_incidence_total(dim, lattice_n, s)
    predicted = s < 1.5 if dim == 2 else s < 2.0
    return CrossoverReport(
        dim=dim,
        s=s,
        mattila_points=n_pts,
        mattila_count=count,
        lattice_points=lattice_n,
        lattice_count=lat.incidences,
        mattila_wins=count > lat.incidences,
        predicted_mattila_wins=predicted,
        inside_validity_window=lat.valid,
    )


def _run_valtr_incidence(d, ladder, threads):
    ladder = ladder or {2: [8, 16, 32, 64], 3: [4, 8, 16], 4: [3, 4, 6, 8]}[d]
    pts = [(n ** (d + 1), float(exact_valtr_incidences(n, d).count)) for n in ladder]
    return pts, 2.0 - 2.0 / (d + 1), TWO_SIDED, {"d": d, "ladder_n": ladder}


def _run_falconer_ratio(d, s, ladder, threads):
    ladder = ladder or {2: [4, 8, 16, 32], 3: [4, 8, 16]}[d]
    pts = []
    for n in ladder:
        rec = falconer_measure_ratio(n, d, s)
        pts.append((rec.n_points, rec.ratio))
    return pts, 1.0 / s - 2.0 / (d + 1), TWO_SIDED, {"d": d, "s": s, "ladder_n": ladder}


def _run_lenz_energy(s, ladder, threads):
    ladder = ladder or [64, 128, 256, 512, 1024, 2048]
    pts = [(N, adaptability_sum(gen_lenz(N), s, threads=threads).lambda_s) for N in ladder]
    return pts, s - 1.0, TWO_SIDED, {"s": s, "ladder_N": ladder}


def _run_valtr_energy(d, s, ladder, threads):
    ladder = ladder or [4, 8, 16, 32]
    pts = [
        (n ** (d + 1), adaptability_sum(gen_valtr(n, d), s, threads=threads).lambda_s)
        for n in ladder
    ]
    return pts, 0.0, TWO_SIDED, {"d": d, "s": s, "ladder_n": ladder}


def _mattila_series(dim, alpha, delta, ladder, threads):
    s = 1.0 + alpha if dim == 2 else 2.0 - 1.5 * delta
    pts = []
    for level in ladder:
        pset = _mattila_set(dim, alpha, delta, level)
        eps = pset.n_points ** (-1.0 / s)
        rep = annulus_incidences(pset, Gauge(EUCLIDEAN, dim), 1.0, eps, threads=threads)
        pts.append((pset.n_points, float(rep.count)))
    return pts, s


def _run_mattila2_incidence(alpha, ladder, threads):
    ladder = ladder or [1, 2, 3, 4]
    pts, s = _mattila_series(2, alpha, None, ladder, threads)
    cross = mattila_lattice_crossover(2, ladder[-1], alpha=alpha, threads=threads)
    extra = {
        "alpha": alpha,
        "s": s,
        "ladder_levels": ladder,
        "crossover_mattila_wins": cross.mattila_wins,
        "crossover_predicted": cross.predicted_mattila_wins,
        "crossover_valid_window": cross.inside_validity_window,
    }
    return pts, 1.0 + 1.0 / (2.0 * s), TWO_SIDED, extra


def _run_mattila3_incidence(delta, ladder, threads):
    ladder = ladder or [1, 2, 3, 4]
    pts, s = _mattila_series(3, None, delta, ladder, threads)
    alpha = 1.0 - delta
    beta = delta / 2.0
    cross = mattila_lattice_crossover(3, ladder[-1], delta=delta, threads=threads)
    extra = {
        "delta": delta,
        "s": s,
        "ladder_levels": ladder,
        "crossover_mattila_wins": cross.mattila_wins,
        "crossover_predicted": cross.predicted_mattila_wins,
        "crossover_valid_window": cross.inside_validity_window,
    }
    return pts, 1.0 + alpha / (2.0 * alpha + beta), TWO_SIDED, extra


def _run_lattice_incidence(dim, s, ladder, threads):
    ladder = ladder or {2: [20, 40, 80, 160], 3: [7, 10, 13, 16]}[dim]
    pts = []
    valid = None
    for k in ladder:
        rec = lattice_incidence_total(dim, k**dim, s)
        valid = rec.valid
        pts.append((rec.n_points, float(rec.incidences)))
    return pts, 2.0 - 1.0 / s, TWO_SIDED, {"dim": dim, "s": s, "ladder_k": ladder, "valid": valid}


def _run_gauss_discrepancy(dim, ladder, threads):
    ladder = ladder or {2: [64, 128, 256, 512, 1024, 2048, 4096, 8192], 3: [16, 32, 64, 128, 256, 512]}[dim]
    pts = [(R, abs(ball_count(dim, R).discrepancy)) for R in ladder]
    predicted = 131.0 / 208.0 if dim == 2 else 21.0 / 16.0
    return pts, predicted, UPPER_BOUND, {"dim": dim, "ladder_R": ladder}


def _run_ff_sharpness(delta, d, ladder, threads):
    ladder = ladder or [101, 211, 401, 809]
    pts = [(q, sharpness_ratio(q, delta, d)) for q in ladder]
    return pts, 2.0 * delta, TWO_SIDED, {"delta": delta, "d": d, "ladder_q": ladder}


EXPERIMENTS = (
    "valtr-incidence",
    "falconer-ratio",
    "lenz-energy",
    "valtr-energy",
    "mattila2-incidence",
    "mattila3-incidence",
    "lattice-incidence",
    "gauss-discrepancy",
    "ff-sharpness",
)


def run_experiment(
    experiment: str,
    *,
    d: int | None = None,
    s: float | None = None,
    alpha: float | None = None,
    delta: float | None = None,
    dim: int | None = None,
    ladder=None,
    tolerance: float | None = None,
    seed: int = 0,
    threads: int = 1,
) -> ScalingSeries:
    """Run a registered experiment over its ladder and return the fitted
    series with a pass/fail verdict at the given tolerance."""
    ladder = list(ladder) if ladder is not None else None
    if ladder is not None and len(ladder) < 3:
        raise ParameterError("ladder needs at least 3 rungs")
    if experiment == "valtr-incidence":
        out = _run_valtr_incidence(d or 2, ladder, threads)
    elif experiment == "falconer-ratio":
        out = _run_falconer_ratio(d or 2, 1.4 if s is None else s, ladder, threads)
    elif experiment == "lenz-energy":
        out = _run_lenz_energy(1.5 if s is None else s, ladder, threads)
    elif experiment == "valtr-energy":
        out = _run_valtr_energy(d or 2, 1.2 if s is None else s, ladder, threads)
    elif experiment == "mattila2-incidence":
        out = _run_mattila2_incidence(0.48 if alpha is None else alpha, ladder, threads)
    elif experiment == "mattila3-incidence":
        out = _run_mattila3_incidence(1.0 / 15.0 if delta is None else delta, ladder, threads)
    elif experiment == "lattice-incidence":
        out = _run_lattice_incidence(dim or 2, 1.48 if s is None else s, ladder, threads)
    elif experiment == "gauss-discrepancy":
        out = _run_gauss_discrepancy(dim or 2, ladder, threads)
    elif experiment == "ff-sharpness":
        out = _run_ff_sharpness(0.1 if delta is None else delta, d or 2, ladder, threads)
    else:
        raise ParameterError(f"unknown experiment {experiment!r}; known: {', '.join(EXPERIMENTS)}")
    points, predicted, comparison, extra = out
    tol = DEFAULT_TOLERANCE if tolerance is None else float(tolerance)
    if tol < 0:
        raise ParameterError("tolerance must be nonnegative")
    slope, stderr = fit_exponent(points)
    if comparison == TWO_SIDED:
        ok = abs(slope - predicted) <= tol
    else:
        ok = slope <= predicted + tol
    params = dict(extra)
    params["seed"] = seed
    params["threads"] = threads
    return ScalingSeries(
        experiment=experiment,
        points=tuple((int(n), float(v)) for n, v in points),
        fitted_slope=slope,
        slope_stderr=stderr,
        predicted=predicted,
        tolerance=tol,
        comparison=comparison,
        verdict="pass" if ok else "fail",
        params=tuple((k, json.dumps(v)) for k, v in params.items()),
    )


def emit(series: ScalingSeries, fmt: str) -> str:
    """Render a series as csv, json or gnuplot text with a stable schema."""
    if fmt == "csv":
        lines = ["N,value"]
        lines += [f"{n},{v!r}" for n, v in series.points]
        lines.append(
            f"# slope={series.fitted_slope!r} stderr={series.slope_stderr!r} "
            f"predicted={series.predicted!r} tolerance={series.tolerance!r} "
            f"comparison={series.comparison} verdict={series.verdict}"
        )
        return "\n".join(lines) + "\n"
    if fmt == "json":
        obj = {
            "experiment": series.experiment,
            "points": [[n, v] for n, v in series.points],
            "fitted_slope": series.fitted_slope,
            "slope_stderr": series.slope_stderr,
            "predicted": series.predicted,
            "tolerance": series.tolerance,
            "comparison": series.comparison,
            "verdict": series.verdict,
            "params": {k: v for k, v in series.params},
        }
        return json.dumps(obj, indent=2) + "\n"
    if fmt == "gnuplot":
        lines = [
            f"# experiment: {series.experiment}",
            f"# slope={series.fitted_slope!r} stderr={series.slope_stderr!r} "
            f"predicted={series.predicted!r} tolerance={series.tolerance!r} "
            f"comparison={series.comparison} verdict={series.verdict}",
        ]
        lines += [f"{n} {v!r}" for n, v in series.points]
        return "\n".join(lines) + "\n"
    raise ParameterError(f"unknown format {fmt!r}")


def parse_series(text: str) -> ScalingSeries:
    """Inverse of emit(..., 'json')."""
    obj = json.loads(text)
    return ScalingSeries(
        experiment=obj["experiment"],
        points=tuple((int(n), float(v)) for n, v in obj["points"]),
        fitted_slope=float(obj["fitted_slope"]),
        slope_stderr=float(obj["slope_stderr"]),
        predicted=float(obj["predicted"]),
        tolerance=float(obj["tolerance"]),
        comparison=obj["comparison"],
        verdict=obj["verdict"],
        params=tuple((k, v) for k, v in obj["params"].items()),
    )
