"""Lyapunov exponents, histograms, entropies, eps sweeps and the exponential model."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence

import numpy as np

from .dynamics import MapParams, iterate, step_derivative
from .errors import DegenerateOrbit, EmptyInput, NonUniformGrid, ValidationError


@dataclass(frozen=True)
class LyapunovSeries:
    """Running exponent estimates; ``lambdas[k]`` averages ln|f'| over the first k orbit points."""

    x0: float
    params: MapParams
    lambdas: np.ndarray
    truncated: bool = False


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    total: int

    @property
    def bins(self) -> int:
        return len(self.counts)

    @property
    def dropped(self) -> int:
        return self.total - int(self.counts.sum())

    @property
    def probabilities(self) -> np.ndarray:
        return self.counts / self.total

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


@dataclass(frozen=True)
class BifurcationDiagram:
    param_name: str
    param_values: np.ndarray
    samples: List[np.ndarray]
    truncated: List[bool] = field(default_factory=list)


@dataclass(frozen=True)
class ExponentialModel:
    rate: float

    def __post_init__(self):
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ValidationError(f"rate must be positive and finite, got {self.rate!r}")


def running_lyapunov(points: Sequence[float], derivative: Callable[[float], float]) -> np.ndarray:
    """Time averages of ln|derivative| along ``points``.

    Returns an array of length ``len(points) + 1``: entry 0 is 0 by convention
    and entry k is the mean of ln|derivative(points[i])| over i < k.
    """
    logs = np.empty(len(points))
    for i, x in enumerate(points):
        d = derivative(x)
        if d == 0.0:
            raise DegenerateOrbit(i, x)
        logs[i] = math.log(abs(d))
    out = np.zeros(len(points) + 1)
    out[1:] = np.cumsum(logs) / np.arange(1, len(points) + 1)
    return out


def orbit_lyapunov(
    f: Callable[[float], float], df: Callable[[float], float], x0: float, n: int
) -> np.ndarray:
    """Apply the running estimator to an arbitrary 1-D map; returns n estimates."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    points = [x0]
    for _ in range(n - 2):
        points.append(f(points[-1]))
    return running_lyapunov(points[: n - 1], df)


def lyapunov_exponents(x0: float, n: int, params: MapParams = MapParams()) -> LyapunovSeries:
    """n running exponent estimates along the orbit of x0.

    The estimate after k iterations uses f' at x_0 .. x_{k-1}, so only n - 1
    steps of the map are needed. A truncated orbit yields a shorter series.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    traj = iterate(x0, n - 1, params)
    points = traj.values[:-1]
    lambdas = running_lyapunov(points, lambda x: step_derivative(x, params))
    lambdas.flags.writeable = False
    return LyapunovSeries(x0=float(x0), params=params, lambdas=lambdas, truncated=traj.terminated_early)


def build_histogram(values: Sequence[float], bins: int, lo: float, hi: float) -> Histogram:
    """Uniform bins over the half-open range [lo, hi); values outside are dropped but counted in total."""
    if bins < 1:
        raise ValidationError(f"bins must be >= 1, got {bins}")
    if not lo < hi:
        raise ValidationError(f"need lo < hi, got [{lo!r}, {hi!r})")
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise EmptyInput("cannot histogram an empty sequence")
    inside = v[(v >= lo) & (v < hi)]
    idx = np.floor((inside - lo) / (hi - lo) * bins).astype(np.int64)
    np.clip(idx, 0, bins - 1, out=idx)
    counts = np.bincount(idx, minlength=bins)
    return Histogram(edges=np.linspace(lo, hi, bins + 1), counts=counts, total=int(v.size))


def shannon_entropy(h: Histogram) -> float:
    """-sum p log2 p in bits, p = counts / total, empty bins contribute 0."""
    if h.total <= 0:
        raise ValidationError("histogram has no samples")
    p = h.counts[h.counts > 0] / h.total
    return -math.fsum(p * np.log2(p))


def differential_entropy(density_samples) -> float:
    """Trapezoidal -integral P ln P dy from (y, P(y)) samples on a uniform grid."""
    s = np.asarray(density_samples, dtype=float)
    if s.ndim != 2 or s.shape[1] != 2:
        raise ValidationError("expected a sequence of (y, P(y)) pairs")
    if len(s) < 2:
        raise EmptyInput("need at least two density samples")
    y, p = s[:, 0], s[:, 1]
    dy = np.diff(y)
    mean_dy = dy.mean()
    if mean_dy <= 0 or np.max(np.abs(dy - mean_dy)) > 1e-9 * mean_dy:
        raise NonUniformGrid("y must be increasing with constant spacing (relative 1e-9)")
    if np.any(p < 0):
        raise ValidationError("density must be non-negative")
    integrand = np.zeros_like(p)
    pos = p > 0
    integrand[pos] = -p[pos] * np.log(p[pos])
    return float(np.trapezoid(integrand, y))


def bifurcation_scan(
    x0: float,
    eps_lo: float,
    eps_hi: float,
    steps: int,
    n_transient: int,
    n_sample: int,
) -> BifurcationDiagram:
    """Sweep eps over a uniform grid, keeping the last n_sample orbit values per eps.

    Each column is exactly the tail of ``iterate(x0, n_transient + n_sample)``;
    runs that end early keep whatever tail they reached and are flagged.
    """
    if not eps_lo < eps_hi:
        raise ValidationError(f"need eps_lo < eps_hi, got {eps_lo!r}, {eps_hi!r}")
    if steps < 2:
        raise ValidationError(f"steps must be >= 2, got {steps}")
    if n_transient < 0 or n_sample < 1:
        raise ValidationError("need n_transient >= 0 and n_sample >= 1")
    grid = np.linspace(eps_lo, eps_hi, steps)
    samples, truncated = [], []
    for eps in grid:
        traj = iterate(x0, n_transient + n_sample, MapParams(eps=float(eps)))
        samples.append(np.array(traj.values[n_transient + 1 :]))
        truncated.append(traj.terminated_early)
    return BifurcationDiagram(param_name="eps", param_values=grid, samples=samples, truncated=truncated)


def exponential_pdf(x: float, m: ExponentialModel) -> float:
    if x < 0:
        return 0.0
    return m.rate * math.exp(-m.rate * x)


def exponential_mean(m: ExponentialModel) -> float:
    return 1.0 / m.rate
