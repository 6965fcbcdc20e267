"""Tridiagonal discretization of the small-x dynamics and its level statistics.

The operator acts as ``(T psi)_j = psi_{j+1} - pi^2 h^2 j^2 psi_j``. Written as
a matrix it has a diagonal and a unit superdiagonal only, so it is upper
triangular and its eigenvalues are the diagonal entries. The ``symmetrized``
variant adds a unit subdiagonal, giving a real symmetric tridiagonal matrix
with a non-trivial spectrum. It is an extension, not the printed operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .chaos import Histogram, build_histogram
from .dynamics import PI2, LyapunovFunctionParams, lyapunov_function_small
from .errors import ConvergenceError, DegenerateSpectrum, DimensionError, DomainError

UNFOLD_DEGREE = 5
SPACING_RANGE = (0.0, 4.0)
SPACING_BINS = 40


@dataclass(frozen=True)
class DiscretizedOperator:
    n: int
    h: float
    diagonal: np.ndarray
    superdiagonal: np.ndarray
    symmetrized: bool = False

    def to_dense(self) -> np.ndarray:
        m = np.diag(self.diagonal) + np.diag(self.superdiagonal, 1)
        if self.symmetrized:
            m += np.diag(self.superdiagonal, -1)
        return m


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray


@dataclass(frozen=True)
class SpacingStats:
    unfolded: np.ndarray
    spacings: np.ndarray
    spacing_hist: Histogram
    mean_spacing: float


def build_operator(n: int, h: Optional[float] = None, symmetrized: bool = False) -> DiscretizedOperator:
    """T_h of dimension n; h defaults to 1/n."""
    if n < 2:
        raise DimensionError(f"dimension must be >= 2, got {n}")
    if h is None:
        h = 1.0 / n
    if not (h > 0 and math.isfinite(h)):
        raise DimensionError(f"step h must be positive, got {h!r}")
    j = np.arange(1, n + 1, dtype=float)
    return DiscretizedOperator(
        n=n,
        h=float(h),
        diagonal=-PI2 * h * h * j * j,
        superdiagonal=np.ones(n - 1),
        symmetrized=symmetrized,
    )


def eigenvalues(op: DiscretizedOperator) -> Spectrum:
    if not op.symmetrized:
        # triangular: the spectrum is the diagonal
        return Spectrum(eigenvalues=np.sort(op.diagonal))
    try:
        w = eigh_tridiagonal(op.diagonal, op.superdiagonal, eigvals_only=True)
    except LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    return Spectrum(eigenvalues=np.sort(w))


def gaussian_weight_vector(op: DiscretizedOperator, p: LyapunovFunctionParams = LyapunovFunctionParams()) -> np.ndarray:
    """Diagnostic psi_j = sqrt(h) V(x_j) at x_j = j h, with V the small-x Lyapunov function."""
    x = op.h * np.arange(1, op.n + 1)
    return math.sqrt(op.h) * np.array([lyapunov_function_small(v, p) for v in x])


def unfold_spectrum(s: Spectrum) -> SpacingStats:
    """Rank-based polynomial unfolding.

    Fits the staircase k(E_k) = k with a degree-5 least-squares polynomial,
    takes consecutive differences of the fitted staircase and rescales them to
    unit mean. Spacings are histogrammed on [0, 4) with 40 bins.
    """
    e = np.sort(np.asarray(s.eigenvalues, dtype=float))
    n = len(e)
    if n < 3:
        raise DegenerateSpectrum(f"need at least 3 levels, got {n}")
    raw_gaps = np.diff(e)
    if np.count_nonzero(raw_gaps < 1e-12) > 0.1 * len(raw_gaps):
        raise DegenerateSpectrum("more than 10% of level gaps are below 1e-12")
    deg = min(UNFOLD_DEGREE, n - 1)
    staircase = Polynomial.fit(e, np.arange(n, dtype=float), deg)
    levels = staircase(e)
    gaps = np.diff(levels)
    scale = gaps.mean()
    spacings = gaps / scale
    hist = build_histogram(spacings, SPACING_BINS, *SPACING_RANGE)
    return SpacingStats(
        unfolded=levels / scale,
        spacings=spacings,
        spacing_hist=hist,
        mean_spacing=float(spacings.mean()),
    )


def spacing_density(hist: Histogram) -> np.ndarray:
    """Histogram counts as a probability density (counts / (total * width))."""
    return hist.counts / (hist.total * np.diff(hist.edges))


def wigner_surmise_gue(s: float) -> float:
    """GUE nearest-neighbour spacing density (32/pi^2) s^2 exp(-4 s^2 / pi)."""
    if s < 0:
        raise DomainError(f"spacing must be non-negative, got {s!r}")
    return 32.0 / PI2 * s * s * math.exp(-4.0 * s * s / math.pi)
