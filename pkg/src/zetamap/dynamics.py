"""The Montgomery-inspired map and its analytic companions.

The map is

    f(x) = 1 - sinc(pi / x)**2 + eps / x

where ``1 - sinc(pi u)**2`` is Montgomery's pair-correlation kernel evaluated
at ``u = 1/x`` and ``eps / x`` stands in for the (non-computable) delta term.
``eps = 1`` is the system studied in the literature; other values are used by
the bifurcation sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, MapOverflowError, ValidationError

PI2 = math.pi * math.pi
#: slope of the large-x linearization y -> (pi^2/6) y
LARGE_X_SLOPE = PI2 / 6.0
#: Lyapunov exponent of the large-x linearization
LARGE_X_EXPONENT = math.log(LARGE_X_SLOPE)

# below this |t| the kernel is evaluated from its Taylor series
_SERIES_CUTOFF = 1e-2


@dataclass(frozen=True)
class MapParams:
    eps: float = 1.0
    min_abs_x: float = 1e-300

    def __post_init__(self):
        if not math.isfinite(self.eps):
            raise ValidationError(f"eps must be finite, got {self.eps!r}")
        if not (self.min_abs_x > 0 and math.isfinite(self.min_abs_x)):
            raise ValidationError(f"min_abs_x must be a positive number, got {self.min_abs_x!r}")


@dataclass(frozen=True)
class LyapunovFunctionParams:
    c1: float = 1.0
    c2: float = 1.0

    def __post_init__(self):
        if not (self.c1 > 0 and self.c2 > 0):
            raise ValidationError(f"c1 and c2 must be positive, got c1={self.c1!r}, c2={self.c2!r}")


@dataclass(frozen=True)
class Trajectory:
    """Orbit ``values[0] = x0, values[k+1] = step(values[k])``.

    If a step fails (collapse onto the singularity at 0 or overflow) the orbit
    is truncated: ``terminated_early`` is set and ``failed_at`` is the index of
    the last stored value, the one whose image could not be computed.
    """

    x0: float
    params: MapParams
    values: np.ndarray
    terminated_early: bool = False
    failed_at: Optional[int] = None
    reason: str = ""
    requested_steps: int = field(default=0)

    @property
    def steps(self) -> int:
        return len(self.values) - 1

    @property
    def has_negative(self) -> bool:
        return bool(np.any(self.values < 0))


def sinc(t: float) -> float:
    """Unnormalized sinc, sin(t)/t, with the removable singularity filled in."""
    if t == 0.0:
        return 1.0
    return math.sin(t) / t


def _one_minus_sinc_sq(t: float) -> float:
    # 1 - sinc(t)^2 loses all precision to cancellation for small t; use
    # t^2/3 - 2t^4/45 + t^6/315 there (next term 2t^8/14175).
    if abs(t) < _SERIES_CUTOFF:
        t2 = t * t
        return t2 * (1.0 / 3.0 - t2 * (2.0 / 45.0 - t2 / 315.0))
    s = math.sin(t) / t
    return 1.0 - s * s


def montgomery_kernel(u: float) -> float:
    """Pair-correlation kernel ``1 - (sin(pi u) / (pi u))**2`` (no delta term)."""
    return _one_minus_sinc_sq(math.pi * u)


def _check_x(x: float, params: MapParams) -> None:
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    if abs(x) < params.min_abs_x:
        raise DomainError(f"|x| = {abs(x)!r} is below the guard {params.min_abs_x!r}")


def step(x: float, params: MapParams = MapParams()) -> float:
    """One application of the map.

    Raises DomainError for |x| < params.min_abs_x and MapOverflowError when the
    image is not finite.
    """
    _check_x(x, params)
    y = _one_minus_sinc_sq(math.pi / x) + params.eps / x
    if not math.isfinite(y):
        raise MapOverflowError(f"step({x!r}) is not finite")
    return y


def step_derivative(x: float, params: MapParams = MapParams()) -> float:
    """Analytic f'(x) = -2 s s' - eps/x^2 with s = sinc(pi/x)."""
    _check_x(x, params)
    t = math.pi / x
    sin_t, cos_t = math.sin(t), math.cos(t)
    s = sin_t / t
    ds = sin_t / math.pi - cos_t / x
    d = -2.0 * s * ds - params.eps / (x * x)
    if not math.isfinite(d):
        raise MapOverflowError(f"f'({x!r}) is not finite")
    return d


def iterate(x0: float, n: int, params: MapParams = MapParams()) -> Trajectory:
    """Orbit of length up to n + 1 starting at x0; failures truncate the orbit."""
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    _check_x(x0, params)
    values = [float(x0)]
    failed_at = None
    reason = ""
    x = float(x0)
    for k in range(n):
        try:
            x = step(x, params)
        except (DomainError, MapOverflowError) as exc:
            failed_at, reason = k, str(exc)
            break
        if abs(x) < params.min_abs_x:
            failed_at = k
            reason = f"orbit collapsed onto the singularity: x_{k + 1} = {x!r}"
            break
        values.append(x)
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return Trajectory(
        x0=float(x0),
        params=params,
        values=arr,
        terminated_early=failed_at is not None,
        failed_at=failed_at,
        reason=reason,
        requested_steps=n,
    )


def linear_step_small(x: float) -> float:
    """Small-x linearization x -> 1 - pi^2 x^2."""
    return 1.0 - PI2 * x * x


def linear_step_large(y: float) -> float:
    """Large-x linearization in y = 1/x: y -> (pi^2/6) y."""
    return LARGE_X_SLOPE * y


def lyapunov_function_small(x: float, p: LyapunovFunctionParams = LyapunovFunctionParams()) -> float:
    # exp overflows for x below about -5.9; underflows to 0.0 for x above about 5.9
    try:
        return p.c1 * math.exp(-PI2 * x**3 / 3.0)
    except OverflowError:
        return math.inf


def lyapunov_function_large(n: int, p: LyapunovFunctionParams = LyapunovFunctionParams()) -> float:
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    return p.c2 * LARGE_X_SLOPE**n
