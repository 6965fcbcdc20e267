"""Zeta-zero tables: ingestion, normalized spacings, pair correlation and error tables.

Two normalizations of the gaps between ordinates are supported:

``paper``
    u_n = (g_{n+1} - g_n) * ln(g_n) / (2 pi)
``standard``
    u_n = (g_{n+1} - g_n) * ln(g_n / (2 pi)) / (2 pi), the one with unit mean
    density (Riemann-von Mangoldt).
"""

from __future__ import annotations

import io
import math
import re
from dataclasses import dataclass
from typing import IO, List, Sequence, Tuple, Union

import numpy as np

from .dynamics import montgomery_kernel
from .errors import (
    DomainError,
    EmptyTable,
    LengthMismatch,
    MonotonicityError,
    ParseError,
    TooFewZeros,
    ValidationError,
)

CONVENTIONS = ("paper", "standard")

_DECIMAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ZeroTable:
    gammas: np.ndarray
    source: str = ""

    def __len__(self):
        return len(self.gammas)


@dataclass(frozen=True)
class SpacingEnsemble:
    spacings: np.ndarray
    convention: str

    @property
    def mean(self) -> float:
        return float(self.spacings.mean())


@dataclass(frozen=True)
class PairCorrelation:
    bin_centers: np.ndarray
    empirical: np.ndarray
    model: np.ndarray
    counts: np.ndarray
    n_zeros: int
    bin_width: float


@dataclass(frozen=True)
class ErrorTable:
    rows: List[Tuple[int, float, float, float, float]]
    max_abs_error: float


def _numeric_lines(source: Union[IO, str, bytes]):
    """Yield (line_no, line, value) for each data line; blanks and '#' lines skipped."""
    if isinstance(source, bytes):
        source = io.BytesIO(source)
    elif isinstance(source, str):
        source = io.StringIO(source)
    for line_no, raw in enumerate(source, start=1):
        line = (raw.decode("utf-8") if isinstance(raw, bytes) else raw).rstrip("\r\n")
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if not _DECIMAL.fullmatch(text):
            raise ParseError(line_no, line)
        value = float(text)
        if not math.isfinite(value):
            raise ParseError(line_no, line, "value is not finite")
        yield line_no, line, value


def read_values(source: Union[IO, str, bytes]) -> List[float]:
    """One decimal per line, same grammar as zero tables but no ordering constraint."""
    return [v for _, _, v in _numeric_lines(source)]


def load_zeros(source: Union[IO, str, bytes], name: str = "") -> ZeroTable:
    """Parse one ordinate per line; blank lines and '#' comments are skipped.

    ``source`` may be a binary or text stream, or the raw bytes/str content.
    """
    gammas: List[float] = []
    for line_no, line, value in _numeric_lines(source):
        if not value > 0:
            raise ParseError(line_no, line, "ordinate must be positive")
        if gammas and value <= gammas[-1]:
            raise MonotonicityError(len(gammas), gammas[-1], value)
        gammas.append(value)
    if not gammas:
        raise EmptyTable(f"no ordinates found in {name or 'input'}")
    arr = np.array(gammas)
    arr.flags.writeable = False
    return ZeroTable(gammas=arr, source=name)


def _density_factor(gammas: np.ndarray, convention: str) -> np.ndarray:
    if convention == "paper":
        return np.log(gammas)
    if convention == "standard":
        return np.log(gammas / TWO_PI)
    raise ValidationError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def normalized_spacings(z: ZeroTable, convention: str = "paper") -> SpacingEnsemble:
    g = np.asarray(z.gammas, dtype=float)
    if len(g) < 2:
        raise TooFewZeros(f"need at least 2 zeros, got {len(g)}")
    u = np.diff(g) * _density_factor(g[:-1], convention) / TWO_PI
    return SpacingEnsemble(spacings=u, convention=convention)


def pair_correlation_empirical(
    z: ZeroTable, max_u: float, bins: int, convention: str = "paper"
) -> PairCorrelation:
    """Montgomery-style pair count.

    Every ordered pair i < j contributes u_ij = (g_j - g_i) d_i / (2 pi), with
    d_i the density factor at the lower ordinate. Values in (0, max_u] are
    binned into bins of width du = max_u / bins, bin b covering
    (b du, (b+1) du]; the density estimate is count / (N du).
    """
    if not max_u > 0:
        raise ValidationError(f"max_u must be positive, got {max_u!r}")
    if bins < 1:
        raise ValidationError(f"bins must be >= 1, got {bins}")
    g = np.asarray(z.gammas, dtype=float)
    n = len(g)
    if n < 2:
        raise TooFewZeros(f"need at least 2 zeros, got {n}")
    d = _density_factor(g, convention) / TWO_PI
    du = max_u / bins
    counts = np.zeros(bins, dtype=np.int64)
    for i in range(n - 1):
        # ordinates are sorted, so u_ij grows with j; stop at the first j beyond max_u
        reach = g[i] + max_u / d[i] if d[i] > 0 else math.inf
        hi = int(np.searchsorted(g, reach, side="right")) + 1
        u = (g[i + 1 : hi] - g[i]) * d[i]
        u = u[(u > 0) & (u <= max_u)]
        idx = np.ceil(u / du).astype(np.int64) - 1
        np.clip(idx, 0, bins - 1, out=idx)
        counts += np.bincount(idx, minlength=bins)
    centers = (np.arange(bins) + 0.5) * du
    empirical = counts / (n * du)
    model = np.array([montgomery_kernel(c) for c in centers])
    return PairCorrelation(
        bin_centers=centers, empirical=empirical, model=model, counts=counts, n_zeros=n, bin_width=du
    )


def compare_model(pc: PairCorrelation, u_lo: float = -math.inf, u_hi: float = math.inf) -> Tuple[float, float]:
    """(max |empirical - model|, mean (empirical - model)^2) over bins with centers in [u_lo, u_hi]."""
    sel = (pc.bin_centers >= u_lo) & (pc.bin_centers <= u_hi)
    if not np.any(sel):
        raise ValidationError("no bins selected")
    dev = np.asarray(pc.empirical)[sel] - np.asarray(pc.model)[sel]
    return float(np.max(np.abs(dev))), float(np.mean(dev * dev))


def zero_density(E: float) -> float:
    """Smoothed counting density ln(E) / (2 pi)."""
    if not E > 1:
        raise DomainError(f"density law needs E > 1, got {E!r}")
    return math.log(E) / TWO_PI


def error_table(a: Sequence[float], b: Sequence[float]) -> ErrorTable:
    """Rows (k, a_k, b_k, a_k - b_k, |a_k - b_k|) with 1-based k."""
    if len(a) != len(b):
        raise LengthMismatch(f"sequences differ in length: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise LengthMismatch("sequences are empty")
    rows = []
    for k, (x, y) in enumerate(zip(a, b), start=1):
        diff = float(x) - float(y)
        rows.append((k, float(x), float(y), diff, abs(diff)))
    return ErrorTable(rows=rows, max_abs_error=max(r[4] for r in rows))


def harmonic_reference(n: int) -> List[float]:
    """(k + 1) / k for k = 1..n."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    return [(k + 1) / k for k in range(1, n + 1)]
