"""Inference error as a function of data quality and model capability."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import ConfigError


class MappingForm(str, Enum):
    ANALYTIC = "analytic"
    TABULATED = "tabulated"


class RateMode(str, Enum):
    UNIT = "unit"
    MEAN_MATCHED = "mean-matched"


@dataclass(frozen=True)
class ErrorMapping:
    """Quality/capability to error-rate map.

    The analytic form is ``alpha * (1 - Q) / D``. The tabulated form holds one
    ``(qualities, errors)`` table per model capability and interpolates
    linearly, holding the end values flat outside the table.
    """

    alpha: float = 1.0
    form: MappingForm = MappingForm.ANALYTIC
    tables: dict[float, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        for cap, (q, e) in self.tables.items():
            _check_table(np.asarray(q), np.asarray(e), f"capability {cap}")


def _check_table(q: np.ndarray, e: np.ndarray, where: str) -> None:
    if q.size == 0:
        raise ConfigError(f"empty error table for {where}")
    if q.shape != e.shape:
        raise ConfigError(f"quality/error columns differ in length for {where}")
    if np.any(np.diff(q) <= 0):
        raise ConfigError(f"quality column must be strictly increasing for {where}")
    if np.any((e < 0) | (e > 1)):
        raise ConfigError(f"error entries must lie in [0, 1] for {where}")


def load_table(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read a two-column ``quality, error`` text table with one header line."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read error table {path}: {exc}") from exc
    rows = [ln.replace(",", " ").split() for ln in text.splitlines()[1:] if ln.strip()]
    try:
        data = np.array(rows, dtype=float)
    except ValueError as exc:
        raise ConfigError(f"malformed error table {path}: {exc}") from exc
    if data.size == 0:
        raise ConfigError(f"empty error table {path}")
    if data.ndim != 2 or data.shape[1] != 2:
        raise ConfigError(f"error table {path} must have exactly two columns")
    q, e = data[:, 0], data[:, 1]
    _check_table(q, e, str(path))
    return q, e


def error_rate(mapping: ErrorMapping, quality: float, capability: float) -> float:
    if not 0.0 <= quality <= 1.0:
        raise ValueError("quality must lie in [0, 1]")
    if capability <= 0:
        raise ValueError("capability must be > 0")
    if mapping.form is MappingForm.ANALYTIC:
        return float(np.clip(mapping.alpha * (1.0 - quality) / capability, 0.0, 1.0))
    table = mapping.tables.get(capability)
    if table is None:
        raise ConfigError(f"no error table for model capability {capability}")
    q, e = table
    return float(np.interp(quality, q, e))


def sample_local_error(
    rng: np.random.Generator,
    mean_error: float,
    size=None,
    mode: RateMode = RateMode.UNIT,
):
    """Realized local inference errors, used only for threshold comparison.

    ``unit`` draws Exp(1) regardless of ``mean_error`` so that
    ``P(X >= t) = exp(-t)`` holds exactly; ``mean-matched`` scales the draw to
    mean ``mean_error``. Draws are not clamped to [0, 1].
    """
    mode = RateMode(mode)
    if mean_error < 0:
        raise ValueError("mean_error must be >= 0")
    scale = 1.0 if mode is RateMode.UNIT else mean_error
    return rng.exponential(scale, size)
