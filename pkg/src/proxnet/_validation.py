"""Small argument checkers shared across modules."""

from __future__ import annotations

import math
from datetime import datetime, timedelta, timezone

import numpy as np

from .exceptions import DomainError, ValidationError


def check_probability(value, name: str) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise ValidationError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def check_open_unit(value, name: str) -> float:
    value = float(value)
    if not (0.0 < value < 1.0):
        raise ValidationError(f"{name} must lie in the open interval (0, 1), got {value!r}")
    return value


def check_duration(value, name: str) -> timedelta:
    """Accept a timedelta or a number of seconds; require it to be positive."""
    if not isinstance(value, timedelta):
        try:
            value = timedelta(seconds=float(value))
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{name} must be a duration, got {value!r}") from exc
    if value <= timedelta(0):
        raise ValidationError(f"{name} must be positive, got {value}")
    return value


def check_utc(value: datetime, name: str) -> datetime:
    if not isinstance(value, datetime):
        raise ValidationError(f"{name} must be a datetime, got {type(value).__name__}")
    if value.tzinfo is None or value.utcoffset() is None:
        raise ValidationError(f"{name} must be timezone-aware")
    return value.astimezone(timezone.utc)


def check_window(start: datetime, end: datetime) -> tuple[datetime, datetime]:
    start = check_utc(start, "window start")
    end = check_utc(end, "window end")
    if end <= start:
        raise ValidationError(f"window end {end} must be after start {start}")
    return start, end


def check_weight_matrix(W) -> np.ndarray:
    """Validate a dense symmetric non-negative weight matrix with an empty diagonal."""
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValidationError(f"expected a square weight matrix, got shape {W.shape}")
    if not np.all(np.isfinite(W)):
        raise ValidationError("weight matrix contains non-finite entries")
    if np.any(W < 0):
        raise ValidationError("weight matrix contains negative entries")
    if not np.array_equal(W, W.T):
        raise ValidationError("weight matrix is not symmetric")
    if np.any(np.diag(W) != 0):
        raise ValidationError("weight matrix has self-loops on the diagonal")
    return W


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or int(value) != value:
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return value


def pair_key(i: str, j: str) -> tuple[str, str]:
    """Canonical key for an unordered pair."""
    return (i, j) if i <= j else (j, i)
