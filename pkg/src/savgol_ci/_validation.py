"""Input validation helpers shared by the functional API and the estimators."""

import numbers

import numpy as np

from .exceptions import SeriesTooShortError


def check_series(y, name="y", min_length=1):
    """Return ``y`` as a finite 1-D float array.

    Column vectors of shape (q, 1) are accepted and flattened, which lets
    the estimators take the usual ``X`` argument.
    """
    arr = np.asarray(y, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    if arr.size < min_length:
        raise SeriesTooShortError(
            f"{name} has {arr.size} samples; at least {min_length} required",
            minimum=min_length,
        )
    return arr


def check_same_length(a, b, names=("y", "yf"), min_length=1):
    a = check_series(a, names[0], min_length)
    b = check_series(b, names[1], min_length)
    if a.shape != b.shape:
        raise ValueError(
            f"{names[0]} and {names[1]} differ in length ({a.size} != {b.size})"
        )
    return a, b


def check_int(value, name, minimum=None):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_probability(level, name="level"):
    level = float(level)
    if not 0.0 < level < 1.0:
        raise ValueError(f"{name} must lie strictly between 0 and 1, got {level}")
    return level
