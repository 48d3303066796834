"""
Overflow-safe hyperbolic helpers.

The deformed closed forms are ratios of cosh/sinh at shifted arguments.
Written naively they overflow beyond |y| ~ 355 and cancel badly at small k,
so every formula in fields/schrodinger/perturb goes through these.

All helpers accept floats or numpy arrays and return numpy values.
"""
from __future__ import annotations

from typing import Tuple, Union

import numpy as np
from scipy.special import expit

ArrayLike = Union[float, np.ndarray]

LN2 = float(np.log(2.0))


def as_array(y: ArrayLike) -> Tuple[np.ndarray, bool]:
    """Return (at-least-1d float array, was_scalar)."""
    arr = np.asarray(y, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def as_output(values: np.ndarray, scalar: bool) -> ArrayLike:
    if scalar:
        return float(values.reshape(-1)[0])
    return values


def sech(x: ArrayLike) -> np.ndarray:
    a = np.abs(x)
    e = np.exp(-a)
    return 2.0 * e / (1.0 + e * e)


def logcosh(x: ArrayLike) -> np.ndarray:
    a = np.abs(x)
    return a + np.log1p(np.exp(-2.0 * a)) - LN2


def cosh_fraction(a: ArrayLike, b: ArrayLike) -> np.ndarray:
    """cosh(a) / (cosh(a) + cosh(b)), bounded in (0, 1) for any a, b."""
    return expit(logcosh(a) - logcosh(b))


def sinh_over_cosh_power(n: int, x: float, power: int) -> float:
    """
    sinh(n x) / cosh(x)**power for x > 0.

    Both sides grow like exp(n x) and exp(power x); the ratio is formed from
    exp((n - power) x) so nothing overflows for n <= power.
    """
    if x <= 0:
        raise ValueError(f"sinh_over_cosh_power expects x > 0, got {x!r}")
    num = np.exp((n - power) * x) - np.exp(-(n + power) * x)
    return float(2.0 ** (power - 1) * num / (1.0 + np.exp(-2.0 * x)) ** power)
