"""
Defect families, the perturbative deformation and static field quantities.

The deformation replaces a primitive defect by the symmetric difference
quotient of its antiderivative,

    phi_k(y) = (G(y + k) - G(y - k)) / (2k),   G' = primitive field,

which gives closed forms for all three families. Those closed forms are 0/0
at k = 0; below EPS_K the Taylor series of the difference quotient is used
instead.

Every y argument may be a float (float returned) or a numpy array.
"""
from __future__ import annotations

import logging
import math
from typing import Callable, Dict, List, Tuple, Union

import numpy as np

from .families import constants_for
from .hyperbolic import (
    LN2,
    ArrayLike,
    as_array,
    as_output,
    cosh_fraction,
    logcosh,
    sech,
)
from .models import DefectFamily, DeformParam, Grid, Profile, QuadResult
from .numerics import DEFAULT_LIMIT, DEFAULT_TOL, quad_line

logger = logging.getLogger(__name__)

K = Union[float, DeformParam]

# Odd-power Taylor coefficients used by the mass closed forms below 2k = 1.
# sum_n c_n x^(2n+1), n = 0..N-1
_MASS_SERIES_TERMS = 30
_X_COSH_MINUS_SINH = np.array(
    [2 * n / math.factorial(2 * n + 1) for n in range(_MASS_SERIES_TERMS)]
)
_SINH_MINUS_X = np.array(
    [0.0 if n == 0 else 1.0 / math.factorial(2 * n + 1) for n in range(_MASS_SERIES_TERMS)]
)
# sinh 3x + 9 sinh x - 12 x cosh x
_LUMP_MASS_NUMERATOR = np.array(
    [
        (3 ** (2 * n + 1) + 9) / math.factorial(2 * n + 1) - 12.0 / math.factorial(2 * n)
        for n in range(_MASS_SERIES_TERMS)
    ]
)


def _odd_series(coefficients: np.ndarray, x: float) -> float:
    return float(x * np.polynomial.polynomial.polyval(x * x, coefficients))


# =============================================================================
# Primitive defects
# =============================================================================


def primitive_field(family: DefectFamily, y: ArrayLike) -> ArrayLike:
    """tanh y, sech^2 y or sech y."""
    arr, scalar = as_array(y)
    if family == DefectFamily.PHI4_KINK:
        values = np.tanh(arr)
    elif family == DefectFamily.CHI4_LUMP:
        values = sech(arr) ** 2
    else:
        values = sech(arr)
    return as_output(values, scalar)


def primitive_potential(family: DefectFamily, v: ArrayLike) -> ArrayLike:
    """U(v) of the theory supporting the family; v is a field value."""
    arr, scalar = as_array(v)
    if family == DefectFamily.PHI4_KINK:
        values = 0.5 * (1.0 - arr**2) ** 2
    elif family == DefectFamily.CHI4_LUMP:
        values = 2.0 * arr**2 * (1.0 - arr)
    else:
        values = 0.5 * arr**2 * (1.0 - arr**2)
    return as_output(values, scalar)


def _tanh_derivatives(y: np.ndarray) -> List[np.ndarray]:
    """d^n/dy^n tanh y for n = 0..6, written in t = tanh y and s = sech y."""
    t = np.tanh(y)
    s2 = sech(y) ** 2
    s4 = s2 * s2
    s6 = s4 * s2
    return [
        t,
        s2,
        -2.0 * s2 * t,
        4.0 * s2 - 6.0 * s4,
        t * (-8.0 * s2 + 24.0 * s4),
        16.0 * s2 - 120.0 * s4 + 120.0 * s6,
        t * (-32.0 * s2 + 480.0 * s4 - 720.0 * s6),
    ]


def _sech_derivatives(y: np.ndarray) -> List[np.ndarray]:
    """d^n/dy^n sech y for n = 0..5."""
    t = np.tanh(y)
    s = sech(y)
    s3 = s**3
    s5 = s**5
    return [
        s,
        -s * t,
        s - 2.0 * s3,
        t * (-s + 6.0 * s3),
        s - 20.0 * s3 + 24.0 * s5,
        t * (-s + 60.0 * s3 - 120.0 * s5),
    ]


def _primitive_derivatives(family: DefectFamily, y: np.ndarray) -> List[np.ndarray]:
    """Derivatives p_0..p_5 of the primitive field (p_0 is the field itself)."""
    if family == DefectFamily.PHI4_KINK:
        return _tanh_derivatives(y)[:6]
    if family == DefectFamily.CHI4_LUMP:
        # sech^2 = tanh'
        return _tanh_derivatives(y)[1:7]
    return _sech_derivatives(y)


def _series(family: DefectFamily, k: float, y: np.ndarray, order: int) -> np.ndarray:
    # (G(y+k) - G(y-k)) / 2k = G' + k^2 G'''/6 + k^4 G^(5)/120 + O(k^6)
    p = _primitive_derivatives(family, y)
    k2 = k * k
    return p[order] + k2 * p[order + 2] / 6.0 + k2 * k2 * p[order + 4] / 120.0


# =============================================================================
# Deformed profiles
# =============================================================================


def _deformed_kink(k: float, y: np.ndarray) -> np.ndarray:
    # ln[cosh(y+k)/cosh(y-k)] / 2k == artanh(tanh y tanh k) / k
    x = np.tanh(y) * math.tanh(k)
    out = np.empty_like(y)
    near = np.abs(x) <= 0.5
    out[near] = np.arctanh(x[near]) / k
    far = ~near
    out[far] = (logcosh(y[far] + k) - logcosh(y[far] - k)) / (2.0 * k)
    return out


def _kink_slope(k: float, y: np.ndarray) -> np.ndarray:
    # sinh 2k / (k (cosh 2y + cosh 2k))
    return math.tanh(2.0 * k) / k * cosh_fraction(2.0 * k, 2.0 * y)


def _lump_slope(k: float, y: np.ndarray) -> np.ndarray:
    p = cosh_fraction(2.0 * k, 2.0 * y)
    m = cosh_fraction(2.0 * y, 2.0 * k)
    return -(2.0 / k) * np.tanh(2.0 * y) * math.tanh(2.0 * k) * p * m


def _deformed_sg(k: float, y: np.ndarray) -> np.ndarray:
    # difference of Gudermannians: arctan(sinh k sech y) / k, with the
    # argument kept as a log so it cannot overflow at large k
    log_s = k + math.log(-math.expm1(-2.0 * k)) - LN2 - logcosh(y)
    small = np.arctan(np.exp(np.minimum(log_s, 0.0)))
    large = 0.5 * math.pi - np.arctan(np.exp(np.minimum(-log_s, 0.0)))
    return np.where(log_s <= 0.0, small, large) / k


def _sg_slope(k: float, y: np.ndarray) -> np.ndarray:
    # sinh k sinh y / (cosh(y+k) cosh(y-k)) == tanh k tanh y cosh k cosh y / (...)
    scale = np.exp(logcosh(k) + logcosh(y) - logcosh(y + k) - logcosh(y - k))
    return -math.tanh(k) * np.tanh(y) * scale / k


_CLOSED_FIELD: Dict[DefectFamily, Callable[[float, np.ndarray], np.ndarray]] = {
    DefectFamily.PHI4_KINK: _deformed_kink,
    DefectFamily.CHI4_LUMP: _kink_slope,
    DefectFamily.SINE_GORDON_LUMP: _deformed_sg,
}

_CLOSED_SLOPE: Dict[DefectFamily, Callable[[float, np.ndarray], np.ndarray]] = {
    DefectFamily.PHI4_KINK: _kink_slope,
    DefectFamily.CHI4_LUMP: _lump_slope,
    DefectFamily.SINE_GORDON_LUMP: _sg_slope,
}


def deformed_field(family: DefectFamily, k: K, y: ArrayLike) -> ArrayLike:
    """phi_(k), chi_(k) or eta_(k); equals the primitive field at k = 0."""
    param = DeformParam.of(k)
    arr, scalar = as_array(y)
    if param.uses_series:
        values = _series(family, param.k, arr, order=0)
    else:
        values = _CLOSED_FIELD[family](param.k, arr)
    return as_output(values, scalar)


def deformed_field_deriv(family: DefectFamily, k: K, y: ArrayLike) -> ArrayLike:
    """d/dy of deformed_field: the superpotential derivative u^(k)."""
    param = DeformParam.of(k)
    arr, scalar = as_array(y)
    if param.uses_series:
        values = _series(family, param.k, arr, order=1)
    else:
        values = _CLOSED_SLOPE[family](param.k, arr)
    return as_output(values, scalar)


def energy_density(family: DefectFamily, k: K, y: ArrayLike) -> ArrayLike:
    arr, scalar = as_array(y)
    slope = np.asarray(deformed_field_deriv(family, k, arr))
    return as_output(slope * slope, scalar)


def field_profile(family: DefectFamily, k: K, grid: Grid) -> Profile:
    return Profile(grid, np.asarray(deformed_field(family, k, grid.nodes())))


def derivative_profile(family: DefectFamily, k: K, grid: Grid) -> Profile:
    return Profile(grid, np.asarray(deformed_field_deriv(family, k, grid.nodes())))


def energy_density_profile(family: DefectFamily, k: K, grid: Grid) -> Profile:
    return Profile(grid, np.asarray(energy_density(family, k, grid.nodes())))


# =============================================================================
# Charge and mass
# =============================================================================


def topological_charge(family: DefectFamily, k: K) -> float:
    # the asymptotes do not move under the deformation
    DeformParam.of(k)
    return constants_for(family).charge


def topological_mass_closed(family: DefectFamily, k: K) -> float:
    """
    Closed-form integral of the energy density over the line.

    With x = 2k:
      kink:        (x coth x - 1) / k^2
      chi4 lump:   (sinh 3x + 9 sinh x - 12 x cosh x) / (6 k^2 sinh^3 x)
      sG lump:     (sinh x - x) / (k^2 sinh x)
    """
    param = DeformParam.of(k)
    consts = constants_for(family)
    kk = param.k
    if param.uses_series:
        return consts.mass_limit + consts.mass_k2 * kk * kk

    x = 2.0 * kk
    if family == DefectFamily.PHI4_KINK:
        if x < 1.0:
            return _odd_series(_X_COSH_MINUS_SINH, x) / (kk * kk * math.sinh(x))
        return (x / math.tanh(x) - 1.0) / (kk * kk)

    # 1 / sinh x through exp(-x), finite for any x >= 1
    inv_sinh = 2.0 * math.exp(-x) / -math.expm1(-2.0 * x)
    if family == DefectFamily.CHI4_LUMP:
        if x < 1.0:
            ratio = _odd_series(_LUMP_MASS_NUMERATOR, x) / math.sinh(x) ** 3
        else:
            ratio = 4.0 + 12.0 * (1.0 - x / math.tanh(x)) * inv_sinh**2
        return ratio / (6.0 * kk * kk)

    if x < 1.0:
        return _odd_series(_SINH_MINUS_X, x) / (kk * kk * math.sinh(x))
    return (1.0 - x * inv_sinh) / (kk * kk)


def topological_mass_quad(
    family: DefectFamily, k: K, tol: float = DEFAULT_TOL, limit: int = DEFAULT_LIMIT
) -> QuadResult:
    """Quadrature of the energy density over the line; oracle for the closed form."""
    param = DeformParam.of(k)
    result = quad_line(lambda y: energy_density(family, param, y), tol=tol, limit=limit)
    logger.debug(
        "mass quadrature %s k=%g: %.17g (%d evaluations)",
        family.value,
        param.k,
        result.value,
        result.evaluations,
    )
    return result


def parametric_potential(family: DefectFamily, k: K, grid: Grid) -> List[Tuple[float, float]]:
    """(field, U) pairs along the grid, with U = u^2 / 2 from the first-order equation."""
    y = grid.nodes()
    fields = np.asarray(deformed_field(family, k, y))
    slopes = np.asarray(deformed_field_deriv(family, k, y))
    return list(zip(fields.tolist(), (0.5 * slopes * slopes).tolist()))
