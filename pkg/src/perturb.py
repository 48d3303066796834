"""
First-order perturbation theory in k^2 around the Poschl-Teller limit.

V_QM = V_PT + k^2 dV + k^4 V4 + O(k^6). Energy shifts are expectation values
of dV in the unperturbed states: bound states over the whole line, the
continuum over the box [-L, L].

The closed forms below are the kink-family ones:
  w0^2(k) = (32/105) k^4
  w1^2(k) = 3 - (8/5) k^2 + (24/35) k^4
  w2^2(k, L) = 4 + k^2 * printed coefficient
  wq^2(k, L) = 4 + q^2 + 2 k^2 (tanh L / 15) F(q, L)

The k^4 terms of w0 and w1 are the first-order expectation of V4. The exact
kink spectrum keeps w0^2 = 0 for every k (the field derivative is an exact
zero mode); the k^4 value of w0 is a truncation effect.

The printed w2 coefficient has the same numerator as the q = 0 continuum
shift, but its denominator reads 120L + 90 sech^2 L tanh L where the
quadrature gives 120L - 90 tanh L (1 + tanh^2 L). It is implemented as
printed; w2_quadrature_coefficient holds the consistent value.
"""
from __future__ import annotations

import logging
import math
from typing import Callable, Optional

import numpy as np

from .families import constants_for, sech_polynomial
from .fields import K
from .hyperbolic import ArrayLike, as_array, as_output, sech, sinh_over_cosh_power
from .models import DefectFamily, DeformParam, LevelKind, LevelSpec, PerturbedLevel
from .numerics import DEFAULT_LIMIT, DEFAULT_TOL, quad, quad_line
from .schrodinger import ContinuumMode, pt_bound_mode

logger = logging.getLogger(__name__)

DENOMINATOR_GUARD = 1e-12

Density = Callable[[ArrayLike], ArrayLike]


class PerturbationDomainError(ValueError):
    """Raised for a non-positive box or a vanishing F(q, L) denominator."""


def _check_box(L: Optional[float]) -> float:
    if L is None or not math.isfinite(L) or L <= 0:
        raise PerturbationDomainError(f"Box half-width L must be positive, got {L!r}")
    return float(L)


# =============================================================================
# Perturbing potentials
# =============================================================================


def delta_v(family: DefectFamily, y: ArrayLike) -> ArrayLike:
    """k^2 coefficient of V_QM; kink family: 14 sech^4 - 12 sech^2."""
    arr, scalar = as_array(y)
    return as_output(sech_polynomial(constants_for(family).delta_v, arr), scalar)


def delta_v4(family: DefectFamily, y: ArrayLike) -> ArrayLike:
    """k^4 coefficient of V_QM."""
    arr, scalar = as_array(y)
    return as_output(sech_polynomial(constants_for(family).v4, arr), scalar)


# =============================================================================
# Level densities and shift integrals
# =============================================================================


def level_density(level: LevelSpec) -> Density:
    """|psi|^2 of the unperturbed state behind a level."""
    if level.kind == LevelKind.ZERO:
        return lambda y: np.asarray(pt_bound_mode(0, y)) ** 2
    if level.kind == LevelKind.ONE:
        return lambda y: np.asarray(pt_bound_mode(1, y)) ** 2

    L = _check_box(level.L)
    q = 0.0 if level.kind == LevelKind.TWO else float(level.q or 0.0)
    return ContinuumMode.of(q, L).density


def _half_width(level: LevelSpec) -> float:
    return math.inf if level.is_bound else _check_box(level.L)


def _integrate(integrand: Callable[[float], float], b: float, tol: float, limit: int) -> float:
    if math.isinf(b):
        return quad_line(integrand, tol=tol, limit=limit).value
    return quad(integrand, -b, b, tol=tol, limit=limit).value


def first_order_shift(
    state_density: Density,
    family: DefectFamily,
    k: K,
    b: float,
    tol: float = DEFAULT_TOL,
    limit: int = DEFAULT_LIMIT,
) -> float:
    """k^2 * integral_{-b}^{b} |psi|^2 dV; b = inf for bound levels, L for the continuum."""
    param = DeformParam.of(k)
    if not b > 0:
        raise PerturbationDomainError(f"Integration half-width must be positive, got {b!r}")

    def integrand(y: float) -> float:
        return float(state_density(y)) * float(delta_v(family, y))

    return param.k**2 * _integrate(integrand, b, tol, limit)


def quadrature_coefficient(
    level: LevelSpec,
    family: DefectFamily = DefectFamily.PHI4_KINK,
    tol: float = DEFAULT_TOL,
    limit: int = DEFAULT_LIMIT,
) -> float:
    """The k^2 coefficient of a level, by quadrature."""
    return first_order_shift(
        level_density(level), family, 1.0, _half_width(level), tol=tol, limit=limit
    )


def k4_expectation(
    level: LevelSpec,
    family: DefectFamily = DefectFamily.PHI4_KINK,
    tol: float = DEFAULT_TOL,
    limit: int = DEFAULT_LIMIT,
) -> float:
    """
    <psi|V4|psi>: the k^4 term obtained by carrying the first-order
    expectation one order further. Kink family: 32/105 and 24/35.
    """
    density = level_density(level)

    def integrand(y: float) -> float:
        return float(density(y)) * float(delta_v4(family, y))

    return _integrate(integrand, _half_width(level), tol, limit)


# =============================================================================
# Closed forms
# =============================================================================


def f_denominator(q: float, L: float) -> float:
    """(4+5q^2+q^4) L - 3 tanh L (2 + q^2 - sech^2 L); grows like (1+q^2)^2 L near L = 0."""
    L = _check_box(L)
    q2 = q * q
    s2 = float(sech(L)) ** 2
    return (4.0 + 5.0 * q2 + q2 * q2) * L - 3.0 * math.tanh(L) * (2.0 + q2 - s2)


def f_factor(q: float, L: float) -> float:
    """
    F(q, L) as printed:

        [(4+q^2)(41+35q^2) S^2 - 63(4+q^2) S^4 + 135 S^6 - 4(4+q^2)(2+5q^2)]
        / [(4+5q^2+q^4) L - 3 tanh L (2 + q^2 - S^2)],        S = sech L
    """
    L = _check_box(L)
    q2 = q * q
    s2 = float(sech(L)) ** 2
    a = 4.0 + q2
    numerator = a * (41.0 + 35.0 * q2) * s2 - 63.0 * a * s2**2 + 135.0 * s2**3 - 4.0 * a * (2.0 + 5.0 * q2)
    denominator = f_denominator(q, L)
    if abs(denominator) < DENOMINATOR_GUARD:
        raise PerturbationDomainError(
            f"F(q={q:g}, L={L:g}) denominator {denominator:.3g} is numerically zero"
        )
    return numerator / denominator


def continuum_coefficient(q: float, L: float) -> float:
    """k^2 coefficient of wq^2: 2 tanh(L) F(q, L) / 15."""
    return 2.0 * math.tanh(_check_box(L)) / 15.0 * f_factor(q, L)


def _w2_numerator(L: float) -> float:
    # sech^7 L (360 sinh L - 147 sinh 3L + 31 sinh 5L - 2 sinh 7L)
    return (
        360.0 * sinh_over_cosh_power(1, L, 7)
        - 147.0 * sinh_over_cosh_power(3, L, 7)
        + 31.0 * sinh_over_cosh_power(5, L, 7)
        - 2.0 * sinh_over_cosh_power(7, L, 7)
    )


def w2_printed_coefficient(L: float) -> float:
    L = _check_box(L)
    t = math.tanh(L)
    s2 = float(sech(L)) ** 2
    return _w2_numerator(L) / (120.0 * L + 90.0 * s2 * t)


def w2_quadrature_coefficient(L: float) -> float:
    """Same numerator, denominator from integrating the q = 0 mode over [-L, L]."""
    L = _check_box(L)
    t = math.tanh(L)
    return _w2_numerator(L) / (120.0 * L - 90.0 * t * (1.0 + t * t))


def first_order_coefficient(level: LevelSpec) -> float:
    """Closed-form k^2 coefficient of a kink level."""
    if level.kind == LevelKind.ZERO:
        return 0.0
    if level.kind == LevelKind.ONE:
        return -8.0 / 5.0
    if level.kind == LevelKind.TWO:
        return w2_printed_coefficient(_check_box(level.L))
    return continuum_coefficient(float(level.q or 0.0), _check_box(level.L))


def omega_perturbed(level: LevelSpec, k: K) -> float:
    kk = DeformParam.of(k).k
    k2 = kk * kk
    if level.kind == LevelKind.ZERO:
        return 32.0 / 105.0 * k2 * k2
    if level.kind == LevelKind.ONE:
        return 3.0 - 8.0 / 5.0 * k2 + 24.0 / 35.0 * k2 * k2
    if level.kind == LevelKind.TWO:
        return 4.0 + k2 * w2_printed_coefficient(_check_box(level.L))
    q = float(level.q or 0.0)
    return 4.0 + q * q + k2 * continuum_coefficient(q, _check_box(level.L))


def perturbed_level(level: LevelSpec, k: K) -> PerturbedLevel:
    param = DeformParam.of(k)
    return PerturbedLevel(level=level, k=param, omega2=omega_perturbed(level, param))
