"""
Quantum-fluctuation potentials and the Poschl-Teller modes.

V_QM = psi0'' / psi0 with psi0 = d(deformed field)/dy. The exact potentials
are written in w = sech 2y and the bounded fractions r/(1+r), 1/(1+r) of
r = cosh 2k sech 2y; in that form they are finite for every real y and k and
reduce to the Poschl-Teller limit at k = 0 without a separate branch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .families import constants_for, sech_polynomial
from .fields import K, derivative_profile
from .hyperbolic import ArrayLike, as_array, as_output, cosh_fraction, sech
from .models import (
    ContinuumBox,
    DefectFamily,
    DeformParam,
    Grid,
    Profile,
    QMPotentialMode,
    QMPotentialSpec,
)

SQRT3_OVER_2 = math.sqrt(3.0) / 2.0
SQRT3_OVER_SQRT2 = math.sqrt(1.5)


class ModeDomainError(ValueError):
    """Raised for invalid bound levels or points outside a continuum box."""


# =============================================================================
# Potentials
# =============================================================================


def _exact(family: DefectFamily, k: float, y: np.ndarray) -> np.ndarray:
    # r = cosh 2k / cosh 2y enters only through p = r / (1+r) and m = 1 / (1+r)
    w = sech(2.0 * y)
    p = cosh_fraction(2.0 * k, 2.0 * y)
    m = cosh_fraction(2.0 * y, 2.0 * k)
    wm = w * m
    if family == DefectFamily.PHI4_KINK:
        return 4.0 * m * m - 4.0 * p * m - 8.0 * wm * wm
    if family == DefectFamily.CHI4_LUMP:
        return 4.0 - 24.0 * (p * m + wm * wm)
    return m * m - 6.0 * p * m + p * p - 4.0 * w * m * m - 4.0 * p * wm - 8.0 * wm * wm


def poschl_teller(family: DefectFamily, y: ArrayLike) -> ArrayLike:
    arr, scalar = as_array(y)
    consts = constants_for(family)
    return as_output(consts.asymptote - consts.pt_depth * sech(arr) ** 2, scalar)


def vqm(spec: QMPotentialSpec, y: ArrayLike) -> ArrayLike:
    arr, scalar = as_array(y)
    family = spec.family
    k = spec.k.k

    if spec.mode == QMPotentialMode.EXACT:
        return as_output(_exact(family, k, arr), scalar)

    consts = constants_for(family)
    values = np.asarray(poschl_teller(family, arr))
    if spec.mode in (QMPotentialMode.EXPANDED_ORDER_K2, QMPotentialMode.EXPANDED_ORDER_K4):
        values = values + k * k * sech_polynomial(consts.delta_v, arr)
    if spec.mode == QMPotentialMode.EXPANDED_ORDER_K4:
        values = values + k**4 * sech_polynomial(consts.v4, arr)
    return as_output(values, scalar)


def vqm_phi_ratio(k: K, y: ArrayLike) -> ArrayLike:
    """
    The kink potential as the raw ratio

        2 (sech^2(y-k) tanh(y-k) - sech^2(y+k) tanh(y+k)) / (tanh(y+k) - tanh(y-k))

    Loses digits at small k and large |y|; kept as a cross-check for vqm.
    """
    param = DeformParam.of(k)
    if param.k == 0.0:
        raise ValueError("The ratio form is 0/0 at k = 0")
    arr, scalar = as_array(y)
    kk = param.k
    tp, tm = np.tanh(arr + kk), np.tanh(arr - kk)
    sp2, sm2 = sech(arr + kk) ** 2, sech(arr - kk) ** 2
    return as_output(2.0 * (sm2 * tm - sp2 * tp) / (tp - tm), scalar)


def zero_mode_exact(family: DefectFamily, k: K, grid: Grid) -> Profile:
    """The field derivative on the grid, unit-normalized: an exact w^2 = 0 state."""
    return derivative_profile(family, k, grid).normalized()


# =============================================================================
# Poschl-Teller bound states (kink family, V = 4 - 6 sech^2)
# =============================================================================


def _check_level(level: int) -> None:
    if level not in (0, 1):
        raise ModeDomainError(f"Poschl-Teller bound levels are 0 and 1, got {level!r}")


def pt_bound_mode(level: int, y: ArrayLike) -> ArrayLike:
    """
    Unit-normalized bound states:
      level 0: (sqrt 3 / 2) sech^2 y
      level 1: sqrt(3/2) sinh y sech^2 y
    """
    _check_level(level)
    arr, scalar = as_array(y)
    s = sech(arr)
    if level == 0:
        values = SQRT3_OVER_2 * s * s
    else:
        values = SQRT3_OVER_SQRT2 * np.tanh(arr) * s
    return as_output(values, scalar)


def pt_bound_mode_printed_norm(level: int, y: ArrayLike) -> ArrayLike:
    """
    Both levels with the sqrt(3)/2 prefactor as usually printed.
    For level 1 this has squared norm 1/2, not 1.
    """
    _check_level(level)
    arr, scalar = as_array(y)
    s = sech(arr)
    shape = s * s if level == 0 else np.tanh(arr) * s
    return as_output(SQRT3_OVER_2 * shape, scalar)


def pt_eigenvalue(level: int) -> float:
    _check_level(level)
    return 0.0 if level == 0 else 3.0


def continuum_omega2(q: float) -> float:
    return 4.0 + q * q


# =============================================================================
# Continuum modes
# =============================================================================


def continuum_normalization(q: float, box: ContinuumBox) -> float:
    """N_q = 2L(4 + 5q^2 + q^4) - 6 tanh L (2 + q^2 - sech^2 L)."""
    L = box.L
    q2 = q * q
    return 2.0 * L * (4.0 + 5.0 * q2 + q2 * q2) - 6.0 * math.tanh(L) * (
        2.0 + q2 - float(sech(L)) ** 2
    )


@dataclass(frozen=True)
class ContinuumMode:
    """
    psi_q(y) = N_q^(-1/2) e^(iqy) (3 tanh^2 y - 1 - q^2 - 3iq tanh y) on [-L, L].
    Left unmatched at the box edges; q is not quantized.
    """
    q: float
    box: ContinuumBox
    normalization: float

    def __post_init__(self) -> None:
        if not self.normalization > 0:
            raise ModeDomainError(
                f"Continuum normalization must be positive, got {self.normalization!r}"
            )

    @classmethod
    def of(cls, q: float, box: Union[ContinuumBox, float]) -> "ContinuumMode":
        if not isinstance(box, ContinuumBox):
            try:
                box = ContinuumBox(float(box))
            except ValueError as exc:
                raise ModeDomainError(str(exc)) from exc
        return cls(q=float(q), box=box, normalization=continuum_normalization(q, box))

    def _check_inside(self, y: np.ndarray) -> None:
        if np.any(np.abs(y) > self.box.L):
            raise ModeDomainError(f"Continuum mode is defined only on [-{self.box.L}, {self.box.L}]")

    def __call__(self, y: ArrayLike) -> Union[complex, np.ndarray]:
        arr, scalar = as_array(y)
        self._check_inside(arr)
        q = self.q
        t = np.tanh(arr)
        amplitude = (3.0 * t * t - 1.0 - q * q) - 3j * q * t
        values = np.exp(1j * q * arr) * amplitude / math.sqrt(self.normalization)
        if scalar:
            return complex(values[0])
        return values

    def density(self, y: ArrayLike) -> ArrayLike:
        """|psi_q|^2 = (4 + 5q^2 + q^4 - (12 + 3q^2) sech^2 + 9 sech^4) / N_q."""
        arr, scalar = as_array(y)
        self._check_inside(arr)
        q2 = self.q * self.q
        s2 = sech(arr) ** 2
        values = (4.0 + 5.0 * q2 + q2 * q2 - (12.0 + 3.0 * q2) * s2 + 9.0 * s2 * s2)
        return as_output(values / self.normalization, scalar)


def pt_continuum_mode(q: float, box: ContinuumBox, y: ArrayLike) -> Union[complex, np.ndarray]:
    return ContinuumMode.of(q, box)(y)
