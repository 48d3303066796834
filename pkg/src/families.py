"""
Per-family constants - single source of truth.

Charges, mass limits and the sech-power coefficients of the small-k
expansion of V_QM live here, so fields.py, schrodinger.py and perturb.py
never repeat a number.

A "sech polynomial" below is a tuple (c1, c2, ...) meaning
c1*sech^2 + c2*sech^4 + c3*sech^6 + ...
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .hyperbolic import ArrayLike, sech
from .models import DefectFamily


@dataclass(frozen=True)
class FamilyConstants:
    # phi(+inf) - phi(-inf), read off the analytic asymptotes
    charge: float
    # topological mass near k = 0: mass_limit + mass_k2 * k^2
    mass_limit: float
    mass_k2: float
    # V_QM -> asymptote as |y| -> inf; V_PT = asymptote - pt_depth * sech^2
    asymptote: float
    pt_depth: float
    # k^2 and k^4 coefficients of V_QM around the Poschl-Teller limit
    delta_v: Tuple[float, ...]
    v4: Tuple[float, ...]


FAMILY_CONSTANTS: Dict[DefectFamily, FamilyConstants] = {
    DefectFamily.PHI4_KINK: FamilyConstants(
        charge=2.0,
        mass_limit=4.0 / 3.0,
        mass_k2=-16.0 / 45.0,
        asymptote=4.0,
        pt_depth=6.0,
        # -2(6 sech^2 - 7 sech^4)
        delta_v=(-12.0, 14.0),
        v4=(-4.0, 74.0 / 3.0, -22.0),
    ),
    DefectFamily.CHI4_LUMP: FamilyConstants(
        charge=0.0,
        mass_limit=16.0 / 15.0,
        mass_k2=-64.0 / 63.0,
        asymptote=4.0,
        pt_depth=12.0,
        # -12(2 sech^2 - 3 sech^4)
        delta_v=(-24.0, 36.0),
        v4=(-8.0, 60.0, -60.0),
    ),
    DefectFamily.SINE_GORDON_LUMP: FamilyConstants(
        charge=0.0,
        mass_limit=2.0 / 3.0,
        mass_k2=-14.0 / 45.0,
        asymptote=1.0,
        pt_depth=6.0,
        # -2(4 sech^2 - 7 sech^4)
        delta_v=(-8.0, 14.0),
        v4=(-8.0 / 3.0, 62.0 / 3.0, -22.0),
    ),
}


def constants_for(family: DefectFamily) -> FamilyConstants:
    return FAMILY_CONSTANTS[DefectFamily(family)]


def sech_polynomial(coefficients: Tuple[float, ...], y: ArrayLike) -> np.ndarray:
    s2 = sech(y) ** 2
    total = np.zeros_like(s2)
    # Horner in sech^2, lowest power is sech^2 itself
    for c in reversed(coefficients):
        total = (total + c) * s2
    return total
