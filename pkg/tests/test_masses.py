"""
Test topological masses.

Tests that:
- k -> 0 limits are 4/3, 16/15 and 2/3
- closed forms agree with quadrature of the energy density
- masses decrease monotonically with k
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from src.fields import topological_mass_closed, topological_mass_quad
from src.models import EPS_K, DefectFamily

LIMITS = {
    DefectFamily.PHI4_KINK: 4.0 / 3.0,
    DefectFamily.CHI4_LUMP: 16.0 / 15.0,
    DefectFamily.SINE_GORDON_LUMP: 2.0 / 3.0,
}


@pytest.mark.parametrize("family", list(DefectFamily))
def test_mass_limit_at_zero_deformation(family):
    """The undeformed masses are 4/3, 16/15 and 2/3."""
    assert topological_mass_closed(family, 0.0) == pytest.approx(LIMITS[family], abs=1e-10)


@pytest.mark.parametrize("family", list(DefectFamily))
def test_mass_limit_branch_joins_closed_form(family):
    """The M₀ + M₂k² branch below EPS_K meets the closed form."""
    below = np.nextafter(EPS_K, 0.0)
    assert topological_mass_closed(family, below) == pytest.approx(
        topological_mass_closed(family, EPS_K), abs=1e-12
    )


def test_kink_mass_at_unit_deformation():
    """At k = 1 the kink mass is 2 coth 2 - 1."""
    assert topological_mass_closed(DefectFamily.PHI4_KINK, 1.0) == pytest.approx(
        2.0 / math.tanh(2.0) - 1.0, rel=1e-14
    )


@pytest.mark.parametrize("family", list(DefectFamily))
def test_series_and_direct_forms_meet_at_2k_equal_1(family):
    """The odd-series and direct forms agree at the 2k = 1 seam."""
    below = topological_mass_closed(family, np.nextafter(0.5, 0.0))
    above = topological_mass_closed(family, 0.5)
    assert below == pytest.approx(above, rel=1e-13)


def test_kink_mass_quadrature_at_zero():
    """Quadrature of sech⁴ over the line gives 4/3 within tolerance."""
    result = topological_mass_quad(DefectFamily.PHI4_KINK, 0.0, tol=1e-10)
    assert result.value == pytest.approx(4.0 / 3.0, abs=1e-10)
    assert result.error_estimate <= 1e-10
    assert result.evaluations > 0


@pytest.mark.parametrize("family", list(DefectFamily))
@pytest.mark.parametrize("k", [0.01, 0.1, 0.5, 1.0, 2.0])
def test_closed_form_matches_quadrature(family, k):
    """Closed-form masses agree with quadrature to 1e-8 relative."""
    closed = topological_mass_closed(family, k)
    numeric = topological_mass_quad(family, k, tol=1e-10).value
    assert abs(closed - numeric) / closed < 1e-8


@pytest.mark.parametrize("family", list(DefectFamily))
def test_mass_strictly_decreasing_in_k(family):
    """Masses fall strictly on 0.01 ≤ k ≤ 3."""
    ks = np.linspace(0.01, 3.0, 120)
    masses = np.array([topological_mass_closed(family, k) for k in ks])
    assert np.all(np.diff(masses) < 0)


@pytest.mark.parametrize("family", list(DefectFamily))
def test_mass_even_in_k(family):
    """Masses are even in k."""
    assert topological_mass_closed(family, -0.8) == topological_mass_closed(family, 0.8)


@pytest.mark.parametrize("k", [400.0, 1000.0])
def test_mass_at_large_deformation(k):
    """Once e^{-2k} underflows the masses reduce to (2k - 1)/k^2, 2/(3k^2) and 1/k^2."""
    assert topological_mass_closed(DefectFamily.PHI4_KINK, k) == pytest.approx((2 * k - 1) / k**2, rel=1e-12)
    assert topological_mass_closed(DefectFamily.CHI4_LUMP, k) == pytest.approx(2 / (3 * k**2), rel=1e-12)
    assert topological_mass_closed(DefectFamily.SINE_GORDON_LUMP, k) == pytest.approx(1 / k**2, rel=1e-12)


@pytest.mark.parametrize("family", list(DefectFamily))
def test_mass_keeps_decreasing_at_large_k(family):
    """Masses stay positive, finite and strictly falling out to k = 1000."""
    ks = np.geomspace(3.0, 1000.0, 60)
    masses = np.array([topological_mass_closed(family, k) for k in ks])
    assert np.all(np.isfinite(masses))
    assert np.all(masses > 0)
    assert np.all(np.diff(masses) < 0)
