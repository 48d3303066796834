"""
Test the numerical oracles.

Covers:
1. quad / quad_line on integrals with known values
2. solve_spectrum on the particle in a box and the Poschl-Teller wells
3. Normalization, Sturm node counts and parity of eigenfunctions
4. Kink stability and lump instability under the deformation
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from src.hyperbolic import sech
from src.models import DefectFamily, Grid, LevelSpec, Profile, QMPotentialSpec
from src.numerics import (
    QuadratureError,
    count_nodes,
    parity,
    quad,
    quad_line,
    second_derivative,
    solve_spectrum,
)
from src.perturb import omega_perturbed


# =============================================================================
# Quadrature
# =============================================================================

def test_quad_sech4_over_wide_interval():
    """∫ sech⁴ over [-20, 20] is 4/3 within 1e-10."""
    result = quad(lambda y: float(sech(y)) ** 4, -20.0, 20.0, tol=1e-10)
    assert result.value == pytest.approx(4.0 / 3.0, abs=1e-10)
    assert result.error_estimate <= 1e-10


def test_quad_constant():
    """A constant integrand integrates exactly."""
    assert quad(lambda y: 2.0, 0.0, 3.0).value == pytest.approx(6.0, abs=1e-12)


def test_quad_odd_function_vanishes():
    """An odd integrand over a symmetric interval gives zero."""
    assert abs(quad(lambda y: y**3 * math.exp(-y * y), -4.0, 4.0).value) < 1e-12


def test_quad_raises_with_best_estimate_when_tolerance_missed():
    """A missed tolerance raises QuadratureError carrying the estimate and the evaluation count."""
    with pytest.raises(QuadratureError) as exc_info:
        quad(lambda y: math.sin(50.0 * y) ** 2, 0.0, 10.0, tol=1e-12, limit=1)
    assert exc_info.value.error_estimate > 1e-12
    assert exc_info.value.evaluations > 0
    assert math.isfinite(exc_info.value.value)


def test_quad_rejects_non_positive_tolerance():
    """tol must be positive."""
    with pytest.raises(ValueError):
        quad(lambda y: 1.0, 0.0, 1.0, tol=0.0)


@pytest.mark.parametrize(
    "power, expected",
    [(2, 2.0), (4, 4.0 / 3.0), (6, 16.0 / 15.0), (8, 32.0 / 35.0)],
)
def test_quad_line_sech_powers(power, expected):
    """∫ sech^n over the whole line for n = 2, 4, 6, 8."""
    result = quad_line(lambda y: float(sech(y)) ** power, tol=1e-10)
    assert result.value == pytest.approx(expected, abs=1e-10)


# =============================================================================
# Eigensolver
# =============================================================================

def test_particle_in_a_box():
    """A flat potential on [0, π] gives the levels 1, 4 and 9, all box states."""
    grid = Grid(0.0, math.pi, 2001)
    spectrum = solve_spectrum(lambda y: np.zeros_like(y), grid, 3)
    np.testing.assert_allclose(spectrum.eigenvalues, [1.0, 4.0, 9.0], atol=1e-4)
    # every level of a flat box is a box state
    assert spectrum.box_states() == [0, 1, 2]


def test_poschl_teller_kink_levels(bound_grid):
    """The undeformed kink has levels 0 and 3 below the edge at 4."""
    spectrum = solve_spectrum(QMPotentialSpec(DefectFamily.PHI4_KINK, 0.0), bound_grid, 2)
    np.testing.assert_allclose(spectrum.eigenvalues, [0.0, 3.0], atol=1e-3)
    assert spectrum.box_states() == []
    assert spectrum.continuum_edge == 4.0


def test_poschl_teller_chi4_levels(bound_grid):
    """The undeformed χ⁴ lump has levels -5, 0 and 3."""
    spectrum = solve_spectrum(QMPotentialSpec(DefectFamily.CHI4_LUMP, 0.0), bound_grid, 3)
    np.testing.assert_allclose(spectrum.eigenvalues, [-5.0, 0.0, 3.0], atol=1e-3)


def test_poschl_teller_sine_gordon_levels(bound_grid):
    """The undeformed sine-Gordon lump has levels -3 and 0 below the edge at 1."""
    spectrum = solve_spectrum(QMPotentialSpec(DefectFamily.SINE_GORDON_LUMP, 0.0), bound_grid, 2)
    np.testing.assert_allclose(spectrum.eigenvalues, [-3.0, 0.0], atol=1e-3)
    assert spectrum.continuum_edge == 1.0


def test_second_order_grid_convergence():
    """Halving h cuts the ω₁² error by about four."""
    spec = QMPotentialSpec(DefectFamily.PHI4_KINK, 0.0)
    coarse = solve_spectrum(spec, Grid.symmetric(20.0, 1001), 2).eigenvalues[1]
    fine = solve_spectrum(spec, Grid.symmetric(20.0, 2001), 2).eigenvalues[1]
    ratio = abs(coarse - 3.0) / abs(fine - 3.0)
    assert 3.5 < ratio < 4.5


def test_eigenfunctions_normalized_with_sturm_nodes_and_parity(bound_grid):
    """Level i has unit norm, i nodes and parity (-1)^i."""
    spectrum = solve_spectrum(QMPotentialSpec(DefectFamily.PHI4_KINK, 0.5), bound_grid, 3)
    assert len(spectrum) == 3
    for i, psi in enumerate(spectrum.eigenfunctions):
        assert psi.norm() == pytest.approx(1.0, abs=1e-10)
        assert count_nodes(psi) == i
        assert parity(psi) == pytest.approx((-1.0) ** i, abs=1e-8)


def test_eigenfunctions_are_orthogonal(bound_grid):
    """Distinct eigenfunctions are orthogonal on the grid."""
    spectrum = solve_spectrum(QMPotentialSpec(DefectFamily.CHI4_LUMP, 1.0), bound_grid, 3)
    psi = spectrum.eigenfunctions
    assert abs(psi[0].inner(psi[1])) < 1e-8
    assert abs(psi[0].inner(psi[2])) < 1e-8
    assert abs(psi[1].inner(psi[2])) < 1e-8


def test_ground_state_sign_convention(bound_grid):
    """The ground state is positive at the centre."""
    spectrum = solve_spectrum(QMPotentialSpec(DefectFamily.PHI4_KINK, 0.0), bound_grid, 1)
    psi0 = spectrum.eigenfunctions[0].values
    assert psi0[len(psi0) // 2] > 0


@pytest.mark.parametrize("k", [0.2, 0.5, 1.0, 2.0])
def test_deformed_kink_stays_stable(bound_grid, k):
    """The deformed kink keeps its zero mode and no negative level."""
    spectrum = solve_spectrum(QMPotentialSpec(DefectFamily.PHI4_KINK, k), bound_grid, 2)
    assert abs(spectrum.eigenvalues[0]) < 1e-4
    assert spectrum.negative_modes(1e-4) == []


@pytest.mark.parametrize("k", [0.05, 0.1, 0.2])
def test_first_excited_kink_level_follows_perturbation_theory(bound_grid, k):
    """ω₁² matches the closed form to O(k⁴)."""
    spectrum = solve_spectrum(QMPotentialSpec(DefectFamily.PHI4_KINK, k), bound_grid, 2)
    closed = omega_perturbed(LevelSpec.one(), k)
    assert abs(spectrum.eigenvalues[1] - closed) < 3.0 * k**4 + 2e-4


@pytest.mark.parametrize("k", [0.1, 0.2, 0.3])
def test_first_excited_kink_level_within_flat_tolerance(bound_grid, k):
    """Up to k = 0.3 the eigensolver and the closed form agree to 5e-3."""
    spectrum = solve_spectrum(QMPotentialSpec(DefectFamily.PHI4_KINK, k), bound_grid, 2)
    assert spectrum.eigenvalues[1] == pytest.approx(omega_perturbed(LevelSpec.one(), k), abs=5e-3)


def test_first_excited_kink_level_slope_in_k_squared(bound_grid):
    """Differencing against k = 0 on the same grid cancels the discretization offset."""
    k = 0.05
    base = solve_spectrum(QMPotentialSpec(DefectFamily.PHI4_KINK, 0.0), bound_grid, 2)
    spectrum = solve_spectrum(QMPotentialSpec(DefectFamily.PHI4_KINK, k), bound_grid, 2)
    slope = (spectrum.eigenvalues[1] - base.eigenvalues[1]) / k**2
    assert slope == pytest.approx(-8.0 / 5.0, abs=0.02)


@pytest.mark.parametrize("family", [DefectFamily.CHI4_LUMP, DefectFamily.SINE_GORDON_LUMP])
@pytest.mark.parametrize("k", [0.0, 0.5, 1.5])
def test_lumps_have_one_negative_mode(bound_grid, family, k):
    """Both lumps keep exactly one negative level and a zero mode."""
    spectrum = solve_spectrum(QMPotentialSpec(family, k), bound_grid, 2)
    assert spectrum.negative_modes(1e-3) == [0]
    assert abs(spectrum.eigenvalues[1]) < 1e-3


def test_callable_potential_edge_from_grid_ends():
    """A plain callable gets its continuum edge from the grid ends."""
    grid = Grid.symmetric(15.0, 1501)
    spectrum = solve_spectrum(lambda y: 1.0 - 2.0 * sech(y) ** 2, grid, 1)
    assert spectrum.continuum_edge == pytest.approx(1.0)
    # V = 1 - 2 sech^2 has a single bound level at w^2 = 0
    assert spectrum.eigenvalues[0] == pytest.approx(0.0, abs=1e-3)


def test_too_many_levels_rejected():
    """More levels than interior nodes is an error."""
    with pytest.raises(ValueError):
        solve_spectrum(lambda y: np.zeros_like(y), Grid(0.0, 1.0, 5), 4)


def test_zero_levels_rejected():
    """At least one level must be requested."""
    with pytest.raises(ValueError):
        solve_spectrum(lambda y: np.zeros_like(y), Grid(0.0, 1.0, 5), 0)


# =============================================================================
# Profile diagnostics
# =============================================================================

def test_fd4_second_derivative_of_gaussian():
    """The fourth-order stencil matches the analytic second derivative of a Gaussian."""
    grid = Grid.symmetric(6.0, 1201)
    y = grid.nodes()
    profile = Profile(grid, np.exp(-y * y))
    exact = (4.0 * y * y - 2.0) * np.exp(-y * y)
    np.testing.assert_allclose(second_derivative(profile)[2:-2], exact[2:-2], atol=1e-7)


def test_spectral_second_derivative_of_gaussian():
    """The FFT derivative matches to 1e-10 for a profile that vanishes at the edges."""
    grid = Grid.symmetric(10.0, 801)
    y = grid.nodes()
    profile = Profile(grid, np.exp(-y * y))
    exact = (4.0 * y * y - 2.0) * np.exp(-y * y)
    np.testing.assert_allclose(second_derivative(profile, method="spectral"), exact, atol=1e-10)


def test_unknown_derivative_method_rejected():
    """Only fd4 and spectral are accepted."""
    grid = Grid.symmetric(1.0, 11)
    with pytest.raises(ValueError):
        second_derivative(Profile(grid, np.zeros(11)), method="fd2")


def test_count_nodes_ignores_tail_noise():
    """Tiny values at the edges do not count as nodes."""
    grid = Grid.symmetric(5.0, 101)
    y = grid.nodes()
    values = np.sin(y) * np.exp(-y * y)
    values[0], values[-1] = 1e-20, -1e-20
    assert count_nodes(Profile(grid, values)) == 1


def test_parity_requires_symmetric_grid():
    """Parity is undefined on a grid not centred at zero."""
    grid = Grid(0.0, 1.0, 11)
    with pytest.raises(ValueError):
        parity(Profile(grid, np.ones(11)))
