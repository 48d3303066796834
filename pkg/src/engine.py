from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Sequence, TypeVar

import numpy as np

from .config import RunConfig
from .fields import (
    derivative_profile,
    energy_density_profile,
    field_profile,
    parametric_potential,
    topological_mass_closed,
    topological_mass_quad,
)
from .formatting import Cell, Report, Table
from .models import (
    ContinuumBox,
    DefectFamily,
    Grid,
    LevelSpec,
    QMPotentialMode,
    QMPotentialSpec,
)
from .numerics import count_nodes, parity, solve_spectrum
from .perturb import (
    first_order_coefficient,
    k4_expectation,
    omega_perturbed,
    quadrature_coefficient,
)
from .schrodinger import ContinuumMode, poschl_teller, pt_bound_mode, pt_eigenvalue, vqm

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

MASS_FAMILIES = (
    (DefectFamily.PHI4_KINK, "phi"),
    (DefectFamily.CHI4_LUMP, "chi"),
    (DefectFamily.SINE_GORDON_LUMP, "eta"),
)


def _map_ordered(fn: Callable[[T], R], items: Sequence[T], workers: int) -> List[R]:
    """Run fn over items concurrently; results keep the input order."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def _rows(*columns: Iterable[float]) -> List[List[Cell]]:
    return [[float(v) for v in row] for row in zip(*columns)]


def _grid(config: RunConfig) -> Grid:
    return Grid(config.y_min, config.y_max, config.n)


def _bound_grid(config: RunConfig) -> Grid:
    return Grid(config.bound_y_min, config.bound_y_max, config.bound_n)


def _parameters(config: RunConfig, *names: str) -> Dict[str, object]:
    data = config.model_dump(mode="json")
    return {name: data[name] for name in names}


# =============================================================================
# profile / mass / qm-potential / pt-modes
# =============================================================================


def cmd_profile(config: RunConfig) -> Report:
    """Static profiles, one block of n rows per k."""
    family = config.family
    grid = _grid(config)
    y = grid.nodes()

    def block(k: float) -> List[List[Cell]]:
        field = field_profile(family, k, grid).values
        slope = derivative_profile(family, k, grid).values
        density = energy_density_profile(family, k, grid).values
        potential = [u for _, u in parametric_potential(family, k, grid)]
        return _rows(np.full_like(y, k), y, field, slope, density, potential)

    rows: List[List[Cell]] = []
    for part in _map_ordered(block, config.k_values, config.workers):
        rows.extend(part)

    table = Table(
        name="profile",
        columns=["k", "y", "field", "derivative", "energy_density", "potential"],
        rows=rows,
    )
    return Report(
        command="profile",
        family=family.value,
        parameters=_parameters(config, "k_values", "y_min", "y_max", "n"),
        tables=[table],
    )


def cmd_mass(config: RunConfig) -> Report:
    """Closed-form masses with quadrature cross-checks for all three families."""

    def row(k: float) -> List[Cell]:
        cells: List[Cell] = [float(k)]
        for family, _ in MASS_FAMILIES:
            closed = topological_mass_closed(family, k)
            numeric = topological_mass_quad(family, k, tol=config.tol, limit=config.quad_limit).value
            cells.extend([closed, numeric, abs(closed - numeric) / closed])
        return cells

    columns = ["k"]
    for _, tag in MASS_FAMILIES:
        columns.extend([f"M_{tag}", f"M_{tag}_quad", f"M_{tag}_rel_err"])

    table = Table(name="mass", columns=columns, rows=_map_ordered(row, config.k_values, config.workers))
    return Report(
        command="mass",
        parameters=_parameters(config, "k_values", "tol"),
        tables=[table],
    )


def cmd_qm_potential(config: RunConfig) -> Report:
    """Exact V_QM next to its k^2 and k^4 expansions and the Poschl-Teller limit."""
    family = config.family
    y = _grid(config).nodes()
    pt = np.asarray(poschl_teller(family, y))

    def block(k: float) -> List[List[Cell]]:
        values = [
            np.asarray(vqm(QMPotentialSpec(family, k, mode), y))
            for mode in (
                QMPotentialMode.EXACT,
                QMPotentialMode.EXPANDED_ORDER_K2,
                QMPotentialMode.EXPANDED_ORDER_K4,
            )
        ]
        return _rows(np.full_like(y, k), y, *values, pt)

    rows: List[List[Cell]] = []
    for part in _map_ordered(block, config.k_values, config.workers):
        rows.extend(part)

    table = Table(
        name="qm_potential",
        columns=["k", "y", "exact", "expanded_k2", "expanded_k4", "poschl_teller"],
        rows=rows,
    )
    return Report(
        command="qm-potential",
        family=family.value,
        parameters=_parameters(config, "k_values", "y_min", "y_max", "n"),
        tables=[table],
    )


def cmd_pt_modes(config: RunConfig) -> Report:
    """Analytic Poschl-Teller bound states of the kink and their eigenvalues."""
    y = _grid(config).nodes()
    modes = Table(
        name="modes",
        columns=["y", "psi0", "psi1", "potential"],
        rows=_rows(
            y,
            np.asarray(pt_bound_mode(0, y)),
            np.asarray(pt_bound_mode(1, y)),
            np.asarray(poschl_teller(DefectFamily.PHI4_KINK, y)),
        ),
    )
    eigenvalues = Table(
        name="eigenvalues",
        columns=["level", "omega2"],
        rows=[[level, pt_eigenvalue(level)] for level in (0, 1)],
    )
    return Report(
        command="pt-modes",
        family=DefectFamily.PHI4_KINK.value,
        parameters=_parameters(config, "y_min", "y_max", "n"),
        tables=[modes, eigenvalues],
    )


# =============================================================================
# perturb / solve / spectrum
# =============================================================================


def _perturb_levels(config: RunConfig) -> List[LevelSpec]:
    levels = [LevelSpec.zero(), LevelSpec.one()]
    for L in config.box_half_widths:
        levels.append(LevelSpec.two(L))
    for L in config.box_half_widths:
        levels.extend(LevelSpec.continuum(q, L) for q in config.q_values())
    return levels


def cmd_perturb(config: RunConfig) -> Report:
    """
    Closed-form and quadrature k^2 shifts of every kink level, plus the
    first-order k^4 term, for each k.
    """
    levels = _perturb_levels(config)

    def coefficients(level: LevelSpec) -> List[float]:
        return [
            first_order_coefficient(level),
            quadrature_coefficient(level, tol=config.tol, limit=config.quad_limit),
            k4_expectation(level, tol=config.tol, limit=config.quad_limit),
        ]

    coeffs = _map_ordered(coefficients, levels, config.workers)

    rows: List[List[Cell]] = []
    for level, (closed, numeric, quartic) in zip(levels, coeffs):
        for k in config.k_values:
            k2 = k * k
            rows.append(
                [
                    level.label,
                    float(k),
                    omega_perturbed(level, k),
                    k2 * closed,
                    k2 * numeric,
                    k2 * k2 * quartic,
                ]
            )

    table = Table(
        name="perturb",
        columns=["level", "k", "omega2", "shift_closed", "shift_quadrature", "k4_term"],
        rows=rows,
    )
    return Report(
        command="perturb",
        family=DefectFamily.PHI4_KINK.value,
        parameters=_parameters(config, "k_values", "box_half_widths", "q_min", "q_max", "q_steps", "tol"),
        tables=[table],
    )


def cmd_solve(config: RunConfig) -> Report:
    """Numerical spectrum of the exact potential for the configured family."""
    family = config.family
    grid = _bound_grid(config)

    def block(k: float) -> List[List[Cell]]:
        spectrum = solve_spectrum(QMPotentialSpec(family, k), grid, config.levels)
        unstable = spectrum.negative_modes(config.negative_tolerance)
        if unstable and family.is_kink:
            logger.warning("Kink spectrum at k=%g has negative levels %s", k, unstable)
        rows: List[List[Cell]] = []
        for i, (w, psi) in enumerate(zip(spectrum.eigenvalues, spectrum.eigenfunctions)):
            rows.append(
                [
                    float(k),
                    i,
                    float(w),
                    count_nodes(psi),
                    parity(psi) if grid.is_symmetric else "",
                    int(i in unstable),
                    int(spectrum.is_box_state(i)),
                ]
            )
        return rows

    rows: List[List[Cell]] = []
    for part in _map_ordered(block, config.k_values, config.workers):
        rows.extend(part)

    table = Table(
        name="solve",
        columns=["k", "level", "eigenvalue", "nodes", "parity", "unstable", "box_state"],
        rows=rows,
    )
    return Report(
        command="solve",
        family=family.value,
        parameters=_parameters(
            config, "k_values", "bound_y_min", "bound_y_max", "bound_n", "levels", "negative_tolerance"
        ),
        tables=[table],
    )


def cmd_spectrum(config: RunConfig) -> Report:
    """
    Lowest max(levels, 2) kink levels, the first two against their closed-form
    perturbed values, plus the sampled V_QM and psi0 surfaces over (k, y).
    Levels without a closed form leave closed_form and difference empty.
    """
    family = DefectFamily.PHI4_KINK
    grid = _bound_grid(config)
    y = grid.nodes()
    m = max(config.levels, 2)

    def block(k: float):
        spec = QMPotentialSpec(family, k)
        spectrum = solve_spectrum(spec, grid, m)
        level_rows: List[List[Cell]] = []
        closed_levels = (LevelSpec.zero(), LevelSpec.one())
        for i, numerical in enumerate(spectrum.eigenvalues):
            closed: Cell = ""
            difference: Cell = ""
            if i < len(closed_levels):
                value = omega_perturbed(closed_levels[i], k)
                closed, difference = value, float(numerical) - value
            level_rows.append([float(k), i, float(numerical), closed, difference, int(spectrum.is_box_state(i))])
        surface = _rows(
            np.full_like(y, k),
            y,
            np.asarray(vqm(spec, y)),
            spectrum.eigenfunctions[0].values,
        )
        return level_rows, surface

    level_rows: List[List[Cell]] = []
    surface_rows: List[List[Cell]] = []
    for levels_part, surface_part in _map_ordered(block, config.spectrum_k_values, config.workers):
        level_rows.extend(levels_part)
        surface_rows.extend(surface_part)

    return Report(
        command="spectrum",
        family=family.value,
        parameters=_parameters(config, "spectrum_k_values", "bound_y_min", "bound_y_max", "bound_n", "levels"),
        tables=[
            Table(
                name="levels",
                columns=["k", "level", "numerical", "closed_form", "difference", "box_state"],
                rows=level_rows,
            ),
            Table(name="surface", columns=["k", "y", "potential", "psi0"], rows=surface_rows),
        ],
    )


# =============================================================================
# continuum / sweep
# =============================================================================


def cmd_continuum(config: RunConfig) -> Report:
    """|psi_q|^2 over (q, y) in each box, and the perturbed w_q^2 per (L, k, q)."""
    qs = config.q_values()

    def block(L: float) -> List[List[Cell]]:
        box = ContinuumBox(L)
        y = Grid.symmetric(L, config.continuum_points).nodes()
        rows: List[List[Cell]] = []
        for q in qs:
            density = np.asarray(ContinuumMode.of(q, box).density(y))
            rows.extend(_rows(np.full_like(y, L), np.full_like(y, q), y, density))
        return rows

    density_rows: List[List[Cell]] = []
    for part in _map_ordered(block, config.box_half_widths, config.workers):
        density_rows.extend(part)

    omega_rows: List[List[Cell]] = []
    for L in config.box_half_widths:
        for k in config.continuum_k_values:
            for q in qs:
                omega2 = omega_perturbed(LevelSpec.continuum(q, L), k)
                base = 4.0 + q * q
                omega_rows.append([float(L), float(k), float(q), omega2, base, omega2 - base])

    return Report(
        command="continuum",
        family=DefectFamily.PHI4_KINK.value,
        parameters=_parameters(
            config, "box_half_widths", "continuum_k_values", "q_min", "q_max", "q_steps", "continuum_points"
        ),
        tables=[
            Table(name="density", columns=["L", "q", "y", "density"], rows=density_rows),
            Table(
                name="omega2",
                columns=["L", "k", "q", "omega2", "unperturbed", "shift"],
                rows=omega_rows,
            ),
        ],
    )


COMMANDS: Dict[str, Callable[[RunConfig], Report]] = {
    "profile": cmd_profile,
    "mass": cmd_mass,
    "qm-potential": cmd_qm_potential,
    "pt-modes": cmd_pt_modes,
    "perturb": cmd_perturb,
    "solve": cmd_solve,
    "spectrum": cmd_spectrum,
    "continuum": cmd_continuum,
}

SWEEP_COMMANDS = ("profile", "mass", "spectrum", "continuum")


def run(command: str, config: RunConfig) -> List[Report]:
    """Dispatch a subcommand; sweep expands into the figure commands."""
    names = list(SWEEP_COMMANDS) if command == "sweep" else [command]
    unknown = [n for n in names if n not in COMMANDS]
    if unknown:
        raise ValueError(f"Unknown command {command!r}")

    reports = []
    for name in names:
        logger.info("Running %s", name)
        reports.append(COMMANDS[name](config))
        logger.info("Finished %s", name)
    return reports
