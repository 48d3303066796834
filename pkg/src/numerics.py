"""
Independent numerical oracles.

- quad / quad_line: adaptive Gauss-Kronrod quadrature (QUADPACK via scipy)
- solve_spectrum: finite-difference eigensolver for -psi'' + V psi = w^2 psi
- second_derivative, count_nodes, parity: profile diagnostics used by the
  residual and Sturm checks
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, List, Tuple, Union

import numpy as np
from scipy import integrate, linalg

from .models import Grid, Profile, QMPotentialSpec, QuadResult

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_LIMIT = 200

Potential = Union[QMPotentialSpec, Callable[[np.ndarray], np.ndarray]]


class NumericalError(RuntimeError):
    """Base class for quadrature and eigensolver failures."""


class QuadratureError(NumericalError):
    def __init__(self, message: str, value: float, error_estimate: float, evaluations: int):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.evaluations = evaluations


class SolverError(NumericalError):
    pass


# =============================================================================
# Quadrature
# =============================================================================


def quad(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    limit: int = DEFAULT_LIMIT,
) -> QuadResult:
    """
    Integrate f over [a, b] to absolute tolerance tol.

    Raises QuadratureError (carrying the best estimate) when the reported
    error estimate exceeds tol.
    """
    if not tol > 0:
        raise ValueError(f"Quadrature tolerance must be positive, got {tol!r}")

    out = integrate.quad(f, a, b, epsabs=tol, epsrel=0.0, limit=limit, full_output=1)
    value, error, info = out[0], out[1], out[2]
    evaluations = int(info.get("neval", 0)) if isinstance(info, dict) else 0

    logger.debug("quad [%g, %g]: value=%.17g err=%.3g neval=%d", a, b, value, error, evaluations)

    if error > tol:
        raise QuadratureError(
            f"Quadrature on [{a}, {b}] did not reach tol={tol:g} "
            f"(estimate {error:.3g} after {evaluations} evaluations)",
            value=float(value),
            error_estimate=float(error),
            evaluations=evaluations,
        )

    if len(out) > 3:
        # QUADPACK raised a flag but the estimate is still inside tol
        logger.warning("Quadrature on [%g, %g] accepted with warning: %s", a, b, out[3])

    return QuadResult(value=float(value), error_estimate=float(error), evaluations=evaluations)


def quad_line(
    f: Callable[[float], float],
    tol: float = DEFAULT_TOL,
    limit: int = DEFAULT_LIMIT,
) -> QuadResult:
    """
    Integrate an exponentially decaying f over the whole real line.

    Substitutes y = t / (1 - t^2), dy = (1 + t^2) / (1 - t^2)^2 dt, which
    maps (-1, 1) onto the line; QUADPACK never samples the endpoints.
    """

    def mapped(t: float) -> float:
        one_minus = 1.0 - t * t
        y = t / one_minus
        return float(f(y)) * (1.0 + t * t) / (one_minus * one_minus)

    with np.errstate(over="ignore", under="ignore"):
        return quad(mapped, -1.0, 1.0, tol=tol, limit=limit)


# =============================================================================
# Eigensolver
# =============================================================================


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Lowest eigenpairs of the discretized fluctuation operator.

    eigenvalues are ascending; eigenfunctions[i] is unit-normalized on grid.
    Levels at or above continuum_edge discretize the continuum and depend
    on the box size.
    """
    eigenvalues: np.ndarray
    eigenfunctions: Tuple[Profile, ...]
    grid: Grid
    continuum_edge: float

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def box_states(self) -> List[int]:
        return [i for i, w in enumerate(self.eigenvalues) if w >= self.continuum_edge]

    def is_box_state(self, index: int) -> bool:
        return bool(self.eigenvalues[index] >= self.continuum_edge)

    def negative_modes(self, tolerance: float = 0.0) -> List[int]:
        """Levels with w^2 < -tolerance: unstable fluctuations."""
        return [i for i, w in enumerate(self.eigenvalues) if w < -tolerance]


def _sample_potential(potential: Potential, y: np.ndarray) -> Tuple[np.ndarray, float]:
    if isinstance(potential, QMPotentialSpec):
        from .families import constants_for
        from .schrodinger import vqm

        values = np.asarray(vqm(potential, y), dtype=float)
        return values, constants_for(potential.family).asymptote

    values = np.asarray(potential(y), dtype=float)
    if values.shape != y.shape:
        values = np.broadcast_to(values, y.shape).astype(float)
    return values, float(min(values[0], values[-1]))


def _fix_sign(vector: np.ndarray) -> np.ndarray:
    peak = np.max(np.abs(vector))
    first = int(np.argmax(np.abs(vector) > 1e-3 * peak))
    return -vector if vector[first] < 0 else vector


def solve_spectrum(potential: Potential, grid: Grid, m: int) -> Spectrum:
    """
    m lowest eigenpairs of -d^2/dy^2 + V on grid with Dirichlet edges.

    Second-order central differences on the interior nodes give a symmetric
    tridiagonal matrix; LAPACK bisection (Sturm counts) finds the selected
    eigenvalues and inverse iteration the vectors.
    """
    interior = grid.n - 2
    if m < 1:
        raise ValueError(f"Number of levels must be >= 1, got {m}")
    if m > interior:
        raise ValueError(f"Requested {m} levels but the grid only has {interior} interior nodes")

    y = grid.nodes()
    v, edge = _sample_potential(potential, y)
    if not np.all(np.isfinite(v)):
        raise SolverError("Potential is not finite on every grid node")

    h2 = grid.h**2
    diagonal = 2.0 / h2 + v[1:-1]
    off = np.full(interior - 1, -1.0 / h2)

    logger.debug("solve_spectrum: n=%d h=%.3g m=%d", grid.n, grid.h, m)
    try:
        w, vectors = linalg.eigh_tridiagonal(
            diagonal,
            off,
            select="i",
            select_range=(0, m - 1),
            lapack_driver="stebz",
        )
    except (linalg.LinAlgError, ValueError) as exc:
        raise SolverError(f"Tridiagonal eigensolver failed: {exc}") from exc

    if np.any(np.diff(w) <= 0):
        raise SolverError("Eigenvalues are not strictly ascending")

    profiles = []
    for i in range(len(w)):
        full = np.zeros(grid.n)
        full[1:-1] = vectors[:, i]
        full = _fix_sign(full / np.sqrt(grid.h * np.sum(full**2)))
        profiles.append(Profile(grid, full))

    spectrum = Spectrum(
        eigenvalues=np.asarray(w, dtype=float),
        eigenfunctions=tuple(profiles),
        grid=grid,
        continuum_edge=edge,
    )
    boxed = spectrum.box_states()
    if boxed:
        logger.warning(
            "%d of %d levels sit at or above the continuum edge %g (box-quantized)",
            len(boxed),
            len(w),
            edge,
        )
    return spectrum


# =============================================================================
# Profile diagnostics
# =============================================================================


def second_derivative(profile: Profile, method: str = "fd4") -> np.ndarray:
    """
    psi'' on every node.

    fd4: fourth-order central stencil inside, lower order on the two
    outermost nodes at each end.
    spectral: FFT derivative; only valid when psi vanishes at both edges.
    """
    v = profile.values
    h = profile.grid.h

    if method == "spectral":
        freq = 2.0 * np.pi * np.fft.fftfreq(len(v), d=h)
        return np.real(np.fft.ifft(-(freq**2) * np.fft.fft(v)))

    if method != "fd4":
        raise ValueError(f"Unknown derivative method {method!r} (expected 'fd4' or 'spectral')")
    if len(v) < 5:
        raise ValueError("fd4 needs at least 5 nodes")

    out = np.empty_like(v)
    out[2:-2] = (-v[:-4] + 16.0 * v[1:-3] - 30.0 * v[2:-2] + 16.0 * v[3:-1] - v[4:]) / (12.0 * h * h)
    out[1] = (v[0] - 2.0 * v[1] + v[2]) / (h * h)
    out[-2] = (v[-3] - 2.0 * v[-2] + v[-1]) / (h * h)
    out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (h * h)
    out[-1] = (2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]) / (h * h)
    return out


def count_nodes(profile: Profile, rel_tol: float = 1e-6) -> int:
    """Sign changes among nodes where |psi| > rel_tol * max|psi|."""
    v = profile.values
    significant = v[np.abs(v) > rel_tol * np.max(np.abs(v))]
    if len(significant) < 2:
        return 0
    return int(np.count_nonzero(np.signbit(significant[1:]) != np.signbit(significant[:-1])))


def parity(profile: Profile) -> float:
    """<psi | psi(-y)> / <psi | psi>: +1 for even, -1 for odd profiles."""
    if not profile.grid.is_symmetric:
        raise ValueError("Parity needs a grid symmetric about y = 0")
    v = profile.values
    return float(np.dot(v, v[::-1]) / np.dot(v, v))
