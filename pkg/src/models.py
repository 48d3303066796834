from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

# Below this |k| the deformed closed forms are replaced by their Taylor series.
EPS_K = 1e-4


class DefectFamily(str, Enum):
    """
    The three primitive defects and the theories supporting them.
    Values double as CLI tokens (--family phi4|chi4|sg).
    """
    PHI4_KINK = "phi4"
    CHI4_LUMP = "chi4"
    SINE_GORDON_LUMP = "sg"

    @classmethod
    def parse(cls, raw: str) -> "DefectFamily":
        token = raw.strip().lower()
        for member in cls:
            if token in (member.value, member.name.lower()):
                return member
        allowed = ", ".join(m.value for m in cls)
        raise ValueError(f"Unknown defect family {raw!r} (expected one of: {allowed})")

    @property
    def is_kink(self) -> bool:
        return self is DefectFamily.PHI4_KINK


class QMPotentialMode(str, Enum):
    """
    How V_QM is evaluated:
    - EXACT: the full potential for the deformed defect
    - EXPANDED_ORDER_K2: Pöschl-Teller limit + k² correction
    - EXPANDED_ORDER_K4: as above + k⁴ correction
    - POSCHL_TELLER_LIMIT: the k -> 0 limit
    """
    EXACT = "exact"
    EXPANDED_ORDER_K2 = "expanded_k2"
    EXPANDED_ORDER_K4 = "expanded_k4"
    POSCHL_TELLER_LIMIT = "poschl_teller"


@dataclass(frozen=True)
class DeformParam:
    """
    Deformation parameter k. Every deformed quantity is even in k, so the
    stored value is |k|.
    """
    k: float

    def __post_init__(self) -> None:
        value = float(self.k)
        if not math.isfinite(value):
            raise ValueError(f"Deformation parameter must be finite, got {self.k!r}")
        object.__setattr__(self, "k", abs(value))

    @property
    def uses_series(self) -> bool:
        return self.k < EPS_K

    @classmethod
    def of(cls, k: "float | DeformParam") -> "DeformParam":
        return k if isinstance(k, DeformParam) else cls(k)


@dataclass(frozen=True)
class Grid:
    """
    Uniform 1D grid with n nodes on [y_min, y_max] (both ends included).
    """
    y_min: float
    y_max: float
    n: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.y_min) and math.isfinite(self.y_max)):
            raise ValueError("Grid bounds must be finite")
        if not self.y_min < self.y_max:
            raise ValueError(f"Grid requires y_min < y_max, got [{self.y_min}, {self.y_max}]")
        if int(self.n) != self.n or self.n < 3:
            raise ValueError(f"Grid requires an integer n >= 3, got {self.n!r}")

    @classmethod
    def symmetric(cls, half_width: float, n: int) -> "Grid":
        return cls(-half_width, half_width, n)

    @property
    def h(self) -> float:
        return (self.y_max - self.y_min) / (self.n - 1)

    @property
    def is_symmetric(self) -> bool:
        return self.y_min == -self.y_max

    def nodes(self) -> np.ndarray:
        y = np.linspace(self.y_min, self.y_max, self.n)
        if self.is_symmetric:
            # exact mirror image, and an exact 0.0 at the centre for odd n
            y = 0.5 * (y - y[::-1])
        return y


@dataclass(frozen=True, eq=False)
class Profile:
    """
    Values sampled on every node of a grid.
    """
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise ValueError(f"Profile expects {self.grid.n} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("Profile values must be finite at every node")
        object.__setattr__(self, "values", values)

    @property
    def y(self) -> np.ndarray:
        return self.grid.nodes()

    def norm(self) -> float:
        """Discrete L2 norm, sqrt(h * sum v^2)."""
        return float(np.sqrt(self.grid.h * np.sum(self.values**2)))

    def normalized(self) -> "Profile":
        return Profile(self.grid, self.values / self.norm())

    def inner(self, other: "Profile") -> float:
        if other.grid != self.grid:
            raise ValueError("Inner product requires profiles on the same grid")
        return float(self.grid.h * np.dot(self.values, other.values))


@dataclass(frozen=True)
class QMPotentialSpec:
    """
    Selects one quantum-fluctuation potential: family, k and evaluation mode.
    """
    family: DefectFamily
    k: DeformParam = field(default_factory=lambda: DeformParam(0.0))
    mode: QMPotentialMode = QMPotentialMode.EXACT

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", DeformParam.of(self.k))


@dataclass(frozen=True)
class ContinuumBox:
    """
    Normalization box [-L, L] for continuum modes.
    """
    L: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.L) and self.L > 0):
            raise ValueError(f"Box half-width L must be positive and finite, got {self.L!r}")


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    evaluations: int


class LevelKind(str, Enum):
    ZERO = "zero"
    ONE = "one"
    TWO = "two"
    CONTINUUM = "continuum"


@dataclass(frozen=True)
class LevelSpec:
    """
    A level of the Pöschl-Teller problem whose perturbed eigenvalue is wanted.
    TWO and CONTINUUM live in the box [-L, L]; CONTINUUM also carries q.
    """
    kind: LevelKind
    q: Optional[float] = None
    L: Optional[float] = None

    @classmethod
    def zero(cls) -> "LevelSpec":
        return cls(LevelKind.ZERO)

    @classmethod
    def one(cls) -> "LevelSpec":
        return cls(LevelKind.ONE)

    @classmethod
    def two(cls, L: float) -> "LevelSpec":
        return cls(LevelKind.TWO, q=0.0, L=L)

    @classmethod
    def continuum(cls, q: float, L: float) -> "LevelSpec":
        return cls(LevelKind.CONTINUUM, q=q, L=L)

    @property
    def is_bound(self) -> bool:
        return self.kind in (LevelKind.ZERO, LevelKind.ONE)

    @property
    def label(self) -> str:
        if self.kind == LevelKind.CONTINUUM:
            return f"continuum(q={self.q:g},L={self.L:g})"
        if self.kind == LevelKind.TWO:
            return f"two(L={self.L:g})"
        return self.kind.value


@dataclass(frozen=True)
class PerturbedLevel:
    """
    Closed-form perturbed eigenvalue omega^2 of one level at deformation k.
    """
    level: LevelSpec
    k: DeformParam
    omega2: float
