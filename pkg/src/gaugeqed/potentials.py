"""One-dimensional confinement potentials and the grids they are solved on.

Units: hbar = m = x_0 = 1, so energies are in units of E_d = hbar^2/(m x_0^2).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any

import numpy as np

from .errors import CurvatureUndefined

SHAPES = ("square_well", "double_well", "harmonic", "flux_cosine", "tabulated")


@dataclass(frozen=True)
class PotentialSpec:
    """Declarative potential V(xi) + quad_correction * xi^2 / 2.

    Only the parameters belonging to ``shape`` are meaningful; use the
    constructors (``double_well(2.4)`` etc.) rather than filling fields by hand.
    """

    shape: str
    beta: float | None = None
    omega: float | None = None
    e_j: float | None = None
    e_l: float | None = None
    samples: tuple[float, ...] | None = None
    quad_correction: float = 0.0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown potential shape {self.shape!r}")
        if self.quad_correction < 0:
            raise ValueError("quad_correction must be >= 0")
        if self.shape == "double_well" and not (self.beta is not None and self.beta > 0):
            raise ValueError("double_well requires beta > 0")
        if self.shape == "harmonic" and not (self.omega is not None and self.omega > 0):
            raise ValueError("harmonic requires omega > 0")
        if self.shape == "flux_cosine" and (self.e_j is None or self.e_l is None):
            raise ValueError("flux_cosine requires e_j and e_l")
        if self.shape == "tabulated":
            if not self.samples:
                raise ValueError("tabulated potential requires samples")
            object.__setattr__(self, "samples", tuple(float(s) for s in self.samples))

    @classmethod
    def square_well(cls) -> PotentialSpec:
        return cls("square_well")

    @classmethod
    def double_well(cls, beta: float) -> PotentialSpec:
        return cls("double_well", beta=float(beta))

    @classmethod
    def harmonic(cls, omega: float = 1.0) -> PotentialSpec:
        return cls("harmonic", omega=float(omega))

    @classmethod
    def flux_cosine(cls, e_j: float, e_l: float) -> PotentialSpec:
        return cls("flux_cosine", e_j=float(e_j), e_l=float(e_l))

    @classmethod
    def tabulated(cls, samples) -> PotentialSpec:
        return cls("tabulated", samples=tuple(np.asarray(samples, dtype=float)))

    @property
    def symmetric(self) -> bool:
        if self.shape == "tabulated":
            s = np.asarray(self.samples)
            return bool(np.allclose(s, s[::-1]))
        return True

    def bare(self, xi: np.ndarray) -> np.ndarray:
        """V(xi) without the quadratic correction. Tabulated samples are returned as is."""
        xi = np.asarray(xi, dtype=float)
        if self.shape == "square_well":
            return np.zeros_like(xi)
        if self.shape == "double_well":
            return -0.5 * self.beta * xi**2 + 0.25 * xi**4
        if self.shape == "harmonic":
            return 0.5 * self.omega**2 * xi**2
        if self.shape == "flux_cosine":
            return self.e_j * np.cos(xi) + 0.5 * self.e_l * xi**2
        s = np.asarray(self.samples)
        if s.shape != xi.shape:
            raise ValueError(f"tabulated potential has {s.size} samples, grid has {xi.size} points")
        return s.copy()

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return self.bare(xi) + 0.5 * self.quad_correction * xi**2

    def curvature(self, grid: Grid | None = None) -> float:
        """Omega^2 = V''(0) including the quadratic correction."""
        if self.shape == "square_well":
            raise CurvatureUndefined("square well has hard walls; curvature at the origin is not defined")
        g = self.quad_correction
        if self.shape == "double_well":
            return -self.beta + g
        if self.shape == "harmonic":
            return self.omega**2 + g
        if self.shape == "flux_cosine":
            return -self.e_j + self.e_l + g
        if grid is None:
            raise CurvatureUndefined("tabulated potential needs its grid to estimate the curvature")
        xi = grid.points
        v = self(xi)
        i = int(np.argmin(np.abs(xi)))
        if i == 0 or i == xi.size - 1 or abs(xi[i]) > 1e-12:
            raise CurvatureUndefined("grid does not contain an interior point at the origin")
        h = grid.spacing
        return float((v[i + 1] - 2 * v[i] + v[i - 1]) / h**2)

    def with_correction(self, gamma: float) -> PotentialSpec:
        return replace(self, quad_correction=float(gamma))

    def to_dict(self) -> dict[str, Any]:
        d = {k: v for k, v in asdict(self).items() if v is not None}
        if "samples" in d:
            d["samples"] = list(d["samples"])
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> PotentialSpec:
        return cls(**d)


@dataclass(frozen=True)
class Grid:
    xi_min: float
    xi_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 64:
            raise ValueError("grid needs n_points >= 64")
        if not self.xi_max > self.xi_min:
            raise ValueError("grid needs xi_max > xi_min")

    @property
    def spacing(self) -> float:
        return (self.xi_max - self.xi_min) / (self.n_points - 1)

    @property
    def length(self) -> float:
        return self.xi_max - self.xi_min

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.xi_min, self.xi_max, self.n_points)

    @property
    def symmetric(self) -> bool:
        return math.isclose(self.xi_min, -self.xi_max, rel_tol=0, abs_tol=1e-12)

    def widened(self, factor: float) -> Grid:
        """Same spacing, ``factor`` times the extent (rounded to keep the origin on the grid)."""
        half_cells = int(math.ceil(0.5 * (self.n_points - 1) * factor))
        h = self.spacing
        c = 0.5 * (self.xi_min + self.xi_max)
        return Grid(c - half_cells * h, c + half_cells * h, 2 * half_cells + 1)

    def refined(self) -> Grid:
        return Grid(self.xi_min, self.xi_max, 2 * (self.n_points - 1) + 1)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Grid:
        return cls(float(d["xi_min"]), float(d["xi_max"]), int(d["n_points"]))


def default_grid(potential: PotentialSpec, n_points: int = 401) -> Grid:
    """Starting grid per shape. solve_dipole widens it automatically if states leak."""
    if potential.shape == "square_well":
        # position elements of the wall states converge slowest; 801 points keep them at 1e-11
        return Grid(-1.0, 1.0, max(n_points, 801))
    if potential.shape == "double_well":
        half = 6.0 * max(1.0, math.sqrt(potential.beta / 2.4))
        return Grid(-half, half, n_points)
    if potential.shape == "harmonic":
        half = 10.0 / math.sqrt(potential.omega)
        return Grid(-half, half, n_points)
    if potential.shape == "flux_cosine":
        return Grid(-4 * math.pi, 4 * math.pi, max(n_points, 601))
    raise ValueError("tabulated potentials need an explicit grid")


def dumps(potential: PotentialSpec, grid: Grid | None = None) -> str:
    payload: dict[str, Any] = {"potential": potential.to_dict()}
    if grid is not None:
        payload["grid"] = grid.to_dict()
    return json.dumps(payload, indent=2, sort_keys=True)


def loads(text: str) -> tuple[PotentialSpec, Grid | None]:
    payload = json.loads(text)
    grid = Grid.from_dict(payload["grid"]) if "grid" in payload else None
    return PotentialSpec.from_dict(payload["potential"]), grid
