"""Grid eigensolver for a single 1D dipole and the scalars derived from it.

The default discretization is a sine-basis DVR (Dirichlet walls at the grid
edges), which converges exponentially for smooth potentials; the plain 3-point
finite-difference Laplacian is kept as ``method="fd3"`` for comparison.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla

from .errors import BoundaryLeak, CurvatureUndefined, GridTooCoarse
from .potentials import Grid, PotentialSpec, default_grid

LEAK_TOL = 1e-6
EDGE_FRACTION = 0.02


@dataclass(frozen=True)
class DipoleEigensystem:
    potential: PotentialSpec
    grid: Grid
    energies: np.ndarray
    wavefunctions: np.ndarray  # (n_levels, n_points), normalized with weight grid.spacing
    x_mat: np.ndarray
    p_mat: np.ndarray  # Im <n|p|k>; the full element is i * p_mat
    method: str = "dvr"
    leak: float = 0.0
    mass: float = 1.0

    @property
    def n_levels(self) -> int:
        return self.energies.size

    @property
    def omega10(self) -> float:
        return float(self.energies[1] - self.energies[0])

    @property
    def x01(self) -> float:
        return float(abs(self.x_mat[0, 1]))

    @property
    def p01(self) -> float:
        return float(abs(self.p_mat[0, 1]))

    @property
    def f(self) -> float:
        return oscillator_strength(self)

    @property
    def delta_nl(self) -> float:
        return nonlinearity(self)

    @property
    def trk_partial(self) -> float:
        return trk_sum(self, self.n_levels - 1)

    def omega_sq(self) -> float | None:
        """Curvature at the origin, or None where it is undefined (hard walls)."""
        try:
            return curvature(self.potential, self.grid)
        except CurvatureUndefined:
            return None

    def truncated(self, n_levels: int) -> DipoleEigensystem:
        if n_levels > self.n_levels:
            raise ValueError(f"only {self.n_levels} levels available")
        s = slice(0, n_levels)
        return replace(self, energies=self.energies[s], wavefunctions=self.wavefunctions[s],
                       x_mat=self.x_mat[s, s], p_mat=self.p_mat[s, s])

    def rescaled(self, energy_unit: float) -> DipoleEigensystem:
        """Energies multiplied by ``energy_unit``; the mass shrinks so f and the TRK sum are unchanged."""
        return replace(self, energies=self.energies * energy_unit, mass=self.mass / energy_unit)

    def to_csv(self) -> str:
        """One row per level: n, energy, x_0n, p_0n."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "energy", "x_0n", "p_0n"])
        for n in range(self.n_levels):
            w.writerow([n, repr(float(self.energies[n])), repr(float(self.x_mat[0, n])),
                        repr(float(self.p_mat[0, n]))])
        return buf.getvalue()


def _dvr(v: np.ndarray, grid: Grid, n_levels: int):
    # interior points of the grid; walls carry psi = 0
    n = grid.n_points - 1
    length = grid.length
    i = np.arange(1, n)
    u = np.sqrt(2.0 / n) * np.sin(np.pi * np.outer(i, i) / n)
    k = np.pi * i / length
    h = (u * (0.5 * k**2)) @ u + np.diag(v)
    e, vec = sla.eigh(h, subset_by_index=[0, n_levels - 1])
    c = u @ vec
    j, kk = i[:, None], i[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        dm = np.where((j + kk) % 2 == 1, 4.0 * j * kk / (length * (j**2 - kk**2)), 0.0)
    p = -(c.T @ dm @ c)
    return e, vec, p


def _fd3(v: np.ndarray, grid: Grid, n_levels: int):
    h = grid.spacing
    m = v.size
    diag = v + 1.0 / h**2
    off = np.full(m - 1, -0.5 / h**2)
    e, vec = sla.eigh_tridiagonal(diag, off, select="i", select_range=(0, n_levels - 1))
    # central differences with zero walls, antisymmetrized
    d = (np.diag(np.full(m - 1, 0.5 / h), 1) - np.diag(np.full(m - 1, 0.5 / h), -1))
    p = -(vec.T @ d @ vec)
    p = 0.5 * (p - p.T)
    return e, vec, p


def _phase_signs(vec: np.ndarray, x: np.ndarray) -> np.ndarray:
    # largest lobe positive, then chain x[n-1, n] > 0 wherever that element is not negligible
    cols = np.arange(vec.shape[1])
    signs = np.sign(vec[np.argmax(np.abs(vec), axis=0), cols])
    for n in range(1, vec.shape[1]):
        xnm = signs[n - 1] * signs[n] * (vec[:, n - 1] @ (x * vec[:, n]))
        if abs(xnm) > 1e-7 * max(abs(x[0]), abs(x[-1])) and xnm < 0:
            signs[n] = -signs[n]
    return signs


def _edge_leak(psi: np.ndarray) -> float:
    m = psi.shape[1]
    w = max(2, int(EDGE_FRACTION * m))
    return float(max(np.abs(psi[:, :w]).max(), np.abs(psi[:, -w:]).max()))


def _solve_once(potential: PotentialSpec, grid: Grid, n_levels: int, method: str) -> DipoleEigensystem:
    xs = grid.points
    v_full = potential(xs)
    x = xs[1:-1]
    v = v_full[1:-1]
    if method == "dvr":
        e, vec, p = _dvr(v, grid, n_levels)
    elif method == "fd3":
        e, vec, p = _fd3(v, grid, n_levels)
    else:
        raise ValueError(f"unknown method {method!r}")
    flips = _phase_signs(vec, x)
    vec = vec * flips
    p = p * np.outer(flips, flips)
    xm = vec.T @ (x[:, None] * vec)
    xm = 0.5 * (xm + xm.T)
    p = 0.5 * (p - p.T)
    psi = np.zeros((n_levels, xs.size))
    psi[:, 1:-1] = vec.T / math.sqrt(grid.spacing)
    sys = DipoleEigensystem(potential, grid, e, psi, xm, p, method)
    return sys


def _energy_shift(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(abs(a[-1]), a[-1] - a[0], 1e-300)
    return float(np.max(np.abs(a - b)) / scale)


def solve_dipole(potential: PotentialSpec, grid: Grid | None = None, n_levels: int = 20, *,
                 method: str = "dvr", check_convergence: bool = True, leak_tol: float = LEAK_TOL,
                 auto_widen: bool = True, max_widen: int = 4, refine_tol: float = 1e-4) -> DipoleEigensystem:
    """Lowest ``n_levels`` eigenstates of p^2/2 + V(xi) on ``grid``.

    Non-square-well grids are widened (same spacing) until the edge amplitude of
    every returned state is below ``leak_tol``; BoundaryLeak is raised if that
    fails. With ``check_convergence`` the grid is doubled once and
    GridTooCoarse raised if the top level moves by more than ``refine_tol``.
    """
    if grid is None:
        grid = default_grid(potential)
    if potential.shape == "square_well" and (grid.xi_min != -1.0 or grid.xi_max != 1.0):
        raise ValueError("square well grid must span [-1, 1]")
    if n_levels < 1 or n_levels > grid.n_points // 4:
        raise ValueError(f"n_levels={n_levels} must be in [1, n_points/4={grid.n_points // 4}]")
    if potential.shape == "tabulated" and len(potential.samples) != grid.n_points:
        raise ValueError("tabulated samples must match the grid length")

    walls = potential.shape == "square_well"
    sys = _solve_once(potential, grid, n_levels, method)
    if not walls:
        tries = 0
        leak = _edge_leak(sys.wavefunctions)
        while leak > leak_tol and auto_widen and tries < max_widen and potential.shape != "tabulated":
            grid = grid.widened(1.5)
            sys = _solve_once(potential, grid, n_levels, method)
            leak = _edge_leak(sys.wavefunctions)
            tries += 1
        if leak > leak_tol:
            raise BoundaryLeak(f"edge amplitude {leak:.2e} exceeds {leak_tol:.0e} on {grid}")
        sys = replace(sys, leak=leak)
    if check_convergence and potential.shape != "tabulated":
        fine = _solve_once(potential, grid.refined(), n_levels, method)
        shift = _energy_shift(sys.energies, fine.energies)
        if shift > refine_tol:
            raise GridTooCoarse(f"grid doubling moves the spectrum by {shift:.2e} (relative)")
    return sys


def harmonic_eigensystem(omega: float, n_levels: int, gamma: float = 0.0) -> DipoleEigensystem:
    """Closed-form ladder of omega^2 xi^2/2 + gamma xi^2/2 (no grid; wavefunctions left empty)."""
    w = math.sqrt(omega**2 + gamma)
    n = np.arange(n_levels)
    e = w * (n + 0.5)
    s = np.sqrt(n[1:] / (2 * w))
    x = np.diag(s, 1) + np.diag(s, -1)
    # <n-1|p|n> = -i sqrt(n w / 2)
    q = np.sqrt(n[1:] * w / 2)
    p = -np.diag(q, 1) + np.diag(q, -1)
    pot = PotentialSpec.harmonic(omega).with_correction(gamma)
    return DipoleEigensystem(pot, Grid(-1.0, 1.0, 64), e, np.zeros((n_levels, 0)), x, p, "analytic")


def oscillator_strength(sys: DipoleEigensystem) -> float:
    if sys.n_levels < 2:
        raise ValueError("need at least two levels")
    return 2.0 * sys.mass * sys.omega10 * sys.x_mat[0, 1] ** 2


def trk_sum(sys: DipoleEigensystem, n_terms: int) -> float:
    """m sum_{n=1}^{n_terms} (e_n - e_0) |x_n0|^2; saturates at 1/2."""
    if not 0 <= n_terms < sys.n_levels:
        raise ValueError(f"n_terms must be < n_levels={sys.n_levels}")
    w = sys.energies[1:n_terms + 1] - sys.energies[0]
    return float(sys.mass * np.sum(w * sys.x_mat[0, 1:n_terms + 1] ** 2))


def nonlinearity(sys: DipoleEigensystem) -> float:
    if sys.n_levels < 3:
        raise ValueError("need at least three levels")
    e = sys.energies
    return float((e[2] - e[0]) / (e[1] - e[0]))


def curvature(potential: PotentialSpec, grid: Grid | None = None) -> float:
    return potential.curvature(grid)


def renormalize_potential(potential: PotentialSpec, d: float) -> PotentialSpec:
    if d < 0:
        raise ValueError("D must be >= 0")
    return potential.with_correction(d * d)
