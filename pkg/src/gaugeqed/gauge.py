"""Full single-dipole cavity Hamiltonians in the Coulomb and dipole gauge."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bosons import annihilation, number, quadrature
from .dipole import DipoleEigensystem, renormalize_potential, solve_dipole
from .errors import TruncationTooSmall
from .potentials import Grid, PotentialSpec
from .spectra import lowest_eigh

COULOMB = "coulomb"
DIPOLE = "dipole"
GAUGES = (COULOMB, DIPOLE)

FOCK_STEP = 10
FOCK_CAP = 200


@dataclass(frozen=True)
class PhotonMode:
    omega_c: float
    n_fock: int = 40

    def __post_init__(self):
        if not self.omega_c > 0:
            raise ValueError("omega_c must be > 0")
        if self.n_fock < 2:
            raise ValueError("n_fock must be >= 2")


@dataclass(frozen=True)
class CouplingConfig:
    """Coupling knob D with the derived renormalized mode and bare coupling."""

    d: float
    omega_c: float
    x01: float

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("D must be >= 0")

    @classmethod
    def from_g0(cls, g0: float, omega_c: float, x01: float) -> CouplingConfig:
        return cls(g0 / (math.sqrt(2 * omega_c) * abs(x01)), omega_c, abs(x01))

    @property
    def d2(self) -> float:
        return self.d * self.d

    @property
    def omega_c_tilde(self) -> float:
        return math.sqrt(self.omega_c**2 + self.d2)

    @property
    def g0(self) -> float:
        return math.sqrt(2 * self.d2 * self.omega_c) * self.x01


@dataclass(frozen=True)
class FullModel:
    gauge: str
    matrix: np.ndarray
    n_levels: int
    n_fock: int
    omega_c: float
    d: float

    def __post_init__(self):
        if self.gauge not in GAUGES:
            raise ValueError(f"unknown gauge {self.gauge!r}")
        if self.matrix.shape != (self.n_levels * self.n_fock,) * 2:
            raise ValueError("matrix dimension does not match the level x Fock basis")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def hermiticity_error(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def eigenvalues(self, k: int) -> np.ndarray:
        return lowest_eigh(self.matrix, k)

    def excitations(self, k: int) -> np.ndarray:
        """E_1 - E_0, ..., E_k - E_0."""
        e = self.eigenvalues(k + 1)
        return e[1:] - e[0]


def _coulomb_matrix(sys: DipoleEigensystem, omega_c: float, d: float, n_fock: int) -> np.ndarray:
    wt = math.sqrt(omega_c**2 + d * d)
    nl = sys.n_levels
    h = np.kron(np.diag(sys.energies), np.eye(n_fock)).astype(complex)
    h += np.kron(np.eye(nl), wt * number(n_fock))
    h += math.sqrt(d * d / (2 * wt)) * np.kron(1j * sys.p_mat, quadrature(n_fock))
    return h


def _dipole_matrix(sys: DipoleEigensystem, omega_c: float, d: float, n_fock: int) -> np.ndarray:
    nl = sys.n_levels
    h = np.kron(np.diag(sys.energies), np.eye(n_fock))
    h += np.kron(np.eye(nl), omega_c * number(n_fock))
    h += math.sqrt(d * d * omega_c / 2) * np.kron(sys.x_mat, quadrature(n_fock))
    return h


def _check_truncation(build, sys, omega_c, d, n_fock, tol=1e-4):
    e0 = lowest_eigh(build(sys, omega_c, d, n_fock), 1)[0]
    e1 = lowest_eigh(build(sys, omega_c, d, n_fock + FOCK_STEP), 1)[0]
    shift = abs(e1 - e0) / max(abs(e0), omega_c)
    if shift > tol:
        raise TruncationTooSmall(f"ground energy moves by {shift:.2e} when n_fock {n_fock} -> {n_fock + FOCK_STEP}")


def build_full_coulomb(sys: DipoleEigensystem, photon: PhotonMode, d: float, *, check: bool = False) -> FullModel:
    """Coulomb gauge in the Bogoliubov frame of the A^2-dressed mode.

    ``sys`` must come from the bare potential.
    """
    if sys.potential.quad_correction != 0:
        raise ValueError("Coulomb gauge needs the bare dipole eigensystem")
    if check:
        _check_truncation(_coulomb_matrix, sys, photon.omega_c, d, photon.n_fock)
    h = _coulomb_matrix(sys, photon.omega_c, d, photon.n_fock)
    return FullModel(COULOMB, h, sys.n_levels, photon.n_fock, photon.omega_c, d)


def build_full_dipole(sys_tilde: DipoleEigensystem, photon: PhotonMode, d: float, *,
                      check: bool = False) -> FullModel:
    """Dipole gauge; ``sys_tilde`` must be solved with quad_correction = D^2."""
    if not math.isclose(sys_tilde.potential.quad_correction, d * d, rel_tol=1e-12, abs_tol=1e-14):
        raise ValueError("dipole gauge needs the eigensystem of the renormalized potential (gamma = D^2)")
    if check:
        _check_truncation(_dipole_matrix, sys_tilde, photon.omega_c, d, photon.n_fock)
    h = _dipole_matrix(sys_tilde, photon.omega_c, d, photon.n_fock)
    return FullModel(DIPOLE, h, sys_tilde.n_levels, photon.n_fock, photon.omega_c, d)


def converge_fock(sys: DipoleEigensystem, omega_c: float, d: float, gauge: str, start: int = 20,
                  tol: float = 1e-6, cap: int = FOCK_CAP) -> int:
    """Grow n_fock in steps of 10 until the ground energy is stable to ``tol`` (absolute)."""
    build = _coulomb_matrix if gauge == COULOMB else _dipole_matrix
    n = start
    prev = lowest_eigh(build(sys, omega_c, d, n), 1)[0]
    while n + FOCK_STEP <= cap:
        cur = lowest_eigh(build(sys, omega_c, d, n + FOCK_STEP), 1)[0]
        if abs(cur - prev) < tol:
            return n
        n += FOCK_STEP
        prev = cur
    raise TruncationTooSmall(f"ground energy not stable to {tol:.0e} below n_fock = {cap}")


def gauge_invariance_check(m_c: FullModel, m_d: FullModel, k: int) -> float:
    """Largest relative deviation among the lowest ``k`` excitation energies."""
    ec = m_c.excitations(k)
    ed = m_d.excitations(k)
    return float(np.max(np.abs(ec - ed) / np.abs(ed)))


@dataclass(frozen=True)
class ResonantSetup:
    """Bare and renormalized eigensystems for one coupling, with omega_c = omega_10."""

    bare: DipoleEigensystem
    tilde: DipoleEigensystem
    coupling: CouplingConfig

    @property
    def omega_c(self) -> float:
        return self.coupling.omega_c


def resonant_setup(potential: PotentialSpec, g0_over_wc: float, n_levels: int = 20, grid: Grid | None = None,
                   bare: DipoleEigensystem | None = None, check_convergence: bool = False) -> ResonantSetup:
    """Solve the bare dipole, put the cavity on resonance and solve the D^2-renormalized dipole."""
    if bare is None:
        bare = solve_dipole(potential, grid, n_levels, check_convergence=check_convergence)
    wc = bare.omega10
    coupling = CouplingConfig.from_g0(g0_over_wc * wc, wc, bare.x01)
    tilde = solve_dipole(renormalize_potential(potential, coupling.d), bare.grid, bare.n_levels,
                         check_convergence=check_convergence)
    return ResonantSetup(bare, tilde, coupling)


def full_pair(setup: ResonantSetup, n_fock: int) -> tuple[FullModel, FullModel]:
    photon = PhotonMode(setup.omega_c, n_fock)
    d = setup.coupling.d
    return build_full_coulomb(setup.bare, photon, d), build_full_dipole(setup.tilde, photon, d)
