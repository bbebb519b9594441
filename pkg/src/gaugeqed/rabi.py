"""Two-level (quantum Rabi) reductions of the full gauge models."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bosons import number, quadrature
from .dipole import DipoleEigensystem
from .errors import TruncationTooSmall
from .gauge import COULOMB, DIPOLE, GAUGES, PhotonMode
from .spectra import lowest_eigh

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.diag([-1.0, 1.0])


@dataclass(frozen=True)
class RabiParams:
    gauge: str
    omega_photon: float
    omega_qubit: float
    g: float

    def __post_init__(self):
        if self.gauge not in GAUGES:
            raise ValueError(f"unknown gauge {self.gauge!r}")
        if self.omega_photon <= 0 or self.omega_qubit <= 0 or self.g < 0:
            raise ValueError("Rabi frequencies must be positive and g >= 0")

    @property
    def zeta(self) -> float:
        return self.g**2 / (self.omega_photon * self.omega_qubit)


def project_rabi(sys: DipoleEigensystem, photon: PhotonMode, d: float, gauge: str) -> RabiParams:
    """Two-level projection. Coulomb uses the bare states, dipole the D^2-renormalized ones."""
    wc = photon.omega_c
    if gauge == COULOMB:
        if sys.potential.quad_correction != 0:
            raise ValueError("Coulomb projection needs the bare eigensystem")
        wt = math.sqrt(wc**2 + d * d)
        return RabiParams(COULOMB, wt, sys.omega10, math.sqrt(2 * d * d / wt) * sys.p01)
    if gauge == DIPOLE:
        if not math.isclose(sys.potential.quad_correction, d * d, rel_tol=1e-12, abs_tol=1e-14):
            raise ValueError("dipole projection needs the eigensystem with gamma = D^2")
        return RabiParams(DIPOLE, wc, sys.omega10, math.sqrt(2 * d * d * wc) * sys.x01)
    raise ValueError(f"unknown gauge {gauge!r}")


def rabi_hamiltonian(params: RabiParams, n_fock: int) -> np.ndarray:
    """omega c^dag c + (g/2)(c + c^dag) sigma_x + (omega_q/2) sigma_z, qubit-major ordering."""
    h = np.kron(np.eye(2), params.omega_photon * number(n_fock))
    h += 0.5 * params.g * np.kron(SIGMA_X, quadrature(n_fock))
    h += 0.5 * params.omega_qubit * np.kron(SIGMA_Z, np.eye(n_fock))
    return h


def rabi_spectrum(params: RabiParams, n_fock: int, k: int, *, check: bool = True, tol: float = 1e-4) -> np.ndarray:
    """Lowest ``k`` eigenvalues; with ``check`` the ground energy must be stable under n_fock + 10."""
    e = lowest_eigh(rabi_hamiltonian(params, n_fock), k)
    if check:
        e_big = lowest_eigh(rabi_hamiltonian(params, n_fock + 10), 1)[0]
        shift = abs(e_big - e[0]) / max(abs(e[0]), params.omega_photon)
        if shift > tol:
            raise TruncationTooSmall(f"Rabi ground energy moves by {shift:.2e} with 10 more photons")
    return e


def rabi_excitations(params: RabiParams, n_fock: int, k: int, **kw) -> np.ndarray:
    e = rabi_spectrum(params, n_fock, k + 1, **kw)
    return e[1:] - e[0]


def blue_shift(g0: float, omega_c: float, f: float) -> float:
    """Second-order spurious upshift of the lowest excitation in the Coulomb-gauge two-level model."""
    return g0**2 / (4 * omega_c * f)
