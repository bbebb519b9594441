"""Flux qubits (rf-SQUIDs at half flux quantum) coupled to an LC resonator.

All energies are E/h in GHz. A qubit is solved as a dimensionless dipole in the
potential e_j cos(phi) + e_l phi^2/2 with e_j = E_J/8E_Cq and e_l = E_Lq/8E_Cq;
its levels are then rescaled by 8E_Cq. x_mat is <phi>, p_mat is Im <Q>.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .bosons import annihilation
from .dipole import DipoleEigensystem, solve_dipole
from .gauge import FullModel, PhotonMode, build_full_dipole
from .potentials import Grid, PotentialSpec
from .spectra import lowest_eigh

FLUX = "flux"
CHARGE = "charge"
DM = "DM"
EDM = "EDM"
EDM_BARE = "EDMbare"
KINDS = (FLUX, CHARGE, DM, EDM, EDM_BARE)

QUBIT_GRID = Grid(-4 * math.pi, 4 * math.pi, 601)


@dataclass(frozen=True)
class CircuitSpec:
    e_j: float
    e_cq: float
    e_lq: float
    e_cr: float
    e_lr: float
    n_qubits: int = 1

    def __post_init__(self):
        for name in ("e_j", "e_cq", "e_lq", "e_cr", "e_lr"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")

    @property
    def omega_c(self) -> float:
        return math.sqrt(8 * self.e_cr * self.e_lr)

    @property
    def e_cr_dressed(self) -> float:
        return self.e_cr + self.n_qubits * self.e_cq

    @property
    def omega_c_tilde(self) -> float:
        return math.sqrt(8 * self.e_cr_dressed * self.e_lr)

    @property
    def double_well(self) -> bool:
        return self.e_j > self.e_lq

    @property
    def energy_unit(self) -> float:
        return 8 * self.e_cq

    def potential(self, renormalized: bool) -> PotentialSpec:
        u = self.energy_unit
        pot = PotentialSpec.flux_cosine(self.e_j / u, self.e_lq / u)
        return pot.with_correction(self.e_lr / u) if renormalized else pot

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> CircuitSpec:
        return cls(**json.loads(text))


@lru_cache(maxsize=256)
def _qubit_cached(pot: PotentialSpec, n_levels: int, grid: Grid, check: bool) -> DipoleEigensystem:
    return solve_dipole(pot, grid, n_levels, check_convergence=check)


def qubit_levels(spec: CircuitSpec, renormalized: bool, n_levels: int = 10, grid: Grid = QUBIT_GRID,
                 check_convergence: bool = False) -> DipoleEigensystem:
    """Qubit eigensystem in GHz, bare or with the resonator's E_Lr phi^2/2 folded in."""
    sys = _qubit_cached(spec.potential(renormalized), n_levels, grid, check_convergence)
    return sys.rescaled(spec.energy_unit)


@dataclass(frozen=True)
class CircuitModel:
    kind: str
    matrix: object  # dense ndarray or scipy sparse
    n_qubits: int
    qubit_dim: int
    n_fock: int
    spec: CircuitSpec

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.matrix.shape[0] != self.qubit_dim**self.n_qubits * self.n_fock:
            raise ValueError("matrix dimension does not match the basis")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def sectors(self):
        """Exchange-symmetric and antisymmetric isometries for two identical qubits."""
        if self.n_qubits != 2:
            return None
        return exchange_sectors(self.qubit_dim, self.n_fock)

    def eigh(self, k: int):
        return lowest_eigh(self.matrix, k, vectors=True, sectors=self.sectors())

    def eigenvalues(self, k: int) -> np.ndarray:
        return lowest_eigh(self.matrix, k, sectors=self.sectors())

    def excitations(self, k: int) -> np.ndarray:
        e = self.eigenvalues(k + 1)
        return e[1:] - e[0]


def exchange_sectors(d: int, n_fock: int):
    rows_s, cols_s, vals_s, rows_a, cols_a, vals_a = [], [], [], [], [], []
    ns = na = 0
    r = 1 / math.sqrt(2)
    for i in range(d):
        for j in range(i, d):
            for n in range(n_fock):
                ij = (i * d + j) * n_fock + n
                ji = (j * d + i) * n_fock + n
                if i == j:
                    rows_s.append(ij), cols_s.append(ns), vals_s.append(1.0)
                else:
                    rows_s += [ij, ji]; cols_s += [ns, ns]; vals_s += [r, r]
                    rows_a += [ij, ji]; cols_a += [na, na]; vals_a += [r, -r]
                    na += 1
                ns += 1
    dim = d * d * n_fock
    sym = sp.csr_matrix((vals_s, (rows_s, cols_s)), shape=(dim, ns))
    anti = sp.csr_matrix((vals_a, (rows_a, cols_a)), shape=(dim, na))
    return [sym, anti]


def _kron(*ops):
    out = ops[0]
    for o in ops[1:]:
        out = sp.kron(out, o, format="csr")
    return out


def _embed(op, i: int, n: int, d: int, photon):
    ops = [sp.identity(d, format="csr")] * n
    ops[i] = sp.csr_matrix(op)
    return _kron(*ops, photon)


def _finish(h, dense_limit=3500):
    h = sp.csr_matrix(h)
    return h.toarray() if h.shape[0] <= dense_limit else h


def build_flux_gauge(spec: CircuitSpec, n_fock: int = 40, levels: int = 6, grid: Grid = QUBIT_GRID) -> CircuitModel:
    """Node-flux quantization: renormalized qubits coupled through phi_i (a + a^dag) plus phi_i phi_j terms."""
    q = qubit_levels(spec, True, levels, grid)
    n, el = spec.n_qubits, spec.e_lr
    a = sp.csr_matrix(annihilation(n_fock))
    idf = sp.identity(n_fock, format="csr")
    hq = np.diag(q.energies - q.energies[0])
    coup = el * (2 * spec.e_cr / el) ** 0.25
    h = _kron(sp.identity(levels**n, format="csr"), spec.omega_c * (a.T @ a))
    for i in range(n):
        h = h + _embed(hq, i, n, levels, idf) - coup * _embed(q.x_mat, i, n, levels, a + a.T)
    for i in range(n):
        for j in range(i + 1, n):
            ops = [sp.identity(levels, format="csr")] * n
            ops[i] = ops[j] = sp.csr_matrix(q.x_mat)
            h = h + el * _kron(*ops, idf)
    return CircuitModel(FLUX, _finish(h), n, levels, n_fock, spec)


def build_charge_gauge(spec: CircuitSpec, n_fock: int = 60, levels: int = 40, grid: Grid = QUBIT_GRID) -> CircuitModel:
    """Node-charge quantization: bare qubits coupled through Q_i to the charge-dressed resonator."""
    q = qubit_levels(spec, False, levels, grid)
    n = spec.n_qubits
    a = sp.csr_matrix(annihilation(n_fock))
    idf = sp.identity(n_fock, format="csr")
    hq = np.diag(q.energies - q.energies[0])
    coup = 8 * spec.e_cq * (spec.e_lr / (32 * spec.e_cr_dressed)) ** 0.25
    # i Q (x) i (a^dag - a) is real: -Q_im (x) (a^dag - a)
    h = _kron(sp.identity(levels**n, format="csr"), spec.omega_c_tilde * (a.T @ a))
    for i in range(n):
        h = h + _embed(hq, i, n, levels, idf) - coup * _embed(q.p_mat, i, n, levels, a.T - a)
    return CircuitModel(CHARGE, _finish(h), n, levels, n_fock, spec)


def reduced_params(spec: CircuitSpec, kind: str) -> dict[str, float]:
    """Photon frequency, qubit splitting, coupling and S_x^2 coefficient of a two-level reduction."""
    if kind == DM:
        q = qubit_levels(spec, False, 4)
        g = 8 * spec.e_cq * (spec.e_lr / (2 * spec.e_cr_dressed)) ** 0.25 * q.p01
        return {"omega_photon": spec.omega_c_tilde, "omega_qubit": q.omega10, "g": g, "sx2": 0.0}
    if kind in (EDM, EDM_BARE):
        q = qubit_levels(spec, kind == EDM, 4)
        g = spec.omega_c * (spec.e_lr / (2 * spec.e_cr)) ** 0.25 * q.x01
        return {"omega_photon": spec.omega_c, "omega_qubit": q.omega10, "g": g, "sx2": g * g / spec.omega_c}
    raise ValueError(f"{kind!r} is not a two-level reduction")


def reduce(spec: CircuitSpec, kind: str, n_fock: int = 60) -> CircuitModel:
    """omega b^dag b + omega_q S_z + g (b + b^dag) S_x [+ (g^2/omega_c) S_x^2]."""
    p = reduced_params(spec, kind)
    n = spec.n_qubits
    a = sp.csr_matrix(annihilation(n_fock))
    idf = sp.identity(n_fock, format="csr")
    sx = np.array([[0.0, 0.5], [0.5, 0.0]])
    sz = np.diag([-0.5, 0.5])
    big_sx = sum(_kron(*[sp.csr_matrix(sx) if j == i else sp.identity(2) for j in range(n)]) for i in range(n))
    big_sz = sum(_kron(*[sp.csr_matrix(sz) if j == i else sp.identity(2) for j in range(n)]) for i in range(n))
    h = _kron(sp.identity(2**n, format="csr"), p["omega_photon"] * (a.T @ a))
    h = h + p["omega_qubit"] * _kron(big_sz, idf) + p["g"] * _kron(big_sx, a + a.T)
    if p["sx2"]:
        h = h + p["sx2"] * _kron(big_sx @ big_sx, idf)
    return CircuitModel(kind, _finish(h), n, 2, n_fock, spec)


def ground_observables(model: CircuitModel) -> dict[str, float]:
    """Photon number in the model's own photon basis and single-qubit entropy S_1 (bits).

    Each qubit is projected onto its two lowest basis levels before tracing out
    the rest; for two-level models the projection is the identity.
    """
    _, vec = model.eigh(1)
    psi = np.asarray(vec[:, 0]).ravel()
    n, d, nf = model.n_qubits, model.qubit_dim, model.n_fock
    photon = float(np.sum(np.abs(psi.reshape(-1, nf)) ** 2 * np.arange(nf)))
    t = psi.reshape([d] * n + [nf])[tuple([slice(0, 2)] * n)]
    t = t / np.linalg.norm(t)
    m = t.reshape(2, -1)
    rho = m @ m.conj().T
    p = np.linalg.eigvalsh(rho)
    p = p[p > 1e-15]
    return {"photon_number": photon, "entropy_bits": float(max(0.0, -np.sum(p * np.log2(p))))}


def tune_resonance(spec: CircuitSpec, omega_c: float) -> CircuitSpec:
    """Adjust E_Cr so that sqrt(8 E_Cr E_Lr) = omega_c."""
    return replace(spec, e_cr=omega_c**2 / (8 * spec.e_lr))


def spec_for_coupling(e_j: float, e_cq: float, e_lq: float, g0_over_wc: float, n_qubits: int = 1) -> CircuitSpec:
    """Resonant circuit (omega_c = bare omega_10) whose bare coupling g0 = sqrt(2 E_Lr omega_c)|phi_01| hits the target."""
    probe = CircuitSpec(e_j, e_cq, e_lq, 1.0, 1.0, n_qubits)
    q = qubit_levels(probe, False, 4)
    wc = q.omega10
    e_lr = (g0_over_wc * wc) ** 2 / (2 * wc * q.x01**2)
    return tune_resonance(replace(probe, e_lr=e_lr), wc)


def bare_coupling(spec: CircuitSpec) -> float:
    q = qubit_levels(spec, False, 4)
    return math.sqrt(2 * spec.e_lr * spec.omega_c) * q.x01


def dipole_counterpart(spec: CircuitSpec, n_fock: int, levels: int, grid: Grid = QUBIT_GRID) -> tuple[FullModel, float]:
    """The single-qubit flux-gauge circuit as a dipole-gauge cavity model in units of 8 E_Cq.

    Returns the model and the energy unit to multiply its spectrum by.
    """
    if spec.n_qubits != 1:
        raise ValueError("the dipole mapping is defined for one qubit")
    u = spec.energy_unit
    d = math.sqrt(spec.e_lr / u)
    sys_tilde = _qubit_cached(spec.potential(True), levels, grid, False)
    return build_full_dipole(sys_tilde, PhotonMode(spec.omega_c / u, n_fock), d), u
