"""Polariton branches of N dipoles in one cavity mode in the Holstein-Primakoff limit.

N never appears on its own: only the collective coupling G0 = g0 sqrt(N) and
N D^2 enter, as N -> infinity with g0 -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bosons import symplectic_frequencies
from .dipole import DipoleEigensystem
from .errors import RootBracketFailure, UnstableBranch

DICKE_COULOMB = "dicke_coulomb"
EXTENDED_DICKE = "extended_dicke"
EXACT = "exact_multilevel"

TRK_CUTOFF = 1e-6
PARITY_TOL = 1e-8
POLE_OFFSET = 1e-9


@dataclass(frozen=True)
class CollectiveConfig:
    g0_collective: float  # G0 = g0 sqrt(N)
    omega10: float
    omega_c: float
    f: float

    def __post_init__(self):
        if self.g0_collective < 0:
            raise ValueError("G0 must be >= 0")
        if self.omega10 <= 0 or self.omega_c <= 0:
            raise ValueError("frequencies must be > 0")
        if not 0 < self.f <= 1 + 1e-6:
            raise ValueError("oscillator strength must lie in (0, 1]")

    @classmethod
    def from_system(cls, sys: DipoleEigensystem, g0_collective: float, omega_c: float | None = None):
        wc = sys.omega10 if omega_c is None else omega_c
        return cls(g0_collective, sys.omega10, wc, sys.f)

    @property
    def x01(self) -> float:
        return math.sqrt(self.f / (2 * self.omega10))

    @property
    def nd2(self) -> float:
        """N D^2 = G0^2 / (2 x01^2 omega_c)."""
        return self.g0_collective**2 / (2 * self.x01**2 * self.omega_c)

    @property
    def omega_c_tilde(self) -> float:
        return math.sqrt(self.omega_c**2 + self.nd2)


@dataclass(frozen=True)
class PolaritonBranches:
    """Lower and upper branch, stored as squared frequencies so an instability stays visible."""

    minus_sq: float
    plus_sq: float
    source: str
    roots: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.minus_sq > self.plus_sq * (1 + 1e-12) + 1e-300:
            raise ValueError("branches out of order")

    @property
    def stable(self) -> bool:
        return self.minus_sq >= 0

    @property
    def omega_minus(self) -> float:
        if not self.stable:
            raise UnstableBranch(f"{self.source}: lower branch omega^2 = {self.minus_sq:.3g} < 0")
        return math.sqrt(self.minus_sq)

    @property
    def omega_plus(self) -> float:
        return math.sqrt(self.plus_sq)


def _branches(total: float, disc_sq: float, source: str) -> PolaritonBranches:
    disc = math.sqrt(max(disc_sq, 0.0))
    return PolaritonBranches(0.5 * (total - disc), 0.5 * (total + disc), source)


def dicke_branches(cfg: CollectiveConfig) -> PolaritonBranches:
    """Coulomb-gauge two-level (Dicke) branches, bosonized."""
    w10, nd2, f = cfg.omega10, cfg.nd2, cfg.f
    wt2 = cfg.omega_c_tilde**2
    return _branches(w10**2 + wt2, (wt2 - w10**2) ** 2 + 4 * nd2 * f * w10**2, DICKE_COULOMB)


def dicke_branches_rewritten(cfg: CollectiveConfig) -> PolaritonBranches:
    """Same branches written so the (1 - f) depolarization term is explicit."""
    w10, wc, nd2, f = cfg.omega10, cfg.omega_c, cfg.nd2, cfg.f
    s = w10**2 + wc**2 + nd2
    return _branches(s, s**2 - 4 * wc**2 * w10**2 - 4 * (1 - f) * nd2 * w10**2, DICKE_COULOMB)


def edm_branches(cfg: CollectiveConfig) -> PolaritonBranches:
    """Dipole-gauge two-level model including the S_x^2 term, bosonized."""
    w10, wc, g = cfg.omega10, cfg.omega_c, cfg.g0_collective
    big = w10 * (w10 + g**2 / wc)
    return _branches(big + wc**2, (big - wc**2) ** 2 + 4 * g**2 * w10 * wc, EXTENDED_DICKE)


def stability_bounds(cfg: CollectiveConfig) -> dict[str, float]:
    """Collective zeta parameters of both two-level models and their upper bounds (all < 1)."""
    w10, wc, nd2, f, g = cfg.omega10, cfg.omega_c, cfg.nd2, cfg.f, cfg.g0_collective
    return {
        "coulomb": nd2 * f / cfg.omega_c_tilde**2,
        "coulomb_bound": nd2 / (wc**2 + nd2),
        "dipole": g**2 / (wc * w10 + g**2),
        "dipole_bound": nd2 / (w10**2 + nd2),
    }


def coupled_levels(sys: DipoleEigensystem, n_levels: int | None = None, trk_cutoff: float = TRK_CUTOFF):
    """Indices n >= 1 with x_n0 != 0 (parity filter), stopping once the TRK weight per level drops below cutoff."""
    n_levels = sys.n_levels if n_levels is None else min(n_levels, sys.n_levels)
    x = sys.x_mat[0]
    w = sys.energies - sys.energies[0]
    idx = []
    for n in range(1, n_levels):
        if abs(x[n]) < PARITY_TOL * abs(x[1]):
            continue
        weight = w[n] * x[n] ** 2
        if n > 1 and weight < trk_cutoff:
            break
        idx.append(n)
    return np.array(idx, dtype=int)


def _couplings(sys: DipoleEigensystem, cfg: CollectiveConfig, n_levels, trk_cutoff):
    idx = coupled_levels(sys, n_levels, trk_cutoff)
    wn = (sys.energies - sys.energies[0])[idx]
    xn = sys.x_mat[0, idx]
    kappa_sq = 2 * cfg.nd2 * xn**2 * wn * wn**2
    return idx, wn, xn, kappa_sq


def dispersion_function(s, a: float, wn2: np.ndarray, kappa_sq: np.ndarray):
    """F(s) = s - a + sum_n kappa_n^2 / (omega_n^2 - s), increasing between poles."""
    s = np.asarray(s, dtype=float)
    return s - a + np.sum(kappa_sq / (wn2 - s[..., None]), axis=-1)


def _root_in(fun, lo, hi, pole_lo, pole_hi):
    # shrink the offset from a pole until F has the sign it must have there
    def edge(x0, direction, want_positive):
        for k in range(9, 16):
            x = x0 * (1 + direction * 10.0 ** (-k))
            v = fun(x)
            if (v > 0) == want_positive:
                return x, v
        return None, None

    a, fa = (lo, fun(lo)) if pole_lo is None else edge(pole_lo, +1, False)
    b, fb = (hi, fun(hi)) if pole_hi is None else edge(pole_hi, -1, True)
    if a is None:
        return pole_lo  # root is within machine precision of the pole
    if b is None:
        return pole_hi
    if fa > 0 or fb < 0:
        raise RootBracketFailure(f"no sign change of the dispersion function on ({a:.6g}, {b:.6g})")
    return brentq(fun, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def exact_dispersion(sys: DipoleEigensystem, cfg: CollectiveConfig, n_levels: int | None = None,
                     trk_cutoff: float = TRK_CUTOFF) -> PolaritonBranches:
    """All normal modes of the bosonized multi-level problem (photon plus every dipole transition).

    Roots of F(omega^2) are found by bracketing: one in (0, omega_1^2), one between each
    pair of consecutive coupled poles and one above the last. ``roots`` holds all of
    them (as frequencies); the branches are the two lowest.
    """
    if (n_levels or sys.n_levels) < 10:
        raise ValueError("exact dispersion needs at least 10 dipole levels")
    idx, wn, xn, kappa_sq = _couplings(sys, cfg, n_levels, trk_cutoff)
    a = cfg.omega_c**2 + cfg.nd2
    wn2 = wn**2
    if cfg.g0_collective == 0:
        s = np.sort(np.r_[cfg.omega_c**2, wn2])
    else:
        fun = lambda x: float(dispersion_function(x, a, wn2, kappa_sq))
        roots = [_root_in(fun, 0.0, None, None, wn2[0])]
        for lo, hi in zip(wn2[:-1], wn2[1:]):
            roots.append(_root_in(fun, None, None, lo, hi))
        hi = max(a, wn2[-1]) + np.sum(kappa_sq) / max(wn2[-1], 1e-300) + a + 1.0
        grow = 0
        while fun(hi) <= 0:
            hi *= 2
            grow += 1
            if grow > 200:
                raise RootBracketFailure("no root above the last pole")
        roots.append(_root_in(fun, None, hi, wn2[-1], None))
        s = np.array(roots)
        if s[0] <= 0:
            raise UnstableBranch(f"lowest exact root omega^2 = {s[0]:.3g} <= 0")
    freqs = np.sqrt(np.maximum(s, 0))
    return PolaritonBranches(float(s[0]), float(s[1]), EXACT, roots=freqs)


def dispersion_residuals(sys: DipoleEigensystem, cfg: CollectiveConfig, roots: np.ndarray,
                         n_levels: int | None = None, trk_cutoff: float = TRK_CUTOFF) -> np.ndarray:
    """Relative Newton step |F/F'|/s at each root (distance to the true root, relative)."""
    idx, wn, xn, kappa_sq = _couplings(sys, cfg, n_levels, trk_cutoff)
    a = cfg.omega_c**2 + cfg.nd2
    s = np.asarray(roots, dtype=float) ** 2
    wn2 = wn**2
    out = np.empty_like(s)
    for i, si in enumerate(s):
        diff = wn2 - si
        live = kappa_sq > 0
        if np.any(np.abs(diff) <= 1e-12 * si):
            out[i] = 0.0
            continue
        fval = si - a + np.sum(kappa_sq[live] / diff[live])
        dval = 1 + np.sum(kappa_sq[live] / diff[live] ** 2)
        out[i] = abs(fval / dval) / si
    return out


def zero_mode_numerator(sys: DipoleEigensystem, cfg: CollectiveConfig, n_levels: int | None = None,
                        trk_cutoff: float = TRK_CUTOFF) -> float:
    """omega_c^2 + N D^2 (1 - 2 sum_n x_n0^2 omega_n0); equals omega_c^2 when TRK is saturated."""
    idx, wn, xn, _ = _couplings(sys, cfg, n_levels, trk_cutoff)
    return cfg.omega_c**2 + cfg.nd2 * (1 - 2 * np.sum(xn**2 * wn))


def hp_normal_modes(sys: DipoleEigensystem, cfg: CollectiveConfig, gauge: str, n_levels: int | None = None,
                    trk_cutoff: float = TRK_CUTOFF) -> np.ndarray:
    """Normal-mode frequencies of the bosonized quadratic Hamiltonian written in either gauge.

    Phase-space ordering is (q_photon, q_1..q_K, p_photon, p_1..p_K) with q = (b + b^dag)/sqrt 2.
    """
    idx, wn, xn, _ = _couplings(sys, cfg, n_levels, trk_cutoff)
    k = idx.size
    nd2, wc = cfg.nd2, cfg.omega_c
    m = np.zeros((2 * (k + 1), 2 * (k + 1)))
    q = np.arange(1, k + 1)
    p = q + k + 1
    pa = k + 1
    m[q, q] = wn
    m[p, p] = wn
    if gauge == "dipole":
        m[0, 0] = wc
        m[pa, pa] = wc
        m[np.ix_(q, q)] += 2 * nd2 * np.outer(xn, xn)
        m[pa, q] = m[q, pa] = math.sqrt(2 * nd2 * wc) * xn
    elif gauge == "coulomb":
        m[0, 0] = wc + nd2 / wc
        m[pa, pa] = wc
        m[0, p] = m[p, 0] = -math.sqrt(2 * nd2 / wc) * wn * xn
    else:
        raise ValueError(f"unknown gauge {gauge!r}")
    return symplectic_frequencies(m)
