"""Truncated bosonic operators and normal modes of quadratic boson Hamiltonians."""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla


def annihilation(n_fock: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_fock, dtype=float)), 1)


def number(n_fock: int) -> np.ndarray:
    return np.diag(np.arange(n_fock, dtype=float))


def quadrature(n_fock: int) -> np.ndarray:
    """a + a^dagger."""
    a = annihilation(n_fock)
    return a + a.T


def symplectic_frequencies(m: np.ndarray) -> np.ndarray:
    """Normal-mode frequencies of H = z^T M z / 2 with z = (q_1..q_n, p_1..p_n).

    M must be real symmetric positive definite. Uses M = L L^T; the frequencies
    are the positive eigenvalues of the Hermitian matrix i L^T J L.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0] // 2
    chol = sla.cholesky(0.5 * (m + m.T), lower=True)
    j = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    ev = sla.eigvalsh(1j * (chol.T @ j @ chol))
    return np.sort(ev[ev > 0])
