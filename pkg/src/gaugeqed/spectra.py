"""Lowest eigenpairs of (possibly sparse) Hermitian model matrices."""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

DENSE_LIMIT = 3500


def lowest_eigh(h, k: int, *, vectors: bool = False, sectors: list | None = None, dense_limit: int = DENSE_LIMIT):
    """Lowest ``k`` eigenvalues (and optionally eigenvectors) of Hermitian ``h``.

    Matrices up to ``dense_limit`` are diagonalized densely. Larger ones use
    ARPACK, which can miss states of a symmetry sector it starts orthogonal to;
    pass ``sectors`` (a list of isometries with orthonormal columns spanning the
    whole space and commuting with ``h``) to solve each block separately.
    """
    dim = h.shape[0]
    k = min(k, dim)
    if dim <= dense_limit:
        hd = h.toarray() if sp.issparse(h) else np.asarray(h)
        if vectors:
            return sla.eigh(hd, subset_by_index=[0, k - 1])
        return sla.eigvalsh(hd, subset_by_index=[0, k - 1])
    blocks = sectors if sectors is not None else [None]
    vals, vecs = [], []
    for iso in blocks:
        hb = h if iso is None else (iso.conj().T @ h @ iso)
        kb = min(k, hb.shape[0] - 2)
        if hb.shape[0] <= dense_limit:
            hbd = hb.toarray() if sp.issparse(hb) else np.asarray(hb)
            e, v = sla.eigh(hbd, subset_by_index=[0, min(k, hb.shape[0]) - 1])
        else:
            e, v = spla.eigsh(sp.csr_matrix(hb), k=kb, which="SA", tol=1e-12)
        vals.append(e)
        vecs.append(v if iso is None else iso @ v)
    e = np.concatenate(vals)
    order = np.argsort(e)[:k]
    if vectors:
        return e[order], np.concatenate(vecs, axis=1)[:, order]
    return e[order]
