"""Eigenstructure of system matrices, Khatri-Rao products, kernels, inertia.

The modal basis groups eigenvalues into clusters: one group per distinct real
eigenvalue and one per complex-conjugate pair.  Complex pairs contribute
interleaved ``(Re v, Im v)`` column pairs, so the basis is always real and
block-diagonalizes the matrix with 2x2 rotation-scaling blocks on complex
groups.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .exceptions import Defective, DimensionError, NotSymmetricMatrix
from .statespace import SystemMatrix

#: Relative eigenvalue-clustering gap (times the spectral radius).
CLUSTER_TOL = 1e-7

#: Relative singular-value cutoff for rank/kernel decisions.
RANK_TOL = 1e-10


@dataclass
class EigStructure:
    """Clustered eigenvalues and the real modal basis of a system matrix.

    ``lambdas[j]`` is the group representative (a float for real groups, a
    complex number with positive imaginary part for conjugate pairs) and
    ``t[j]`` the number of basis columns it owns: the multiplicity for real
    groups, twice that for complex pairs.
    """

    lambdas: list
    t: list[int]
    V: NDArray[np.float64]
    n: int
    m: int
    diagonalizable: bool = True

    @property
    def W(self) -> np.ndarray:
        """Top ``n`` rows of the modal basis."""
        return self.V[: self.n]

    @property
    def Z(self) -> np.ndarray:
        """Bottom ``m`` rows of the modal basis."""
        return self.V[self.n :]

    @property
    def col_offsets(self) -> list[int]:
        """Start column of each eigenvalue group."""
        offsets = [0]
        for tj in self.t[:-1]:
            offsets.append(offsets[-1] + tj)
        return offsets

    @property
    def is_real_distinct(self) -> bool:
        """True when all eigenvalues are real and simple."""
        return all(tj == 1 for tj in self.t)


def _normalize_real(v: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    v = v / np.linalg.norm(v)
    idx = np.flatnonzero(np.abs(v) > tol)
    if idx.size and v[idx[0]] < 0:
        v = -v
    return v


def _rotate_unit(v: np.ndarray) -> np.ndarray:
    """Rotate a complex vector so its largest entry is real positive, unit norm."""
    k = int(np.argmax(np.abs(v)))
    phase = v[k] / abs(v[k])
    v = v * np.conj(phase)
    return v / np.linalg.norm(v)


def eig_structure(P: SystemMatrix, tol: float = CLUSTER_TOL) -> EigStructure:
    """Cluster the spectrum of ``P`` and assemble the real modal basis.

    Eigenvalues closer than ``tol`` times the spectral radius are merged into
    one group; a value whose imaginary part falls below the same gap counts
    as real.  Groups are sorted by (real part, imaginary part) of their
    representative.  Column normalization is deterministic: complex
    eigenvectors are rotated so their largest entry is real positive, real
    eigenvectors get a positive leading entry; all columns have unit norm.

    Raises
    ------
    Defective
        If any cluster has fewer independent eigenvectors than its
        multiplicity, or the assembled basis is singular.
    """
    M = P.P
    size = P.size
    w, Vc = np.linalg.eig(M)
    rho = float(np.abs(w).max())
    gap = tol * (rho if rho > 0.0 else 1.0)

    order = np.lexsort((w.imag, w.real))
    w, Vc = w[order], Vc[:, order]
    is_real = np.abs(w.imag) <= gap

    used = np.zeros(size, dtype=bool)
    groups = []  # (sort key, representative, column indices, is_real)
    for i in range(size):
        if used[i]:
            continue
        if is_real[i]:
            idxs = [
                j
                for j in range(size)
                if not used[j] and is_real[j] and abs(w[j].real - w[i].real) <= gap
            ]
            for j in idxs:
                used[j] = True
            rep = float(np.mean(w[idxs].real))
            groups.append(((rep, 0.0), rep, idxs, True))
        else:
            if w[i].imag < 0:
                continue
            idxs = [
                j
                for j in range(size)
                if not used[j] and not is_real[j] and w[j].imag > 0 and abs(w[j] - w[i]) <= gap
            ]
            for j in idxs:
                used[j] = True
                dist = np.abs(w - np.conj(w[j])) + used * (10.0 * rho + 10.0)
                k = int(np.argmin(dist))
                used[k] = True
            rep = complex(np.mean(w[idxs]))
            groups.append(((rep.real, rep.imag), rep, idxs, False))
    groups.sort(key=lambda g: g[0])

    cols: list[np.ndarray] = []
    lambdas: list = []
    t: list[int] = []
    for _, rep, idxs, real_group in groups:
        start = len(cols)
        if real_group:
            for j in idxs:
                cols.append(_normalize_real(_rotate_unit(Vc[:, j]).real))
            tj = len(idxs)
        else:
            for j in idxs:
                v = _rotate_unit(Vc[:, j])
                cols.append(v.real.copy())
                cols.append(v.imag.copy())
            tj = 2 * len(idxs)
        block = np.column_stack(cols[start:])
        sv = np.linalg.svd(block, compute_uv=False)
        if sv[-1] <= 1e-8 * sv[0]:
            raise Defective(
                f"eigenvalue group at {rep} has geometric multiplicity below {tj}"
            )
        lambdas.append(rep)
        t.append(tj)

    V = np.column_stack(cols)
    sv = np.linalg.svd(V, compute_uv=False)
    if sv[-1] <= tol * sv[0]:
        raise Defective("modal basis is numerically singular")
    return EigStructure(lambdas=lambdas, t=t, V=V, n=P.n, m=P.m)


def khatri_rao(Z: np.ndarray, W: np.ndarray, t) -> np.ndarray:
    """Column-block Khatri-Rao product ``[Z_1 (x) W_1, ..., Z_r (x) W_r]``.

    ``Z`` and ``W`` are partitioned column-wise by the group sizes ``t``.
    The block ``Z_j (x) W_j`` maps ``vec(X_j)`` (column-major) to
    ``vec(W_j X_j Z_j^T)``, so the product has ``rows(Z) * rows(W)`` rows and
    ``sum(t_j^2)`` columns.
    """
    Z = np.asarray(Z, dtype=float)
    W = np.asarray(W, dtype=float)
    t = [int(tj) for tj in t]
    if Z.ndim != 2 or W.ndim != 2:
        raise DimensionError("Z and W must be matrices")
    if Z.shape[1] != W.shape[1] or sum(t) != Z.shape[1]:
        raise DimensionError(
            f"column partition {t} does not match Z {Z.shape} / W {W.shape}"
        )
    if any(tj < 1 for tj in t):
        raise DimensionError("group sizes must be positive")
    blocks = []
    pos = 0
    for tj in t:
        blocks.append(np.kron(Z[:, pos : pos + tj], W[:, pos : pos + tj]))
        pos += tj
    return np.hstack(blocks)


def matrix_rank(M: np.ndarray, tol: float = RANK_TOL) -> int:
    """Numerical rank with cutoff ``tol * sigma_max * max(dims)``."""
    sv = np.linalg.svd(M, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0] * max(M.shape)))


def kernel(M: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the numerical kernel of ``M``.

    Right singular vectors whose singular value falls at or below
    ``tol * sigma_max * max(dims)`` form the basis (columns).  Each basis
    vector is sign-normalized so its largest-magnitude entry is positive.
    A full-rank matrix yields a ``(cols, 0)`` array.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    _, sv, vt = np.linalg.svd(M)
    cols = M.shape[1]
    if sv.size == 0 or sv[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(sv > tol * sv[0] * max(M.shape)))
    basis = vt[rank:].T.copy()
    for k in range(basis.shape[1]):
        j = int(np.argmax(np.abs(basis[:, k])))
        if basis[j, k] < 0:
            basis[:, k] = -basis[:, k]
    return basis if basis.size else np.zeros((cols, 0))


@dataclass
class Inertia:
    """Counts of positive, negative, and zero eigenvalues of a symmetric matrix."""

    n_plus: int
    n_minus: int
    n_zero: int

    @property
    def i(self) -> int:
        """Signature: ``n_plus - n_minus``."""
        return self.n_plus - self.n_minus

    @property
    def dimension(self) -> int:
        return self.n_plus + self.n_minus + self.n_zero


def inertia(S: np.ndarray, tol: float = 1e-9) -> Inertia:
    """Eigenvalue sign counts of a symmetric matrix.

    Eigenvalues within ``tol`` times the spectral radius of zero count as
    zero.

    Raises
    ------
    NotSymmetricMatrix
        If ``max|S - S^T|`` exceeds ``tol * max|S|``.
    """
    S = np.atleast_2d(np.asarray(S, dtype=float))
    scale = np.abs(S).max()
    if np.abs(S - S.T).max() > tol * max(scale, 1e-300):
        raise NotSymmetricMatrix("matrix is not symmetric within tolerance")
    vals = np.linalg.eigvalsh(0.5 * (S + S.T))
    rho = np.abs(vals).max()
    cut = tol * rho
    return Inertia(
        n_plus=int(np.sum(vals > cut)),
        n_minus=int(np.sum(vals < -cut)),
        n_zero=int(np.sum(np.abs(vals) <= cut)),
    )
