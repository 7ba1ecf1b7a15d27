"""Symmetrizability certificates, decision procedures, and gain synthesis.

A system with matrix ``P = [[A, B], [C, D]]`` admits a symmetrizing
input/output gain exactly when there is a nonsingular symmetric ``Q`` with
``P Q = Q P^T`` and vanishing upper-right ``n x m`` block.  For a
diagonalizable ``P`` all such ``Q`` are ``V X V^T`` with ``X`` block-diagonal
along the eigenvalue groups of the modal basis ``V``, which turns the search
into a kernel computation for the Khatri-Rao operator plus per-group linear
constraints.  With distinct real eigenvalues ``X = diag(x)`` and sign
patterns of ``x`` enumerate every achievable signature via small LPs.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.linalg import block_diag
from scipy.optimize import linprog

from .exceptions import (
    Defective,
    DimensionError,
    Infeasible,
    MinimalityError,
    NotSymmetrizable,
    PatternLimitExceeded,
    SingularBlock,
    SolverFailure,
    WrongStructure,
)
from .spectral import RANK_TOL, EigStructure, eig_structure, inertia, kernel, khatri_rao, matrix_rank
from .statespace import StateSpace, SystemMatrix, apply_io_transform, is_minimal, system_matrix
from .symmetry import SignatureMatrix

#: Relative smallest-singular-value bound below which a certificate matrix
#: counts as singular.
Q_SINGULAR_TOL = 1e-8

#: Smallest-eigenvalue margin demanded from the positive definite search.
SDP_MARGIN = 1e-6

#: Largest ``n + m`` for which sign patterns are enumerated exhaustively.
PATTERN_CAP = 12


class NecessaryVerdict(Enum):
    """Outcome of the Khatri-Rao rank test (a necessary condition only)."""

    MAY_BE_SYMMETRIZABLE = "may-be-symmetrizable"
    NOT_SYMMETRIZABLE = "not-symmetrizable"


# ---------------------------------------------------------------------------
# Certificates


@dataclass
class SymmetrizabilityCertificate:
    """A nonsingular symmetric witness ``Q`` together with derived gains.

    ``Q`` has a vanishing off-diagonal block and commutes with the system
    matrix in the sense ``P Q = Q P^T``.  The state transform ``T`` and gain
    ``K`` factor its diagonal blocks as ``Q11 = -T S_i T^T`` and
    ``Q22 = K S_e K^T``; ``signature`` is the inertia signature of ``Q``.
    ``x`` holds the coordinates of ``Q`` in the modal-basis parameterization
    when the system matrix is diagonalizable (for distinct real eigenvalues
    it is the kernel vector of the Khatri-Rao operator).

    ``residuals`` stores the absolute defect of the four defining identities:
    ``commute`` for ``P Q - Q P^T``, ``offdiag`` for the ``Q12`` block, and
    ``q13``/``q14`` for the two gain factorizations.
    """

    Q: np.ndarray
    T: np.ndarray
    K: np.ndarray
    sigma_i: SignatureMatrix
    sigma_e: SignatureMatrix
    signature: int
    x: Optional[np.ndarray]
    residuals: dict[str, float]

    @property
    def n(self) -> int:
        return self.T.shape[0]

    @property
    def m(self) -> int:
        return self.K.shape[0]

    @property
    def sigma(self) -> SignatureMatrix:
        """Full system signature ``diag(-S_i, S_e)``."""
        return SignatureMatrix(np.concatenate([-self.sigma_i.diag, self.sigma_e.diag]))


def certificate_to_json(cert: SymmetrizabilityCertificate) -> str:
    """Serialize a certificate to its JSON interchange form."""
    doc = {
        "Q": cert.Q.tolist(),
        "T": cert.T.tolist(),
        "K": cert.K.tolist(),
        "sigma_i": [int(s) for s in cert.sigma_i.diag],
        "sigma_e": [int(s) for s in cert.sigma_e.diag],
        "signature": cert.signature,
        "x": None if cert.x is None else list(map(float, cert.x)),
        "residuals": {k: float(v) for k, v in sorted(cert.residuals.items())},
    }
    return json.dumps(doc)


def certificate_from_json(text: str) -> SymmetrizabilityCertificate:
    doc = json.loads(text)
    x = doc.get("x")
    return SymmetrizabilityCertificate(
        Q=np.array(doc["Q"], dtype=float),
        T=np.array(doc["T"], dtype=float),
        K=np.array(doc["K"], dtype=float),
        sigma_i=SignatureMatrix(np.array(doc["sigma_i"], dtype=float)),
        sigma_e=SignatureMatrix(np.array(doc["sigma_e"], dtype=float)),
        signature=int(doc["signature"]),
        x=None if x is None else np.array(x, dtype=float),
        residuals={k: float(v) for k, v in doc["residuals"].items()},
    )


def certificate_relative_residuals(
    cert: SymmetrizabilityCertificate, P: SystemMatrix
) -> dict[str, float]:
    """Scale the stored absolute residuals by the natural magnitudes."""
    q_scale = max(np.abs(cert.Q).max(), 1e-300)
    p_scale = max(np.abs(P.P).max(), 1e-300)
    n = P.n
    q11 = max(np.abs(cert.Q[:n, :n]).max(), 1e-300)
    q22 = max(np.abs(cert.Q[n:, n:]).max(), 1e-300)
    return {
        "commute": cert.residuals["commute"] / (p_scale * q_scale),
        "offdiag": cert.residuals["offdiag"] / q_scale,
        "q13": cert.residuals["q13"] / q11,
        "q14": cert.residuals["q14"] / q22,
    }


def _residuals(P: SystemMatrix, Q, T, K, sigma_i, sigma_e) -> dict[str, float]:
    n = P.n
    return {
        "commute": float(np.abs(P.P @ Q - Q @ P.P.T).max()),
        "offdiag": float(np.abs(Q[:n, n:]).max()),
        "q13": float(np.abs(Q[:n, :n] + T @ sigma_i.matrix @ T.T).max()),
        "q14": float(np.abs(Q[n:, n:] - K @ sigma_e.matrix @ K.T).max()),
    }


# ---------------------------------------------------------------------------
# Gain synthesis from a certificate matrix


def _eigh_descending(M: np.ndarray):
    vals, vecs = np.linalg.eigh(0.5 * (M + M.T))
    order = np.argsort(-vals, kind="stable")  # ties keep their eigh order
    vals, vecs = vals[order], vecs[:, order].copy()
    for k in range(vecs.shape[1]):
        j = int(np.argmax(np.abs(vecs[:, k])))
        if vecs[j, k] < 0:
            vecs[:, k] = -vecs[:, k]
    return vals, vecs


def gains_from_Q(Q: np.ndarray, n: int, m: int, tol: float = Q_SINGULAR_TOL):
    """Factor certificate blocks into gains and signature matrices.

    Eigendecomposes ``Q11 = F1 D1 F1^T`` and ``Q22 = F2 D2 F2^T``
    (eigenvalues descending, eigenvector signs normalized) and returns::

        T = F1 |D1|^(1/2),  K = F2 |D2|^(1/2),
        S_i = -sgn(D1),     S_e = sgn(D2)

    so that ``Q11 = -T S_i T^T`` and ``Q22 = K S_e K^T``.

    Raises
    ------
    SingularBlock
        If either diagonal block has an eigenvalue below ``tol`` times its
        largest one in magnitude.
    """
    Q = np.asarray(Q, dtype=float)
    if Q.shape != (n + m, n + m):
        raise DimensionError(f"Q must be {(n + m, n + m)}, got {Q.shape}")
    out = []
    for name, block in (("Q11", Q[:n, :n]), ("Q22", Q[n:, n:])):
        vals, vecs = _eigh_descending(block)
        if np.abs(vals).min() <= tol * np.abs(vals).max():
            raise SingularBlock(f"{name} is numerically singular")
        out.append((vals, vecs))
    (d1, f1), (d2, f2) = out
    T = f1 @ np.diag(np.sqrt(np.abs(d1)))
    K = f2 @ np.diag(np.sqrt(np.abs(d2)))
    sigma_i = SignatureMatrix(-np.sign(d1))
    sigma_e = SignatureMatrix(np.sign(d2))
    return T, K, sigma_i, sigma_e


def _build_certificate(
    P: SystemMatrix, Q: np.ndarray, x: Optional[np.ndarray], signature: Optional[int] = None
) -> SymmetrizabilityCertificate:
    Q = 0.5 * (Q + Q.T)
    sv = np.linalg.svd(Q, compute_uv=False)
    if sv[-1] <= Q_SINGULAR_TOL * sv[0]:
        raise NotSymmetrizable("witness matrix is numerically singular")
    T, K, sigma_i, sigma_e = gains_from_Q(Q, P.n, P.m)
    if signature is None:
        signature = inertia(Q).i
    return SymmetrizabilityCertificate(
        Q=Q,
        T=T,
        K=K,
        sigma_i=sigma_i,
        sigma_e=sigma_e,
        signature=int(signature),
        x=None if x is None else np.asarray(x, dtype=float),
        residuals=_residuals(P, Q, T, K, sigma_i, sigma_e),
    )


# ---------------------------------------------------------------------------
# Solution subspace of the certificate equations


@dataclass
class SolutionSubspace:
    """Basis of all symmetric ``Q`` with ``P Q = Q P^T`` and ``Q12 = 0``.

    ``basis`` holds unit-Frobenius symmetric matrices.  When the system
    matrix is diagonalizable, ``coords[:, k]`` are the coordinates of
    ``basis[k]`` in the block-diagonal parameterization ``Q = V X V^T``
    (one ``t_j x t_j`` block per eigenvalue group, column-major
    vectorization), and ``eig`` is the underlying eigenstructure.
    """

    basis: list[np.ndarray]
    coords: Optional[np.ndarray]
    eig: Optional[EigStructure]
    n: int
    m: int

    @property
    def dim(self) -> int:
        return len(self.basis)


def _group_blocks(t: list[int]) -> list[slice]:
    slices, pos = [], 0
    for tj in t:
        slices.append(slice(pos, pos + tj))
        pos += tj
    return slices


def _coords_to_Q(es: EigStructure, x: np.ndarray) -> np.ndarray:
    size = es.n + es.m
    X = np.zeros((size, size))
    off = 0
    for sl, tj in zip(_group_blocks(es.t), es.t):
        X[sl, sl] = x[off : off + tj * tj].reshape(tj, tj, order="F")
        off += tj * tj
    Q = es.V @ X @ es.V.T
    return 0.5 * (Q + Q.T)


def _Q_to_coords(es: EigStructure, Q: np.ndarray) -> np.ndarray:
    X = np.linalg.solve(es.V, np.linalg.solve(es.V, Q.T).T)
    parts = [X[sl, sl].reshape(-1, order="F") for sl in _group_blocks(es.t)]
    return np.concatenate(parts)


def _block_constraint_operator(es: EigStructure, P: SystemMatrix) -> np.ndarray:
    """Stacked linear operator whose kernel parameterizes all certificates.

    Acts on the block coordinates ``x = (vec X_1, ..., vec X_r)``; rows
    enforce ``W X Z^T = 0``, symmetry of each block, and commutation of each
    block with its eigenvalue-group block of the block-diagonalized system
    matrix (nontrivial only for complex-pair groups).
    """
    J = np.linalg.solve(es.V, P.P @ es.V)
    kr = khatri_rao(es.Z, es.W, es.t)
    per_group = []
    for sl, tj in zip(_group_blocks(es.t), es.t):
        Jj = J[sl, sl]
        eye = np.eye(tj)
        commute = np.kron(eye, Jj) - np.kron(Jj, eye)
        perm = np.zeros((tj * tj, tj * tj))
        for a in range(tj):
            for b in range(tj):
                perm[b * tj + a, a * tj + b] = 1.0
        sym = np.eye(tj * tj) - perm
        per_group.append(np.vstack([commute, sym]))
    return np.vstack([kr, block_diag(*per_group)])


def solution_subspace(P: SystemMatrix, tol: float = RANK_TOL) -> SolutionSubspace:
    """Compute the full certificate subspace of a diagonalizable system matrix.

    Raises
    ------
    Defective
        Propagated from the eigenstructure computation.
    """
    es = eig_structure(P)
    coords = kernel(_block_constraint_operator(es, P), tol)
    basis, kept = [], []
    for k in range(coords.shape[1]):
        Q = _coords_to_Q(es, coords[:, k])
        norm = np.linalg.norm(Q)
        if norm == 0.0:
            continue
        basis.append(Q / norm)
        kept.append(coords[:, k] / norm)
    coords = np.column_stack(kept) if kept else np.zeros((coords.shape[0], 0))
    return SolutionSubspace(basis=basis, coords=coords, eig=es, n=P.n, m=P.m)


def _subspace_direct(P: SystemMatrix, tol: float = RANK_TOL) -> list[np.ndarray]:
    """Certificate-subspace basis without any diagonalizability assumption.

    Kernel of the vectorized map ``Q -> (P Q - Q P^T, Q - Q^T, Q12)`` over
    all ``(n+m)^2`` coordinates.
    """
    M = P.P
    size = P.size
    eye = np.eye(size)
    commute = np.kron(eye, M) - np.kron(M, eye)  # vec(P Q - Q P^T), column-major
    perm = np.zeros((size * size, size * size))
    for a in range(size):
        for b in range(size):
            perm[b * size + a, a * size + b] = 1.0
    sym = np.eye(size * size) - perm
    pick = np.zeros((P.n * P.m, size * size))
    row = 0
    for j in range(P.n, size):  # column-major vec index of entry (i, j)
        for i in range(P.n):
            pick[row, j * size + i] = 1.0
            row += 1
    operator = np.vstack([commute, sym, pick])
    null = kernel(operator, tol)
    basis = []
    for k in range(null.shape[1]):
        Q = null[:, k].reshape(size, size, order="F")
        Q = 0.5 * (Q + Q.T)
        norm = np.linalg.norm(Q)
        if norm > 1e-12:
            basis.append(Q / norm)
    return basis


# ---------------------------------------------------------------------------
# Rank test (necessary condition)


def necessary_test(P: SystemMatrix, tol: float = RANK_TOL) -> NecessaryVerdict:
    """Khatri-Rao rank test: full column rank rules symmetrizability out.

    Returns ``NOT_SYMMETRIZABLE`` when ``rank(Z * W)`` equals the number of
    block parameters ``sum(t_j^2)``, and ``MAY_BE_SYMMETRIZABLE`` otherwise.
    Note the test can only ever reject when the operator has at least as
    many rows as columns, i.e. ``n * m >= sum(t_j^2)``.
    """
    es = eig_structure(P)
    kr = khatri_rao(es.Z, es.W, es.t)
    if matrix_rank(kr, tol) == kr.shape[1]:
        return NecessaryVerdict.NOT_SYMMETRIZABLE
    return NecessaryVerdict.MAY_BE_SYMMETRIZABLE


# ---------------------------------------------------------------------------
# Distinct real eigenvalues: sign-pattern LPs


def _require_real_distinct(P: SystemMatrix, tol: float) -> tuple[EigStructure, np.ndarray]:
    es = eig_structure(P)
    if not es.is_real_distinct:
        raise WrongStructure(
            "operation requires n+m distinct real eigenvalues of the system matrix"
        )
    basis = kernel(khatri_rao(es.Z, es.W, es.t), tol)
    return es, basis


def _lp_sign_pattern(kernel_basis: np.ndarray, e: np.ndarray) -> Optional[np.ndarray]:
    """Feasibility of ``x in span(kernel_basis)`` with ``e_j x_j >= 1``.

    The strict positivity ``e_j x_j > 0`` of the underlying problem is scaled
    to ``>= 1``, which is equivalent on a subspace.  Returns a feasible ``x``
    or ``None``.
    """
    d = kernel_basis.shape[1]
    if d == 0:
        return None
    res = linprog(
        np.zeros(d),
        A_ub=-(e[:, None] * kernel_basis),
        b_ub=-np.ones(kernel_basis.shape[0]),
        bounds=[(None, None)] * d,
        method="highs",
    )
    if res.status == 0:
        return kernel_basis @ res.x
    if res.status == 2:
        return None
    raise SolverFailure(f"LP solver returned status {res.status}: {res.message}")


def _patterns_with_sum(size: int, total: int):
    """All +/-1 vectors of given length and sum, in deterministic order."""
    k_minus = (size - total) // 2
    for negatives in itertools.combinations(range(size), k_minus):
        e = np.ones(size)
        e[list(negatives)] = -1.0
        yield e


def certificate_from_kernel_vector(
    P: SystemMatrix, x, tol: float = RANK_TOL
) -> SymmetrizabilityCertificate:
    """Build a certificate from explicit kernel coordinates.

    For a system matrix with distinct real eigenvalues, any vector ``x`` with
    all entries nonzero in the kernel of the Khatri-Rao operator yields the
    witness ``Q = V diag(x) V^T``.  The vector is used as given; its residual
    against the kernel shows up in the certificate residuals.
    """
    es, _ = _require_real_distinct(P, tol)
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != P.size:
        raise DimensionError(f"x must have length {P.size}")
    if np.abs(x).min() <= 1e-12 * np.abs(x).max():
        raise NotSymmetrizable("kernel vector has (numerically) zero entries")
    Q = es.V @ np.diag(x) @ es.V.T
    return _build_certificate(P, Q, x, signature=int(np.sign(x).sum()))


def decide_distinct_real(
    P: SystemMatrix,
    target_signature: Optional[int] = None,
    tol: float = RANK_TOL,
    seed: int = 0,
    cap: int = PATTERN_CAP,
) -> SymmetrizabilityCertificate:
    """Exact symmetrizability decision for distinct real eigenvalues.

    Without a target signature, a seeded random kernel combination is tried
    first (it has all-nonzero entries almost surely); exhaustive sign-pattern
    enumeration (up to global sign) is the fallback and the definitive
    decision.  With ``target_signature``, the LP is solved for every sign
    pattern summing to the target until one is feasible.

    Raises
    ------
    WrongStructure
        If the spectrum is not real and simple.
    NotSymmetrizable
        If no pattern is feasible (or the kernel is trivial).
    PatternLimitExceeded
        If enumeration without a target would exceed ``cap``.
    """
    es, null = _require_real_distinct(P, tol)
    size = P.size
    if null.shape[1] == 0:
        raise NotSymmetrizable("the certificate equations only have singular solutions")

    if target_signature is None:
        rng = np.random.default_rng(seed)
        for _ in range(8):
            x = null @ rng.standard_normal(null.shape[1])
            if np.abs(x).min() > 1e-8 * np.abs(x).max():
                return _build_certificate(P, es.V @ np.diag(x) @ es.V.T, x,
                                          signature=int(np.sign(x).sum()))
        if size > cap:
            raise PatternLimitExceeded(
                f"n+m={size} exceeds the enumeration cap {cap}; pass a target signature"
            )
        for bits in itertools.product((1.0, -1.0), repeat=size - 1):
            e = np.array((1.0,) + bits)
            x = _lp_sign_pattern(null, e)
            if x is not None:
                return _build_certificate(P, es.V @ np.diag(x) @ es.V.T, x,
                                          signature=int(np.sign(x).sum()))
        raise NotSymmetrizable("no sign pattern admits a nonsingular witness")

    target = int(target_signature)
    if abs(target) > size or (size - target) % 2 != 0:
        raise NotSymmetrizable(
            f"signature {target} is incompatible with n+m={size} (parity/bound)"
        )
    for e in _patterns_with_sum(size, target):
        x = _lp_sign_pattern(null, e)
        if x is not None:
            return _build_certificate(P, es.V @ np.diag(x) @ es.V.T, x, signature=target)
    raise NotSymmetrizable(f"signature {target} is not achievable")


def achievable_signatures(P: SystemMatrix, cap: int = PATTERN_CAP, tol: float = RANK_TOL) -> set[int]:
    """All signatures realizable by nonsingular witnesses.

    Enumerates sign patterns with the first entry fixed to +1 (witnesses come
    in ``Q, -Q`` pairs) and collects ``sum(e)`` for every feasible pattern
    together with its negative.

    Raises
    ------
    WrongStructure, PatternLimitExceeded
    """
    if P.size > cap:
        raise PatternLimitExceeded(f"n+m={P.size} exceeds the enumeration cap {cap}")
    _, null = _require_real_distinct(P, tol)
    found: set[int] = set()
    if null.shape[1] == 0:
        return found
    for bits in itertools.product((1.0, -1.0), repeat=P.size - 1):
        e = np.array((1.0,) + bits)
        total = int(e.sum())
        if total in found:
            continue
        if _lp_sign_pattern(null, e) is not None:
            found.add(total)
            found.add(-total)
    return found


# ---------------------------------------------------------------------------
# Complete symmetrizability (positive definite witness)


def complete_symmetrizability(
    P: SystemMatrix, tol: float = RANK_TOL, margin: float = SDP_MARGIN
) -> np.ndarray:
    """Find a positive definite certificate ``Q``, if one exists.

    Fast path: with distinct real eigenvalues, ``Q > 0`` reduces to the
    all-ones sign pattern LP.  Otherwise the subspace basis is computed (via
    the modal parameterization, or directly from the vectorized equations
    when the matrix is defective) and a small semidefinite feasibility
    problem maximizes the smallest eigenvalue of a basis combination with
    bounded coefficients; combinations reaching ``margin`` are accepted.

    Raises
    ------
    Infeasible
        When no positive definite witness exists (up to the margin).
    SolverFailure
        On backend failures.
    """
    es: Optional[EigStructure]
    try:
        es = eig_structure(P)
    except Defective:
        es = None

    if es is not None and es.is_real_distinct:
        null = kernel(khatri_rao(es.Z, es.W, es.t), tol)
        x = _lp_sign_pattern(null, np.ones(P.size))
        if x is None:
            raise Infeasible("no elementwise-positive kernel vector exists")
        Q = es.V @ np.diag(x) @ es.V.T
        Q = 0.5 * (Q + Q.T)
        if np.linalg.eigvalsh(Q).min() <= 0.0:
            raise SolverFailure("positive kernel vector produced a non-definite witness")
        return Q

    if es is not None:
        basis = solution_subspace(P, tol).basis
    else:
        basis = _subspace_direct(P, tol)
    if not basis:
        raise Infeasible("the certificate equations have no nonzero solutions")

    if len(basis) == 1:
        for Q in (basis[0], -basis[0]):
            if np.linalg.eigvalsh(Q).min() >= margin:
                return Q
        raise Infeasible("the one-dimensional witness space contains no definite element")

    import cvxpy as cp

    size = P.size
    coeff = cp.Variable(len(basis))
    floor = cp.Variable()
    combo = sum(coeff[k] * basis[k] for k in range(len(basis)))
    problem = cp.Problem(
        cp.Maximize(floor),
        [combo - floor * np.eye(size) >> 0, cp.norm_inf(coeff) <= 1, floor <= 1],
    )
    try:
        problem.solve(solver=cp.CLARABEL)
    except Exception as exc:  # backend variety: cp.SolverError, arpack errors, ...
        try:
            problem.solve(solver=cp.SCS)
        except Exception:
            raise SolverFailure(f"SDP backend failed: {exc}") from exc
    if problem.status not in ("optimal", "optimal_inaccurate") or floor.value is None:
        raise SolverFailure(f"SDP solver status: {problem.status}")
    if floor.value < margin:
        raise Infeasible(
            f"no positive definite witness with margin {margin:g} (best {floor.value:.2e})"
        )
    Q = sum(float(c) * Qk for c, Qk in zip(coeff.value, basis))
    Q = 0.5 * (Q + Q.T)
    if np.linalg.eigvalsh(Q).min() <= 0.0:
        raise SolverFailure("SDP solution failed the definiteness post-check")
    return Q


# ---------------------------------------------------------------------------
# End-to-end pipeline


def symmetrize(
    ss: StateSpace,
    target_signature: Optional[int] = None,
    complete: bool = False,
    tol: float = RANK_TOL,
    seed: int = 0,
) -> tuple[StateSpace, SymmetrizabilityCertificate]:
    """Transform a system into an internally symmetric one, with certificate.

    Pipeline: assemble the system matrix, find a witness ``Q`` (the positive
    definite search when ``complete`` is set, the sign-pattern decision for
    distinct real eigenvalues, or a random search over the certificate
    subspace otherwise), factor it into gains, and change coordinates.  The
    returned system satisfies the internal symmetry identity with the
    certificate's signature matrix.

    Raises
    ------
    MinimalityError
        The input realization must be minimal.
    NotSymmetrizable, Defective, WrongStructure
        Propagated from the decision procedures; ``WrongStructure`` is raised
        when a target signature is requested for a spectrum that is not real
        and simple.
    """
    if not is_minimal(ss):
        raise MinimalityError("symmetrization requires a minimal realization")
    P = system_matrix(ss)

    if complete:
        Q = complete_symmetrizability(P, tol)
        x = None
        try:
            sub_es = eig_structure(P)
            x = _Q_to_coords(sub_es, Q)
        except Defective:
            pass
        cert = _build_certificate(P, Q, x)
    else:
        es = eig_structure(P)
        if es.is_real_distinct:
            cert = decide_distinct_real(P, target_signature, tol, seed=seed)
        elif target_signature is not None:
            raise WrongStructure(
                "target signatures require distinct real eigenvalues; "
                "use complete=True for the identity signature"
            )
        else:
            sub = solution_subspace(P, tol)
            if sub.dim == 0:
                raise NotSymmetrizable("the certificate equations only have the zero solution")
            rng = np.random.default_rng(seed)
            best_ratio, best_x = -1.0, None
            for _ in range(32):
                c = rng.standard_normal(sub.dim)
                x = sub.coords @ c
                Q = _coords_to_Q(sub.eig, x)
                sv = np.linalg.svd(Q, compute_uv=False)
                ratio = sv[-1] / sv[0] if sv[0] > 0 else 0.0
                if ratio > best_ratio:
                    best_ratio, best_x = ratio, x
            if best_ratio <= Q_SINGULAR_TOL:
                raise NotSymmetrizable("every witness in the solution subspace is singular")
            cert = _build_certificate(P, _coords_to_Q(sub.eig, best_x), best_x)

    transformed = apply_io_transform(ss, cert.K, cert.T)
    return transformed, cert
