"""Relaxation-type verification and closed-form optimal output feedback.

For systems that admit a positive definite symmetrizability certificate and
have the spectra of ``A`` and ``-D`` in the closed left half plane, the
static output feedback ``u = -1/alpha * (D - C A^{-1} B) y`` minimizes the
worst-case quadratic cost with output weight ``R = Q22^{-1}`` and disturbance
weight ``S = Q11^{-1}``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray

from .exceptions import (
    IllPosedLoop,
    Infeasible,
    NotPositiveDefinite,
    PreconditionFailed,
    SingularA,
    UnstableLoopWarning,
)
from .statespace import StateSpace, system_matrix
from .symmetrizability import complete_symmetrizability

#: Default relative tolerance for the relaxation-structure checks.
RELAXATION_TOL = 1e-8

#: Relative bound on the largest closed-loop eigenvalue real part.
HURWITZ_TOL = 1e-9


@dataclass
class ControllerResult:
    """Static output-feedback gain and the weights it is optimal for."""

    gain: NDArray[np.float64]
    alpha: float
    R: NDArray[np.float64]
    S: NDArray[np.float64]

    def __post_init__(self) -> None:
        self.gain = np.asarray(self.gain, dtype=float)
        self.R = np.asarray(self.R, dtype=float)
        self.S = np.asarray(self.S, dtype=float)
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        for name, M in (("R", self.R), ("S", self.S)):
            if np.abs(M - M.T).max() > 1e-8 * max(np.abs(M).max(), 1e-300):
                raise NotPositiveDefinite(f"{name} must be symmetric")
            if np.linalg.eigvalsh(M).min() <= 0:
                raise NotPositiveDefinite(f"{name} must be positive definite")


def _sqrtm_spd(M: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(0.5 * (M + M.T))
    if vals.min() <= 0:
        raise NotPositiveDefinite("matrix square root requires positive definiteness")
    return vecs @ np.diag(np.sqrt(vals)) @ vecs.T


def relaxation_check(ss: StateSpace, Q: np.ndarray, tol: float = RELAXATION_TOL) -> bool:
    """Verify the relaxation structure of a symmetrized system.

    With ``T = Q11^(1/2)`` and ``K = Q22^(1/2)``, checks that

    * ``T^-2 A`` is symmetric and negative semidefinite,
    * ``(K^-1 C)^T`` equals ``T^-2 B K``,
    * ``K^-1 D K`` is symmetric positive semidefinite,
    * the eigenvalues of ``A`` and ``-D`` lie in the closed left half plane,

    all within ``tol`` relative to the natural scales.

    Raises
    ------
    NotPositiveDefinite
        If ``Q`` is not symmetric positive definite.
    """
    Q = np.asarray(Q, dtype=float)
    n, m = ss.n, ss.m
    if Q.shape != (n + m, n + m):
        raise ValueError(f"Q must be {(n + m, n + m)}, got {Q.shape}")
    if np.abs(Q - Q.T).max() > 1e-8 * max(np.abs(Q).max(), 1e-300):
        raise NotPositiveDefinite("Q must be symmetric")
    if np.linalg.eigvalsh(Q).min() <= 0:
        raise NotPositiveDefinite("Q must be positive definite")
    Q11, Q22 = Q[:n, :n], Q[n:, n:]
    K = _sqrtm_spd(Q22)

    def scale(M):
        return max(np.abs(M).max(), 1e-300)

    # T^-2 A symmetric negative semidefinite
    M1 = np.linalg.solve(Q11, ss.A)
    if np.abs(M1 - M1.T).max() > tol * scale(M1):
        return False
    if np.linalg.eigvalsh(0.5 * (M1 + M1.T)).max() > tol * scale(M1):
        return False
    # (K^-1 C)^T = T^-2 B K
    lhs = np.linalg.solve(K, ss.C).T
    rhs = np.linalg.solve(Q11, ss.B @ K)
    if np.abs(lhs - rhs).max() > tol * max(scale(lhs), scale(rhs)):
        return False
    # K^-1 D K symmetric positive semidefinite
    M2 = np.linalg.solve(K, ss.D @ K)
    if np.abs(M2 - M2.T).max() > tol * max(scale(M2), 1.0):
        return False
    if np.linalg.eigvalsh(0.5 * (M2 + M2.T)).min() < -tol * max(scale(M2), 1.0):
        return False
    # spectra of A and -D in the closed left half plane
    for M in (ss.A, -ss.D):
        eigs = np.linalg.eigvals(M)
        rho = max(np.abs(eigs).max(), 1e-300)
        if eigs.real.max() > tol * rho:
            return False
    return True


def optimal_controller(ss: StateSpace, alpha: float = 1.0, tol: float = RELAXATION_TOL) -> ControllerResult:
    """Closed-form worst-case-optimal static output feedback.

    The gain is ``-1/alpha * (D - C A^{-1} B)``; it is optimal for the output
    weight ``R = Q22^{-1}`` and disturbance weight ``S = Q11^{-1}`` derived
    from the positive definite certificate of the system.

    Raises
    ------
    PreconditionFailed
        If no positive definite certificate exists or the relaxation
        structure checks fail.
    SingularA
        If the state matrix is not invertible.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    P = system_matrix(ss)
    try:
        Q = complete_symmetrizability(P)
    except Infeasible as exc:
        raise PreconditionFailed(
            f"system has no positive definite symmetrizability certificate: {exc}"
        ) from exc
    if not relaxation_check(ss, Q, tol):
        raise PreconditionFailed("system is not of relaxation type")
    sv = np.linalg.svd(ss.A, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], 1.0):
        raise SingularA("the state matrix must be invertible for the closed form")
    n, m = ss.n, ss.m
    gain = -(1.0 / alpha) * (ss.D - ss.C @ np.linalg.solve(ss.A, ss.B))
    R = np.linalg.inv(Q[n:, n:])
    S = np.linalg.inv(Q[:n, :n])
    return ControllerResult(gain=gain, alpha=float(alpha), R=0.5 * (R + R.T), S=0.5 * (S + S.T))


@dataclass
class SimulationResult:
    """Sampled closed-loop trajectory with a finite-horizon quadratic cost."""

    t: NDArray[np.float64]
    x: NDArray[np.float64]
    y: NDArray[np.float64]
    u: NDArray[np.float64]
    cost: float

    def to_csv(self) -> str:
        """Render as CSV with header ``t,x1..xn,y1..ym,u1..um``.

        A final summary row ``cost,<value>`` follows the samples.
        """
        n, m = self.x.shape[1], self.y.shape[1]
        header = ",".join(
            ["t"]
            + [f"x{i + 1}" for i in range(n)]
            + [f"y{i + 1}" for i in range(m)]
            + [f"u{i + 1}" for i in range(m)]
        )
        lines = [header]
        for k in range(self.t.size):
            row = np.concatenate([[self.t[k]], self.x[k], self.y[k], self.u[k]])
            lines.append(",".join(repr(float(v)) for v in row))
        lines.append(f"cost,{self.cost!r}")
        return "\n".join(lines) + "\n"


def simulate_closed_loop(
    ss: StateSpace,
    gain: np.ndarray,
    w: Optional[Callable[[float], np.ndarray]] = None,
    horizon: float = 10.0,
    dt: Optional[float] = None,
    x0: Optional[np.ndarray] = None,
    weight: Optional[np.ndarray] = None,
    alpha: float = 1.0,
) -> SimulationResult:
    """Integrate ``dx/dt = A x + B u + w(t)`` with ``u = gain * y``.

    Fixed-step fourth-order Runge-Kutta integration; the returned cost is the
    trapezoidal value of ``integral(y' R y + alpha^2 u' R u)`` over the
    horizon with ``R = weight`` (identity by default).

    The loop must be well posed (``I - gain D`` invertible); a non-Hurwitz
    closed-loop state matrix only triggers an :class:`UnstableLoopWarning`.

    Parameters
    ----------
    w : callable, optional
        Disturbance ``t -> R^n``; omitted means identically zero.
    dt : float, optional
        Step size; defaults to 1e-3 times the fastest closed-loop time
        constant.
    """
    n, m = ss.n, ss.m
    gain = np.asarray(gain, dtype=float)
    if gain.shape != (m, m):
        raise ValueError(f"gain must be {(m, m)}, got {gain.shape}")
    loop = np.eye(m) - gain @ ss.D
    sv = np.linalg.svd(loop, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], 1.0):
        raise IllPosedLoop("I - gain*D is numerically singular")
    fb = np.linalg.solve(loop, gain @ ss.C)  # u = fb @ x
    A_cl = ss.A + ss.B @ fb
    eigs = np.linalg.eigvals(A_cl)
    rho = np.abs(eigs).max()
    if rho == 0.0 or eigs.real.max() >= -HURWITZ_TOL * rho:
        warnings.warn("closed-loop state matrix is not Hurwitz", UnstableLoopWarning,
                      stacklevel=2)

    if dt is None:
        decay = np.abs(eigs.real).max()
        dt = 1e-3 / decay if decay > 0 else 1e-3 * horizon
    steps = max(1, int(np.ceil(horizon / dt)))
    dt = horizon / steps

    wfun = (lambda t: np.zeros(n)) if w is None else w
    R = np.eye(m) if weight is None else np.asarray(weight, dtype=float)

    def rhs(t, state):
        return A_cl @ state + wfun(t)

    x = np.zeros((steps + 1, n))
    x[0] = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float)
    tgrid = np.linspace(0.0, horizon, steps + 1)
    for k in range(steps):
        t = tgrid[k]
        s = x[k]
        k1 = rhs(t, s)
        k2 = rhs(t + 0.5 * dt, s + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, s + 0.5 * dt * k2)
        k4 = rhs(t + dt, s + dt * k3)
        x[k + 1] = s + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    u = x @ fb.T
    y = x @ (ss.C + ss.D @ fb).T
    integrand = np.einsum("ki,ij,kj->k", y, R, y) + alpha**2 * np.einsum(
        "ki,ij,kj->k", u, R, u
    )
    cost = float(np.trapezoid(integrand, tgrid))
    return SimulationResult(t=tgrid, x=x, y=y, u=u, cost=cost)
