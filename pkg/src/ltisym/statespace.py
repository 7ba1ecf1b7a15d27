"""State-space models with square transfer functions, plus builders and I/O.

All types are immutable values: matrices are copied on construction and
marked read-only, and every operation returns a new object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .exceptions import (
    DimensionError,
    ExhaustedRetries,
    MinimalityError,
    ParseError,
    SingularResolvent,
    SingularTransform,
)

#: Relative singular-value threshold below which a matrix counts as singular.
SINGULAR_TOL = 1e-12

#: Minimum distance between transfer-function sample points and poles.
POLE_MARGIN = 1e-3

_SAMPLE_SEED = 20230817


def _as_matrix(value, name: str, shape=None) -> NDArray[np.float64]:
    try:
        M = np.array(value, dtype=float)
    except Exception as exc:  # ragged rows, non-numeric entries
        raise DimensionError(f"{name} is not a rectangular numeric matrix: {exc}") from exc
    if M.ndim != 2:
        raise DimensionError(f"{name} must be a 2-d matrix, got ndim={M.ndim}")
    if shape is not None and M.shape != shape:
        raise DimensionError(f"{name} must have shape {shape}, got {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite entries")
    M.flags.writeable = False
    return M


@dataclass
class StateSpace:
    """Continuous-time LTI system ``dx/dt = Ax + Bu``, ``y = Cx + Du``.

    The input and output counts are equal (``m``), so the transfer function
    ``G(s) = C (sI - A)^{-1} B + D`` is square.

    Parameters
    ----------
    A : (n, n) array_like
        State dynamics matrix.
    B : (n, m) array_like
        Input map.
    C : (m, n) array_like
        Output map.
    D : (m, m) array_like
        Feedthrough.
    """

    A: NDArray[np.float64]
    B: NDArray[np.float64]
    C: NDArray[np.float64]
    D: NDArray[np.float64]

    def __post_init__(self) -> None:
        self.A = _as_matrix(self.A, "A")
        n = self.A.shape[0]
        if self.A.shape[1] != n or n < 1:
            raise DimensionError(f"A must be square and nonempty, got {self.A.shape}")
        self.B = _as_matrix(self.B, "B")
        m = self.B.shape[1]
        if m < 1:
            raise DimensionError("system must have at least one input")
        self.B = _as_matrix(self.B, "B", (n, m))
        self.C = _as_matrix(self.C, "C", (m, n))
        self.D = _as_matrix(self.D, "D", (m, m))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    def poles(self) -> NDArray[np.complex128]:
        return np.linalg.eigvals(self.A)


@dataclass
class SystemMatrix:
    """The ``(n+m) x (n+m)`` block matrix ``[[A, B], [C, D]]`` of a system."""

    P: NDArray[np.float64]
    n: int
    m: int

    def __post_init__(self) -> None:
        size = self.n + self.m
        if self.n < 1 or self.m < 1:
            raise DimensionError("n and m must be positive")
        self.P = _as_matrix(self.P, "P", (size, size))

    @property
    def size(self) -> int:
        return self.n + self.m

    def blocks(self):
        """Return the (A, B, C, D) blocks."""
        n = self.n
        return self.P[:n, :n], self.P[:n, n:], self.P[n:, :n], self.P[n:, n:]


def system_matrix(ss: StateSpace) -> SystemMatrix:
    """Assemble the short-hand system matrix ``[[A, B], [C, D]]``."""
    P = np.block([[ss.A, ss.B], [ss.C, ss.D]])
    return SystemMatrix(P, ss.n, ss.m)


def split_system_matrix(P: SystemMatrix) -> StateSpace:
    """Inverse of :func:`system_matrix`: extract the state-space blocks."""
    A, B, C, D = P.blocks()
    return StateSpace(A, B, C, D)


# ---------------------------------------------------------------------------
# JSON interchange


def load_system(text: str) -> StateSpace:
    """Parse a JSON system document.

    The document is an object with integer fields ``n`` and ``m`` and
    row-major nested arrays ``A`` (n x n), ``B`` (n x m), ``C`` (m x n),
    ``D`` (m x m).

    Raises
    ------
    ParseError
        If the text is not valid JSON or misses a required field.
    DimensionError
        If a matrix does not match the declared dimensions.
    ValueError
        If any entry is non-finite.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("system document must be a JSON object")
    try:
        n = int(doc["n"])
        m = int(doc["m"])
        A, B, C, D = doc["A"], doc["B"], doc["C"], doc["D"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"missing or malformed field: {exc}") from exc
    if n < 1 or m < 1:
        raise DimensionError(f"n and m must be positive, got n={n}, m={m}")
    return StateSpace(
        _as_matrix(A, "A", (n, n)),
        _as_matrix(B, "B", (n, m)),
        _as_matrix(C, "C", (m, n)),
        _as_matrix(D, "D", (m, m)),
    )


def dump_system(ss: StateSpace) -> str:
    """Serialize a system to the JSON interchange format (deterministic)."""
    doc = {
        "n": ss.n,
        "m": ss.m,
        "A": ss.A.tolist(),
        "B": ss.B.tolist(),
        "C": ss.C.tolist(),
        "D": ss.D.tolist(),
    }
    return json.dumps(doc)


# ---------------------------------------------------------------------------
# Transfer function evaluation and input/output transforms


def transfer_eval(ss: StateSpace, s: complex, tol: float = SINGULAR_TOL):
    """Evaluate ``G(s) = C (sI - A)^{-1} B + D`` at one complex point.

    Raises
    ------
    SingularResolvent
        If ``sI - A`` is numerically singular (``s`` is at or too close to a
        pole).
    """
    M = s * np.eye(ss.n) - ss.A
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] <= tol * max(sv[0], 1.0):
        raise SingularResolvent(f"s={s} is numerically a pole of the system")
    return ss.C @ np.linalg.solve(M, ss.B) + ss.D


def _check_nonsingular(M: np.ndarray, name: str, tol: float) -> None:
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] <= tol * max(sv[0], 1.0):
        raise SingularTransform(f"{name} is numerically singular")


def apply_io_transform(
    ss: StateSpace, K: np.ndarray, T: np.ndarray, tol: float = SINGULAR_TOL
) -> StateSpace:
    """Change input/output and state coordinates by nonsingular ``K`` and ``T``.

    Returns the realization ``(T^{-1}AT, T^{-1}BK, K^{-1}CT, K^{-1}DK)``,
    whose transfer function is ``K^{-1} G(s) K``.
    """
    K = _as_matrix(K, "K", (ss.m, ss.m))
    T = _as_matrix(T, "T", (ss.n, ss.n))
    _check_nonsingular(K, "K", tol)
    _check_nonsingular(T, "T", tol)
    A = np.linalg.solve(T, ss.A @ T)
    B = np.linalg.solve(T, ss.B @ K)
    C = np.linalg.solve(K, ss.C @ T)
    D = np.linalg.solve(K, ss.D @ K)
    return StateSpace(A, B, C, D)


# ---------------------------------------------------------------------------
# Minimality


def _matrix_rank(M: np.ndarray, tol: float) -> int:
    sv = np.linalg.svd(M, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0] * max(M.shape)))


def controllability_matrix(ss: StateSpace) -> np.ndarray:
    blocks, Mk = [], ss.B
    for _ in range(ss.n):
        blocks.append(Mk)
        Mk = ss.A @ Mk
    return np.hstack(blocks)


def observability_matrix(ss: StateSpace) -> np.ndarray:
    blocks, Mk = [], ss.C
    for _ in range(ss.n):
        blocks.append(Mk)
        Mk = Mk @ ss.A
    return np.vstack(blocks)


def is_minimal(ss: StateSpace, tol: float = 1e-10) -> bool:
    """True when the realization is both controllable and observable."""
    return (
        _matrix_rank(controllability_matrix(ss), tol) == ss.n
        and _matrix_rank(observability_matrix(ss), tol) == ss.n
    )


# ---------------------------------------------------------------------------
# Transfer-function sample points


def sample_points(ss: StateSpace, seed: int = _SAMPLE_SEED) -> NDArray[np.complex128]:
    """Standard evaluation grid for transfer-function identity checks.

    Returns logarithmically spaced points on the imaginary axis plus seeded
    random complex points, all at distance at least ``POLE_MARGIN`` from the
    eigenvalues of ``A``.  The count grows with the state dimension so that a
    proper rational entry (numerator degree at most ``n``) vanishing on the
    whole grid must vanish identically.
    """
    count = max(10, ss.n + 2)
    eigs = np.linalg.eigvals(ss.A)

    def clear(s: complex) -> bool:
        return np.min(np.abs(eigs - s)) >= POLE_MARGIN if eigs.size else True

    pts = []
    for w in np.logspace(-2.0, 2.0, count):
        s = 1j * w
        while not clear(s):
            w *= 1.0137
            s = 1j * w
        pts.append(s)
    rng = np.random.default_rng(seed)
    scale = 1.0 + float(np.max(np.abs(eigs))) if eigs.size else 1.0
    while len(pts) < 2 * count:
        s = complex(rng.standard_normal(), rng.standard_normal()) * scale
        if clear(s):
            pts.append(s)
    return np.array(pts)


# ---------------------------------------------------------------------------
# Example-system builders


@dataclass
class TankParams:
    """Physical parameters of the quadruple-tank process.

    ``T1..T4`` are tank time constants, ``A1..A4`` cross-sections, ``k1, k2``
    pump gains, ``kc`` the level-sensor gain, and ``gamma1, gamma2`` the valve
    splits.  The cross couplings require ``gamma1 < 1`` and ``gamma2 < 1``.
    """

    T1: float = 10.0
    T2: float = 10.0
    T3: float = 5.0
    T4: float = 5.0
    A1: float = 1.0
    A2: float = 1.0
    A3: float = 1.0
    A4: float = 1.0
    k1: float = 1.0
    k2: float = 1.0
    kc: float = 1.0
    gamma1: float = 0.7
    gamma2: float = 0.6

    def __post_init__(self) -> None:
        for name in ("T1", "T2", "T3", "T4", "A1", "A2", "A3", "A4", "k1", "k2", "kc"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("gamma1", "gamma2"):
            g = getattr(self, name)
            if not 0.0 <= g <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.gamma1 >= 1.0 or self.gamma2 >= 1.0:
            raise ValueError("valve splits must be < 1 so both cross couplings are nonzero")

    @property
    def c11(self) -> float:
        return self.gamma1 * self.k1 * self.T1 * self.kc / self.A1

    @property
    def c12(self) -> float:
        return (1.0 - self.gamma2) * self.k2 * self.T1 * self.kc / self.A1

    @property
    def c21(self) -> float:
        return (1.0 - self.gamma1) * self.k1 * self.T2 * self.kc / self.A2

    @property
    def c22(self) -> float:
        return self.gamma2 * self.k2 * self.T2 * self.kc / self.A2


def quadruple_tank(p: TankParams) -> StateSpace:
    """Minimal 4-state realization of the quadruple-tank transfer function.

    The entries of ``G(s)`` are first- and second-order lags::

        G11 = c11 / (1 + s T1)                G12 = c12 / ((1 + s T1)(1 + s T3))
        G21 = c21 / ((1 + s T2)(1 + s T4))    G22 = c22 / (1 + s T2)

    The realization is modal: ``A = diag(-1/T1, -1/T2, -1/T3, -1/T4)`` with
    the second-order entries split by partial fractions, which requires
    ``T1 != T3`` and ``T2 != T4``.

    Raises
    ------
    ValueError
        On parameter-invariant violations or coincident time constants that
        break the partial-fraction split.
    MinimalityError
        If the resulting realization fails the controllability/observability
        rank checks (degenerate coefficient combination).
    """
    a = np.array([1.0 / p.T1, 1.0 / p.T2, 1.0 / p.T3, 1.0 / p.T4])
    if abs(a[2] - a[0]) <= 1e-9 * max(a[0], a[2]) or abs(a[3] - a[1]) <= 1e-9 * max(a[1], a[3]):
        raise ValueError("modal realization requires T1 != T3 and T2 != T4")
    b12 = p.c12 / (p.T1 * p.T3 * (a[2] - a[0]))
    b21 = p.c21 / (p.T2 * p.T4 * (a[3] - a[1]))
    A = np.diag(-a)
    B = np.array([
        [p.c11 / p.T1, b12],
        [b21, p.c22 / p.T2],
        [0.0, -b12],
        [-b21, 0.0],
    ])
    C = np.array([[1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0]])
    D = np.zeros((2, 2))
    ss = StateSpace(A, B, C, D)
    if not is_minimal(ss):
        raise MinimalityError("tank parameters yield a non-minimal realization")
    return ss


def random_symmetric_system(
    n: int,
    m: int,
    sigma=None,
    seed: int = 0,
    max_tries: int = 50,
) -> StateSpace:
    """Random minimal system whose system matrix satisfies ``S P = P^T S``.

    ``P`` is built as ``S @ X`` for a random symmetric ``X`` and the signature
    matrix ``S = diag(sigma)``, which makes the internal-symmetry identity
    hold exactly in floating point.  Resamples until the realization is
    minimal.

    Parameters
    ----------
    sigma : array_like of +/-1, length n+m, optional
        Signature diagonal (defaults to all ones).  Objects with a ``diag``
        attribute are accepted.
    """
    size = n + m
    diag = np.ones(size) if sigma is None else np.asarray(getattr(sigma, "diag", sigma), dtype=float)
    if diag.shape != (size,) or not np.all(np.abs(diag) == 1.0):
        raise ValueError("sigma must be a vector of +/-1 of length n+m")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        X = rng.standard_normal((size, size))
        X = 0.5 * (X + X.T)
        P = diag[:, None] * X
        ss = split_system_matrix(SystemMatrix(P, n, m))
        if is_minimal(ss):
            return ss
    raise ExhaustedRetries(f"no minimal sample within {max_tries} draws")
