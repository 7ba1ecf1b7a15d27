"""Shared fixtures and generators for the test suite."""

import numpy as np
import pytest

import ltisym

# ---------------------------------------------------------------------------
# Benchmark system: published 4-decimal data of a non-symmetric but
# symmetrizable system with five distinct real system-matrix eigenvalues.
# The printed precision limits how exactly the certificate equations can be
# satisfied (entries carry ~5e-5 rounding), hence the dedicated REF_TOL.

REF_A = [[3.6000, -0.6333], [-0.3000, 3.4000]]
REF_B = [[-2.1400, 1.3200, 3.6400], [-1.8600, 2.2800, 9.9600]]
REF_C = [[0.0500, -0.3833], [2.2250, -1.9083], [-0.5000, 0.4667]]
REF_D = [[2.2000, -1.8000, -8.4000], [-2.4000, -4.4000, -37.2000],
         [0.4000, 1.4000, 10.2000]]

#: Rank/kernel tolerance matched to the benchmark's 4-decimal data.
REF_TOL = 1e-4

#: Kernel basis of the Khatri-Rao operator as published (column span).
REF_KERNEL = np.array([[1.0, 0, 0, 0, 0], [0, 1.0, 1.0, 1.0, 1.0]]).T

#: Kernel vector realizing signature -3, and the published gain for it.
REF_X = np.array([1.0, -1.0, -1.0, -1.0, -1.0])
REF_GAIN = np.array([
    [2.3460, -0.0576, -2.7399],
    [-3.0744, 0.0637, -2.1109],
    [0.9380, 0.3529, -0.0658],
])

REF_SIGNATURES = {-5, -3, 3, 5}


@pytest.fixture(scope="session")
def refsys() -> ltisym.StateSpace:
    return ltisym.StateSpace(REF_A, REF_B, REF_C, REF_D)


@pytest.fixture(scope="session")
def ref_P(refsys) -> ltisym.SystemMatrix:
    return ltisym.system_matrix(refsys)


# ---------------------------------------------------------------------------
# Generators


def well_conditioned(rng: np.random.Generator, k: int, lo: float = 0.5, hi: float = 2.0):
    """Random matrix with singular values in [lo, hi] (controlled condition)."""
    q1, _ = np.linalg.qr(rng.standard_normal((k, k)))
    q2, _ = np.linalg.qr(rng.standard_normal((k, k)))
    return q1 @ np.diag(rng.uniform(lo, hi, k)) @ q2


def random_signature(rng: np.random.Generator, size: int) -> np.ndarray:
    diag = np.where(rng.standard_normal(size) >= 0, 1.0, -1.0)
    return diag


def conjugated_symmetric_system(rng: np.random.Generator, n: int, m: int):
    """Internally symmetric system hidden behind random coordinate changes.

    Returns (transformed system, original system, sigma diagonal).
    """
    sigma = random_signature(rng, n + m)
    base = ltisym.random_symmetric_system(n, m, sigma, seed=int(rng.integers(2**31)))
    t0 = well_conditioned(rng, n)
    k0 = well_conditioned(rng, m)
    return ltisym.apply_io_transform(base, k0, t0), base, sigma


def random_gaussian_system(rng: np.random.Generator, n: int, m: int) -> ltisym.StateSpace:
    return ltisym.StateSpace(
        rng.standard_normal((n, n)),
        rng.standard_normal((n, m)),
        rng.standard_normal((m, n)),
        rng.standard_normal((m, m)),
    )


def planted_relaxation(rng: np.random.Generator, n: int, m: int, conjugate: bool = True):
    """Relaxation-type system (A < 0 symmetric, C = B^T, D > 0 symmetric),
    optionally hidden behind well-conditioned coordinate changes."""
    L = rng.standard_normal((n, n))
    A = -(L @ L.T) / n - 0.3 * np.eye(n)
    B = rng.standard_normal((n, m))
    M = rng.standard_normal((m, m))
    D = (M @ M.T) / m + 0.2 * np.eye(m)
    ss = ltisym.StateSpace(A, B, B.T, D)
    if not ltisym.is_minimal(ss):
        return planted_relaxation(rng, n, m, conjugate)
    if conjugate:
        ss = ltisym.apply_io_transform(ss, well_conditioned(rng, m), well_conditioned(rng, n))
    return ss
