"""Deciding input-output symmetry and recovering signature witnesses.

A square transfer function ``G`` is (externally) symmetric when
``S G(s)^T = G(s) S`` for a diagonal matrix ``S`` with entries +/-1; a
realization is internally symmetric when its system matrix ``P`` satisfies
``S P = P^T S``.  Both conditions reduce to sign-consistency problems
``s_i * s_j = parity(i, j)`` which are solved here with a parity-aware
union-find.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from .exceptions import Infeasible
from .statespace import StateSpace, SystemMatrix, sample_points, transfer_eval

#: Default relative threshold separating "zero" from "nonzero" entries.
SYMMETRY_TOL = 1e-9


@dataclass
class SignatureMatrix:
    """Diagonal matrix with +/-1 diagonal entries."""

    diag: NDArray[np.float64]

    def __post_init__(self) -> None:
        self.diag = np.asarray(self.diag, dtype=float).reshape(-1)
        if self.diag.size == 0 or not np.all(np.abs(self.diag) == 1.0):
            raise ValueError("signature entries must be +1 or -1")
        self.diag.flags.writeable = False

    def __len__(self) -> int:
        return self.diag.size

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.diag)

    @property
    def signature(self) -> int:
        """Number of +1 entries minus number of -1 entries."""
        return int(round(self.diag.sum()))

    def __neg__(self) -> "SignatureMatrix":
        return SignatureMatrix(-self.diag)


def split_signature(sigma: SignatureMatrix, n: int) -> tuple[SignatureMatrix, SignatureMatrix]:
    """Split a system signature ``diag(-S_i, S_e)`` into ``(S_i, S_e)``.

    The leading ``n`` entries carry a sign flip: the internal block of the
    system signature matrix is ``-S_i``.
    """
    if not 0 < n < len(sigma):
        raise ValueError("n must split the signature into two nonempty blocks")
    return SignatureMatrix(-sigma.diag[:n]), SignatureMatrix(sigma.diag[n:])


@dataclass
class SignConstraintGraph:
    """Constraints ``sign_i * sign_j = parity`` over ``q`` nodes.

    Duplicate edges with contradictory parity are recorded in ``conflicts``
    rather than silently dropped.
    """

    q: int
    edges: list[tuple[int, int, int]] = field(default_factory=list)
    conflicts: list[tuple[int, int]] = field(default_factory=list)

    def add(self, i: int, j: int, parity: int) -> None:
        if i == j:
            raise ValueError("self-edges are not allowed")
        if not (0 <= i < self.q and 0 <= j < self.q):
            raise ValueError(f"edge ({i}, {j}) outside 0..{self.q - 1}")
        if parity not in (-1, 1):
            raise ValueError("parity must be +1 or -1")
        for a, b, p in self.edges:
            if {a, b} == {i, j} and p != parity:
                self.conflicts.append((i, j))
                break
        self.edges.append((i, j, parity))


def sign_consistency(g: SignConstraintGraph) -> SignatureMatrix:
    """Solve ``s_i * s_j = parity`` for all edges.

    Each connected component is normalized so its smallest-index node gets
    +1; isolated nodes get +1.  The result is independent of edge order.

    Raises
    ------
    Infeasible
        If the constraints contradict each other; ``exc.cycle`` holds one
        witnessing odd cycle as a node list.
    """
    if g.conflicts:
        i, j = g.conflicts[0]
        raise Infeasible(f"contradictory parities on edge ({i}, {j})", cycle=[i, j])

    parent = list(range(g.q))
    parity_to_parent = [0] * g.q  # 0: same sign as parent, 1: opposite
    adjacency: dict[int, list[tuple[int, int]]] = {i: [] for i in range(g.q)}

    def find(i: int) -> tuple[int, int]:
        if parent[i] == i:
            return i, 0
        root, par = find(parent[i])
        parent[i] = root
        parity_to_parent[i] ^= par
        return parent[i], parity_to_parent[i]

    def forest_path(src: int, dst: int) -> list[int]:
        # BFS over accepted edges; graphs here are tiny.
        prev = {src: None}
        queue = [src]
        while queue:
            node = queue.pop(0)
            if node == dst:
                break
            for nb, _ in adjacency[node]:
                if nb not in prev:
                    prev[nb] = node
                    queue.append(nb)
        path = [dst]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        return path[::-1]

    for i, j, p in g.edges:
        want = 0 if p == 1 else 1
        ri, pi = find(i)
        rj, pj = find(j)
        if ri == rj:
            if (pi ^ pj) != want:
                raise Infeasible(
                    f"odd cycle through edge ({i}, {j})",
                    cycle=forest_path(i, j) + [i],
                )
            continue
        parent[rj] = ri
        parity_to_parent[rj] = pi ^ pj ^ want
        adjacency[i].append((j, p))
        adjacency[j].append((i, p))

    # parity of the smallest-index node of each component fixes the sign
    anchor_parity: dict[int, int] = {}
    signs = np.ones(g.q)
    for i in range(g.q):
        root, par = find(i)
        if root not in anchor_parity:
            anchor_parity[root] = par
        signs[i] = 1.0 if par == anchor_parity[root] else -1.0
    return SignatureMatrix(signs)


def check_internal_symmetry(
    P: SystemMatrix, tol: float = SYMMETRY_TOL
) -> Optional[SignatureMatrix]:
    """Find a signature matrix ``S`` with ``S P = P^T S``, or ``None``.

    For every index pair whose entries are not both negligible, the
    magnitudes ``|P_ij|`` and ``|P_ji|`` must agree within ``tol * max|P|``
    and the product sign fixes the parity ``s_i * s_j``.  The returned
    witness satisfies ``max|S P - P^T S| <= tol * max|P|``; it is the full
    ``(n+m)``-signature, see :func:`split_signature` for the
    internal/external blocks.
    """
    M = P.P
    size = P.size
    scale = np.abs(M).max()
    if scale == 0.0:
        return SignatureMatrix(np.ones(size))
    zero_cut = 0.5 * tol * scale
    graph = SignConstraintGraph(size)
    for i in range(size):
        for j in range(i + 1, size):
            a, b = M[i, j], M[j, i]
            if max(abs(a), abs(b)) <= zero_cut:
                continue
            if abs(abs(a) - abs(b)) > tol * scale:
                return None
            graph.add(i, j, 1 if a * b > 0 else -1)
    try:
        sigma = sign_consistency(graph)
    except Infeasible:
        return None
    resid = np.abs(sigma.diag[:, None] * M - M.T * sigma.diag[None, :]).max()
    if resid > tol * scale:
        return None
    return sigma


def check_external_symmetry(
    ss: StateSpace, tol: float = SYMMETRY_TOL
) -> Optional[SignatureMatrix]:
    """Find an external signature ``S_e`` with ``S_e G(s)^T = G(s) S_e``.

    ``G`` is evaluated on the standard sample grid; an entry whose magnitude
    stays below ``tol`` times the overall response scale is treated as
    identically zero.  Returns the ``m``-sized witness or ``None``.
    """
    pts = sample_points(ss)
    G = np.stack([transfer_eval(ss, s) for s in pts])
    m = ss.m
    scale = np.abs(G).max()
    if scale == 0.0:
        return SignatureMatrix(np.ones(m))
    graph = SignConstraintGraph(m)
    for i in range(m):
        for j in range(i + 1, m):
            gij, gji = G[:, i, j], G[:, j, i]
            if max(np.abs(gij).max(), np.abs(gji).max()) <= tol * scale:
                continue
            err_plus = np.abs(gij - gji).max()
            err_minus = np.abs(gij + gji).max()
            if min(err_plus, err_minus) > tol * scale:
                return None
            graph.add(i, j, 1 if err_plus <= err_minus else -1)
    try:
        return sign_consistency(graph)
    except Infeasible:
        return None
