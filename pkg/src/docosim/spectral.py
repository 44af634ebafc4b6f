"""Graph topologies, gossip-matrix construction, and spectral quantities.

The mixing matrices built here are symmetric, doubly stochastic, and
supported on the communication graph (plus the diagonal).  All spectral
quantities are derived from a dense symmetric eigendecomposition; for a
symmetric matrix the singular values are the absolute eigenvalues, so the
second-largest singular value sigma2 is read off the sorted |eigenvalue|
list (multiplicity included).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SYMMETRY_TOL = 1e-10
STOCHASTIC_TOL = 1e-10
PSD_TOL = 1e-10


class SpectralError(ValueError):
    """Raised for invalid graphs or matrices."""


# ---------------------------------------------------------------------------
# Graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    """Undirected connected graph on nodes 0..n-1 with unordered edge set."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 1:
            raise SpectralError(f"node count must be >= 1, got {self.n}")
        for (i, j) in self.edges:
            if i == j:
                raise SpectralError(f"self-loop ({i},{j}) not allowed")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise SpectralError(f"edge ({i},{j}) out of range for n={self.n}")
            if i > j:
                raise SpectralError("edges must be stored as (min, max) pairs")
        if not self._connected():
            raise SpectralError("graph is not connected")

    def _connected(self) -> bool:
        if self.n == 1:
            return True
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for (i, j) in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        seen = [False] * self.n
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    stack.append(v)
        return count == self.n

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for (i, j) in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for (i, j) in self.edges:
            A[i, j] = 1.0
            A[j, i] = 1.0
        return A


def _edge(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


def build_cycle(n: int) -> Graph:
    """Ring topology; n must be even and >= 4 (n = 2(m+1) with m >= 1)."""
    if n < 4 or n % 2 != 0:
        raise SpectralError(f"cycle requires even n >= 4, got {n}")
    edges = frozenset(_edge(i, (i + 1) % n) for i in range(n))
    return Graph(n, edges)


def build_complete(n: int) -> Graph:
    if n < 1:
        raise SpectralError(f"need n >= 1, got {n}")
    edges = frozenset(_edge(i, j) for i in range(n) for j in range(i + 1, n))
    return Graph(n, edges)


def build_path(n: int) -> Graph:
    if n < 1:
        raise SpectralError(f"need n >= 1, got {n}")
    edges = frozenset(_edge(i, i + 1) for i in range(n - 1))
    return Graph(n, edges)


def build_from_edges(n: int, edges) -> Graph:
    """Custom topology from an iterable of (i, j) pairs; must be connected."""
    return Graph(n, frozenset(_edge(int(i), int(j)) for (i, j) in edges))


# ---------------------------------------------------------------------------
# Eigendecomposition
# ---------------------------------------------------------------------------

def symmetric_eigen(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix.

    Returns (eigenvalues sorted descending, orthonormal eigenvectors as
    columns, in matching order).  Rejects matrices whose asymmetry exceeds
    1e-10.  Residuals satisfy max_k |M v_k - w_k v_k|_inf <= 1e-9 * max(1, |w_max|).
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise SpectralError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] > 0 and np.max(np.abs(M - M.T)) > SYMMETRY_TOL:
        raise SpectralError("matrix is not symmetric within 1e-10")
    w, V = np.linalg.eigh(M)
    return w[::-1].copy(), V[:, ::-1].copy()


# ---------------------------------------------------------------------------
# Gossip matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GossipMatrix:
    """Symmetric doubly stochastic mixing matrix with cached spectral data.

    sigma2 is the second-largest singular value (= second-largest
    |eigenvalue|, multiplicity included), rho = 1 - sigma2, and is_psd
    reports whether the minimum eigenvalue is >= -1e-10.
    """

    n: int
    entries: np.ndarray
    sigma2: float
    rho: float
    is_psd: bool
    eigenvalues: np.ndarray = field(repr=False)

    @staticmethod
    def from_entries(P: np.ndarray, graph: Graph | None = None) -> "GossipMatrix":
        P = np.asarray(P, dtype=float)
        n = P.shape[0]
        if P.shape != (n, n):
            raise SpectralError(f"matrix must be square, got {P.shape}")
        if np.max(np.abs(P - P.T)) > 1e-12:
            raise SpectralError("gossip matrix must be symmetric within 1e-12")
        if np.min(P) < -1e-12:
            raise SpectralError("gossip matrix entries must be nonnegative")
        rows = P.sum(axis=1)
        cols = P.sum(axis=0)
        if np.max(np.abs(rows - 1.0)) > STOCHASTIC_TOL or np.max(np.abs(cols - 1.0)) > STOCHASTIC_TOL:
            raise SpectralError("gossip matrix must be doubly stochastic within 1e-10")
        if graph is not None:
            allowed = graph.adjacency() + np.eye(n)
            if np.any((np.abs(P) > 1e-15) & (allowed == 0.0)):
                raise SpectralError("gossip matrix has support outside the graph")
        w, _ = symmetric_eigen(P)
        svals = np.sort(np.abs(w))[::-1]
        sigma2 = float(svals[1]) if n > 1 else 0.0
        return GossipMatrix(
            n=n,
            entries=P,
            sigma2=sigma2,
            rho=1.0 - sigma2,
            is_psd=bool(w[-1] >= -PSD_TOL),
            eigenvalues=w,
        )


def max_degree_weights(g: Graph, lazy: bool = True) -> GossipMatrix:
    """Max-degree gossip matrix P = I - (D - A)/(delta_max + 1).

    With lazy=True returns (I + P)/2, which restores positive
    semidefiniteness when the raw matrix has negative eigenvalues (the
    even cycle does).  sigma2 < 1 is guaranteed for connected graphs.
    """
    A = g.adjacency()
    deg = g.degrees().astype(float)
    dmax = float(deg.max()) if g.n > 0 else 0.0
    P = np.eye(g.n) - (np.diag(deg) - A) / (dmax + 1.0)
    if lazy:
        P = (np.eye(g.n) + P) / 2.0
    gm = GossipMatrix.from_entries(P, graph=g)
    if g.n > 1 and gm.sigma2 >= 1.0:
        raise SpectralError("sigma2 >= 1: graph not connected?")
    return gm


# ---------------------------------------------------------------------------
# Accelerated-gossip parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralParams:
    """Mixing coefficient theta and accelerated-gossip iteration count."""

    theta: float
    L_gossip: int


def spectral_params(P: "GossipMatrix | float", n: int) -> SpectralParams:
    """theta = 1/(1 + sqrt(1 - sigma2^2)) and
    L = ceil(sqrt(2) ln(sqrt(14 n)) / ((sqrt(2)-1) sqrt(1 - sigma2))), floored at 1.

    Accepts either a GossipMatrix or a raw sigma2 value.
    """
    sigma2 = P.sigma2 if isinstance(P, GossipMatrix) else float(P)
    if not (0.0 <= sigma2 < 1.0):
        raise SpectralError(f"sigma2 must lie in [0, 1), got {sigma2}")
    if n < 1:
        raise SpectralError(f"need n >= 1, got {n}")
    theta = 1.0 / (1.0 + math.sqrt(1.0 - sigma2 ** 2))
    L = math.ceil(math.sqrt(2.0) * math.log(math.sqrt(14.0 * n))
                  / ((math.sqrt(2.0) - 1.0) * math.sqrt(1.0 - sigma2)))
    return SpectralParams(theta=theta, L_gossip=max(1, L))


def check_cycle_spectral_bound(n: int) -> bool:
    """Whether pi^2/(1 - sigma2(P)) <= 4 n^2 for the non-lazy cycle matrix."""
    P = max_degree_weights(build_cycle(n), lazy=False)
    return math.pi ** 2 / (1.0 - P.sigma2) <= 4.0 * n ** 2


# ---------------------------------------------------------------------------
# Topology config / dumps
# ---------------------------------------------------------------------------

def build_topology(kind: str, n: int, edges=None) -> Graph:
    """Topology by name: "cycle" | "complete" | "path" | "custom"."""
    if kind == "cycle":
        return build_cycle(n)
    if kind == "complete":
        return build_complete(n)
    if kind == "path":
        return build_path(n)
    if kind == "custom":
        if edges is None:
            raise SpectralError("custom topology requires an edge list")
        return build_from_edges(n, edges)
    raise SpectralError(f"unknown topology kind {kind!r}")


def matrix_csv_lines(P: GossipMatrix):
    """Row-major CSV dump at 17 significant digits."""
    for row in P.entries:
        yield ",".join(f"{v:.17g}" for v in row)
