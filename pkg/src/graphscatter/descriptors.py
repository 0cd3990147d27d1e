"""Node descriptor signals computed from a bare adjacency matrix.

These are the structural inputs used when a dataset ships no signals:
degree, eccentricity, clustering coefficient, triangle count, core number,
maximal-clique participation, and PageRank.  All of them are permutation
equivariant; relabeling the vertices permutes every descriptor identically.
"""

from __future__ import annotations

import warnings
from collections import deque

import numpy as np

from .core import Signal, build_space
from .errors import CliqueCapExceeded, DisconnectedForEccentricity

SUPPORTED_DESCRIPTORS = (
    "degree",
    "eccentricity",
    "clustering",
    "triangles",
    "core_number",
    "clique_participation",
    "pagerank",
)

CLIQUE_VERTEX_CAP = 60


def _binary(adjacency) -> np.ndarray:
    a = np.asarray(adjacency, dtype=float)
    return (a > 0).astype(float)


def degree(adjacency) -> np.ndarray:
    """Row sums of the 0/1 adjacency."""
    return _binary(adjacency).sum(axis=1)


def _bfs_distances(a: np.ndarray, source: int) -> np.ndarray:
    n = a.shape[0]
    dist = np.full(n, -1, dtype=int)
    dist[source] = 0
    queue = deque([source])
    neighbors = [np.flatnonzero(a[i]) for i in range(n)]
    while queue:
        u = queue.popleft()
        for v in neighbors[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def eccentricity(adjacency) -> np.ndarray:
    """Per-node maximum BFS distance; undefined on disconnected graphs."""
    a = _binary(adjacency)
    out = np.zeros(a.shape[0])
    for i in range(a.shape[0]):
        dist = _bfs_distances(a, i)
        if dist.min() < 0:
            raise DisconnectedForEccentricity("graph is disconnected")
        out[i] = dist.max()
    return out


def triangles(adjacency) -> np.ndarray:
    """Triangles through each node: diag(A^3) / 2 on the 0/1 adjacency."""
    a = _binary(adjacency)
    return np.round(np.diag(a @ a @ a) / 2.0)


def clustering(adjacency) -> np.ndarray:
    """c(u) = 2 T(u) / (deg(u) (deg(u) - 1)), zero when deg(u) <= 1."""
    a = _binary(adjacency)
    deg = a.sum(axis=1)
    tri = np.diag(a @ a @ a) / 2.0
    out = np.zeros(a.shape[0])
    mask = deg > 1
    out[mask] = 2.0 * tri[mask] / (deg[mask] * (deg[mask] - 1.0))
    return out


def core_number(adjacency) -> np.ndarray:
    """Largest k such that the node survives in the k-core, by peeling."""
    a = _binary(adjacency)
    n = a.shape[0]
    deg = a.sum(axis=1).astype(int)
    alive = np.ones(n, dtype=bool)
    core = np.zeros(n, dtype=int)
    k = 0
    remaining = n
    while remaining:
        k = max(k, int(deg[alive].min()))
        peel = [i for i in range(n) if alive[i] and deg[i] <= k]
        while peel:
            u = peel.pop()
            if not alive[u]:
                continue
            alive[u] = False
            core[u] = k
            remaining -= 1
            for v in np.flatnonzero(a[u]):
                if alive[v]:
                    deg[v] -= 1
                    if deg[v] <= k:
                        peel.append(v)
    return core.astype(float)


def _maximal_cliques(neighbors: list) -> list:
    """Bron-Kerbosch with pivoting over adjacency sets."""
    cliques = []

    def expand(r: set, p: set, x: set):
        if not p and not x:
            cliques.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(neighbors[u] & p))
        for v in list(p - neighbors[pivot]):
            expand(r | {v}, p & neighbors[v], x & neighbors[v])
            p.remove(v)
            x.add(v)

    n = len(neighbors)
    expand(set(), set(range(n)), set())
    return cliques


def clique_participation(adjacency, cap: int = CLIQUE_VERTEX_CAP) -> np.ndarray:
    """Number of maximal cliques each node belongs to."""
    a = _binary(adjacency)
    n = a.shape[0]
    if n > cap:
        raise CliqueCapExceeded(f"{n} vertices exceed the clique cap {cap}")
    neighbors = [set(np.flatnonzero(a[i])) for i in range(n)]
    counts = np.zeros(n)
    for clique in _maximal_cliques(neighbors):
        for u in clique:
            counts[u] += 1
    return counts


def pagerank(adjacency, damping: float = 0.85, tol: float = 1e-10,
             max_iter: int = 100_000) -> np.ndarray:
    """Power-iteration PageRank on the 0/1 adjacency; sums to one.

    Dangling (isolated) vertices redistribute their mass uniformly.
    """
    a = _binary(adjacency)
    n = a.shape[0]
    deg = a.sum(axis=1)
    dangling = deg == 0
    trans = np.zeros_like(a)
    nz = ~dangling
    trans[nz] = a[nz] / deg[nz, None]
    rank = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    for _ in range(max_iter):
        nxt = teleport + damping * (trans.T @ rank + rank[dangling].sum() / n)
        if np.abs(nxt - rank).sum() < tol:
            return nxt
        rank = nxt
    return rank


_DESCRIPTOR_FNS = {
    "degree": degree,
    "eccentricity": eccentricity,
    "clustering": clustering,
    "triangles": triangles,
    "core_number": core_number,
    "clique_participation": clique_participation,
    "pagerank": pagerank,
}


def node_descriptors(adjacency, requested=None) -> dict:
    """Compute the requested descriptors as a name -> vector map.

    With ``requested=None`` every supported descriptor is computed, except
    that eccentricity is dropped with a warning when the graph is
    disconnected.  Explicitly requesting eccentricity on a disconnected graph
    raises instead.
    """
    drop_silently = requested is None
    names = SUPPORTED_DESCRIPTORS if requested is None else tuple(requested)
    unknown = set(names) - set(SUPPORTED_DESCRIPTORS)
    if unknown:
        raise ValueError(f"unsupported descriptors: {sorted(unknown)}")
    out = {}
    for name in names:
        try:
            out[name] = _DESCRIPTOR_FNS[name](adjacency)
        except DisconnectedForEccentricity:
            if not drop_silently:
                raise
            warnings.warn("graph is disconnected; dropping eccentricity",
                          stacklevel=2)
    return out


def descriptor_signals(adjacency, requested=None) -> dict:
    """Descriptors wrapped as signals on a fresh unit-weight space."""
    vectors = node_descriptors(adjacency, requested)
    space = build_space(np.asarray(adjacency).shape[0])
    return {name: Signal(space, vec) for name, vec in vectors.items()}
