"""Seeded toy-data builders for demos, tests, and end-to-end runs."""

from __future__ import annotations

import numpy as np

from .io import Molecule


def random_connected_adjacency(n: int, rng, edge_prob: float = 0.35,
                               weighted: bool = False) -> np.ndarray:
    """Erdos-Renyi adjacency forced connected by a random spanning path."""
    a = np.zeros((n, n))
    order = rng.permutation(n)
    for u, v in zip(order[:-1], order[1:]):
        a[u, v] = a[v, u] = 1.0
    mask = rng.random((n, n)) < edge_prob
    mask = np.triu(mask, 1)
    a[mask] = 1.0
    a = np.maximum(a, a.T)
    if weighted:
        w = rng.uniform(0.5, 2.0, size=(n, n))
        w = np.triu(w, 1)
        w = w + w.T
        a = a * w
    np.fill_diagonal(a, 0.0)
    return a


def random_signal_values(n: int, rng, complex_valued: bool = True) -> np.ndarray:
    v = rng.standard_normal(n)
    if complex_valued:
        v = v + 1j * rng.standard_normal(n)
    return v


def synthetic_molecules(count: int, seed: int = 0, n_atoms=(4, 8),
                        box: float = 4.0, min_dist: float = 0.8):
    """Random molecules with a smooth energy surface.

    Atoms draw charges from {1, 6, 7, 8} and positions uniformly in a box
    with a minimum separation.  The energy is a smooth function of charges
    and distances: the diagonal charge term plus the pairwise Coulomb
    repulsion, warped through a soft square root to keep it nonlinear.
    """
    rng = np.random.default_rng(seed)
    charges_pool = np.array([1.0, 6.0, 7.0, 8.0])
    molecules = []
    energies = []
    for idx in range(count):
        n = int(rng.integers(n_atoms[0], n_atoms[1] + 1))
        z = charges_pool[rng.integers(0, charges_pool.size, size=n)]
        pos = _packed_positions(n, rng, box, min_dist)
        molecules.append(Molecule(str(idx), z, pos))
        diff = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt(np.sum(diff**2, axis=-1))
        iu = np.triu_indices(n, 1)
        repulsion = float(np.sum(z[iu[0]] * z[iu[1]] / dist[iu]))
        self_term = float(np.sum(0.5 * z**2.4))
        raw = self_term + 0.5 * repulsion
        energies.append(-(raw + 10.0 * np.sqrt(raw)))
    return molecules, np.array(energies)


def _packed_positions(n: int, rng, box: float, min_dist: float) -> np.ndarray:
    pos = [rng.uniform(0.0, box, size=3)]
    while len(pos) < n:
        cand = rng.uniform(0.0, box, size=3)
        if min(np.linalg.norm(cand - p) for p in pos) >= min_dist:
            pos.append(cand)
    return np.array(pos)
