"""Candidate interaction pairs, by brute force or through a periodic cell list.

Both enumerations feed the same kernel, which filters by distance and
sorts pairs by (j, k); the downstream reduction is therefore identical and
the two methods agree bit for bit.
"""

from __future__ import annotations

import math

import numpy as np

from aniso_swarm.dynamics.models import NeighborMethod, wrap_positions


class CellGrid:
    """Square grid of ``cells_per_side**2`` cells of side ``cell_size >= r_cutoff``.

    Particles are stored cell by cell (``order``), with ``starts[c]`` and
    ``counts[c]`` delimiting the members of cell ``c``.
    """

    def __init__(self, positions: np.ndarray, r_cutoff: float, domain_size: float):
        self.domain_size = domain_size
        self.cells_per_side = max(1, math.floor(domain_size / r_cutoff))
        self.cell_size = domain_size / self.cells_per_side
        n = self.cells_per_side

        coords = np.floor(wrap_positions(positions, domain_size) / self.cell_size).astype(np.int64)
        coords = np.clip(coords, 0, n - 1)
        self.cell_coords = coords
        self.cell_of = coords[:, 0] * n + coords[:, 1]

        self.order = np.argsort(self.cell_of, kind="stable")
        self.counts = np.bincount(self.cell_of, minlength=n * n)
        self.starts = np.concatenate([[0], np.cumsum(self.counts)[:-1]])

    def members(self, cell: int) -> np.ndarray:
        return self.order[self.starts[cell] : self.starts[cell] + self.counts[cell]]

    def neighbor_offsets(self) -> list[tuple[int, int]]:
        """The 3x3 block of offsets, deduplicated when the grid has fewer than three cells per side."""
        n = self.cells_per_side
        return sorted({(dx % n, dy % n) for dx in (-1, 0, 1) for dy in (-1, 0, 1)})

    def candidate_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.cells_per_side
        n_particles = self.cell_of.shape[0]
        js, ks = [], []
        for dx, dy in self.neighbor_offsets():
            neighbor = ((self.cell_coords[:, 0] + dx) % n) * n + (self.cell_coords[:, 1] + dy) % n
            counts = self.counts[neighbor]
            j = np.repeat(np.arange(n_particles), counts)
            first = np.repeat(np.cumsum(counts) - counts, counts)
            within = np.arange(j.shape[0]) - first
            k = self.order[np.repeat(self.starts[neighbor], counts) + within]
            js.append(j)
            ks.append(k)
        j = np.concatenate(js)
        k = np.concatenate(ks)
        distinct = j != k
        return j[distinct], k[distinct]


def brute_force_pairs(n_particles: int) -> tuple[np.ndarray, np.ndarray]:
    j, k = np.nonzero(~np.eye(n_particles, dtype=bool))
    return j, k


def candidate_pairs(
    positions: np.ndarray, r_cutoff: float, domain_size: float, method: NeighborMethod
) -> tuple[np.ndarray, np.ndarray]:
    if method is NeighborMethod.BRUTE_FORCE:
        return brute_force_pairs(positions.shape[0])
    return CellGrid(positions, r_cutoff, domain_size).candidate_pairs()
