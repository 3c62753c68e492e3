"""Eigenvalue clustering for small symmetric operators."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CLUSTER_GAP = 1e-6


@dataclass(frozen=True)
class Cluster:
    value: float
    multiplicity: int
    basis: np.ndarray = field(repr=False)  # columns span the eigenspace


def cluster_eigenvalues(values, vectors=None, gap: float = CLUSTER_GAP) -> list[Cluster]:
    """Group sorted eigenvalues whose consecutive gap is below ``gap * (1 + |lambda|)``.

    Clusters come back in decreasing order of value, which is the order the
    principal curvatures are usually listed in.
    """
    values = np.asarray(values, dtype=float)
    order = np.argsort(values)[::-1]
    values = values[order]
    if vectors is not None:
        vectors = np.asarray(vectors)[:, order]
    groups: list[list[int]] = []
    for i, v in enumerate(values):
        if groups and abs(values[groups[-1][-1]] - v) < gap * (1.0 + abs(v)):
            groups[-1].append(i)
        else:
            groups.append([i])
    out = []
    for idx in groups:
        basis = vectors[:, idx] if vectors is not None else np.zeros((0, len(idx)))
        out.append(Cluster(float(values[idx].mean()), len(idx), basis))
    return out


@dataclass(frozen=True)
class SpectrumReport:
    """Clustered spectrum of a symmetric operator plus named verdicts."""

    eigenvalues: np.ndarray
    clusters: tuple[Cluster, ...]
    symmetry_residual: float
    flags: dict = field(default_factory=dict)

    @classmethod
    def from_matrix(cls, mat: np.ndarray, gap: float = CLUSTER_GAP, flags: dict | None = None):
        mat = np.asarray(mat, dtype=float)
        asym = float(np.abs(mat - mat.T).max()) if mat.size else 0.0
        w, v = np.linalg.eigh((mat + mat.T) / 2.0)
        return cls(np.sort(w)[::-1], tuple(cluster_eigenvalues(w, v, gap)), asym, dict(flags or {}))

    @property
    def pairs(self) -> list[tuple[float, int]]:
        return [(c.value, c.multiplicity) for c in self.clusters]

    @property
    def dim(self) -> int:
        return int(sum(c.multiplicity for c in self.clusters))

    def eigenspace(self, value: float, tol: float = 1e-6) -> np.ndarray:
        for c in self.clusters:
            if abs(c.value - value) < tol * (1.0 + abs(value)):
                return c.basis
        return np.zeros((len(self.eigenvalues), 0))

    def residual_against(self, expected: dict[float, int] | list[tuple[float, int]]) -> float:
        """Sup distance between the sorted eigenvalues and the expected list
        (value, multiplicity); ``inf`` when the total dimension differs."""
        items = expected.items() if isinstance(expected, dict) else expected
        target = np.sort(np.concatenate([[v] * m for v, m in items]) if items else np.zeros(0))[::-1]
        if len(target) != len(self.eigenvalues):
            return float("inf")
        return float(np.abs(self.eigenvalues - target).max()) if len(target) else 0.0

    def multiplicities_match(self, expected: dict[float, int] | list[tuple[float, int]],
                             tol: float = 1e-6) -> bool:
        items = sorted(expected.items() if isinstance(expected, dict) else expected, reverse=True)
        merged: list[list[float]] = []
        for v, m in items:
            if merged and abs(merged[-1][0] - v) < tol * (1.0 + abs(v)):
                merged[-1][1] += m
            else:
                merged.append([v, m])
        if len(merged) != len(self.clusters):
            return False
        return all(abs(c.value - v) < tol * (1.0 + abs(v)) and c.multiplicity == m
                   for c, (v, m) in zip(self.clusters, merged))
