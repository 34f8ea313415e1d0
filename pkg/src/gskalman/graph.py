"""Graph topology, Laplacian spectrum, and graph Fourier transforms.

A weighted undirected graph is represented by its symmetric nonnegative
adjacency matrix.  The Laplacian ``L = D - A`` (D the diagonal degree matrix)
is symmetric PSD for such graphs; its orthonormal eigendecomposition
``L = V diag(delta) V^T`` supplies the graph Fourier basis.  Forward GFT is
``V^T x``, inverse is ``V xv``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    ConnectivityError,
    DomainError,
    GenerationError,
    InputError,
    IoError,
    ShapeError,
)

_SYM_TOL = 1e-12


class SignalDomain(Enum):
    VERTEX = "vertex"
    SPECTRAL = "spectral"


def _check_adjacency(weights: np.ndarray) -> np.ndarray:
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
        raise ShapeError(f"adjacency must be square, got {weights.shape}")
    if not np.allclose(weights, weights.T, atol=_SYM_TOL, rtol=0.0):
        raise ShapeError("adjacency must be symmetric")
    if np.any(np.diag(weights) != 0.0):
        raise ShapeError("adjacency diagonal must be zero (no self loops)")
    if np.any(weights < 0.0):
        raise ShapeError("adjacency weights must be nonnegative")
    return weights


def is_connected(weights: np.ndarray) -> bool:
    """BFS reachability over nonzero edges from vertex 0."""
    n = weights.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in np.nonzero(weights[i])[0]:
            if not seen[j]:
                seen[j] = True
                queue.append(j)
    return bool(seen.all())


@dataclass(frozen=True)
class GraphTopology:
    """Undirected weighted graph on ``n`` vertices.

    ``weights`` is the symmetric nonnegative adjacency matrix with zero
    diagonal; the graph must be connected.  ``seed`` records the generator
    seed when the topology was produced randomly (-1 for hand-built graphs).
    """

    n: int
    weights: np.ndarray
    seed: int = -1

    def __post_init__(self):
        w = _check_adjacency(self.weights)
        if self.n < 1 or w.shape[0] != self.n:
            raise ShapeError(f"vertex count {self.n} does not match adjacency {w.shape}")
        object.__setattr__(self, "weights", w)
        if not is_connected(w):
            raise ConnectivityError("graph is disconnected")


@dataclass(frozen=True)
class GftBasis:
    """Orthonormal Laplacian eigenbasis ``v`` with ascending eigenvalues ``delta``."""

    v: np.ndarray
    delta: np.ndarray

    @property
    def n(self) -> int:
        return self.v.shape[0]


@dataclass(frozen=True)
class GraphSignal:
    """Length-n real signal tagged with its domain (vertex or spectral)."""

    values: np.ndarray
    domain: SignalDomain = SignalDomain.VERTEX

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.ndim != 1:
            raise ShapeError("graph signal must be a 1-d vector")


def build_laplacian(topology: GraphTopology) -> np.ndarray:
    """Combinatorial Laplacian ``L = D - A`` with D the weighted degree matrix."""
    if not is_connected(topology.weights):
        raise ConnectivityError("graph is disconnected")
    a = topology.weights
    return np.diag(a.sum(axis=1)) - a


def eigendecompose(laplacian: np.ndarray) -> GftBasis:
    """Eigendecompose a symmetric PSD Laplacian into a GFT basis.

    Eigenvalues come back ascending.  Each eigenvector's sign is fixed so its
    first component of magnitude above 1e-12 is positive, making repeated runs
    bit-reproducible.
    """
    laplacian = np.asarray(laplacian, dtype=float)
    if laplacian.ndim != 2 or laplacian.shape[0] != laplacian.shape[1]:
        raise ShapeError(f"laplacian must be square, got {laplacian.shape}")
    if not np.allclose(laplacian, laplacian.T, atol=1e-10, rtol=0.0):
        raise ShapeError("laplacian must be symmetric")
    delta, v = np.linalg.eigh(laplacian)
    for k in range(v.shape[1]):
        col = v[:, k]
        idx = np.nonzero(np.abs(col) > 1e-12)[0]
        if idx.size and col[idx[0]] < 0.0:
            v[:, k] = -col
    return GftBasis(v=v, delta=delta)


def identity_basis(n: int) -> GftBasis:
    """Trivial basis making GFT a no-op (used when graph processing is off)."""
    return GftBasis(v=np.eye(n), delta=np.zeros(n))


def gft(signal: GraphSignal, basis: GftBasis) -> GraphSignal:
    """Forward transform ``V^T x`` from vertex to spectral domain."""
    if signal.domain is not SignalDomain.VERTEX:
        raise DomainError("gft expects a vertex-domain signal")
    if signal.values.shape[0] != basis.n:
        raise ShapeError("signal length does not match basis")
    return GraphSignal(basis.v.T @ signal.values, SignalDomain.SPECTRAL)


def igft(signal: GraphSignal, basis: GftBasis) -> GraphSignal:
    """Inverse transform ``V xv`` from spectral to vertex domain."""
    if signal.domain is not SignalDomain.SPECTRAL:
        raise DomainError("igft expects a spectral-domain signal")
    if signal.values.shape[0] != basis.n:
        raise ShapeError("signal length does not match basis")
    return GraphSignal(basis.v @ signal.values, SignalDomain.VERTEX)


def gft_matrix(m: np.ndarray, basis: GftBasis) -> np.ndarray:
    """Conjugate a matrix into the spectral domain: ``V^T M V``."""
    m = np.asarray(m, dtype=float)
    if m.shape != (basis.n, basis.n):
        raise ShapeError(f"matrix shape {m.shape} does not match basis size {basis.n}")
    return basis.v.T @ m @ basis.v


@dataclass(frozen=True)
class ErdosRenyi:
    p: float


@dataclass(frozen=True)
class Ring:
    pass


@dataclass(frozen=True)
class RandomGeometric:
    radius: float


_MAX_RETRIES = 1000


def generate_topology(n: int, model, seed: int) -> GraphTopology:
    """Generate a connected random topology, deterministic per seed.

    ``model`` is one of :class:`ErdosRenyi`, :class:`Ring`,
    :class:`RandomGeometric`.  Random models draw edge weights from
    uniform(0.5, 1.5); the ring uses unit weights.  Disconnected draws are
    retried with the same stream up to 1000 times.
    """
    if n < 2:
        raise InputError("need at least 2 vertices")
    if isinstance(model, Ring):
        w = np.zeros((n, n))
        for i in range(n):
            j = (i + 1) % n
            w[i, j] = w[j, i] = 1.0
        return GraphTopology(n=n, weights=w, seed=seed)

    rng = np.random.default_rng(seed)
    for _ in range(_MAX_RETRIES):
        if isinstance(model, ErdosRenyi):
            if not 0.0 < model.p <= 1.0:
                raise InputError(f"edge probability {model.p} outside (0, 1]")
            mask = rng.random((n, n)) < model.p
        elif isinstance(model, RandomGeometric):
            if model.radius <= 0.0:
                raise InputError("geometric radius must be positive")
            pts = rng.random((n, 2))
            d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
            mask = d < model.radius
        else:
            raise InputError(f"unknown topology model {model!r}")
        mask = np.triu(mask, k=1)
        weights = np.where(mask, rng.uniform(0.5, 1.5, (n, n)), 0.0)
        weights = weights + weights.T
        if is_connected(weights):
            return GraphTopology(n=n, weights=weights, seed=seed)
    raise GenerationError(
        f"could not generate a connected graph in {_MAX_RETRIES} attempts"
    )


def save_topology(topology: GraphTopology, path) -> None:
    """Write the edge-list text format: header ``n <count>``, then ``i j w`` lines.

    Weights are written with 17 significant digits so a load reproduces the
    adjacency exactly.
    """
    lines = []
    edges = [
        (i, j, topology.weights[i, j])
        for i in range(topology.n)
        for j in range(i + 1, topology.n)
        if topology.weights[i, j] != 0.0
    ]
    lines.append(f"{topology.n} {len(edges)}")
    for i, j, w in edges:
        lines.append(f"{i} {j} {w:.17g}")
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def load_topology(path, seed: int = -1) -> GraphTopology:
    """Read a topology from the edge-list text format."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(str(exc)) from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise IoError(f"empty topology file {path}")
    header = lines[0].split()
    n, count = int(header[0]), int(header[1])
    if len(lines) - 1 != count:
        raise IoError(f"expected {count} edges, found {len(lines) - 1}")
    w = np.zeros((n, n))
    for ln in lines[1:]:
        si, sj, sw = ln.split()
        i, j = int(si), int(sj)
        w[i, j] = w[j, i] = float(sw)
    return GraphTopology(n=n, weights=w, seed=seed)
