"""2D embeddings of a distance matrix: Kamada-Kawai stress minimization and Fruchterman-Reingold."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .distance import DistanceMatrix


@dataclass
class EmbedConfig:
    tol: float = 1e-6
    max_iter: int = 5000
    restarts: int = 4
    fallback_step: float = 1e-3
    # FR only
    fr_iterations: int = 500


@dataclass(frozen=True)
class Embedding:
    labels: tuple[str, ...]
    coords: np.ndarray
    stress: float
    iterations: int

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.shape != (len(self.labels), 2):
            raise ValueError("need one (x, y) pair per label")
        if not np.isfinite(coords).all():
            raise ValueError("embedding coordinates must be finite")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "labels", tuple(self.labels))

    def distances(self) -> DistanceMatrix:
        diff = self.coords[:, None, :] - self.coords[None, :, :]
        d = np.sqrt((diff ** 2).sum(axis=2))
        return DistanceMatrix(self.labels, (d + d.T) / 2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "x", "y"])
        for label, (x, y) in zip(self.labels, self.coords):
            w.writerow([label, repr(float(x)), repr(float(y))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Embedding":
        rows = list(csv.DictReader(io.StringIO(text)))
        coords = np.asarray([[float(r["x"]), float(r["y"])] for r in rows]).reshape(-1, 2)
        return cls(tuple(r["label"] for r in rows), coords, float("nan"), 0)


def _checked(d: DistanceMatrix | np.ndarray) -> np.ndarray:
    values = d.values if isinstance(d, DistanceMatrix) else np.asarray(d, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError("distance matrix must be square")
    if len(values) < 2:
        raise ValueError("need at least two items to embed")
    if (values < 0).any() or not np.allclose(values, values.T, rtol=0, atol=1e-12):
        raise ValueError("distance matrix must be symmetric and non-negative")
    return values


def _kk_weights(d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    target = np.maximum(d, 1e-6 * d.max()) if d.max() > 0 else np.ones_like(d)
    w = 1.0 / target ** 2
    np.fill_diagonal(w, 0.0)
    return target, w


def stress(coords: np.ndarray, d: np.ndarray) -> float:
    """``sum_{i<j} w_ij (|p_i - p_j| - d_ij)^2`` with ``w_ij = 1/d_ij^2``."""
    target, w = _kk_weights(np.asarray(d, dtype=float))
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    return float(0.5 * (w * (dist - target) ** 2).sum())


def stress_gradient(coords: np.ndarray, d: np.ndarray) -> np.ndarray:
    target, w = _kk_weights(np.asarray(d, dtype=float))
    return _gradient(coords, target, w)


def _gradient(coords, target, w):
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    np.fill_diagonal(dist, 1.0)
    coef = 2.0 * w * (dist - target) / dist
    np.fill_diagonal(coef, 0.0)
    return (coef[:, :, None] * diff).sum(axis=1)


def _stress(coords, target, w):
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    return float(0.5 * (w * (dist - target) ** 2).sum())


def _kk_run(x: np.ndarray, target, w, config: EmbedConfig):
    """Gradient descent with Barzilai-Borwein steps; keeps the best iterate seen."""
    g = _gradient(x, target, w)
    best_x, best_s = x.copy(), _stress(x, target, w)
    step = config.fallback_step
    it = 0
    for it in range(1, config.max_iter + 1):
        if np.abs(g).max() < config.tol:
            break
        x_new = x - step * g
        g_new = _gradient(x_new, target, w)
        s, y = (x_new - x).ravel(), (g_new - g).ravel()
        sy = float(s @ y)
        step = float(s @ s) / sy if sy > 0 else config.fallback_step
        x, g = x_new, g_new
        cur = _stress(x, target, w)
        if cur < best_s:
            best_x, best_s = x.copy(), cur
    return best_x, best_s, it


def kamada_kawai(d, config: EmbedConfig | None = None, rng: np.random.Generator | None = None) -> Embedding:
    """Best-of-``config.restarts`` stress-minimizing layout from random starts."""
    config = config or EmbedConfig()
    rng = rng if rng is not None else np.random.default_rng(0)
    values = _checked(d)
    labels = d.labels if isinstance(d, DistanceMatrix) else tuple(str(i) for i in range(len(values)))
    target, w = _kk_weights(values)
    scale = values.max() if values.max() > 0 else 1.0
    best = None
    for _ in range(max(1, config.restarts)):
        x0 = rng.random((len(values), 2)) * scale
        x, s, it = _kk_run(x0, target, w, config)
        if best is None or s < best[1]:
            best = (x, s, it)
    x, s, it = best
    return Embedding(labels, x - x.mean(axis=0), s, it)


def fruchterman_reingold(d, config: EmbedConfig | None = None, rng: np.random.Generator | None = None) -> Embedding:
    """Force-directed layout over the complete graph, attraction weighted by ``1/d_ij``.

    Every pair repels with ``k^2/r`` and attracts with ``r^2 / (k * d_ij)``,
    where ``k`` is the mean target distance. Displacements are capped by a
    temperature that cools linearly to zero.
    """
    config = config or EmbedConfig()
    rng = rng if rng is not None else np.random.default_rng(0)
    values = _checked(d)
    labels = d.labels if isinstance(d, DistanceMatrix) else tuple(str(i) for i in range(len(values)))
    n = len(values)
    scale = values.max() if values.max() > 0 else 1.0
    target = np.maximum(values, 1e-6 * scale)
    k = float(values[np.triu_indices(n, 1)].mean()) or 1.0
    inv = 1.0 / target
    np.fill_diagonal(inv, 0.0)
    x = rng.random((n, 2)) * scale
    iters = config.fr_iterations
    t0 = 0.1 * scale
    for it in range(iters):
        diff = x[:, None, :] - x[None, :, :]
        r = np.sqrt((diff ** 2).sum(axis=2))
        np.fill_diagonal(r, 1.0)
        r = np.maximum(r, 1e-9 * scale)
        force = k * k / r ** 2 - r * inv / k
        np.fill_diagonal(force, 0.0)
        disp = (force[:, :, None] * diff).sum(axis=1)
        length = np.maximum(np.sqrt((disp ** 2).sum(axis=1)), 1e-12)
        temp = t0 * (1.0 - it / iters)
        x = x + disp / length[:, None] * np.minimum(length, temp)[:, None]
    # report the KK stress of the final layout so the two algorithms are comparable
    tgt, w = _kk_weights(values)
    return Embedding(labels, x - x.mean(axis=0), _stress(x, tgt, w), iters)
