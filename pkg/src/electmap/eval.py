"""Embedding accuracy: Pearson correlation, distortion and monotonicity."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .distance import DistanceMatrix


@dataclass(frozen=True)
class EmbeddingSummary:
    """Original and embedded distances over the same items.

    ``normalizer_pair`` holds the indices of the ID and UN items. When it is
    ``None`` both spaces are normalized by their largest pairwise distance
    and ``normalizer_fallback`` is set.
    """

    labels: tuple[str, ...]
    original: DistanceMatrix
    embedded: DistanceMatrix
    normalizer_pair: tuple[int, int] | None = None
    normalizer_fallback: bool = field(init=False, default=False)

    def __post_init__(self):
        if tuple(self.original.labels) != tuple(self.embedded.labels) or tuple(self.labels) != tuple(self.original.labels):
            raise ValueError("original and embedded distance matrices must share labels")
        object.__setattr__(self, "normalizer_fallback", self.normalizer_pair is None)
        a, b = self._norm()
        if a <= 0 or b <= 0:
            raise ValueError("normalizing distances must be strictly positive")

    @classmethod
    def build(cls, original: DistanceMatrix, embedded: DistanceMatrix,
              id_label: str | None = "ID", un_label: str | None = "UN") -> "EmbeddingSummary":
        pair = None
        if id_label in original.labels and un_label in original.labels:
            pair = (original.index(id_label), original.index(un_label))
        return cls(tuple(original.labels), original, embedded, pair)

    def _norm(self) -> tuple[float, float]:
        if self.normalizer_pair is None:
            return float(self.original.values.max()), float(self.embedded.values.max())
        i, j = self.normalizer_pair
        return float(self.original.values[i, j]), float(self.embedded.values[i, j])

    def normalized(self) -> tuple[np.ndarray, np.ndarray]:
        a, b = self._norm()
        return self.original.values / a, self.embedded.values / b


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc, yc = x - x.mean(), y - y.mean()
    den = np.sqrt((xc ** 2).sum() * (yc ** 2).sum())
    if den == 0:
        raise ValueError("PCC is undefined for a constant vector")
    return float((xc * yc).sum() / den)


def pcc(q: EmbeddingSummary) -> float:
    """Pearson correlation between original and embedded pair distances."""
    k = len(q.labels)
    if k < 3:
        raise ValueError("PCC needs at least three items")
    iu = np.triu_indices(k, 1)
    return _pearson(q.original.values[iu], q.embedded.values[iu])


@dataclass(frozen=True)
class Distortion:
    amr: float
    skipped: int


def distortion(q: EmbeddingSummary, x: int | str, min_original: float = 0.0) -> Distortion:
    """Average max/min ratio of normalized distances from item ``x`` to all others.

    Pairs where either normalized distance is zero are skipped and counted.
    With ``min_original > 0`` pairs whose normalized original distance is
    below it are skipped too (e.g. ``0.1`` drops items within a tenth of the
    ID-UN distance).
    """
    i = q.labels.index(x) if isinstance(x, str) else int(x)
    orig, emb = q.normalized()
    others = [j for j in range(len(q.labels)) if j != i]
    a, b = orig[i, others], emb[i, others]
    keep = (a > 0) & (b > 0) & (a >= min_original)
    skipped = int((~((a > 0) & (b > 0))).sum())
    if not keep.any():
        return Distortion(float("nan"), skipped)
    ratio = np.maximum(a[keep], b[keep]) / np.minimum(a[keep], b[keep])
    return Distortion(float(ratio.mean()), skipped)


def monotonicity(q: EmbeddingSummary, x: int | str) -> float:
    """Fraction of pairs {Y, Z} whose order by distance from ``x`` agrees in both spaces."""
    k = len(q.labels)
    if k < 3:
        raise ValueError("monotonicity needs at least three items")
    i = q.labels.index(x) if isinstance(x, str) else int(x)
    others = np.array([j for j in range(k) if j != i])
    a, b = q.original.values[i, others], q.embedded.values[i, others]
    sa = np.sign(a[:, None] - a[None, :])
    sb = np.sign(b[:, None] - b[None, :])
    iu = np.triu_indices(len(others), 1)
    return float((sa[iu] == sb[iu]).mean())


def evaluation_report(q: EmbeddingSummary) -> str:
    """CSV with ``label,AMR,mu`` per item and summary rows (mean, std)."""
    amrs = np.array([distortion(q, i).amr for i in range(len(q.labels))])
    mus = np.array([monotonicity(q, i) for i in range(len(q.labels))])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "AMR", "mu"])
    for label, a, m in zip(q.labels, amrs, mus):
        w.writerow([label, f"{a:.6f}", f"{m:.6f}"])
    w.writerow(["mean", f"{np.nanmean(amrs):.6f}", f"{mus.mean():.6f}"])
    w.writerow(["std", f"{np.nanstd(amrs):.6f}", f"{mus.std():.6f}"])
    w.writerow(["pcc", f"{pcc(q):.6f}", ""])
    if q.normalizer_fallback:
        w.writerow(["normalizer", "max-distance", ""])
    return buf.getvalue()
