"""Earth mover's distance, positionwise distance and pairwise distance matrices.

Costs between two frequency matrices are computed exactly over a common
denominator, so positionwise distances come back as ``Fraction``. The
assignment itself is solved by scipy's Hungarian-type solver on the integer
cost matrix.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import FrequencyMatrix


def emd(x: Sequence, y: Sequence):
    """Earth mover's distance between two equal-mass 1D histograms on positions 1..t.

    Returns a ``Fraction`` when both inputs are rational, otherwise a float.
    """
    if len(x) != len(y):
        raise ValueError(f"vectors have different lengths ({len(x)} and {len(y)})")
    exact = all(isinstance(v, Rational) for v in list(x) + list(y))
    if exact:
        xs, ys = [Fraction(v) for v in x], [Fraction(v) for v in y]
        if any(v < 0 for v in xs + ys):
            raise ValueError("emd needs non-negative vectors")
        if sum(xs) != sum(ys):
            raise ValueError("emd needs vectors of equal total mass")
        total, px, py = Fraction(0), Fraction(0), Fraction(0)
        for a, b in zip(xs, ys):
            px += a
            py += b
            total += abs(px - py)
        return total
    xa, ya = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if (xa < 0).any() or (ya < 0).any():
        raise ValueError("emd needs non-negative vectors")
    if abs(xa.sum() - ya.sum()) > 1e-9:
        raise ValueError("emd needs vectors of equal total mass")
    return float(np.abs(np.cumsum(xa) - np.cumsum(ya)).sum())


def _check_pair(a: FrequencyMatrix, b: FrequencyMatrix):
    if a.m != b.m:
        raise ValueError(f"frequency matrices have different sizes ({a.m} and {b.m})")


def emd_cost_matrix(a: FrequencyMatrix, b: FrequencyMatrix) -> tuple[np.ndarray, int]:
    """Integer matrix ``K`` and denominator ``D`` with ``emd(col_a(c), col_b(d)) = K[c, d] / D``."""
    _check_pair(a, b)
    den = lcm(a.denom, b.denom)
    pa = np.cumsum(a.numer * (den // a.denom), axis=0)
    pb = np.cumsum(b.numer * (den // b.denom), axis=0)
    cost = np.abs(pa[:, :, None] - pb[:, None, :]).sum(axis=0)
    return cost, den


def _assignment_value(cost: np.ndarray) -> int:
    rows, cols = linear_sum_assignment(cost)
    return int(cost[rows, cols].sum())


def lex_min_assignment(cost: np.ndarray) -> list[int]:
    """Lexicographically smallest optimal assignment ``row -> column`` of an integer cost matrix."""
    cost = np.asarray(cost)
    m = cost.shape[0]
    best = _assignment_value(cost)
    assigned: list[int] = []
    fixed = 0
    free = list(range(m))
    for r in range(m):
        for c in sorted(free):
            rest = [x for x in free if x != c]
            sub = cost[np.ix_(range(r + 1, m), rest)]
            tail = _assignment_value(sub) if rest else 0
            if fixed + int(cost[r, c]) + tail == best:
                assigned.append(c)
                fixed += int(cost[r, c])
                free = rest
                break
    return assigned


def positionwise(a: FrequencyMatrix, b: FrequencyMatrix) -> tuple[Fraction, list[int]]:
    """Positionwise distance and the lexicographically smallest optimal candidate matching.

    ``matching[c]`` is the column of ``b`` matched to column ``c`` of ``a``.
    """
    cost, den = emd_cost_matrix(a, b)
    matching = lex_min_assignment(cost)
    value = sum(int(cost[c, d]) for c, d in enumerate(matching))
    return Fraction(value, den), matching


def positionwise_distance(a: FrequencyMatrix, b: FrequencyMatrix) -> Fraction:
    """Positionwise distance alone (skips the tie-breaking of the matching)."""
    cost, den = emd_cost_matrix(a, b)
    return Fraction(_assignment_value(cost), den)


def max_positionwise(m: int) -> Fraction:
    """Distance between identity and uniformity, the normalizer for ``m`` candidates."""
    return Fraction(m * m - 1, 3)


def normalized_positionwise(a: FrequencyMatrix, b: FrequencyMatrix) -> Fraction:
    if a.m < 2:
        _check_pair(a, b)
        return Fraction(0)
    return positionwise_distance(a, b) / max_positionwise(a.m)


@dataclass(frozen=True)
class DistanceMatrix:
    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        labels = tuple(str(x) for x in self.labels)
        if values.ndim != 2 or values.shape != (len(labels), len(labels)):
            raise ValueError("distance matrix must be square and match its labels")
        if not np.allclose(values, values.T, rtol=0, atol=1e-12) or (values < 0).any():
            raise ValueError("distance matrix must be symmetric and non-negative")
        if np.abs(np.diag(values)).max(initial=0.0) > 1e-12:
            raise ValueError("distance matrix must have a zero diagonal")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.labels)
        for row in self.values:
            w.writerow(repr(float(v)) for v in row)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DistanceMatrix":
        rows = list(csv.reader(io.StringIO(text)))
        labels = rows[0]
        values = [[float(v) for v in row] for row in rows[1:] if row]
        return cls(tuple(labels), np.asarray(values))

    def triangle_violation(self) -> float:
        """Largest ``d[i,k] - d[i,j] - d[j,k]`` over all triples (<= 0 for a pseudometric)."""
        d = self.values
        worst = -np.inf
        for j in range(len(d)):
            worst = max(worst, float((d - d[:, j][:, None] - d[j][None, :]).max()))
        return worst


def _pair_values(args) -> list[float]:
    mats, pairs, normalize = args
    out = []
    for i, j in pairs:
        d = normalized_positionwise(mats[i], mats[j]) if normalize else positionwise_distance(mats[i], mats[j])
        out.append(float(d))
    return out


def distance_matrix(
    dataset: Sequence[FrequencyMatrix],
    normalize: bool = True,
    labels: Sequence[str] | None = None,
    workers: int = 1,
) -> DistanceMatrix:
    """All pairwise positionwise distances; the result does not depend on ``workers``."""
    dataset = list(dataset)
    if labels is None:
        labels = [x.label if x.label is not None else str(i) for i, x in enumerate(dataset)]
    if len({x.m for x in dataset}) > 1:
        raise ValueError("all frequency matrices must have the same number of candidates")
    k = len(dataset)
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    values = np.zeros((k, k))
    if workers > 1 and len(pairs) > 1:
        chunks = [pairs[w::workers] for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_pair_values, [(dataset, c, normalize) for c in chunks]))
        for chunk, res in zip(chunks, results):
            for (i, j), v in zip(chunk, res):
                values[i, j] = values[j, i] = v
    else:
        for (i, j), v in zip(pairs, _pair_values((dataset, pairs, normalize))):
            values[i, j] = values[j, i] = v
    return DistanceMatrix(tuple(labels), values)
