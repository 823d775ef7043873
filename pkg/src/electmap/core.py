"""Election data types, position/frequency matrices and vote-level distances.

Candidates are 0-based integer indices. A vote is stored rank-to-candidate:
``vote[i]`` is the candidate ranked at position ``i + 1``. Anything shown to a
user (files, reports) uses 1-based positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

Vote = Sequence[int]


def validate_vote(vote: Vote, m: int | None = None) -> np.ndarray:
    """Return ``vote`` as an int array, raising ValueError unless it is a permutation."""
    arr = np.asarray(vote, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("a vote must be one-dimensional")
    if m is not None and arr.size != m:
        raise ValueError(f"vote has length {arr.size}, expected {m}")
    if arr.size == 0 or not np.array_equal(np.sort(arr), np.arange(arr.size)):
        raise ValueError(f"vote {list(arr)} is not a permutation of 0..{arr.size - 1}")
    return arr


def inverse(vote: Vote) -> np.ndarray:
    """Candidate-to-position map (0-based) of a rank-to-candidate vote."""
    arr = np.asarray(vote, dtype=np.int64)
    pos = np.empty_like(arr)
    pos[arr] = np.arange(arr.size)
    return pos


@dataclass(frozen=True)
class Election:
    """An ordinal election: ``votes[v, i]`` is the candidate voter ``v`` ranks at position ``i + 1``."""

    votes: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        votes = np.array(self.votes, dtype=np.int64, copy=True)
        if votes.ndim != 2 or votes.shape[0] < 1 or votes.shape[1] < 1:
            raise ValueError("an election needs at least one vote over at least one candidate")
        m = votes.shape[1]
        if not (np.sort(votes, axis=1) == np.arange(m)).all():
            bad = int(np.nonzero(~(np.sort(votes, axis=1) == np.arange(m)).all(axis=1))[0][0])
            raise ValueError(f"vote {bad} is not a permutation of 0..{m - 1}")
        votes.setflags(write=False)
        object.__setattr__(self, "votes", votes)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != m:
                raise ValueError(f"got {len(labels)} candidate labels for {m} candidates")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_votes(cls, votes: Sequence[Vote], labels: Sequence[str] | None = None) -> "Election":
        return cls(np.asarray([list(v) for v in votes], dtype=np.int64), None if labels is None else tuple(labels))

    @property
    def num_candidates(self) -> int:
        return int(self.votes.shape[1])

    @property
    def num_voters(self) -> int:
        return int(self.votes.shape[0])

    def positions(self) -> np.ndarray:
        """``positions()[v, c]`` is the 0-based position of candidate ``c`` in vote ``v``."""
        n, m = self.votes.shape
        pos = np.empty_like(self.votes)
        pos[np.arange(n)[:, None], self.votes] = np.arange(m)
        return pos

    def __eq__(self, other):
        if not isinstance(other, Election):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.votes, other.votes)

    def __hash__(self):
        return hash((self.votes.tobytes(), self.votes.shape, self.labels))


@dataclass(frozen=True)
class PositionMatrix:
    """``counts[i, c]`` is the number of voters ranking candidate ``c`` at position ``i + 1``."""

    counts: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64, copy=True)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1] or counts.shape[0] < 1:
            raise ValueError("a position matrix must be square and non-empty")
        if (counts < 0).any():
            raise ValueError("position matrix entries must be non-negative")
        rows, cols = counts.sum(axis=1), counts.sum(axis=0)
        n = int(rows[0])
        if n < 1 or (rows != n).any() or (cols != n).any():
            raise ValueError("every row and column of a position matrix must sum to the same positive n")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def m(self) -> int:
        return int(self.counts.shape[0])

    @property
    def n(self) -> int:
        return int(self.counts[0].sum())

    def __eq__(self, other):
        if not isinstance(other, PositionMatrix):
            return NotImplemented
        return np.array_equal(self.counts, other.counts)

    def __hash__(self):
        return hash(self.counts.tobytes())


@dataclass(frozen=True)
class FrequencyMatrix:
    """Bistochastic matrix with exact rational entries ``numer[i, c] / denom``.

    Rows are positions and columns are candidates, as in :class:`PositionMatrix`.
    The fraction is kept reduced so equal matrices compare equal.
    """

    numer: np.ndarray
    denom: int = 1
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        numer = np.array(self.numer, dtype=object, copy=True)
        if numer.ndim != 2 or numer.shape[0] != numer.shape[1] or numer.shape[0] < 1:
            raise ValueError("a frequency matrix must be square and non-empty")
        denom = int(self.denom)
        if denom <= 0:
            raise ValueError("denominator must be positive")
        numer = np.vectorize(int, otypes=[object])(numer)
        if any(x < 0 for x in numer.flat):
            raise ValueError("frequency matrix entries must be non-negative")
        if any(s != denom for s in numer.sum(axis=0)) or any(s != denom for s in numer.sum(axis=1)):
            raise ValueError("frequency matrix is not bistochastic")
        g = denom
        for x in numer.flat:
            g = gcd(g, x)
            if g == 1:
                break
        numer = (numer // g).astype(np.int64)
        numer.setflags(write=False)
        object.__setattr__(self, "numer", numer)
        object.__setattr__(self, "denom", denom // g)

    @classmethod
    def from_fractions(cls, rows, label: str | None = None) -> "FrequencyMatrix":
        """Build from a nested sequence of numbers convertible to Fraction (ints, Fractions, 'p/q' strings)."""
        fr = [[Fraction(x) for x in row] for row in rows]
        den = 1
        for row in fr:
            for x in row:
                den = den * x.denominator // gcd(den, x.denominator)
        numer = [[int(x * den) for x in row] for row in fr]
        return cls(np.array(numer, dtype=object), den, label)

    @property
    def m(self) -> int:
        return int(self.numer.shape[0])

    def __getitem__(self, idx) -> Fraction:
        i, j = idx
        return Fraction(int(self.numer[i, j]), self.denom)

    def fractions(self) -> list[list[Fraction]]:
        return [[Fraction(int(x), self.denom) for x in row] for row in self.numer]

    def to_float(self) -> np.ndarray:
        return self.numer / self.denom

    def column(self, c: int) -> list[Fraction]:
        return [Fraction(int(x), self.denom) for x in self.numer[:, c]]

    def permute_columns(self, perm: Sequence[int]) -> "FrequencyMatrix":
        """Matrix whose column ``j`` is column ``perm[j]`` of this one."""
        return FrequencyMatrix(self.numer[:, list(perm)], self.denom, self.label)

    def with_label(self, label: str) -> "FrequencyMatrix":
        return FrequencyMatrix(self.numer, self.denom, label)

    def __eq__(self, other):
        if not isinstance(other, FrequencyMatrix):
            return NotImplemented
        return self.denom == other.denom and np.array_equal(self.numer, other.numer)

    def __hash__(self):
        return hash((self.numer.tobytes(), self.denom))


def position_matrix(e: Election) -> PositionMatrix:
    m = e.num_candidates
    counts = np.zeros((m, m), dtype=np.int64)
    rows = np.broadcast_to(np.arange(m), e.votes.shape)
    np.add.at(counts, (rows, e.votes), 1)
    return PositionMatrix(counts)


def frequency_matrix(e: Election) -> FrequencyMatrix:
    return FrequencyMatrix(position_matrix(e).counts, e.num_voters)


def _pair(u: Vote, v: Vote) -> tuple[np.ndarray, np.ndarray]:
    u, v = np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64)
    if u.shape != v.shape:
        raise ValueError(f"votes have different lengths ({u.size} and {v.size})")
    return u, v


def swap_distance(u: Vote, v: Vote) -> int:
    """Kendall tau distance: number of candidate pairs ordered differently by ``u`` and ``v``."""
    u, v = _pair(u, v)
    # positions in v of u's candidates, read in u's order; count inversions
    seq = inverse(v)[u]
    return int(np.triu(seq[:, None] > seq[None, :], k=1).sum())


def spearman_distance(u: Vote, v: Vote) -> int:
    u, v = _pair(u, v)
    return int(np.abs(inverse(u) - inverse(v)).sum())


def swap_distances_to(center: Vote, votes: np.ndarray) -> np.ndarray:
    """Swap distance from each row of ``votes`` to ``center``, vectorized."""
    votes = np.asarray(votes, dtype=np.int64)
    seq = inverse(center)[votes]
    return np.triu(seq[:, :, None] > seq[:, None, :], k=1).sum(axis=(1, 2))
