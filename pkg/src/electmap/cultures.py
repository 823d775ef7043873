"""Statistical cultures: seeded samplers for synthetic ordinal elections.

Every sampler takes an explicit ``numpy.random.Generator``. Use
:func:`make_rng` for a seeded source and :func:`child_rng` to derive
independent streams for concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .core import Election, Vote

KINDS = (
    "ic", "urn", "mallows", "conitzer", "walsh", "spoc",
    "single_crossing", "gs", "cube", "sphere",
)


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def child_rng(seed: int, stream: int) -> np.random.Generator:
    """Independent generator for stream ``stream`` of a parent seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


@dataclass(frozen=True)
class CultureSpec:
    """A culture with its parameters, e.g. ``CultureSpec("mallows", {"normphi": 0.5})``.

    ``params`` values may be the strings ``"gamma"`` (urn) or ``"uniform"``
    (mallows) in dataset recipes; those are resolved to numbers by
    :func:`electmap.io.resolve_spec` before sampling.
    """

    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown culture {self.kind!r}; expected one of {', '.join(KINDS)}")
        p = self.params
        if self.kind == "urn" and _is_num(p.get("alpha", 0.0)) and float(p.get("alpha", 0.0)) < 0:
            raise ValueError("urn alpha must be non-negative")
        if self.kind == "mallows":
            phi = p.get("normphi", 0.5)
            if _is_num(phi) and not 0.0 <= float(phi) <= 1.0:
                raise ValueError("mallows normphi must lie in [0, 1]")
        if self.kind in ("cube", "sphere") and int(p.get("dim", 1)) < 1:
            raise ValueError("euclidean dimension must be at least 1")
        if self.kind == "gs" and p.get("tree", "balanced") not in ("balanced", "caterpillar"):
            raise ValueError("group-separable tree must be 'balanced' or 'caterpillar'")

    @classmethod
    def parse(cls, text: str) -> "CultureSpec":
        """Parse the canonical text form (``mallows:normphi=0.5``, ``gs:balanced``, ``ic``...)."""
        text = text.strip()
        kind, _, rest = text.partition(":")
        kind = kind.strip().lower()
        params: dict[str, Any] = {}
        for item in filter(None, (s.strip() for s in rest.split(";"))):
            if "=" in item:
                key, value = (s.strip() for s in item.split("=", 1))
                params[key] = _parse_value(value)
            elif kind == "gs":
                params["tree"] = item
            else:
                raise ValueError(f"cannot parse culture parameter {item!r} in {text!r}")
        return cls(kind, params)

    def __str__(self) -> str:
        if self.kind == "gs":
            return f"gs:{self.params.get('tree', 'balanced')}"
        if not self.params:
            return self.kind
        return self.kind + ":" + ";".join(f"{k}={v}" for k, v in sorted(self.params.items()))


def _is_num(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _parse_value(value: str):
    for conv in (int, float):
        try:
            return conv(value)
        except ValueError:
            pass
    return value


def sample(spec: CultureSpec, m: int, n: int, rng: np.random.Generator) -> Election:
    """Draw an election with ``m`` candidates and ``n`` voters from ``spec``."""
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    kind, p = spec.kind, spec.params
    if kind == "ic":
        votes = np.argsort(rng.random((n, m)), axis=1)
    elif kind == "urn":
        state: list[np.ndarray] = []
        votes = [sample_urn_vote(m, float(p.get("alpha", 0.0)), state, rng) for _ in range(n)]
    elif kind == "mallows":
        phi = phi_from_norm_phi(m, float(p.get("normphi", 0.5))) if m > 1 else 0.0
        center = rng.permutation(m)
        votes = sample_mallows_votes(m, phi, center, n, rng)
    elif kind in ("conitzer", "walsh"):
        axis = rng.permutation(m)
        draw = sample_sp_conitzer_vote if kind == "conitzer" else sample_sp_walsh_vote
        votes = [draw(axis, rng) for _ in range(n)]
    elif kind == "spoc":
        axis = rng.permutation(m)
        votes = [sample_spoc_vote(axis, rng) for _ in range(n)]
    elif kind == "single_crossing":
        return sample_single_crossing_election(m, n, rng)
    elif kind == "gs":
        if m < 2:
            raise ValueError("group-separable elections need at least 2 candidates")
        tree = balanced_tree(m) if p.get("tree", "balanced") == "balanced" else caterpillar_tree(m)
        votes = [sample_group_separable_vote(tree, rng) for _ in range(n)]
    elif kind == "cube":
        return sample_euclidean_election(m, n, int(p.get("dim", 1)), "cube", rng)
    else:
        return sample_euclidean_election(m, n, int(p.get("dim", 2)), "sphere", rng)
    return Election(np.asarray(votes, dtype=np.int64))


def sample_urn_vote(m: int, alpha: float, urn_state: list, rng: np.random.Generator) -> np.ndarray:
    """One Polya-Eggenberger urn draw; ``urn_state`` is the list of votes drawn so far."""
    k = len(urn_state)
    if k and rng.random() < k * alpha / (1.0 + k * alpha):
        vote = urn_state[rng.integers(k)]
    else:
        vote = rng.permutation(m)
    urn_state.append(vote)
    return vote


def expected_swap_distance(m: int, phi: float) -> float:
    """Expected swap distance between a Mallows(phi) vote and its center."""
    if phi <= 0.0:
        return 0.0
    total = 0.0
    for j in range(1, m + 1):
        w = phi ** np.arange(j)
        total += float((np.arange(j) * w).sum() / w.sum())
    return total


def phi_from_norm_phi(m: int, norm_phi: float, tol: float = 1e-10) -> float:
    """Dispersion phi whose expected normalized swap distance to the center is ``norm_phi / 2``."""
    if not 0.0 <= norm_phi <= 1.0:
        raise ValueError("norm_phi must lie in [0, 1]")
    if m < 2 or norm_phi == 0.0:
        return 0.0
    if norm_phi == 1.0:
        return 1.0
    target = norm_phi / 2.0
    max_swaps = m * (m - 1) / 2.0
    lo, hi = 0.0, 1.0
    while True:
        mid = 0.5 * (lo + hi)
        value = expected_swap_distance(m, mid) / max_swaps
        if abs(value - target) < tol or hi - lo < 1e-15:
            return mid
        if value < target:
            lo = mid
        else:
            hi = mid


def _insertion_probabilities(m: int, phi: float) -> list[np.ndarray]:
    # candidate at center rank j (1-based) lands at slot r in 0..j-1 w.p. phi^(j-1-r) / sum
    out = []
    for j in range(1, m + 1):
        w = phi ** np.arange(j - 1, -1, -1, dtype=float) if phi > 0 else np.eye(1, j, j - 1).ravel()
        out.append(w / w.sum())
    return out


def sample_mallows_votes(m: int, phi: float, center: Vote, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Mallows votes around ``center`` by repeated insertion (vectorized over voters)."""
    center = np.asarray(center, dtype=np.int64)
    probs = _insertion_probabilities(m, phi)
    ranks = np.zeros((n, m), dtype=np.int64)
    for j in range(m):
        r = rng.choice(j + 1, size=n, p=probs[j]) if j else np.zeros(n, dtype=np.int64)
        ranks[:, :j] += ranks[:, :j] >= r[:, None]
        ranks[:, j] = r
    # ranks[:, j] is the final position of center[j]
    votes = np.empty_like(ranks)
    votes[np.arange(n)[:, None], ranks] = center[None, :]
    return votes


def sample_mallows_vote(m: int, phi: float, center: Vote, rng: np.random.Generator) -> np.ndarray:
    return sample_mallows_votes(m, phi, center, 1, rng)[0]


def sample_sp_conitzer_vote(axis: Vote, rng: np.random.Generator) -> np.ndarray:
    axis = np.asarray(axis)
    m = axis.size
    lo = hi = int(rng.integers(m))
    out = [axis[lo]]
    while len(out) < m:
        if lo == 0 or (hi < m - 1 and rng.random() < 0.5):
            hi += 1
            out.append(axis[hi])
        else:
            lo -= 1
            out.append(axis[lo])
    return np.asarray(out, dtype=np.int64)


def sample_sp_walsh_vote(axis: Vote, rng: np.random.Generator) -> np.ndarray:
    """Uniform single-peaked vote: fill positions from the bottom with either end of the axis."""
    axis = np.asarray(axis)
    m = axis.size
    lo, hi = 0, m - 1
    out = np.empty(m, dtype=np.int64)
    for pos in range(m - 1, -1, -1):
        if rng.random() < 0.5:
            out[pos] = axis[lo]
            lo += 1
        else:
            out[pos] = axis[hi]
            hi -= 1
    return out


def sample_spoc_vote(circular_axis: Vote, rng: np.random.Generator) -> np.ndarray:
    """Conitzer-style growth on a circular axis."""
    axis = np.asarray(circular_axis)
    m = axis.size
    top = int(rng.integers(m))
    left = right = top
    out = [axis[top]]
    while len(out) < m:
        if len(out) == m - 1 or rng.random() < 0.5:
            right = (right + 1) % m
            out.append(axis[right])
        else:
            left = (left - 1) % m
            out.append(axis[left])
    return np.asarray(out, dtype=np.int64)


def single_crossing_domain(m: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Random maximal single-crossing domain of ``m(m-1)/2 + 1`` orders, in domain order."""
    if m < 2:
        raise ValueError("single-crossing domains need at least 2 candidates")
    v = list(range(m))
    where = list(range(m))
    domain = [np.array(v)]
    for _ in range(m * (m - 1) // 2):
        while True:
            cj = int(rng.integers(m))
            p = where[cj]
            if p == 0:
                continue
            ci = v[p - 1]
            if ci < cj:
                break
        v[p - 1], v[p] = cj, ci
        where[cj], where[ci] = p - 1, p
        domain.append(np.array(v))
    names = rng.permutation(m)
    return [names[d] for d in domain]


def sample_single_crossing_election(m: int, n: int, rng: np.random.Generator) -> Election:
    domain = single_crossing_domain(m, rng)
    picks = rng.integers(len(domain), size=n)
    return Election(np.asarray([domain[i] for i in picks], dtype=np.int64))


# Trees are nested tuples; leaves are ints.

def balanced_tree(m: int):
    """Complete binary tree over ``m`` leaves (last level filled from the left), leaves 0..m-1 in order."""
    if m < 1:
        raise ValueError("a tree needs at least one leaf")
    counter = iter(range(m))

    def build(node: int):
        # heap numbering: nodes m..2m-1 are the leaves; DFS visits them left to right
        if node >= m:
            return next(counter)
        return (build(2 * node), build(2 * node + 1))

    return build(1)


def caterpillar_tree(m: int):
    """Binary caterpillar: leaf 0 hangs off the root, leaf 1 off the next node, and so on."""
    if m < 1:
        raise ValueError("a tree needs at least one leaf")
    tree: Any = m - 1
    for c in range(m - 2, -1, -1):
        tree = (c, tree)
    return tree


def frontier(tree) -> list[int]:
    if isinstance(tree, tuple):
        return [leaf for child in tree for leaf in frontier(child)]
    return [tree]


def sample_group_separable_vote(tree, rng: np.random.Generator) -> np.ndarray:
    """Frontier of ``tree`` after reversing each internal node's children with probability 1/2."""
    out: list[int] = []

    def walk(node):
        if not isinstance(node, tuple):
            out.append(node)
            return
        children = node[::-1] if rng.random() < 0.5 else node
        for child in children:
            walk(child)

    walk(tree)
    return np.asarray(out, dtype=np.int64)


def euclidean_points(k: int, dim: int, shape: str, rng: np.random.Generator) -> np.ndarray:
    if shape == "cube":
        return rng.uniform(-1.0, 1.0, size=(k, dim))
    if shape == "sphere":
        g = rng.standard_normal(size=(k, dim))
        return g / np.linalg.norm(g, axis=1, keepdims=True)
    raise ValueError(f"unknown shape {shape!r}")


def euclidean_votes(candidates: np.ndarray, voters: np.ndarray) -> np.ndarray:
    """Rank candidates by distance to each voter; ties go to the smaller candidate index."""
    dist = np.linalg.norm(voters[:, None, :] - candidates[None, :, :], axis=2)
    return np.argsort(dist, axis=1, kind="stable")


def sample_euclidean_election(m: int, n: int, dim: int, shape: str, rng: np.random.Generator) -> Election:
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    candidates = euclidean_points(m, dim, shape, rng)
    voters = euclidean_points(n, dim, shape, rng)
    return Election(euclidean_votes(candidates, voters))


# Structure verifiers (used by tests and by callers wanting certificates).

def is_single_peaked(vote: Vote, axis: Vote) -> bool:
    """Every prefix of ``vote`` occupies a contiguous interval of ``axis``."""
    where = {int(c): i for i, c in enumerate(axis)}
    lo = hi = where[int(vote[0])]
    for c in vote[1:]:
        p = where[int(c)]
        if p == lo - 1:
            lo = p
        elif p == hi + 1:
            hi = p
        else:
            return False
    return True


def is_spoc(vote: Vote, axis: Vote) -> bool:
    """Every prefix of ``vote`` is an interval of the circular ``axis``."""
    m = len(axis)
    where = {int(c): i for i, c in enumerate(axis)}
    left = right = where[int(vote[0])]
    for c in vote[1:]:
        p = where[int(c)]
        if p == (right + 1) % m:
            right = p
        elif p == (left - 1) % m:
            left = p
        else:
            return False
    return True


def is_single_crossing(votes: Sequence[Vote]) -> bool:
    """In the given order of votes, each candidate pair changes relative order at most once."""
    if len(votes) <= 1:
        return True
    pos = np.asarray([np.argsort(v) for v in votes])
    m = pos.shape[1]
    for a in range(m):
        for b in range(a + 1, m):
            ahead = pos[:, a] < pos[:, b]
            if np.count_nonzero(ahead[1:] != ahead[:-1]) > 1:
                return False
    return True


def is_consistent_with_tree(vote: Vote, tree) -> bool:
    """Whether ``vote`` is a frontier of ``tree`` under some set of child reversals."""
    vote = [int(c) for c in vote]

    def match(node, start: int) -> int | None:
        # returns end index if the subtree's frontier can occupy vote[start:end]
        if not isinstance(node, tuple):
            return start + 1 if vote[start] == node else None
        for order in (node, node[::-1]):
            i = start
            for child in order:
                i = match(child, i)
                if i is None:
                    break
            else:
                return i
        return None

    return match(tree, 0) == len(vote)

