"""Single- and multi-winner scores used to color maps.

Committee scores are dissatisfactions (positions minus one), so lower is better.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable

import numpy as np

from .core import Election

EXACT_CC_BUDGET = 10 ** 6


def borda_scores(e: Election) -> np.ndarray:
    m = e.num_candidates
    return (m - 1 - e.positions()).sum(axis=0)


def pairwise_counts(e: Election) -> np.ndarray:
    """``N[a, b]`` = number of voters ranking ``a`` ahead of ``b``."""
    pos = e.positions()
    return (pos[:, :, None] < pos[:, None, :]).sum(axis=0)


def pairwise_matrix(e: Election) -> list[list[Fraction]]:
    n = e.num_voters
    return [[Fraction(int(x), n) for x in row] for row in pairwise_counts(e)]


def copeland_scores(e: Election) -> list[Fraction]:
    wins = pairwise_counts(e)
    n, m = e.num_voters, e.num_candidates
    scores = []
    for a in range(m):
        s = Fraction(0)
        for b in range(m):
            if a != b:
                if 2 * wins[a, b] > n:
                    s += 1
                elif 2 * wins[a, b] == n:
                    s += Fraction(1, 2)
        scores.append(s)
    return scores


def condorcet_winner(e: Election) -> int | None:
    wins = pairwise_counts(e)
    n, m = e.num_voters, e.num_candidates
    for a in range(m):
        if all(2 * wins[a, b] > n for b in range(m) if b != a):
            return a
    return None


@dataclass(frozen=True)
class Committee:
    members: tuple[int, ...]
    score: Fraction

    def __post_init__(self):
        members = tuple(sorted(int(c) for c in self.members))
        if len(set(members)) != len(members):
            raise ValueError("committee members must be distinct")
        object.__setattr__(self, "members", members)

    @property
    def k(self) -> int:
        return len(self.members)


def _members(e: Election, s) -> list[int]:
    members = list(s.members if isinstance(s, Committee) else s)
    if len(members) > e.num_candidates:
        raise ValueError("committee is larger than the candidate set")
    if any(not 0 <= c < e.num_candidates for c in members):
        raise ValueError("committee contains an unknown candidate")
    return members


def hb_score(e: Election, s) -> Fraction:
    """Harmonic-Borda dissatisfaction: sorted member positions weighted 1, 1/2, 1/3, ..."""
    members = _members(e, s)
    if not members:
        return Fraction(0)
    pos = np.sort(e.positions()[:, members], axis=1)
    per_rank = pos.sum(axis=0)
    return sum((Fraction(int(x), i + 1) for i, x in enumerate(per_rank)), Fraction(0))


def cc_score(e: Election, s) -> int:
    """Chamberlin-Courant dissatisfaction: each voter's best member position minus one."""
    members = _members(e, s)
    if not members:
        raise ValueError("committee must not be empty")
    return int(e.positions()[:, members].min(axis=1).sum())


def _cc_with(pos: np.ndarray, best: np.ndarray, c: int) -> int:
    return int(np.minimum(best, pos[:, c]).sum())


def sequential_cc(e: Election, k: int) -> Committee:
    """Greedily add the candidate that lowers the CC score most.

    Ties go to the candidate with the smaller total position sum, then to the
    lowest index, so unanimous elections yield their top-k prefix.
    """
    m = e.num_candidates
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    pos = e.positions()
    own = pos.sum(axis=0)
    best = np.full(e.num_voters, m, dtype=np.int64)
    chosen: list[int] = []
    for _ in range(k):
        c = min((c for c in range(m) if c not in chosen), key=lambda c: (_cc_with(pos, best, c), own[c], c))
        chosen.append(c)
        best = np.minimum(best, pos[:, c])
    return Committee(tuple(chosen), Fraction(int(best.sum())))


def removal_cc(e: Election, k: int) -> Committee:
    """Greedily drop the candidate whose removal hurts the CC score least.

    Ties drop the candidate with the larger total position sum, then the
    highest index.
    """
    m = e.num_candidates
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    pos = e.positions()
    own = pos.sum(axis=0)
    left = list(range(m))
    while len(left) > k:
        def after(c):
            rest = [x for x in left if x != c]
            return int(pos[:, rest].min(axis=1).sum())
        c = min(left, key=lambda c: (after(c), -own[c], -c))
        left.remove(c)
    return Committee(tuple(left), Fraction(cc_score(e, left)))


def exact_cc(e: Election, k: int, budget: int = EXACT_CC_BUDGET) -> Committee:
    """Optimal CC committee by enumeration (ties: lexicographically smallest)."""
    m = e.num_candidates
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    if comb(m, k) > budget:
        raise ValueError(f"C({m},{k}) committees exceed the budget of {budget}; use sequential_cc or removal_cc")
    pos = e.positions()
    best_score, best = None, None
    for s in combinations(range(m), k):
        score = int(pos[:, s].min(axis=1).sum())
        if best_score is None or score < best_score:
            best_score, best = score, s
    return Committee(best, Fraction(best_score))


OPTIMAL_ZERO = "optimal-zero"


def approximation_ratio(e: Election, k: int, algorithm: str = "sequential", budget: int = EXACT_CC_BUDGET):
    """Heuristic CC score over the optimum, or :data:`OPTIMAL_ZERO` when the optimum is 0."""
    heuristics = {"sequential": sequential_cc, "removal": removal_cc}
    if algorithm not in heuristics:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected 'sequential' or 'removal'")
    opt = exact_cc(e, k, budget).score
    if opt == 0:
        return OPTIMAL_ZERO
    return float(heuristics[algorithm](e, k).score / opt)


def winner_scores(e: Election, features: Iterable[str] = ("borda", "copeland", "condorcet")) -> dict:
    out = {}
    for f in features:
        if f == "borda":
            out["borda_winner_score"] = int(borda_scores(e).max())
        elif f == "copeland":
            out["copeland_winner_score"] = max(copeland_scores(e))
        elif f == "condorcet":
            out["has_condorcet"] = condorcet_winner(e) is not None
        else:
            raise ValueError(f"unknown feature {f!r}")
    return out
