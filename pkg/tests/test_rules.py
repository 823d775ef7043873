from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from electmap.core import Election
from electmap.rules import (
    OPTIMAL_ZERO,
    Committee,
    approximation_ratio,
    borda_scores,
    cc_score,
    condorcet_winner,
    copeland_scores,
    exact_cc,
    hb_score,
    pairwise_matrix,
    removal_cc,
    sequential_cc,
    winner_scores,
)

from conftest import random_election

A, B, C, D = range(4)


def unanimous(m, n):
    return Election(np.tile(np.arange(m), (n, 1)))


def brute_cc(e, k):
    """Plain-loop oracle: (score, committee) minimizing the CC dissatisfaction."""
    best = None
    for s in combinations(range(e.num_candidates), k):
        score = sum(min(list(v).index(c) for c in s) for v in e.votes.tolist())
        if best is None or score < best[0]:
            best = (score, s)
    return best


def brute_condorcet(e):
    votes = e.votes.tolist()
    m = e.num_candidates
    for a in range(m):
        if all(sum(v.index(a) < v.index(b) for v in votes) * 2 > len(votes) for b in range(m) if b != a):
            return a
    return None


def test_borda_examples(matrices_example):
    assert borda_scores(unanimous(10, 100)).max() == 900
    assert borda_scores(matrices_example)[A] == 6


@settings(max_examples=30)
@given(seed=st.integers(0, 10 ** 6), m=st.integers(2, 7), n=st.integers(1, 15))
def test_conservation_laws(seed, m, n):
    e = random_election(np.random.default_rng(seed), m, n)
    assert borda_scores(e).sum() == n * m * (m - 1) // 2
    assert sum(copeland_scores(e)) == Fraction(m * (m - 1), 2)
    pm = pairwise_matrix(e)
    for a in range(m):
        assert pm[a][a] == 0
        for b in range(m):
            if a != b:
                assert pm[a][b] + pm[b][a] == 1


def test_copeland_examples():
    e = unanimous(5, 3)
    assert copeland_scores(e) == [4, 3, 2, 1, 0]
    opposite = Election.from_votes([[0, 1, 2], [2, 1, 0]])
    assert copeland_scores(opposite) == [1, 1, 1]


def test_condorcet_cycle_and_unanimous():
    assert condorcet_winner(Election.from_votes([[0, 1, 2], [1, 2, 0], [2, 0, 1]])) is None
    assert condorcet_winner(Election.from_votes([[3, 0, 1, 2]] * 2)) == 3


@settings(max_examples=30)
@given(seed=st.integers(0, 10 ** 6), n=st.integers(1, 9))
def test_condorcet_matches_oracle_and_copeland(seed, n):
    e = random_election(np.random.default_rng(seed), 5, n)
    w = condorcet_winner(e)
    assert w == brute_condorcet(e)
    if w is not None:
        cs = copeland_scores(e)
        assert cs[w] == 4 and cs.count(4) == 1


def test_hb_example(hb_example):
    assert hb_score(hb_example, Committee((A, B), Fraction(0))) == 5
    assert hb_score(hb_example, [A, B]) == 5


def test_hb_unanimous_prefix():
    n, k = 7, 4
    expected = sum(Fraction(i - 1, i) for i in range(1, k + 1)) * n
    assert hb_score(unanimous(6, n), list(range(k))) == expected


def test_cc_example(hb_example):
    assert cc_score(hb_example, [A, D]) == 0
    best = exact_cc(hb_example, 2)
    assert best.members == (A, D) and best.score == 0


def test_cc_trivial_cases(rng):
    e = random_election(rng, 6, 12)
    assert cc_score(e, range(6)) == 0
    tops = sorted({int(v[0]) for v in e.votes})
    assert cc_score(e, tops) == 0
    assert exact_cc(e, 6).score == 0


@settings(max_examples=30)
@given(seed=st.integers(0, 10 ** 6), m=st.integers(2, 7), n=st.integers(1, 10))
def test_k1_scores(seed, m, n):
    e = random_election(np.random.default_rng(seed), m, n)
    for c in range(m):
        assert hb_score(e, [c]) == cc_score(e, [c]) == int(e.positions()[:, c].sum())
    # single-member CC picks a Borda winner
    c = sequential_cc(e, 1).members[0]
    assert borda_scores(e)[c] == borda_scores(e).max()


@settings(max_examples=30)
@given(seed=st.integers(0, 10 ** 6), m=st.integers(3, 7))
def test_cc_monotone_under_growth(seed, m):
    rng = np.random.default_rng(seed)
    e = random_election(rng, m, 8)
    s = list(rng.choice(m, size=2, replace=False))
    t = s + [c for c in range(m) if c not in s][:1]
    assert cc_score(e, t) <= cc_score(e, s)


def test_exact_matches_oracle():
    rng = np.random.default_rng(11)
    for _ in range(20):
        e = random_election(rng, 6, 9)
        got = exact_cc(e, 2)
        score, members = brute_cc(e, 2)
        assert got.score == score and got.members == members


@settings(max_examples=40)
@given(seed=st.integers(0, 10 ** 6), m=st.integers(2, 8), n=st.integers(1, 20), k=st.integers(1, 3))
def test_heuristics_never_beat_exact(seed, m, n, k):
    k = min(k, m)
    e = random_election(np.random.default_rng(seed), m, n)
    opt = exact_cc(e, k).score
    for algo in (sequential_cc, removal_cc):
        c = algo(e, k)
        assert c.k == k
        assert c.score == cc_score(e, c.members) >= opt


def test_unanimous_heuristics_pick_prefix():
    e = Election(np.tile([4, 2, 0, 1, 3], (5, 1)))
    for k in (1, 2, 3):
        assert sequential_cc(e, k).members == tuple(sorted([4, 2, 0, 1, 3][:k]))
        assert removal_cc(e, k).members == tuple(sorted([4, 2, 0, 1, 3][:k]))
    assert removal_cc(e, 5).score == 0


def test_tie_breaking():
    # all candidates tie for a single member: sequential picks 0
    e = Election.from_votes([[0, 1], [1, 0]])
    assert sequential_cc(e, 1).members == (0,)
    # removal drops the highest index on ties
    assert removal_cc(e, 1).members == (0,)
    assert exact_cc(e, 1).members == (0,)


def test_approximation_ratio():
    assert approximation_ratio(unanimous(5, 4), 2) == OPTIMAL_ZERO
    rng = np.random.default_rng(3)
    for _ in range(30):
        e = random_election(rng, 8, 20)
        for algo in ("sequential", "removal"):
            r = approximation_ratio(e, 2, algo)
            assert r == OPTIMAL_ZERO or 1.0 <= r <= 2.5
    with pytest.raises(ValueError):
        approximation_ratio(e, 2, "greedy")


def test_budget_and_validation(rng):
    e = random_election(rng, 12, 3)
    with pytest.raises(ValueError, match="budget"):
        exact_cc(e, 6, budget=100)
    with pytest.raises(ValueError):
        sequential_cc(e, 0)
    with pytest.raises(ValueError):
        cc_score(e, [])
    with pytest.raises(ValueError):
        hb_score(e, [0, 99])
    with pytest.raises(ValueError):
        Committee((1, 1), Fraction(0))


def test_winner_scores(matrices_example):
    s = winner_scores(matrices_example)
    assert s == {"borda_winner_score": 6, "copeland_winner_score": 3, "has_condorcet": True}
    with pytest.raises(ValueError):
        winner_scores(matrices_example, ["dodgson"])
