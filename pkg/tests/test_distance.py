from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from electmap.compass import compass_matrix
from electmap.core import Election, FrequencyMatrix, frequency_matrix
from electmap.distance import (
    DistanceMatrix, distance_matrix, emd, lex_min_assignment, normalized_positionwise,
    positionwise, positionwise_distance,
)

from conftest import random_election


def greedy_transport(x, y):
    """Move surplus mass left to right one unit-slot at a time and add up the cost."""
    x, y = list(map(Fraction, x)), list(map(Fraction, y))
    cost = Fraction(0)
    carry = Fraction(0)  # mass in transit from the left (positive) or owed to the left (negative)
    for i in range(len(x)):
        carry += x[i] - y[i]
        if i < len(x) - 1:
            cost += abs(carry)
    return cost


def brute_positionwise(a: FrequencyMatrix, b: FrequencyMatrix):
    best = None
    for perm in permutations(range(a.m)):
        v = sum((emd(a.column(c), b.column(perm[c])) for c in range(a.m)), Fraction(0))
        if best is None or v < best[0]:
            best = (v, list(perm))
    return best


def random_freq(rng, m, n):
    return frequency_matrix(random_election(rng, m, n))


def test_emd_examples():
    assert emd([Fraction(2, 3), 0, 0, Fraction(1, 3)], [Fraction(1, 3), Fraction(1, 3), 0, Fraction(1, 3)]) == Fraction(1, 3)
    assert emd([1, 0, 0, 0], [0, 0, 0, 1]) == 3
    assert emd([0.2, 0.3, 0.5], [0.2, 0.3, 0.5]) == 0


def test_emd_errors():
    with pytest.raises(ValueError):
        emd([1, 0], [1, 0, 0])
    with pytest.raises(ValueError):
        emd([1, 0], [0, 2])
    with pytest.raises(ValueError):
        emd([0.5, 0.5], [0.9, 0.2])


@given(st.lists(st.integers(0, 9), min_size=1, max_size=9), st.integers(0, 2 ** 32 - 1))
def test_emd_equals_transport_simulation(x, seed):
    rng = np.random.default_rng(seed)
    y = list(rng.permutation(x))
    assert emd(x, y) == greedy_transport(x, y)


def test_worked_example_distance(worked_pair):
    e, f = worked_pair
    d, matching = positionwise(e, f)
    assert d == Fraction(4, 3)
    # a->y, b->x, c->z, d->w is one optimal matching
    assert sum(emd(e.column(c), f.column(t)) for c, t in enumerate([1, 0, 2, 3])) == Fraction(4, 3)
    assert all(emd(e.column(c), f.column(t)) == Fraction(1, 3) for c, t in enumerate(matching))


def test_self_distance_zero(rng):
    x = random_freq(rng, 6, 9)
    assert positionwise(x, x) == (0, list(range(6)))


def test_matches_brute_force(rng):
    for _ in range(40):
        m = int(rng.integers(2, 7))
        a, b = random_freq(rng, m, int(rng.integers(1, 8))), random_freq(rng, m, int(rng.integers(1, 8)))
        d, matching = positionwise(a, b)
        bd, bperm = brute_positionwise(a, b)
        assert d == bd
        assert matching == bperm  # brute force enumerates permutations lexicographically
        assert positionwise_distance(a, b) == d


def test_lex_min_assignment_on_ties():
    cost = np.zeros((3, 3), dtype=int)
    assert lex_min_assignment(cost) == [0, 1, 2]
    cost = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert lex_min_assignment(cost) == [1, 2, 0]
    cost = np.array([[0, 0, 5], [0, 0, 5], [5, 5, 0]])
    assert lex_min_assignment(cost) == [0, 1, 2]


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        positionwise(compass_matrix("ID", 3), compass_matrix("ID", 4))


def test_normalized_examples(rng):
    for m in (4, 8, 10):
        assert normalized_positionwise(compass_matrix("ID", m), compass_matrix("UN", m)) == 1
    x = random_freq(rng, 8, 5)
    assert normalized_positionwise(x, x) == 0
    for _ in range(200):
        assert normalized_positionwise(random_freq(rng, 8, 7), random_freq(rng, 8, 11)) <= 1


def test_neutrality_and_anonymity(rng):
    e, f = random_election(rng, 6, 8), random_election(rng, 6, 5)
    d = positionwise_distance(frequency_matrix(e), frequency_matrix(f))
    perm = rng.permutation(6)
    renamed = Election(perm[e.votes])
    doubled = Election(np.vstack([f.votes, f.votes]))
    assert positionwise_distance(frequency_matrix(renamed), frequency_matrix(doubled)) == d


def test_triangle_inequality_random(rng):
    for _ in range(100):
        m = int(rng.integers(2, 11))
        a, b, c = (random_freq(rng, m, int(rng.integers(1, 9))) for _ in range(3))
        ab, bc, ac = (positionwise_distance(*p) for p in ((a, b), (b, c), (a, c)))
        assert ab == positionwise_distance(b, a)
        assert ac <= ab + bc


def test_distance_matrix_compass_m8():
    data = [compass_matrix(k, 8) for k in ("ID", "UN", "ST", "AN")]
    d = distance_matrix(data, normalize=False)
    assert d.labels == ("ID", "UN", "ST", "AN")
    assert d.values[0, 1] == pytest.approx(21)
    assert d.values[0, 3] == pytest.approx(16)
    assert d.values[0, 2] == pytest.approx(10)
    assert d.values[1, 3] == pytest.approx(10)
    assert d.values[2, 3] == pytest.approx(17)
    dn = distance_matrix(data, normalize=True)
    assert np.allclose(dn.values * 21, d.values)


def test_distance_matrix_singleton_and_mixed():
    d = distance_matrix([compass_matrix("ID", 3)])
    assert d.values.shape == (1, 1) and d.values[0, 0] == 0
    with pytest.raises(ValueError):
        distance_matrix([compass_matrix("ID", 3), compass_matrix("ID", 4)])


def test_distance_matrix_smoke_triangles_and_workers(rng):
    data = [random_freq(rng, 6, int(rng.integers(2, 20))) for _ in range(10)]
    d1 = distance_matrix(data)
    d2 = distance_matrix(data, workers=3)
    assert np.array_equal(d1.values, d2.values)
    assert d1.triangle_violation() <= 1e-9


def test_distance_matrix_csv_roundtrip(rng):
    data = [random_freq(rng, 4, 3).with_label(f"e{i}") for i in range(4)]
    d = distance_matrix(data)
    text = d.to_csv()
    assert text.splitlines()[0] == "e0,e1,e2,e3"
    back = DistanceMatrix.from_csv(text)
    assert back.labels == d.labels and np.array_equal(back.values, d.values)


def test_distance_matrix_rejects_asymmetric():
    with pytest.raises(ValueError):
        DistanceMatrix(("a", "b"), [[0, 1], [2, 0]])
