import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from electmap.distance import DistanceMatrix
from electmap.embed import (
    EmbedConfig,
    Embedding,
    fruchterman_reingold,
    kamada_kawai,
    stress,
    stress_gradient,
)


def planar_distances(points):
    p = np.asarray(points, dtype=float)
    return np.sqrt(((p[:, None] - p[None]) ** 2).sum(axis=2))


def test_equilateral_triangle_is_realized():
    d = DistanceMatrix(("a", "b", "c"), 1.0 - np.eye(3))
    emb = kamada_kawai(d)
    assert emb.labels == ("a", "b", "c")
    assert emb.stress < 1e-8  # gradient tolerance 1e-6 leaves residual stress of this order
    assert np.allclose(emb.distances().values, d.values, atol=1e-5)


def test_collinear_points_are_realized():
    d = planar_distances([[0, 0], [1, 0], [3, 0], [6, 0]])
    emb = kamada_kawai(d)
    assert emb.stress < 1e-8  # gradient tolerance 1e-6 leaves residual stress of this order
    assert np.allclose(emb.distances().values, d, atol=1e-4)


def test_two_items():
    emb = kamada_kawai(np.array([[0.0, 2.5], [2.5, 0.0]]))
    assert emb.distances().values[0, 1] == pytest.approx(2.5, abs=1e-6)
    fr = fruchterman_reingold(np.array([[0.0, 2.5], [2.5, 0.0]]))
    assert fr.coords.shape == (2, 2)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    d = planar_distances(rng.random((6, 2))) + 0.1 * (1 - np.eye(6))
    x = rng.random((6, 2))
    g = stress_gradient(x, d)
    h = 1e-6
    num = np.zeros_like(x)
    for i in range(6):
        for k in range(2):
            e = np.zeros_like(x)
            e[i, k] = h
            num[i, k] = (stress(x + e, d) - stress(x - e, d)) / (2 * h)
    assert np.allclose(g, num, rtol=1e-5, atol=1e-6)


@settings(max_examples=15)
@given(seed=st.integers(0, 10 ** 6), k=st.integers(3, 12))
def test_kk_never_worse_than_its_start(seed, k):
    rng = np.random.default_rng(seed)
    d = planar_distances(rng.random((k, 3)) * 5)  # 3D points: not exactly realizable in 2D
    config = EmbedConfig(restarts=1, max_iter=300)
    start = np.random.default_rng(seed + 1).random((k, 2)) * d.max()
    emb = kamada_kawai(d, config, np.random.default_rng(seed + 1))
    assert emb.stress <= stress(start, d) + 1e-12
    assert emb.stress == pytest.approx(stress(emb.coords, d), rel=1e-9, abs=1e-12)


def test_kk_output_is_centered_and_deterministic():
    d = planar_distances(np.random.default_rng(3).random((8, 2)))
    a = kamada_kawai(d, rng=np.random.default_rng(5))
    b = kamada_kawai(d, rng=np.random.default_rng(5))
    assert np.array_equal(a.coords, b.coords)
    assert np.allclose(a.coords.mean(axis=0), 0.0, atol=1e-12)


def test_fr_deterministic_and_finite():
    d = planar_distances(np.random.default_rng(4).random((10, 2)))
    a = fruchterman_reingold(d, rng=np.random.default_rng(1))
    b = fruchterman_reingold(d, rng=np.random.default_rng(1))
    assert np.array_equal(a.coords, b.coords)
    assert np.isfinite(a.coords).all()
    assert a.iterations == EmbedConfig().fr_iterations


def test_duplicate_items_are_handled():
    # zero off-diagonal distance between two copies of the same item
    d = planar_distances([[0, 0], [0, 0], [1, 0], [0, 1]])
    emb = kamada_kawai(d)
    assert np.isfinite(emb.coords).all()
    assert emb.distances().values[0, 1] < 1e-3


@pytest.mark.parametrize("bad", [np.zeros((1, 1)), np.array([[0, 1], [2, 0]]), np.array([[0, -1], [-1, 0]]),
                                 np.zeros((2, 3))])
def test_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        kamada_kawai(bad)


def test_embedding_csv_round_trip():
    emb = kamada_kawai(1.0 - np.eye(4))
    back = Embedding.from_csv(emb.to_csv())
    assert back.labels == emb.labels
    assert np.array_equal(back.coords, emb.coords)


def test_embedding_validates_shape():
    with pytest.raises(ValueError):
        Embedding(("a",), np.zeros((2, 2)), 0.0, 0)
    with pytest.raises(ValueError):
        Embedding(("a",), np.array([[np.nan, 0.0]]), 0.0, 0)
