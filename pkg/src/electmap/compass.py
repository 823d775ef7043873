"""Compass matrices, convex paths between matrices, and recovering elections from matrices."""

from __future__ import annotations

import heapq
from collections import deque
from fractions import Fraction
from math import lcm

import numpy as np

from .core import Election, FrequencyMatrix, PositionMatrix

COMPASS = ("ID", "UN", "ST", "AN")


def compass_matrix(kind: str, m: int) -> FrequencyMatrix:
    """Identity ("ID"), uniformity ("UN"), stratification ("ST") or antagonism ("AN") for ``m`` candidates."""
    kind = kind.upper()
    if m < 1:
        raise ValueError("need at least one candidate")
    if kind == "ID":
        return FrequencyMatrix(np.eye(m, dtype=np.int64), 1, "ID")
    if kind == "UN":
        return FrequencyMatrix(np.ones((m, m), dtype=np.int64), m, "UN")
    if kind == "ST":
        if m % 2:
            raise ValueError("stratification needs an even number of candidates")
        h = m // 2
        numer = np.zeros((m, m), dtype=np.int64)
        numer[:h, :h] = 1
        numer[h:, h:] = 1
        return FrequencyMatrix(numer, h, "ST")
    if kind == "AN":
        numer = np.eye(m, dtype=np.int64) + np.fliplr(np.eye(m, dtype=np.int64))
        return FrequencyMatrix(numer, 2, "AN")
    raise ValueError(f"unknown compass matrix {kind!r}; expected one of {', '.join(COMPASS)}")


def reversed_identity(m: int) -> FrequencyMatrix:
    return FrequencyMatrix(np.fliplr(np.eye(m, dtype=np.int64)), 1, "rID")


def mix(x: FrequencyMatrix, y: FrequencyMatrix, alpha: Fraction) -> FrequencyMatrix:
    """Exact convex combination ``alpha * x + (1 - alpha) * y``."""
    if x.m != y.m:
        raise ValueError(f"frequency matrices have different sizes ({x.m} and {y.m})")
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    den = lcm(x.denom, y.denom)
    xs = x.numer.astype(object) * (den // x.denom)
    ys = y.numer.astype(object) * (den // y.denom)
    numer = xs * alpha.numerator + ys * (alpha.denominator - alpha.numerator)
    return FrequencyMatrix(numer, den * alpha.denominator)


def convex_path(x: FrequencyMatrix, y: FrequencyMatrix, steps: int) -> list[FrequencyMatrix]:
    """Matrices ``a*x + (1-a)*y`` for ``a = k/(steps+1)``, ``k = 1..steps``.

    The path is metric (distances add up along it) when the identity
    candidate matching witnesses the distance between ``x`` and ``y``.
    """
    if steps < 1:
        raise ValueError("steps must be positive")
    if x.m != y.m:
        raise ValueError(f"frequency matrices have different sizes ({x.m} and {y.m})")
    out = []
    for k in range(1, steps + 1):
        z = mix(x, y, Fraction(k, steps + 1))
        if x.label and y.label:
            z = z.with_label(f"{x.label}-{y.label}-{k:02d}")
        out.append(z)
    return out


def _hopcroft_karp(adj: list[list[int]], m: int) -> list[int]:
    """Perfect-or-maximum matching rows -> columns; neighbours are tried in increasing order."""
    match_row = [-1] * m
    match_col = [-1] * m
    inf = float("inf")
    while True:
        dist = [inf] * m
        q = deque()
        for r in range(m):
            if match_row[r] == -1:
                dist[r] = 0
                q.append(r)
        found = False
        while q:
            r = q.popleft()
            for c in adj[r]:
                r2 = match_col[c]
                if r2 == -1:
                    found = True
                elif dist[r2] == inf:
                    dist[r2] = dist[r] + 1
                    q.append(r2)
        if not found:
            return match_row

        def augment(r: int) -> bool:
            for c in adj[r]:
                r2 = match_col[c]
                if r2 == -1 or (dist[r2] == dist[r] + 1 and augment(r2)):
                    match_row[r] = c
                    match_col[c] = r
                    return True
            dist[r] = inf
            return False

        for r in range(m):
            if match_row[r] == -1:
                augment(r)


def election_from_position_matrix(p: PositionMatrix) -> Election:
    """An election whose position matrix is exactly ``p``, using at most ``m^2 - 2m + 2`` distinct votes."""
    if not isinstance(p, PositionMatrix):
        p = PositionMatrix(p)
    x = p.counts.copy()
    m = p.m
    votes: list[np.ndarray] = []
    while x.any():
        adj = [list(np.nonzero(x[r])[0]) for r in range(m)]
        match = _hopcroft_karp(adj, m)
        if -1 in match:
            raise ValueError("matrix has no perfect matching; rows and columns must sum to the same value")
        rows = np.arange(m)
        cols = np.asarray(match)
        z = int(x[rows, cols].min())
        x[rows, cols] -= z
        votes.extend([cols.copy()] * z)
    return Election(np.asarray(votes, dtype=np.int64))


def _min_cost_flow(n_nodes: int, edges: list[list], source: int, sink: int, demand: int) -> int:
    """Successive shortest paths with Johnson potentials; edges are ``[to, cap, cost, rev]`` lists.

    The input network is acyclic, so the initial potentials come from one
    Bellman-Ford pass in topological order (nodes are numbered topologically).
    Returns the total cost; flows are left in the residual capacities.
    """
    inf = float("inf")
    graph = edges
    pot = [inf] * n_nodes
    pot[source] = 0
    for u in range(n_nodes):
        if pot[u] == inf:
            continue
        for v, cap, cost, _ in graph[u]:
            if cap > 0 and pot[u] + cost < pot[v]:
                pot[v] = pot[u] + cost
    pot = [0 if p == inf else p for p in pot]
    flow = total = 0
    while flow < demand:
        dist = [inf] * n_nodes
        prev: list[tuple[int, int] | None] = [None] * n_nodes
        dist[source] = 0
        heap = [(0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for k, (v, cap, cost, _) in enumerate(graph[u]):
                if cap <= 0:
                    continue
                nd = d + cost + pot[u] - pot[v]
                if nd < dist[v]:
                    dist[v] = nd
                    prev[v] = (u, k)
                    heapq.heappush(heap, (nd, v))
        if dist[sink] == inf:
            raise ValueError("flow network cannot carry the required amount")
        for u in range(n_nodes):
            if dist[u] < inf:
                pot[u] += dist[u]
        push = demand - flow
        v = sink
        while v != source:
            u, k = prev[v]
            push = min(push, graph[u][k][1])
            v = u
        v = sink
        while v != source:
            u, k = prev[v]
            e = graph[u][k]
            e[1] -= push
            graph[v][e[3]][1] += push
            total += push * e[2]
            v = u
        flow += push
    return total


def round_frequency_matrix(x: FrequencyMatrix, n: int) -> PositionMatrix:
    """Position matrix ``P`` with ``|n*x - P| < 1`` entrywise minimizing ``sum |n*x - P|``."""
    if n < 1:
        raise ValueError("need at least one voter")
    m, den = x.m, x.denom
    scaled = x.numer.astype(object) * n
    floor = scaled // den
    frac = scaled % den  # y[i, j] = frac[i, j] / den
    row_need = [int(s) // den for s in frac.sum(axis=1)]
    col_need = [int(s) // den for s in frac.sum(axis=0)]

    # nodes: source, v[i][j] row by row, pre-sinks t_j, sink (topological numbering)
    source = 0
    node = lambda i, j: 1 + i * m + j  # noqa: E731
    pre = lambda j: 1 + m * m + j  # noqa: E731
    sink = 1 + m * m + m
    graph: list[list[list]] = [[] for _ in range(sink + 1)]

    def add(u, v, cap, cost):
        graph[u].append([v, cap, cost, len(graph[v])])
        graph[v].append([u, 0, -cost, len(graph[u]) - 1])

    pick: dict[tuple[int, int], tuple[int, int]] = {}
    for i in range(m):
        if row_need[i] == 0:
            continue
        add(source, node(i, 0), row_need[i], 0)
        for j in range(m):
            if j + 1 < m:
                add(node(i, j), node(i, j + 1), row_need[i], 0)
            if frac[i, j] > 0:
                # cost in units of 1/den: rounding up changes |nx - p| from y to 1 - y
                pick[i, j] = (node(i, j), len(graph[node(i, j)]))
                add(node(i, j), pre(j), 1, den - 2 * int(frac[i, j]))
    for j in range(m):
        if col_need[j]:
            add(pre(j), sink, col_need[j], 0)
    _min_cost_flow(sink + 1, graph, source, sink, sum(row_need))

    counts = np.array(floor, dtype=np.int64)
    for (i, j), (u, k) in pick.items():
        if graph[u][k][1] == 0:
            counts[i, j] += 1
    return PositionMatrix(counts)


def election_from_frequency_matrix(x: FrequencyMatrix, n: int) -> Election:
    """An ``n``-voter election whose position matrix is the optimal rounding of ``n * x``."""
    return election_from_position_matrix(round_frequency_matrix(x, n))


def rounding_deviation(x: FrequencyMatrix, p: PositionMatrix) -> Fraction:
    """``sum |n*x - P|`` with ``n`` taken from ``p``."""
    n = p.n
    return sum(
        (abs(Fraction(int(a) * n, x.denom) - int(b)) for a, b in zip(x.numer.flat, p.counts.flat)),
        Fraction(0),
    )
