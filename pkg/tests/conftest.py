"""Shared oracles: RK4 integration, Dijkstra, and LP vertex enumeration."""

import itertools
import random
from fractions import Fraction

import pytest


def rk4(f, y0, t_end, steps):
    """Classic fixed-step RK4 for y' = f(t, y) with vector state."""
    t = 0.0
    y = list(y0)
    h = t_end / steps
    for _ in range(steps):
        k1 = f(t, y)
        k2 = f(t + h / 2, [yi + h / 2 * ki for yi, ki in zip(y, k1)])
        k3 = f(t + h / 2, [yi + h / 2 * ki for yi, ki in zip(y, k2)])
        k4 = f(t + h, [yi + h * ki for yi, ki in zip(y, k3)])
        y = [yi + h / 6 * (a + 2 * b + 2 * c + d)
             for yi, a, b, c, d in zip(y, k1, k2, k3, k4)]
        t += h
    return y


def dijkstra_all(weights):
    """All-pairs least path weights for a nonnegative digraph.

    weights[i][j] is the arc weight or None when absent; returns a dense
    matrix of floats with math.inf for unreachable pairs and 0 diagonal.
    """
    import heapq
    import math

    n = len(weights)
    out = []
    for s in range(n):
        dist = [math.inf] * n
        dist[s] = 0
        heap = [(0, s)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for v in range(n):
                w = weights[u][v]
                if w is None:
                    continue
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        out.append(dist)
    return out


def brute_force_lp(direction, A, b, c):
    """Optimum of {cx : Ax <= b, x free} by basic-point enumeration.

    Returns ("optimal", value), ("infeasible", None), or ("unbounded", None).
    The unbounded check is a large-box heuristic adequate for small random
    instances: if the box-constrained optimum sits on the artificial box,
    the true LP is unbounded.
    """
    m, n = len(A), len(A[0])
    box = Fraction(10 ** 7)
    rows = [list(row) + [bi] for row, bi in zip(A, b)]
    for i in range(n):
        e = [Fraction(0)] * n
        e[i] = Fraction(1)
        rows.append(e + [box])
        rows.append([-x for x in e] + [box])

    def feasible(x):
        return all(sum(r[j] * x[j] for j in range(n)) <= r[n] for r in rows[:m]) \
            and all(abs(xi) <= box for xi in x)

    best = None
    on_box = False
    for combo in itertools.combinations(range(len(rows)), n):
        mat = [[rows[i][j] for j in range(n)] for i in combo]
        rhs = [rows[i][n] for i in combo]
        x = _solve_square(mat, rhs)
        if x is None or not feasible(x):
            continue
        val = sum(ci * xi for ci, xi in zip(c, x))
        better = best is None or (val > best if direction == "max" else val < best)
        if better:
            best = val
            on_box = any(abs(xi) == box for xi in x)
    if best is None:
        return ("infeasible", None)
    if on_box:
        return ("unbounded", None)
    return ("optimal", best)


def _solve_square(mat, rhs):
    n = len(mat)
    grid = [row[:] + [r] for row, r in zip(mat, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if grid[r][col] != 0), None)
        if piv is None:
            return None
        grid[col], grid[piv] = grid[piv], grid[col]
        pv = grid[col][col]
        grid[col] = [x / pv for x in grid[col]]
        for r in range(n):
            if r != col and grid[r][col] != 0:
                f = grid[r][col]
                grid[r] = [x - f * y for x, y in zip(grid[r], grid[col])]
    return [grid[r][n] for r in range(n)]


@pytest.fixture
def rng():
    return random.Random(20260823)
