"""Independent reference implementations used as test oracles.

Nothing here imports the package under test: every value is recomputed from
definitions with plain itertools loops.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from fractions import Fraction


def perms(n):
    return list(itertools.permutations(range(1, n + 1)))


def kendall(p, q):
    # pairs of values whose relative order differs
    pos_p = {v: i for i, v in enumerate(p)}
    pos_q = {v: i for i, v in enumerate(q)}
    vals = range(1, len(p) + 1)
    return sum(
        (pos_p[a] < pos_p[b]) != (pos_q[a] < pos_q[b])
        for a, b in itertools.combinations(vals, 2)
    )


def chebyshev(p, q):
    return max(abs(a - b) for a, b in zip(p, q))


METRIC = {"kendall": kendall, "chebyshev": chebyshev}


def adjacent_swap_distances(n):
    """BFS over adjacent transpositions from the identity."""
    start = tuple(range(1, n + 1))
    dist = {start: 0}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for i in range(n - 1):
            q = list(p)
            q[i], q[i + 1] = q[i + 1], q[i]
            q = tuple(q)
            if q not in dist:
                dist[q] = dist[p] + 1
                queue.append(q)
    return dist


def ball(metric, n, r, center=None):
    center = center or tuple(range(1, n + 1))
    f = METRIC[metric]
    return sum(f(p, center) <= r for p in perms(n))


def permanent(matrix):
    n = len(matrix)
    return sum(
        math.prod(matrix[i][s[i]] for i in range(n))
        for s in itertools.permutations(range(n))
    )


def fibonacci(k):
    a, b = 1, 1  # F(1), F(2)
    for _ in range(k - 1):
        a, b = b, a + b
    return a


def covering_radius(metric, n, code):
    f = METRIC[metric]
    return max(min(f(p, c) for c in code) for p in perms(n))


def mean_distortion(metric, n, code):
    f = METRIC[metric]
    ps = perms(n)
    return Fraction(sum(min(f(p, c) for c in code) for p in ps), len(ps))


def min_cover_size(metric, n, D):
    """Smallest worst-case D-cover by trying subsets of increasing size."""
    ps = perms(n)
    f = METRIC[metric]
    cover = [frozenset(i for i, p in enumerate(ps) if f(p, c) <= D) for c in ps]
    full = frozenset(range(len(ps)))
    for k in range(1, len(ps) + 1):
        for combo in itertools.combinations(range(len(ps)), k):
            if frozenset().union(*(cover[i] for i in combo)) == full:
                return k
    raise AssertionError


def binary_entropy(x):
    if x in (0, 1):
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)
