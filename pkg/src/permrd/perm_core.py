"""Permutations of [n], the two metrics, inversion vectors and restrictions.

Permutations are one-indexed in one-line notation: ``Permutation([6, 1, 3])``
maps 1 -> 6, 2 -> 1, 3 -> 3.  Composition is ``compose(p, q)(i) = p(q(i))``.

The Kendall distance counts adjacent transpositions of *entries* needed to
turn one sequence into the other, i.e. the number of value pairs whose
relative order differs.  Under this convention d_K is left-invariant and
d_C is right-invariant (see :func:`invariance_report`).
"""

from __future__ import annotations

import itertools
import re
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import config
from .errors import OracleScaleError

__all__ = [
    "Permutation",
    "InversionVector",
    "IndexSet",
    "identity",
    "reversal",
    "compose",
    "inverse",
    "kendall_distance",
    "chebyshev_distance",
    "distance",
    "perm_to_inversion_vector",
    "inversion_vector_to_perm",
    "restrict_positions",
    "restrict_values",
    "enumerate_permutations",
    "parse_permutation",
    "invariance_report",
    "all_permutations_array",
    "distance_matrix",
    "METRICS",
]

METRICS = ("kendall", "chebyshev")


class Permutation(tuple):
    """Immutable one-line permutation of {1..n}.

    A tuple subclass, so it hashes, compares lexicographically and unpacks
    like the underlying image.  ``p(i)`` evaluates the map at ``i``.
    """

    __slots__ = ()

    def __new__(cls, image: Iterable[int]):
        t = tuple(int(v) for v in image)
        if not t:
            raise ValueError("a permutation needs n >= 1")
        if sorted(t) != list(range(1, len(t) + 1)):
            raise ValueError(f"not a permutation of 1..{len(t)}: {list(t)}")
        return super().__new__(cls, t)

    @classmethod
    def _trusted(cls, image: Iterable[int]) -> "Permutation":
        return super().__new__(cls, tuple(image))

    @property
    def n(self) -> int:
        return len(self)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= len(self):
            raise IndexError(f"position {i} outside 1..{len(self)}")
        return self[i - 1]

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self)) + "]"

    def __repr__(self) -> str:
        return f"Permutation({list(self)})"


class InversionVector(tuple):
    """Vector x with 0 <= x_i <= i-1; coordinate i is ``x[i-1]``."""

    __slots__ = ()

    def __new__(cls, x: Iterable[int]):
        t = tuple(int(v) for v in x)
        if not t:
            raise ValueError("an inversion vector needs n >= 1")
        for i, xi in enumerate(t, start=1):
            if not 0 <= xi <= i - 1:
                raise ValueError(f"x_{i} = {xi} outside [0, {i - 1}]")
        return super().__new__(cls, t)

    @property
    def n(self) -> int:
        return len(self)

    def __repr__(self) -> str:
        return f"InversionVector({list(self)})"


class IndexSet:
    """A nonempty subset {a_1 < ... < a_m} of [n]."""

    __slots__ = ("n", "members")

    def __init__(self, n: int, members: Iterable[int]):
        ms = tuple(sorted(set(int(a) for a in members)))
        if n < 1:
            raise ValueError("ambient size must be positive")
        if not ms:
            raise ValueError("an index set must be nonempty")
        if ms[0] < 1 or ms[-1] > n:
            raise ValueError(f"members {list(ms)} not all within 1..{n}")
        self.n = n
        self.members = ms

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, a: object) -> bool:
        return a in self.members

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IndexSet):
            return NotImplemented
        return self.n == other.n and self.members == other.members

    def __hash__(self) -> int:
        return hash((self.n, self.members))

    def __repr__(self) -> str:
        return f"IndexSet({self.n}, {set(self.members)})"


def _as_perm(p: Sequence[int]) -> Permutation:
    return p if isinstance(p, Permutation) else Permutation(p)


def _check_same_length(p: Sequence[int], q: Sequence[int]) -> None:
    if len(p) != len(q):
        raise ValueError(f"length mismatch: {len(p)} vs {len(q)}")


def identity(n: int) -> Permutation:
    if n < 1:
        raise ValueError("identity needs n >= 1")
    return Permutation._trusted(range(1, n + 1))


def reversal(n: int) -> Permutation:
    """[n, n-1, ..., 1]."""
    if n < 1:
        raise ValueError("reversal needs n >= 1")
    return Permutation._trusted(range(n, 0, -1))


def compose(p: Sequence[int], q: Sequence[int]) -> Permutation:
    """(p o q)(i) = p(q(i))."""
    p, q = _as_perm(p), _as_perm(q)
    _check_same_length(p, q)
    return Permutation._trusted(p[j - 1] for j in q)


def inverse(p: Sequence[int]) -> Permutation:
    p = _as_perm(p)
    inv = [0] * len(p)
    for i, v in enumerate(p, start=1):
        inv[v - 1] = i
    return Permutation._trusted(inv)


def _count_inversions(seq: list[int]) -> int:
    # merge sort, O(n log n)
    if len(seq) < 2:
        return 0
    mid = len(seq) // 2
    left, right = seq[:mid], seq[mid:]
    count = _count_inversions(left) + _count_inversions(right)
    i = j = k = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            seq[k] = left[i]
            i += 1
        else:
            seq[k] = right[j]
            count += len(left) - i
            j += 1
        k += 1
    seq[k:] = left[i:] + right[j:]
    return count


def kendall_distance(p: Sequence[int], q: Sequence[int]) -> int:
    """Minimum number of adjacent transpositions turning p into q."""
    p, q = _as_perm(p), _as_perm(q)
    _check_same_length(p, q)
    # relabel q by p's positions; inversions of the result are discordant pairs
    pos = inverse(p)
    return _count_inversions([pos[v - 1] for v in q])


def chebyshev_distance(p: Sequence[int], q: Sequence[int]) -> int:
    """max_i |p(i) - q(i)|."""
    p, q = _as_perm(p), _as_perm(q)
    _check_same_length(p, q)
    return max(abs(a - b) for a, b in zip(p, q))


def distance(metric: str, p: Sequence[int], q: Sequence[int]) -> int:
    if metric == "kendall":
        return kendall_distance(p, q)
    if metric == "chebyshev":
        return chebyshev_distance(p, q)
    raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")


def perm_to_inversion_vector(p: Sequence[int]) -> InversionVector:
    """x_i = #{j < i : p(j) > p(i)}, so sum(x) = d_K(p, id)."""
    p = _as_perm(p)
    x = [sum(1 for j in range(i) if p[j] > p[i]) for i in range(len(p))]
    return InversionVector(x)


def inversion_vector_to_perm(x: Sequence[int]) -> Permutation:
    x = x if isinstance(x, InversionVector) else InversionVector(x)
    n = len(x)
    remaining = list(range(1, n + 1))
    image = [0] * n
    # p(i) has rank i - x_i among p(1..i), the values still unassigned
    for i in range(n, 0, -1):
        image[i - 1] = remaining.pop(i - x[i - 1] - 1)
    return Permutation._trusted(image)


def _as_index_set(A: IndexSet | Iterable[int], n: int) -> IndexSet:
    if isinstance(A, IndexSet):
        if A.n != n:
            raise ValueError(f"index set lives in [{A.n}], permutation in S_{n}")
        return A
    return IndexSet(n, A)


def _relabel(seq: Sequence[int]) -> Permutation:
    order = sorted(range(len(seq)), key=seq.__getitem__)
    ranks = [0] * len(seq)
    for r, i in enumerate(order, start=1):
        ranks[i] = r
    return Permutation._trusted(ranks)


def restrict_positions(p: Sequence[int], A: IndexSet | Iterable[int]) -> Permutation:
    """p|_A: keep the entries at positions in A, relabel to [|A|]."""
    p = _as_perm(p)
    A = _as_index_set(A, len(p))
    return _relabel([p[a - 1] for a in A])


def restrict_values(p: Sequence[int], A: IndexSet | Iterable[int]) -> Permutation:
    """p|^A: keep the values in A in their order of appearance, relabel."""
    p = _as_perm(p)
    A = _as_index_set(A, len(p))
    keep = set(A.members)
    return _relabel([v for v in p if v in keep])


def enumerate_permutations(n: int, cap: int | None = None) -> Iterator[Permutation]:
    """All n! permutations in lexicographic order."""
    cap = config.ENUMERATION_CAP if cap is None else cap
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise OracleScaleError("enumerate_permutations", n, cap)
    for t in itertools.permutations(range(1, n + 1)):
        yield Permutation._trusted(t)


_PERM_RE = re.compile(r"^\s*\[\s*(\d+(?:\s*,\s*\d+)*)?\s*\]\s*$")


def parse_permutation(text: str) -> Permutation:
    """Parse ``[6,1,3,5,2,4]``; whitespace is allowed anywhere."""
    m = _PERM_RE.match(text)
    if not m or m.group(1) is None:
        raise ValueError(f"cannot parse permutation from {text!r}")
    return Permutation(int(tok) for tok in m.group(1).split(","))


def invariance_report(n: int = 4) -> dict[str, dict[str, bool]]:
    """Exhaustively test left/right invariance of both metrics on S_n.

    Left invariance means d(t o p, t o q) = d(p, q) for all t, p, q.
    """
    perms = list(enumerate_permutations(n))
    report: dict[str, dict[str, bool]] = {}
    for metric in METRICS:
        left = right = True
        for p, q in itertools.product(perms, repeat=2):
            d = distance(metric, p, q)
            for t in perms:
                if left and distance(metric, compose(t, p), compose(t, q)) != d:
                    left = False
                if right and distance(metric, compose(p, t), compose(q, t)) != d:
                    right = False
            if not (left or right):
                break
        report[metric] = {"left": left, "right": right}
    return report


# ---------------------------------------------------------------------------
# array helpers for the exhaustive oracles


def all_permutations_array(n: int, cap: int | None = None) -> np.ndarray:
    """(n!, n) int8 array of S_n in lexicographic order, values 1..n."""
    cap = config.ENUMERATION_CAP if cap is None else cap
    if n > cap:
        raise OracleScaleError("all_permutations_array", n, cap)
    return np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int8).reshape(-1, n)


def _pair_signs(perms: np.ndarray) -> np.ndarray:
    # +-1 order sign for every value pair a < b, read off the inverse permutations
    n = perms.shape[1]
    pos = np.argsort(perms, axis=1)
    a, b = np.triu_indices(n, k=1)
    return np.sign(pos[:, b] - pos[:, a]).astype(np.int32)


def distance_matrix(metric: str, P: np.ndarray, Q: np.ndarray, chunk_cells: int = 1 << 24) -> np.ndarray:
    """Pairwise distances between the rows of P and Q (one-line arrays)."""
    P = np.asarray(P)
    Q = np.asarray(Q)
    if P.shape[1] != Q.shape[1]:
        raise ValueError("length mismatch")
    n = P.shape[1]
    if metric == "kendall":
        m = n * (n - 1) // 2
        sp, sq = _pair_signs(P), _pair_signs(Q)
        # concordant - discordant = m - 2 * discordant
        return ((m - sp @ sq.T) // 2).astype(np.int32)
    if metric == "chebyshev":
        out = np.empty((P.shape[0], Q.shape[0]), dtype=np.int32)
        Pi = P.astype(np.int16)
        Qi = Q.astype(np.int16)
        step = max(1, chunk_cells // max(1, Q.shape[0] * n))
        for s in range(0, P.shape[0], step):
            out[s : s + step] = np.abs(Pi[s : s + step, None, :] - Qi[None, :, :]).max(axis=2)
        return out
    raise ValueError(f"unknown metric {metric!r}")


def distances_to_code(metric: str, P: np.ndarray, C: np.ndarray, chunk_cells: int = 1 << 24) -> np.ndarray:
    """min over rows c of C of d(p, c), for every row p of P."""
    P = np.asarray(P)
    C = np.asarray(C)
    n = P.shape[1]
    out = np.empty(P.shape[0], dtype=np.int32)
    step = max(1, chunk_cells // max(1, C.shape[0] * max(n, 1)))
    for s in range(0, P.shape[0], step):
        out[s : s + step] = distance_matrix(metric, P[s : s + step], C).min(axis=1)
    return out
