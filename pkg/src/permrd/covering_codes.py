"""Covering codes in S_n.

The explicit family here is the block construction for d_C: split the values
into consecutive blocks of d+1 and keep every permutation in which each
block's values appear in ascending order.  Generic codes come from greedy
set cover over balls or from an exact minimum-size search at tiny n.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import config
from .ball_volumes import diameter
from .errors import DomainError, OracleScaleError
from .numerics import binary_entropy
from .perm_core import (
    IndexSet,
    Permutation,
    all_permutations_array,
    chebyshev_distance,
    distance_matrix,
    distances_to_code,
    parse_permutation,
    restrict_values,
)

logger = logging.getLogger(__name__)

__all__ = [
    "BlockStructure",
    "CoveringCode",
    "construction_blocks",
    "is_codeword",
    "construction_size",
    "construction_codewords",
    "construction_code",
    "project_to_codeword",
    "covering_radius",
    "average_distortion",
    "greedy_cover",
    "minimal_cover_exact",
    "construction_rate_asymptotic",
    "write_codeword_file",
    "read_codeword_file",
]

# n! * |C| above this switches construction codes to the structural radius
BRUTE_FORCE_BUDGET = 2 * 10**8
GREEDY_CAP = 7


@dataclass(frozen=True)
class BlockStructure:
    n: int
    d: int
    blocks: tuple[IndexSet, ...]

    def block_of(self) -> list[int]:
        """block index of each value 1..n (list index = value - 1)."""
        out = [0] * self.n
        for b, A in enumerate(self.blocks):
            for v in A:
                out[v - 1] = b
        return out


@dataclass
class CoveringCode:
    metric: str
    n: int
    claimed_radius: int | None
    provenance: str
    size: int
    codewords: list[Permutation] | None = None
    blocks: BlockStructure | None = None
    # exact oracle only: False when the solver stopped before proving optimality
    optimal: bool | None = None
    info: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.codewords is not None:
            if len(set(self.codewords)) != len(self.codewords):
                raise ValueError("codewords must be distinct")
            if any(len(c) != self.n for c in self.codewords):
                raise ValueError("codeword length differs from n")
            if len(self.codewords) != self.size:
                raise ValueError("size does not match the materialized codewords")

    def __iter__(self) -> Iterator[Permutation]:
        if self.codewords is not None:
            return iter(self.codewords)
        if self.blocks is not None:
            return construction_codewords(self.blocks)
        raise ValueError("code has neither codewords nor a generator")

    def __len__(self) -> int:
        return self.size

    def as_array(self) -> np.ndarray:
        if self.size > config.MATERIALIZE_CAP:
            raise OracleScaleError("materialize code", self.n, config.MATERIALIZE_CAP)
        return np.array([tuple(c) for c in self], dtype=np.int8).reshape(-1, self.n)


# ---------------------------------------------------------------------------
# block construction


def _check_nd(n: int, d: int) -> None:
    if not 1 <= d <= n - 1:
        raise DomainError(f"need 1 <= d <= n-1 (n={n}, d={d})")


def construction_blocks(n: int, d: int) -> BlockStructure:
    """A_i = {i(d+1)+j : 1 <= j <= d+1} intersected with [n]."""
    _check_nd(n, d)
    blocks = tuple(
        IndexSet(n, range(i * (d + 1) + 1, min(n, (i + 1) * (d + 1)) + 1))
        for i in range((n - 1) // (d + 1) + 1)
    )
    assert sorted(v for A in blocks for v in A) == list(range(1, n + 1))
    return BlockStructure(n, d, blocks)


def is_codeword(sigma: Sequence[int], bs: BlockStructure) -> bool:
    if len(sigma) != bs.n:
        raise ValueError("length mismatch")
    for A in bs.blocks:
        r = restrict_values(sigma, A)
        if any(v != i for i, v in enumerate(r, start=1)):
            return False
    return True


def construction_size(n: int, d: int) -> int:
    """n! / ((d+1)!^floor(n/(d+1)) * (n mod (d+1))!)."""
    _check_nd(n, d)
    q, rem = divmod(n, d + 1)
    return math.factorial(n) // (math.factorial(d + 1) ** q * math.factorial(rem))


def construction_codewords(bs: BlockStructure) -> Iterator[Permutation]:
    """Lazily yield the code, ordered by the position sets given to A_0, A_1, ...

    Position sets are chosen in lexicographic order of combinations of the
    positions still free; each block's values fill its positions ascending.
    """
    n = bs.n
    image = [0] * n
    blocks = [A.members for A in bs.blocks]

    def rec(b: int, free: tuple[int, ...]) -> Iterator[Permutation]:
        if b == len(blocks):
            yield Permutation._trusted(image)
            return
        values = blocks[b]
        for chosen in itertools.combinations(free, len(values)):
            for pos, v in zip(chosen, values):
                image[pos] = v
            taken = set(chosen)
            yield from rec(b + 1, tuple(p for p in free if p not in taken))

    yield from rec(0, tuple(range(n)))


def construction_code(n: int, d: int, materialize: bool = False) -> CoveringCode:
    bs = construction_blocks(n, d)
    size = construction_size(n, d)
    words = None
    if materialize:
        if size > config.MATERIALIZE_CAP:
            raise OracleScaleError("construction_codewords materialization", n, config.MATERIALIZE_CAP)
        words = list(construction_codewords(bs))
    return CoveringCode("chebyshev", n, d, f"construction1(d={d})", size, words, bs)


def project_to_codeword(sigma: Sequence[int], bs: BlockStructure) -> Permutation:
    """Sort each block's values into the positions they occupy in sigma."""
    if len(sigma) != bs.n:
        raise ValueError("length mismatch")
    which = bs.block_of()
    positions: list[list[int]] = [[] for _ in bs.blocks]
    for pos, v in enumerate(sigma):
        positions[which[v - 1]].append(pos)
    image = [0] * bs.n
    for A, pos in zip(bs.blocks, positions):
        for p, v in zip(pos, A.members):
            image[p] = v
    out = Permutation._trusted(image)
    assert chebyshev_distance(sigma, out) <= bs.d
    return out


def _structural_radius(bs: BlockStructure) -> tuple[int, int]:
    """(lower, upper) for the construction's covering radius without enumerating.

    Upper: the projection moves a value only within its block.  Lower: in a
    codeword the last position holds the maximum of some block, so the
    reversal (ending in 1) is at least min_i |max A_i - 1| away.
    """
    upper = max(len(A) for A in bs.blocks) - 1
    lower = min(A.members[-1] - 1 for A in bs.blocks)
    return lower, upper


def _universe(n: int) -> np.ndarray:
    if n > config.COVER_ORACLE_CAP:
        raise OracleScaleError("exhaustive scan of S_n", n, config.COVER_ORACLE_CAP)
    return all_permutations_array(n, cap=config.COVER_ORACLE_CAP)


def covering_radius(code: CoveringCode, method: str = "auto") -> int:
    """max over s in S_n of d(s, code)."""
    if method not in ("auto", "brute_force", "structural"):
        raise ValueError(f"unknown method {method!r}")
    structural_ok = code.blocks is not None and code.metric == "chebyshev"
    if method == "auto":
        small = code.n <= config.COVER_ORACLE_CAP and math.factorial(code.n) * code.size <= BRUTE_FORCE_BUDGET
        method = "brute_force" if small or not structural_ok else "structural"
    if method == "structural":
        if not structural_ok:
            raise ValueError("structural radius needs a block-construction code")
        lo, hi = _structural_radius(code.blocks)
        if lo != hi:
            raise RuntimeError(f"structural bounds do not meet: [{lo}, {hi}]")
        return hi
    P = _universe(code.n)
    return int(distances_to_code(code.metric, P, code.as_array()).max())


def average_distortion(code: CoveringCode) -> Fraction:
    """(1/n!) * sum over s of d(s, code), exact."""
    P = _universe(code.n)
    total = int(distances_to_code(code.metric, P, code.as_array()).sum(dtype=np.int64))
    return Fraction(total, math.factorial(code.n))


# ---------------------------------------------------------------------------
# greedy and exact covers


def _ball_membership(metric: str, P: np.ndarray, D: int) -> np.ndarray:
    return distance_matrix(metric, P, P) <= D


def greedy_cover(metric: str, n: int, D: int, cap: int | None = None) -> CoveringCode:
    """Greedy set cover by radius-D balls; ties go to the lexicographically first center."""
    cap = GREEDY_CAP if cap is None else cap
    if n > cap:
        raise OracleScaleError("greedy_cover", n, cap)
    if D < 0:
        raise DomainError("D must be nonnegative")
    P = all_permutations_array(n)
    member = _ball_membership(metric, P, D).astype(np.int32)
    uncovered = np.ones(P.shape[0], dtype=np.int32)
    chosen: list[int] = []
    while uncovered.any():
        gains = member @ uncovered
        best = int(np.argmax(gains))  # first maximum = lexicographic tie-break
        chosen.append(best)
        uncovered[member[best] > 0] = 0
    words = [Permutation._trusted(P[i].tolist()) for i in chosen]
    return CoveringCode(metric, n, D, f"greedy(D={D}, lexicographic)", len(words), words)


def _search_cover(dist: np.ndarray, D: int, objective: str) -> list[int]:
    """Smallest index set of centers, by increasing cardinality.

    Center 0 (the identity) is fixed: an isometry of S_n maps any optimal
    code onto one containing it.
    """
    N = dist.shape[0]
    budget = D * N
    if objective == "worst_case":
        masks = []
        for row in dist <= D:
            m = 0
            for i in np.flatnonzero(row).tolist():
                m |= 1 << i
            masks.append(m)
        full = (1 << N) - 1
    for k in range(1, N + 1):
        for rest in itertools.combinations(range(1, N), k - 1):
            centers = (0,) + rest
            if objective == "worst_case":
                m = 0
                for c in centers:
                    m |= masks[c]
                if m == full:
                    return list(centers)
            elif int(dist[:, list(centers)].min(axis=1).sum()) <= budget:
                return list(centers)
    raise AssertionError("S_n itself is always a cover")


def _milp_cover(dist: np.ndarray, D: int, objective: str, time_limit: float) -> tuple[list[int], bool]:
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import csr_matrix, hstack, identity, kron, vstack

    N = dist.shape[0]
    lower = np.zeros(N)
    lower[0] = 1  # identity fixed, as in _search_cover
    if objective == "worst_case":
        A = csr_matrix((dist <= D).astype(float))
        res = milp(
            c=np.ones(N),
            constraints=[LinearConstraint(A, lb=np.ones(N), ub=np.inf)],
            integrality=np.ones(N),
            bounds=Bounds(lower, np.ones(N)),
            options={"time_limit": time_limit},
        )
        y = res.x
    else:
        # variables: y (N) then x[s, c] row-major (N*N)
        nvar = N + N * N
        one_row = csr_matrix(np.ones((1, N)))
        assign = hstack([csr_matrix((N, N)), kron(identity(N), one_row)])
        link = hstack([-kron(csr_matrix(np.ones((N, 1))), identity(N)), identity(N * N)])
        cost = hstack([csr_matrix((1, N)), csr_matrix(dist.reshape(1, -1).astype(float))])
        A = vstack([assign, link, cost]).tocsr()
        lb = np.concatenate([np.ones(N), np.full(N * N, -np.inf), [-np.inf]])
        ub = np.concatenate([np.ones(N), np.zeros(N * N), [D * N]])
        integrality = np.concatenate([np.ones(N), np.zeros(N * N)])
        lo = np.concatenate([lower, np.zeros(N * N)])
        res = milp(
            c=np.concatenate([np.ones(N), np.zeros(N * N)]),
            constraints=[LinearConstraint(A, lb, ub)],
            integrality=integrality,
            bounds=Bounds(lo, np.ones(nvar)),
            options={"time_limit": time_limit},
        )
        y = None if res.x is None else res.x[:N]
    if y is None:
        raise RuntimeError(f"MILP returned no solution: {res.message}")
    centers = [i for i in range(N) if y[i] > 0.5]
    return centers, res.status == 0


@functools.lru_cache(maxsize=None)
def _solve_minimal_cover(
    metric: str, n: int, D: int, objective: str, method: str, time_limit: float
) -> tuple[tuple[int, ...], bool]:
    P = all_permutations_array(n)
    dist = distance_matrix(metric, P, P)
    if method == "search":
        return tuple(_search_cover(dist, D, objective)), True
    centers, optimal = _milp_cover(dist, D, objective, time_limit)
    return tuple(centers), optimal


def minimal_cover_exact(
    metric: str,
    n: int,
    D: int,
    objective: str = "worst_case",
    method: str = "auto",
    time_limit: float = 120.0,
) -> CoveringCode:
    """A minimum-size code with worst-case (or average) distortion at most D.

    ``method="search"`` enumerates candidate codes by increasing size;
    ``"milp"`` hands the same problem to HiGHS.  ``auto`` searches up to
    n = 4 and uses the MILP at n = 5.  The result's ``optimal`` flag is False
    if the solver hit ``time_limit``.  Solutions are memoized per process
    (Kendall n=5, D=1 alone takes close to a minute).
    """
    objective = {"worst": "worst_case"}.get(objective, objective)
    if objective not in ("worst_case", "average"):
        raise DomainError(f"unknown objective {objective!r}")
    if n > config.MINIMAL_COVER_CAP:
        raise OracleScaleError("minimal_cover_exact", n, config.MINIMAL_COVER_CAP)
    if D < 0:
        raise DomainError("D must be nonnegative")
    if method == "auto":
        method = "search" if n <= 4 else "milp"
    if method not in ("search", "milp"):
        raise ValueError(f"unknown method {method!r}")
    centers, optimal = _solve_minimal_cover(metric, n, D, objective, method, time_limit)
    centers = list(centers)
    P = all_permutations_array(n)
    dist = distance_matrix(metric, P, P)
    if not optimal:
        logger.warning("minimal_cover_exact(%s, n=%d, D=%d, %s): time limit hit, result not proven optimal",
                       metric, n, D, objective)
    sub = dist[:, centers].min(axis=1)
    if objective == "worst_case":
        assert sub.max() <= D
    else:
        assert sub.sum() <= D * P.shape[0]
    words = [Permutation._trusted(P[i].tolist()) for i in centers]
    return CoveringCode(
        metric, n, D if objective == "worst_case" else None,
        f"exact_oracle(D={D}, {objective}, {method})", len(words), words,
        optimal=optimal, info={"average_distortion": Fraction(int(sub.sum()), P.shape[0])},
    )


def construction_rate_asymptotic(delta: Fraction | float | str) -> float:
    """H(d m) + d m lg m with m = floor(1/d)."""
    if isinstance(delta, float):
        delta = Fraction(repr(delta))
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise DomainError("need 0 < delta < 1")
    m = math.floor(1 / delta)
    x = delta * m
    return binary_entropy(float(x)) + float(x) * math.log2(m)


# ---------------------------------------------------------------------------
# codeword files


def write_codeword_file(code: CoveringCode, path: str | Path) -> None:
    lines = [
        f"# n={code.n}",
        f"# d={code.claimed_radius}",
        f"# metric={code.metric}",
        f"# provenance={code.provenance}",
        f"# size={code.size}",
    ]
    lines.extend(str(c) for c in code)
    Path(path).write_text("\n".join(lines) + "\n")


def read_codeword_file(path: str | Path) -> CoveringCode:
    meta: dict[str, str] = {}
    words: list[Permutation] = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key.strip()] = value.strip()
        else:
            words.append(parse_permutation(line))
    n = int(meta["n"]) if "n" in meta else len(words[0])
    d = meta.get("d")
    radius = int(d) if d not in (None, "None") else None
    code = CoveringCode(meta.get("metric", "chebyshev"), n, radius, meta.get("provenance", "file"), len(words), words)
    if "size" in meta and int(meta["size"]) != len(words):
        raise ValueError(f"header size {meta['size']} but {len(words)} codewords")
    return code


def diameter_code(metric: str, n: int) -> CoveringCode:
    """The single-codeword code {id}."""
    return CoveringCode(metric, n, diameter(metric, n), "identity", 1, [Permutation._trusted(range(1, n + 1))])


def full_space_code(metric: str, n: int) -> CoveringCode:
    P = all_permutations_array(n)
    words = [Permutation._trusted(row) for row in P.tolist()]
    return CoveringCode(metric, n, 0, "all of S_n", len(words), words)


def codes_from(metric: str, n: int, words: Iterable[Sequence[int]], provenance: str = "user") -> CoveringCode:
    ws = [w if isinstance(w, Permutation) else Permutation(w) for w in words]
    return CoveringCode(metric, n, None, provenance, len(ws), ws)
