"""Exact ball and sphere sizes in S_n and the classical bounds on them.

All exact paths use Python integers; floats appear only in the log-scale
Bregman bound and in the gamma-product estimate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import config
from .errors import DomainError, ExactComputationInfeasible, OracleScaleError
from .perm_core import all_permutations_array, distance, distance_matrix, enumerate_permutations, identity

__all__ = [
    "binom",
    "kendall_diameter",
    "chebyshev_diameter",
    "diameter",
    "kendall_ball_exact",
    "kendall_sphere_exact",
    "kendall_sphere_formula",
    "kendall_ball_upper_binom",
    "kendall_ball_lower_quarter",
    "kendall_ball_lower_floor",
    "chebyshev_ball_exact",
    "permanent_band_dp",
    "permanent_ryser",
    "permanent_corner_rooks",
    "band_matrix",
    "BregmanBound",
    "chebyshev_ball_upper_bregman",
    "chebyshev_ball_lower",
    "chebyshev_row_degrees",
    "bregman_from_row_degrees",
    "ball_size",
    "ball_brute_force",
    "ball_sizes_brute_force",
    "ball_brute_force_naive",
    "kendall_ball_ratio",
    "default_num_factors",
    "gamma_product",
    "estimate_Kc",
    "KcEstimate",
    "FormulaRangeWarning",
]


class FormulaRangeWarning(UserWarning):
    """The alternating sphere formula disagrees with the DP outside r < n."""


def binom(a: int, b: int) -> int:
    """Binomial coefficient, 0 when b < 0, a < 0 or b > a."""
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


def kendall_diameter(n: int) -> int:
    return n * (n - 1) // 2


def chebyshev_diameter(n: int) -> int:
    return n - 1


def diameter(metric: str, n: int) -> int:
    if metric == "kendall":
        return kendall_diameter(n)
    if metric == "chebyshev":
        return chebyshev_diameter(n)
    raise ValueError(f"unknown metric {metric!r}")


def _check_n(n: int) -> None:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")


# ---------------------------------------------------------------------------
# Kendall


@lru_cache(maxsize=256)
def _mahonian_row(n: int, upto: int) -> tuple[int, ...]:
    """Coefficients of prod_{i=1}^n (1-z^i)/(1-z) truncated to degree `upto`."""
    row = [1] + [0] * upto
    for i in range(2, n + 1):
        # multiply by 1 + z + ... + z^{i-1} via a sliding window of width i
        prefix = [0] * (upto + 2)
        for k in range(upto + 1):
            prefix[k + 1] = prefix[k] + row[k]
        row = [prefix[k + 1] - prefix[max(0, k - i + 1)] for k in range(upto + 1)]
    return tuple(row)


def kendall_ball_exact(n: int, r: int) -> int:
    """|{x in X_n : sum x_i <= r}|, the Kendall ball of radius r."""
    _check_n(n)
    if r < 0:
        raise DomainError("radius must be nonnegative")
    r = min(r, kendall_diameter(n))
    return sum(_mahonian_row(n, r))


def kendall_sphere_formula(n: int, r: int) -> int:
    """The pentagonal alternating sum for I(n, r), evaluated as written."""
    _check_n(n)
    if r < 0:
        raise DomainError("radius must be nonnegative")
    total = binom(n + r - 1, r) - (binom(n + r - 2, r - 1) + binom(n + r - 3, r - 2))
    j = 2
    while True:
        u = (3 * j * j + j) // 2
        if u - j > r:
            break
        f = binom(n + r - (u - j) - 1, r - (u - j)) + binom(n + r - u - 1, r - u)
        total += f if j % 2 == 0 else -f
        j += 1
    return total


def kendall_sphere_exact(n: int, r: int) -> int:
    """Number of permutations at Kendall distance exactly r from id.

    Returns the alternating-sum value.  For r >= n that formula is not
    guaranteed; it is then compared with the DP and a
    :class:`FormulaRangeWarning` is emitted on disagreement.
    """
    _check_n(n)
    if not 0 <= r <= kendall_diameter(n):
        raise DomainError(f"r={r} outside [0, {kendall_diameter(n)}]")
    value = kendall_sphere_formula(n, r)
    if r >= n:
        dp = _mahonian_row(n, r)[r]
        if dp != value:
            warnings.warn(
                f"I({n},{r}): alternating sum gives {value}, DP gives {dp} (r >= n)",
                FormulaRangeWarning,
                stacklevel=2,
            )
    return value


def kendall_ball_upper_binom(n: int, r: int) -> int:
    """binom(r+n-1, r) >= B_K(r): count of all nonnegative solutions."""
    _check_n(n)
    if r < 1:
        raise DomainError("requires r >= 1")
    return binom(r + n - 1, r)


def kendall_ball_lower_quarter(n: int, r: int) -> Fraction:
    """(1/4) binom(n+r-1, r) <= B_K(r), valid for 1 <= r < n."""
    _check_n(n)
    if not 1 <= r < n:
        raise DomainError(f"quarter-binomial lower bound needs 1 <= r < n (got n={n}, r={r})")
    return Fraction(binom(n + r - 1, r), 4)


def kendall_ball_lower_floor(n: int, D: int) -> int:
    """t! * t^(n-t) <= B_K(D) with t = floor(1 + D/n).

    t is capped at n; beyond that the counted box is all of X_n.
    """
    _check_n(n)
    if D < 0:
        raise DomainError("D must be nonnegative")
    t = min(1 + D // n, n)
    return math.factorial(t) * t ** (n - t)


# ---------------------------------------------------------------------------
# Chebyshev: permanents of the band matrix |i-j| <= r


def band_matrix(n: int, r: int) -> list[list[int]]:
    return [[1 if abs(i - j) <= r else 0 for j in range(n)] for i in range(n)]


def permanent_band_dp(n: int, r: int) -> int:
    """Permanent of the n x n band matrix by a sliding-window column DP.

    The state after row i records which of columns i-r+1 .. i+r are taken;
    column i-r must be filled by row i because no later row can reach it.
    """
    if r >= n - 1:
        return math.factorial(n)
    width = 2 * r + 1
    states = {0: 1}
    for i in range(n):
        nxt: dict[int, int] = {}
        leftmost_exists = i - r >= 0
        for mask, cnt in states.items():
            for k in range(width):
                j = i - r + k
                if j < 0 or j >= n or mask >> k & 1:
                    continue
                m2 = mask | 1 << k
                if leftmost_exists and not m2 & 1:
                    continue
                key = m2 >> 1
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
    return sum(states.values())


def permanent_ryser(matrix: list[list[int]]) -> int:
    """Ryser's formula with Gray-code subset order, exact integers."""
    n = len(matrix)
    if n == 0:
        return 1
    rows = [list(map(int, row)) for row in matrix]
    sums = [0] * n
    total = 0
    gray_prev = 0
    for k in range(1, 1 << n):
        g = k ^ (k >> 1)
        changed = g ^ gray_prev
        col = changed.bit_length() - 1
        if g & changed:
            for i in range(n):
                sums[i] += rows[i][col]
        else:
            for i in range(n):
                sums[i] -= rows[i][col]
        gray_prev = g
        prod = 1
        for s in sums:
            if not s:
                prod = 0
                break
            prod *= s
        if prod:
            size = bin(g).count("1")
            total += prod if size % 2 == 0 else -prod
    total *= -1 if n % 2 else 1
    # Ryser: per(A) = (-1)^n sum_S (-1)^{|S|} prod_i sum_{j in S} a_ij
    return total


@lru_cache(maxsize=None)
def _stirling2(m: int, k: int) -> int:
    if m == k:
        return 1
    if k == 0 or k > m:
        return 0
    return k * _stirling2(m - 1, k) + _stirling2(m - 1, k - 1)


def permanent_corner_rooks(n: int, r: int) -> int:
    """Band permanent for r >= (n-1)/2 via rook polynomials of the corners.

    The zeros form two staircase boards (rows of length 1..m, m = n-r-1)
    in disjoint rows and columns; a staircase has rook numbers
    S(m+1, m+1-k).  per = sum_k (-1)^k r_k(zeros) (n-k)!.
    """
    if 2 * r + 1 < n:
        raise DomainError("corner boards overlap when r < (n-1)/2")
    m = n - r - 1
    if m <= 0:
        return math.factorial(n)
    stair = [_stirling2(m + 1, m + 1 - k) for k in range(m + 1)]
    rooks = [0] * (2 * m + 1)
    for a, ra in enumerate(stair):
        for b, rb in enumerate(stair):
            rooks[a + b] += ra * rb
    return sum((-1) ** k * rk * math.factorial(n - k) for k, rk in enumerate(rooks))


def chebyshev_ball_exact(n: int, r: int) -> int:
    """B_C(r) = per of the band matrix, by the cheapest exact route.

    Strategy ladder: band DP while 2r+1 fits the bit budget, the corner
    rook formula when r >= (n-1)/2, Ryser up to the configured n; otherwise
    :class:`ExactComputationInfeasible` carrying both bounds.
    """
    _check_n(n)
    if r < 0:
        raise DomainError("radius must be nonnegative")
    if r >= n - 1:
        return math.factorial(n)
    if 2 * r + 1 <= config.BAND_DP_MAX_BITS:
        return permanent_band_dp(n, r)
    if 2 * r + 1 >= n:
        return permanent_corner_rooks(n, r)
    if n <= config.RYSER_MAX_N:
        return permanent_ryser(band_matrix(n, r))
    raise ExactComputationInfeasible(
        f"B_C(n={n}, r={r})",
        {
            "lower": chebyshev_ball_lower(n, r),
            "upper_ln": chebyshev_ball_upper_bregman(n, r).ln_value,
        },
    )


@dataclass(frozen=True)
class BregmanBound:
    """prod_k (k!)^{e_k}, kept as exact (k, e_k) pairs plus its natural log."""

    factors: tuple[tuple[int, Fraction], ...]
    ln_value: float

    @property
    def value(self) -> float:
        return math.exp(self.ln_value)

    @property
    def exact(self) -> int | None:
        """The bound as an integer when every exponent is integral."""
        if all(e.denominator == 1 for _, e in self.factors):
            out = 1
            for k, e in self.factors:
                out *= math.factorial(k) ** int(e)
            return out
        return None


def _bregman_from_degrees(degrees: list[int]) -> BregmanBound:
    expo: dict[int, Fraction] = {}
    for d in degrees:
        expo[d] = expo.get(d, Fraction(0)) + Fraction(1, d)
    factors = tuple(sorted(expo.items()))
    ln_value = math.fsum(float(e) * math.lgamma(k + 1) for k, e in factors)
    return BregmanBound(factors, ln_value)


def chebyshev_ball_upper_bregman(n: int, r: int) -> BregmanBound:
    """Bregman's bound for the band matrix, in the two-case closed form."""
    _check_n(n)
    if not 0 <= r <= n - 1:
        raise DomainError(f"need 0 <= r <= n-1 (n={n}, r={r})")
    expo: dict[int, Fraction] = {}
    if 2 * r <= n - 1:
        if n - 2 * r:
            expo[2 * r + 1] = Fraction(n - 2 * r, 2 * r + 1)
        lo, hi = r + 1, 2 * r
    else:
        if 2 * r + 2 - n:
            expo[n] = Fraction(2 * r + 2 - n, n)
        lo, hi = r + 1, n - 1
    for i in range(lo, hi + 1):
        expo[i] = expo.get(i, Fraction(0)) + Fraction(2, i)
    factors = tuple(sorted((k, e) for k, e in expo.items() if e))
    ln_value = math.fsum(float(e) * math.lgamma(k + 1) for k, e in factors)
    return BregmanBound(factors, ln_value)


def chebyshev_row_degrees(n: int, r: int) -> list[int]:
    return [min(n - 1, i + r) - max(0, i - r) + 1 for i in range(n)]


def bregman_from_row_degrees(n: int, r: int) -> BregmanBound:
    """Bregman's product taken directly over the row sums of the band matrix."""
    return _bregman_from_degrees(chebyshev_row_degrees(n, r))


def chebyshev_ball_lower(n: int, r: int) -> Fraction:
    """Van der Waerden style lower bound on B_C(r)."""
    _check_n(n)
    if not 0 <= r <= n - 1:
        raise DomainError(f"need 0 <= r <= n-1 (n={n}, r={r})")
    if 2 * r <= n - 1:
        return Fraction((2 * r + 1) ** n * math.factorial(n), 2 ** (2 * r) * n**n)
    return Fraction(math.factorial(n), 2 ** (2 * (n - r)))


# ---------------------------------------------------------------------------
# generic


def ball_size(metric: str, n: int, r: int) -> int:
    """Exact ball size; radii beyond the diameter give n!."""
    if metric == "kendall":
        return kendall_ball_exact(n, r)
    if metric == "chebyshev":
        return chebyshev_ball_exact(n, r)
    raise ValueError(f"unknown metric {metric!r}")


def ball_brute_force(metric: str, n: int, r: int, cap: int | None = None) -> int:
    """Count {s : d(s, id) <= r} by enumerating S_n."""
    cap = config.BALL_ORACLE_CAP if cap is None else cap
    if n > cap:
        raise OracleScaleError("ball_brute_force", n, cap)
    P = all_permutations_array(n)
    d = distance_matrix(metric, P, P[:1])  # row 0 is the identity
    return int((d[:, 0] <= r).sum())


def ball_sizes_brute_force(metric: str, n: int, cap: int | None = None) -> list[int]:
    """[B(0), B(1), ..., B(diameter)] from a single enumeration."""
    cap = config.BALL_ORACLE_CAP if cap is None else cap
    if n > cap:
        raise OracleScaleError("ball_sizes_brute_force", n, cap)
    P = all_permutations_array(n)
    assert tuple(P[0]) == identity(n)
    d = distance_matrix(metric, P, P[:1])[:, 0]
    counts = [0] * (diameter(metric, n) + 1)
    for v in d.tolist():
        counts[v] += 1
    out, acc = [], 0
    for c in counts:
        acc += c
        out.append(acc)
    return out


def ball_brute_force_naive(metric: str, n: int, r: int) -> int:
    """Pure-Python enumeration; slow, kept independent of the numpy path."""
    e = identity(n)
    return sum(1 for s in enumerate_permutations(n) if distance(metric, s, e) <= r)


# ---------------------------------------------------------------------------
# gamma product and K_c


def gamma_product(z: float, num_factors: int) -> float:
    """prod_{i=2}^{num_factors} (1 - z^i); num_factors=1 is the empty product."""
    if not 0 < z < 1:
        raise DomainError(f"z must lie in (0, 1), got {z}")
    if num_factors < 1:
        raise DomainError("num_factors must be positive")
    out = 1.0
    zi = z
    for _ in range(2, num_factors + 1):
        zi *= z
        out *= 1.0 - zi
    return out


@dataclass(frozen=True)
class KcEstimate:
    value: float
    num_factors: int
    # K_c lies in [value * exp(-tail_bound), value]
    tail_bound: float

    @property
    def lower(self) -> float:
        return self.value * math.exp(-self.tail_bound)


def default_num_factors(z: float) -> int:
    return 10 * math.ceil(1 / (1 - z))


def estimate_Kc(c: float, num_factors: int | None = None) -> KcEstimate:
    """Partial product gamma(c/(1+c), N) with a bound on the omitted tail.

    For factors i > N, -ln(1 - z^i) <= z^i / (1 - z), so the tail costs at
    most z^{N+1} / (1-z)^2 in log.
    """
    if c <= 0:
        raise DomainError("c must be positive")
    z = c / (1 + c)
    N = default_num_factors(z) if num_factors is None else num_factors
    value = gamma_product(z, N)
    tail = z ** (N + 1) / (1 - z) ** 2
    return KcEstimate(value, N, tail)


def kendall_ball_ratio(n: int, k: int) -> Fraction:
    """B_K(k) / binom(n+k-1, k), exact."""
    return Fraction(kendall_ball_exact(n, k), binom(n + k - 1, k))
