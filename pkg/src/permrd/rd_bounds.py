"""Covering-size and rate bounds for S_n under d_K and d_C.

Sizes are exact rationals where the formula allows it.  Rates are in bits
per symbol: ``R = lg(M)/n`` and the normalized excess ``A = R - lg(n!)/n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .ball_volumes import ball_size
from .covering_codes import construction_rate_asymptotic
from .errors import DomainError
from .numerics import LG_E, binary_entropy, lg, lg_factorial

__all__ = [
    "DistortionQuery",
    "BoundSet",
    "RegimeParams",
    "SteinBound",
    "RateViews",
    "lg",
    "lg_factorial",
    "binary_entropy",
    "sphere_covering_lower",
    "stein_upper",
    "probabilistic_upper",
    "average_lower",
    "rate_views",
    "nonasymptotic_bounds",
    "kendall_excess",
    "kendall_A_lower",
    "kendall_A_upper",
    "kendall_A_upper_branches",
    "kendall_asymptotic",
    "wang_large_bounds",
    "chebyshev_rate_bounds",
    "chebyshev_lower_branches",
    "figure_data",
    "format_csv",
    "default_grid",
]


def _kl_form(delta: Fraction | float) -> float:
    # lg((1+d)^(1+d) / d^d)
    d = float(delta)
    return (1 + d) * math.log2(1 + d) - d * math.log2(d)


# ---------------------------------------------------------------------------
# queries and results


@dataclass(frozen=True)
class DistortionQuery:
    metric: str
    n: int
    D: int

    def __post_init__(self) -> None:
        if self.metric not in ("kendall", "chebyshev"):
            raise DomainError(f"unknown metric {self.metric!r}")
        if self.n < 1:
            raise DomainError("n must be positive")
        if self.D < 1:
            raise DomainError("distortion D must be a positive integer")

    @property
    def delta(self) -> Fraction:
        return Fraction(self.D, self.n)

    @property
    def flags(self) -> list[str]:
        out = []
        if self.metric == "kendall" and 4 * self.D >= self.n * (self.n - 1):
            out.append("D >= binom(n,2)/2: trivial-code regime")
        if self.metric == "chebyshev" and self.D > self.n - 1:
            out.append("D > n-1: beyond the Chebyshev diameter")
        return out

    def ball(self) -> int:
        return ball_size(self.metric, self.n, self.D)


@dataclass
class BoundSet:
    """Lower/upper bounds for one query.

    Any of the size, rate (R) or excess (A) fields may be None when the
    corresponding bound is only known on another scale.
    """

    n: int
    basis: str = "worst_case"
    lower_size: Fraction | None = None
    upper_size: Fraction | None = None
    lower_rate: float | None = None
    upper_rate: float | None = None
    lower_excess: float | None = None
    upper_excess: float | None = None
    strict_lower: bool = False
    provenance: list[str] = field(default_factory=list)
    error_terms: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._fill()

    def _fill(self) -> None:
        shift = lg_factorial(self.n) / self.n
        if self.lower_size is not None and self.lower_rate is None:
            self.lower_rate = lg(self.lower_size) / self.n
        if self.upper_size is not None and self.upper_rate is None:
            self.upper_rate = lg(self.upper_size) / self.n
        if self.lower_excess is not None and self.lower_rate is None:
            self.lower_rate = self.lower_excess + shift
        if self.upper_excess is not None and self.upper_rate is None:
            self.upper_rate = self.upper_excess + shift
        if self.lower_rate is not None and self.lower_excess is None:
            self.lower_excess = self.lower_rate - shift
        if self.upper_rate is not None and self.upper_excess is None:
            self.upper_excess = self.upper_rate - shift

    def rows(self) -> list[tuple[str, str]]:
        def fmt(v: object) -> str:
            if v is None:
                return "-"
            if isinstance(v, Fraction):
                return str(v) if v.denominator == 1 or v.numerator < 10**15 else f"{float(v):.12g}"
            return f"{v:.12g}"

        return [
            ("basis", self.basis),
            ("lower_size" + (" (strict)" if self.strict_lower else ""), fmt(self.lower_size)),
            ("upper_size", fmt(self.upper_size)),
            ("lower_rate", fmt(self.lower_rate)),
            ("upper_rate", fmt(self.upper_rate)),
            ("lower_excess", fmt(self.lower_excess)),
            ("upper_excess", fmt(self.upper_excess)),
            ("provenance", "; ".join(self.provenance) or "-"),
            ("error_terms", "; ".join(f"{k}: {v}" for k, v in self.error_terms.items()) or "-"),
        ]


@dataclass(frozen=True)
class RegimeParams:
    """Asymptotic Kendall regime: D = c n (small), c n^(1+alpha) (medium), c n^2 (large)."""

    regime: str
    c: Fraction
    alpha: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", Fraction(self.c))
        if self.alpha is not None:
            object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.regime not in ("small", "medium", "large"):
            raise DomainError(f"unknown regime {self.regime!r}")
        if self.c <= 0:
            raise DomainError("c must be positive")
        if self.regime == "medium" and (self.alpha is None or not 0 < self.alpha < 1):
            raise DomainError("medium regime needs 0 < alpha < 1")
        if self.regime == "large" and not self.c < Fraction(1, 2):
            raise DomainError("large regime needs 0 < c < 1/2")


@dataclass(frozen=True)
class SteinBound:
    """(n!/B) * (1 + ln B): exact prefactor times a float log factor."""

    prefactor: Fraction
    log_factor: float

    @property
    def value(self) -> float:
        return float(self.prefactor) * self.log_factor

    @property
    def lg(self) -> float:
        return lg(self.prefactor) + math.log2(self.log_factor)

    def as_fraction(self) -> Fraction:
        return self.prefactor * Fraction(self.log_factor)


@dataclass(frozen=True)
class RateViews:
    R: float
    A: float


# ---------------------------------------------------------------------------
# non-asymptotic bounds valid for any invariant metric


def _ball(q: DistortionQuery, ball: int | None) -> int:
    return q.ball() if ball is None else ball


def sphere_covering_lower(q: DistortionQuery, ball: int | None = None) -> Fraction:
    """n!/B(D) <= M_hat(D)."""
    return Fraction(math.factorial(q.n), _ball(q, ball))


def stein_upper(q: DistortionQuery, ball: int | None = None) -> SteinBound:
    """M_hat(D) <= (n!/B(D)) (1 + ln B(D))."""
    B = _ball(q, ball)
    return SteinBound(Fraction(math.factorial(q.n), B), 1.0 + math.log(B))


def probabilistic_upper(q: DistortionQuery, ball: int | None = None) -> int:
    """ceil(n! ln n! / B(D)), computed to enough digits to make the ceiling exact.

    Never less than 1: a code needs a codeword even when ln n! = 0.
    """
    B = _ball(q, ball)
    N = math.factorial(q.n)
    if N == 1:
        return 1
    with mpmath.workdps(len(str(N)) + 40):
        x = mpmath.mpf(N) * mpmath.log(N) / B
        m = int(mpmath.ceil(x))
        # ln N is irrational for N >= 2, so x is never an integer
        assert abs(x - mpmath.nint(x)) > mpmath.mpf(10) ** (-20)
    return max(1, m)


def average_lower(q: DistortionQuery, ball: int | None = None) -> Fraction:
    """n! / (B(D) (D+1)); the minimum average-distortion code is strictly larger."""
    return Fraction(math.factorial(q.n), _ball(q, ball) * (q.D + 1))


def rate_views(M: int | Fraction | float, n: int) -> RateViews:
    if M <= 0:
        raise DomainError("code size must be positive")
    R = lg(M) / n
    return RateViews(R, R - lg_factorial(n) / n)


def nonasymptotic_bounds(q: DistortionQuery, basis: str = "worst_case") -> BoundSet:
    """Sphere-covering / average lower bound against the better upper bound."""
    if basis not in ("worst_case", "average"):
        raise DomainError(f"unknown basis {basis!r}")
    B = q.ball()
    stein = stein_upper(q, B)
    prob = probabilistic_upper(q, B)
    if stein.lg <= lg(prob):
        upper, up_tag = stein.as_fraction(), "stein: (n!/B)(1+ln B)"
    else:
        upper, up_tag = Fraction(prob), "probabilistic: ceil(n! ln n!/B)"
    if basis == "worst_case":
        lower, lo_tag, strict = sphere_covering_lower(q, B), "sphere covering: n!/B", False
    else:
        lower, lo_tag, strict = average_lower(q, B), "average: n!/(B(D+1)), strict", True
    return BoundSet(
        n=q.n,
        basis=basis,
        lower_size=lower,
        upper_size=upper,
        strict_lower=strict,
        provenance=[lo_tag, up_tag, f"B(D)={B}"] + q.flags,
    )


# ---------------------------------------------------------------------------
# Kendall finite-n bounds on A


def _check_kendall_D(n: int, D: int) -> None:
    if D < 1:
        raise DomainError("D must be >= 1")
    if 4 * D >= n * (n - 1):
        raise DomainError(f"need D < binom(n,2)/2 = {Fraction(n * (n - 1), 4)} (n={n}, D={D})")


def kendall_excess(n: int, D: int) -> float:
    """-lg((1+d)^(1+d)/d^d) at d = D/n."""
    return -_kl_form(Fraction(D, n))


def kendall_A_lower(n: int, D: int) -> dict[str, float]:
    """Lower bounds on the worst-case and average excess."""
    _check_kendall_D(n, D)
    worst = kendall_excess(n, D)
    return {"worst": worst, "average": worst - math.log2(n) / n}


def kendall_A_upper_branches(n: int, D: int) -> dict[str, float | None]:
    """Both upper-bound formulas at d = D/n; the floor branch needs d >= 1."""
    delta = Fraction(D, n)
    small = kendall_excess(n, D) + (3 * math.log2(n) + 12) / (2 * n)
    t = 1 + D // n
    if delta >= 1:
        large = -math.log2(t) + (math.log2(n) + t * LG_E + math.log2(math.log(t))) / n
    else:
        large = None
    return {"delta_lt_1": small, "delta_ge_1": large}


def kendall_A_upper(n: int, D: int) -> tuple[float, str]:
    """Upper bound on the excess (worst case, hence also average)."""
    _check_kendall_D(n, D)
    branches = kendall_A_upper_branches(n, D)
    if D < n:
        return branches["delta_lt_1"], "delta_lt_1"
    return branches["delta_ge_1"], "delta_ge_1"


def kendall_asymptotic(params: RegimeParams, n: int) -> BoundSet:
    """Leading terms of the small/medium/large distortion excess bounds."""
    c = float(params.c)
    if params.regime == "small":
        lead = -_kl_form(params.c)
        return BoundSet(
            n=n,
            lower_excess=lead,
            upper_excess=lead,
            provenance=["small distortion, D = c n + O(1); also holds for the average"],
            error_terms={"lower": "O(lg n / n)", "upper": "O(lg n / n)"},
        )
    if params.regime == "medium":
        a = float(params.alpha)
        base = math.log2(c) + a * math.log2(n)
        return BoundSet(
            n=n,
            lower_excess=-(LG_E + base),
            upper_excess=-base,
            provenance=["medium distortion, D = c n^(1+alpha) + O(n)"],
            error_terms={"lower": "O(n^-alpha)", "upper": "O(n^-alpha + n^(alpha-1))"},
        )
    lower = -math.log2(math.e * c * n)
    return BoundSet(
        n=n,
        lower_excess=lower,
        upper_excess=lower + (1 + c) * LG_E,
        provenance=["large distortion, D = c n^2 + O(n)"],
        error_terms={"lower": "O(1/n)", "upper": "O(lg n / n)"},
    )


def wang_large_bounds(c: Fraction | float, n: int) -> dict[str, float]:
    """Earlier large-distortion bounds used as comparison curves."""
    c = Fraction(c)
    if not 0 < c < Fraction(1, 2):
        raise DomainError("need 0 < c < 1/2")
    ceil_term = math.ceil(1 / (2 * c))
    return {
        "lower": -math.log2(math.e * float(c) * n) - 1,
        "upper": -math.log2(n / (math.e * ceil_term)),
    }


# ---------------------------------------------------------------------------
# Chebyshev


def chebyshev_lower_branches(delta: Fraction | float) -> tuple[float, float]:
    d = float(delta)
    low_branch = math.log2(1 / (2 * d)) + 2 * d * math.log2(math.e / 2)
    high_branch = 2 * d * math.log2(d) + 2 * (1 - d) * LG_E
    return low_branch, high_branch


def chebyshev_upper_branches(delta: Fraction | float) -> tuple[float, float]:
    d = float(delta)
    return math.log2(1 / (2 * d)) + 2 * d, 2 * (1 - d)


def chebyshev_rate_bounds(delta: Fraction | float, n: int | None = None, basis: str = "worst_case") -> BoundSet:
    """Leading terms of the Chebyshev rate bounds, split at delta = 1/2.

    The same leading terms bound both the worst-case and average rate.
    """
    delta = Fraction(delta).limit_denominator(10**9) if isinstance(delta, float) else Fraction(delta)
    if not 0 < delta < 1:
        raise DomainError("need 0 < delta < 1")
    if n is not None and (delta * n).denominator != 1:
        raise DomainError(f"delta*n must be an integer (delta={delta}, n={n})")
    lows = chebyshev_lower_branches(delta)
    ups = chebyshev_upper_branches(delta)
    i = 0 if delta <= Fraction(1, 2) else 1
    return BoundSet(
        n=n or 1,
        basis=basis,
        lower_rate=lows[i],
        upper_rate=ups[i],
        provenance=["chebyshev rate bounds, branch " + ("delta <= 1/2" if i == 0 else "delta >= 1/2")],
        error_terms={"lower": "O(lg n / n)", "upper": "O(lg n / n)"},
    )


# ---------------------------------------------------------------------------
# figure tables


def default_grid(fig_id: str, n: int = 50) -> list:
    if fig_id == "fig1":
        return [D for D in range(1, n * (n - 1) // 4 + 1) if 4 * D < n * (n - 1)]
    if fig_id == "fig2":
        return [Fraction(k, 100) for k in range(1, 50)]
    if fig_id == "fig3":
        return [Fraction(k, 50) for k in range(1, 50)]
    raise DomainError(f"unknown figure {fig_id!r}")


def figure_data(fig_id: str, n: int | None = None, grid: Sequence | None = None) -> tuple[list[str], list[list]]:
    """Header and rows for one figure; values are the leading terms only."""
    if fig_id == "fig1":
        n = 50 if n is None else n
        grid = default_grid("fig1", n) if grid is None else list(grid)
        header = ["D", "delta", "lower_worst", "lower_average", "upper", "upper_branch",
                  "upper_delta_lt_1", "upper_delta_ge_1", "gap"]
        rows = []
        for D in grid:
            lo = kendall_A_lower(n, D)
            up, branch = kendall_A_upper(n, D)
            br = kendall_A_upper_branches(n, D)
            rows.append([D, D / n, lo["worst"], lo["average"], up, branch,
                         br["delta_lt_1"], br["delta_ge_1"], up - lo["worst"]])
        return header, rows
    if fig_id == "fig2":
        n = 1000 if n is None else n
        grid = default_grid("fig2") if grid is None else list(grid)
        header = ["c", "lower", "upper", "wang_lower", "wang_upper"]
        rows = []
        shift = math.log2(n)
        for c in grid:
            b = kendall_asymptotic(RegimeParams("large", c), n)
            w = wang_large_bounds(c, n)
            rows.append([float(c), b.lower_excess + shift, b.upper_excess + shift,
                         w["lower"] + shift, w["upper"] + shift])
        return header, rows
    if fig_id == "fig3":
        grid = default_grid("fig3") if grid is None else list(grid)
        header = ["delta", "lower", "upper", "construction"]
        rows = []
        for d in grid:
            b = chebyshev_rate_bounds(d)
            rows.append([float(d), b.lower_rate, b.upper_rate, construction_rate_asymptotic(d)])
        return header, rows
    raise DomainError(f"unknown figure {fig_id!r}")


def _cell(v: object) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def format_csv(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"
