"""Self-contained oracle and property suite behind ``permrd verify all``.

Each check returns ``(ok, detail)``; :func:`run_all` collects them into a
pass/fail matrix.  Everything is computed from scratch, nothing is read from
disk.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import ball_volumes as bv
from . import covering_codes as cc
from . import perm_core as pc
from . import rd_bounds as rb

TOL = 1e-9


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def _fib(k: int) -> int:
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def check_ball_oracle(max_n: int) -> tuple[bool, str]:
    bad = []
    for metric in pc.METRICS:
        for n in range(2, max_n + 1):
            brute = bv.ball_sizes_brute_force(metric, n)
            exact = [bv.ball_size(metric, n, r) for r in range(len(brute))]
            if exact != brute:
                bad.append(f"{metric} n={n}")
    return not bad, "mismatch: " + ", ".join(bad) if bad else f"n=2..{max_n}, both metrics"


def check_sphere_formula(max_n: int) -> tuple[bool, str]:
    bad = [
        (n, r)
        for n in range(1, max_n + 1)
        for r in range(n)
        if bv.kendall_sphere_formula(n, r) != bv.kendall_ball_exact(n, r) - (bv.kendall_ball_exact(n, r - 1) if r else 0)
    ]
    return not bad, f"bad (n,r): {bad}" if bad else f"n<={max_n}, r<n"


def check_mahonian_symmetry(max_n: int) -> tuple[bool, str]:
    for n in range(1, max_n + 1):
        m = bv.kendall_diameter(n)
        row = [bv.kendall_ball_exact(n, r) - (bv.kendall_ball_exact(n, r - 1) if r else 0) for r in range(m + 1)]
        if row != row[::-1]:
            return False, f"asymmetric at n={n}"
    return True, f"n<={max_n}"


def check_sandwiches(max_n: int = 12) -> tuple[bool, str]:
    for n in range(2, max_n + 1):
        for r in range(1, n):
            e = bv.kendall_ball_exact(n, r)
            if not bv.kendall_ball_lower_quarter(n, r) <= e <= bv.kendall_ball_upper_binom(n, r):
                return False, f"kendall n={n} r={r}"
    for n in range(1, max_n + 1):
        for r in range(n):
            e = bv.chebyshev_ball_exact(n, r)
            lo = math.log(bv.chebyshev_ball_lower(n, r))
            up = bv.chebyshev_ball_upper_bregman(n, r).ln_value
            if not (lo <= math.log(e) + TOL and math.log(e) <= up + TOL):
                return False, f"chebyshev n={n} r={r}"
    return True, f"n<={max_n}"


def check_fibonacci(max_n: int = 12) -> tuple[bool, str]:
    bad = [n for n in range(1, max_n + 1) if bv.chebyshev_ball_exact(n, 1) != _fib(n + 1)]
    return not bad, f"bad n: {bad}" if bad else f"n<={max_n}"


def check_permanent_routes(max_n: int = 10) -> tuple[bool, str]:
    for n in range(1, max_n + 1):
        for r in range(n):
            a = bv.permanent_band_dp(n, r)
            if a != bv.permanent_ryser(bv.band_matrix(n, r)):
                return False, f"band DP vs Ryser n={n} r={r}"
            if 2 * r + 1 >= n and a != bv.permanent_corner_rooks(n, r):
                return False, f"band DP vs corner rooks n={n} r={r}"
    return True, f"n<={max_n}"


def check_metric_axioms(max_n: int = 5) -> tuple[bool, str]:
    for metric in pc.METRICS:
        for n in range(1, max_n + 1):
            P = pc.all_permutations_array(n)
            M = pc.distance_matrix(metric, P, P)
            if not ((M >= 0).all() and (M == M.T).all()):
                return False, f"{metric} n={n}: sign/symmetry"
            if not ((M == 0) == np.eye(len(P), dtype=bool)).all():
                return False, f"{metric} n={n}: identity of indiscernibles"
            for k in range(len(P)):
                if (M > M[:, k : k + 1] + M[k : k + 1, :]).any():
                    return False, f"{metric} n={n}: triangle via {k}"
    return True, f"exhaustive pairs and triples, n<={max_n}"


def check_center_independence(max_n: int = 5) -> tuple[bool, str]:
    for metric in pc.METRICS:
        for n in range(1, max_n + 1):
            P = pc.all_permutations_array(n)
            M = pc.distance_matrix(metric, P, P)
            for r in range(bv.diameter(metric, n) + 1):
                sizes = (M <= r).sum(axis=1)
                if (sizes != sizes[0]).any():
                    return False, f"{metric} n={n} r={r}"
    return True, f"n<={max_n}"


def check_invariance(n: int = 4) -> tuple[bool, str]:
    rep = pc.invariance_report(n)
    ok = rep["kendall"]["left"] and rep["chebyshev"]["right"]
    return ok, f"n={n}: " + ", ".join(f"{m} left={v['left']} right={v['right']}" for m, v in rep.items())


def check_bijection(max_n: int = 6) -> tuple[bool, str]:
    for n in range(1, max_n + 1):
        seen = set()
        e = pc.identity(n)
        for p in pc.enumerate_permutations(n):
            x = pc.perm_to_inversion_vector(p)
            if pc.inversion_vector_to_perm(x) != p or sum(x) != pc.kendall_distance(p, e):
                return False, f"n={n} at {p}"
            seen.add(x)
        if len(seen) != math.factorial(n):
            return False, f"n={n} not injective"
    return True, f"n<={max_n}"


def check_restriction_duality(n: int = 5) -> tuple[bool, str]:
    subsets = [s for k in range(1, n + 1) for s in itertools.combinations(range(1, n + 1), k)]
    for p in pc.enumerate_permutations(n):
        ip = pc.inverse(p)
        for A in subsets:
            if pc.restrict_values(p, A) != pc.inverse(pc.restrict_positions(ip, A)):
                return False, f"{p} A={A}"
    return True, f"all p in S_{n}, all nonempty A"


def check_exact_covers(ns=(3, 4, 5)) -> tuple[bool, str]:
    notes = []
    for metric in pc.METRICS:
        for n in ns:
            for D in range(1, bv.diameter(metric, n) + 1):
                q = rb.DistortionQuery(metric, n, D)
                B = q.ball()
                w = cc.minimal_cover_exact(metric, n, D, "worst_case")
                a = cc.minimal_cover_exact(metric, n, D, "average")
                if not (w.optimal and a.optimal):
                    return False, f"{metric} n={n} D={D}: solver did not prove optimality"
                if not rb.sphere_covering_lower(q, B) <= w.size <= rb.stein_upper(q, B).value + TOL:
                    return False, f"{metric} n={n} D={D}: worst {w.size} outside bounds"
                if not a.size > rb.average_lower(q, B):
                    return False, f"{metric} n={n} D={D}: average {a.size} not above bound"
    k31 = cc.minimal_cover_exact("kendall", 3, 1).size
    c31 = cc.minimal_cover_exact("chebyshev", 3, 1).size
    notes.append(f"M_K(3,1)={k31}, M_C(3,1)={c31}")
    return k31 == 2 and c31 == 2, "; ".join(notes)


def check_construction(max_n: int) -> tuple[bool, str]:
    for n in range(2, max_n + 1):
        for d in range(1, n):
            code = cc.construction_code(n, d)
            words = list(code)
            bs = code.blocks
            if len(words) != len(set(words)) or len(words) != cc.construction_size(n, d):
                return False, f"size n={n} d={d}"
            if not all(cc.is_codeword(w, bs) for w in words):
                return False, f"membership n={n} d={d}"
            if cc.covering_radius(code, "brute_force") != d:
                return False, f"radius n={n} d={d}"
    code = cc.construction_code(4, 1)
    ok = code.size == 6 and cc.covering_radius(code) == 1
    return ok, f"n<={max_n}, all d; (4,1) -> size {code.size}"


def check_construction_rate(n: int = 1000) -> tuple[bool, str]:
    worst = 0.0
    for delta in (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)):
        d = int(delta * n)
        rate = rb.lg(cc.construction_size(n, d)) / n
        worst = max(worst, abs(rate - cc.construction_rate_asymptotic(delta)))
    ok = worst <= 0.05 and abs(cc.construction_rate_asymptotic(Fraction(1, 2)) - 1.0) < TOL
    return ok, f"max deviation {worst:.4f} at n={n}"


def check_fig1(n: int = 50) -> tuple[bool, str]:
    header, rows = rb.figure_data("fig1", n=n)
    lo_col, up_col = header.index("lower_worst"), header.index("upper")
    ok = all(r[up_col] >= r[lo_col] for r in rows)
    spot = next(r for r in rows if r[0] == n)[lo_col]
    ok = ok and abs(spot + 2.0) < TOL
    return ok, f"{len(rows)} rows, LB(delta=1)={spot:.12g}"


def check_fig2() -> tuple[bool, str]:
    header, rows = rb.figure_data("fig2")
    diffs = [r[1] - r[3] for r in rows]
    ok = all(abs(x - 1.0) < TOL for x in diffs)
    return ok, f"{len(rows)} values of c, ours minus comparison lower in [{min(diffs):.12g}, {max(diffs):.12g}]"


def check_fig3() -> tuple[bool, str]:
    header, rows = rb.figure_data("fig3")
    lows = rb.chebyshev_lower_branches(Fraction(1, 2))
    target = rb.LG_E - 1
    ok = all(abs(v - target) < TOL for v in lows)
    ok = ok and all(r[3] >= r[1] - TOL for r in rows) and all(r[2] >= r[1] - TOL for r in rows)
    half = next(r for r in rows if r[0] == 0.5)
    ok = ok and abs(half[3] - 1.0) < TOL
    return ok, f"lower branches at 1/2: {lows[0]:.6f}, {lows[1]:.6f}; construction(1/2)={half[3]:.12g}"


def check_greedy(ns=(4, 5, 6)) -> tuple[bool, str]:
    for metric in pc.METRICS:
        for n in ns:
            for D in range(1, bv.diameter(metric, n) + 1):
                g = cc.greedy_cover(metric, n, D)
                q = rb.DistortionQuery(metric, n, D)
                if g.size > rb.stein_upper(q).value + TOL:
                    return False, f"{metric} n={n} D={D}: greedy {g.size}"
                if cc.covering_radius(g) > D:
                    return False, f"{metric} n={n} D={D}: not a cover"
    return True, f"n in {list(ns)}, both metrics, all D"


def checks(max_n: int = 8) -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    return [
        ("ball oracle equivalence", lambda: check_ball_oracle(max_n)),
        ("kendall sphere formula", lambda: check_sphere_formula(max_n)),
        ("mahonian symmetry", lambda: check_mahonian_symmetry(max_n)),
        ("ball sandwiches", lambda: check_sandwiches(12)),
        ("chebyshev fibonacci", lambda: check_fibonacci(12)),
        ("permanent routes agree", lambda: check_permanent_routes(10)),
        ("metric axioms", lambda: check_metric_axioms(5)),
        ("center independence", lambda: check_center_independence(5)),
        ("invariance sides", lambda: check_invariance(4)),
        ("inversion-vector bijection", lambda: check_bijection(6)),
        ("restriction duality", lambda: check_restriction_duality(5)),
        ("exact minimal covers", lambda: check_exact_covers((3, 4, 5))),
        ("construction size and radius", lambda: check_construction(max_n)),
        ("construction rate", lambda: check_construction_rate(1000)),
        ("fig1 table", lambda: check_fig1(50)),
        ("fig2 table", check_fig2),
        ("fig3 table", check_fig3),
        ("greedy within stein", lambda: check_greedy((4, 5, 6))),
    ]


def run_all(max_n: int = 8, echo: Callable[[str], None] | None = None) -> list[CheckResult]:
    results = []
    for name, fn in checks(max_n):
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        res = CheckResult(name, ok, detail, time.perf_counter() - t0)
        results.append(res)
        if echo is not None:
            echo(format_result(res))
    return results


def format_result(res: CheckResult) -> str:
    return f"{'PASS' if res.ok else 'FAIL'}  {res.name:<30} {res.detail}"
