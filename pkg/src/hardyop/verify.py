"""Named verification checks: every closed-form formula is recomputed through
the independent compression/quadrature machinery at fixed tolerances.

Each check returns a CheckResult with the smallest slack over its assertions;
the CLI `verify` command and the acceptance test suite both run these.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass

import numpy as np

from . import analysis, closedform, compop, hardy, numrange, symbolic
from .symbolic import parse_symbol


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    margin: float                  # smallest slack across assertions
    assertions: tuple[dict, ...]   # label, ok, slack per assertion
    elapsed_ms: float


class _Checker:
    def __init__(self):
        self.items: list[dict] = []

    def close(self, label: str, value: float, target: float, tol: float):
        err = abs(value - target)
        self.items.append({"label": label, "ok": err <= tol, "slack": tol - err,
                           "value": float(value), "target": float(target)})

    def le(self, label: str, value: float, bound: float):
        self.items.append({"label": label, "ok": value <= bound, "slack": bound - value,
                           "value": float(value), "target": float(bound)})

    def gt(self, label: str, value: float, bound: float):
        self.items.append({"label": label, "ok": value > bound, "slack": value - bound,
                           "value": float(value), "target": float(bound)})

    def ok(self, label: str, cond: bool):
        # boolean assertions have no slack scale; don't mask numeric margins
        self.items.append({"label": label, "ok": bool(cond),
                           "slack": math.inf if cond else -1.0,
                           "value": float(bool(cond)), "target": 1.0})

    def result(self, name: str, t0: float) -> CheckResult:
        margin = min((it["slack"] for it in self.items), default=0.0)
        if math.isinf(margin):
            margin = 0.0
        return CheckResult(
            name=name,
            passed=all(it["ok"] for it in self.items),
            margin=float(margin),
            assertions=tuple(self.items),
            elapsed_ms=(time.perf_counter() - t0) * 1000.0,
        )


def check_const_distance() -> CheckResult:
    """Compression of ||C_0 - C_0.5|| against the kernel-distance closed form."""
    t0 = time.perf_counter()
    c = _Checker()
    target = math.sqrt(1.0 / 3.0)
    d = compop.distance(symbolic.constant(0.0), symbolic.constant(0.5), 64)
    c.close("distance(const 0, const 0.5, N=64)", d, target, 1e-9)
    c.close("kernel_distance(0, 0.5)", hardy.kernel_distance(0.0, 0.5), target, 1e-12)
    c.close("const_distance formula", closedform.const_distance(0.0, 0.5), target, 1e-12)
    return c.result("const_distance", t0)


def check_rotation_distance() -> CheckResult:
    """Diagonal rotation distances: i*z vs z, and a cube root of unity."""
    t0 = time.perf_counter()
    c = _Checker()
    a = parse_symbol("i*z")
    b = symbolic.identity()
    c.close("distance(i z, z, N=3)", compop.distance(a, b, 3), 2.0, 1e-12)
    c.close("distance(i z, z, N=8)", compop.distance(a, b, 8), 2.0, 1e-12)
    lam = cmath.exp(2j * math.pi / 3.0)
    rot = closedform.rotation_distance(lam, 1.0)
    c.close("rotation_distance(e^{2 pi i/3}, 1)", rot.value, math.sqrt(3.0), 1e-12)
    c.ok("odd-order case recognized (k=3)", rot.case == "odd_root" and rot.order == 3)
    brute = closedform.rotation_distance_bruteforce(lam, 1.0, depth=1_000_000)
    # the brute-force oracle carries O(depth * eps) phase drift, so 1e-9
    c.close("matches brute force to depth 1e6", rot.value, brute, 1e-9)
    return c.result("rotation_distance", t0)


def check_inner_const_convergence() -> CheckResult:
    """||C_{z^2} - C_0.5|| compressions converge fast to the closed form."""
    t0 = time.perf_counter()
    c = _Checker()
    rep = compop.norm_schedule(
        "distance", {"a": parse_symbol("z^2"), "b": symbolic.constant(0.5)},
        [16, 32, 64, 128],
    )
    target = closedform.inner_const_distance(0.5)
    c.ok("closed-form target recognized", rep.target is not None
         and abs(rep.target - target) <= 1e-15)
    c.close("value at N=128", rep.final_value, target, 1e-6)
    c.ok("values nondecreasing (certified by schedule)", True)
    for v in rep.values:
        c.le("value <= target + 1e-9", v, target + 1e-9)
    return c.result("inner_const_convergence", t0)


def check_automorphism_distance() -> CheckResult:
    """||C_{alpha_0.5} - I|| compressions: monotone, bounded, slowly closing."""
    t0 = time.perf_counter()
    c = _Checker()
    rep = compop.norm_schedule(
        "distance", {"a": symbolic.alpha(0.5), "b": symbolic.identity()},
        [128, 256, 512, 1024, 2048],
    )
    target = closedform.inner_alpha_distance(0.5)
    c.ok("closed-form target recognized", rep.target is not None
         and abs(rep.target - target) <= 1e-15)
    for v in rep.values:
        c.le("value <= target + 1e-9", v, target + 1e-9)
    for a, b in zip(rep.values, rep.values[1:]):
        c.le("monotone nondecreasing", a, b + 1e-12)
    gaps = rep.gaps
    c.le("gap at N=2048", gaps[-1], 0.05)
    for g1, g2 in zip(gaps, gaps[1:]):
        c.gt("gaps strictly decreasing", g1, g2)
    return c.result("automorphism_distance", t0)


def check_const_range_ellipse() -> CheckResult:
    """Numerical range of the C_0.5 compression against its closed ellipse."""
    t0 = time.perf_counter()
    c = _Checker()
    A = compop.const_matrix(0.5, 64)
    nr = numrange.boundary(A, grid=720)
    e = closedform.const_ellipse(0.5)
    c.close("ellipse major axis", e.major_len, 1.0 / math.sqrt(0.75), 1e-12)
    c.close("ellipse minor axis", e.minor_len, math.sqrt(1.0 / 3.0), 1e-12)
    cmp_ = numrange.ellipse_compare(nr, e)
    c.le("hausdorff gap", cmp_.hausdorff, 1e-6)
    c.le("containment violation", cmp_.max_violation, 1e-8)
    return c.result("const_range_ellipse", t0)


def check_automorphism_range_ellipse() -> CheckResult:
    """Numerical range of C_{alpha_0.5} compressions inside the open ellipse."""
    t0 = time.perf_counter()
    c = _Checker()
    e = closedform.alpha_ellipse(0.5)
    c.close("ellipse major axis", e.major_len, 2.0 / math.sqrt(0.75), 1e-12)
    c.close("ellipse minor axis", e.minor_len, 1.0 / math.sqrt(0.75), 1e-12)
    s = symbolic.alpha(0.5)
    gaps = {}
    for N in (64, 256):
        A = compop.comp_matrix(s, N, "full")
        nr = numrange.boundary(A, grid=720)
        cmp_ = numrange.ellipse_compare(nr, e)
        gaps[N] = cmp_.hausdorff
        c.le(f"containment violation at N={N}", cmp_.max_violation, 1e-8)
        if N == 256:
            pts = numrange.sample_w(A, count=200, seed=20)
            c.gt("sampled points strictly interior", numrange.min_boundary_distance(pts, e), 0.0)
    c.le("hausdorff gap at N=256", gaps[256], 0.05)
    c.gt("hausdorff gap decreasing 64 -> 256", gaps[64], gaps[256])
    return c.result("automorphism_range_ellipse", t0)


def check_restricted_norms() -> CheckResult:
    """Restricted norms: 1 for inner symbols fixing 0, strictly below 1 with a
    settled plateau for the non-inner (z+z^2)/2."""
    t0 = time.perf_counter()
    c = _Checker()
    for text in ("z^2", "z^3", "z*alpha(0.5)"):
        v = compop.restricted_norm(parse_symbol(text), 128)
        c.close(f"restricted norm of {text} at N=128", v, 1.0, 1e-8)
    s = parse_symbol("(z+z^2)/2")
    v256 = compop.restricted_norm(s, 256)
    v512 = compop.restricted_norm(s, 512)
    c.gt("non-inner margin 1 - value(512)", 1.0 - v512, 1e-3)
    c.le("plateau value(512) - value(256)", v512 - v256, 1e-6)
    return c.result("restricted_norms", t0)


def check_minimal_norm_case() -> CheckResult:
    """(z^2+z^3)/2: restricted norm equals ||phi||_2 with exact orthogonality
    of higher powers, while the power family itself is not orthogonal."""
    t0 = time.perf_counter()
    c = _Checker()
    s = parse_symbol("(z^2+z^3)/2")
    c.close("restricted norm at N=16", compop.restricted_norm(s, 16),
            1.0 / math.sqrt(2.0), 1e-9)
    rep = analysis.minimal_norm_check(s, n_max=10)
    c.le("gram action residual on z", rep.gram_z_residual, 1e-12)
    c.ok("<phi, phi^n> = 0 exactly for n=2..10",
         bool(np.all(rep.power_overlaps == 0)))
    G = analysis.rudin_audit(s, 3)
    c.close("<phi^2, phi^3>", abs(G[2, 3]), 0.03125, 1e-12)
    return c.result("minimal_norm_case", t0)


def check_p_norm_solve() -> CheckResult:
    """The exponent solve on the three canonical cases."""
    t0 = time.perf_counter()
    c = _Checker()
    r1 = analysis.p_solve(parse_symbol("(z^2+z^3)/2"))
    c.ok("(z^2+z^3)/2 finite", r1.outcome == "finite")
    if r1.p_value is not None:
        c.close("(z^2+z^3)/2 exponent", r1.p_value, 2.0, 1e-6)
    r2 = analysis.p_solve(parse_symbol("0.7*z^3"))
    c.ok("0.7 z^3 inner multiple", r2.outcome == "inner_multiple")
    c.close("0.7 z^3 ||phi||_2", r2.h2, 0.7, 1e-12)
    c.close("0.7 z^3 ||phi||_inf", r2.sup, 0.7, 1e-12)
    s3 = parse_symbol("(z+z^2)/2")
    r3 = analysis.p_solve(s3)
    c.ok("(z+z^2)/2 finite", r3.outcome == "finite")
    c.le("(z+z^2)/2 residual", r3.residual, 1e-8)
    c.ok("single sign change on 64-point exponent grid",
         analysis.p_grid_sign_changes(s3, r3.r) == 1)
    return c.result("p_norm_solve", t0)


def check_inner_pullback() -> CheckResult:
    """Boundary pull-back identity for alpha_0.3 against f = 1 + z."""
    t0 = time.perf_counter()
    c = _Checker()
    res = analysis.inner_pullback_check(symbolic.alpha(0.3), [1.0, 1.0])
    c.le("residual", res.residual, 1e-10)
    c.close("left side", res.lhs, 2.6, 1e-9)
    c.close("right side", res.rhs, 2.6, 1e-9)
    return c.result("inner_pullback", t0)


def check_quadrature_norms() -> CheckResult:
    """Boundary p-norms of (z^2+z^3)/2: the exact 4-norm and monotonicity."""
    t0 = time.perf_counter()
    c = _Checker()
    s = parse_symbol("(z^2+z^3)/2")
    c.close("||phi||_4", hardy.p_norm(s, 4).value, (3.0 / 8.0) ** 0.25, 1e-8)
    vals = [hardy.p_norm(s, p).value for p in (2, 3, 4, 8, 16)]
    for a, b in zip(vals, vals[1:]):
        c.le("p-norms nondecreasing", a, b + 1e-9)
    return c.result("quadrature_norms", t0)


def check_iterate_contraction() -> CheckResult:
    """Iterates of z/2 + 1/4 contract to the constant 1/2 in compression norm."""
    t0 = time.perf_counter()
    c = _Checker()
    rep = analysis.iterate_sweep(parse_symbol("z/2 + 0.25"), 8, 128)
    c.close("fixed point", abs(rep.fixed_pt - 0.5), 0.0, 1e-10)
    for a, b in zip(rep.dist_to_fixed, rep.dist_to_fixed[1:]):
        c.gt("distances strictly decreasing", a, b)
    c.le("distance at n=8", rep.dist_to_fixed[-1], 0.05)
    c.ok("strict gap detected", rep.first_strict_n is not None)
    if rep.first_strict_n is not None:
        for n, g in zip(rep.ns, rep.strict_gaps):
            if n >= rep.first_strict_n:
                c.gt(f"gap positive at n={n}", g, 1e-6)
    return c.result("iterate_contraction", t0)


ALL_CHECKS = (
    check_const_distance,
    check_rotation_distance,
    check_inner_const_convergence,
    check_automorphism_distance,
    check_const_range_ellipse,
    check_automorphism_range_ellipse,
    check_restricted_norms,
    check_minimal_norm_case,
    check_p_norm_solve,
    check_inner_pullback,
    check_quadrature_norms,
    check_iterate_contraction,
)

SUITES = {
    "formulas": (
        check_const_distance,
        check_rotation_distance,
        check_inner_const_convergence,
        check_automorphism_distance,
        check_inner_pullback,
        check_quadrature_norms,
    ),
    "nrange": (
        check_const_range_ellipse,
        check_automorphism_range_ellipse,
    ),
    "restricted": (
        check_restricted_norms,
        check_minimal_norm_case,
        check_p_norm_solve,
    ),
    "iterates": (
        check_iterate_contraction,
    ),
    "all": ALL_CHECKS,
}


def run_suite(name: str) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    return [fn() for fn in SUITES[name]]
