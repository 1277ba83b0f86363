"""
Invariant suites behind ``exclusionkit verify``.

Each suite returns a list of :class:`Check` records (inputs, value, reference,
margin, pass flag) so the CLI can serialize them as JSON. All random draws use
the configured seed.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import exclusion_constants as C
from .bounds import cs_exact_trap
from .config import Config
from .covering import a1_association, build_tree, classify_A, cover_and_bound, verify_a1_sum
from .trial_degrees import TrialSpec, angular_momentum, degree, predicted_energy, slater_exponent_fit
from .fractionality import farey_grid, wedge_envelope, xi_A, xi_A_limit, xi_A_rational
from .neumann_oracle import analytic_relative_eigenvalue, extrapolated_eigenvalue, interval_exclusion_check
from .samples import figure_density, random_density
from .trap import (
    TrapSpec,
    chitra_sen_bound,
    minimize_harmonic_functional,
    powerlaw_trap_bound,
    symmetrization_energy_identity_check,
    upper_bound_trial,
)


@dataclass
class Check:
    name: str
    passed: bool
    value: object = None
    reference: object = None
    margin: float | None = None
    inputs: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("value", "reference"):
            v = d[k]
            if isinstance(v, Fraction):
                d[k] = str(v)
            elif isinstance(v, (np.floating, np.integer)):
                d[k] = v.item()
        if d["margin"] is not None:
            d["margin"] = float(d["margin"])
        d["passed"] = bool(d["passed"])
        return d


def _le(name, value, ref, **inputs) -> Check:
    return Check(name, bool(value <= ref), float(value), float(ref), float(ref - value), inputs)


def _close(name, value, ref, tol, rel=False, **inputs) -> Check:
    err = abs(value - ref) / (abs(ref) if rel else 1.0)
    return Check(name, bool(err <= tol), float(value), float(ref), float(tol - err), {**inputs, "tol": tol})


def suite_constants(cfg: Config) -> list[Check]:
    tol = cfg.tolerances.root
    rng = np.random.default_rng(cfg.seed)
    out = [
        _close("xi_H(1) = pi/2", C.xi_H(1.0, tol).value, math.pi / 2, 1e-10),
        _close("xi_F = pi/sqrt2", C.xi_F(), math.pi / math.sqrt(2), 4 * np.finfo(float).eps),
    ]
    r = C.xi_H(100.0, tol).value / 100.0
    out.append(Check("xi_H(100)/100 in (1.0, 1.2)", 1.0 < r < 1.2, r, [1.0, 1.2]))
    t = np.linspace(0.0, 100.0, 10_000)
    dev = float(np.max(np.abs(C.xi_S_array(t) - C.xi_S_approx(t))))
    out.append(_le("max |xi_S - approx| on [0,100]", dev, 0.05, npoints=10_000))
    pairs = np.sort(rng.uniform(0, 50, size=(1000, 2)), axis=1)
    pairs = pairs[pairs[:, 0] < pairs[:, 1]]
    lo, hi = C.xi_S_array(pairs[:, 0]), C.xi_S_array(pairs[:, 1])
    out.append(Check("xi_S strictly increasing (random pairs)", bool(np.all(lo < hi)), int(np.sum(lo >= hi)), 0))
    hs = [C.xi_H(float(a), tol).value for a in range(1, 51)]
    out.append(Check("xi_H increasing on 1..50", bool(np.all(np.diff(hs) > 0)), None, None))
    xs = np.linspace(0.05, 50.0, 400)
    worst = 0.0
    for n in range(0, 6):
        worst = max(worst, max(abs(C.bessel_j(n + 0.5, x) - C.bessel_j_series(n + 0.5, x)) for x in xs))
    out.append(_le("half-integer Bessel vs series on (0,50]", worst, 1e-10))
    ball = C.dyson_lenard_ball_root(tol)
    out.append(Check("Dyson-Lenard root in (0, pi), residual <= tol", 0 < ball.value < math.pi and ball.residual <= tol,
                     ball.value, None, tol - ball.residual))
    return out


def suite_fractionality(cfg: Config) -> list[Check]:
    out = []
    bad = [n for n in range(2, 2001) if xi_A(0.0, n).value != 0 or xi_A(1.0, n).value != 1]
    out.append(Check("xi_A(0,n)=0 and xi_A(1,n)=1, n<=2000", not bad, len(bad), 0))
    out.append(Check("xi_A(2/3,3) = 0 exactly", xi_A_rational(Fraction(2, 3), 3).value == 0,
                     str(xi_A_rational(Fraction(2, 3), 3).value), "0"))
    failures = 0
    for nu in range(1, 26):
        for mu in range(0, 2 * nu):
            if math.gcd(mu, nu) != 1:
                continue
            lim = xi_A_limit(Fraction(mu, nu))
            if lim.n_stable > max(4 * nu * nu, 2) or xi_A_rational(Fraction(mu, nu), lim.n_stable).value != lim.value:
                failures += 1
    out.append(Check("limit reached by n <= 4 nu^2, nu <= 25", failures == 0, failures, 0))
    grid = farey_grid(30)
    wedge_bad = sum(1 for a in grid if abs(wedge_envelope(a, 60) - float(xi_A_limit(a).value)) > 1e-12)
    out.append(Check("Farey limit matches wedge envelope (den <= 30)", wedge_bad == 0, wedge_bad, 0))
    return out


def suite_oracle(cfg: Config) -> list[Check]:
    rng = np.random.default_rng(cfg.seed)
    pts = cfg.resolutions.richardson_points
    rtol = cfg.tolerances.oracle_relative
    out = []
    for _ in range(10):
        eta, l = float(rng.uniform(0, 10)), float(rng.uniform(0.3, 3))
        out.append(_close("S relative eigenvalue", extrapolated_eigenvalue("S", eta, l, pts),
                          analytic_relative_eigenvalue("S", eta, l), rtol, rel=True, eta=eta, l=l))
    for _ in range(10):
        a, l = float(rng.uniform(1, 6)), float(rng.uniform(0.3, 3))
        out.append(_close("H relative eigenvalue", extrapolated_eigenvalue("H", a, l, pts),
                          analytic_relative_eigenvalue("H", a, l), rtol, rel=True, alpha=a, l=l))
    for model, lo, hi in (("S", 0.0, 5.0), ("H", 1.0, 3.0)):
        for _ in range(10):
            p, l = float(rng.uniform(lo, hi)), float(rng.uniform(0.5, 2.0))
            npts = cfg.resolutions.n2_points
            r = interval_exclusion_check(model, p, 2, l, npoints=npts)
            out.append(Check(f"{model} local exclusion n=2", r.passed, r.E0, r.bound, r.E0 - (r.bound - r.allowance),
                             {"param": p, "l": l, "npoints": npts}))
    r = interval_exclusion_check("H", 1.0, 3, 1.0, method="fermionized")
    out.append(Check("H alpha=1 n=3 (fermionized)", r.passed, r.E0, r.bound, r.E0 - (r.bound - r.allowance)))
    r = interval_exclusion_check("H", 1.0, 3, 1.0, npoints=cfg.resolutions.n3_points)
    out.append(Check("H alpha=1 n=3 (grid)", r.passed, r.E0, r.bound, r.E0 - (r.bound - r.allowance),
                     {"npoints": cfg.resolutions.n3_points}))
    return out


def suite_covering(cfg: Config, ndensities: int = 20) -> list[Check]:
    u = cfg.uncertainty
    primed = cfg.primed_constants
    th = cfg.thresholds
    out = []
    tree = classify_A(build_tree(figure_density(), th.a, th.b), u)
    counts = sorted((b.level, len(a1_association(tree, b))) for b in tree.leaves("B"))
    out.append(Check("figure association counts", counts == [(2, 4), (2, 4), (3, 8)], counts, [(2, 4), (2, 4), (3, 8)]))
    rng = np.random.default_rng(cfg.seed)
    for i in range(ndensities):
        N = float(rng.uniform(4, 512))
        rho = random_density(rng, N)
        tree, rep = cover_and_bound(rho, 1.0, u, primed, th.a, th.b)
        leaves = tree.leaves()
        area = math.fsum(q.area for q in leaves)
        mass = math.fsum(q.mass for q in leaves)
        tiling = math.isclose(area, rho.area, rel_tol=1e-12) and math.isclose(mass, N, rel_tol=1e-10)
        labels_ok = all(th.a <= q.mass < th.b for q in tree.leaves("B")) and all(
            q.mass < th.a for q in tree.leaves("A1", "A2")
        )
        branch = all(_has_B(nd) for nd in tree.nodes() if not nd.is_leaf)
        sums = verify_a1_sum(tree, u)
        inputs = {"density": i, "N": N}
        out.append(Check("tiling", tiling, mass, N, None, inputs))
        out.append(Check("leaf labels", labels_ok, None, None, None, inputs))
        out.append(Check("branch property", branch, None, None, None, inputs))
        out.append(Check("A1 sums", all(s.passed for s in sums), len(sums), None,
                         min((s.margin for s in sums), default=math.inf), inputs))
        out.append(Check("bound >= C_A xi^2 int rho^2", rep.bound >= rep.global_form, rep.bound, rep.global_form,
                         rep.bound - rep.global_form, inputs))
    return out


def _has_B(node) -> bool:
    stack = list(node.children)
    while stack:
        nd = stack.pop()
        if nd.is_leaf and nd.label == "B":
            return True
        stack.extend(nd.children)
    return False


def suite_trap(cfg: Config) -> list[Check]:
    b = cfg.bounds
    out = []
    for N in (1, 10, 1000):
        res = minimize_harmonic_functional(TrapSpec(1.0, N, 1), b, xi=1.0)
        out.append(_close("minimizer mass", res.profile.normalization_check * N, N, 1e-8, rel=True, N=N))
        out.append(_close("functional at minimizer", res.functional_value, res.E_lower, 1e-6, rel=True, N=N))
    Ns = [16, 64, 256, 1024, 4096]
    table = upper_bound_trial(Ns, 1.0)
    out.append(_close("upper bound exponent", table.slope, 1.5, 0.05))
    for alpha in (Fraction(1, 3), Fraction(1), Fraction(3, 5)):
        for row in table.rows:
            low = minimize_harmonic_functional(TrapSpec(1.0, row.N, alpha), b).E_lower
            out.append(_le("E_lower <= E_upper", low, row.E_upper, alpha=str(alpha), N=row.N))
    worst = -math.inf
    for a in np.linspace(1, 10, 19):
        for N in (2, 3, 10, 100, 1000, 10_000):
            spec = TrapSpec(1.0, N, float(a))
            worst = max(worst, powerlaw_trap_bound(spec) / cs_exact_trap(float(a), N, 1.0))
    out.append(_le("harmonic CS lower bound / exact (max)", worst, 1.0))
    for n in (2, 3):
        rep = symmetrization_energy_identity_check(n)
        out.append(Check(f"symmetrization identity n={n}", rep.passed, [rep.norm_ratio, rep.kinetic_ratio], [1, 1]))
    return out


def suite_degrees(cfg: Config) -> list[Check]:
    out = []
    bad = 0
    for nu in range(1, 11):
        for mu in range(0, 2 * nu, 2):
            if math.gcd(mu, nu) != 1:
                continue
            for K in range(1, 51):
                s = TrialSpec(mu, nu, K)
                if degree(s).total != -s.alpha * (nu - 1) * s.N / 2:
                    bad += 1
    out.append(Check("even total = -alpha(nu-1)N/2", bad == 0, bad, 0))
    bad = 0
    for nu in range(1, 8):
        for mu in range(0, 2 * nu):
            if math.gcd(mu, nu) != 1:
                continue
            for K in range(1, 12):
                s = TrialSpec(mu, nu, K, "even", "neighbor")
                cs = chitra_sen_bound(TrapSpec(Fraction(1), s.N, s.alpha, angular_momentum(s)))
                if cs != predicted_energy(s, Fraction(1)):
                    bad += 1
    out.append(Check("neighbor-Phi energy = Chitra-Sen at L", bad == 0, bad, 0))
    slope = slater_exponent_fit(10, 10**4)
    out.append(_close("Slater exponent (LSQ, magic K in [10, 1e4])", slope, 1.5, 0.02))
    return out


SUITES: dict[str, Callable[[Config], list[Check]]] = {
    "constants": lambda cfg: suite_constants(cfg) + suite_fractionality(cfg),
    "oracle": suite_oracle,
    "covering": suite_covering,
    "trap": suite_trap,
    "degrees": suite_degrees,
}


def run_suite(name: str, cfg: Config) -> dict:
    names = list(SUITES) if name == "all" else [name]
    results = {}
    for nm in names:
        t0 = time.perf_counter()
        checks = SUITES[nm](cfg)
        results[nm] = {
            "passed": all(c.passed for c in checks),
            "seconds": round(time.perf_counter() - t0, 3),
            "checks": [c.to_dict() for c in checks],
        }
    return {"suites": results, "passed": all(r["passed"] for r in results.values())}
