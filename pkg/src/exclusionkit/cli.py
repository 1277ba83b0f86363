"""
Command-line interface.

    exclusionkit [--config PATH] [--out DIR] [--tol X] {xi,verify,bound,cover,degrees} ...

Reports are JSON, curves are CSV. With ``--out`` results are written
atomically into that directory; otherwise they go to stdout. Exit codes:
0 success, 1 a verification check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (
    GasSpec,
    gas_anyon,
    lt_anyon_kinetic,
    lt_cs_gas,
    lt_cs_local,
    lt_lieb_liniger_gas,
    lt_lieb_liniger_homogeneous,
)
from .config import Config, load_config, thread_cap
from .exclusion_constants import xi_F, xi_H, xi_S, xi_S_approx
from .covering import cover_and_bound, verify_a1_sum
from .trial_degrees import TrialSpec, angular_momentum, degree, magic_numbers, predicted_energy, slater_degree
from .densityio import atomic_write_text, read_density
from .errors import ExclusionKitError
from .fractionality import as_fraction, farey_grid, wedge_envelope, xi_A, xi_A_limit
from .trap import (
    TrapSpec,
    chitra_sen_bound,
    lattice_points,
    minimize_harmonic_functional,
    powerlaw_trap_bound,
    trial_energy,
    BUMP_E1,
    BUMP_M2,
)
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _envelope(cfg: Config, payload: dict) -> dict:
    return {"toolkit": "exclusionkit", "version": __version__, "config_hash": cfg.hash(), **_jsonable(payload)}


def _emit(args, cfg: Config, name: str, text: str) -> None:
    if args.out:
        path = atomic_write_text(Path(args.out) / name, text)
        print(str(path))
    else:
        sys.stdout.write(text)


def _emit_json(args, cfg, name, payload) -> None:
    _emit(args, cfg, name, json.dumps(_envelope(cfg, payload), indent=2, sort_keys=False) + "\n")


def _emit_csv(args, cfg, name, header, rows) -> None:
    buf = io.StringIO()
    buf.write(f"# exclusionkit {__version__} config {cfg.hash()}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    _emit(args, cfg, name, buf.getvalue())


# --- xi ---------------------------------------------------------------------------------------


def _grid(start, stop, step) -> np.ndarray:
    if step <= 0 or stop < start:
        raise UsageError("need --step > 0 and --stop >= --start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def cmd_xi(args, cfg: Config) -> int:
    tol = cfg.tolerances.root
    if args.model == "S":
        rows = []
        for t in _grid(args.start if args.start is not None else 0.0, args.stop if args.stop is not None else 10.0,
                       args.step or 0.01):
            t = float(t)
            rows.append((t, xi_S(t, tol).value, float(xi_S_approx(t))))
        _emit_csv(args, cfg, "xi_S.csv", ["t", "xi_S", "xi_S_approx"], rows)
    elif args.model == "H":
        rows = []
        for a in _grid(args.start if args.start is not None else 1.0, args.stop if args.stop is not None else 10.0,
                       args.step or 0.1):
            rows.append((float(a), xi_H(float(a), tol).value))
        _emit_csv(args, cfg, "xi_H.csv", ["alpha", "xi_H"], rows)
    elif args.model == "A":
        rows = []
        for a in farey_grid(args.max_den):
            lim = xi_A_limit(a)
            row = [str(a), float(a), float(lim.value), lim.n_stable, wedge_envelope(a, 2 * args.max_den)]
            if args.n is not None:
                row.append(float(xi_A(float(a), args.n).value))
            rows.append(row)
        header = ["alpha", "alpha_float", "xi_A_limit", "n_stable", "wedge_envelope"]
        if args.n is not None:
            header.append(f"xi_A_n{args.n}")
        _emit_csv(args, cfg, "xi_A.csv", header, rows)
    else:
        _emit_csv(args, cfg, "xi_F.csv", ["name", "value"], [("xi_F", xi_F())])
    return EXIT_OK


# --- verify -------------------------------------------------------------------------------------


def cmd_verify(args, cfg: Config) -> int:
    report = run_suite(args.suite, cfg)
    _emit_json(args, cfg, f"verify_{args.suite}.json", {"suite": args.suite, **report})
    return EXIT_OK if report["passed"] else EXIT_FAIL


# --- bound --------------------------------------------------------------------------------------


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"bound {args.kind} requires --{' --'.join(m.replace('_', '-') for m in missing)}")


def cmd_bound(args, cfg: Config) -> int:
    b = cfg.bounds
    consts = {"bounds": cfg.to_dict()["bounds"]}
    kind = args.kind
    if kind == "anyon":
        _need(args, "alpha", "density")
        rho, N_header = read_density(args.density)
        N = int(round(N_header))
        alpha = as_fraction(args.alpha) if "/" in args.alpha else float(args.alpha)
        xi = float(xi_A(float(alpha), N).value)
        closed = lt_anyon_kinetic(rho, float(alpha), N, b)
        tree, rep = cover_and_bound(rho, xi, cfg.uncertainty, cfg.primed_constants, cfg.thresholds.a, cfg.thresholds.b)
        payload = {
            "kind": kind,
            "inputs": {"alpha": args.alpha, "N": N, "density": str(args.density)},
            "xi_A": xi,
            "closed_form_bound": closed,
            "covering": rep.__dict__,
            "tree": tree.to_dict() if tree is not None else None,
            "constants": consts | {"uncertainty": cfg.to_dict()["uncertainty"], "primed": cfg.to_dict()["primed"]},
        }
    elif kind == "gas":
        _need(args, "model", "param", "N", "L")
        param = args.param
        if args.model == "A":
            rep = gas_anyon(GasSpec("A", as_fraction(param), args.N, args.L), b)
            payload = {"kind": kind, **rep.to_dict(), "per": "area"}
        else:
            spec = GasSpec(args.model, float(param), args.N, args.L, args.gamma)
            value = lt_lieb_liniger_gas(spec, b) if args.model == "S" else lt_cs_gas(spec, b)
            payload = {"kind": kind, "model": args.model, "value": value, "per": "length",
                       "inputs": {"param": param, "N": args.N, "L": args.L, "gamma": args.gamma}, "constants": consts}
    elif kind == "ll":
        _need(args, "eta", "N", "L")
        spec = GasSpec("S", args.eta, args.N, args.L, args.gamma)
        payload = {"kind": kind, "value": lt_lieb_liniger_homogeneous(spec, b), "per_length": lt_lieb_liniger_gas(spec, b),
                   "inputs": {"eta": args.eta, "N": args.N, "L": args.L, "gamma": args.gamma}, "constants": consts}
    elif kind == "cs":
        _need(args, "alpha", "mass", "length")
        alpha = float(args.alpha)
        payload = {"kind": kind, "value": lt_cs_local(args.mass, args.length, alpha, b),
                   "inputs": {"alpha": alpha, "mass": args.mass, "length": args.length}, "constants": consts}
    elif kind == "trap":
        _need(args, "alpha", "N")
        N, omega = int(args.N), args.omega
        alpha = as_fraction(args.alpha) if "/" in args.alpha else float(args.alpha)
        low = minimize_harmonic_functional(TrapSpec(omega, N, alpha), b) if N >= 2 else None
        pts = lattice_points(N)
        S = float(np.einsum("ij,ij->i", pts, pts).sum())
        upper = 2.0 * omega * math.sqrt(N * BUMP_E1 * (S + N * BUMP_M2 / 4.0))
        r_opt = (4.0 * N * BUMP_E1 / (omega**2 * (S + N * BUMP_M2 / 4.0))) ** 0.25
        payload = {
            "kind": kind,
            "inputs": {"alpha": args.alpha, "N": N, "omega": omega, "L": args.L_total},
            "E_lower": low.E_lower if low else None,
            "xi_A": low.xi if low else None,
            "E_upper": upper,
            "E_upper_check": trial_energy(r_opt, N, S, omega),
            "r_opt": r_opt,
            "chitra_sen": chitra_sen_bound(TrapSpec(omega, N, alpha, args.L_total or 0)),
            "constants": consts,
        }
        if float(alpha) >= 1:
            payload["powerlaw_mu2"] = powerlaw_trap_bound(TrapSpec(omega, N, float(alpha)))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown bound kind {kind!r}")
    _emit_json(args, cfg, f"bound_{kind}.json", payload)
    return EXIT_OK


# --- cover --------------------------------------------------------------------------------------


def cmd_cover(args, cfg: Config) -> int:
    rho, N = read_density(args.density)
    if args.xi is not None:
        xi = args.xi
    elif args.alpha is not None:
        xi = float(xi_A(float(as_fraction(args.alpha) if "/" in args.alpha else args.alpha), int(round(N))).value)
    else:
        xi = 1.0
    tree, rep = cover_and_bound(rho, xi, cfg.uncertainty, cfg.primed_constants, cfg.thresholds.a, cfg.thresholds.b)
    sums = [s.__dict__ for s in verify_a1_sum(tree, cfg.uncertainty)] if tree is not None else []
    payload = {
        "density": str(args.density),
        "N": N,
        "xi": xi,
        "bound": rep.__dict__,
        "a1_sums": sums,
        "a1_sums_passed": all(s["passed"] for s in sums),
        "tree": tree.to_dict() if tree is not None else None,
    }
    _emit_json(args, cfg, "cover.json", payload)
    return EXIT_OK if payload["a1_sums_passed"] else EXIT_FAIL


# --- degrees ------------------------------------------------------------------------------------


def cmd_degrees(args, cfg: Config) -> int:
    ks = magic_numbers(args.kmax) if args.magic_only else range(1, args.kmax + 1)
    rows = []
    for K in ks:
        spec = TrialSpec(args.mu, args.nu, K, args.variant, args.phi)
        led = degree(spec)
        magic = slater_degree(K)[1]
        L = angular_momentum(spec) if (args.variant == "even" or magic) else ""
        E = predicted_energy(spec, Fraction(args.omega).limit_denominator(10**12))
        rows.append([K, spec.N, str(L), str(led.total), str(E), magic])
    _emit_csv(args, cfg, "degrees.csv", ["K", "N", "L", "degree", "E_pred", "magic"], rows)
    return EXIT_OK


# --- parser -------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="exclusionkit", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=f"exclusionkit {__version__}")
    p.add_argument("--config", help="JSON configuration file (unknown keys are rejected)")
    p.add_argument("--out", help="output directory (default: stdout)")
    p.add_argument("--tol", type=float, help="root-finding tolerance (default 1e-12)")
    sub = p.add_subparsers(dest="command", required=True)

    x = sub.add_parser("xi", help="sample an exclusion constant as CSV")
    x.add_argument("model", choices=["S", "H", "A", "F"])
    x.add_argument("--start", type=float)
    x.add_argument("--stop", type=float)
    x.add_argument("--step", type=float)
    x.add_argument("--max-den", type=int, default=30, help="Farey grid denominator bound for model A")
    x.add_argument("--n", type=int, help="also tabulate xi_A at this finite n (model A)")
    x.set_defaults(func=cmd_xi)

    v = sub.add_parser("verify", help="run an invariant suite and emit a JSON report")
    v.add_argument("suite", choices=[*SUITES, "all"])
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bound", help="evaluate a lower bound")
    b.add_argument("kind", choices=["anyon", "ll", "cs", "trap", "gas"])
    b.add_argument("--alpha", help="statistics parameter; fractions like 1/3 are kept exact")
    b.add_argument("--eta", type=float)
    b.add_argument("--model", choices=["A", "S", "H"], help="gas model for kind=gas")
    b.add_argument("--param", help="gas parameter (alpha or eta)")
    b.add_argument("--N", type=float)
    b.add_argument("--L", type=float, help="system length (1D) or side (2D)")
    b.add_argument("--gamma", type=float, default=1.0)
    b.add_argument("--mass", type=float)
    b.add_argument("--length", type=float)
    b.add_argument("--omega", type=float, default=1.0)
    b.add_argument("--L-total", dest="L_total", type=Fraction, help="total angular momentum (trap)")
    b.add_argument("--density", help="density file (kind=anyon)")
    b.set_defaults(func=cmd_bound)

    c = sub.add_parser("cover", help="build the covering tree of a density file")
    c.add_argument("--density", required=True)
    c.add_argument("--alpha")
    c.add_argument("--xi", type=float)
    c.set_defaults(func=cmd_cover)

    d = sub.add_parser("degrees", help="degree / angular momentum table of trial states")
    d.add_argument("--mu", type=int, required=True)
    d.add_argument("--nu", type=int, required=True)
    d.add_argument("--kmax", type=int, default=20)
    d.add_argument("--variant", choices=["even", "odd"], default="even")
    d.add_argument("--phi", choices=["none", "parameter", "neighbor"], default="none")
    d.add_argument("--omega", type=float, default=1.0)
    d.add_argument("--magic-only", action="store_true")
    d.set_defaults(func=cmd_degrees)
    return p


def _thread_limits(n: int | None):
    if n is None:
        return contextlib.nullcontext()
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:  # pragma: no cover
        return contextlib.nullcontext()
    return threadpool_limits(limits=n)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config).with_tol(args.tol)
        if args.out is None and cfg.output_dir not in ("", "."):
            args.out = cfg.output_dir
        with _thread_limits(thread_cap()):
            return args.func(args, cfg)
    except (UsageError, ExclusionKitError) as exc:
        print(f"exclusionkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
