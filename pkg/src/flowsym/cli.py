"""Command-line entry point: ``flowsym <command> ...``.

Exit codes: 0 success, 1 a verification failed or a discrepancy exceeded
its tolerance, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
from collections import deque
from fractions import Fraction
import json
import math
from pathlib import Path
import sys

import numpy as np
import sympy as sp

from . import numflow, reference
from .determine import compare_table, determining_system, verify_family, verify_generator
from .determine import family_constants
from .fileio import load_ansatz, load_fields, load_pde, print_pde
from .geoflow import (
    GROUPS,
    G5_VARIANTS,
    FlowKind,
    TransformError,
    generic_transform_residual,
    solution_fixtures,
    solution_residual,
    surface_equation,
    transformed_solution,
    warped_flow_system,
)
from .grammar import Context, ParseError, parse, to_text
from .liealg import jacobi_violations, normalize, structure_constants
from .reduce import characteristic_system, compare_reduced, invariance_check, substitute_ansatz
from .symkernel import SymbolicError

SCHEMA_VERSION = 1
OK, FAIL, USAGE = 0, 1, 2
PUBLISHED_TABLES = {
    "ricci-surface": reference.RICCI_SURFACE_TABLE,
    "hyperbolic-surface": reference.HYPERBOLIC_SURFACE_TABLE,
}


class UsageError(Exception):
    pass


def _finite(obj):
    """NaN and infinities become null so the output stays strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _emit(args, payload: dict, text: str):
    if args.json:
        payload = {"schema_version": SCHEMA_VERSION, "command": args.command, **_finite(payload)}
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _grid_text(header, rows) -> str:
    cells = [list(header)] + [list(r) for r in rows]
    widths = [max(len(str(r[i])) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


# ---------------------------------------------------------------------------
# symbolic commands


def cmd_determine(args) -> int:
    pde = load_pde(args.pde)
    system = determining_system(pde)
    payload = {"pde": pde.name, "rows": system.as_dict(), "distinct_rows": len(system.distinct())}
    text = system.table() + f"\n\n{len(system.equations)} rows, {len(system.distinct())} distinct"
    published = PUBLISHED_TABLES.get(pde.name)
    if args.compare:
        if published is None:
            raise UsageError(f"no published table for {pde.name!r}")
        cmp = compare_table(system, published)
        payload["comparison"] = cmp.as_dict()
        rows = [(r.monomial, r.verdict, r.published or "-", r.computed) for r in cmp.rows]
        text += "\n\n" + _grid_text(("monomial", "verdict", "published", "computed"), rows)
    _emit(args, payload, text)
    return OK


def cmd_verify(args) -> int:
    pde = load_pde(args.pde)
    fields = load_fields(args.fields, pde.spec)
    dep = pde.spec.dependent
    results, lines, ok = [], [], True
    for v in fields:
        if family_constants(v):
            rep = verify_family(v, pde)
            d = rep.as_dict(dep)
            d["generator"] = v.name
            parts = ", ".join(f"{k} {r.as_dict(dep)['status']}" for k, r in rep.per_constant.items())
            lines.append(f"{v.name}: {d['status']} (family; {parts})")
            passed = rep.passed
        else:
            rep = verify_generator(v, pde)
            d = rep.as_dict(dep)
            line = f"{v.name}: {d['status']}"
            if not rep.passed:
                line += f"  residual {d['residual']}"
            lines.append(line)
            passed = rep.passed
        ok &= passed
        results.append(d)
    _emit(args, {"pde": pde.name, "results": results, "status": "PASS" if ok else "FAIL"}, "\n".join(lines))
    return OK if ok else FAIL


def cmd_algebra(args) -> int:
    fields = []
    for ref in args.fields:
        fields += load_fields(ref)
    names = [v.name for v in fields]
    if len(set(names)) != len(names):
        raise UsageError("generator names must be unique across files")
    try:
        alg = structure_constants(fields, names)
    except SymbolicError as exc:
        _emit(args, {"closed": False, "error": str(exc)}, f"FAIL: {exc}")
        return FAIL
    comm = alg.commutator_table()
    payload = {
        "basis": names,
        "closed": True,
        "jacobi_violations": len(jacobi_violations(alg)),
        "commutator": comm,
    }
    text = "commutators [row, column]\n" + _grid_text([""] + names, [[n] + r for n, r in zip(names, comm)])
    if args.table:
        adj = alg.adjoint_table()
        payload["adjoint"] = adj
        text += "\n\nadjoint action Ad(exp(eps*row)) column\n"
        text += _grid_text([""] + names, [[n] + r for n, r in zip(names, adj)])
    _emit(args, payload, text)
    return OK


def cmd_classify(args) -> int:
    parts = args.vector.split(",")
    if len(parts) != 6:
        raise UsageError("classify needs six comma-separated coefficients a1,...,a6")
    a = [sp.Rational(f.numerator, f.denominator) for f in map(_rational, parts)]
    from .liealg import surface_algebra

    try:
        c = normalize(a, surface_algebra(args.kind))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d = c.as_dict()
    text = [f"class: {d['class']}", f"representative: {d['representative']}"]
    if not d["in_published_list"]:
        text.append("note: this class is missing from the published optimal system")
    text.append("witness:")
    text += [f"  {s}" for s in d["witness"]] or ["  (none)"]
    _emit(args, d, "\n".join(text))
    return OK


def cmd_reduce(args) -> int:
    pde = load_pde(args.pde)
    ansatz = load_ansatz(args.ansatz, pde.spec)
    red = substitute_ansatz(pde, ansatz)
    payload = red.as_dict()
    text = [ansatz.text()]
    if red.reduced:
        text.append(f"reduced: {red.text()}")
        text.append(f"multiplier: {to_text(red.multiplier)}")
    else:
        text.append(f"not reduced; old variables remain: {', '.join(map(str, red.leftover))}")
    code = OK if red.reduced else FAIL
    if args.generator:
        from .geoflow import generator_combination

        v = generator_combination(args.kind, args.generator)
        inv = invariance_check(ansatz, v)
        payload["invariance"] = {args.generator: inv.as_dict()}
        payload["characteristics"] = characteristic_system(v)
        text.append(f"characteristics of {args.generator}: {characteristic_system(v)}")
        text.append(f"ansatz invariant under {args.generator}: {'yes' if inv.invariant else 'no'}")
    if args.expect:
        ctx = Context.for_jet(pde.spec, {ansatz.function: ansatz.signature})
        rep = compare_reduced(red.expression, parse(args.expect, ctx))
        payload["comparison"] = rep.as_dict()
        text.append(rep.text())
        if not rep.matches:
            code = FAIL
    _emit(args, payload, "\n".join(text))
    return code


# ---------------------------------------------------------------------------
# flows


def _warped_n(text: str) -> int:
    n = text.split("=", 1)[1] if text.startswith("n=") else text
    try:
        v = int(n)
    except ValueError:
        raise UsageError(f"--warped expects n=<int>, got {text!r}") from None
    if v < 1:
        raise UsageError("sphere dimension must be at least 1")
    return v


def cmd_flows_emit(args) -> int:
    if args.warped is not None:
        pde = warped_flow_system(args.kind, _warped_n(args.warped)).pde()
    else:
        pde = surface_equation(args.kind)
    text = print_pde(pde)
    if args.out:
        Path(args.out).write_text(text)
    _emit(args, {"pde": pde.name, "file": text, "out": args.out or ""}, text)
    return OK


def cmd_flows_check(args) -> int:
    eps_val = parse(args.eps, Context()) if args.eps else sp.Symbol("eps")
    kinds = [FlowKind.parse(args.kind)] if args.kind else list(FlowKind)
    groups = [args.group] if args.group else list(GROUPS)
    if args.group and args.group not in GROUPS:
        raise UsageError(f"unknown group {args.group!r}")
    fixtures = solution_fixtures()
    rows, ok = [], True
    for k in kinds:
        fx = fixtures["cigar" if k is FlowKind.RICCI else "linear-in-time"]
        for g in groups:
            variants = [args.variant] if (g == "G5" and args.variant) else (list(G5_VARIANTS) if g == "G5" else [None])
            for var in variants:
                img = transformed_solution(fx.solution, k, g, eps_value=eps_val, variant=var, check=False)
                rf = solution_residual(fx.pde, img)
                rg = generic_transform_residual(k, g, var)
                exact = rf == 0 and rg == 0
                ok &= exact or (g == "G5" and not args.variant)
                rows.append(
                    {
                        "flow": k.value,
                        "group": g,
                        "variant": var or "",
                        "eps": to_text(eps_val),
                        "fixture": fx.name,
                        "image": to_text(img),
                        "fixture_residual": to_text(rf),
                        "generic_residual": to_text(rg),
                        "verdict": "exact" if exact else "fails",
                    }
                )
    table = _grid_text(
        ("flow", "group", "G5 time", "verdict", "fixture residual", "generic residual"),
        [
            (r["flow"], r["group"], G5_VARIANTS.get(r["variant"], "-"), r["verdict"], r["fixture_residual"], r["generic_residual"])
            for r in rows
        ],
    )
    _emit(args, {"rows": rows, "status": "PASS" if ok else "FAIL"}, table)
    return OK if ok else FAIL


# ---------------------------------------------------------------------------
# numerics


def _surface_setup(args):
    N, L = args.n, args.L
    if args.init == "cigar":
        grid = numflow.Grid2D(N, L, origin=-L / 2, boundary="dirichlet", exact=numflow.cigar)
        f = numflow.cigar
    elif args.init == "constant":
        grid = numflow.Grid2D(N, L)
        value = args.value
        f = lambda x, y, t: value + 0.0 * x  # noqa: E731
    elif args.init == "random":
        grid = numflow.Grid2D(N, L)
        f = numflow.random_fourier(args.seed, L)
    else:
        raise UsageError(f"init {args.init!r} is not available for surface runs")
    return grid, f


def _warped_setup(args):
    M = args.m
    if args.init == "cylinder":
        grid = numflow.Grid1D(M, args.S or 2 * math.pi, "periodic")
        psi0 = np.full(M, args.value)
    elif args.init == "sphere":
        grid = numflow.Grid1D(M, args.S or math.pi, "pole")
        psi0 = np.sin(grid.coords())
    elif args.init == "band":
        # equatorial band of the round sphere with reflecting ends
        grid = numflow.Grid1D(M, args.S or math.pi / 2, "reflecting", origin=math.pi / 4)
        psi0 = np.sin(grid.coords())
    else:
        raise UsageError(f"init {args.init!r} is not available for warped runs")
    return grid, psi0


def warped_scalar_curvature(grid, n: int, psi: np.ndarray) -> np.ndarray:
    """R = 2n K0 + n(n-1) K1 with K0 = -psi_ss/psi, K1 = (1 - psi_s^2)/psi^2."""
    h = grid.h
    pm, pp = numflow._pad(grid, psi)
    ps = (pp - pm) / (2 * h)
    pss = (pp - 2 * psi + pm) / (h * h)
    with np.errstate(divide="ignore", invalid="ignore"):
        R = -2 * n * pss / psi + n * (n - 1) * (1 - ps * ps) / (psi * psi)
    if grid.boundary == "pole":
        R = R[1:-1]
    return R


def cmd_simulate(args) -> int:
    kind = FlowKind.parse(args.kind)
    warped = args.warped is not None
    if warped:
        n = _warped_n(args.warped)
        grid, psi0 = _warped_setup(args)
        pde = warped_flow_system(kind, n).pde()
        v0 = args.v0 if kind is FlowKind.HYPERBOLIC else None
        limit = numflow.stable_dt(kind, "warped", grid, psi0)
        dt = limit if args.dt == "auto" else float(args.dt)
        steps = max(1, math.ceil(args.T / dt - 1e-9))
        run = numflow.start_warped(kind, n, grid, psi0, v0=v0, dt=args.T / steps)
        to_w = lambda f: f  # noqa: E731
        curvature = lambda f: warped_scalar_curvature(grid, n, f)  # noqa: E731
        spacing, origin = grid.h, 0.0
    else:
        grid, f = _surface_setup(args)
        u0 = grid.sample(f, 0.0)
        pde = surface_equation(kind)
        limit = numflow.stable_dt(kind, "surface", grid, u0)
        dt = limit if args.dt == "auto" else float(args.dt)
        steps = max(1, math.ceil(args.T / dt - 1e-9))
        run = numflow.start_surface(kind, grid, u0, dt=args.T / steps)
        to_w = np.log
        curvature = lambda u: numflow.scalar_curvature(grid, u)[1:-1, 1:-1]  # noqa: E731
        spacing, origin = grid.h, grid.origin

    every = max(1, args.every)
    rows = []
    window = deque(maxlen=3)  # (step, time, field)

    def record(step, t, u, levels):
        res = float("nan")
        if levels is not None:
            res = numflow.residual_probe([to_w(x) for x in levels], pde, spacing, run.dt, origin, t)
        R = curvature(u)
        rows.append((t, float(np.min(u)), float(np.max(u)), float(np.max(np.abs(R))), res))

    def on_step(prev, nxt):
        if not window:
            window.append((prev.steps, prev.time, prev.u))
        window.append((nxt.steps, nxt.time, nxt.u))
        if len(window) == 3:
            s, t, u = window[1]
            if s % every == 0:
                record(s, t, u, [w[2] for w in window])

    message, singular = "", False
    try:
        final = numflow.advance(run, args.T, callback=on_step)
    except numflow.SingularTime as exc:
        singular, message = True, str(exc)
        final = None
    except numflow.FlowError as exc:
        _emit(args, {"status": "FAIL", "error": str(exc)}, f"FAIL: {exc}")
        return FAIL
    last_steps = final.steps if final is not None else (window[-1][0] if window else run.steps)
    if final is not None and (not rows or rows[-1][0] != final.time):
        record(final.steps, final.time, final.u, None)
    header = ["t", "min_u", "max_u", "max_abs_R", "residual"]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(header)
            for r in rows:
                wr.writerow([repr(v) for v in r])
    if args.snapshot and final is not None and not warped:
        numflow.write_snapshot(args.snapshot, final.u)
    payload = {
        "kind": kind.value,
        "geometry": "warped" if warped else "surface",
        "steps": last_steps,
        "dt": run.dt,
        "T": args.T,
        "rows": len(rows),
        "singular": singular,
        "message": message,
        "last": dict(zip(header, rows[-1])) if rows else {},
    }
    if not warped and args.init == "cigar" and final is not None:
        exact = grid.sample(numflow.cigar, final.time)
        payload["max_rel_error"] = float(np.max(np.abs(final.u - exact) / exact))
    text = [f"{kind.value} {'warped' if warped else 'surface'} run: {payload['steps']} steps of dt={run.dt:.4g}"]
    if singular:
        text.append(message)
    if "max_rel_error" in payload:
        text.append(f"max relative error against the closed form: {payload['max_rel_error']:.3e}")
    if rows:
        text.append(_grid_text(header, [[f"{v:.6g}" for v in rows[-1]]]))
    if args.out:
        text.append(f"wrote {len(rows)} rows to {args.out}")
    _emit(args, payload, "\n".join(text))
    return OK


def _eps_value(text: str) -> float:
    try:
        return float(sp.sympify(text.replace("^", "**"), locals={"pi": sp.pi, "ln": sp.log}))
    except (sp.SympifyError, TypeError, ValueError):
        raise UsageError(f"cannot evaluate eps={text!r}") from None


def cmd_equivariance(args) -> int:
    kind = FlowKind.parse(args.kind)
    if args.init == "cigar":
        grid = numflow.cigar_grid(args.n, args.L)
        f = numflow.cigar
    elif args.init == "random":
        grid = numflow.Grid2D(args.n, args.L)
        f = numflow.random_fourier(args.seed, args.L)
    else:
        raise UsageError("init must be cigar or random")
    eps = _eps_value(args.eps)
    try:
        rep = numflow.equivariance_check(kind, args.group, eps, grid, args.T, u0=f)
    except numflow.GroupGridError as exc:
        raise UsageError(str(exc)) from None
    ok = rep.discrepancy <= args.tol
    d = rep.as_dict()
    d.update(tolerance=args.tol, status="PASS" if ok else "FAIL")
    _emit(args, d, f"{args.group} on {kind.value}: discrepancy {rep.discrepancy:.3e} (tol {args.tol:g}) {d['status']}")
    return OK if ok else FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")

    ap = argparse.ArgumentParser(prog="flowsym", description="Lie symmetry analysis and numerical checks for Ricci and hyperbolic flows")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("determine", parents=[common], help="determining equations of a PDE")
    p.add_argument("pde", help="PDE file or fixture name")
    p.add_argument("--compare", action="store_true", help="diff against the published table")
    p.set_defaults(func=cmd_determine)

    p = sub.add_parser("verify", parents=[common], help="check generators against a PDE")
    p.add_argument("pde")
    p.add_argument("fields", help="vector-field file or fixture name")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("algebra", parents=[common], help="commutator and adjoint tables")
    p.add_argument("fields", nargs="+")
    p.add_argument("--table", action="store_true", help="include the adjoint table")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("classify", parents=[common], help="optimal-system class of a1*v1+...+a6*v6")
    p.add_argument("vector", help="a1,a2,a3,a4,a5,a6 (rationals)")
    p.add_argument("--kind", default="ricci", choices=[k.value for k in FlowKind])
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reduce", parents=[common], help="similarity reduction by an ansatz")
    p.add_argument("pde")
    p.add_argument("ansatz")
    p.add_argument("--expect", help="expected reduced expression (= 0) to compare against")
    p.add_argument("--generator", help="surface generator combination to test invariance, e.g. 'v4 + v2'")
    p.add_argument("--kind", default="ricci", choices=[k.value for k in FlowKind])
    p.set_defaults(func=cmd_reduce)

    flows = sub.add_parser("flows", help="flow equations and transformed solutions")
    fsub = flows.add_subparsers(dest="flows_command", required=True, metavar="action")
    p = fsub.add_parser("emit", parents=[common], help="write a flow PDE file")
    p.add_argument("--kind", required=True, choices=[k.value for k in FlowKind])
    shape = p.add_mutually_exclusive_group()
    shape.add_argument("--surface", action="store_true", help="conformal surface equation (default)")
    shape.add_argument("--warped", metavar="n=N", help="warped-product equation over S^N")
    p.add_argument("--out")
    p.set_defaults(func=cmd_flows_emit)
    p = fsub.add_parser("check-transformed", parents=[common], help="verify listed transformed solutions")
    p.add_argument("--kind", choices=[k.value for k in FlowKind])
    p.add_argument("--group", help="G1..G6 (default: all)")
    p.add_argument("--eps", help="group parameter (default: symbolic)")
    p.add_argument("--variant", choices=sorted(G5_VARIANTS), help="G5 time argument taken from this flow's list")
    p.set_defaults(func=cmd_flows_check)

    p = sub.add_parser("simulate", parents=[common], help="finite-difference flow run")
    p.add_argument("--kind", required=True, choices=[k.value for k in FlowKind])
    shape = p.add_mutually_exclusive_group()
    shape.add_argument("--surface", action="store_true", help="surface flow on a square grid (default)")
    shape.add_argument("--warped", metavar="n=N", help="warped-product flow over S^N")
    p.add_argument("--n", type=int, default=64, help="grid points per side (surface)")
    p.add_argument("--L", type=float, default=8.0, help="domain side length (surface)")
    p.add_argument("--m", type=int, default=256, help="grid points in s (warped)")
    p.add_argument("--S", type=float, default=None, help="length of the s interval (warped)")
    p.add_argument("--dt", default="auto")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--init", default="cigar", choices=["cigar", "constant", "random", "cylinder", "sphere", "band"])
    p.add_argument("--value", type=float, default=1.0, help="level of constant/cylinder data")
    p.add_argument("--v0", type=float, default=0.0, help="initial psi_t for hyperbolic warped runs")
    p.add_argument("--every", type=int, default=1, help="record every k-th step")
    p.add_argument("--out", help="CSV path")
    p.add_argument("--snapshot", help="binary snapshot of the final surface state")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("equivariance", parents=[common], help="solver equivariance under G1..G6")
    p.add_argument("--kind", required=True, choices=[k.value for k in FlowKind])
    p.add_argument("--group", required=True, choices=list(GROUPS))
    p.add_argument("--eps", required=True, help="group parameter, e.g. 0.5, ln(2), pi/2")
    p.add_argument("--init", default="random", choices=["random", "cigar"])
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--L", type=float, default=8.0)
    p.add_argument("--T", type=float, default=0.05)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_equivariance)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, FileNotFoundError) as exc:
        print(f"flowsym {args.command}: error: {exc}", file=sys.stderr)
        return USAGE
    except (ValueError, TransformError, SymbolicError) as exc:
        print(f"flowsym {args.command}: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
