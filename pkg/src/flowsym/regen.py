"""Rebuild the shipped fixture files and golden reports.

    python -m flowsym.regen            # rewrite both trees
    python -m flowsym.regen --check    # exit 1 if anything on disk differs

The golden reports are the regression baseline for the test suite; they
are written from engine output only.
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path
import sys

from . import reference
from .determine import compare_table, determining_system, verify_family, verify_generator
from .fileio import parse_ansatz, print_ansatz, print_fields, print_pde
from .geoflow import (
    SURFACE,
    FlowKind,
    adjudicate_transformed,
    adjudicate_warped,
    fields_from_table,
    generator_combination,
    heat_algebra,
    heat_alpha_family,
    heat_equation,
    surface_equation,
    surface_families,
    surface_generators,
    warped_claims,
    warped_flow_system,
)
from .grammar import Context, parse
from .reduce import characteristic_system, compare_reduced, invariance_check, substitute_ansatz

ROOT = Path(__file__).resolve().parent
FIXTURES = ROOT / "fixtures"
GOLDEN = ROOT / "golden"
SCHEMA_VERSION = 1

# the printed reductions plus the e^x reading of the exponential ansatz
REDUCTION_CASES = dict(reference.REDUCTIONS)
for _key in ("ricci-exp", "hyperbolic-exp"):
    _case = dict(reference.REDUCTIONS[_key])
    _case["ansatz"] = _case["ansatz"].replace("exp(y)", "exp(x)")
    REDUCTION_CASES[_key + "-x"] = _case

# generators under which the printed ansatze are in fact invariant
INVARIANT_GENERATORS = {
    "ricci-exp": "v4 + v3",
    "hyperbolic-exp": "v4 + v3",
    "ricci-scaling": "2*v4 + v6",
    "hyperbolic-scaling": "v4 + v6",
}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def fixture_files() -> dict:
    files = {}
    for kind in FlowKind:
        files[f"{kind.value}_surface.pde"] = print_pde(surface_equation(kind))
        files[f"{kind.value}_generators.vf"] = print_fields(surface_generators(kind))
        for name, v in surface_families(kind).items():
            files[name.replace("-", "_") + ".vf"] = print_fields([v])
        for n in (1, 2, 3):
            files[f"{kind.value}_warped_n{n}.pde"] = print_pde(warped_flow_system(kind, n).pde())
            files[f"{kind.value}_warped_n{n}_claims.vf"] = print_fields(warped_claims(kind, n))
    files["heat.pde"] = print_pde(heat_equation())
    files["heat_algebra.vf"] = print_fields(heat_algebra())
    files["shift_w.vf"] = print_fields(fields_from_table(SURFACE, {"dw": {"phi": "1"}}))
    for key, case in REDUCTION_CASES.items():
        files[key.replace("-", "_") + ".ansatz"] = print_ansatz(parse_ansatz(case["ansatz"]))
    return files


def _reduction_report(key: str, case: dict) -> dict:
    kind = FlowKind.parse(case["pde"].split("-")[0])
    pde = surface_equation(kind)
    ansatz = parse_ansatz(case["ansatz"])
    red = substitute_ansatz(pde, ansatz)
    ctx = Context.for_jet(SURFACE, {ansatz.function: ansatz.signature})
    target = parse(case["printed"], ctx)
    out = {
        "reduction": red.as_dict(),
        "comparison": compare_reduced(red.expression, target).as_dict(),
        "invariance": {},
    }
    gens = [case["generator"]] + ([INVARIANT_GENERATORS[key]] if key in INVARIANT_GENERATORS else [])
    for g in gens:
        v = generator_combination(kind, g)
        rep = invariance_check(ansatz, v).as_dict()
        rep["characteristics"] = characteristic_system(v)
        out["invariance"][g] = rep
    return out


def golden_reports() -> dict:
    reports = {}
    for kind in FlowKind:
        pde = surface_equation(kind)
        system = determining_system(pde)
        published = (
            reference.RICCI_SURFACE_TABLE if kind is FlowKind.RICCI else reference.HYPERBOLIC_SURFACE_TABLE
        )
        reports[f"determine_{kind.value}_surface.json"] = {
            "table": system.as_dict(),
            "distinct_rows": len(system.distinct()),
            "comparison": compare_table(system, published).as_dict(),
        }
        reports[f"generators_{kind.value}_surface.json"] = {
            "generators": [verify_generator(v, pde).as_dict() for v in surface_generators(kind)],
            "families": {
                name: verify_family(v, pde).as_dict() for name, v in surface_families(kind).items()
            },
        }
    reports["reductions.json"] = {k: _reduction_report(k, c) for k, c in REDUCTION_CASES.items()}
    reports["transformed.json"] = {"rows": adjudicate_transformed()}
    heat = heat_equation()
    claims = adjudicate_warped()
    claims["heat_algebra"] = [verify_generator(v, heat).as_dict("psi") for v in heat_algebra()]
    claims["heat_alpha_family"] = heat_alpha_family()
    reports["warped_claims.json"] = claims
    for r in reports.values():
        r["schema_version"] = SCHEMA_VERSION
    return reports


def _sync(directory: Path, files: dict, check: bool) -> list:
    stale = []
    directory.mkdir(exist_ok=True)
    for name, content in sorted(files.items()):
        text = content if isinstance(content, str) else dumps(content)
        path = directory / name
        if path.exists() and path.read_text() == text:
            continue
        stale.append(path)
        if not check:
            path.write_text(text)
    return stale


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="python -m flowsym.regen", description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="report differences without writing")
    args = ap.parse_args(argv)
    stale = _sync(FIXTURES, fixture_files(), args.check)
    stale += _sync(GOLDEN, golden_reports(), args.check)
    for p in stale:
        print(("differs: " if args.check else "wrote: ") + str(p.relative_to(ROOT)))
    return 1 if (args.check and stale) else 0


if __name__ == "__main__":
    sys.exit(main())
