"""Determining equations for point symmetries and verification of candidates."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import re

import sympy as sp

from .grammar import to_text
from .jetspace import PDE
from .prolong import VectorField, apply_prolonged, prolong
from .symkernel import Monomial, SymbolicError, collect, is_zero, partial, simplify, unknown_atoms


def _basis(pde: PDE) -> list:
    n = pde.spec.order
    return [c for c in pde.spec.derivative_coords(n) if c != pde.leading]


def restricted_action(v: VectorField, pde: PDE) -> sp.Expr:
    """pr v (delta) with the leading coordinate eliminated."""
    n = max(pde.spec.order, pde.spec.order_of(pde.delta))
    pv = prolong(v, n)
    return pde.restrict(apply_prolonged(pv, pde.delta))


def monomial_rows(e, pde: PDE) -> dict:
    """Collect ``e`` over the jet monomials of ``pde`` (and exp markers)."""
    try:
        return collect(e, _basis(pde), pde.spec.u)
    except SymbolicError:
        num, den = sp.fraction(sp.together(simplify(e)))
        rows = collect(num, _basis(pde), pde.spec.u)
        return {m: simplify(c / den) for m, c in rows.items()}


@dataclass
class DeterminingSystem:
    pde: PDE
    unknowns: tuple
    equations: dict  # Monomial -> coefficient expression

    def rows(self) -> list:
        return list(self.equations.items())

    def distinct(self) -> list:
        """Equations with duplicates (up to sign) merged, first monomial kept."""
        seen, out = set(), []
        for m, c in self.equations.items():
            key = min(to_text(c), to_text(-c))
            if key not in seen:
                seen.add(key)
                out.append((m, c))
        return out

    def coefficient(self, monomial) -> sp.Expr:
        if isinstance(monomial, str):
            monomial = parse_monomial(monomial, self.pde)
        return self.equations.get(monomial, sp.Integer(0))

    def as_dict(self) -> dict:
        u = self.pde.spec.dependent
        return {m.text(u): to_text(c) for m, c in self.equations.items()}

    def table(self) -> str:
        u = self.pde.spec.dependent
        rows = [(m.text(u), to_text(c)) for m, c in self.equations.items()]
        width = max((len(a) for a, _ in rows), default=8)
        lines = [f"{'monomial'.ljust(width)}  coefficient"]
        lines += [f"{a.ljust(width)}  {b}" for a, b in rows]
        return "\n".join(lines)


def parse_monomial(text: str, pde: PDE) -> Monomial:
    from .grammar import Context, parse

    e = parse(text, Context.for_jet(pde.spec))
    rows = collect(e, _basis(pde), pde.spec.u)
    if len(rows) != 1 or list(rows.values())[0] != 1:
        raise ValueError(f"{text!r} is not a monomial")
    return next(iter(rows))


@lru_cache(maxsize=16)
def determining_system(pde: PDE) -> DeterminingSystem:
    """Coefficients of every jet monomial in the restricted pr v (delta)."""
    v = VectorField.general(pde.spec)
    restricted = restricted_action(v, pde)
    eqs = monomial_rows(restricted, pde)
    names = tuple(str(a.func) for a in v.coefficients)
    return DeterminingSystem(pde, names, eqs)


def substitute_generator(system: DeterminingSystem, v: VectorField) -> dict:
    """Plug concrete coefficients of ``v`` into every determining equation."""
    general = VectorField.general(system.pde.spec)
    sig = system.pde.spec.base_symbols()
    repl = {}
    for g, c in zip(general.coefficients, v.coefficients):
        repl[g.func] = sp.Lambda(sig, c)
    out = {}
    for m, eq in system.equations.items():
        out[m] = simplify(eq.subs(repl).doit())
    return out


@dataclass
class VerificationReport:
    name: str
    passed: bool
    residual: sp.Expr
    rows: dict = field(default_factory=dict)

    def as_dict(self, dep="w") -> dict:
        return {
            "generator": self.name,
            "status": "PASS" if self.passed else "FAIL",
            "residual": to_text(self.residual),
            "rows": {m.text(dep): to_text(c) for m, c in self.rows.items()},
        }


def _normalized_residual(e):
    e = simplify(e)
    return sp.Integer(0) if is_zero(e) else e


def verify_generator(v: VectorField, pde: PDE, name: str | None = None) -> VerificationReport:
    """PASS iff pr v (delta) vanishes on the solution manifold."""
    if unknown_atoms(sp.Matrix(list(v.coefficients))):
        raise ValueError("verify_generator needs concrete coefficients")
    residual = _normalized_residual(restricted_action(v, pde))
    label = name or v.name or v.text()
    if residual == 0:
        return VerificationReport(label, True, residual)
    try:
        rows = monomial_rows(residual, pde)
    except ValueError:
        rows = {}
    return VerificationReport(label, False, residual, rows)


_CONST = re.compile(r"c\d+$")


def family_constants(v: VectorField) -> list:
    syms = set()
    for c in v.coefficients:
        syms |= {s for s in c.free_symbols if _CONST.match(s.name)}
    return sorted(syms, key=lambda s: int(s.name[1:]))


@dataclass
class FamilyReport:
    passed: bool
    residual: sp.Expr
    per_constant: dict  # constant name -> VerificationReport

    def as_dict(self, dep="w") -> dict:
        return {
            "status": "PASS" if self.passed else "FAIL",
            "residual": to_text(self.residual),
            "per_constant": {k: r.as_dict(dep) for k, r in self.per_constant.items()},
        }


def verify_family(v: VectorField, pde: PDE, constants=None) -> FamilyReport:
    """Verify a field depending on free constants c1..ck all at once.

    The residual is linear in the constants; each constant's contribution
    is also checked separately so partial failures can be attributed.
    """
    consts = list(constants) if constants is not None else family_constants(v)
    residual = _normalized_residual(restricted_action(v, pde))
    per = {}
    for c in consts:
        sub = {d: (1 if d == c else 0) for d in consts}
        part = VectorField(v.spec, tuple(x.subs(sub) for x in v.xi), v.phi.subs(sub), str(c))
        per[str(c)] = verify_generator(part, pde, name=str(c))
    passed = residual == 0 and all(r.passed for r in per.values())
    return FamilyReport(passed, residual, per)


def check_cauchy_riemann(xi, eta, x=sp.Symbol("x"), y=sp.Symbol("y")) -> bool:
    """xi_x = eta_y and eta_x = -xi_y; when true both are harmonic."""
    ok = is_zero(partial(xi, x) - partial(eta, y)) and is_zero(partial(eta, x) + partial(xi, y))
    if ok:
        for f in (xi, eta):
            assert is_zero(partial(partial(f, x), x) + partial(partial(f, y), y))
    return ok


@dataclass
class TableRow:
    monomial: str
    published: str | None
    computed: str
    verdict: str  # "agree" | "agree up to sign" | "differs" | "unprintable"

    def as_dict(self) -> dict:
        return {
            "monomial": self.monomial,
            "published": self.published,
            "computed": self.computed,
            "verdict": self.verdict,
        }


@dataclass
class TableComparison:
    pde_name: str
    rows: list
    unlisted: list  # computed (monomial, coefficient) pairs absent from the published table

    def by_verdict(self, verdict) -> list:
        return [r.monomial for r in self.rows if r.verdict == verdict]

    def as_dict(self) -> dict:
        return {
            "pde": self.pde_name,
            "rows": [r.as_dict() for r in self.rows],
            "unlisted": [{"monomial": m, "computed": c} for m, c in self.unlisted],
            "summary": {
                v: self.by_verdict(v)
                for v in ("agree", "agree up to sign", "differs", "unprintable")
            },
        }


def compare_table(system: DeterminingSystem, published) -> TableComparison:
    """Row-by-row comparison with a printed (monomial, coefficient) list.

    Each coefficient is equated to zero, so a row that matches up to sign
    describes the same determining equation.
    """
    from .grammar import Context, parse

    pde = system.pde
    u = pde.spec.dependent
    ctx = Context.for_jet(pde.spec)
    rows, seen = [], set()
    for mono_text, coeff_text in published:
        mono = parse_monomial(mono_text, pde)
        seen.add(mono)
        ours = system.coefficient(mono)
        if coeff_text is None:
            verdict = "unprintable"
        else:
            theirs = parse(coeff_text, ctx)
            if is_zero(ours - theirs):
                verdict = "agree"
            elif is_zero(ours + theirs):
                verdict = "agree up to sign"
            else:
                verdict = "differs"
        rows.append(TableRow(mono.text(u), coeff_text, to_text(ours), verdict))
    unlisted = [(m.text(u), to_text(c)) for m, c in system.equations.items() if m not in seen]
    return TableComparison(pde.name, rows, unlisted)
