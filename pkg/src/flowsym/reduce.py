"""Similarity reductions: substitute an invariant ansatz into a PDE."""

from __future__ import annotations

from dataclasses import dataclass, field

import sympy as sp

from .grammar import to_text
from .jetspace import PDE, JetSpec
from .prolong import VectorField
from .symkernel import SymbolicError, atom_parts, is_zero, partial, simplify, unknown, unknown_atoms


@dataclass(frozen=True)
class Ansatz:
    """Similarity variables plus a solution form ``lhs(u) = rhs(x, omega(z))``.

    ``variables`` holds (symbol, defining expression in the old variables);
    ``function`` names the unknown omega and ``signature`` its arguments.
    """

    spec: JetSpec
    variables: tuple
    lhs: sp.Expr
    rhs: sp.Expr
    function: str
    signature: tuple

    def __post_init__(self):
        names = {str(z) for z, _ in self.variables}
        if names & set(self.spec.independent) or self.spec.dependent in names:
            raise ValueError("similarity variable clashes with an original variable")
        if set(self.signature) - {z for z, _ in self.variables}:
            raise ValueError(f"{self.function} depends on an undeclared similarity variable")
        if not self.lhs.has(self.spec.u):
            raise ValueError("solution form must involve the dependent variable")
        _check_independent(self)

    @property
    def omega(self) -> sp.Expr:
        return unknown(self.function, self.signature)

    def solved(self) -> sp.Expr:
        """u as an expression in the old variables and omega atoms."""
        u = self.spec.u
        sols = sp.solve(sp.Eq(self.lhs, self.rhs), u)
        if len(sols) != 1:
            raise SymbolicError(f"solution form does not determine {u} uniquely")
        out = sols[0]
        if self.lhs == sp.exp(u):
            _check_positive(self)
            out = sp.expand_log(sp.log(self.rhs), force=True)
        return out

    def renamed(self, name: str) -> "Ansatz":
        new = unknown(name, self.signature)
        rhs = self.rhs.xreplace({self.omega: new})
        return Ansatz(self.spec, self.variables, self.lhs, rhs, name, self.signature)

    def text(self) -> str:
        parts = [f"let {z} = {to_text(d)}" for z, d in self.variables]
        applied = sp.Symbol(f"{self.function}({', '.join(str(z) for z in self.signature)})")
        parts.append(f"form {to_text(self.lhs)} = {to_text(self.rhs.xreplace({self.omega: applied}))}")
        return "ansatz: " + "; ".join(parts) + ";"


def _sample_point(spec, seed_values=(sp.Rational(3, 7), sp.Rational(5, 11), sp.Rational(13, 17), sp.Rational(2, 3))):
    return dict(zip(spec.variables, seed_values))


def _check_independent(a: Ansatz):
    Z = [d for _, d in a.variables]
    if not Z:
        return
    jac = sp.Matrix([[sp.diff(d, v) for v in a.spec.variables] for d in Z])
    pt = _sample_point(a.spec)
    if jac.subs(pt).rank() < len(Z):
        raise ValueError("similarity variables are not functionally independent")


def _check_positive(a: Ansatz):
    pt = _sample_point(a.spec)
    val = a.rhs.xreplace({a.omega: sp.Integer(1)}).subs(pt)
    if val.is_number and val <= 0:
        raise SymbolicError(f"exp({a.spec.dependent}) is set to a non-positive quantity")


def _total(e, v, a: Ansatz):
    """d/dv of e(old variables, omega atoms) with the chain rule through z(v)."""
    out = sp.diff(e, v)
    dz = [(z, sp.diff(d, v)) for z, d in a.variables]
    for atom in unknown_atoms(e):
        name, sig, _ = atom_parts(atom)
        if name != a.function:
            continue
        de = sp.diff(e, atom)
        if de == 0:
            continue
        for z, dzv in dz:
            if dzv != 0 and z in sig:
                out += de * dzv * partial(atom, z)
    return out


def _eliminations(a: Ansatz) -> dict:
    """Solve each defining relation for one old variable."""
    rules, used = {}, set()
    for z, d in a.variables:
        for v in a.spec.variables:
            if v in used or not d.has(v):
                continue
            sols = sp.solve(sp.Eq(z, d), v)
            if len(sols) == 1:
                rules[v] = sols[0]
                used.add(v)
                break
        else:
            raise SymbolicError(f"cannot solve {z} = {to_text(d)} for an original variable")
    # later rules may mention variables eliminated earlier; close the map
    for _ in range(len(rules)):
        rules = {k: r.subs(rules) for k, r in rules.items()}
    return rules


@dataclass
class ReducedEquation:
    ansatz: Ansatz
    pde_name: str
    expression: sp.Expr  # polynomial in z and omega atoms, = 0
    multiplier: sp.Expr  # expression = multiplier * delta(ansatz)
    leftover: tuple = ()

    @property
    def reduced(self) -> bool:
        return not self.leftover

    def text(self) -> str:
        return to_text(self.expression) + " = 0"

    def as_dict(self) -> dict:
        return {
            "pde": self.pde_name,
            "ansatz": self.ansatz.text(),
            "reduced": to_text(self.expression),
            "multiplier": to_text(self.multiplier),
            "leftover": [str(v) for v in self.leftover],
        }


def _strip_monomial(e, strippable):
    """Split e = m * rest with m a product of powers of ``strippable`` atoms."""
    e = sp.factor_terms(sp.expand(e))
    coeff, factors = e.as_coeff_mul()
    if coeff == 0:
        return sp.Integer(1), sp.Integer(0)
    mono, rest = abs(coeff), [sp.sign(coeff)]
    for f in factors:
        base, ex = f.as_base_exp()
        if base in strippable or isinstance(f, sp.exp):
            mono *= f
        else:
            rest.append(f)
    return mono, sp.expand(sp.Mul(*rest))


def _canonical_sign(e, ordered_atoms):
    """Fix the overall sign so the leading term (deterministic order) is positive."""
    if e == 0:
        return e
    poly = sp.Poly(e, *ordered_atoms)
    lead = poly.coeffs()[0]
    return -e if lead.could_extract_minus_sign() else e


def substitute_ansatz(pde: PDE, ansatz: Ansatz) -> ReducedEquation:
    if ansatz.spec.base_symbols() != pde.spec.base_symbols():
        raise ValueError("ansatz and PDE live on different jet spaces")
    spec = pde.spec
    u_expr = ansatz.solved()
    cache = {(): u_expr}

    def jet(J):
        if J not in cache:
            cache[J] = _total(jet(J[:-1]), spec.variables[J[-1]], ansatz)
        return cache[J]

    sub = {spec.u: u_expr}
    for sym, J in spec.jet_coords_in(pde.delta).items():
        if J:
            sub[sym] = jet(J)
    e = pde.delta.xreplace(sub)
    rules = _eliminations(ansatz)
    e = e.subs(rules)
    e = sp.powsimp(sp.expand_log(sp.expand(e), force=True), combine="exp")
    e = simplify(e)
    num, den = sp.fraction(sp.together(e))
    olds = set(spec.variables) - set(rules)
    zs = [z for z, _ in ansatz.variables]
    strippable = set(olds) | set(zs) | {ansatz.omega}
    mono, rest = _strip_monomial(num, strippable)
    leftover = tuple(sorted((rest.free_symbols & set(spec.variables)) | (rest.free_symbols & set(rules)), key=str))
    atoms = sorted(unknown_atoms(rest), key=lambda a: (len(atom_parts(a)[2]), str(a)), reverse=True)
    order = atoms + zs
    if not leftover:
        try:
            rest2 = _canonical_sign(rest, order)
        except sp.PolynomialError:
            rest2 = rest
    else:
        rest2 = rest
    sign = sp.Integer(1) if rest2 == rest else sp.Integer(-1)
    multiplier = simplify(sign * den / mono)
    return ReducedEquation(ansatz, pde.name, rest2, multiplier, leftover)


# ---------------------------------------------------------------------------
# comparison with a printed target


@dataclass
class ComparisonReport:
    ours: sp.Expr
    target: sp.Expr
    scale: sp.Expr  # target is compared after multiplying by this factor
    cleared: sp.Expr = sp.Integer(1)  # denominator removed from the printed target
    agree: list = field(default_factory=list)  # (monomial, coeff)
    only_ours: list = field(default_factory=list)
    only_target: list = field(default_factory=list)
    differ: list = field(default_factory=list)  # (monomial, ours, target)

    @property
    def matches(self) -> bool:
        return not (self.only_ours or self.only_target or self.differ)

    def as_dict(self) -> dict:
        t = to_text
        return {
            "matches": self.matches,
            "ours": t(self.ours),
            "target": t(self.target),
            "scale": t(self.scale),
            "cleared_denominator": t(self.cleared),
            "agree": [[t(m), t(c)] for m, c in self.agree],
            "only_ours": [[t(m), t(c)] for m, c in self.only_ours],
            "only_target": [[t(m), t(c)] for m, c in self.only_target],
            "differ": [[t(m), t(a), t(b)] for m, a, b in self.differ],
        }

    def text(self) -> str:
        lines = [f"ours:   {to_text(self.ours)} = 0", f"target: {to_text(self.target)} = 0"]
        if self.cleared != 1:
            lines.append(f"target multiplied by {to_text(self.cleared)}")
        if self.scale != 1:
            lines.append(f"target scaled by {to_text(self.scale)}")
        lines.append("verdict: " + ("agree" if self.matches else "disagree"))
        for m, c in self.agree:
            lines.append(f"  same         {to_text(c * m)}")
        for m, c in self.only_ours:
            lines.append(f"  only ours    {to_text(c * m)}")
        for m, c in self.only_target:
            lines.append(f"  only target  {to_text(c * m)}")
        for m, a, b in self.differ:
            lines.append(f"  differs      {to_text(m)}: ours {to_text(a)}, target {to_text(b)}")
        return "\n".join(lines)


def _generators(*exprs):
    atoms = set()
    syms = set()
    for e in exprs:
        atoms |= unknown_atoms(e)
    for e in exprs:
        syms |= e.xreplace({a: sp.Integer(1) for a in atoms}).free_symbols
    return sorted(atoms, key=str) + sorted(syms, key=str)


def _terms(e, gens):
    poly = sp.Poly(sp.expand(e), *gens)
    out = {}
    for powers, c in poly.terms():
        m = sp.Mul(*[g**p for g, p in zip(gens, powers)])
        out[m] = c
    return out


def compare_reduced(ours, target) -> ComparisonReport:
    """Term-by-term comparison up to one overall nonzero constant.

    Denominators of the target are cleared first; the scale is then chosen
    from the first monomial both sides share.
    """
    ours = sp.expand(ours)
    num, den = sp.fraction(sp.together(sp.sympify(target)))
    target = sp.expand(num)
    gens = _generators(ours, target)
    a, b = _terms(ours, gens), _terms(target, gens)
    shared = [m for m in sorted(a, key=sp.default_sort_key) if m in b]
    scale = sp.Integer(1)
    if shared:
        scale = sp.nsimplify(a[shared[0]] / b[shared[0]])
    rep = ComparisonReport(ours, target, scale, cleared=den)
    for m in sorted(set(a) | set(b), key=sp.default_sort_key):
        ca, cb = a.get(m), b.get(m)
        if ca is not None and cb is not None:
            if is_zero(ca - scale * cb):
                rep.agree.append((m, ca))
            else:
                rep.differ.append((m, ca, scale * cb))
        elif ca is not None:
            rep.only_ours.append((m, ca))
        else:
            rep.only_target.append((m, scale * cb))
    return rep


# ---------------------------------------------------------------------------
# characteristics and invariance


def characteristic_system(v: VectorField) -> str:
    """dx^i/xi^i = dw/phi with vanishing slots listed as invariants.

    The last independent variable (time) leads the chain.
    """
    spec = v.spec
    names = list(spec.independent) + [spec.dependent]
    comps = [simplify(c) for c in v.coefficients]
    order = [spec.p - 1] + list(range(spec.p - 1)) + [spec.p]
    active = [i for i in order if comps[i] != 0]
    invariants = [f"invariant: {names[i]}" for i in range(len(names)) if comps[i] == 0]

    def ratio(i):
        c = to_text(comps[i])
        if not (comps[i].is_Symbol or (comps[i].is_Integer and comps[i] > 0)):
            c = f"({c})"
        return f"d{names[i]}/{c}"

    if not active:
        return "; ".join(invariants)
    if len(active) == 1:
        return "; ".join(invariants + [f"{ratio(active[0])} free"])
    return "; ".join([" = ".join(ratio(i) for i in active)] + invariants)


@dataclass
class InvarianceReport:
    invariant: bool
    variable_actions: dict  # similarity variable -> v(z)
    form_defect: sp.Expr

    def as_dict(self) -> dict:
        return {
            "invariant": self.invariant,
            "variable_actions": {k: to_text(e) for k, e in self.variable_actions.items()},
            "form_defect": to_text(self.form_defect),
        }


def invariance_check(ansatz: Ansatz, v: VectorField) -> InvarianceReport:
    """Does exp(eps v) map the ansatz family to itself?

    Needs v(z) = 0 for every similarity variable and v(u - U(x)) = 0 on
    u = U(x), where U is the solved form with omega held fixed.
    """
    spec = v.spec
    actions = {str(z): simplify(v(d)) for z, d in ansatz.variables}
    u_expr = ansatz.solved()
    frozen = u_expr.xreplace({a: sp.Dummy(str(a.func) if not isinstance(a, sp.Derivative) else "d") for a in unknown_atoms(u_expr)})
    defect = v(spec.u - frozen).xreplace({spec.u: frozen})
    defect = simplify(sp.expand_log(defect, force=True))
    defect = sp.Integer(0) if is_zero(defect) else defect
    ok = defect == 0 and all(is_zero(a) for a in actions.values())
    actions = {k: (sp.Integer(0) if is_zero(a) else a) for k, a in actions.items()}
    return InvarianceReport(ok, actions, defect)
