"""Small computer-algebra layer over sympy.

Expressions are plain sympy trees.  This module fixes the conventions the
rest of the package relies on: how jet coordinates and unknown-function
atoms are represented, what the canonical form is, and how an expression
is split into coefficients over a monomial basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce as _fold
import operator

import sympy as sp

Expr = sp.Expr


class SymbolicError(ValueError):
    """Raised for ill-formed symbolic input (division by zero, bad basis)."""


# ---------------------------------------------------------------------------
# atoms


def unknown(name: str, signature, derivs=()) -> Expr:
    """Unknown function ``name`` of ``signature``, optionally differentiated.

    ``unknown("xi", (x, y, t, w), (x, w))`` is the atom for d^2 xi / dx dw.
    """
    signature = tuple(signature)
    atom = sp.Function(name)(*signature)
    for d in derivs:
        if d not in signature:
            return sp.Integer(0)
    if derivs:
        # mixed partials commute; keep one spelling per atom
        atom = sp.Derivative(atom, *sorted(derivs, key=signature.index))
    return atom


def is_unknown_atom(e) -> bool:
    if isinstance(e, sp.Derivative):
        e = e.expr
    return isinstance(e, sp.core.function.AppliedUndef)


def atom_parts(e):
    """Split an unknown-function atom into (name, signature, derivative list)."""
    derivs: list = []
    if isinstance(e, sp.Derivative):
        for var, count in e.variable_count:
            derivs.extend([var] * int(count))
        e = e.expr
    if not isinstance(e, sp.core.function.AppliedUndef):
        raise SymbolicError(f"not an unknown-function atom: {e}")
    return e.func.__name__, tuple(e.args), derivs


def unknown_atoms(e) -> set:
    """All unknown-function atoms (derivatives included) occurring in ``e``."""
    found = set(e.atoms(sp.Derivative))
    found = {d for d in found if is_unknown_atom(d)}
    for f in e.atoms(sp.core.function.AppliedUndef):
        found.add(f)
    return found


# ---------------------------------------------------------------------------
# canonical form


def _check_finite(e):
    if e.has(sp.zoo, sp.nan, sp.oo, -sp.oo):
        raise SymbolicError("division by symbolic zero")
    return e


def canonical_atoms(e) -> Expr:
    """Rewrite derivative atoms so mixed partials use the signature order."""
    rep = {}
    for d in e.atoms(sp.Derivative):
        if not is_unknown_atom(d):
            continue
        name, sig, derivs = atom_parts(d)
        if all(v in sig for v in derivs):
            c = unknown(name, sig, derivs)
            if c != d:
                rep[d] = c
    return e.xreplace(rep) if rep else e


def simplify(e) -> Expr:
    """Canonical form: expanded, with products of exponentials merged and
    mixed partials of unknown functions in signature order.

    Idempotent and deterministic.  This is deliberately weaker than
    ``sympy.simplify``; it never rewrites trig or radical expressions.
    """
    e = canonical_atoms(sp.sympify(e))
    _check_finite(e)
    e = sp.expand(e, power_exp=False, log=False)
    e = sp.powsimp(e, combine="exp", deep=True)
    # powsimp can regroup a product whose factors were an expanded sum
    e = sp.expand(e, power_exp=False, log=False)
    return _check_finite(e)


def is_zero(e) -> bool:
    """Decide ``e == 0`` symbolically, escalating through cheaper normal forms."""
    e = simplify(e)
    if e == 0:
        return True
    num, _ = sp.fraction(sp.together(e))
    num = simplify(num)
    if num == 0:
        return True
    num = sp.expand(sp.powsimp(sp.expand_log(num, force=True), combine="exp"))
    if num == 0:
        return True
    return sp.simplify(num) == 0


def partial(e, s) -> Expr:
    """Partial derivative treating every other symbol as independent."""
    if not isinstance(s, sp.Symbol):
        raise SymbolicError(f"can only differentiate by a symbol, got {s}")
    return sp.diff(e, s)


def substitute(e, bindings: dict) -> Expr:
    """Simultaneous substitution followed by :func:`simplify`."""
    if not bindings:
        return simplify(e)
    return simplify(sp.sympify(e).subs(bindings, simultaneous=True))


# ---------------------------------------------------------------------------
# monomial collection


@dataclass(frozen=True, order=True)
class Monomial:
    """Product of basis coordinates, optionally times ``exp(k*var)``."""

    exp_power: int
    powers: tuple  # ((basis index, symbol name, power), ...) sorted by index

    @property
    def degree(self) -> int:
        return sum(p for _, _, p in self.powers)

    def sort_key(self):
        return (self.degree, tuple((i, -p) for i, _, p in self.powers), self.exp_power)

    def to_expr(self, exp_var=None) -> Expr:
        factors = [sp.Symbol(name) ** p for _, name, p in self.powers]
        if self.exp_power:
            factors.append(sp.exp(self.exp_power * exp_var))
        return _fold(operator.mul, factors, sp.Integer(1))

    def text(self, exp_var_name: str = "w") -> str:
        parts = []
        if self.exp_power == 1:
            parts.append(f"exp({exp_var_name})")
        elif self.exp_power == -1:
            parts.append(f"exp(-{exp_var_name})")
        elif self.exp_power:
            parts.append(f"exp({self.exp_power}*{exp_var_name})")
        for _, name, p in self.powers:
            parts.append(name if p == 1 else f"{name}^{p}")
        return "*".join(parts) if parts else "1"

    def __str__(self):
        return self.text()


def _split_exp(arg, exp_var):
    """Write ``arg`` as ``k*exp_var + rest`` with integer k."""
    arg = sp.expand(arg)
    k = arg.coeff(exp_var, 1)
    rest = sp.expand(arg - k * exp_var)
    if rest.has(exp_var) or not k.is_Integer:
        raise SymbolicError(f"exp({arg}) is not an integer multiple of {exp_var} plus a remainder")
    return int(k), rest


def collect(e, basis, exp_var=None) -> dict:
    """Coefficients of ``e`` over monomials in ``basis`` (and ``exp(k*exp_var)``).

    Returns ``{Monomial: coefficient}`` with zero coefficients dropped.  The
    coefficients contain no basis symbol.  Raises :class:`SymbolicError`
    naming the coordinate when ``e`` is not polynomial in the basis.
    """
    basis = list(basis)
    index = {b: i for i, b in enumerate(basis)}
    bset = set(basis)
    out: dict = {}
    for term in sp.Add.make_args(simplify(e)):
        if term == 0:
            continue
        powers: dict = {}
        kexp = 0
        coeff = []
        for f in sp.Mul.make_args(term):
            base, p = f.as_base_exp()
            if base in bset:
                if not (p.is_Integer and p > 0):
                    raise SymbolicError(f"non-polynomial dependence on {base}")
                powers[base] = powers.get(base, 0) + int(p)
                continue
            if exp_var is not None and isinstance(f, sp.exp) and f.args[0].has(exp_var):
                k, rest = _split_exp(f.args[0], exp_var)
                kexp += k
                if rest != 0:
                    coeff.append(sp.exp(rest))
                continue
            bad = f.free_symbols & bset
            if bad:
                name = sorted(str(b) for b in bad)[0]
                raise SymbolicError(f"non-polynomial dependence on {name}")
            if exp_var is not None and f.has(sp.exp) and any(
                a.args[0].has(exp_var) for a in f.atoms(sp.exp)
            ):
                raise SymbolicError(f"exp marker of {exp_var} inside {f}")
            coeff.append(f)
        key = Monomial(
            kexp,
            tuple(sorted((index[b], str(b), p) for b, p in powers.items())),
        )
        out[key] = out.get(key, 0) + _fold(operator.mul, coeff, sp.Integer(1))
    result = {}
    for key in sorted(out, key=Monomial.sort_key):
        c = simplify(out[key])
        if c != 0:
            result[key] = c
    return result


def rebuild(coeffs: dict, exp_var=None) -> Expr:
    """Inverse of :func:`collect`."""
    total = sum((m.to_expr(exp_var) * c for m, c in coeffs.items()), sp.Integer(0))
    return simplify(total)
