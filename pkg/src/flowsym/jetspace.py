"""Jet spaces, total derivatives and PDE declarations."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement
from math import comb

import sympy as sp

from .symkernel import SymbolicError, is_zero, partial, simplify, substitute


@dataclass(frozen=True)
class JetSpec:
    """Independent variables, one dependent variable and a maximal order.

    Jet coordinates are sympy symbols named ``<dep>_<letters>`` where the
    letters follow the declaration order of the independent variables, so
    ``w_xt`` and ``w_tx`` denote the same coordinate.
    """

    independent: tuple
    dependent: str
    order: int = 2

    def __post_init__(self):
        object.__setattr__(self, "independent", tuple(self.independent))
        if self.order < 1:
            raise ValueError("jet order must be at least 1")
        if any(len(v) != 1 for v in self.independent):
            raise ValueError("independent variables must be single letters")
        if len(set(self.independent)) != len(self.independent):
            raise ValueError("duplicate independent variable")
        if self.dependent in self.independent:
            raise ValueError("dependent variable clashes with an independent one")

    @property
    def p(self) -> int:
        return len(self.independent)

    @cached_property
    def variables(self) -> tuple:
        return tuple(sp.Symbol(v) for v in self.independent)

    @cached_property
    def u(self) -> sp.Symbol:
        return sp.Symbol(self.dependent)

    def base_symbols(self) -> tuple:
        return self.variables + (self.u,)

    def with_order(self, n: int) -> "JetSpec":
        return JetSpec(self.independent, self.dependent, n)

    def index_of(self, var) -> int:
        return self.independent.index(str(var))

    def coord(self, J) -> sp.Symbol:
        """Jet coordinate for multi-index ``J`` (variable names or indices)."""
        J = tuple(j if isinstance(j, int) else self.index_of(j) for j in J)
        if not J:
            return self.u
        return sp.Symbol(self.dependent + "_" + "".join(self.independent[j] for j in sorted(J)))

    def multi_index(self, sym) -> tuple | None:
        """Sorted multi-index of a jet coordinate, ``()`` for the dependent
        variable itself, ``None`` for anything else."""
        if not isinstance(sym, sp.Symbol):
            return None
        name = sym.name
        if name == self.dependent:
            return ()
        head, sep, idx = name.partition("_")
        if not sep or head != self.dependent or not idx:
            return None
        try:
            return tuple(sorted(self.independent.index(c) for c in idx))
        except ValueError:
            return None

    def multi_indices(self, order: int | None = None, min_order: int = 1) -> list:
        n = self.order if order is None else order
        out = []
        for k in range(min_order, n + 1):
            out.extend(combinations_with_replacement(range(self.p), k))
        return out

    def derivative_coords(self, order: int | None = None) -> list:
        return [self.coord(J) for J in self.multi_indices(order)]

    def coordinates(self) -> list:
        """All coordinates of X x U^(n), in the order x; u; u_J by |J|."""
        return list(self.variables) + [self.u] + self.derivative_coords()

    def coordinate_count(self) -> int:
        p = self.p
        return p + 1 + sum(comb(p + k - 1, k) for k in range(1, self.order + 1))

    def jet_coords_in(self, e) -> dict:
        """``{symbol: multi-index}`` for the jet coordinates occurring in ``e``."""
        out = {}
        for s in sp.sympify(e).free_symbols:
            J = self.multi_index(s)
            if J is not None:
                out[s] = J
        return out

    def order_of(self, e) -> int:
        return max((len(J) for J in self.jet_coords_in(e).values()), default=0)


def total_derivative(e, var, spec: JetSpec) -> sp.Expr:
    """D_i e = de/dx^i + sum_J u_{J,i} de/du_J.

    Coordinates of order above ``spec.order`` are created as needed.
    """
    i = spec.index_of(var)
    e = sp.sympify(e)
    out = partial(e, spec.variables[i])
    for sym, J in spec.jet_coords_in(e).items():
        out += spec.coord(J + (i,)) * partial(e, sym)
    return out


def total_derivative_multi(e, J, spec: JetSpec) -> sp.Expr:
    for j in J:
        e = total_derivative(e, spec.independent[j] if isinstance(j, int) else j, spec)
    return e


@dataclass(frozen=True)
class PDE:
    """A scalar equation delta = 0 with a chosen leading coordinate.

    ``solve_for = (C, R)`` states that delta = 0 is equivalent to C = R on
    the solution manifold; it is checked on construction.
    """

    spec: JetSpec
    delta: sp.Expr
    solve_for: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        c, r = self.solve_for
        if self.spec.multi_index(c) in (None, ()):
            raise SymbolicError(f"solve_for target {c} is not a derivative coordinate")
        if r.has(c):
            raise SymbolicError(f"solve_for right-hand side still contains {c}")
        if not is_zero(self.delta.subs(c, r)):
            raise SymbolicError(f"delta does not vanish under {c} = {r}")
        if all(is_zero(d) for d in self.gradient()):
            raise SymbolicError("delta has an identically vanishing Jacobian row")

    @property
    def leading(self) -> sp.Symbol:
        return self.solve_for[0]

    def restrict(self, e) -> sp.Expr:
        """Eliminate the leading coordinate using the solve_for relation."""
        c, r = self.solve_for
        return substitute(e, {c: r})

    def gradient(self) -> list:
        return [simplify(partial(self.delta, s)) for s in self.spec.coordinates()]


@dataclass
class JacobianReport:
    coordinates: list
    row: list
    values: list  # per sample: list of numbers
    full_rank: bool

    def as_dict(self):
        from .grammar import to_text

        return {
            "coordinates": [str(c) for c in self.coordinates],
            "row": [to_text(r) for r in self.row],
            "full_rank": self.full_rank,
            "samples": [[str(v) for v in vals] for vals in self.values],
        }


def jacobian_rank_check(pde: PDE, samples) -> JacobianReport:
    """Evaluate the Jacobian row of delta at points of the solution manifold.

    A sample maps coordinates to values.  When the leading coordinate is
    missing it is filled in from the solve_for relation; when present the
    sample must satisfy delta = 0.
    """
    coords = pde.spec.coordinates()
    row = pde.gradient()
    values = []
    full = True
    c, r = pde.solve_for
    for sample in samples:
        sub = {sp.Symbol(str(k)): sp.nsimplify(v) for k, v in dict(sample).items()}
        if c not in sub:
            sub[c] = r.subs(sub)
        resid = sp.simplify(pde.delta.subs(sub))
        if resid != 0:
            raise ValueError(f"sample violates delta = 0 (residual {resid})")
        vals = [sp.simplify(g.subs(sub)) for g in row]
        values.append(vals)
        if all(v == 0 for v in vals):
            full = False
    return JacobianReport(coords, row, values, full)


def evaluate_on(e, spec: JetSpec, f) -> sp.Expr:
    """Replace every jet coordinate u_J in ``e`` by the derivative d_J f."""
    f = sp.sympify(f)
    sub = {}
    for sym, J in spec.jet_coords_in(e).items():
        d = f
        for j in J:
            d = sp.diff(d, spec.variables[j])
        sub[sym] = d
    return sp.sympify(e).xreplace(sub)
