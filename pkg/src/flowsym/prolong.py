"""Vector fields on X x U and their prolongations to jet space."""

from __future__ import annotations

from dataclasses import dataclass, field

import sympy as sp

from .jetspace import JetSpec, total_derivative, total_derivative_multi
from .symkernel import SymbolicError, partial, simplify, unknown

COEFF_NAMES = {1: ("xi",), 2: ("xi", "tau"), 3: ("xi", "eta", "tau")}


def coefficient_names(spec: JetSpec) -> tuple:
    return COEFF_NAMES.get(spec.p, tuple(f"xi{i + 1}" for i in range(spec.p)))


@dataclass(frozen=True)
class VectorField:
    """v = sum_i xi^i(x, u) d/dx^i + phi(x, u) d/du."""

    spec: JetSpec
    xi: tuple
    phi: sp.Expr
    name: str = field(default="", compare=False)

    def __post_init__(self):
        xi = tuple(sp.sympify(c) for c in self.xi)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "phi", sp.sympify(self.phi))
        if len(xi) != self.spec.p:
            raise ValueError(f"expected {self.spec.p} xi coefficients, got {len(xi)}")
        for c in self.coefficients:
            bad = [s for s, J in self.spec.jet_coords_in(c).items() if J]
            if bad:
                raise SymbolicError(f"coefficient depends on jet coordinate {bad[0]}")

    @classmethod
    def general(cls, spec: JetSpec, name="v") -> "VectorField":
        """Field whose coefficients are unknown functions of (x, u)."""
        sig = spec.base_symbols()
        xi = tuple(unknown(n, sig) for n in coefficient_names(spec))
        return cls(spec, xi, unknown("phi", sig), name)

    @classmethod
    def from_components(cls, spec: JetSpec, name="", **comps) -> "VectorField":
        """Build from keyword components (``xi=..., tau=..., phi=...``); missing ones are 0."""
        names = coefficient_names(spec)
        unknown_keys = set(comps) - set(names) - {"phi"}
        if unknown_keys:
            raise ValueError(f"unknown components {sorted(unknown_keys)}")
        return cls(spec, tuple(comps.get(n, 0) for n in names), comps.get("phi", 0), name)

    @property
    def coefficients(self) -> tuple:
        return self.xi + (self.phi,)

    def components(self) -> dict:
        return dict(zip(coefficient_names(self.spec) + ("phi",), self.coefficients))

    def __call__(self, f) -> sp.Expr:
        """Apply v as a first-order differential operator to f(x, u)."""
        spec = self.spec
        out = sum(
            (c * partial(f, s) for c, s in zip(self.coefficients, spec.base_symbols()) if c != 0),
            sp.Integer(0),
        )
        return out

    def _combine(self, other, a, b):
        if other.spec != self.spec:
            raise ValueError("vector fields live on different spaces")
        return VectorField(
            self.spec,
            tuple(a * p + b * q for p, q in zip(self.xi, other.xi)),
            a * self.phi + b * other.phi,
        )

    def __add__(self, other):
        return self._combine(other, 1, 1)

    def __sub__(self, other):
        return self._combine(other, 1, -1)

    def __rmul__(self, c):
        return VectorField(self.spec, tuple(c * x for x in self.xi), c * self.phi)

    def __neg__(self):
        return (-1) * self

    def simplified(self) -> "VectorField":
        return VectorField(self.spec, tuple(simplify(x) for x in self.xi), simplify(self.phi), self.name)

    def is_zero(self) -> bool:
        return all(simplify(c) == 0 for c in self.coefficients)

    def text(self) -> str:
        from .grammar import to_text

        comps = self.components()
        return ", ".join(f"{k}={to_text(simplify(v))}" for k, v in comps.items())


def bracket(v: VectorField, u: VectorField) -> VectorField:
    """[v, u]^k = v(u^k) - u(v^k)."""
    if v.spec != u.spec:
        raise ValueError("vector fields live on different spaces")
    coeffs = [simplify(v(b) - u(a)) for a, b in zip(v.coefficients, u.coefficients)]
    return VectorField(v.spec, tuple(coeffs[:-1]), coeffs[-1])


@dataclass(frozen=True)
class ProlongedVectorField:
    base: VectorField
    order: int
    phiJ: dict  # multi-index tuple -> expression

    @property
    def spec(self) -> JetSpec:
        return self.base.spec

    def coefficient(self, J) -> sp.Expr:
        spec = self.spec
        J = tuple(sorted(j if isinstance(j, int) else spec.index_of(j) for j in J))
        return self.phiJ[J]


def prolong(v: VectorField, n: int, method: str = "recursive") -> ProlongedVectorField:
    """n-th prolongation of ``v``.

    ``recursive`` uses phi^{J,i} = D_i phi^J - sum_k (D_i xi^k) u_{J,k};
    ``formula`` evaluates phi^J = D_J(phi - sum_i xi^i u_i) + sum_i xi^i u_{J,i}
    directly.  Both give identical canonical forms.
    """
    if n < 1:
        raise ValueError("prolongation order must be at least 1")
    spec = v.spec.with_order(max(v.spec.order, n))
    phiJ = {(): simplify(v.phi)}
    if method == "recursive":
        dxi = {}
        for J in spec.multi_indices(n):
            parent, i = J[:-1], J[-1]
            # J is sorted, so its last index can be peeled off: J = (parent, i)
            if i not in dxi:
                dxi[i] = [total_derivative(x, spec.independent[i], spec) for x in v.xi]
            expr = total_derivative(phiJ[parent], spec.independent[i], spec)
            for k in range(spec.p):
                if v.xi[k] != 0:
                    expr -= dxi[i][k] * spec.coord(parent + (k,))
            phiJ[J] = simplify(expr)
    elif method == "formula":
        Q = v.phi - sum((x * spec.coord((k,)) for k, x in enumerate(v.xi)), sp.Integer(0))
        for J in spec.multi_indices(n):
            expr = total_derivative_multi(Q, J, spec)
            expr += sum((x * spec.coord(J + (k,)) for k, x in enumerate(v.xi)), sp.Integer(0))
            phiJ[J] = simplify(expr)
    else:
        raise ValueError(f"unknown prolongation method {method!r}")
    return ProlongedVectorField(v, n, phiJ)


def apply_prolonged(pv: ProlongedVectorField, e) -> sp.Expr:
    """pr v (e) = sum xi^i de/dx^i + phi de/du + sum_J phi^J de/du_J."""
    spec = pv.spec
    e = sp.sympify(e)
    out = pv.base(e)
    for sym, J in spec.jet_coords_in(e).items():
        if not J:
            continue
        if len(J) > pv.order:
            raise ValueError(f"{sym} exceeds prolongation order {pv.order}")
        out += pv.phiJ[J] * partial(e, sym)
    return simplify(out)
