"""Structure constants, adjoint action and the one-dimensional optimal system."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import random

import numpy as np
import scipy.linalg
import sympy as sp

from .grammar import to_text
from .prolong import VectorField, bracket
from .symkernel import SymbolicError, is_zero, simplify

eps = sp.Symbol("eps")


def _sample_points(spec, k, seed=7):
    rng = random.Random(seed)
    syms = spec.base_symbols()
    return [{s: sp.Rational(rng.randint(-40, 40), rng.randint(1, 9)) for s in syms} for _ in range(k)]


def decompose(field_: VectorField, basis) -> list:
    """Constant coefficients c with field = sum c_l basis[l], or raise."""
    m = len(basis)
    cs = sp.symbols(f"c0:{m}")
    combo = [sum((c * b.coefficients[k] for c, b in zip(cs, basis)), sp.Integer(0)) for k in range(len(field_.coefficients))]
    eqs = []
    for pt in _sample_points(field_.spec, m + 3):
        for k, target in enumerate(field_.coefficients):
            eqs.append(sp.nsimplify(combo[k].subs(pt) - target.subs(pt)))
    sol = sp.linsolve(eqs, cs)
    if not sol:
        raise SymbolicError("bracket is not in the span of the basis")
    (vals,) = sol
    vals = [v.subs({c: 0 for c in cs}) for v in vals]
    for k, target in enumerate(field_.coefficients):
        if not is_zero(combo[k].subs(dict(zip(cs, vals))) - target):
            raise SymbolicError("bracket is not in the span of the basis")
    return [sp.nsimplify(v) for v in vals]


@dataclass(frozen=True)
class LieAlgebra:
    basis: tuple
    C: tuple  # C[i][j][l] = coefficient of v_l in [v_i, v_j]
    names: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def ad_matrix(self, i: int) -> sp.Matrix:
        """Matrix of ad v_i on coefficient vectors: column j is [v_i, v_j]."""
        m = self.dim
        return sp.Matrix(m, m, lambda l, j: self.C[i][j][l])

    def bracket_vec(self, a, b) -> list:
        m = self.dim
        out = [sp.Integer(0)] * m
        for i in range(m):
            if a[i] == 0:
                continue
            for j in range(m):
                if b[j] == 0:
                    continue
                for l in range(m):
                    if self.C[i][j][l] != 0:
                        out[l] += a[i] * b[j] * self.C[i][j][l]
        return out

    def commutator_table(self) -> list:
        """Rows of text entries, entry (i, j) = [v_i, v_j]."""
        return [[combination_text(self.C[i][j], self.names) for j in range(self.dim)] for i in range(self.dim)]

    def adjoint_matrix(self, i: int, param=eps) -> sp.Matrix:
        M = _adjoint_closed_form(self, i)
        return M if param is eps else M.subs(eps, param)

    def adjoint(self, i: int, param, j: int) -> list:
        """Coefficient vector of Ad(exp(param v_i)) v_j."""
        return list(self.adjoint_matrix(i, param)[:, j])

    def adjoint_numeric(self, i: int, param: float) -> np.ndarray:
        A = np.array(self.ad_matrix(i).tolist(), dtype=float)
        return scipy.linalg.expm(-float(param) * A)

    def adjoint_table(self) -> list:
        return [
            [combination_text(self.adjoint(i, eps, j), self.names) for j in range(self.dim)]
            for i in range(self.dim)
        ]


def combination_text(coeffs, names) -> str:
    parts = []
    for c, n in zip(coeffs, names):
        c = sp.simplify(c)
        if c == 0:
            continue
        if c == 1:
            term = n
        elif c == -1:
            term = "-" + n
        else:
            s = to_text(c)
            term = f"({s})*{n}" if isinstance(c, sp.Add) else f"{s}*{n}"
        if parts and term.startswith("-"):
            parts.append(" - " + term[1:])
        elif parts:
            parts.append(" + " + term)
        else:
            parts.append(term)
    return "".join(parts) or "0"


def structure_constants(basis, names=None) -> LieAlgebra:
    basis = tuple(basis)
    m = len(basis)
    names = tuple(names or [b.name or f"v{k + 1}" for k, b in enumerate(basis)])
    C = [[[sp.Integer(0)] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            br = bracket(basis[i], basis[j])
            if br.is_zero():
                continue
            try:
                vals = decompose(br, basis)
            except SymbolicError:
                raise SymbolicError(
                    f"basis not closed: [{names[i]}, {names[j]}] = {br.text()} is outside the span"
                ) from None
            C[i][j] = vals
            C[j][i] = [-v for v in vals]
    C = tuple(tuple(tuple(row) for row in plane) for plane in C)
    alg = LieAlgebra(basis, C, names)
    bad = jacobi_violations(alg)
    if bad:
        raise SymbolicError(f"Jacobi identity fails at {bad[0]}")
    return alg


def jacobi_violations(alg: LieAlgebra) -> list:
    m, C = alg.dim, alg.C
    out = []
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    s = sum(
                        C[i][j][n] * C[n][k][l] + C[j][k][n] * C[n][i][l] + C[k][i][n] * C[n][j][l]
                        for n in range(m)
                    )
                    if s != 0:
                        out.append((i, j, k, l))
    return out


def _eigen_ok(A: sp.Matrix) -> bool:
    for ev in A.eigenvals():
        re, im = ev.as_real_imag()
        if not (re.is_rational and im.is_rational and (re == 0 or im == 0)):
            return False
    return True


@lru_cache(maxsize=None)
def _adjoint_cached(C, i):
    m = len(C)
    A = sp.Matrix(m, m, lambda l, j: C[i][j][l])
    if not _eigen_ok(A):
        raise SymbolicError(
            f"ad v{i + 1} has eigenvalues {list(A.eigenvals())}; use adjoint_numeric at a fixed parameter"
        )
    r = sp.Symbol("eps", real=True)
    N = -r * A
    if (A**m).is_zero_matrix:
        M = sp.eye(m)
        term = sp.eye(m)
        for k in range(1, m + 1):
            term = term * N / k
            M += term
    else:
        M = N.exp()
    M = M.applyfunc(lambda z: sp.simplify(sp.expand_complex(z.rewrite(sp.cos))))
    return M.subs(r, eps)


def _adjoint_closed_form(alg: LieAlgebra, i: int) -> sp.Matrix:
    return _adjoint_cached(alg.C, i)


# ---------------------------------------------------------------------------
# the six-dimensional surface-flow algebra


def surface_algebra(kind="ricci") -> LieAlgebra:
    from .geoflow import surface_generators

    basis = surface_generators(kind)
    return structure_constants(basis, [v.name for v in basis])


LABELS = ("a", "b", "c1", "c2", "c3", "d1", "d2", "d3", "e", "f")
GAP_LABELS = ("a*", "b*")
# classes conjugate to each other under a rotation, listed separately in the published optimal system
ROTATION_TWINS = {"c3": "c2", "d3": "d2", "f": "e"}


@dataclass(frozen=True)
class Step:
    """One witness step acting on coefficient vectors.

    ``kind`` is "adjoint" (Ad(exp(param v_index))), "scale" (multiply the
    whole vector by ``param``; a one-dimensional subalgebra is a span) or
    "flip" (the reflection x -> -x or y -> -y).
    """

    kind: str
    param: sp.Expr = sp.Integer(1)
    index: int = -1
    axis: str = ""

    def text(self, names=None) -> str:
        if self.kind == "adjoint":
            n = names[self.index] if names else f"v{self.index + 1}"
            return f"Ad(exp({to_text(self.param)}*{n}))"
        if self.kind == "scale":
            return f"scale {to_text(self.param)}"
        return f"flip {self.axis}"


# reflections act on v2, v3, v5 only
FLIPS = {"x": (1, -1, 1, 1, -1, 1), "y": (1, 1, -1, 1, -1, 1)}


def apply_step(alg: LieAlgebra, step: Step, a) -> list:
    a = list(a)
    if step.kind == "adjoint":
        if step.param == 0:
            return a
        return [simplify(sp.radsimp(z)) for z in alg.adjoint_matrix(step.index, step.param) * sp.Matrix(a)]
    if step.kind == "scale":
        return [simplify(step.param * z) for z in a]
    if step.kind == "flip":
        return [s * z for s, z in zip(FLIPS[step.axis], a)]
    raise ValueError(f"unknown step kind {step.kind!r}")


def replay(alg: LieAlgebra, witness, a) -> list:
    for st in witness:
        a = apply_step(alg, st, a)
    return [sp.nsimplify(sp.radsimp(z)) if z.is_number else z for z in a]


@dataclass
class Classification:
    label: str
    representative: list
    witness: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)

    @property
    def in_published_list(self) -> bool:
        return self.label in LABELS

    def representative_text(self, names=None) -> str:
        return combination_text(self.representative, names or [f"v{k}" for k in range(1, 7)])

    def as_dict(self, names=None) -> dict:
        return {
            "class": self.label,
            "representative": self.representative_text(names),
            "coefficients": [to_text(z) for z in self.representative],
            "parameters": {k: to_text(v) for k, v in self.parameters.items()},
            "in_published_list": self.in_published_list,
            "witness": [st.text(names) for st in self.witness],
        }


class _Builder:
    def __init__(self, alg, a):
        self.alg, self.a, self.steps = alg, list(a), []

    def do(self, step):
        if (step.kind == "adjoint" and step.param == 0) or (step.kind == "scale" and step.param == 1):
            return
        self.steps.append(step)
        self.a = apply_step(self.alg, step, self.a)

    def ad(self, i, p):
        self.do(Step("adjoint", sp.nsimplify(p) if p.is_number else p, i - 1))

    def scale(self, c):
        self.do(Step("scale", sp.nsimplify(c)))

    def flip(self, axis):
        self.do(Step("flip", axis=axis))

    def exp_scale(self, i, factor):
        """Ad(exp(eps v_i)) with e^eps = factor > 0."""
        if factor != 1:
            self.ad(i, sp.log(factor))


def _plane_to_axis(b: _Builder, sign: int = 1):
    """Rotate and scale (a2, a3) onto the unit coordinate direction.

    a2 != 0 leads to the v2 direction, a2 = 0 to the v3 direction, whose
    sign is fixed by ``sign``.
    Returns "2" or "3" for the direction reached or "" when both vanish.
    """
    a2, a3 = b.a[1], b.a[2]
    if a2 != 0:
        if a3 != 0:
            b.ad(5, sp.atan(a3 / a2))
        a2 = b.a[1]
        b.exp_scale(6, 1 / abs(a2))
        if b.a[1] < 0:
            b.flip("x")
        return "2"
    if a3 != 0:
        b.exp_scale(6, 1 / abs(a3))
        if b.a[2] * sign < 0:
            b.flip("y")
        return "3"
    return ""


def normalize(a, alg: LieAlgebra | None = None) -> Classification:
    """Reduce a coefficient vector to its optimal-system representative.

    The witness replayed on ``a`` reproduces the representative exactly.
    """
    alg = alg or surface_algebra()
    a = [sp.nsimplify(z) for z in a]
    if len(a) != 6:
        raise ValueError("expected six coefficients")
    if all(z == 0 for z in a):
        raise ValueError("the zero vector spans no subalgebra")
    b = _Builder(alg, a)
    a1, a2, a3, a4, a5, a6 = a
    params = {}
    if a6 != 0 or a5 != 0:
        lead = 6 if a6 != 0 else 5
        b.scale(1 / b.a[lead - 1])
        a1, a2, a3, a4, a5, a6 = b.a
        det = a5**2 + a6**2
        e2 = (a6 * a2 - a5 * a3) / det
        e3 = (a5 * a2 + a6 * a3) / det
        b.ad(2, e2)
        b.ad(3, e3)
        if b.a[3] != 0:
            b.ad(1, b.a[0] / b.a[3])
            label = "a" if lead == 6 else "b"
        elif b.a[0] != 0:
            b.exp_scale(4, 1 / abs(b.a[0]))
            label = "a*" if lead == 6 else "b*"
        else:
            label = "a" if lead == 6 else "b"
        params = {"a4": b.a[3], "a5": b.a[4]} if lead == 6 else {"a4": b.a[3]}
    elif a4 != 0:
        b.scale(1 / a4)
        b.ad(1, b.a[0])
        label = "c" + {"2": "2", "3": "3", "": "1"}[_plane_to_axis(b)]
    elif a1 != 0:
        b.scale(1 / a1)
        label = "d" + {"2": "2", "3": "3", "": "1"}[_plane_to_axis(b, sign=-1)]
    elif a2 != 0:
        b.scale(1 / a2)
        label = "e"
        params = {"a3": b.a[2]}
    else:
        b.scale(1 / a3)
        label = "f"
    rep = [sp.nsimplify(sp.radsimp(z)) for z in b.a]
    return Classification(label, rep, b.steps, params)


def representatives(a3=sp.Rational(2, 3), a4=sp.Rational(-3, 5), a5=sp.Rational(5, 7)) -> dict:
    """One coefficient vector per published class, with sample parameters."""
    return {
        "a": [0, 0, 0, a4, a5, 1],
        "b": [0, 0, 0, a4, 1, 0],
        "c1": [0, 0, 0, 1, 0, 0],
        "c2": [0, 1, 0, 1, 0, 0],
        "c3": [0, 0, 1, 1, 0, 0],
        "d1": [1, 0, 0, 0, 0, 0],
        "d2": [1, 1, 0, 0, 0, 0],
        "d3": [1, 0, -1, 0, 0, 0],
        "e": [0, 1, a3, 0, 0, 0],
        "f": [0, 0, 1, 0, 0, 0],
    }


def same_class(l1: str, l2: str) -> bool:
    return ROTATION_TWINS.get(l1, l1) == ROTATION_TWINS.get(l2, l2)


def random_vector(rng: random.Random, sparsity=0.4) -> list:
    while True:
        a = [
            sp.Integer(0) if rng.random() < sparsity else sp.Rational(rng.randint(-9, 9), rng.randint(1, 6))
            for _ in range(6)
        ]
        if any(z != 0 for z in a):
            return a


# rotations whose cosine and sine are rational keep random group actions exact
PYTHAGOREAN = [sp.atan(sp.Rational(3, 4)), sp.atan(sp.Rational(5, 12)), -sp.atan(sp.Rational(8, 15))]


def random_group_element(rng: random.Random, length=3) -> list:
    steps = []
    for _ in range(length):
        i = rng.randrange(6)
        if i == 4:
            p = rng.choice(PYTHAGOREAN)
        elif i in (3, 5):
            p = sp.log(sp.Rational(rng.randint(1, 5), rng.randint(1, 5)))
        else:
            p = sp.Rational(rng.randint(-6, 6), rng.randint(1, 4))
        steps.append(Step("adjoint", p, i))
    if rng.random() < 0.3:
        steps.append(Step("flip", axis=rng.choice("xy")))
    return steps
