"""Randomized algebraic identities for the symbolic and Lie-algebra layers."""

import functools
import math
import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
import pytest
import sympy as sp

from flowsym import reference
from flowsym.fileio import parse_ansatz
from flowsym.geoflow import SURFACE, surface_equation
from flowsym.grammar import Context, parse, to_text
from flowsym.jetspace import total_derivative
from flowsym.liealg import normalize, random_group_element, replay, same_class, surface_algebra
from flowsym.prolong import VectorField, apply_prolonged, bracket, prolong
from flowsym.reduce import substitute_ansatz
from flowsym.symkernel import atom_parts, collect, partial, rebuild, simplify, unknown, unknown_atoms

x, y, t, w = sp.symbols("x y t w")
SIG = (x, y, t, w)
JETS = [SURFACE.coord(J) for J in [(0,), (1,), (2,), (0, 0), (0, 1), (1, 1), (0, 2)]]
BASE = [x, y, t, w, sp.exp(w), sp.exp(-w)] + JETS

FAST = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])

small_int = st.integers(-3, 3)
rational = st.builds(sp.Rational, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def jet_polynomials(draw, terms=3):
    """Small sums of products of base symbols with integer coefficients."""
    out = sp.Integer(0)
    for _ in range(draw(st.integers(1, terms))):
        factors = draw(st.lists(st.sampled_from(BASE), min_size=1, max_size=3))
        out += draw(small_int) * sp.Mul(*factors)
    return out


@st.composite
def polynomial_fields(draw):
    """Vector fields with low-degree polynomial components in x, y, t, w."""
    monos = [sp.Integer(1), x, y, t, w, x * y, t * w, x**2]

    def comp():
        return sum(draw(small_int) * m for m in draw(st.lists(st.sampled_from(monos), max_size=2)))

    return VectorField.from_components(SURFACE, xi=comp(), eta=comp(), tau=comp(), phi=comp())


coefficient_vectors = st.lists(rational, min_size=6, max_size=6).filter(lambda a: any(c != 0 for c in a))


@pytest.fixture(scope="module")
def alg():
    return surface_algebra("ricci")


@given(st.permutations([x, y, t, w]))
def test_mixed_partials_commute(order):
    f = unknown("tau", SIG)
    a, b = order[:2]
    assert simplify(partial(partial(f, a), b) - partial(partial(f, b), a)) == 0


@FAST
@given(jet_polynomials(), st.sampled_from(["x", "y", "t"]), st.sampled_from(["x", "y", "t"]))
def test_total_derivatives_commute(e, a, b):
    lhs = total_derivative(total_derivative(e, a, SURFACE), b, SURFACE)
    rhs = total_derivative(total_derivative(e, b, SURFACE), a, SURFACE)
    assert sp.expand(lhs - rhs) == 0


@FAST
@given(jet_polynomials(), jet_polynomials(), small_int, st.sampled_from(["x", "y", "t"]))
def test_total_derivative_linear_and_leibniz(f, g, c, var):
    D = lambda e: total_derivative(e, var, SURFACE)  # noqa: E731
    assert sp.expand(D(c * f + g) - (c * D(f) + D(g))) == 0
    assert sp.expand(D(f * g) - (f * D(g) + g * D(f))) == 0


@FAST
@given(jet_polynomials())
def test_simplify_is_idempotent(e):
    once = simplify(e)
    assert simplify(once) == once


@FAST
@given(jet_polynomials())
def test_print_parse_round_trip(e):
    ctx = Context.for_jet(SURFACE)
    assert sp.expand(parse(to_text(e), ctx) - e) == 0


@FAST
@given(st.lists(st.tuples(small_int, st.sampled_from(JETS[:4]), st.sampled_from(["xi", "tau", "phi"])), min_size=1, max_size=5))
def test_collect_rebuild_round_trip(terms):
    e = sum(c * m * unknown(name, SIG) for c, m, name in terms)
    coeffs = collect(e, JETS)
    assert sp.expand(rebuild(coeffs) - e) == 0


@settings(max_examples=8, deadline=None)
@given(polynomial_fields(), polynomial_fields(), jet_polynomials(terms=2))
def test_prolongation_respects_brackets(v, u, F):
    pv, pu, pb = prolong(v, 2), prolong(u, 2), prolong(bracket(v, u), 2)
    lhs = apply_prolonged(pb, F)
    rhs = apply_prolonged(pv, apply_prolonged(pu, F)) - apply_prolonged(pu, apply_prolonged(pv, F))
    assert sp.expand(lhs - rhs) == 0


@FAST
@given(coefficient_vectors, coefficient_vectors, coefficient_vectors)
def test_jacobi_identity(alg, a, b, c):
    br = alg.bracket_vec
    total = [sum(z) for z in zip(br(a, br(b, c)), br(b, br(c, a)), br(c, br(a, b)))]
    assert all(z == 0 for z in total)


@FAST
@given(st.integers(0, 5), rational, coefficient_vectors, coefficient_vectors)
def test_adjoint_preserves_bracket(alg, i, eps, a, b):
    A = alg.adjoint_matrix(i, eps)
    lhs = A * sp.Matrix(alg.bracket_vec(a, b))
    rhs = alg.bracket_vec(list(A * sp.Matrix(a)), list(A * sp.Matrix(b)))
    assert all(sp.simplify(p - q) == 0 for p, q in zip(lhs, rhs))


@settings(max_examples=15, deadline=None)
@given(coefficient_vectors, st.integers(0, 10**6))
def test_class_is_a_group_invariant(alg, a, seed):
    b = replay(alg, random_group_element(random.Random(seed)), a)
    assert same_class(normalize(a, alg).label, normalize(b, alg).label)


@functools.lru_cache(maxsize=None)
def _reduction(key):
    a = parse_ansatz(reference.REDUCTIONS[key]["ansatz"])
    return a, substitute_ansatz(surface_equation("ricci"), a)


def _numeric(e, point):
    return complex(sp.N(e.subs(point))).real


@pytest.mark.parametrize("key", ["ricci-scaling", "ricci-exp"])
@settings(max_examples=5, deadline=None)
@given(c0=st.integers(1, 4), c1=small_int, c2=small_int)
def test_reduction_is_exact_substitution(key, c0, c1, c2):
    # the reduced expression equals multiplier * delta[w] for any concrete omega
    a, red = _reduction(key)
    zs = [z for z, _ in a.variables]
    f = c0 + sum((z - c) ** 2 for z, c in zip(zs, (c1, c2)))
    sub = {}
    for atom in unknown_atoms(red.expression) | unknown_atoms(red.multiplier):
        _, _, derivs = atom_parts(atom)
        sub[atom] = sp.diff(f, *derivs) if derivs else f
    reduced = red.expression.xreplace(sub)
    wf = sp.log(a.rhs.xreplace({a.omega: f}).subs({z: d for z, d in a.variables}))
    delta = surface_equation("ricci").delta
    direct = delta.xreplace({s: sp.diff(wf, *[SURFACE.variables[j] for j in J]) for s, J in SURFACE.jet_coords_in(delta).items() if J})
    direct = direct.xreplace({w: wf})
    point = {x: sp.Rational(1, 3), y: sp.Rational(-2, 5), t: sp.Rational(7, 4)}
    zpoint = {z: d.subs(point) for z, d in a.variables}
    lhs = _numeric((red.multiplier.xreplace(sub) * direct).subs(zpoint), point)
    rhs = _numeric(reduced.subs(zpoint).subs(point), point)
    assert math.isclose(lhs, rhs, rel_tol=1e-9, abs_tol=1e-9)
