import random

import pytest
import sympy as sp

from flowsym.geoflow import SURFACE, surface_generators
from flowsym.liealg import (
    GAP_LABELS,
    LABELS,
    Step,
    apply_step,
    combination_text,
    decompose,
    normalize,
    random_group_element,
    replay,
    same_class,
    structure_constants,
    surface_algebra,
)
from flowsym.prolong import VectorField
from flowsym.symkernel import SymbolicError

x, y = sp.symbols("x y")


@pytest.fixture(scope="module")
def alg():
    return surface_algebra("ricci")


def test_hyperbolic_algebra_has_same_structure(alg):
    assert surface_algebra("hyperbolic").C == alg.C


def test_decompose_in_basis():
    gens = surface_generators("ricci")
    v = 2 * gens[0] - gens[4]
    assert decompose(v, gens) == [2, 0, 0, 0, -1, 0]


def test_non_closed_set_is_rejected():
    fields = [
        VectorField.from_components(SURFACE, "a", xi=1),
        VectorField.from_components(SURFACE, "b", xi=x**2),
    ]
    with pytest.raises(SymbolicError):
        structure_constants(fields)


def test_combination_text():
    assert combination_text([1, 0, -1, sp.Rational(1, 2), 0, 0], ["a", "b", "c", "d", "e", "f"]) == "a - c + 1/2*d"
    assert combination_text([0] * 3, ["a", "b", "c"]) == "0"


def test_adjoint_is_automorphism(alg):
    eps = sp.Rational(2, 3)
    for i in range(6):
        A = alg.adjoint_matrix(i, eps)
        for p in range(6):
            for q in range(6):
                ep, eq = [0] * 6, [0] * 6
                ep[p] = eq[q] = 1
                lhs = list(A * sp.Matrix(alg.bracket_vec(ep, eq)))
                rhs = alg.bracket_vec(list(A[:, p]), list(A[:, q]))
                assert all(sp.simplify(a - b) == 0 for a, b in zip(lhs, rhs))


def test_gap_class_example(alg):
    c = normalize([3, 1, 2, 0, 0, 5], alg)
    assert c.label == "a*" and c.label in GAP_LABELS
    assert c.representative_text() == "v1 + v6"
    assert [s.text() for s in c.witness] == [
        "scale 1/5",
        "Ad(exp(1/5*v2))",
        "Ad(exp(2/5*v3))",
        "Ad(exp(ln(5/3)*v4))",
    ]
    assert replay(alg, c.witness, [3, 1, 2, 0, 0, 5]) == c.representative


def test_rotation_twins(alg):
    assert normalize([0, 0, 1, 1, 0, 0], alg).label == "c3"
    assert same_class("c3", "c2") and same_class("f", "e") and not same_class("c1", "c2")


def test_zero_and_short_vectors_rejected(alg):
    with pytest.raises(ValueError):
        normalize([0] * 6, alg)
    with pytest.raises(ValueError):
        normalize([1, 2], alg)


def test_flip_step_signs():
    a = [1, 2, 3, 4, 5, 6]
    assert apply_step(None, Step("flip", axis="x"), a) == [1, -2, 3, 4, -5, 6]


def test_class_invariant_under_random_group_action(alg):
    rng = random.Random(11)
    for _ in range(15):
        a = [sp.Rational(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(6)]
        if all(z == 0 for z in a):
            continue
        b = replay(alg, random_group_element(rng), a)
        la, lb = normalize(a, alg).label, normalize(b, alg).label
        assert same_class(la, lb), (a, b, la, lb)


def test_labels_cover_published_list():
    assert len(LABELS) == 10
