import pytest
import sympy as sp

from flowsym.symkernel import (
    Monomial,
    SymbolicError,
    atom_parts,
    canonical_atoms,
    collect,
    is_zero,
    rebuild,
    simplify,
    substitute,
    unknown,
    unknown_atoms,
)

x, y, t, w = sp.symbols("x y t w")
w_x, w_xx, w_t = sp.symbols("w_x w_xx w_t")
SIG = (x, y, t, w)


def test_unknown_derivative_outside_signature_vanishes():
    assert unknown("xi", (x, w), (t,)) == 0


def test_unknown_orders_mixed_partials():
    assert unknown("tau", SIG, (w, x)) == unknown("tau", SIG, (x, w))


def test_atom_parts_round_trip():
    a = unknown("phi", SIG, (x, x, w))
    assert atom_parts(a) == ("phi", SIG, [x, x, w])
    assert unknown(*atom_parts(a)) == a
    with pytest.raises(SymbolicError):
        atom_parts(x + 1)


def test_unknown_atoms_finds_derivatives_and_plain_functions():
    e = unknown("xi", SIG) * w_x + unknown("tau", SIG, (t,))
    names = {atom_parts(a)[0] for a in unknown_atoms(e)}
    assert names == {"xi", "tau"}


def test_canonical_atoms_merges_spellings():
    f = sp.Function("tau")(*SIG)
    e = sp.Derivative(f, w, x) - sp.Derivative(f, x, w)
    assert canonical_atoms(e) == 0
    assert simplify(e) == 0


def test_simplify_merges_exponentials():
    assert simplify(sp.exp(w) * sp.exp(-w) * w_t) == w_t
    assert simplify((x + 1) ** 2) == x**2 + 2 * x + 1


def test_simplify_rejects_division_by_zero():
    with pytest.raises(SymbolicError):
        simplify(sp.Integer(1) / sp.Integer(0))


def test_is_zero_escalates():
    assert is_zero(sp.sin(x) ** 2 + sp.cos(x) ** 2 - 1)
    assert is_zero(sp.log(x * y) - sp.log(x) - sp.log(y))
    assert not is_zero(x - y)


def test_substitute_is_simultaneous():
    assert substitute(x + 2 * y, {x: y, y: x}) == y + 2 * x


def test_collect_splits_exp_markers():
    e = sp.exp(-w) * w_x * w_xx * 3 + sp.exp(w) * x + 5
    rows = collect(e, [w_x, w_xx], exp_var=w)
    texts = {m.text(): c for m, c in rows.items()}
    assert texts == {"1": 5, "exp(w)": x, "exp(-w)*w_x*w_xx": 3}


def test_collect_names_offending_coordinate():
    with pytest.raises(SymbolicError, match="w_x"):
        collect(sp.sin(w_x), [w_x])
    with pytest.raises(SymbolicError, match="w_x"):
        collect(1 / w_x, [w_x])


def test_collect_rebuild_round_trip():
    e = 2 * w_x**2 * sp.exp(w) - x * w_xx + sp.exp(-2 * w) * w_x
    assert simplify(rebuild(collect(e, [w_x, w_xx], w), w) - e) == 0


def test_monomial_text_and_degree():
    m = Monomial(-1, ((0, "w_x", 2), (1, "w_xx", 1)))
    assert m.text() == "exp(-w)*w_x^2*w_xx"
    assert m.degree == 3
    assert str(Monomial(0, ())) == "1"
