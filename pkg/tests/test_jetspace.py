import pytest
import sympy as sp

from flowsym.geoflow import SURFACE, WARPED, surface_equation
from flowsym.jetspace import (
    PDE,
    JetSpec,
    evaluate_on,
    jacobian_rank_check,
    total_derivative,
    total_derivative_multi,
)
from flowsym.symkernel import SymbolicError, simplify

x, y, t, w = sp.symbols("x y t w")
w_x, w_y, w_t, w_xx, w_xt = sp.symbols("w_x w_y w_t w_xx w_xt")


def test_coordinates_and_count():
    coords = SURFACE.coordinates()
    assert len(coords) == SURFACE.coordinate_count() == 3 + 1 + 3 + 6
    assert coords[:4] == [x, y, t, w]
    assert SURFACE.with_order(3).coordinate_count() == 23


def test_multi_index_parsing():
    assert SURFACE.multi_index(sp.Symbol("w_tx")) == (0, 2)
    assert SURFACE.multi_index(w) == ()
    assert SURFACE.multi_index(x) is None
    assert SURFACE.multi_index(sp.Symbol("u_x")) is None
    assert SURFACE.coord(("t", "x")) == w_xt


@pytest.mark.parametrize(
    "kwargs",
    [dict(independent=("x",), dependent="w", order=0), dict(independent=("xy",), dependent="w"),
     dict(independent=("x", "x"), dependent="w"), dict(independent=("x",), dependent="x")],
)
def test_invalid_specs(kwargs):
    with pytest.raises(ValueError):
        JetSpec(**kwargs)


def test_total_derivative():
    assert simplify(total_derivative(w * w_x, "x", SURFACE) - (w_x**2 + w * w_xx)) == 0
    assert total_derivative(x * w_t, "t", SURFACE) == x * sp.Symbol("w_tt")
    # higher coordinates are created on demand
    assert total_derivative(w_xx, "x", SURFACE) == sp.Symbol("w_xxx")


def test_total_derivatives_commute_on_example():
    e = sp.exp(w) * w_x * t
    a = total_derivative_multi(e, ("x", "t"), SURFACE)
    b = total_derivative_multi(e, ("t", "x"), SURFACE)
    assert simplify(a - b) == 0


def test_pde_validates_solve_for():
    delta = surface_equation("ricci").delta
    with pytest.raises(SymbolicError):
        PDE(SURFACE, delta, (w_t, w_xx))
    with pytest.raises(SymbolicError):
        PDE(SURFACE, delta, (x, w_xx))
    with pytest.raises(SymbolicError):
        PDE(SURFACE, delta, (w_t, w_t + 1))


def test_restrict_eliminates_leading():
    pde = surface_equation("ricci")
    assert not pde.restrict(w_t * w_x).has(w_t)


def test_jacobian_row_full_rank():
    pde = surface_equation("ricci")
    rep = jacobian_rank_check(pde, [{"x": 0, "y": 0, "t": 0, "w": 0, "w_xx": 1, "w_yy": 1}])
    assert rep.full_rank
    row = dict(zip(map(str, rep.coordinates), rep.values[0]))
    assert row["w_t"] == -1 and row["w_xx"] == 1 and row["w_yy"] == 1
    assert row["w"] == -2


def test_jacobian_rejects_points_off_the_manifold():
    pde = surface_equation("ricci")
    with pytest.raises(ValueError):
        jacobian_rank_check(pde, [{"w": 0, "w_t": 5, "w_xx": 1, "w_yy": 1}])


def test_evaluate_on():
    s, psi_ss = sp.symbols("s psi_ss")
    assert evaluate_on(psi_ss, WARPED, sp.sin(s)) == -sp.sin(s)
