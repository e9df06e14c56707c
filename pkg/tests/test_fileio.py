import pytest

from flowsym.fileio import (
    detect_kind,
    fixture_names,
    load_ansatz,
    load_fields,
    load_pde,
    parse_ansatz,
    parse_fields,
    parse_input_file,
    parse_pde,
    print_ansatz,
    print_fields,
    print_pde,
    resolve,
)
from flowsym.grammar import ParseError
from flowsym.jetspace import PDE
from flowsym.reduce import Ansatz


@pytest.mark.parametrize("name", fixture_names("pde"))
def test_pde_fixture_round_trip(name):
    pde = load_pde(name)
    again = parse_pde(print_pde(pde), name=name)
    assert again.spec == pde.spec
    assert again.delta == pde.delta


@pytest.mark.parametrize("name", fixture_names("vf"))
def test_field_fixture_round_trip(name):
    fields = load_fields(name)
    again = parse_fields(print_fields(fields))
    assert [f.name for f in again] == [f.name for f in fields]
    assert [f.components() for f in again] == [f.components() for f in fields]


@pytest.mark.parametrize("name", fixture_names("ansatz"))
def test_ansatz_fixture_round_trip(name):
    a = load_ansatz(name)
    assert parse_ansatz(print_ansatz(a)) == a


def test_dispatch_by_content():
    assert isinstance(parse_input_file("vars x t; dep u; delta u_t - u_xx; solve u_t = u_xx;"), PDE)
    assert isinstance(parse_input_file("vf a: tau=1;"), list)
    assert isinstance(parse_input_file("ansatz: let z = x; form w = omega(z);"), Ansatz)
    assert detect_kind("vars x y t; dep w; solve w_t = w_xx;") == "pde"


@pytest.mark.parametrize(
    "text, message, col",
    [
        ("vars x y t; dep w; delta w_xx + q;", "undeclared symbol 'q'", 33),
        ("vars x y t; dep w; order 1; delta w_xx;", "exceeds the declared order", 35),
        ("vf a: xi=, eta=0;", "empty expression", 10),
        ("vf a: xi=1, xi=2;", "given twice", 13),
        ("vf a: zeta=1;", "unknown component 'zeta'", 7),
        ("hello;", "cannot tell the file kind", 1),
    ],
)
def test_parse_errors_carry_position(text, message, col):
    with pytest.raises(ParseError, match=message) as info:
        parse_input_file(text)
    assert (info.value.line, info.value.col) == (1, col)


def test_pde_needs_declarations():
    with pytest.raises(ParseError, match="vars"):
        parse_pde("delta w_xx;")


def test_resolve_by_name_and_path(tmp_path):
    text, name = resolve("ricci-surface", "pde")
    assert name == "ricci-surface" and "delta" in text
    assert resolve("ricci_surface.pde", "pde")[0] == text
    p = tmp_path / "my_eq.pde"
    p.write_text("vars x t; dep u; delta u_t - u_xx; solve u_t = u_xx;")
    assert resolve(str(p), "pde")[1] == "my-eq"
    assert load_pde(str(p)).name == "my-eq"


def test_missing_fixture_lists_alternatives():
    with pytest.raises(FileNotFoundError, match="available: .*ricci-surface"):
        load_pde("no-such-equation")
