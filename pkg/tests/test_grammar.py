import pytest
import sympy as sp

from flowsym.geoflow import SURFACE
from flowsym.grammar import Context, ParseError, parse, to_text, tokenize
from flowsym.symkernel import unknown

CTX = Context.for_jet(SURFACE)
x, y, t, w = sp.symbols("x y t w")


def test_jet_spelling_is_canonical():
    assert parse("w_tx", CTX) == sp.Symbol("w_xt")


def test_derivative_atom():
    assert parse("xi[w,x]", CTX) == unknown("xi", (x, y, t, w), (x, w))
    assert parse("phi[]", CTX) == unknown("phi", (x, y, t, w))


def test_precedence_and_unary_minus():
    assert parse("-x^2", CTX) == -(x**2)
    assert parse("2^3^2") == 2**9
    assert parse("a/b*c") == sp.Symbol("a") * sp.Symbol("c") / sp.Symbol("b")


def test_builtins():
    assert parse("ln(exp(2))", CTX) == 2
    assert parse("sqrt(4)") == 2
    assert parse("arctan(1)") == sp.pi / 4


def test_applied_unknown_function():
    z = sp.Symbol("z")
    assert parse("omega(z)") == sp.Function("omega")(z)


def test_comments_and_newlines():
    assert parse("x +  # trailing comment\n y") == sp.Symbol("x") + sp.Symbol("y")


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("x + $", 1, 5),
        ("x +\n  * y", 2, 3),
        ("(x + y", 1, 7),
        ("", 1, 1),
    ],
)
def test_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.col) == (line, col)


def test_error_lists_expected_tokens():
    with pytest.raises(ParseError) as info:
        parse("x *")
    assert info.value.expected
    assert "expected one of" in str(info.value)


def test_undeclared_identifier_rejected():
    ctx = Context.for_jet(SURFACE)
    ctx.symbols = frozenset({"x", "y", "t", "w"})
    with pytest.raises(ParseError, match="undeclared"):
        parse("x + q", ctx)


def test_order_overflow_rejected():
    ctx = Context.for_jet(SURFACE)
    ctx.max_order = 2
    with pytest.raises(ParseError, match="order"):
        parse("w_xxt", ctx)


def test_wrong_dependent_variable():
    with pytest.raises(ParseError, match="dependent"):
        parse("u_x", CTX)


def test_derivative_outside_signature():
    ctx = Context.for_jet(SURFACE, {"f": (x, y)})
    with pytest.raises(ParseError, match="does not depend"):
        parse("f[t]", ctx)


def test_tokenizer_classifies_jets():
    kinds = [tok.kind for tok in tokenize("w_x + w")]
    assert kinds == ["jet", "op", "name", "eof"]


@pytest.mark.parametrize(
    "text",
    [
        "w_xx + w_yy - exp(w)*w_t",
        "-2*tau[y,w]",
        "1/2*c4*(y^2 - x^2) + 2*c3*x*y",
        "exp(-t)*sin(s)",
        "sqrt(1 + eps^2)*t",
        "(eps^2*omega(eps, eta)^2 - omega(eps, eta))/t^2",
        "ln(5/3)",
    ],
)
def test_print_parse_round_trip(text):
    e = parse(text, CTX)
    assert parse(to_text(e), CTX) == e


def test_printer_minimal_parentheses():
    assert to_text(parse("(x + y)*t", CTX)) == "t*(x + y)"
    assert to_text(parse("x/(y*t)", CTX)) == "x/(t*y)"
    assert to_text(parse("x^(-2)", CTX)) == "1/x^2"
