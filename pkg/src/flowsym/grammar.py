"""Text grammar for expressions: tokenizer, recursive-descent parser, printer.

Grammar (whitespace-insensitive)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" unary)?
    atom   := INT | JET | IDENT | IDENT "[" idents "]" | IDENT "(" args ")"
            | FUNC "(" expr ")" | "(" expr ")"

``w_xt`` is a jet coordinate, ``xi[x,w]`` the derivative atom of an
unknown function, ``omega(z)`` an unknown function applied to arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import re

import sympy as sp

from .symkernel import SymbolicError, atom_parts, unknown

BUILTINS = {
    "exp": sp.exp,
    "ln": sp.log,
    "sin": sp.sin,
    "cos": sp.cos,
    "arctan": sp.atan,
    "sqrt": sp.sqrt,
}

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<num>\d+)"
    r"|(?P<name>[a-zA-Z][a-zA-Z0-9]*(?:_[a-zA-Z]+)?)"
    r"|(?P<op>[-+*/^()\[\],;:=])"
)


class ParseError(ValueError):
    def __init__(self, message, line=1, col=1, expected=()):
        self.line = line
        self.col = col
        self.expected = sorted(set(expected))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"line {line}, column {col}: {message}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str  # "num" | "name" | "jet" | "op" | "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "name":
            out.append(Token("jet" if "_" in m.group() else "name", m.group(), line, col))
        elif kind in ("num", "op"):
            out.append(Token(kind, m.group(), line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


@dataclass
class Context:
    """Name resolution for parsing.

    ``independent``/``dependent`` canonicalize jet-coordinate spellings;
    ``functions`` maps unknown-function names to their signatures, with
    ``default_signature`` used for undeclared ones.
    """

    independent: tuple = ()
    dependent: str | None = None
    functions: dict = field(default_factory=dict)
    default_signature: tuple = ()
    symbols: frozenset | None = None  # when set, plain identifiers must be listed here
    max_order: int | None = None

    @classmethod
    def for_jet(cls, spec, functions=None):
        return cls(
            independent=tuple(spec.independent),
            dependent=spec.dependent,
            functions=dict(functions or {}),
            default_signature=spec.base_symbols(),
        )

    def jet_symbol(self, text: str, tok: Token) -> sp.Symbol:
        dep, idx = text.split("_", 1)
        if self.dependent is None or not self.independent:
            return sp.Symbol(text)
        if dep != self.dependent:
            raise ParseError(f"undeclared dependent variable {dep!r}", tok.line, tok.col)
        order = {v: i for i, v in enumerate(self.independent)}
        if any(c not in order for c in idx):
            raise ParseError(f"jet index of {text!r} uses an undeclared variable", tok.line, tok.col)
        if self.max_order is not None and len(idx) > self.max_order:
            raise ParseError(
                f"{text!r} exceeds the declared order {self.max_order}", tok.line, tok.col
            )
        return sp.Symbol(dep + "_" + "".join(sorted(idx, key=order.__getitem__)))


class Parser:
    """Recursive-descent expression parser over a shared token stream."""

    def __init__(self, tokens: list[Token], ctx: Context | None = None, pos: int = 0):
        self.tokens = tokens
        self.ctx = ctx or Context()
        self.pos = pos

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message, expected=()):
        t = self.tok
        raise ParseError(message, t.line, t.col, expected)

    def accept(self, text) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.error(f"found {found!r}", [repr(text)])

    def expect_name(self) -> str:
        t = self.tok
        if t.kind != "name":
            self.error(f"found {t.text or 'end of input'!r}", ["identifier"])
        self.pos += 1
        return t.text

    _ATOM_START = ["integer", "identifier", "'('", "'-'"]

    def expr(self):
        e = self.term()
        while True:
            if self.accept("+"):
                e = e + self.term()
            elif self.accept("-"):
                e = e - self.term()
            else:
                return e

    def term(self):
        e = self.unary()
        while True:
            if self.accept("*"):
                e = e * self.unary()
            elif self.accept("/"):
                d = self.unary()
                if d == 0:
                    self.error("division by zero")
                e = e / d
            else:
                return e

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            ex = self.unary()
            if base == 0 and ex.is_negative:
                self.error("zero raised to a negative power")
            return base**ex
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.pos += 1
            return sp.Integer(int(t.text))
        if t.kind == "jet":
            self.pos += 1
            return self.ctx.jet_symbol(t.text, t)
        if t.kind == "name":
            self.pos += 1
            if t.text in BUILTINS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return BUILTINS[t.text](arg)
            if self.accept("["):
                return self._derivative_atom(t)
            if self.accept("("):
                args = [self.expr()]
                while self.accept(","):
                    args.append(self.expr())
                self.expect(")")
                if all(isinstance(a, sp.Symbol) for a in args) and len(set(args)) == len(args):
                    self.ctx.functions.setdefault(t.text, tuple(args))
                return sp.Function(t.text)(*args)
            if self.ctx.symbols is not None and t.text not in self.ctx.symbols:
                raise ParseError(f"undeclared symbol {t.text!r}", t.line, t.col)
            return sp.Symbol(t.text)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        self.error(f"found {t.text or 'end of input'!r}", self._ATOM_START)

    def _derivative_atom(self, t: Token):
        names = []
        if not self.accept("]"):
            names.append(self.expect_name())
            while self.accept(","):
                names.append(self.expect_name())
            self.expect("]")
        sig = self.ctx.functions.get(t.text, self.ctx.default_signature)
        if not sig:
            raise ParseError(f"no signature known for {t.text!r}", t.line, t.col)
        outside = [n for n in names if sp.Symbol(n) not in sig]
        if outside:
            raise ParseError(f"{t.text} does not depend on {outside[0]}", t.line, t.col)
        return unknown(t.text, sig, [sp.Symbol(n) for n in names])


def parse(text: str, ctx: Context | None = None) -> sp.Expr:
    """Parse a complete expression."""
    p = Parser(tokenize(text), ctx)
    e = p.expr()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}", ["operator", "end of input"])
    return e


# ---------------------------------------------------------------------------
# printing

_ADD, _MUL, _POW, _ATOM = 1, 2, 3, 4


def _prec(e) -> int:
    if isinstance(e, sp.Add):
        return _ADD
    if isinstance(e, sp.Mul):
        return _MUL
    if isinstance(e, sp.Rational) and not isinstance(e, sp.Integer):
        return _MUL
    if isinstance(e, sp.Number) and e < 0:
        return _MUL
    if isinstance(e, sp.Pow):
        if e.exp == sp.Rational(1, 2):
            return _ATOM
        return _MUL if _is_negative_power(e) else _POW
    return _ATOM


def _is_negative_power(e) -> bool:
    return isinstance(e, sp.Pow) and e.exp.is_Number and e.exp < 0


def _wrap(e, level) -> str:
    s = to_text(e)
    return f"({s})" if _prec(e) < level else s


def _atom_text(e) -> str:
    name, sig, derivs = atom_parts(e)
    if not all(isinstance(a, sp.Symbol) for a in sig) or len(set(sig)) != len(sig):
        if derivs:
            raise SymbolicError(f"cannot print derivative of {name} at non-symbol arguments")
        return f"{name}({', '.join(to_text(a) for a in sig)})"
    order = {s: i for i, s in enumerate(sig)}
    derivs = sorted(derivs, key=order.__getitem__)
    return f"{name}[{','.join(str(d) for d in derivs)}]"


def _mul_text(coeff, factors) -> str:
    num, den = [], []
    for f in factors:
        if _is_negative_power(f):
            den.append(f.base ** (-f.exp))
        else:
            num.append(f)
    p, q = int(coeff.p), int(coeff.q)
    num_s = [_wrap(f, _MUL) for f in num]
    if p != 1 or not num_s:
        num_s.insert(0, str(p))
    den_s = [_wrap(f, _POW) for f in den]
    if q != 1:
        den_s.insert(0, str(q))
    s = "*".join(num_s)
    if den_s:
        d = "*".join(den_s)
        s += "/" + (d if len(den_s) == 1 else f"({d})")
    return s


def to_text(e) -> str:
    """Print ``e`` in the grammar with minimal parentheses."""
    e = sp.sympify(e)
    if isinstance(e, sp.Integer):
        return str(int(e))
    if isinstance(e, sp.Rational):
        return f"{e.p}/{e.q}"
    if isinstance(e, sp.Symbol):
        return e.name
    if isinstance(e, sp.Add):
        terms = e.as_ordered_terms()
        out = to_text(terms[0])
        for t in terms[1:]:
            c, _ = t.as_coeff_Mul()
            if c.is_Number and c < 0:
                out += " - " + to_text(-t)
            else:
                out += " + " + to_text(t)
        return out
    if isinstance(e, sp.Mul):
        coeff, factors = e.as_coeff_mul()
        if coeff < 0:
            return "-" + _mul_text(-coeff, factors)
        return _mul_text(coeff, factors)
    if isinstance(e, sp.Pow):
        if e.exp == sp.Rational(1, 2):
            return f"sqrt({to_text(e.base)})"
        if _is_negative_power(e):
            return _mul_text(sp.Integer(1), [e])
        ex = e.exp
        ex_s = str(int(ex)) if ex.is_Integer else f"({to_text(ex)})"
        return f"{_wrap(e.base, _ATOM)}^{ex_s}"
    if isinstance(e, sp.exp):
        return f"exp({to_text(e.args[0])})"
    if isinstance(e, sp.log):
        return f"ln({to_text(e.args[0])})"
    for name, fn in (("sin", sp.sin), ("cos", sp.cos), ("arctan", sp.atan)):
        if isinstance(e, fn):
            return f"{name}({to_text(e.args[0])})"
    if isinstance(e, (sp.Derivative, sp.core.function.AppliedUndef)):
        return _atom_text(e)
    raise SymbolicError(f"expression outside the grammar: {e!r}")
