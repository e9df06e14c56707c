"""Input files: PDE declarations, vector-field lists and similarity ansatze.

Every file is a sequence of ``;``-terminated clauses::

    vars x y t; dep w; order 2;
    delta w_xx + w_yy - exp(w)*w_t;
    solve w_t = exp(-w)*(w_xx + w_yy);

    vf v4: xi=0, eta=0, tau=t, phi=1;

    ansatz: let z = exp(y)/t; form exp(w) = t*omega(z);

``vars``/``dep`` default to ``x y t``/``w`` in field and ansatz files.
``params a b;`` declares extra constant symbols; in field files
``c1, c2, ...`` are always available as family constants.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
import re

import sympy as sp

from .grammar import Context, ParseError, Parser, to_text, tokenize
from .jetspace import PDE, JetSpec
from .prolong import VectorField, coefficient_names
from .reduce import Ansatz
from .symkernel import SymbolicError, atom_parts

DEFAULT_SPEC = JetSpec(("x", "y", "t"), "w", 2)
_FAMILY_CONSTANT = re.compile(r"c\d+$")
EXTENSIONS = {"pde": ".pde", "vf": ".vf", "ansatz": ".ansatz"}


class _Clauses(Parser):
    """Clause-level reader sharing the expression parser's token stream."""

    def __init__(self, text: str):
        super().__init__(tokenize(text))
        self.vars = None
        self.dep = None
        self.order = None
        self.params = set()

    def at_end(self) -> bool:
        return self.tok.kind == "eof"

    def keyword(self, *words) -> str:
        t = self.tok
        if t.kind == "name" and t.text in words:
            self.pos += 1
            return t.text
        self.error(f"found {t.text or 'end of input'!r}", [repr(w) for w in words])

    def peek_keyword(self) -> str | None:
        return self.tok.text if self.tok.kind == "name" else None

    def header(self, allowed=("vars", "dep", "order", "params")):
        """Consume leading declaration clauses."""
        while self.peek_keyword() in allowed:
            t = self.tok
            word = self.keyword(*allowed)
            if word == "vars":
                names = self._names()
                if self.vars is not None:
                    raise ParseError("variables declared twice", t.line, t.col)
                self.vars = tuple(names)
            elif word == "dep":
                names = self._names()
                if len(names) != 1:
                    raise ParseError("exactly one dependent variable expected", t.line, t.col)
                self.dep = names[0]
            elif word == "order":
                if self.tok.kind != "num":
                    self.error("order needs an integer", ["integer"])
                self.order = int(self.tok.text)
                self.pos += 1
                if self.order < 1:
                    raise ParseError("order must be at least 1", t.line, t.col)
            else:
                self.params |= set(self._names())
            self.expect(";")

    def _names(self) -> list:
        out = [self.expect_name()]
        while self.tok.kind == "name":
            out.append(self.expect_name())
        return out

    def spec(self, default: JetSpec | None = None) -> JetSpec:
        if self.vars is None or self.dep is None:
            if default is None:
                self.error("declare 'vars' and 'dep' first", ["'vars'", "'dep'"])
            vars_ = self.vars or default.independent
            dep = self.dep or default.dependent
            return JetSpec(vars_, dep, self.order or default.order)
        try:
            return JetSpec(self.vars, self.dep, self.order or 2)
        except ValueError as exc:
            raise ParseError(str(exc), 1, 1) from None

    def context(self, spec: JetSpec, extra=(), functions=None) -> Context:
        ctx = Context.for_jet(spec, functions)
        ctx.symbols = frozenset(set(spec.independent) | {spec.dependent} | self.params | set(extra))
        ctx.max_order = spec.order
        return ctx

    def expression(self, ctx: Context) -> sp.Expr:
        if self.tok.kind == "op" and self.tok.text in (";", ",", "="):
            self.error("empty expression", self._ATOM_START)
        self.ctx = ctx
        return self.expr()


def _text_of(source) -> tuple[str, str]:
    """(text, stem) from a path or literal text."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and ";" not in source):
        path = Path(source)
        return path.read_text(), path.stem.replace("_", "-")
    return source, ""


# ---------------------------------------------------------------------------
# PDE files


def parse_pde(source, name: str | None = None) -> PDE:
    text, stem = _text_of(source)
    r = _Clauses(text)
    r.header()
    spec = r.spec()
    ctx = r.context(spec)
    r.keyword("delta")
    delta = r.expression(ctx)
    r.expect(";")
    r.keyword("solve")
    t = r.tok
    if t.kind != "jet":
        r.error(f"found {t.text or 'end of input'!r}", ["jet coordinate"])
    r.pos += 1
    leading = ctx.jet_symbol(t.text, t)
    r.expect("=")
    rhs = r.expression(ctx)
    r.expect(";")
    if not r.at_end():
        r.error(f"unexpected {r.tok.text!r}", ["end of input"])
    try:
        return PDE(spec, delta, (leading, rhs), name if name is not None else stem)
    except SymbolicError as exc:
        raise ParseError(str(exc), t.line, t.col) from None


def print_pde(pde: PDE) -> str:
    spec = pde.spec
    c, r = pde.solve_for
    lines = [
        f"vars {' '.join(spec.independent)};",
        f"dep {spec.dependent};",
        f"order {spec.order};",
    ]
    params = _extra_symbols(spec, pde.delta, r)
    if params:
        lines.append(f"params {' '.join(params)};")
    lines += [f"delta {to_text(pde.delta)};", f"solve {c} = {to_text(r)};"]
    return "\n".join(lines) + "\n"


def _extra_symbols(spec: JetSpec, *exprs, skip=()) -> list:
    names = set()
    for e in exprs:
        for s in sp.sympify(e).free_symbols:
            if spec.multi_index(s) is None and s.name not in spec.independent:
                names.add(s.name)
    return sorted(n for n in names if n not in skip)


# ---------------------------------------------------------------------------
# vector-field files


def parse_fields(source, spec: JetSpec | None = None) -> list:
    """All ``vf`` clauses of a file, in order."""
    text, _ = _text_of(source)
    r = _Clauses(text)
    r.header()
    spec = r.spec(spec or DEFAULT_SPEC)
    consts = {t.text for t in r.tokens if t.kind == "name" and _FAMILY_CONSTANT.match(t.text)}
    fields, names = [], set()
    allowed = coefficient_names(spec) + ("phi",)
    while not r.at_end():
        r.keyword("vf")
        start = r.tok
        label = r.expect_name()
        if label in names:
            raise ParseError(f"field {label!r} defined twice", start.line, start.col)
        names.add(label)
        r.expect(":")
        comps = {}
        while True:
            t = r.tok
            key = r.expect_name()
            if key not in allowed:
                raise ParseError(
                    f"unknown component {key!r}", t.line, t.col, [repr(a) for a in allowed]
                )
            if key in comps:
                raise ParseError(f"component {key!r} given twice", t.line, t.col)
            r.expect("=")
            comps[key] = r.expression(r.context(spec, consts))
            if not r.accept(","):
                break
        r.expect(";")
        try:
            fields.append(VectorField.from_components(spec, label, **comps))
        except (SymbolicError, ValueError) as exc:
            raise ParseError(str(exc), start.line, start.col) from None
    if not fields:
        r.error("no vector field found", ["'vf'"])
    return fields


def print_fields(fields, header: bool = True) -> str:
    lines = []
    if fields and header:
        spec = fields[0].spec
        lines += [f"vars {' '.join(spec.independent)};", f"dep {spec.dependent};"]
        params = sorted(
            {
                n
                for v in fields
                for n in _extra_symbols(spec, *v.coefficients)
                if not _FAMILY_CONSTANT.match(n)
            }
        )
        if params:
            lines.append(f"params {' '.join(params)};")
    for v in fields:
        comps = ", ".join(f"{k}={to_text(c)}" for k, c in v.components().items())
        lines.append(f"vf {v.name or 'v'}: {comps};")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# ansatz files


def parse_ansatz(source, spec: JetSpec | None = None) -> Ansatz:
    text, _ = _text_of(source)
    r = _Clauses(text)
    r.header()
    spec = r.spec(spec or DEFAULT_SPEC)
    r.keyword("ansatz")
    r.expect(":")
    variables = []
    while r.peek_keyword() == "let":
        r.keyword("let")
        t = r.tok
        z = r.expect_name()
        if z in spec.independent or z == spec.dependent or z in {str(v) for v, _ in variables}:
            raise ParseError(f"similarity variable {z!r} clashes with an existing name", t.line, t.col)
        r.expect("=")
        variables.append((sp.Symbol(z), r.expression(r.context(spec))))
        r.expect(";")
    r.keyword("form")
    t = r.tok
    ctx = r.context(spec, extra=[str(z) for z, _ in variables])
    lhs = r.expression(ctx)
    r.expect("=")
    rhs = r.expression(ctx)
    r.expect(";")
    if not r.at_end():
        r.error(f"unexpected {r.tok.text!r}", ["end of input"])
    zs = {z for z, _ in variables}
    funcs = {a for a in rhs.atoms(sp.core.function.AppliedUndef)}
    if len({f.func for f in funcs}) != 1:
        raise ParseError("the solution form needs exactly one unknown function", t.line, t.col)
    f = next(iter(funcs))
    name, sig, _ = atom_parts(f)
    if not set(sig) <= zs:
        raise ParseError(f"{name} must depend on similarity variables only", t.line, t.col)
    if lhs.has(*zs):
        raise ParseError("similarity variables may only enter through the unknown function", t.line, t.col)
    try:
        return Ansatz(spec, tuple(variables), lhs, rhs, name, tuple(sig))
    except (SymbolicError, ValueError) as exc:
        raise ParseError(str(exc), t.line, t.col) from None


def print_ansatz(a: Ansatz, header: bool = True) -> str:
    lines = []
    if header:
        lines += [f"vars {' '.join(a.spec.independent)};", f"dep {a.spec.dependent};"]
    lines.append(a.text())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# dispatch and shipped fixtures


def detect_kind(text: str) -> str:
    for t in tokenize(text):
        if t.kind == "name" and t.text in ("delta", "solve"):
            return "pde"
        if t.kind == "name" and t.text == "vf":
            return "vf"
        if t.kind == "name" and t.text == "ansatz":
            return "ansatz"
    raise ParseError("cannot tell the file kind: no 'delta', 'vf' or 'ansatz' clause")


def parse_input_file(source, spec: JetSpec | None = None):
    """PDE, list of VectorField or Ansatz, according to the clauses present."""
    text, stem = _text_of(source)
    kind = detect_kind(text)
    if kind == "pde":
        return parse_pde(text, name=stem)
    if kind == "vf":
        return parse_fields(text, spec)
    return parse_ansatz(text, spec)


def fixture_dir():
    return resources.files("flowsym") / "fixtures"


def fixture_names(kind: str) -> list:
    ext = EXTENSIONS[kind]
    return sorted(
        p.name[: -len(ext)].replace("_", "-") for p in fixture_dir().iterdir() if p.name.endswith(ext)
    )


def fixture_text(name: str, kind: str) -> str:
    p = fixture_dir() / (name.replace("-", "_") + EXTENSIONS[kind])
    if not p.is_file():
        raise FileNotFoundError(
            f"no {kind} fixture named {name!r}; available: {', '.join(fixture_names(kind))}"
        )
    return p.read_text()


def resolve(ref: str, kind: str) -> tuple[str, str]:
    """(text, name) for a file path or a shipped fixture name."""
    path = Path(ref)
    if path.is_file():
        return path.read_text(), path.stem.replace("_", "-")
    name = path.name
    if name.endswith(EXTENSIONS[kind]):
        name = name[: -len(EXTENSIONS[kind])]
    name = name.replace("_", "-")
    return fixture_text(name, kind), name


def load_pde(ref: str) -> PDE:
    text, name = resolve(ref, "pde")
    return parse_pde(text, name=name)


def load_fields(ref: str, spec: JetSpec | None = None) -> list:
    text, _ = resolve(ref, "vf")
    return parse_fields(text, spec)


def load_ansatz(ref: str, spec: JetSpec | None = None) -> Ansatz:
    text, _ = resolve(ref, "ansatz")
    return parse_ansatz(text, spec)
