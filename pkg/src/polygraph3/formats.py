"""The ``.poly`` text format.

A file is a sequence of statements::

    gen mu : 2 -> 1                                  # [toy]
    rule assoc : (mu * id:1) ; mu => (id:1 * mu) ; mu
    currents min 1
    interp mu { down: (2 * x1 + x2); up: (y1, y1); heat: <x1> }

In circuit terms ``*`` (juxtaposition) binds tighter than ``;`` (plugging)
and ``id:n`` is n bare wires.  In interpretations ``x1..`` are the currents
coming from above, ``y1..`` those coming from below, ``<e>`` is a heat atom
and ``{}`` the empty heat.  ``#`` starts a comment; a ``[tag]`` inside a
comment on a statement's lines records where that statement comes from.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .circuit import (Circuit, CircuitError, GeneratorDecl, Signature, from_generator,
                      hcomp, identity, vcomp)
from .interpretation import (Add, Const, CurrentExpr, GeneratorInterpretation, HeatExpr,
                             InterpretationAssignment, InterpretationError, Max, Scale, Var)
from .rewrite import Polygraph, RewriteError, Rule

RESERVED = {"gen", "rule", "interp", "currents", "id"}


class PolyError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        super().__init__(f"line {line}, col {col}: {message}" if line else message)


@dataclass(frozen=True)
class PolyFile:
    signature: Signature = field(default_factory=Signature)
    rules: tuple[Rule, ...] = ()
    interps: tuple[GeneratorInterpretation, ...] = ()
    currents_min: Optional[int] = None
    # statement label ("gen mu", "rule assoc", "interp mu", "currents") -> tag
    provenance: tuple[tuple[str, str], ...] = ()
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def polygraph(self) -> Polygraph:
        return Polygraph(self.signature, self.rules)

    def assignment(self) -> InterpretationAssignment:
        return InterpretationAssignment(self.interps, self.currents_min or 0)

    def tag(self, label: str) -> Optional[str]:
        return dict(self.provenance).get(label)

    def labels(self) -> list[str]:
        out = [f"gen {g.name}" for g in self.signature]
        out += [f"rule {r.name}" for r in self.rules]
        if self.currents_min is not None:
            out.append("currents")
        out += [f"interp {i.gen.name}" for i in self.interps]
        return out


@dataclass(frozen=True)
class ExampleBundle:
    name: str
    file: PolyFile

    @property
    def provenance(self) -> dict[str, str]:
        return dict(self.file.provenance)


# -- lexer ----------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>->|=>|[:;*(),+{}<>])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> tuple[list[Token], dict[int, str]]:
    """Tokens plus the provenance tag found in the comment of each line."""
    tokens, tags = [], {}
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PolyError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind == "comment":
            tag = re.search(r"\[([^\]]+)\]", m.group())
            if tag:
                tags[line] = tag.group(1).strip()
        elif kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens, tags


# -- parser ---------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks, self.line_tags = tokenize(text)
        self.i = 0
        self.gens: list[GeneratorDecl] = []
        self.sig = Signature()
        self.rules: list[Rule] = []
        self.interps: dict[str, GeneratorInterpretation] = {}
        self.currents: Optional[int] = None
        self.prov: list[tuple[str, str]] = []
        self.warnings: list[str] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise PolyError(msg, tok.line, tok.col)

    def next(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "ident")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of file'!r}")
        return self.next()

    def expect_int(self) -> int:
        if self.tok.kind != "int":
            self.error(f"expected a number, found {self.tok.text or 'end of file'!r}")
        return int(self.next().text)

    def expect_name(self) -> Token:
        if self.tok.kind != "ident":
            self.error(f"expected a name, found {self.tok.text or 'end of file'!r}")
        if self.tok.text in RESERVED:
            self.error(f"{self.tok.text!r} is a reserved word")
        return self.next()

    # statements
    def parse(self) -> PolyFile:
        while self.tok.kind != "eof":
            first = self.tok
            if self.at("gen"):
                label = self.gen()
            elif self.at("rule"):
                label = self.rule()
            elif self.at("interp"):
                label = self.interp()
            elif self.at("currents"):
                label = self.currents_stmt()
            else:
                self.error(f"expected a statement, found {self.tok.text!r}")
            last = self.toks[self.i - 1]
            for line in range(first.line, last.line + 1):
                if line in self.line_tags:
                    self.prov.append((label, self.line_tags[line]))
                    break
        return PolyFile(self.sig, tuple(self.rules), tuple(self.interps.values()),
                        self.currents, tuple(self.prov), tuple(self.warnings))

    def gen(self) -> str:
        self.expect("gen")
        name = self.expect_name()
        self.expect(":")
        m = self.expect_int()
        self.expect("->")
        n = self.expect_int()
        if name.text in self.sig:
            self.error(f"duplicate generator {name.text!r}", name)
        g = GeneratorDecl(name.text, m, n)
        if m == 0 and n == 0:
            msg = f"line {name.line}: generator {name.text!r} has no wires at all"
            self.warnings.append(msg)
            warnings.warn(msg, stacklevel=3)
        self.sig = self.sig.add(g)
        return f"gen {name.text}"

    def rule(self) -> str:
        start = self.expect("rule")
        name = self.expect_name()
        self.expect(":")
        lhs = self.term()
        self.expect("=>")
        rhs = self.term()
        if any(r.name == name.text for r in self.rules):
            self.error(f"duplicate rule {name.text!r}", name)
        if lhs.interface != rhs.interface:
            self.error(f"rule sides not parallel ({lhs.inputs}->{lhs.outputs} vs "
                       f"{rhs.inputs}->{rhs.outputs})", start)
        try:
            self.rules.append(Rule(name.text, lhs, rhs))
        except RewriteError as e:
            self.error(str(e), start)
        return f"rule {name.text}"

    def currents_stmt(self) -> str:
        self.expect("currents")
        self.expect("min")
        tok = self.tok
        v = self.expect_int()
        if v not in (0, 1):
            self.error("currents min must be 0 or 1", tok)
        if self.currents is not None:
            self.error("currents min given twice", tok)
        self.currents = v
        return "currents"

    # circuit terms
    def term(self) -> Circuit:
        c = self.hterm()
        while self.at(";"):
            op = self.next()
            d = self.hterm()
            try:
                c = vcomp(c, d)
            except CircuitError as e:
                self.error(f"arity mismatch: {e}", op)
        return c

    def hterm(self) -> Circuit:
        c = self.atom()
        while self.at("*"):
            self.next()
            c = hcomp(c, self.atom())
        return c

    def atom(self) -> Circuit:
        tok = self.tok
        if self.at("("):
            self.next()
            c = self.term()
            self.expect(")")
            return c
        if self.at("id"):
            self.next()
            self.expect(":")
            return identity(self.expect_int())
        if tok.kind == "ident" and tok.text not in RESERVED:
            self.next()
            if tok.text not in self.sig:
                self.error(f"unknown generator {tok.text!r}", tok)
            return from_generator(self.sig[tok.text])
        self.error(f"expected a circuit, found {tok.text or 'end of file'!r}")

    # interpretations
    def interp(self) -> str:
        self.expect("interp")
        name = self.expect_name()
        if name.text not in self.sig:
            self.error(f"unknown generator {name.text!r}", name)
        if name.text in self.interps:
            self.error(f"generator {name.text!r} interpreted twice", name)
        g = self.sig[name.text]
        self.expect("{")
        fields: dict[str, object] = {}
        while not self.at("}"):
            key = self.tok
            if key.text not in ("down", "up", "heat"):
                self.error(f"expected down, up or heat, found {key.text!r}")
            if key.text in fields:
                self.error(f"{key.text} given twice", key)
            self.next()
            self.expect(":")
            fields[key.text] = self.heat() if key.text == "heat" else self.vector()
            if not self.at("}"):
                self.expect(";")
        self.expect("}")
        for need in ("down", "up"):
            if need not in fields:
                self.error(f"interpretation of {name.text!r} lacks {need}", name)
        try:
            gi = GeneratorInterpretation(g, fields["down"], fields["up"],
                                         fields.get("heat", HeatExpr()))
        except InterpretationError as e:
            self.error(str(e), name)
        self.interps[name.text] = gi
        return f"interp {name.text}"

    def vector(self) -> tuple[CurrentExpr, ...]:
        if self.at("("):
            self.next()
            out = []
            if not self.at(")"):
                out.append(self.expr())
                while self.at(","):
                    self.next()
                    out.append(self.expr())
            self.expect(")")
            return tuple(out)
        return (self.expr(),)

    def heat(self) -> HeatExpr:
        if self.at("{"):
            self.next()
            self.expect("}")
            return HeatExpr()
        atoms = [self.heat_atom()]
        while self.at("+"):
            self.next()
            atoms.append(self.heat_atom())
        return HeatExpr(tuple(atoms))

    def heat_atom(self) -> CurrentExpr:
        self.expect("<")
        e = self.expr()
        self.expect(">")
        return e

    def expr(self) -> CurrentExpr:
        e = self.scaled()
        while self.at("+"):
            self.next()
            e = Add(e, self.scaled())
        return e

    def scaled(self) -> CurrentExpr:
        if self.tok.kind == "int" and self.toks[self.i + 1].text == "*":
            k = int(self.next().text)
            self.next()
            return Scale(k, self.scaled())
        return self.factor()

    def factor(self) -> CurrentExpr:
        tok = self.tok
        if tok.kind == "int":
            return Const(int(self.next().text))
        if self.at("("):
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if self.at("max"):
            self.next()
            self.expect("(")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return Max(a, b)
        if tok.kind == "ident":
            m = re.fullmatch(r"([xy])([1-9]\d*)", tok.text)
            if m:
                self.next()
                return Var(m.group(1), int(m.group(2)))
        self.error(f"expected a current expression, found {tok.text or 'end of file'!r}")


def parse(text: str) -> PolyFile:
    return _Parser(text).parse()


def parse_term(text: str, signature: Signature) -> Circuit:
    """A standalone circuit term over ``signature``."""
    p = _Parser(text)
    p.sig = signature
    c = p.term()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r} after circuit term")
    return c


# -- rendering ------------------------------------------------------------------

def render_expr(e: CurrentExpr) -> str:
    if isinstance(e, Var):
        return f"{e.side}{e.index}"
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Max):
        return f"max({render_expr(e.left)}, {render_expr(e.right)})"
    if isinstance(e, Scale):
        inner = render_expr(e.expr)
        if isinstance(e.expr, Add):
            inner = f"({inner})"
        return f"{e.factor} * {inner}"
    right = render_expr(e.right)
    if isinstance(e.right, Add):
        right = f"({right})"
    return f"{render_expr(e.left)} + {right}"


def render_heat(h: HeatExpr) -> str:
    if not h.atoms:
        return "{}"
    return " + ".join(f"<{render_expr(a)}>" for a in h.atoms)


def render_vector(v) -> str:
    return "(" + ", ".join(render_expr(e) for e in v) + ")"


def render_circuit(c: Circuit) -> str:
    """Term text for a circuit: one ``;``-separated part per slice."""
    if not c.slices:
        return f"id:{c.inputs}"
    parts = []
    for s, w in zip(c.slices, c.widths()):
        right = w - s.pad - s.gen.arity_in
        bits = []
        if s.pad:
            bits.append(f"id:{s.pad}")
        bits.append(s.gen.name)
        if right:
            bits.append(f"id:{right}")
        parts.append(" * ".join(bits))
    if len(parts) == 1:
        return parts[0]
    return " ; ".join(f"({p})" if "*" in p else p for p in parts)


def render(pf: PolyFile) -> str:
    tags = dict(pf.provenance)

    def line(label: str, body: str) -> str:
        tag = tags.get(label)
        return f"{body}  # [{tag}]" if tag else body

    out = []
    for g in pf.signature:
        out.append(line(f"gen {g.name}", f"gen {g.name} : {g.arity_in} -> {g.arity_out}"))
    for r in pf.rules:
        out.append(line(f"rule {r.name}",
                        f"rule {r.name} : {render_circuit(r.lhs)} => {render_circuit(r.rhs)}"))
    if pf.currents_min is not None:
        out.append(line("currents", f"currents min {pf.currents_min}"))
    for i in pf.interps:
        body = (f"interp {i.gen.name} {{ down: {render_vector(i.down)}; "
                f"up: {render_vector(i.up)}; heat: {render_heat(i.heat)} }}")
        out.append(line(f"interp {i.gen.name}", body))
    return "\n".join(out) + ("\n" if out else "")


# -- files and bundled examples ---------------------------------------------------

BUNDLED = ("assoc.poly", "lz2.poly")


def bundled_text(name: str) -> str:
    if not name.endswith(".poly"):
        name += ".poly"
    if name not in BUNDLED:
        raise PolyError(f"no bundled example named {name!r}")
    return resources.files("polygraph3.data").joinpath(name).read_text(encoding="utf-8")


def load_example(name: str) -> ExampleBundle:
    stem = name[:-5] if name.endswith(".poly") else name
    return ExampleBundle(stem, parse(bundled_text(stem)))


def read_poly(path: str) -> tuple[str, str]:
    """Text of a ``.poly`` file and where it came from.

    A path that does not exist but names a bundled example (for instance
    ``examples/lz2.poly``) falls back to the copy shipped with the package.
    """
    p = Path(path)
    if p.exists():
        return p.read_text(encoding="utf-8"), str(p)
    if p.name in BUNDLED:
        return bundled_text(p.name), f"<bundled {p.name}>"
    raise PolyError(f"no such file: {path}")
