"""Line-oriented text format for algebra definitions and field expressions.

Grammar::

    algebra NAME [over k]
    gen NAME weight INT [parity INV SIGN]...
    ope A B N= FIELD-EXPR
    # comment

A FIELD-EXPR is built from integers, the level ``k``, generator names,
``:...:`` monomials (factors ``[d^N] NAME``), ``d^N ATOM`` derivatives and
the operators ``+ - * / ^`` with parentheses.  A header with no body,
``algebra heisenberg N``, ``algebra sl2`` or ``algebra sl2-eigen``, names a
builtin algebra.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .coefficients import K, Scalar, ScalarError
from .kernel import AlgebraSpec, Field, GeneratorSymbol, SpecError
from .render import render_terms

__all__ = [
    "DSLError",
    "DSLSyntaxError",
    "DSLSemanticError",
    "GenDecl",
    "OpeDecl",
    "AlgebraDocument",
    "parse_document",
    "build_spec",
    "parse_algebra",
    "parse_field",
    "render_document",
    "render_algebra",
    "document_of",
    "builtin_algebra",
    "SL2_SOURCE",
    "heisenberg_source",
]

RESERVED = {"k", "d"}


class DSLError(SpecError):
    def __init__(self, message, line=None, col=None):
        self.message, self.line, self.col = message, line, col
        where = []
        if line is not None:
            where.append(f"line {line}")
        if col is not None:
            where.append(f"col {col}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class DSLSyntaxError(DSLError):
    pass


class DSLSemanticError(DSLError):
    pass


# ---------------------------------------------------------------------------
# tokens

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int", "name", "op", "end"
    text: str
    col: int


def _tokenize(text, line=None, col0=1):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.group(0).strip() == "":
            break
        col = col0 + m.start(m.lastindex)
        if m.group(1):
            out.append(_Tok("int", m.group(1), col))
        elif m.group(2):
            out.append(_Tok("name", m.group(2), col))
        else:
            ch = m.group(3)
            if ch not in "+-*/^():":
                raise DSLSyntaxError(f"unexpected character {ch!r}", line, col)
            out.append(_Tok("op", ch, col))
        pos = m.end()
    out.append(_Tok("end", "", col0 + len(text.rstrip())))
    return out


# ---------------------------------------------------------------------------
# Pratt parser; values are Scalar or Field


class _Parser:
    BP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
    UNARY = 30

    def __init__(self, text, spec, line=None, col0=1, strict=False):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.spec = spec
        self.line = line
        self.strict = strict

    def err(self, msg, tok=None, semantic=False):
        tok = tok or self.peek()
        cls = DSLSemanticError if semantic else DSLSyntaxError
        return cls(msg, self.line, tok.col)

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind, text=None, what=None):
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise self.err(f"expected {what or text or kind}, found {found}")
        return self.next()

    def parse(self):
        if self.peek().kind == "end":
            raise self.err("empty expression")
        v = self.expr(0)
        if self.peek().kind != "end":
            raise self.err(f"unexpected {self.peek().text!r}")
        return v

    def expr(self, rbp):
        left = self.nud(self.next())
        while True:
            t = self.peek()
            bp = self.BP.get(t.text, 0) if t.kind == "op" else 0
            if bp <= rbp:
                return left
            self.next()
            left = self.led(t, left)

    # -- prefix -----------------------------------------------------------

    def nud(self, t):
        if t.kind == "end":
            raise self.err("unexpected end of input", t)
        if t.kind == "int":
            return Scalar(int(t.text))
        if t.kind == "op":
            if t.text == "-":
                return self.neg(self.expr(self.UNARY), t)
            if t.text == "+":
                return self.expr(self.UNARY)
            if t.text == "(":
                v = self.expr(0)
                self.expect("op", ")")
                return v
            if t.text == ":":
                return self.monomial(t)
            raise self.err(f"unexpected {t.text!r}", t)
        # names
        if t.text == "d" and self.peek().text == "^":
            order = self.deriv_order()
            v = self.nud(self.next())
            if not isinstance(v, Field):
                raise self.err("derivative of a scalar", t, semantic=True)
            return v.derive(order)
        if t.text == "k":
            if not self.spec.symbolic_level:
                raise self.err("level symbol k used in an algebra without 'over k'", t, semantic=True)
            return K
        return self.spec.gen(self.gen_index(t))

    def deriv_order(self):
        self.expect("op", "^")
        return int(self.expect("int", what="derivative order").text)

    def gen_index(self, t):
        if t.kind != "name" or t.text not in self.spec.index:
            raise self.err(f"unknown generator {t.text!r}", t, semantic=True)
        return self.spec.index[t.text]

    def monomial(self, open_tok):
        factors = []
        while not (self.peek().kind == "op" and self.peek().text == ":"):
            t = self.next()
            if t.kind == "end":
                raise self.err("unterminated monomial", open_tok)
            d = 0
            if t.kind == "name" and t.text == "d" and self.peek().text == "^":
                d = self.deriv_order()
                t = self.next()
            if t.kind != "name":
                raise self.err("expected a generator name in monomial", t)
            factors.append((self.gen_index(t), d))
        self.next()
        if not factors:
            raise self.err("empty monomial", open_tok)
        if self.strict:
            keys = [(g, -d) for g, d in factors]
            if keys != sorted(keys):
                raise self.err("table monomials must list factors in canonical order", open_tok, True)
            return Field(self.spec, {tuple(factors): Scalar(1)})
        return self.spec.monomial(factors)

    # -- infix ------------------------------------------------------------

    def led(self, t, left):
        if self.peek().kind == "end":
            raise self.err(f"dangling operator {t.text!r}", t)
        if t.text == "^":
            e = self.peek()
            sign = 1
            if e.kind == "op" and e.text == "-":
                self.next()
                sign = -1
            if self.peek().kind != "int":
                raise self.err("expected an integer exponent after '^'")
            n = sign * int(self.next().text)
            if isinstance(left, Field):
                raise self.err("fields cannot be raised to a power", t, semantic=True)
            try:
                return left**n
            except (ScalarError, ZeroDivisionError):
                raise self.err("zero raised to a negative power", t, semantic=True) from None
        right = self.expr(self.BP[t.text])
        if t.text == "+":
            return self.add(left, right)
        if t.text == "-":
            return self.add(left, self.neg(right, t))
        if t.text == "*":
            if isinstance(left, Field) and isinstance(right, Field):
                raise self.err("product of two fields; write :a b: for normal ordering", t, semantic=True)
            if isinstance(right, Field):
                return right * left
            return left * right
        if isinstance(right, Field):
            raise self.err("division by a field", t, semantic=True)
        if not right:
            raise self.err("division by zero", t, semantic=True)
        return left * right.inverse() if isinstance(left, Field) else left / right

    def neg(self, v, t):
        return -v

    def add(self, a, b):
        if isinstance(a, Field) or isinstance(b, Field):
            return self.as_field(a) + self.as_field(b)
        return a + b

    def as_field(self, v):
        return v if isinstance(v, Field) else self.spec.vacuum(v)


def parse_field(text, spec, *, line=None, col0=1):
    """Parse a FIELD-EXPR against ``spec``; scalars become multiples of the vacuum."""
    v = _Parser(text, spec, line, col0).parse()
    return v if isinstance(v, Field) else spec.vacuum(v)


def parse_scalar(text):
    """Parse a scalar expression in k."""
    bare = AlgebraSpec([], {}, symbolic_level=True, check=False)
    v = _Parser(text, bare).parse()
    if isinstance(v, Field):
        return v.terms.get((), Scalar(0))
    return v


# ---------------------------------------------------------------------------
# documents


@dataclass(frozen=True)
class GenDecl:
    name: str
    weight: int
    parity: tuple = ()  # ((involution, ±1), ...)
    line: int = dc_field(default=0, compare=False)


@dataclass(frozen=True)
class OpeDecl:
    a: str
    b: str
    n: int
    text: str  # canonical rendering of the entry
    line: int = dc_field(default=0, compare=False)
    col: int = dc_field(default=0, compare=False)
    terms: dict = dc_field(default=None, compare=False, hash=False, repr=False)


@dataclass(frozen=True)
class AlgebraDocument:
    name: str
    symbolic: bool = False
    generators: tuple = ()
    opes: tuple = ()
    builtin: tuple = None  # ("heisenberg", n) etc. for header-only documents


_HEADER = re.compile(r"^algebra\s+(\S+)(?:\s+(\d+))?(?:\s+(over)\s+(\S+))?\s*$")
_GEN = re.compile(r"^gen\s+(\S+)\s+weight\s+(\S+)((?:\s+parity\s+\S+\s+\S+)*)\s*$")
_PARITY = re.compile(r"parity\s+(\S+)\s+(\S+)")
_OPE = re.compile(r"^ope\s+(\S+)\s+(\S+)\s+(\S+)=(.*)$")
_SIGNS = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}
BUILTINS = ("heisenberg", "sl2", "sl2-eigen")


def _col(raw, sub, start=0):
    return raw.index(sub, start) + 1


def parse_document(text):
    """Parse DSL text into an :class:`AlgebraDocument` (no OPE checks yet)."""
    name, symbolic, header_arg = None, False, None
    gens, opes = [], []
    raw_opes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        body = line.strip()
        if not body:
            continue
        indent = len(line) - len(line.lstrip())
        word = body.split()[0]
        if word == "algebra":
            if name is not None:
                raise DSLSemanticError("second algebra header", lineno, indent + 1)
            m = _HEADER.match(body)
            if not m:
                raise DSLSyntaxError("expected 'algebra NAME [over k]'", lineno, indent + 1)
            name = m.group(1)
            header_arg = int(m.group(2)) if m.group(2) else None
            if m.group(3):
                if m.group(4) != "k":
                    raise DSLSyntaxError("only 'over k' is supported", lineno, _col(raw, m.group(4), indent + 9))
                symbolic = True
            continue
        if name is None:
            raise DSLSyntaxError("missing 'algebra NAME' header", lineno, indent + 1)
        if word == "gen":
            m = _GEN.match(body)
            if not m:
                raise DSLSyntaxError("expected 'gen NAME weight INT [parity INV SIGN]...'", lineno, indent + 1)
            gname, wtext = m.group(1), m.group(2)
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", gname) or gname in RESERVED:
                raise DSLSemanticError(f"invalid generator name {gname!r}", lineno, _col(raw, gname, indent + 3))
            if not wtext.isdigit() or int(wtext) < 1:
                raise DSLSyntaxError("weight must be a positive integer", lineno, _col(raw, wtext, indent + 3))
            if any(g.name == gname for g in gens):
                raise DSLSemanticError(f"duplicate generator {gname!r}", lineno, _col(raw, gname, indent + 3))
            parity = []
            for inv, sign in _PARITY.findall(m.group(3)):
                if sign not in _SIGNS:
                    raise DSLSyntaxError(f"parity sign must be + or -, got {sign!r}", lineno, _col(raw, sign, indent))
                parity.append((inv, _SIGNS[sign]))
            gens.append(GenDecl(gname, int(wtext), tuple(parity), lineno))
            continue
        if word == "ope":
            m = _OPE.match(body)
            if not m:
                raise DSLSyntaxError("expected 'ope A B N= EXPR'", lineno, indent + 1)
            if not m.group(3).isdigit():
                raise DSLSyntaxError("product index must be a non-negative integer", lineno,
                                     indent + m.start(3) + 1)
            raw_opes.append((lineno, m.group(1), m.group(2), int(m.group(3)), m.group(4),
                             indent + m.start(4) + 1, (indent + m.start(1) + 1, indent + m.start(2) + 1)))
            continue
        raise DSLSyntaxError(f"unknown statement {word!r}", lineno, indent + 1)
    if name is None:
        raise DSLSyntaxError("missing 'algebra NAME' header", 1, 1)
    if not gens and not raw_opes:
        if name == "heisenberg" and header_arg:
            return AlgebraDocument(name, False, builtin=("heisenberg", header_arg))
        if name in ("sl2", "sl2-eigen") and header_arg is None:
            return AlgebraDocument(name, True, builtin=(name,))
    if header_arg is not None:
        raise DSLSyntaxError("unexpected argument after algebra name", 1, 1)
    bare = _bare_spec(gens, symbolic)
    for lineno, a, b, n, expr, col, gcols in raw_opes:
        for g, gcol in zip((a, b), gcols):
            if g not in bare.index:
                raise DSLSemanticError(f"unknown generator {g!r}", lineno, gcol)
        if not expr.strip():
            raise DSLSyntaxError("missing expression after '='", lineno, col)
        f = _Parser(expr, bare, lineno, col, strict=True).parse()
        if not isinstance(f, Field):
            f = bare.vacuum(f)
        ia, ib = bare.index[a], bare.index[b]
        expect = bare.generators[ia].weight + bare.generators[ib].weight - n - 1
        for mono in f.terms:
            w = sum(bare.generators[g].weight + d for g, d in mono)
            if w != expect:
                raise DSLSemanticError(f"entry {a}_({n}){b} has weight {w}, expected {expect}", lineno, col)
        opes.append(OpeDecl(a, b, n, _render(bare, f.terms), lineno, col, dict(f.terms)))
    return AlgebraDocument(name, symbolic, tuple(gens), tuple(opes))


def _bare_spec(gens, symbolic):
    syms = [GeneratorSymbol(g.name, g.weight, dict(g.parity)) for g in gens]
    return AlgebraSpec(syms, {}, symbolic_level=symbolic, check=False)


def _render(spec, terms):
    return render_terms([g.name for g in spec.generators], [g.weight for g in spec.generators], terms)


def builtin_algebra(name, n=None):
    from .algebras import heisenberg, sl2_affine, sl2_eigenbasis

    if name == "heisenberg":
        return heisenberg(n)
    if name == "sl2":
        return sl2_affine()
    if name == "sl2-eigen":
        return sl2_eigenbasis()
    raise DSLSemanticError(f"unknown builtin algebra {name!r}")


def build_spec(doc):
    """Turn a document into an AlgebraSpec, with line-sourced diagnostics."""
    if doc.builtin:
        return builtin_algebra(*doc.builtin)
    bare = _bare_spec(doc.generators, doc.symbolic)
    seen = {}
    for o in doc.opes:
        key = (o.a, o.b, o.n)
        if key in seen:
            raise DSLSemanticError(f"duplicate entry {o.a}_({o.n}){o.b}", o.line, o.col)
        seen[key] = o
    # first-declared direction of each pair is authoritative
    forward, reverse = {}, []
    for o in doc.opes:
        pair = (o.a, o.b)
        if (o.b, o.a) in forward and pair not in forward and o.a != o.b:
            reverse.append(o)
            continue
        forward.setdefault(pair, {})[o.n] = o.terms
    syms = bare.generators
    try:
        spec = AlgebraSpec(syms, forward, name=doc.name, symbolic_level=doc.symbolic)
    except SpecError as exc:
        line = doc.opes[0].line if doc.opes else doc.generators[0].line if doc.generators else None
        raise DSLSemanticError(str(exc), line) from None
    by_pair = {}
    for o in reverse:
        by_pair.setdefault((o.a, o.b), []).append(o)
    for (a, b), decls in by_pair.items():
        derived = spec.table.get((spec.index[a], spec.index[b]), {})
        given = {o.n: o for o in decls}
        for n in sorted(set(derived) | set(given)):
            o = given.get(n)
            if o is None:
                first = min(decls, key=lambda d: d.line)
                raise DSLSemanticError(
                    f"skew-symmetry violation: {a}_({n}){b} should be {_render(spec, derived[n])}",
                    first.line,
                    first.col,
                )
            if o.terms != derived.get(n, {}):
                want = _render(spec, derived[n]) if n in derived else "0"
                raise DSLSemanticError(
                    f"skew-symmetry violation: {a}_({n}){b} should be {want}", o.line, o.col
                )
    if doc.symbolic:
        spec.level = K
    return spec


def parse_algebra(text):
    return build_spec(parse_document(text))


# ---------------------------------------------------------------------------
# rendering


def render_document(doc):
    if doc.builtin:
        return "algebra " + " ".join(str(x) for x in doc.builtin) + "\n"
    lines = [f"algebra {doc.name}" + (" over k" if doc.symbolic else "")]
    for g in doc.generators:
        par = "".join(f" parity {inv} {'+' if s > 0 else '-'}" for inv, s in g.parity)
        lines.append(f"gen {g.name} weight {g.weight}{par}")
    for o in doc.opes:
        lines.append(f"ope {o.a} {o.b} {o.n}= {o.text}")
    return "\n".join(lines) + "\n"


def document_of(spec, name=None):
    """Canonical document for a spec: one entry per pair i <= j, all n."""
    gens = []
    for i, g in enumerate(spec.generators):
        par = tuple((inv, vec[i]) for inv, vec in sorted(spec.involutions.items()))
        gens.append(GenDecl(g.name, g.weight, par))
    opes = []
    names = [g.name for g in spec.generators]
    for i in range(spec.rank):
        for j in range(i, spec.rank):
            for n, terms in sorted(spec.table.get((i, j), {}).items()):
                opes.append(OpeDecl(names[i], names[j], n, _render(spec, terms), terms=dict(terms)))
    nm = name or re.sub(r"\s+", "_", spec.name or "algebra")
    return AlgebraDocument(nm, bool(spec.symbolic_level), tuple(gens), tuple(opes))


def render_algebra(spec, name=None):
    return render_document(document_of(spec, name))


SL2_SOURCE = """\
algebra sl2 over k
gen x weight 1
gen y weight 1
gen h weight 1
ope x y 0= :h:
ope x y 1= k
ope h x 0= 2*:x:
ope h y 0= -2*:y:
ope h h 1= 2*k
"""


def heisenberg_source(n):
    lines = [f"algebra H({n})"]
    lines += [f"gen a{i} weight 1 parity cartan -" for i in range(1, n + 1)]
    lines += [f"ope a{i} a{i} 1= 1" for i in range(1, n + 1)]
    return "\n".join(lines) + "\n"

