"""
Concrete syntax: a regex lexer, a recursive-descent parser producing core
terms, and a pretty printer whose output parses back to an alpha-equivalent
term.

Precedence, loosest first:

    \\x. e   \\^i. e   (x : A) -> B   (x : A) * B     binders
    A -> B                                         right associative
    A * B                                          right associative
    e \\/ e                                         left associative
    e /\\ e                                         left associative
    ~e
    f a                                            application
    p @ i @ j                                      one path application
    atoms and keyword forms

Keyword forms (``coe``, ``hcomp``, ``inS``, ``outS``, ``Partial``, ``Ext``,
``Sub``, ``fst``, ``snd``) take atoms as arguments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Tuple

from cubik import cofib
from cubik.errors import ParseError
from cubik.syntax import (
    ABSURD,
    TRUTH,
    Absurd,
    App,
    Clauses,
    Coe,
    Conj,
    ExtTy,
    Fst,
    HComp,
    IAnd,
    IConst,
    INeg,
    InS,
    Interval,
    IOr,
    Lam,
    OutS,
    PApp,
    Pair,
    PartialEl,
    PartialTy,
    Pi,
    PLam,
    Sigma,
    Snd,
    SubTy,
    Term,
    TrivialPartial,
    Truth,
    Univ,
    Var,
    free_names,
)

KEYWORDS = frozenset(
    {"def", "U", "I", "Partial", "Ext", "Sub", "inS", "outS", "coe", "hcomp", "TOP", "BOT", "fst", "snd"}
)

TOKEN_SPEC = [
    ("SKIP", r"\s+|--[^\n]*"),
    ("PLAM", r"\\\^"),
    ("OR", r"\\/"),
    ("LAM", r"\\lam(?![A-Za-z0-9_'])|\\"),
    ("AND", r"/\\"),
    ("OPEN_FACES", r"\[\|"),
    ("CLOSE_FACES", r"\|\]"),
    ("ARROW", r"->"),
    ("FAT_ARROW", r"=>"),
    ("CONV", r"=="),
    ("EQ", r"="),
    ("COLON", r":"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("COMMA", r","),
    ("BAR", r"\|"),
    ("AT", r"@"),
    ("NEG", r"~"),
    ("STAR", r"\*"),
    ("DOT", r"\."),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_']*"),
    ("NUM", r"[0-9]+"),
]

TOKEN_RE = re.compile("|".join(f"(?P<{kind}>{pattern})" for kind, pattern in TOKEN_SPEC))

# human readable token names, for "expected ..." messages
DISPLAY = {
    "PLAM": "'\\^'",
    "OR": "'\\/'",
    "LAM": "'\\'",
    "AND": "'/\\'",
    "OPEN_FACES": "'[|'",
    "CLOSE_FACES": "'|]'",
    "ARROW": "'->'",
    "FAT_ARROW": "'=>'",
    "CONV": "'=='",
    "EQ": "'='",
    "COLON": "':'",
    "LPAREN": "'('",
    "RPAREN": "')'",
    "COMMA": "','",
    "BAR": "'|'",
    "AT": "'@'",
    "NEG": "'~'",
    "STAR": "'*'",
    "DOT": "'.'",
    "NAME": "a name",
    "NUM": "0 or 1",
    "EOF": "end of input",
}

ATOM_START = frozenset({"NAME", "NUM", "LPAREN", "OPEN_FACES"}) | KEYWORDS - {"def", "TOP", "BOT"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int


@dataclass(frozen=True)
class Declaration:
    name: str
    params: Tuple[Tuple[str, Term], ...]
    type: Term
    body: Term
    span: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class SourceFile:
    declarations: Tuple[Declaration, ...]
    text: str = ""
    path: Optional[str] = None

    def names(self):
        return [d.name for d in self.declarations]

    def declaration(self, name):
        for d in self.declarations:
            if d.name == name:
                return d
        return None


def line_col(text, offset):
    """1-based line and column of a character offset."""
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", span=(pos, pos + 1))
        kind = m.lastgroup
        if kind != "SKIP":
            value = m.group()
            if kind == "NAME" and value in KEYWORDS:
                kind = value
            tokens.append(Token(kind, value, m.start(), m.end()))
        pos = m.end()
    tokens.append(Token("EOF", "", len(text), len(text)))
    return tokens


def _describe(kinds):
    return ", ".join(sorted(DISPLAY.get(k, f"'{k}'") for k in kinds))


class Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    # Token plumbing

    @property
    def current(self):
        return self.tokens[self.index]

    def peek(self, offset=0):
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    @property
    def last_end(self):
        return self.tokens[self.index - 1].end if self.index else 0

    def at(self, *kinds):
        return self.current.kind in kinds

    def accept(self, kind):
        if self.current.kind == kind:
            token = self.current
            self.index += 1
            return token
        return None

    def error(self, expected, message=None):
        token = self.current
        found = "end of input" if token.kind == "EOF" else repr(token.text)
        message = message or f"expected {_describe(expected)}, found {found}"
        return ParseError(message, span=(token.start, max(token.end, token.start + 1)), expected=expected)

    def expect(self, kind):
        token = self.accept(kind)
        if token is None:
            raise self.error({kind})
        return token

    def span_from(self, start):
        return (start, self.last_end)

    # Files and declarations

    def source_file(self, path=None):
        declarations = []
        while not self.at("EOF"):
            declarations.append(self.declaration())
        return SourceFile(tuple(declarations), self.text, path)

    def declaration(self):
        if not self.at("def"):
            raise self.error({"def"})
        self.expect("def")
        name = self.expect("NAME")
        params = []
        while self.at("LPAREN"):
            names, ty = self.binder_group()
            params.extend((n, ty) for n in names)
        self.expect("COLON")
        ty = self.expr()
        self.expect("FAT_ARROW")
        body = self.expr()
        return Declaration(name.text, tuple(params), ty, body, span=(name.start, name.end))

    def binder_group(self):
        self.expect("LPAREN")
        names = [self.expect("NAME").text]
        while self.at("NAME"):
            names.append(self.expect("NAME").text)
        self.expect("COLON")
        ty = self.expr()
        self.expect("RPAREN")
        return names, ty

    def binder_names(self):
        names = [self.expect("NAME").text]
        while self.at("NAME"):
            names.append(self.expect("NAME").text)
        return names

    # Expressions

    def at_telescope(self):
        if not self.at("LPAREN") or self.peek(1).kind != "NAME":
            return False
        offset = 2
        while self.peek(offset).kind == "NAME":
            offset += 1
        return self.peek(offset).kind == "COLON"

    def expr(self):
        start = self.current.start
        if self.accept("LAM"):
            names = self.binder_names()
            self.expect("DOT")
            body = self.expr()
            for name in reversed(names):
                body = Lam(name, body, span=self.span_from(start))
            return body
        if self.accept("PLAM"):
            names = self.binder_names()
            self.expect("DOT")
            return PLam(tuple(names), self.expr(), span=self.span_from(start))
        if self.at_telescope():
            groups = []
            while self.at_telescope():
                names, ty = self.binder_group()
                groups.extend((n, ty) for n in names)
            if self.accept("ARROW"):
                former = Pi
            elif self.accept("STAR"):
                former = Sigma
            else:
                raise self.error({"ARROW", "STAR"})
            body = self.expr()
            for name, ty in reversed(groups):
                body = former(name, ty, body, span=self.span_from(start))
            return body
        lhs = self.sigma()
        if self.accept("ARROW"):
            return Pi("_", lhs, self.expr(), span=self.span_from(start))
        return lhs

    def sigma(self):
        start = self.current.start
        lhs = self.disjunction()
        if self.accept("STAR"):
            return Sigma("_", lhs, self.sigma(), span=self.span_from(start))
        return lhs

    def disjunction(self):
        start = self.current.start
        left = self.conjunction()
        while self.accept("OR"):
            left = IOr(left, self.conjunction(), span=self.span_from(start))
        return left

    def conjunction(self):
        start = self.current.start
        left = self.unary()
        while self.accept("AND"):
            left = IAnd(left, self.unary(), span=self.span_from(start))
        return left

    def unary(self):
        start = self.current.start
        if self.accept("NEG"):
            return INeg(self.unary(), span=self.span_from(start))
        return self.application()

    def application(self):
        start = self.current.start
        head = self.path_application()
        while self.current.kind in ATOM_START:
            head = App(head, self.path_application(), span=self.span_from(start))
        return head

    def path_application(self):
        start = self.current.start
        head = self.atom()
        args = []
        while self.accept("AT"):
            args.append(self.interval_atom())
        if args:
            return PApp(head, tuple(args), span=self.span_from(start))
        return head

    def interval_atom(self):
        start = self.current.start
        if self.at("NAME"):
            return Var(self.expect("NAME").text, span=self.span_from(start))
        if self.at("NUM"):
            return self.constant()
        if self.accept("NEG"):
            return INeg(self.interval_atom(), span=self.span_from(start))
        if self.accept("LPAREN"):
            e = self.expr()
            self.expect("RPAREN")
            return e
        raise self.error({"NAME", "NUM", "NEG", "LPAREN"})

    def constant(self):
        token = self.expect("NUM")
        if token.text not in ("0", "1"):
            raise ParseError(
                f"the only interval constants are 0 and 1, found {token.text}",
                span=(token.start, token.end),
                expected={"NUM"},
            )
        return IConst(int(token.text), span=(token.start, token.end))

    def atom(self):
        token = self.current
        start = token.start
        match token.kind:
            case "NAME":
                self.index += 1
                return Var(token.text, span=(token.start, token.end))
            case "NUM":
                return self.constant()
            case "U":
                self.index += 1
                return Univ(span=(token.start, token.end))
            case "I":
                self.index += 1
                return Interval(span=(token.start, token.end))
            case "LPAREN":
                self.index += 1
                e = self.expr()
                if self.accept("COMMA"):
                    second = self.expr()
                    self.expect("RPAREN")
                    return Pair(e, second, span=self.span_from(start))
                self.expect("RPAREN")
                return e
            case "OPEN_FACES":
                faces, trivial = self.faces_block()
                if trivial is not None:
                    return TrivialPartial(trivial, span=self.span_from(start))
                return PartialEl(faces, span=self.span_from(start))
            case "Partial":
                self.index += 1
                c = self.cofib_atom()
                return PartialTy(c, self.atom(), span=self.span_from(start))
            case "Ext":
                self.index += 1
                self.expect("LPAREN")
                names = self.binder_names()
                self.expect("RPAREN")
                carrier = self.atom()
                return ExtTy(tuple(names), carrier, self.faces(), span=self.span_from(start))
            case "Sub":
                self.index += 1
                carrier = self.atom()
                c = self.cofib_atom()
                return SubTy(carrier, c, self.faces(), span=self.span_from(start))
            case "inS" | "outS":
                self.index += 1
                c = self.cofib_atom()
                former = InS if token.kind == "inS" else OutS
                return former(c, self.atom(), span=self.span_from(start))
            case "coe":
                self.index += 1
                c = self.cofib_atom()
                return Coe(self.atom(), c, span=self.span_from(start))
            case "hcomp":
                self.index += 1
                c = self.cofib_atom()
                carrier = self.atom()
                walls = self.atom()
                floor = self.atom()
                return HComp(carrier, walls, floor, c, span=self.span_from(start))
            case "fst" | "snd":
                self.index += 1
                former = Fst if token.kind == "fst" else Snd
                return former(self.atom(), span=self.span_from(start))
        raise self.error(ATOM_START)

    # Partial elements

    def faces(self):
        faces, trivial = self.faces_block()
        if trivial is not None:
            return ((Conj(), trivial),)
        return faces

    def faces_block(self):
        """Parse ``[| ... |]``; returns ``(faces, None)`` or ``((), body)`` for a trivial block."""
        self.expect("OPEN_FACES")
        if self.accept("CLOSE_FACES"):
            return (), None
        mark = self.index
        try:
            faces = self.face_list()
        except ParseError as face_error:
            self.index = mark
            try:
                body = self.expr()
                self.expect("CLOSE_FACES")
            except ParseError as body_error:
                raise max(face_error, body_error, key=lambda e: e.span[0])
            return (), body
        return faces, None

    def face_list(self):
        faces = []
        while True:
            c = self.cofibration()
            self.expect("ARROW")
            body = self.expr()
            faces.extend((conj, body) for conj in cofib.clauses(c))
            if self.accept("CLOSE_FACES"):
                return tuple(faces)
            if not self.accept("BAR"):
                raise self.error({"BAR", "CLOSE_FACES"})

    # Cofibrations

    def cofibration(self):
        c = self.cofib_conjunction()
        while self.accept("OR"):
            c = cofib.disj_or(c, self.cofib_conjunction())
        return c

    def cofib_conjunction(self):
        c = self.cofib_atom()
        while self.accept("AND"):
            c = cofib.disj_and(c, self.cofib_atom())
        return c

    def cofib_atom(self):
        if self.accept("TOP"):
            return TRUTH
        if self.accept("BOT"):
            return ABSURD
        if self.at("NAME"):
            name = self.expect("NAME").text
            self.expect("EQ")
            value = self.constant().value
            return cofib.cond(name, value)
        if self.accept("LPAREN"):
            c = self.cofibration()
            self.expect("RPAREN")
            return c
        raise self.error({"TOP", "BOT", "NAME", "LPAREN"})

    def end(self):
        if not self.at("EOF"):
            raise self.error({"EOF"})


def parse(text, path=None) -> SourceFile:
    """Parse a whole ``.cub`` file."""
    return Parser(text).source_file(path)


def _complete(text, rule):
    parser = Parser(text)
    result = rule(parser)
    parser.end()
    return result


def parse_expr(text) -> Term:
    return _complete(text, Parser.expr)


def parse_cofib(text):
    return _complete(text, Parser.cofibration)


def parse_typed(text):
    """``e : T`` as a pair of terms."""

    def rule(p):
        term = p.expr()
        p.expect("COLON")
        return term, p.expr()

    return _complete(text, rule)


def parse_conversion(text):
    """``a == b : T`` as a triple of terms."""

    def rule(p):
        left = p.expr()
        p.expect("CONV")
        right = p.expr()
        p.expect("COLON")
        return left, right, p.expr()

    return _complete(text, rule)


def parse_assumption(text):
    """``x y : A`` as the names and their type."""

    def rule(p):
        names = p.binder_names()
        p.expect("COLON")
        return names, p.expr()

    return _complete(text, rule)


# Pretty printing

EXPR, SIGMA, OR, AND, UNARY, APP, PAPP, ATOM = range(8)


def pretty_conj(conj):
    if not conj.conds:
        return "TOP"
    return " /\\ ".join(f"{k.var} = {k.value}" for k in conj.conds)


def pretty_cofib(c):
    match c:
        case Truth():
            return "TOP"
        case Absurd():
            return "BOT"
        case Clauses(conjs):
            if len(conjs) == 1 and len(conjs[0].conds) == 1:
                return pretty_conj(conjs[0])
            parts = []
            for conj in conjs:
                text = pretty_conj(conj)
                parts.append(f"({text})" if len(conj.conds) > 1 and len(conjs) > 1 else text)
            return "(" + " \\/ ".join(parts) + ")"
    return repr(c)


def _faces(faces):
    if not faces:
        return "[| |]"
    return "[| " + " | ".join(f"{pretty_conj(conj)} -> {_pp(body, EXPR)}" for conj, body in faces) + " |]"


def _interval_arg(t):
    match t:
        case Var(name):
            return name
        case IConst(value):
            return str(value)
        case INeg(body):
            return "~" + _interval_arg(body)
    return f"({_pp(t, EXPR)})"


def pretty(t: Term) -> str:
    """Render a term in concrete syntax with as few parentheses as parsing allows."""
    return _pp(t, EXPR)


def _pp(t, level):
    text, own = _render(t)
    return f"({text})" if own < level else text


def _render(t):
    match t:
        case Var(name):
            return name, ATOM
        case Univ():
            return "U", ATOM
        case Interval():
            return "I", ATOM
        case IConst(value):
            return str(value), ATOM
        case Lam(x, body):
            return f"\\{x}. {_pp(body, EXPR)}", EXPR
        case PLam(xs, body):
            return f"\\^{' '.join(xs)}. {_pp(body, EXPR)}", EXPR
        case Pi(x, dom, cod):
            if x not in free_names(cod):
                return f"{_pp(dom, SIGMA)} -> {_pp(cod, EXPR)}", EXPR
            telescope = [f"({x} : {_pp(dom, EXPR)})"]
            while isinstance(cod, Pi) and cod.binder in free_names(cod.cod):
                telescope.append(f"({cod.binder} : {_pp(cod.dom, EXPR)})")
                cod = cod.cod
            return f"{' '.join(telescope)} -> {_pp(cod, EXPR)}", EXPR
        case Sigma(x, dom, cod):
            if x not in free_names(cod):
                return f"{_pp(dom, OR)} * {_pp(cod, SIGMA)}", SIGMA
            return f"({x} : {_pp(dom, EXPR)}) * {_pp(cod, EXPR)}", EXPR
        case Pair(a, b):
            return f"({_pp(a, EXPR)}, {_pp(b, EXPR)})", ATOM
        case Fst(p):
            return f"fst {_pp(p, ATOM)}", APP
        case Snd(p):
            return f"snd {_pp(p, ATOM)}", APP
        case IOr(left, right):
            return f"{_pp(left, OR)} \\/ {_pp(right, AND)}", OR
        case IAnd(left, right):
            return f"{_pp(left, AND)} /\\ {_pp(right, UNARY)}", AND
        case INeg(body):
            return f"~{_pp(body, UNARY)}", UNARY
        case App(fn, arg):
            return f"{_pp(fn, APP)} {_pp(arg, ATOM)}", APP
        case PApp(fn, args):
            return f"{_pp(fn, ATOM)} @ " + " @ ".join(_interval_arg(a) for a in args), PAPP
        case PartialEl(faces):
            return _faces(faces), ATOM
        case TrivialPartial(body):
            return f"[| {_pp(body, EXPR)} |]", ATOM
        case PartialTy(c, carrier):
            return f"Partial {pretty_cofib(c)} {_pp(carrier, ATOM)}", APP
        case ExtTy(xs, carrier, faces):
            return f"Ext ({' '.join(xs)}) {_pp(carrier, ATOM)} {_faces(faces)}", APP
        case SubTy(carrier, c, faces):
            return f"Sub {_pp(carrier, ATOM)} {pretty_cofib(c)} {_faces(faces)}", APP
        case InS(c, body):
            return f"inS {pretty_cofib(c)} {_pp(body, ATOM)}", APP
        case OutS(c, body):
            return f"outS {pretty_cofib(c)} {_pp(body, ATOM)}", APP
        case Coe(line, c):
            return f"coe {pretty_cofib(c)} {_pp(line, ATOM)}", APP
        case HComp(carrier, walls, floor, c):
            return (
                f"hcomp {pretty_cofib(c)} {_pp(carrier, ATOM)} {_pp(walls, ATOM)} {_pp(floor, ATOM)}",
                APP,
            )
    raise TypeError(f"not a term: {t!r}")


__all__ = [
    "Declaration",
    "Parser",
    "SourceFile",
    "line_col",
    "parse",
    "parse_assumption",
    "parse_conversion",
    "parse_cofib",
    "parse_expr",
    "parse_typed",
    "pretty",
    "pretty_cofib",
    "pretty_conj",
    "tokenize",
]
