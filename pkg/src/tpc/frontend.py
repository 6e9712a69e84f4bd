"""Lexer, parser and pretty printer for ``.tpc`` modules.

A module is a sequence of definitions ``Name := rhs`` where ``rhs`` is a
combinator expression, a bracketed renaming, or a bracketed assignment.
Expression precedence, loosest first: ``||``, then ``;`` (both
left-associative), then postfix renaming.  In ``combine`` and ``mixin`` the
last postfix renaming of each operand is the argument renaming.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import DuplicateDefinition, LexError, ParseError, UnknownReference
from .surface import (
    OPERATOR_CHARS,
    RApp,
    RArrow,
    RawDecl,
    REq,
    RLam,
    RPi,
    RType,
    RVar,
    op_precedence,
    show_decl,
    show_label,
    show_raw,
)

# --------------------------------------------------------------------------
# tokens

KEYWORDS = {
    "Empty", "Theory", "extend", "by", "combine", "mixin", "view", "as", "via",
    "forall", "fun", "type", "axiom", "extended_by",
}
PUNCT = set("()[]{},;:.\\")
UNICODE_ALIASES = {"↦": "|->", "≔": ":=", "→": "->", "λ": "\\", "∀": "forall"}


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, OP, KW, PUNCT, ':=', '|->', '->', '||', '=', EOF
    text: str
    line: int
    col: int
    quoted: bool = False

    @property
    def pos(self):
        return (self.line, self.col)


def _is_word_char(c: str) -> bool:
    return c.isalnum() or c == "_"


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def adv(k: int):
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = text[i]
        if c.isspace():
            adv(1)
            continue
        start_line, start_col = line, col
        if c in UNICODE_ALIASES:
            alias = UNICODE_ALIASES[c]
            kind = {"|->": "|->", ":=": ":=", "->": "->", "\\": "PUNCT", "forall": "KW"}[alias]
            toks.append(Token(kind, alias, start_line, start_col))
            adv(1)
            continue
        if c == "`":
            j = text.find("`", i + 1)
            if j < 0 or "\n" in text[i + 1 : j] or j == i + 1:
                raise LexError("unterminated or empty backtick name", line=line, col=col)
            toks.append(Token("NAME", text[i + 1 : j], start_line, start_col, quoted=True))
            adv(j + 1 - i)
            continue
        if c == ":" and text.startswith(":=", i):
            toks.append(Token(":=", ":=", start_line, start_col))
            adv(2)
            continue
        if _is_word_char(c):
            j = i
            while j < n and (_is_word_char(text[j]) or text[j] == "'"):
                j += 1
            if text[j - 1] == "_" and j < n and text[j] in OPERATOR_CHARS:
                while j < n and text[j] in OPERATOR_CHARS:
                    j += 1
            word = text[i:j]
            toks.append(Token("KW" if word in KEYWORDS else "NAME", word, start_line, start_col))
            adv(j - i)
            continue
        if c in OPERATOR_CHARS:
            j = i
            while j < n and text[j] in OPERATOR_CHARS:
                j += 1
            run = text[i:j]
            if run.startswith("--"):
                while i < n and text[i] != "\n":
                    adv(1)
                continue
            if run in ("|->", "->", "||", "="):
                toks.append(Token(run, run, start_line, start_col))
            else:
                toks.append(Token("OP", run, start_line, start_col))
            adv(j - i)
            continue
        if c in PUNCT:
            toks.append(Token("PUNCT", c, start_line, start_col))
            adv(1)
            continue
        raise LexError(f"unexpected character {c!r}", line=line, col=col)
    toks.append(Token("EOF", "", line, col))
    return toks


# --------------------------------------------------------------------------
# combinator syntax tree


@dataclass(frozen=True)
class RawRenaming:
    entries: tuple  # of (name, name)
    pos: Optional[tuple] = field(default=None, compare=False)

    def as_dict(self) -> dict:
        return dict(self.entries)


@dataclass(frozen=True)
class RawAssignment:
    entries: tuple  # of (name, Raw)
    pos: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class NamedRef:
    """Reference to a named renaming or assignment definition."""

    name: str
    pos: Optional[tuple] = field(default=None, compare=False)


RenamingArg = Union[RawRenaming, NamedRef]
AssignmentArg = Union[RawAssignment, RawRenaming, NamedRef]


@dataclass(frozen=True)
class EmptyE:
    pos: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class TheoryE:
    decls: tuple
    pos: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class ExtendE:
    base: "TpcExpr"
    body: tuple
    pos: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class CombineE:
    a: "TpcExpr"
    r1: RenamingArg
    b: "TpcExpr"
    r2: RenamingArg
    pos: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class MixinE:
    a: "TpcExpr"
    r1: RenamingArg
    b: "TpcExpr"
    r2: RenamingArg
    pos: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class ViewE:
    source: "TpcExpr"
    target: "TpcExpr"
    assignment: AssignmentArg
    pos: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class SeqE:
    a: "TpcExpr"
    b: "TpcExpr"
    pos: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class RenameE:
    a: "TpcExpr"
    r: RenamingArg
    pos: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class RefE:
    name: str
    pos: Optional[tuple] = field(default=None, compare=False)


TpcExpr = Union[EmptyE, TheoryE, ExtendE, CombineE, MixinE, ViewE, SeqE, RenameE, RefE]
EMPTY_RENAMING = RawRenaming(())


@dataclass(frozen=True)
class Definition:
    name: str
    value: Union[TpcExpr, RawRenaming, RawAssignment]
    pos: Optional[tuple] = field(default=None, compare=False)

    @property
    def kind(self) -> str:
        if isinstance(self.value, RawRenaming):
            return "renaming"
        if isinstance(self.value, RawAssignment):
            return "assignment"
        return "expr"


@dataclass(frozen=True)
class Module:
    defs: tuple

    def get(self, name: str) -> Definition:
        for d in self.defs:
            if d.name == name:
                return d
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [d.name for d in self.defs]


# --------------------------------------------------------------------------
# parser


class Parser:
    def __init__(self, text: str, known: dict | None = None):
        self.toks = tokenize(text)
        self.i = 0
        # definition name -> "expr" | "renaming" | "assignment"
        self.known: dict = dict(known or {})

    # -------------------------------------------------------------- helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.i += 1
        return t

    def is_(self, kind: str, text: str | None = None, tok: Token | None = None) -> bool:
        t = tok or self.tok
        return t.kind == kind and (text is None or t.text == text)

    def is_punct(self, ch: str, tok: Token | None = None) -> bool:
        return self.is_("PUNCT", ch, tok)

    def is_kw(self, word: str, tok: Token | None = None) -> bool:
        return self.is_("KW", word, tok)

    def fail(self, expected: str):
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.text)
        raise ParseError(f"expected {expected}, found {found}", line=t.line, col=t.col)

    def expect_punct(self, ch: str) -> Token:
        if not self.is_punct(ch):
            self.fail(f"'{ch}'")
        return self.advance()

    def expect(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            self.fail(what)
        return self.advance()

    def expect_kw(self, word: str) -> Token:
        if not self.is_kw(word):
            self.fail(f"'{word}'")
        return self.advance()

    # -------------------------------------------------------------- module
    def module(self) -> Module:
        defs = []
        while self.tok.kind != "EOF":
            defs.append(self.definition())
        return Module(tuple(defs))

    def definition(self) -> Definition:
        name_tok = self.expect("NAME", "a definition name")
        self.expect(":=", "':='")
        if self.is_punct("["):
            value = self.bracket()
        else:
            value = self.expr()
        if name_tok.text in self.known:
            raise DuplicateDefinition(
                f"'{name_tok.text}' is already defined", line=name_tok.line, col=name_tok.col
            )
        d = Definition(name_tok.text, value, name_tok.pos)
        self.known[name_tok.text] = d.kind
        return d

    def _starts_definition(self) -> bool:
        return self.tok.kind == "NAME" and self.peek().kind == ":="

    # ---------------------------------------------------------- expressions
    def expr(self):
        left = self.seq()
        while self.tok.kind == "||":
            t = self.advance()
            right = self.seq()
            left = CombineE(left, EMPTY_RENAMING, right, EMPTY_RENAMING, t.pos)
        return left

    def seq(self):
        left = self.postfix()
        while self.is_punct(";"):
            t = self.advance()
            right = self.postfix()
            left = SeqE(left, right, t.pos)
        return left

    def postfix(self):
        e = self.primary()
        while True:
            if self.is_punct("["):
                r = self.renaming_bracket()
                e = RenameE(e, r, r.pos)
            elif self.is_kw("extended_by"):
                t = self.advance()
                e = ExtendE(e, self.decl_block(), t.pos)
            elif self.tok.kind == "NAME" and not self._starts_definition() and not self.tok.quoted:
                t = self.tok
                kind = self.known.get(t.text)
                if kind is None:
                    raise UnknownReference(f"unknown renaming '{t.text}'", line=t.line, col=t.col)
                if kind != "renaming":
                    self.fail("a renaming or an operator")
                self.advance()
                e = RenameE(e, NamedRef(t.text, t.pos), t.pos)
            else:
                return e

    def operand(self):
        """An operand of combine/mixin: postfix expression plus argument renaming."""
        e = self.postfix()
        if isinstance(e, RenameE):
            return e.a, e.r
        return e, EMPTY_RENAMING

    def primary(self):
        t = self.tok
        if self.is_kw("Empty"):
            self.advance()
            return EmptyE(t.pos)
        if self.is_kw("Theory"):
            self.advance()
            return TheoryE(self.decl_block(), t.pos)
        if self.is_kw("extend"):
            self.advance()
            base = self.postfix()
            self.expect_kw("by")
            return ExtendE(base, self.decl_block(), t.pos)
        if self.is_kw("combine") or self.is_kw("mixin"):
            self.advance()
            a, r1 = self.operand()
            self.expect_punct(",")
            b, r2 = self.operand()
            ctor = CombineE if t.text == "combine" else MixinE
            return ctor(a, r1, b, r2, t.pos)
        if self.is_kw("view"):
            self.advance()
            src = self.postfix()
            self.expect_kw("as")
            tgt = self.postfix()
            self.expect_kw("via")
            return ViewE(src, tgt, self.assignment_arg(), t.pos)
        if self.is_punct("("):
            self.advance()
            e = self.expr()
            self.expect_punct(")")
            return e
        if t.kind == "NAME":
            kind = self.known.get(t.text)
            if kind is None:
                raise UnknownReference(f"unknown definition '{t.text}'", line=t.line, col=t.col)
            if kind != "expr":
                raise UnknownReference(
                    f"'{t.text}' names a {kind}, not a theory or view", line=t.line, col=t.col
                )
            self.advance()
            return RefE(t.text, t.pos)
        self.fail("a theory expression")

    def assignment_arg(self):
        if self.is_punct("["):
            return self.bracket()
        t = self.expect("NAME", "an assignment")
        kind = self.known.get(t.text)
        if kind is None:
            raise UnknownReference(f"unknown assignment '{t.text}'", line=t.line, col=t.col)
        if kind == "expr":
            raise UnknownReference(f"'{t.text}' is not an assignment", line=t.line, col=t.col)
        return NamedRef(t.text, t.pos)

    # ------------------------------------------------------------ brackets
    def label(self) -> str:
        if self.tok.kind in ("NAME", "OP"):
            return self.advance().text
        self.fail("a symbol name")

    def bracket(self):
        """``[ x |-> ..., ... ]``: a renaming iff every image is a bare name."""
        start = self.expect_punct("[")
        entries = []
        while not self.is_punct("]"):
            lhs = self.label()
            self.expect("|->", "'|->'")
            nxt = self.peek()
            if self.tok.kind in ("NAME", "OP") and (self.is_punct(",", nxt) or self.is_punct("]", nxt)):
                rhs = self.advance().text
            else:
                rhs = self.term()
            entries.append((lhs, rhs))
            if self.is_punct(","):
                self.advance()
            elif not self.is_punct("]"):
                self.fail("',' or ']'")
        self.advance()
        names = [k for k, _ in entries]
        if len(set(names)) != len(names):
            dup = next(k for k in names if names.count(k) > 1)
            raise ParseError(f"'{dup}' is mapped twice", line=start.line, col=start.col)
        if all(isinstance(v, str) for _, v in entries):
            return RawRenaming(tuple(entries), start.pos)
        fixed = tuple((k, RVar(v) if isinstance(v, str) else v) for k, v in entries)
        return RawAssignment(fixed, start.pos)

    def renaming_bracket(self) -> RawRenaming:
        t = self.tok
        b = self.bracket()
        if not isinstance(b, RawRenaming):
            raise ParseError("a renaming maps names to names only", line=t.line, col=t.col)
        return b

    # ------------------------------------------------------- declarations
    def decl_block(self) -> tuple:
        self.expect_punct("{")
        decls = []
        while not self.is_punct("}"):
            t = self.tok
            axiom = False
            if self.is_kw("axiom"):
                self.advance()
                axiom = True
            name = self.label()
            self.expect_punct(":")
            decls.append(RawDecl(name, self.term(), (t.line, t.col), axiom))
            if self.is_punct(";") or self.is_punct(","):
                self.advance()
            elif not self.is_punct("}"):
                self.fail("';' or '}'")
        self.advance()
        return tuple(decls)

    # --------------------------------------------------------------- terms
    def term(self):
        t = self.tok
        if self.is_punct("\\") or self.is_kw("fun"):
            self.advance()
            names = [self.expect("NAME", "a binder name").text]
            while self.tok.kind == "NAME":
                names.append(self.advance().text)
            annot = None
            if self.is_punct(":"):
                self.advance()
                annot = self.arrow_type()
            self.expect_punct(".")
            body = self.term()
            for x in reversed(names):
                body = RLam(x, annot, body, t.pos)
            return body
        if self.is_kw("forall"):
            self.advance()
            names = self.binder_names()
            self.expect_punct(":")
            dom = self.arrow_type()
            self.expect_punct(".")
            return RPi(tuple(names), dom, self.term(), t.pos)
        return self.arrow_type()

    def binder_names(self) -> list[str]:
        names = [self.expect("NAME", "a binder name").text]
        while self.tok.kind == "NAME" or self.is_punct(","):
            if self.is_punct(","):
                self.advance()
            names.append(self.expect("NAME", "a binder name").text)
        return names

    def arrow_type(self):
        t = self.tok
        left = self.eq_term()
        if self.tok.kind == "->":
            self.advance()
            return RArrow(left, self.term(), t.pos)
        return left

    def eq_term(self):
        t = self.tok
        left = self.infix(0)
        if self.tok.kind == "=":
            self.advance()
            right = self.infix(0)
            carrier = None
            if self.is_punct(":"):
                self.advance()
                carrier = self.application()
            return REq(left, right, carrier, t.pos)
        return left

    def infix(self, min_prec: int):
        left = self.application()
        while self.tok.kind == "OP" and op_precedence(self.tok.text) >= min_prec:
            op = self.advance()
            prec = op_precedence(op.text)
            right = self.infix(prec + 1)
            left = RApp(RApp(RVar(op.text, op.pos), left, op.pos), right, op.pos)
        return left

    def _atom_start(self) -> bool:
        t = self.tok
        return t.kind == "NAME" or self.is_punct("(") or self.is_kw("type")

    def application(self):
        if not self._atom_start():
            self.fail("a term")
        f = self.atom()
        while self._atom_start():
            a = self.atom()
            f = RApp(f, a, getattr(f, "pos", None))
        return f

    def _dependent_binder_ahead(self) -> bool:
        k = 1
        if self.peek(k).kind != "NAME":
            return False
        while self.peek(k).kind == "NAME":
            k += 1
        return self.is_punct(":", self.peek(k))

    def atom(self):
        t = self.tok
        if t.kind == "NAME":
            self.advance()
            return RVar(t.text, t.pos)
        if self.is_kw("type"):
            self.advance()
            return RType(t.pos)
        if self.is_punct("("):
            if self._dependent_binder_ahead():
                self.advance()
                names = []
                while self.tok.kind == "NAME":
                    names.append(self.advance().text)
                self.expect_punct(":")
                dom = self.term()
                self.expect_punct(")")
                self.expect("->", "'->' after a dependent binder")
                return RPi(tuple(names), dom, self.term(), t.pos)
            self.advance()
            inner = self.term()
            self.expect_punct(")")
            return inner
        self.fail("a term")


def parse_module(text: str) -> Module:
    return Parser(text).module()


def parse_expr(text: str, known: dict | None = None):
    """Parse a single expression; ``known`` maps names to definition kinds.

    Names not listed default to theory/view definitions so that free-standing
    expressions such as ``Magma || Pointed`` parse without a module.
    """
    p = _LenientParser(text, known or {})
    e = p.expr()
    if p.tok.kind != "EOF":
        p.fail("end of input")
    return e


def parse_term(text: str):
    p = Parser(text)
    t = p.term()
    if p.tok.kind != "EOF":
        p.fail("end of input")
    return t


class _LenientParser(Parser):
    def __init__(self, text, known):
        super().__init__(text, known)

    def primary(self):
        t = self.tok
        if t.kind == "NAME" and t.text not in self.known:
            self.known[t.text] = "expr"
        return super().primary()


# --------------------------------------------------------------------------
# printer

OR_LEVEL, SEQ_LEVEL, POSTFIX_LEVEL, PRIMARY_LEVEL = 0, 1, 2, 3


def _expr_level(e) -> int:
    if isinstance(e, CombineE) and e.r1 == EMPTY_RENAMING and e.r2 == EMPTY_RENAMING:
        return OR_LEVEL
    if isinstance(e, (SeqE, CombineE, MixinE)):
        return SEQ_LEVEL
    if isinstance(e, RenameE):
        return POSTFIX_LEVEL
    return PRIMARY_LEVEL


def show_renaming(r) -> str:
    if isinstance(r, NamedRef):
        return r.name
    if isinstance(r, RawRenaming):
        inner = ", ".join(f"{show_label(k)} |-> {show_label(v)}" for k, v in r.entries)
    else:
        inner = ", ".join(f"{show_label(k)} |-> {_show_image(v)}" for k, v in r.entries)
    return f"[{inner}]"


def _show_image(v) -> str:
    if isinstance(v, RVar):
        return show_label(v.name)
    return show_raw(v)


def show_decls(decls) -> str:
    if not decls:
        return "{ }"
    return "{ " + "; ".join(show_decl(d) for d in decls) + " }"


def show_expr(e, need: int = OR_LEVEL) -> str:
    text = _show_expr(e)
    return f"({text})" if _expr_level(e) < need else text


def _operand(e, r) -> str:
    return f"{show_expr(e, POSTFIX_LEVEL)} {show_renaming(r)}"


def _show_expr(e) -> str:
    if isinstance(e, EmptyE):
        return "Empty"
    if isinstance(e, RefE):
        return e.name
    if isinstance(e, TheoryE):
        return f"Theory {show_decls(e.decls)}"
    if isinstance(e, ExtendE):
        return f"extend {show_expr(e.base, POSTFIX_LEVEL)} by {show_decls(e.body)}"
    if isinstance(e, CombineE):
        if e.r1 == EMPTY_RENAMING and e.r2 == EMPTY_RENAMING:
            return f"{show_expr(e.a, OR_LEVEL)} || {show_expr(e.b, SEQ_LEVEL)}"
        return f"combine {_operand(e.a, e.r1)}, {_operand(e.b, e.r2)}"
    if isinstance(e, MixinE):
        return f"mixin {_operand(e.a, e.r1)}, {_operand(e.b, e.r2)}"
    if isinstance(e, ViewE):
        return (
            f"view {show_expr(e.source, POSTFIX_LEVEL)} as {show_expr(e.target, POSTFIX_LEVEL)}"
            f" via {show_renaming(e.assignment)}"
        )
    if isinstance(e, SeqE):
        return f"{show_expr(e.a, SEQ_LEVEL)} ; {show_expr(e.b, POSTFIX_LEVEL)}"
    if isinstance(e, RenameE):
        return f"{show_expr(e.a, POSTFIX_LEVEL)} {show_renaming(e.r)}"
    raise TypeError(f"not a combinator expression: {e!r}")


def show_definition(d: Definition) -> str:
    if isinstance(d.value, (RawRenaming, RawAssignment)):
        return f"{d.name} := {show_renaming(d.value)}"
    return f"{d.name} := {show_expr(d.value)}"


def show_module(m: Module) -> str:
    return "".join(show_definition(d) + "\n" for d in m.defs)
