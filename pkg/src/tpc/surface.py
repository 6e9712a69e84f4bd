"""Raw (unresolved) surface syntax for terms, types and kinds, plus its printer.

Raw trees come straight from the parser and are resolved against a
presentation by :mod:`tpc.resolve`.  Infix use of an operator symbol is
represented as ordinary application of that symbol, so ``x * y`` is
``RApp(RApp(RVar('*'), x), y)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

Pos = Optional[tuple]  # (line, col)

OPERATOR_CHARS = set("*+-/<>=~^&|!@#$%") | set("∘×·⋅⊕⊗∗∙⊙⊛⊞⊠∧∨≤≥≈≡⊑⊒⊓⊔÷±∓⁻")
IDENT_RE = re.compile(r"^[\w][\w']*(?:_[" + re.escape("".join(sorted(OPERATOR_CHARS))) + r"]+)?$")

RESERVED_WORDS = {
    "Empty", "Theory", "extend", "by", "combine", "mixin", "view", "as", "via",
    "forall", "fun", "type", "axiom", "extended_by",
}
RESERVED_OPS = {"->", "|->", "=", "||", "--"}


def is_operator_name(name: str) -> bool:
    return bool(name) and all(c in OPERATOR_CHARS for c in name)


def is_plain_identifier(name: str) -> bool:
    return bool(IDENT_RE.match(name)) and name not in RESERVED_WORDS


def needs_quotes(name: str) -> bool:
    """Names that must be backtick-quoted when used in prefix position."""
    return not is_plain_identifier(name)


# Binding strength of infix operators: higher binds tighter.
_OP_TABLE = {"*": 7, "/": 7, "×": 7, "∘": 7, "·": 7, "+": 6, "-": 6, "⊕": 6}


def op_precedence(op: str) -> int:
    return _OP_TABLE.get(op, 5)


@dataclass(frozen=True)
class RVar:
    name: str
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class RApp:
    fun: "Raw"
    arg: "Raw"
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class RLam:
    name: str
    annot: Optional["Raw"]
    body: "Raw"
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class RPi:
    names: tuple
    domain: "Raw"
    body: "Raw"
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class RArrow:
    domain: "Raw"
    codomain: "Raw"
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class REq:
    lhs: "Raw"
    rhs: "Raw"
    carrier: Optional["Raw"] = None
    pos: Pos = field(default=None, compare=False)


@dataclass(frozen=True)
class RType:
    pos: Pos = field(default=None, compare=False)


Raw = Union[RVar, RApp, RLam, RPi, RArrow, REq, RType]


@dataclass(frozen=True)
class RawDecl:
    """``name : classifier`` as written; ``axiom`` marks a proof-like symbol."""

    name: str
    classifier: Raw
    pos: Pos = field(default=None, compare=False)
    axiom: bool = field(default=False, compare=False)


def raw_pos(r) -> Pos:
    return getattr(r, "pos", None)


# --------------------------------------------------------------------------
# printing

LAM, ARROW, EQ, INFIX_BASE, APP, ATOM = 0, 1, 2, 10, 30, 31


def _infix_parts(r):
    """``(op, lhs, rhs)`` if ``r`` is a saturated binary operator application."""
    if isinstance(r, RApp) and isinstance(r.fun, RApp) and isinstance(r.fun.fun, RVar):
        op = r.fun.fun.name
        if is_operator_name(op):
            return op, r.fun.arg, r.arg
    return None


def _level(r) -> int:
    if isinstance(r, (RLam, RPi)):
        return LAM
    if isinstance(r, RArrow):
        return ARROW
    if isinstance(r, REq):
        return EQ
    parts = _infix_parts(r)
    if parts is not None:
        return INFIX_BASE + op_precedence(parts[0])
    if isinstance(r, RApp):
        return APP
    return ATOM


def show_name(name: str) -> str:
    return f"`{name}`" if needs_quotes(name) else name


def show_raw(r, need: int = LAM) -> str:
    text = _show(r)
    return f"({text})" if _level(r) < need else text


def _show(r) -> str:
    if isinstance(r, RVar):
        return show_name(r.name)
    if isinstance(r, RType):
        return "type"
    if isinstance(r, RLam):
        if r.annot is None:
            return f"\\{r.name}. {show_raw(r.body, LAM)}"
        return f"\\{r.name}:{show_raw(r.annot, ARROW)}. {show_raw(r.body, LAM)}"
    if isinstance(r, RPi):
        names = " ".join(r.names)
        return f"forall {names} : {show_raw(r.domain, ARROW)}. {show_raw(r.body, LAM)}"
    if isinstance(r, RArrow):
        return f"{show_raw(r.domain, EQ)} -> {show_raw(r.codomain, ARROW)}"
    if isinstance(r, REq):
        text = f"{show_raw(r.lhs, INFIX_BASE)} = {show_raw(r.rhs, INFIX_BASE)}"
        if r.carrier is not None:
            text += f" : {show_raw(r.carrier, APP)}"
        return text
    parts = _infix_parts(r)
    if parts is not None:
        op, lhs, rhs = parts
        level = INFIX_BASE + op_precedence(op)
        # non-associative printing: same-level operands get parentheses
        return f"{show_raw(lhs, level + 1)} {op} {show_raw(rhs, level + 1)}"
    if isinstance(r, RApp):
        return f"{show_raw(r.fun, APP)} {show_raw(r.arg, ATOM)}"
    raise TypeError(f"not raw syntax: {r!r}")


def show_label(name: str) -> str:
    """A name in label position (declaration or renaming entry): operators stay bare."""
    return name if is_operator_name(name) else show_name(name)


def show_decl(d: RawDecl) -> str:
    prefix = "axiom " if d.axiom else ""
    return f"{prefix}{show_label(d.name)} : {show_raw(d.classifier)}"
