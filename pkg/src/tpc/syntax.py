"""Kernel syntax for a small lambda-Pi calculus with an equality type former.

Bound variables are de Bruijn indices (``Bound(0)`` is the innermost binder).
Presentation symbols are referenced by name (``Sym``) and are never renamed
by alpha conversion.  Binder names survive only as printing hints; they are
excluded from equality so structural ``==`` is alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Union


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Bound:
    index: int


@dataclass(frozen=True)
class Lam:
    domain: "TypeExpr"
    body: "Term"
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class TAtom:
    family: str
    args: tuple = ()


@dataclass(frozen=True)
class TPi:
    domain: "TypeExpr"
    codomain: "TypeExpr"
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class TEq:
    carrier: "TypeExpr"
    lhs: "Term"
    rhs: "Term"


@dataclass(frozen=True)
class KType:
    pass


@dataclass(frozen=True)
class KPi:
    domain: "TypeExpr"
    codomain: "Kind"
    hint: str = field(default="x", compare=False)


Term = Union[Sym, Bound, Lam, App]
TypeExpr = Union[TAtom, TPi, TEq]
Kind = Union[KType, KPi]
Expr = Union[Term, TypeExpr, Kind]

TERM_CLASSES = (Sym, Bound, Lam, App)
TYPE_CLASSES = (TAtom, TPi, TEq)
KIND_CLASSES = (KType, KPi)


def is_term(e) -> bool:
    return isinstance(e, TERM_CLASSES)


def is_type(e) -> bool:
    return isinstance(e, TYPE_CLASSES)


def is_kind(e) -> bool:
    return isinstance(e, KIND_CLASSES)


def app(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def spine(e: Term) -> tuple[Term, list[Term]]:
    """Split ``f a1 ... an`` into ``(f, [a1, ..., an])``."""
    args = []
    while isinstance(e, App):
        args.append(e.arg)
        e = e.fun
    args.reverse()
    return e, args


def arrow(a: TypeExpr, b: TypeExpr) -> TPi:
    """Non-dependent function type; ``b`` is written without the extra binder."""
    return TPi(a, shift(b, 1), "_")


# --------------------------------------------------------------------------
# generic traversal

OnSym = Callable[[Sym, int], "Term"]
OnBound = Callable[[Bound, int], "Term"]
OnAtom = Callable[[str, tuple, int], "TypeExpr"]


def _walk(e, depth: int, on_sym: OnSym, on_bound: OnBound, on_atom: OnAtom, reduce: bool):
    if isinstance(e, Sym):
        return on_sym(e, depth)
    if isinstance(e, Bound):
        return on_bound(e, depth)
    if isinstance(e, App):
        f = _walk(e.fun, depth, on_sym, on_bound, on_atom, reduce)
        a = _walk(e.arg, depth, on_sym, on_bound, on_atom, reduce)
        if reduce and isinstance(f, Lam) and not isinstance(e.fun, Lam):
            # a redex created by the substitution itself: contract it
            return instantiate(f.body, a, reduce=True)
        return App(f, a)
    if isinstance(e, Lam):
        return Lam(
            _walk(e.domain, depth, on_sym, on_bound, on_atom, reduce),
            _walk(e.body, depth + 1, on_sym, on_bound, on_atom, reduce),
            e.hint,
        )
    if isinstance(e, TAtom):
        args = tuple(_walk(a, depth, on_sym, on_bound, on_atom, reduce) for a in e.args)
        return on_atom(e.family, args, depth)
    if isinstance(e, TPi):
        return TPi(
            _walk(e.domain, depth, on_sym, on_bound, on_atom, reduce),
            _walk(e.codomain, depth + 1, on_sym, on_bound, on_atom, reduce),
            e.hint,
        )
    if isinstance(e, TEq):
        return TEq(
            _walk(e.carrier, depth, on_sym, on_bound, on_atom, reduce),
            _walk(e.lhs, depth, on_sym, on_bound, on_atom, reduce),
            _walk(e.rhs, depth, on_sym, on_bound, on_atom, reduce),
        )
    if isinstance(e, KType):
        return e
    if isinstance(e, KPi):
        return KPi(
            _walk(e.domain, depth, on_sym, on_bound, on_atom, reduce),
            _walk(e.codomain, depth + 1, on_sym, on_bound, on_atom, reduce),
            e.hint,
        )
    raise TypeError(f"not kernel syntax: {e!r}")


def _keep_sym(s, depth):
    return s


def _keep_atom(family, args, depth):
    return TAtom(family, args)


def shift(e, d: int, cutoff: int = 0):
    """Add ``d`` to every bound index at or above ``cutoff`` (relative to binders)."""
    if d == 0:
        return e

    def on_bound(b, depth):
        return Bound(b.index + d) if b.index >= cutoff + depth else b

    return _walk(e, 0, _keep_sym, on_bound, _keep_atom, False)


def instantiate(body, arg: Term, reduce: bool = False):
    """Replace ``Bound(0)`` in ``body`` by ``arg`` and drop the binder."""

    def on_bound(b, depth):
        if b.index == depth:
            return shift(arg, depth)
        if b.index > depth:
            return Bound(b.index - 1)
        return b

    return _walk(body, 0, _keep_sym, on_bound, _keep_atom, reduce)


def substitute(e, assignment: Mapping[str, object], reduce: bool = False):
    """Simultaneous substitution of closed images for presentation symbols.

    Term symbols map to terms and type-family symbols map to (possibly
    partially applied) type atoms.  Images are closed, so no capture can
    occur.  With ``reduce`` the result is hereditary: beta redexes created by
    plugging a lambda into head position are contracted on the spot, while
    redexes already present in ``e`` are left alone.
    """
    if not assignment:
        return e

    def on_sym(s, depth):
        img = assignment.get(s.name)
        if img is None:
            return s
        if not is_term(img):
            raise TypeError(f"type image {img!r} substituted for term symbol {s.name}")
        return img

    def on_atom(family, args, depth):
        img = assignment.get(family)
        if img is None:
            return TAtom(family, args)
        if not isinstance(img, TAtom):
            raise TypeError(f"term image {img!r} substituted for type symbol {family}")
        return TAtom(img.family, img.args + args)

    return _walk(e, 0, on_sym, _keep_bound, on_atom, reduce)


def _keep_bound(b, depth):
    return b


def rename_symbols(e, mapping: Mapping[str, str]):
    """Rename presentation symbols (both term and type symbols)."""
    if not mapping:
        return e

    def on_sym(s, depth):
        n = mapping.get(s.name)
        return s if n is None else Sym(n)

    def on_atom(family, args, depth):
        return TAtom(mapping.get(family, family), args)

    return _walk(e, 0, on_sym, _keep_bound, on_atom, False)


def free_symbols(e, acc: set | None = None) -> set:
    """Names of all presentation symbols occurring in ``e``."""
    out = set() if acc is None else acc

    def on_sym(s, depth):
        out.add(s.name)
        return s

    def on_atom(family, args, depth):
        out.add(family)
        return None

    _walk(e, 0, on_sym, _keep_bound, on_atom, False)
    return out


def has_loose(e, index: int = 0) -> bool:
    """Does ``Bound(index)`` (relative to the root) occur in ``e``?"""
    found = False

    def on_bound(b, depth):
        nonlocal found
        if b.index == index + depth:
            found = True
        return b

    _walk(e, 0, _keep_sym, on_bound, _keep_atom, False)
    return found


def is_closed(e) -> bool:
    ok = True

    def on_bound(b, depth):
        nonlocal ok
        if b.index >= depth:
            ok = False
        return b

    _walk(e, 0, _keep_sym, on_bound, _keep_atom, False)
    return ok


def beta_nf(e):
    """Full beta normal form (terminates on well-typed input)."""
    if isinstance(e, App):
        f = beta_nf(e.fun)
        if isinstance(f, Lam):
            return beta_nf(instantiate(f.body, e.arg))
        return App(f, beta_nf(e.arg))
    if isinstance(e, Lam):
        return Lam(beta_nf(e.domain), beta_nf(e.body), e.hint)
    if isinstance(e, TAtom):
        return TAtom(e.family, tuple(beta_nf(a) for a in e.args)) if e.args else e
    if isinstance(e, TPi):
        return TPi(beta_nf(e.domain), beta_nf(e.codomain), e.hint)
    if isinstance(e, TEq):
        return TEq(beta_nf(e.carrier), beta_nf(e.lhs), beta_nf(e.rhs))
    if isinstance(e, KPi):
        return KPi(beta_nf(e.domain), beta_nf(e.codomain), e.hint)
    return e
