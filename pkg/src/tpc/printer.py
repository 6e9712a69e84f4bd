"""Rendering kernel syntax as surface text.

Binder hints are reused where possible; a hint that would capture a free
symbol of the body, or shadow an enclosing binder, gets primes appended.
"""

from __future__ import annotations

from .surface import RApp, RArrow, REq, RLam, RPi, RType, RVar, show_raw
from .syntax import (
    App,
    Bound,
    KPi,
    KType,
    Lam,
    Sym,
    TAtom,
    TEq,
    TPi,
    free_symbols,
    has_loose,
    shift,
)


def _fresh(hint: str, avoid) -> str:
    base = hint if hint and hint != "_" else "x"
    name = base
    while name in avoid:
        name += "'"
    return name


def to_raw(e, names=(), ctx=None, local_types=()):
    """Convert kernel syntax to raw syntax.

    ``names`` are the display names of enclosing binders (innermost last).
    When a context ``ctx`` is given, equation carriers that coincide with
    the type inferred for the left-hand side are omitted.
    """
    return _Conv(ctx).go(e, list(names), list(local_types))


class _Conv:
    def __init__(self, ctx):
        self.ctx = ctx

    def _bind(self, hint, body, names):
        avoid = set(n for n in names if n is not None) | free_symbols(body)
        return _fresh(hint, avoid)

    def go(self, e, names, tys):
        if isinstance(e, Sym):
            return RVar(e.name)
        if isinstance(e, Bound):
            if e.index >= len(names):
                return RVar(f"#{e.index}")
            return RVar(names[-1 - e.index])
        if isinstance(e, App):
            return RApp(self.go(e.fun, names, tys), self.go(e.arg, names, tys))
        if isinstance(e, Lam):
            x = self._bind(e.hint, e.body, names)
            return RLam(
                x,
                self.go(e.domain, names, tys),
                self.go(e.body, names + [x], tys + [e.domain]),
            )
        if isinstance(e, TAtom):
            out = RVar(e.family)
            for a in e.args:
                out = RApp(out, self.go(a, names, tys))
            return out
        if isinstance(e, (TPi, KPi)):
            return self._pi(e, names, tys)
        if isinstance(e, TEq):
            lhs = self.go(e.lhs, names, tys)
            rhs = self.go(e.rhs, names, tys)
            carrier = None if self._carrier_inferable(e, tys) else self.go(e.carrier, names, tys)
            return REq(lhs, rhs, carrier)
        if isinstance(e, KType):
            return RType()
        raise TypeError(f"not kernel syntax: {e!r}")

    def _carrier_inferable(self, e, tys) -> bool:
        if self.ctx is None:
            return True
        from .kernel import infer_type

        try:
            return infer_type(self.ctx, e.lhs, tuple(tys)) == e.carrier
        except Exception:
            return False

    def _pi(self, e, names, tys):
        if not has_loose(e.codomain, 0):
            dom = self.go(e.domain, names, tys)
            cod = self.go(e.codomain, names + [None], tys + [e.domain])
            return RArrow(dom, cod)
        # group consecutive dependent binders over the same domain
        binders = []
        cur = e
        dom = e.domain
        while True:
            x = self._bind(cur.hint, cur.codomain, names)
            binders.append(x)
            names = names + [x]
            tys = tys + [cur.domain]
            nxt = cur.codomain
            if (
                type(nxt) is type(e)
                and has_loose(nxt.codomain, 0)
                and nxt.domain == shift(cur.domain, 1)
            ):
                cur = nxt
                continue
            break
        # the domain is printed in the scope outside all grouped binders
        outer = names[: len(names) - len(binders)]
        outer_tys = tys[: len(tys) - len(binders)]
        return RPi(tuple(binders), self.go(dom, outer, outer_tys), self.go(cur.codomain, names, tys))


def show(e, ctx=None, names=()) -> str:
    """Surface text of a kernel term, type or kind."""
    return show_raw(to_raw(e, names, ctx))
