"""Scope resolution and bidirectional elaboration of raw terms.

Raw identifiers are resolved innermost-binder first, then against the
presentation.  Whether an identifier denotes a term or a type family is
decided by its declaration, so the same raw tree can become a ``Sym`` or a
``TAtom``.  Lambdas without annotations take their domain from the expected
type.
"""

from __future__ import annotations

from .errors import IllFormedClassifier, KindMismatch, TpcError, TypeMismatch, UnboundName
from .kernel import type_conv
from .printer import show
from .surface import RApp, RArrow, REq, RLam, RPi, RType, RVar, raw_pos, show_raw
from .syntax import App, Bound, KPi, KType, Lam, Sym, TAtom, TEq, TPi, instantiate, is_kind, shift


def _at(exc: TpcError, r) -> TpcError:
    pos = raw_pos(r)
    if pos is not None:
        exc.at(*pos)
    return exc


def ends_in_type(r) -> bool:
    """Does the raw classifier denote a kind (``... -> type``)?"""
    while isinstance(r, (RArrow, RPi)):
        r = r.codomain if isinstance(r, RArrow) else r.body
    return isinstance(r, RType)


class Resolver:
    """Resolve raw syntax against a context mapping names to classifiers."""

    def __init__(self, ctx):
        self.ctx = ctx
        self.classifiers = getattr(ctx, "classifiers", ctx)

    # ----------------------------------------------------------------- names
    @staticmethod
    def _local(name, scope):
        for i in range(len(scope) - 1, -1, -1):
            if scope[i][0] == name:
                idx = len(scope) - 1 - i
                return idx, shift(scope[i][1], idx + 1)
        return None

    @staticmethod
    def _tys(scope):
        return tuple(t for _, t in scope)

    # ----------------------------------------------------------------- terms
    def term(self, r, scope=(), expected=None):
        """Return ``(term, type)``; ``expected`` switches to checking mode."""
        scope = tuple(scope)
        try:
            if isinstance(r, RLam):
                return self._lam(r, scope, expected)
            t, ty = self._infer(r, scope)
            if expected is not None and not type_conv(self.ctx, ty, expected, self._tys(scope)):
                raise TypeMismatch(
                    f"'{show_raw(r)}' has type {show(ty)} but {show(expected)} was expected"
                )
            return t, ty
        except TpcError as exc:
            raise _at(exc, r)

    def _lam(self, r, scope, expected):
        if expected is not None and not isinstance(expected, TPi):
            raise TypeMismatch(f"a function '{show_raw(r)}' was given where {show(expected)} was expected")
        if r.annot is not None:
            dom = self.type(r.annot, scope)
            if expected is not None and not type_conv(self.ctx, dom, expected.domain, self._tys(scope)):
                raise TypeMismatch(
                    f"binder '{r.name}' annotated {show(dom)} but {show(expected.domain)} was expected"
                )
        elif expected is not None:
            dom = expected.domain
        else:
            raise TypeMismatch(f"cannot infer the type of binder '{r.name}'; add an annotation")
        inner = scope + ((r.name, dom),)
        body, bty = self.term(r.body, inner, expected.codomain if expected is not None else None)
        return Lam(dom, body, r.name), TPi(dom, bty, r.name)

    def _infer(self, r, scope):
        if isinstance(r, RVar):
            hit = self._local(r.name, scope)
            if hit is not None:
                if hit[1] is None:
                    raise UnboundName(f"unbound name '{r.name}'")
                return Bound(hit[0]), hit[1]
            cls = self.classifiers.get(r.name)
            if cls is None:
                raise UnboundName(f"unbound name '{r.name}'")
            if is_kind(cls):
                raise KindMismatch(f"type symbol '{r.name}' used where a term is expected")
            return Sym(r.name), cls
        if isinstance(r, RApp):
            f, fty = self.term(r.fun, scope)
            if not isinstance(fty, TPi):
                raise TypeMismatch(f"'{show_raw(r.fun)}' has type {show(fty)} and cannot be applied")
            a, _ = self.term(r.arg, scope, fty.domain)
            return App(f, a), instantiate(fty.codomain, a)
        raise TypeMismatch(f"expected a term, found '{show_raw(r)}'")

    # ----------------------------------------------------------------- types
    def type(self, r, scope=(), want_type_kind=True):
        """Resolve a type expression; by default it must have kind ``type``."""
        scope = tuple(scope)
        try:
            t, k = self._type(r, scope)
            if want_type_kind and not isinstance(k, KType):
                raise KindMismatch(f"'{show_raw(r)}' has kind {show(k)}, not type")
            return t
        except TpcError as exc:
            raise _at(exc, r)

    def type_with_kind(self, r, scope=()):
        try:
            return self._type(r, tuple(scope))
        except TpcError as exc:
            raise _at(exc, r)

    def _type(self, r, scope):
        if isinstance(r, RArrow):
            dom = self.type(r.domain, scope)
            cod = self.type(r.codomain, scope + ((None, dom),))
            return TPi(dom, cod, "_"), KType()
        if isinstance(r, RPi):
            dom = self.type(r.domain, scope)
            return self._pi_chain(r.names, dom, r.body, scope, self.type, TPi), KType()
        if isinstance(r, REq):
            if r.carrier is not None:
                carrier = self.type(r.carrier, scope)
                lhs, _ = self.term(r.lhs, scope, carrier)
            else:
                lhs, carrier = self.term(r.lhs, scope)
            rhs, _ = self.term(r.rhs, scope, carrier)
            return TEq(carrier, lhs, rhs), KType()
        if isinstance(r, RType):
            raise KindMismatch("'type' is a kind, not a type")
        # a family applied to terms
        head, args = r, []
        while isinstance(head, RApp):
            args.append(head.arg)
            head = head.fun
        args.reverse()
        if not isinstance(head, RVar):
            raise KindMismatch(f"expected a type, found '{show_raw(r)}'")
        if self._local(head.name, scope) is not None:
            raise KindMismatch(f"bound variable '{head.name}' used where a type is expected")
        kind = self.classifiers.get(head.name)
        if kind is None:
            raise _at(UnboundName(f"unbound name '{head.name}'"), head)
        if not is_kind(kind):
            raise KindMismatch(f"term symbol '{head.name}' used where a type is expected")
        out = []
        for a in args:
            if not isinstance(kind, KPi):
                raise KindMismatch(f"type family '{head.name}' applied to too many arguments")
            t, _ = self.term(a, scope, kind.domain)
            out.append(t)
            kind = instantiate(kind.codomain, t)
        return TAtom(head.name, tuple(out)), kind

    def _pi_chain(self, names, dom, body, scope, resolve_body, ctor):
        # every binder in the group shares the (outer) domain, shifted inward
        inner = scope
        doms = []
        for i, x in enumerate(names):
            d = shift(dom, i)
            doms.append(d)
            inner = inner + ((x, d),)
        out = resolve_body(body, inner)
        for x, d in zip(reversed(names), reversed(doms)):
            out = ctor(d, out, x)
        return out

    # ----------------------------------------------------------------- kinds
    def kind(self, r, scope=()):
        scope = tuple(scope)
        try:
            if isinstance(r, RType):
                return KType()
            if isinstance(r, RArrow):
                dom = self.type(r.domain, scope)
                return KPi(dom, self.kind(r.codomain, scope + ((None, dom),)), "_")
            if isinstance(r, RPi):
                dom = self.type(r.domain, scope)
                return self._pi_chain(r.names, dom, r.body, scope, self.kind, KPi)
            raise KindMismatch(f"expected a kind, found '{show_raw(r)}'")
        except TpcError as exc:
            raise _at(exc, r)

    def classifier(self, r):
        """A declaration's classifier: a kind if it ends in ``type``, else a type."""
        try:
            if ends_in_type(r):
                return self.kind(r)
            return self.type(r)
        except TpcError as exc:
            wrapped = IllFormedClassifier(str(exc), line=exc.line, col=exc.col)
            wrapped.cause = exc
            raise wrapped from exc


def resolve_term(ctx, r, expected=None):
    return Resolver(ctx).term(r, (), expected)[0]


def resolve_type(ctx, r):
    return Resolver(ctx).type(r)


def resolve_type_image(ctx, r, expected_kind):
    """Resolve a view image for a type symbol, checking its kind."""
    from .kernel import kind_conv

    t, k = Resolver(ctx).type_with_kind(r)
    if not kind_conv(ctx, k, expected_kind):
        raise _at(KindMismatch(f"'{show_raw(r)}' has kind {show(k)} but {show(expected_kind)} was expected"), r)
    return t

