"""Typing, kinding, beta-eta normalization and convertibility.

A *context* here is any mapping from symbol names to classifiers (a kind for
type-family symbols, a type for term symbols); :class:`tpc.presentations.
Presentation` provides one.  ``locals`` is the tuple of types of the enclosing
binders, innermost last, each written relative to its own position.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .errors import IllTyped, KindMismatch, TypeMismatch, UnboundName
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
    beta_nf,
    instantiate,
    is_kind,
    shift,
    spine,
)

Locals = Sequence  # of TypeExpr


def _classifiers(ctx) -> Mapping:
    return getattr(ctx, "classifiers", ctx)


def _show(e) -> str:
    from .printer import show

    return show(e)


def local_type(locals: Locals, index: int):
    """Type of ``Bound(index)`` expressed at the current depth."""
    if index >= len(locals):
        raise UnboundName(f"dangling bound variable #{index}")
    return shift(locals[-1 - index], index + 1)


def _lookup(ctx, name: str):
    cls = _classifiers(ctx).get(name)
    if cls is None:
        raise UnboundName(f"unbound name '{name}'")
    return cls


# --------------------------------------------------------------------------
# typing and kinding


def infer_type(ctx, e, locals: Locals = ()):
    """Return the type of term ``e``; raise if ``e`` is ill typed."""
    locals = tuple(locals)
    if isinstance(e, Sym):
        cls = _lookup(ctx, e.name)
        if is_kind(cls):
            raise KindMismatch(f"type symbol '{e.name}' used where a term is expected")
        return cls
    if isinstance(e, Bound):
        return local_type(locals, e.index)
    if isinstance(e, Lam):
        require_type_kind(ctx, e.domain, locals)
        body_ty = infer_type(ctx, e.body, locals + (e.domain,))
        return TPi(e.domain, body_ty, e.hint)
    if isinstance(e, App):
        fty = infer_type(ctx, e.fun, locals)
        if not isinstance(fty, TPi):
            raise TypeMismatch(
                f"'{_show(e.fun)}' has type {_show(fty)} and cannot be applied"
            )
        check_type(ctx, e.arg, fty.domain, locals)
        return instantiate(fty.codomain, e.arg)
    raise TypeMismatch(f"expected a term, found {_show(e)}")


def check_type(ctx, e, expected, locals: Locals = ()) -> None:
    got = infer_type(ctx, e, locals)
    if not type_conv(ctx, got, expected, locals):
        raise TypeMismatch(
            f"'{_show(e)}' has type {_show(got)} but {_show(expected)} was expected"
        )


def check_kind(ctx, t, locals: Locals = ()):
    """Return the kind of type expression ``t``."""
    locals = tuple(locals)
    if isinstance(t, TAtom):
        kind = _lookup(ctx, t.family)
        if not is_kind(kind):
            raise KindMismatch(f"term symbol '{t.family}' used where a type is expected")
        for a in t.args:
            if not isinstance(kind, KPi):
                raise KindMismatch(f"type family '{t.family}' applied to too many arguments")
            check_type(ctx, a, kind.domain, locals)
            kind = instantiate(kind.codomain, a)
        return kind
    if isinstance(t, TPi):
        require_type_kind(ctx, t.domain, locals)
        require_type_kind(ctx, t.codomain, locals + (t.domain,))
        return KType()
    if isinstance(t, TEq):
        require_type_kind(ctx, t.carrier, locals)
        check_type(ctx, t.lhs, t.carrier, locals)
        check_type(ctx, t.rhs, t.carrier, locals)
        return KType()
    raise KindMismatch(f"expected a type, found {_show(t)}")


def require_type_kind(ctx, t, locals: Locals = ()) -> None:
    k = check_kind(ctx, t, locals)
    if not isinstance(k, KType):
        raise KindMismatch(f"'{_show(t)}' has kind {_show(k)}, not type")


def check_kind_wf(ctx, k, locals: Locals = ()) -> None:
    """The judgement ``k : □``."""
    locals = tuple(locals)
    if isinstance(k, KType):
        return
    if isinstance(k, KPi):
        require_type_kind(ctx, k.domain, locals)
        check_kind_wf(ctx, k.codomain, locals + (k.domain,))
        return
    raise KindMismatch(f"expected a kind, found {_show(k)}")


def check_classifier(ctx, cls, locals: Locals = ()) -> None:
    """Well-formedness of a declaration's classifier (kind or type)."""
    if is_kind(cls):
        check_kind_wf(ctx, cls, locals)
    else:
        require_type_kind(ctx, cls, locals)


# --------------------------------------------------------------------------
# normalization


def normalize(ctx, e, ty, locals: Locals = ()):
    """Beta-normal eta-long form of ``e`` at type ``ty``."""
    return _eta(ctx, beta_nf(e), ty, tuple(locals))


def _eta(ctx, e, ty, locals):
    if isinstance(ty, TPi):
        dom = normalize_type(ctx, ty.domain, locals)
        if isinstance(e, Lam):
            body, hint = e.body, e.hint
        else:
            body, hint = App(shift(e, 1), Bound(0)), ty.hint
        return Lam(dom, _eta(ctx, body, ty.codomain, locals + (ty.domain,)), hint)
    head, args = spine(e)
    if isinstance(head, Sym):
        hty = _lookup(ctx, head.name)
    elif isinstance(head, Bound):
        hty = local_type(locals, head.index)
    else:  # pragma: no cover - beta normal neutral terms have a variable head
        raise IllTyped(f"unexpected head {_show(head)} in normal form")
    out = head
    for a in args:
        if not isinstance(hty, TPi):
            raise IllTyped(f"'{_show(e)}' applies a non-function")
        out = App(out, _eta(ctx, a, hty.domain, locals))
        hty = instantiate(hty.codomain, a)
    return out


def normalize_type(ctx, t, locals: Locals = ()):
    """Normalize all terms embedded in a type expression."""
    locals = tuple(locals)
    if isinstance(t, TAtom):
        if not t.args:
            return t
        kind = _lookup(ctx, t.family)
        args = []
        for a in t.args:
            if not isinstance(kind, KPi):
                raise IllTyped(f"type family '{t.family}' over-applied")
            args.append(normalize(ctx, a, kind.domain, locals))
            kind = instantiate(kind.codomain, a)
        return TAtom(t.family, tuple(args))
    if isinstance(t, TPi):
        return TPi(
            normalize_type(ctx, t.domain, locals),
            normalize_type(ctx, t.codomain, locals + (t.domain,)),
            t.hint,
        )
    if isinstance(t, TEq):
        return TEq(
            normalize_type(ctx, t.carrier, locals),
            normalize(ctx, t.lhs, t.carrier, locals),
            normalize(ctx, t.rhs, t.carrier, locals),
        )
    raise IllTyped(f"expected a type, found {_show(t)}")


def normalize_kind(ctx, k, locals: Locals = ()):
    locals = tuple(locals)
    if isinstance(k, KType):
        return k
    return KPi(
        normalize_type(ctx, k.domain, locals),
        normalize_kind(ctx, k.codomain, locals + (k.domain,)),
        k.hint,
    )


def type_conv(ctx, a, b, locals: Locals = ()) -> bool:
    if a == b:
        return True
    return normalize_type(ctx, a, locals) == normalize_type(ctx, b, locals)


def kind_conv(ctx, a, b, locals: Locals = ()) -> bool:
    if a == b:
        return True
    return normalize_kind(ctx, a, locals) == normalize_kind(ctx, b, locals)


def conv(ctx, s1, t1, s2, t2, locals: Locals = ()) -> bool:
    """Convertibility of ``s1 : t1`` and ``s2 : t2`` (beta-eta)."""
    try:
        check_type(ctx, s1, t1, locals)
        check_type(ctx, s2, t2, locals)
    except (TypeMismatch, KindMismatch, UnboundName) as exc:
        raise IllTyped(f"conv precondition failed: {exc}") from exc
    if not type_conv(ctx, t1, t2, locals):
        return False
    return normalize(ctx, s1, t1, locals) == normalize(ctx, s2, t1, locals)


def type_image_conv(ctx, a, b) -> bool:
    """Compare two images of a type-family symbol (type expressions of equal kind)."""
    if a == b:
        return True
    ka, kb = check_kind(ctx, a), check_kind(ctx, b)
    if not kind_conv(ctx, ka, kb):
        return False
    return normalize_type(ctx, a) == normalize_type(ctx, b)
