"""The four theory constructions and their mediating views.

* :func:`rename` and :func:`extend` produce an embedding into the new theory.
* :func:`combine` is the pushout of two embeddings over a shared base, with
  user renamings that must satisfy the renaming condition.
* :func:`mixin` transports the extension part of an embedding along an
  arbitrary view (a Cartesian lift).

Each combine/mixin record carries a ``mediate`` method producing the unique
view out of the result that commutes with a given cospan.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    NameCollision,
    NotDisjoint,
    NotInjective,
    RenamingConditionViolated,
    RenamingOutOfScope,
    SharedBaseMismatch,
    SourceTargetMismatch,
    SquareDoesNotCommute,
)
from .morphisms import (
    DEBUG,
    Embedding,
    Renaming,
    View,
    as_embedding,
    check_view,
    compose,
    embedding_from_renaming,
    equiv,
    rename_decls,
    rename_presentation,
    symbol_image,
)
from .presentations import Declaration, ExtensionBody, Presentation, append_extension, wf_check
from .syntax import rename_symbols, substitute


def _as_renaming(r) -> Renaming:
    if r is None:
        return Renaming()
    if isinstance(r, Renaming):
        return r
    return Renaming(dict(r))


def complete_renaming(r, names: Iterable[str]) -> Renaming:
    """Restrict ``r`` to ``names`` and check it is injective there.

    Reports NameCollision when a name is sent onto an unrenamed name and
    NotInjective when two renamed names share an image.
    """
    names = list(names)
    pi = _as_renaming(r).restrict(names)
    owner: dict = {}
    for n in sorted(names):
        img = pi(n)
        if img in owner:
            other = owner[img]
            if other not in pi.mapping or n not in pi.mapping:
                renamed = n if n in pi.mapping else other
                raise NameCollision(f"renaming '{renamed}' to '{img}' collides with an existing symbol")
            raise NotInjective(f"'{other}' and '{n}' are both renamed to '{img}'")
        owner[img] = n
    return pi


def _embedding(u) -> Embedding:
    return u if isinstance(u, Embedding) else as_embedding(u)


# --------------------------------------------------------------------------
# rename / extend


@dataclass(frozen=True, eq=False)
class RenameResult:
    pres: Presentation
    embed: Embedding


@dataclass(frozen=True, eq=False)
class ExtendResult:
    pres: Presentation
    embed: Embedding


def rename(p: Presentation, r) -> RenameResult:
    pi = complete_renaming(r, p.names)
    pres = rename_presentation(p, pi)
    return RenameResult(pres, embedding_from_renaming(p, pres, pi))


def extend(p: Presentation, body) -> ExtendResult:
    if not isinstance(body, ExtensionBody):
        body = ExtensionBody(tuple(body))
    pres = append_extension(p, body)
    return ExtendResult(pres, embedding_from_renaming(p, pres, Renaming()))


# --------------------------------------------------------------------------
# combine


def renaming_condition_violation(
    u_left: Embedding, u_right: Embedding, pi_left: Renaming, pi_right: Renaming
):
    """First ``(x, y)`` in canonical order breaking the renaming condition.

    The condition: ``π_left(x) = π_right(y)`` exactly when ``x`` and ``y`` are
    the images of one base symbol.  Returns ``None`` when it holds.
    """
    base_pairs = {(u_left.pi(z), u_right.pi(z)) for z in u_left.source.classifiers}
    right_names = u_right.target.canonical().names
    right_images = [(y, pi_right(y)) for y in right_names]
    for x in u_left.target.canonical().names:
        px = pi_left(x)
        for y, py in right_images:
            if (px == py) != ((x, y) in base_pairs):
                return x, y
    return None


@dataclass(frozen=True, eq=False)
class CombineResult:
    pres: Presentation
    embed_left: Embedding
    embed_right: Embedding
    diag: Embedding
    u_left: Embedding
    u_right: Embedding
    pi_left: Renaming
    pi_right: Renaming

    def mediate(self, w_left: View, w_right: View) -> View:
        return mediate_combine(self, w_left, w_right)


def combine(u_left, u_right, pi_left=None, pi_right=None) -> CombineResult:
    u_left, u_right = _embedding(u_left), _embedding(u_right)
    if u_left.source != u_right.source:
        raise SharedBaseMismatch("the two embeddings do not start from the same theory")
    delta, phi = u_left.target, u_right.target
    pl = complete_renaming(pi_left, delta.names)
    pr = complete_renaming(pi_right, phi.names)
    bad = renaming_condition_violation(u_left, u_right, pl, pr)
    if bad is not None:
        x, y = bad
        if pl(x) == pr(y):
            msg = (
                f"'{x}' and '{y}' would both be named '{pl(x)}' but do not come from the same "
                "base symbol; supply a renaming"
            )
        else:
            msg = f"'{x}' and '{y}' come from the same base symbol but are named '{pl(x)}' and '{pr(y)}'"
        raise RenamingConditionViolated(msg, x, y)

    gamma = u_left.source
    base_map = Renaming({z: pl(u_left.pi(z)) for z in gamma.classifiers})
    lam0 = rename_presentation(gamma, base_map)
    lam_d = rename_decls(u_left.extension.decls, pl)
    lam_p = rename_decls(u_right.extension.decls, pr)
    pres = wf_check(lam0.decls + lam_d + lam_p)

    embed_left = embedding_from_renaming(delta, pres, pl)
    embed_right = embedding_from_renaming(phi, pres, pr)
    diag = compose(u_left, embed_left)
    return CombineResult(pres, embed_left, embed_right, diag, u_left, u_right, pl, pr)


def _require_cospan(w_left: View, w_right: View, left_src, right_src) -> None:
    if w_left.source != left_src or w_right.source != right_src:
        raise SourceTargetMismatch("the cospan does not start at the construction's inputs")
    if w_left.target != w_right.target:
        raise SourceTargetMismatch("the cospan's two views have different targets")


def mediate_combine(res: CombineResult, w_left: View, w_right: View) -> View:
    _require_cospan(w_left, w_right, res.u_left.target, res.u_right.target)
    if not equiv(compose(res.u_left, w_left), compose(res.u_right, w_right)):
        raise SquareDoesNotCommute("the two views disagree on the shared base")
    a = {res.pi_right(y): img for y, img in w_right.assignment.items()}
    # the left view wins on base symbols, where both sides are equivalent
    a.update({res.pi_left(x): img for x, img in w_left.assignment.items()})
    return check_view(res.pres, w_left.target, a)


# --------------------------------------------------------------------------
# mixin


@dataclass(frozen=True, eq=False)
class MixinResult:
    pres: Presentation
    embed_left: Embedding
    view_right: View
    diag: View
    v_left: View
    u_right: Embedding
    pi_left: Renaming
    pi_right: Renaming

    def mediate(self, w_left: View, w_right: View) -> View:
        return mediate_mixin(self, w_left, w_right)


def mixin(v_left: View, u_right, pi_left=None, pi_right=None) -> MixinResult:
    u_right = _embedding(u_right)
    if v_left.source != u_right.source:
        raise SharedBaseMismatch("the view and the embedding do not start from the same theory")
    delta, phi = v_left.target, u_right.target
    ext_names = u_right.extension.names
    raw_right = _as_renaming(pi_right)
    stray = sorted(set(raw_right.mapping) - set(ext_names))
    if stray:
        raise RenamingOutOfScope(
            f"the right renaming may only rename extension symbols, not '{stray[0]}'"
        )
    pl = complete_renaming(pi_left, delta.names)
    pr = complete_renaming(raw_right, ext_names)
    left_names = {pl(x) for x in delta.classifiers}
    for y in sorted(ext_names):
        if pr(y) in left_names:
            raise NotDisjoint(f"'{pr(y)}' is both a renamed left symbol and an extension symbol")

    # π′: base images travel through the view then π_left; new symbols through π_right
    gamma_of = {u_right.pi(z): z for z in u_right.source.classifiers}
    lmap = pl.mapping
    prime: dict = {}
    for d in phi.decls:
        if d.name in gamma_of:
            prime[d.name] = rename_symbols(v_left.assignment[gamma_of[d.name]], lmap)
        else:
            prime[d.name] = symbol_image(d, pr(d.name))
    lam1 = rename_presentation(delta, pl)
    lam2 = tuple(
        Declaration(pr(d.name), substitute(d.classifier, prime, reduce=True))
        for d in u_right.extension.decls
    )
    pres = wf_check(lam1.decls + lam2)

    embed_left = embedding_from_renaming(delta, pres, pl)
    view_right = View(phi, pres, prime)
    if DEBUG:
        check_view(phi, pres, prime)
    diag = compose(v_left, embed_left)
    return MixinResult(pres, embed_left, view_right, diag, v_left, u_right, pl, pr)


def mediate_mixin(res: MixinResult, w_left: View, w_right: View) -> View:
    _require_cospan(w_left, w_right, res.v_left.target, res.u_right.target)
    if not equiv(compose(res.v_left, w_left), compose(res.u_right, w_right)):
        raise SquareDoesNotCommute("the two views disagree on the shared base")
    a = {res.pi_left(x): img for x, img in w_left.assignment.items()}
    for y in res.u_right.extension.names:
        a[res.pi_right(y)] = w_right.assignment[y]
    return check_view(res.pres, w_left.target, a)


def renaming_from(mapping: Mapping[str, str] | None) -> Renaming:
    return _as_renaming(mapping)
