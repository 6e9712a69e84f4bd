"""Views (typed substitutions between presentations) and embeddings.

A view ``Γ → Δ`` assigns to every symbol of ``Γ`` a closed ``Δ``-term (or,
for a type-family symbol, a type expression).  An embedding is a view whose
images are bare symbols given by an injective renaming ``π``; it remembers
its decomposition into a renaming of the source followed by an extension.
"""

from __future__ import annotations

import os
from typing import Mapping

from .errors import (
    ExtraAssignment,
    KindMismatch,
    MissingAssignment,
    NotAnEmbedding,
    SourceTargetMismatch,
    TypeMismatch,
)
from .kernel import check_kind, check_type, conv, kind_conv, type_image_conv
from .presentations import Declaration, ExtensionBody, Presentation
from .printer import show
from .syntax import Sym, TAtom, is_kind, is_term, rename_symbols, substitute

Assignment = Mapping[str, object]

#: When true, every composite is re-typechecked (slow; for debugging).
DEBUG = os.environ.get("TPC_DEBUG", "") not in ("", "0")


class Renaming:
    """A finite map of names, read as the identity outside its support."""

    __slots__ = ("mapping",)

    def __init__(self, mapping: Mapping[str, str] | None = None):
        self.mapping = {k: v for k, v in (mapping or {}).items() if k != v}

    def __call__(self, name: str) -> str:
        return self.mapping.get(name, name)

    @property
    def support(self) -> set[str]:
        return set(self.mapping)

    def is_identity(self) -> bool:
        return not self.mapping

    def restrict(self, names) -> "Renaming":
        names = set(names)
        return Renaming({k: v for k, v in self.mapping.items() if k in names})

    def __eq__(self, other) -> bool:
        return isinstance(other, Renaming) and self.mapping == other.mapping

    def __hash__(self) -> int:
        return hash(frozenset(self.mapping.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{k} |-> {v}" for k, v in sorted(self.mapping.items()))
        return f"Renaming[{inner}]"


def symbol_image(decl: Declaration, name: str):
    """The bare-symbol image of ``decl`` under a renaming to ``name``."""
    return TAtom(name) if decl.is_type_symbol else Sym(name)


class View:
    """A typed assignment ``source → target``.  Build with :func:`check_view`."""

    __slots__ = ("source", "target", "assignment")

    def __init__(self, source: Presentation, target: Presentation, assignment: Assignment):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)

    def __call__(self, name: str):
        return self.assignment[name]

    @property
    def view(self) -> "View":
        return View(self.source, self.target, self.assignment)

    def __eq__(self, other) -> bool:
        if not isinstance(other, View):
            return NotImplemented
        return (
            self.assignment == other.assignment
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, frozenset(self.assignment.items())))

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{d.name} |-> {show(self.assignment[d.name])}" for d in self.source.decls
        )
        return f"View[{inner}]"


class Embedding(View):
    """A view induced by an injective renaming, with its decomposition."""

    __slots__ = ("pi", "renamed_base", "extension")

    def __init__(self, source, target, assignment, pi: Renaming, renamed_base, extension):
        super().__init__(source, target, assignment)
        self.pi = pi
        self.renamed_base = renamed_base
        self.extension = extension

    @property
    def decomposition(self) -> tuple:
        return self.renamed_base, self.extension

    def __repr__(self) -> str:
        return f"Embedding({self.pi!r}, +{self.extension.names})"


# --------------------------------------------------------------------------
# construction helpers


def rename_presentation(p: Presentation, pi: Renaming) -> Presentation:
    """Rename declarations and every occurrence (no validity checks)."""
    return Presentation(rename_decls(p.decls, pi.restrict(p.classifiers)), _trusted=True)


def rename_decls(decls, pi: Renaming) -> tuple:
    """Rename names and occurrences with the whole of ``pi``."""
    m = pi.mapping
    return tuple(Declaration(pi(d.name), rename_symbols(d.classifier, m)) for d in decls)


def embedding_from_renaming(source: Presentation, target: Presentation, pi: Renaming) -> Embedding:
    """Trusted constructor: ``target`` must contain ``π·source`` verbatim."""
    pi = pi.restrict(source.classifiers)
    assignment = {d.name: symbol_image(d, pi(d.name)) for d in source.decls}
    renamed = rename_presentation(source, pi)
    image = set(renamed.classifiers)
    ext = ExtensionBody(tuple(d for d in target.decls if d.name not in image))
    return Embedding(source, target, assignment, pi, renamed, ext)


# --------------------------------------------------------------------------
# operations


def check_view(source: Presentation, target: Presentation, a: Assignment) -> View:
    """Morphism formation, processed left to right over the source."""
    for name in a:
        if name not in source.classifiers:
            raise ExtraAssignment(f"'{name}' is not a symbol of the source")
    for d in source.decls:
        if d.name not in a:
            raise MissingAssignment(f"no image given for '{d.name}'")
        img = a[d.name]
        expected = substitute(d.classifier, a)
        if d.is_type_symbol:
            if is_term(img):
                raise KindMismatch(f"type symbol '{d.name}' is assigned the term {show(img)}")
            got = check_kind(target, img)
            if not kind_conv(target, got, expected):
                raise KindMismatch(
                    f"image of '{d.name}' has kind {show(got)} but {show(expected)} was expected"
                )
        else:
            if not is_term(img):
                raise TypeMismatch(f"term symbol '{d.name}' is assigned the type {show(img)}")
            try:
                check_type(target, img, expected)
            except TypeMismatch as exc:
                raise TypeMismatch(f"image of '{d.name}' does not have type {show(expected)}: {exc}") from exc
    return View(source, target, a)


def compose(v: View, w: View) -> View:
    """Diagrammatic composite: ``v : Γ → Δ`` then ``w : Δ → Φ``."""
    if v.target != w.source:
        raise SourceTargetMismatch("the target of the first view is not the source of the second")
    if isinstance(v, Embedding) and isinstance(w, Embedding):
        pi = Renaming({x: w.pi(v.pi(x)) for x in v.source.classifiers})
        result = embedding_from_renaming(v.source, w.target, pi)
    else:
        assignment = {x: substitute(img, w.assignment) for x, img in v.assignment.items()}
        result = View(v.source, w.target, assignment)
    if DEBUG:
        check_view(result.source, result.target, result.assignment)
    return result


def equiv(u: View, v: View) -> bool:
    """Pointwise convertibility of two parallel views."""
    if u.source != v.source or u.target != v.target:
        raise SourceTargetMismatch("equivalence needs parallel views")
    tgt = u.target
    for d in u.source.decls:
        a, b = u.assignment[d.name], v.assignment[d.name]
        if a == b:
            continue
        if d.is_type_symbol:
            if not type_image_conv(tgt, a, b):
                return False
        else:
            ta = substitute(d.classifier, u.assignment)
            tb = substitute(d.classifier, v.assignment)
            if not conv(tgt, a, ta, b, tb):
                return False
    return True


def as_embedding(v: View) -> Embedding:
    """Recognise an embedding: bare, injective images with renamed classifiers."""
    if isinstance(v, Embedding):
        return v
    mapping = {}
    for d in v.source.decls:
        img = v.assignment[d.name]
        if d.is_type_symbol:
            if not (isinstance(img, TAtom) and not img.args):
                raise NotAnEmbedding(f"image of '{d.name}' is {show(img)}, not a bare symbol")
            mapping[d.name] = img.family
        else:
            if not isinstance(img, Sym):
                raise NotAnEmbedding(f"image of '{d.name}' is {show(img)}, not a bare symbol")
            mapping[d.name] = img.name
    seen: dict = {}
    for x, y in mapping.items():
        if y in seen:
            raise NotAnEmbedding(f"'{seen[y]}' and '{x}' are both sent to '{y}'")
        seen[y] = x
    pi = Renaming(mapping)
    renamed = rename_presentation(v.source, pi)
    for d in renamed.decls:
        tcls = v.target.classifiers.get(d.name)
        if tcls != d.classifier:
            raise NotAnEmbedding(
                f"'{d.name}' in the target is not the renamed declaration {show(d.classifier)}"
            )
    return embedding_from_renaming(v.source, v.target, pi)


def identity(p: Presentation) -> Embedding:
    return embedding_from_renaming(p, p, Renaming())


def recompose(e: Embedding) -> Presentation:
    """Rebuild the target from the decomposition (rename, then extend)."""
    from .presentations import append_extension

    return append_extension(e.renamed_base, e.extension)


def same_view(u: View, v: View) -> bool:
    """Syntactic equality of views (alpha on images, canonical on endpoints)."""
    return View.__eq__(u, v) is True
