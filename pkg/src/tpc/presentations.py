"""Theory presentations: well-formed, ordered lists of declarations.

A :class:`Presentation` keeps its declarations in construction order.  Two
presentations are *equal* when their canonical orders agree up to alpha, which
is how construction results (defined only up to reordering) are compared.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DuplicateName, IllFormedClassifier, TpcError
from .kernel import check_classifier
from .printer import show, to_raw
from .surface import show_label, show_raw
from .syntax import free_symbols, is_kind


@dataclass(frozen=True)
class Declaration:
    name: str
    classifier: object  # Kind for type symbols, TypeExpr for term symbols

    @property
    def is_type_symbol(self) -> bool:
        return is_kind(self.classifier)

    def __repr__(self) -> str:
        return f"Declaration({self.name!r}, {show(self.classifier)!r})"


class Presentation:
    """An immutable, validated context.  Build one with :func:`wf_check`."""

    __slots__ = ("decls", "classifiers", "_canonical", "_hash")

    def __init__(self, decls: Iterable[Declaration] = (), _trusted: bool = False):
        decls = tuple(decls)
        self.decls = decls
        self.classifiers = {d.name: d.classifier for d in decls}
        self._canonical = None
        self._hash = None
        if not _trusted and len(self.classifiers) != len(decls):
            raise DuplicateName(f"duplicate declaration in {[d.name for d in decls]}")

    # mapping-like access used by the kernel
    def __contains__(self, name) -> bool:
        return name in self.classifiers

    def __getitem__(self, name):
        return self.classifiers[name]

    def __len__(self) -> int:
        return len(self.decls)

    def __iter__(self):
        return iter(self.decls)

    @property
    def names(self) -> list[str]:
        return [d.name for d in self.decls]

    def declaration(self, name: str) -> Declaration:
        return Declaration(name, self.classifiers[name])

    def canonical(self) -> "Presentation":
        if self._canonical is None:
            self._canonical = canonical_order(self)
        return self._canonical

    def canonical_key(self) -> tuple:
        return tuple((d.name, d.classifier) for d in self.canonical().decls)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Presentation):
            return NotImplemented
        if self is other:
            return True
        if set(self.classifiers) != set(other.classifiers):
            return False
        return self.canonical_key() == other.canonical_key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.canonical_key())
        return self._hash

    def __repr__(self) -> str:
        inner = "; ".join(f"{d.name} : {show(d.classifier)}" for d in self.decls)
        return f"Presentation{{{inner}}}"


EMPTY = Presentation(())


@dataclass(frozen=True)
class ExtensionBody:
    """Declarations meant to be appended to some base (not checkable alone)."""

    decls: tuple

    @property
    def names(self) -> list[str]:
        return [d.name for d in self.decls]

    def __len__(self) -> int:
        return len(self.decls)


def _check_decl(ctx_classifiers: dict, decl: Declaration) -> None:
    if decl.name in ctx_classifiers:
        raise DuplicateName(f"'{decl.name}' is already declared")
    try:
        check_classifier(ctx_classifiers, decl.classifier)
    except TpcError as exc:
        if isinstance(exc, IllFormedClassifier):
            raise
        raise IllFormedClassifier(
            f"classifier of '{decl.name}' is ill formed: {exc}", line=exc.line, col=exc.col
        ) from exc


def wf_check(raw: Sequence[Declaration]) -> Presentation:
    """The judgement ``Γ wfctx``: check each declaration in its prefix."""
    seen: dict = {}
    for d in raw:
        _check_decl(seen, d)
        seen[d.name] = d.classifier
    return Presentation(raw, _trusted=True)


def symbols(p: Presentation) -> set[str]:
    return set(p.classifiers)


def append_extension(base: Presentation, ext: ExtensionBody) -> Presentation:
    """``base ⋊ ext``, checked declaration by declaration."""
    seen = dict(base.classifiers)
    for d in ext.decls:
        _check_decl(seen, d)
        seen[d.name] = d.classifier
    return Presentation(base.decls + tuple(ext.decls), _trusted=True)


def check_extension(base: Presentation, decls: Sequence[Declaration]) -> ExtensionBody:
    append_extension(base, ExtensionBody(tuple(decls)))
    return ExtensionBody(tuple(decls))


def canonical_order(p: Presentation) -> Presentation:
    """Topological sort by classifier dependencies; ties by code point."""
    names = set(p.classifiers)
    deps = {d.name: free_symbols(d.classifier) & names for d in p.decls}
    users: dict = {n: [] for n in names}
    indegree = {}
    for n, ds in deps.items():
        indegree[n] = len(ds)
        for m in ds:
            users[m].append(n)
    heap = [n for n, k in indegree.items() if k == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        n = heapq.heappop(heap)
        out.append(Declaration(n, p.classifiers[n]))
        for u in users[n]:
            indegree[u] -= 1
            if indegree[u] == 0:
                heapq.heappush(heap, u)
    if len(out) != len(p.decls):  # pragma: no cover - wf presentations are acyclic
        raise IllFormedClassifier("cyclic dependencies among declarations")
    return Presentation(out, _trusted=True)


def is_prefix_ordered(p: Presentation) -> bool:
    """Is every declaration's classifier closed over the declarations before it?"""
    seen: set = set()
    for d in p.decls:
        if not free_symbols(d.classifier) <= seen:
            return False
        seen.add(d.name)
    return True


def format_decl(p: Presentation, d: Declaration) -> str:
    return f"{show_label(d.name)} : {show_raw(to_raw(d.classifier, ctx=p))}"


def flatten_text(p: Presentation) -> str:
    """One ``name : classifier`` line per declaration, canonical order."""
    canon = p.canonical()
    return "".join(format_decl(canon, d) + "\n" for d in canon.decls)
