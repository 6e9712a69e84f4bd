"""Semantics and type system of combinator expressions.

Three partial semantics are computed for an expression ``e``:

``sem_c(e)``
    the theory presentation it denotes;
``sem_e(e)``
    an embedding into that theory (from the base it was built on);
``sem_b(e)``
    a view, defined for everything with ``sem_e`` plus ``view`` and ``mixin``.

:meth:`Elaborator.infer` assigns the most informative type (``Emb`` before
``ViewT`` before ``Th``), checking each rule's side conditions before any
construction runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from . import combinators as C
from .errors import (
    DuplicateName,
    ExtraAssignment,
    MissingAssignment,
    NotDisjoint,
    RenamingConditionViolated,
    RenamingOutOfScope,
    SharedBaseMismatch,
    SourceTargetMismatch,
    SpecificationError,
    TpcError,
    TpcTypeError,
    UnknownDefinition,
)
from .frontend import (
    CombineE,
    Definition,
    EmptyE,
    ExtendE,
    MixinE,
    Module,
    NamedRef,
    RawAssignment,
    RawRenaming,
    RefE,
    RenameE,
    SeqE,
    TheoryE,
    ViewE,
    parse_module,
)
from .morphisms import (
    Embedding,
    Renaming,
    View,
    as_embedding,
    check_view,
    compose,
    embedding_from_renaming,
    identity,
)
from .presentations import EMPTY, Declaration, ExtensionBody, Presentation
from .resolve import Resolver, resolve_type_image
from .surface import RVar
from .syntax import Sym, TAtom, substitute

# --------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class Th:
    def __str__(self) -> str:
        return "Th"


@dataclass(frozen=True)
class Emb:
    a: Presentation
    b: Presentation

    def __str__(self) -> str:
        return "Emb"


@dataclass(frozen=True)
class ViewT:
    a: Presentation
    b: Presentation

    def __str__(self) -> str:
        return "View"


@dataclass(frozen=True)
class PermT:
    excluded: frozenset = frozenset()


@dataclass(frozen=True)
class AssignT:
    a: Presentation
    b: Presentation


TpcType = Union[Th, Emb, ViewT, PermT, AssignT]


def as_view_type(t) -> Optional[ViewT]:
    """Subsumption: every embedding type is a view type."""
    if isinstance(t, Emb):
        return ViewT(t.a, t.b)
    if isinstance(t, ViewT):
        return t
    return None


@dataclass(frozen=True, eq=False)
class ElabResult:
    as_theory: Optional[Presentation] = None
    as_embedding: Optional[Embedding] = None
    as_view: Optional[View] = None
    type: Optional[TpcType] = None
    construction: object = field(default=None, compare=False)


# --------------------------------------------------------------------------
# argument checking


def resolve_decls(base: Presentation, decls) -> ExtensionBody:
    """Resolve raw declarations one by one in the growing context."""
    ctx = dict(base.classifiers)
    out = []
    for rd in decls:
        if rd.name in ctx:
            pos = rd.pos or (None, None)
            raise DuplicateName(f"'{rd.name}' is already declared", line=pos[0], col=pos[1])
        try:
            cls = Resolver(ctx).classifier(rd.classifier)
        except TpcError as exc:
            if rd.pos:
                exc.at(*rd.pos)
            raise
        out.append(Declaration(rd.name, cls))
        ctx[rd.name] = cls
    return ExtensionBody(tuple(out))


def check_renaming_arg(r, names) -> Renaming:
    """Validate a renaming over ``names``: identity completion, injectivity."""
    return C.complete_renaming(r, names)


def check_assignment_arg(raw, src: Presentation, tgt: Presentation) -> View:
    """Resolve an assignment's images in the target and check the view.

    Symbols left unassigned are sent to the same-named target symbol when one
    of the right sort exists.
    """
    if isinstance(raw, RawRenaming):
        entries = [(k, RVar(v)) for k, v in raw.entries]
    else:
        entries = list(raw.entries)
    given = dict(entries)
    pos = raw.pos or (None, None)
    for name in given:
        if name not in src.classifiers:
            raise ExtraAssignment(f"'{name}' is not a symbol of the source", line=pos[0], col=pos[1])
    a: dict = {}
    for d in src.decls:
        expected = substitute(d.classifier, a)
        if d.name in given:
            r = given[d.name]
            if d.is_type_symbol:
                a[d.name] = resolve_type_image(tgt, r, expected)
            else:
                a[d.name], _ = Resolver(tgt).term(r, (), expected)
            continue
        tcls = tgt.classifiers.get(d.name)
        if tcls is None or d.is_type_symbol != Declaration(d.name, tcls).is_type_symbol:
            raise MissingAssignment(f"no image given for '{d.name}'", line=pos[0], col=pos[1])
        a[d.name] = TAtom(d.name) if d.is_type_symbol else Sym(d.name)
    try:
        return check_view(src, tgt, a)
    except TpcError as exc:
        raise exc.at(*pos)


# --------------------------------------------------------------------------
# elaborator


@dataclass
class Env:
    results: dict = field(default_factory=dict)  # name -> ElabResult
    renamings: dict = field(default_factory=dict)  # name -> RawRenaming
    assignments: dict = field(default_factory=dict)  # name -> RawAssignment | RawRenaming
    order: list = field(default_factory=list)
    elaborator: object = field(default=None, repr=False)

    def __getitem__(self, name: str) -> ElabResult:
        return self.results[name]

    def __contains__(self, name: str) -> bool:
        return name in self.results


def _pos(e):
    p = getattr(e, "pos", None)
    return p if p else (None, None)


def _located(exc: TpcError, e) -> TpcError:
    line, col = _pos(e)
    return exc.at(line, col)


class Elaborator:
    def __init__(self, env: Env | None = None):
        self.env = env or Env()
        self._memo: dict = {}

    # ------------------------------------------------------------- helpers
    def _cached(self, key, fn):
        if key in self._memo:
            return self._memo[key]
        value = fn()
        self._memo[key] = value
        return value

    def _ref(self, e: RefE) -> ElabResult:
        res = self.env.results.get(e.name)
        if res is None:
            line, col = _pos(e)
            raise UnknownDefinition(f"'{e.name}' is not defined", line=line, col=col)
        return res

    def renaming(self, r) -> Renaming:
        if isinstance(r, NamedRef):
            raw = self.env.renamings.get(r.name)
            if raw is None:
                raise UnknownDefinition(f"'{r.name}' is not a renaming", line=_pos(r)[0], col=_pos(r)[1])
            r = raw
        return Renaming(r.as_dict())

    def assignment(self, a):
        if isinstance(a, NamedRef):
            raw = self.env.assignments.get(a.name) or self.env.renamings.get(a.name)
            if raw is None:
                raise UnknownDefinition(f"'{a.name}' is not an assignment", line=_pos(a)[0], col=_pos(a)[1])
            return raw
        return a

    # ---------------------------------------------------------- constructions
    def _theory(self, e: TheoryE) -> Presentation:
        def build():
            body = resolve_decls(EMPTY, e.decls)
            return Presentation(body.decls, _trusted=True)

        return self._cached(("theory", e), build)

    def _extend(self, e: ExtendE) -> C.ExtendResult:
        def build():
            base = self.sem_c(e.base)
            return C.extend(base, resolve_decls(base, e.body))

        return self._cached(("extend", e), build)

    def _rename(self, e: RenameE) -> C.RenameResult:
        return self._cached(("rename", e), lambda: C.rename(self.sem_c(e.a), self.renaming(e.r)))

    def _combine(self, e: CombineE) -> C.CombineResult:
        def build():
            try:
                return C.combine(
                    self.sem_e(e.a), self.sem_e(e.b), self.renaming(e.r1), self.renaming(e.r2)
                )
            except TpcError as exc:
                raise _located(exc, e)

        return self._cached(("combine", e), build)

    def _mixin(self, e: MixinE) -> C.MixinResult:
        def build():
            try:
                return C.mixin(
                    self.sem_b(e.a), self.sem_e(e.b), self.renaming(e.r1), self.renaming(e.r2)
                )
            except TpcError as exc:
                raise _located(exc, e)

        return self._cached(("mixin", e), build)

    def _view(self, e: ViewE) -> View:
        def build():
            return check_assignment_arg(self.assignment(e.assignment), self.sem_c(e.source), self.sem_c(e.target))

        return self._cached(("view", e), build)

    def _seq(self, e: SeqE) -> View:
        def build():
            try:
                return compose(self.sem_b(e.a), self.sem_b(e.b))
            except TpcError as exc:
                raise _located(exc, e)

        return self._cached(("seq", e), build)

    # -------------------------------------------------------------- semantics
    def sem_c(self, e) -> Presentation:
        if isinstance(e, EmptyE):
            return EMPTY
        if isinstance(e, TheoryE):
            return self._theory(e)
        if isinstance(e, ExtendE):
            return self._extend(e).pres
        if isinstance(e, CombineE):
            return self._combine(e).pres
        if isinstance(e, MixinE):
            return self._mixin(e).pres
        if isinstance(e, ViewE):
            raise _located(SpecificationError("a view does not denote a theory"), e)
        if isinstance(e, SeqE):
            return self._seq(e).target
        if isinstance(e, RenameE):
            return self._rename(e).pres
        if isinstance(e, RefE):
            res = self._ref(e)
            if res.as_theory is None:
                raise _located(SpecificationError(f"'{e.name}' does not denote a theory"), e)
            return res.as_theory
        raise TypeError(f"not a combinator expression: {e!r}")

    def sem_e(self, e) -> Embedding:
        if isinstance(e, EmptyE):
            return identity(EMPTY)
        if isinstance(e, TheoryE):
            return self._cached(
                ("theory-emb", e), lambda: embedding_from_renaming(EMPTY, self._theory(e), Renaming())
            )
        if isinstance(e, ExtendE):
            return self._extend(e).embed
        if isinstance(e, CombineE):
            return self._combine(e).diag
        if isinstance(e, (MixinE, ViewE)):
            what = "mixin" if isinstance(e, MixinE) else "view"
            raise _located(SpecificationError(f"a {what} does not denote an embedding"), e)
        if isinstance(e, SeqE):
            def build():
                try:
                    return compose(self.sem_e(e.a), self.sem_e(e.b))
                except TpcError as exc:
                    raise _located(exc, e)

            return self._cached(("seq-emb", e), build)
        if isinstance(e, RenameE):
            return self._rename(e).embed
        if isinstance(e, RefE):
            res = self._ref(e)
            if res.as_embedding is None:
                raise _located(SpecificationError(f"'{e.name}' does not denote an embedding"), e)
            return res.as_embedding
        raise TypeError(f"not a combinator expression: {e!r}")

    def sem_b(self, e) -> View:
        if isinstance(e, ViewE):
            return self._view(e)
        if isinstance(e, MixinE):
            return self._mixin(e).diag
        if isinstance(e, SeqE):
            return self._seq(e)
        if isinstance(e, RefE):
            res = self._ref(e)
            if res.as_view is None:
                raise _located(SpecificationError(f"'{e.name}' does not denote a view"), e)
            return res.as_view
        return self.sem_e(e)

    def denotes_theory(self, e) -> bool:
        if isinstance(e, ViewE):
            return False
        if isinstance(e, RefE):
            return self._ref(e).as_theory is not None
        return True

    # ----------------------------------------------------------- type system
    def infer(self, e) -> TpcType:
        return self._cached(("type", e), lambda: self._infer(e))

    def _need_theory(self, e, rule: str) -> Presentation:
        self.infer(e)
        if not self.denotes_theory(e):
            raise _located(TpcTypeError(rule, "this operand must be a theory, not a bare view"), e)
        return self.sem_c(e)

    def _need_emb(self, e, rule: str) -> Emb:
        t = self.infer(e)
        if not isinstance(t, Emb):
            raise _located(TpcTypeError(rule, "this operand must be an embedding"), e)
        return t

    def _need_view(self, e, rule: str) -> ViewT:
        t = as_view_type(self.infer(e))
        if t is None:
            raise _located(TpcTypeError(rule, "this operand must be a view or an embedding"), e)
        return t

    def _infer(self, e) -> TpcType:
        if isinstance(e, EmptyE):
            return Emb(EMPTY, EMPTY)
        if isinstance(e, TheoryE):
            return Emb(EMPTY, self._theory(e))
        if isinstance(e, ExtendE):
            base = self._need_theory(e.base, "extend")
            # the extension is resolved (fresh names, stepwise kinding) in the base
            return Emb(base, self._extend(e).pres)
        if isinstance(e, RenameE):
            base = self._need_theory(e.a, "rename")
            try:
                check_renaming_arg(self.renaming(e.r), base.names)
            except TpcError as exc:
                raise _located(exc, e)
            return Emb(base, self._rename(e).pres)
        if isinstance(e, CombineE):
            return self._infer_combine(e)
        if isinstance(e, MixinE):
            return self._infer_mixin(e)
        if isinstance(e, ViewE):
            src = self._need_theory(e.source, "view")
            tgt = self._need_theory(e.target, "view")
            self._view(e)
            return ViewT(src, tgt)
        if isinstance(e, SeqE):
            ta, tb = self._need_view(e.a, "composition"), self._need_view(e.b, "composition")
            if ta.b != tb.a:
                raise _located(
                    SourceTargetMismatch("the left operand's target is not the right operand's source"), e
                )
            if isinstance(self.infer(e.a), Emb) and isinstance(self.infer(e.b), Emb):
                return Emb(ta.a, tb.b)
            return ViewT(ta.a, tb.b)
        if isinstance(e, RefE):
            res = self._ref(e)
            return res.type if res.type is not None else Th()
        raise TypeError(f"not a combinator expression: {e!r}")

    def _infer_combine(self, e: CombineE) -> Emb:
        ta, tb = self._need_emb(e.a, "combine"), self._need_emb(e.b, "combine")
        if ta.a != tb.a:
            raise _located(SharedBaseMismatch("the two operands are built on different bases"), e)
        ua, ub = self.sem_e(e.a), self.sem_e(e.b)
        try:
            pl = check_renaming_arg(self.renaming(e.r1), ta.b.names)
            pr = check_renaming_arg(self.renaming(e.r2), tb.b.names)
        except TpcError as exc:
            raise _located(exc, e)
        bad = C.renaming_condition_violation(ua, ub, pl, pr)
        if bad is not None:
            x, y = bad
            raise _located(
                RenamingConditionViolated(
                    f"'{x}' (left) and '{y}' (right) violate the renaming condition", x, y
                ),
                e,
            )
        return Emb(ta.a, self._combine(e).pres)

    def _infer_mixin(self, e: MixinE) -> ViewT:
        ta = self._need_view(e.a, "mixin")
        tb = self._need_emb(e.b, "mixin")
        if ta.a != tb.a:
            raise _located(SharedBaseMismatch("the view and the embedding start from different theories"), e)
        ub = self.sem_e(e.b)
        ext = ub.extension.names
        r2 = self.renaming(e.r2)
        stray = sorted(set(r2.mapping) - set(ext))
        if stray:
            raise _located(RenamingOutOfScope(f"'{stray[0]}' is not an extension symbol"), e)
        try:
            pl = check_renaming_arg(self.renaming(e.r1), ta.b.names)
            pr = check_renaming_arg(r2, ext)
        except TpcError as exc:
            raise _located(exc, e)
        clash = sorted({pl(x) for x in ta.b.names} & {pr(y) for y in ext})
        if clash:
            raise _located(NotDisjoint(f"'{clash[0]}' is produced by both sides"), e)
        return ViewT(ta.a, self._mixin(e).pres)

    # ------------------------------------------------------------ definitions
    def elaborate_expr(self, e) -> ElabResult:
        t = self.infer(e)
        theory = self.sem_c(e) if self.denotes_theory(e) else None
        emb = self.sem_e(e) if isinstance(t, Emb) else None
        view = self.sem_b(e) if as_view_type(t) is not None else None
        construction = None
        if isinstance(e, CombineE):
            construction = self._combine(e)
        elif isinstance(e, MixinE):
            construction = self._mixin(e)
        elif isinstance(e, ExtendE):
            construction = self._extend(e)
        elif isinstance(e, RenameE):
            construction = self._rename(e)
        if isinstance(e, RefE):
            construction = self._ref(e).construction
        return ElabResult(theory, emb, view, t, construction)

    def define(self, d: Definition) -> Optional[ElabResult]:
        env = self.env
        if d.name in env.results or d.name in env.renamings or d.name in env.assignments:
            from .errors import DuplicateDefinition

            line, col = _pos(d)
            raise DuplicateDefinition(f"'{d.name}' is already defined", line=line, col=col)
        env.order.append(d.name)
        if isinstance(d.value, RawRenaming):
            env.renamings[d.name] = d.value
            return None
        if isinstance(d.value, RawAssignment):
            env.assignments[d.name] = d.value
            return None
        res = self.elaborate_expr(d.value)
        env.results[d.name] = res
        return res


# --------------------------------------------------------------------------
# theory graph


EDGE_KINDS = ("inclusion", "renaming", "embedding", "view")


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    kind: str
    label: str = field(compare=False)  # first definition that contributed the edge
    morphism: object = field(compare=False, repr=False, default=None)

    @property
    def is_embedding(self) -> bool:
        return self.kind != "view"


@dataclass
class DiagramGraph:
    nodes: list = field(default_factory=list)  # names, in definition order
    presentations: dict = field(default_factory=dict)  # name -> Presentation
    aliases: dict = field(default_factory=dict)  # definition name -> node name
    edges: list = field(default_factory=list)
    by_presentation: dict = field(default_factory=dict, repr=False)

    def node_of(self, p: Presentation) -> Optional[str]:
        return self.by_presentation.get(p)

    def add_node(self, name: str, p: Presentation) -> str:
        existing = self.by_presentation.get(p)
        if existing is not None:
            self.aliases[name] = existing
            return existing
        self.by_presentation[p] = name
        self.nodes.append(name)
        self.presentations[name] = p
        self.aliases[name] = name
        return name

    def add_edge(self, morphism, label: str) -> Optional[Edge]:
        src, dst = self.node_of(morphism.source), self.node_of(morphism.target)
        if src is None or dst is None:
            return None
        edge = Edge(src, dst, classify(morphism), label, morphism)
        if edge not in self.edges:
            self.edges.append(edge)
        return edge

    def sorted_edges(self) -> list:
        index = {n: i for i, n in enumerate(self.nodes)}
        return sorted(
            self.edges,
            key=lambda e: (index[e.source], index[e.target], EDGE_KINDS.index(e.kind), e.label),
        )

    def adjacency(self, kinds=EDGE_KINDS) -> set:
        return {(e.source, e.target, e.kind) for e in self.edges if e.kind in kinds}


def classify(morphism) -> str:
    try:
        emb = morphism if isinstance(morphism, Embedding) else as_embedding(morphism)
    except TpcError:
        return "view"
    if emb.pi.is_identity():
        return "inclusion"
    if not emb.extension.decls:
        return "renaming"
    return "embedding"


def _edges_for(elab: Elaborator, d: Definition, res: ElabResult) -> list:
    """The morphisms a top-level definition contributes to the graph."""
    e = d.value
    c = res.construction
    if isinstance(e, (ExtendE, RenameE)):
        return [c.embed]
    if isinstance(e, CombineE):
        return [c.embed_left, c.embed_right]
    if isinstance(e, MixinE):
        return [c.embed_left, c.view_right]
    if isinstance(e, (ViewE, SeqE)):
        return [res.as_view]
    return []


def elaborate(module: Module) -> tuple:
    """Elaborate every definition in order; return ``(env, graph)``."""
    elab = Elaborator()
    elab.env.elaborator = elab
    graph = DiagramGraph()
    for d in module.defs:
        res = elab.define(d)
        if res is None:
            continue
        if res.as_theory is not None:
            graph.add_node(d.name, res.as_theory)
        for m in _edges_for(elab, d, res):
            graph.add_edge(m, d.name)
    return elab.env, graph


def elaborate_text(text: str) -> tuple:
    return elaborate(parse_module(text))
