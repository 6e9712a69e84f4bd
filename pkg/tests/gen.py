"""Random instances for the property tests.

Everything is driven by a ``random.Random`` so the same helpers serve both
seeded loops (the acceptance suite) and hypothesis (``st.randoms()``).
Classifiers are produced as surface text and resolved by the library's own
resolver, which keeps generated axioms readable in failure reports.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from tpc.combinators import combine, mixin
from tpc.frontend import parse_term
from tpc.morphisms import Embedding, Renaming, View, compose, embedding_from_renaming, rename_presentation
from tpc.presentations import Declaration, Presentation, wf_check
from tpc.resolve import Resolver
from tpc.syntax import App, Bound, KType, Lam, Sym, TAtom, TPi, is_kind, shift, substitute

KTYPE = KType()

TYPE_POOL = ["A", "B", "C", "D"]
TERM_POOL = ["a", "b", "c", "f", "g", "h", "k", "m", "p", "q", "r", "s"]


@dataclass
class GenConfig:
    base_max: int = 4
    ext_max: int = 3
    p_rename_base: float = 0.3
    p_family: float = 0.1
    p_flip: float = 0.5
    p_collapse: float = 0.3


# --------------------------------------------------------------------------
# presentations


def _resolve(ctx: dict, text: str):
    return Resolver(ctx).classifier(parse_term(text))


def _ops(ctx: dict, types: list) -> list:
    """Term symbols usable in terms: ``(name, [dom...], cod)`` over plain types."""
    out = []
    for n, c in ctx.items():
        doms = []
        t = c
        while isinstance(t, TPi) and _plain(t.domain, types):
            doms.append(t.domain.family)
            t = t.codomain
        if _plain(t, types):
            out.append((n, doms, t.family))
    return out


def _plain(t, types) -> bool:
    return isinstance(t, TAtom) and not t.args and t.family in types


def _term_text(rng, ops, var_types: dict, ty: str, depth: int):
    cands = [v for v, t in var_types.items() if t == ty]
    cands += [o for o in ops if o[2] == ty and (depth > 0 or not o[1])]
    if not cands:
        return None
    pick = rng.choice(cands)
    if isinstance(pick, str):
        return pick
    name, doms, _ = pick
    args = []
    for d in doms:
        a = _term_text(rng, ops, var_types, d, depth - 1)
        if a is None:
            return None
        args.append(a if " " not in a else f"({a})")
    return " ".join([name] + args)


def _fresh(rng, pool, avoid) -> str:
    free = [n for n in pool if n not in avoid]
    if free:
        return rng.choice(free)
    i = 0
    while f"{pool[0]}{i}" in avoid:
        i += 1
    return f"{pool[0]}{i}"


def gen_decls(rng, ctx: dict, n: int, cfg: GenConfig, avoid=()) -> list:
    """Up to ``n`` declarations well formed over ``ctx`` (which is updated)."""
    out = []
    avoid = set(avoid) | set(ctx)
    for _ in range(n):
        types = [t for t, c in ctx.items() if c == KTYPE]
        families = [t for t, c in ctx.items() if is_kind(c) and c != KTYPE]
        roll = rng.random()
        if not types or roll < 0.2:
            name, text = _fresh(rng, TYPE_POOL, avoid), "type"
        elif roll < cfg.p_family + 0.2:
            name, text = _fresh(rng, TYPE_POOL, avoid), f"{rng.choice(types)} -> type"
        elif roll < 0.6:
            arity = rng.choice([0, 0, 1, 2, 2])
            sig = [rng.choice(types) for _ in range(arity + 1)]
            name, text = _fresh(rng, TERM_POOL, avoid), " -> ".join(sig)
        else:
            name, text = _fresh(rng, TERM_POOL, avoid), _axiom_text(rng, ctx, types, families)
            if text is None:
                name, text = _fresh(rng, TERM_POOL, avoid), rng.choice(types)
        cls = _resolve(ctx, text)
        ctx[name] = cls
        avoid.add(name)
        out.append(Declaration(name, cls))
    return out


def _axiom_text(rng, ctx, types, families):
    ops = _ops(ctx, types)
    if families and rng.random() < 0.3:
        fam = rng.choice(families)
        dom = ctx[fam].domain.family
        return f"forall x : {dom}. {fam} x"
    for _ in range(4):
        nvars = rng.choice([0, 1, 1, 2])
        vt = [rng.choice(types) for _ in range(nvars)]
        var_types = dict(zip(["x", "y"], vt))
        ty = rng.choice(types)
        lhs = _term_text(rng, ops, var_types, ty, 2)
        rhs = _term_text(rng, ops, var_types, ty, 2)
        if lhs is None or rhs is None:
            continue
        body = f"{lhs} = {rhs}"
        for v in reversed(list(var_types)):
            body = f"forall {v} : {var_types[v]}. {body}"
        return body
    return None


def gen_presentation(rng, n: int, cfg: GenConfig = GenConfig()) -> Presentation:
    ctx: dict = {}
    return wf_check(gen_decls(rng, ctx, n, cfg))


def gen_embedding(rng, base: Presentation, cfg: GenConfig = GenConfig(), avoid=()) -> Embedding:
    """``base`` renamed (sometimes) and then extended by up to ``ext_max`` decls."""
    mapping = {}
    if rng.random() < cfg.p_rename_base:
        used = set(base.names)
        for d in base.decls:
            if rng.random() < 0.5:
                pool = TYPE_POOL if d.is_type_symbol else TERM_POOL
                new = _fresh(rng, [x + "1" for x in pool], used)
                used.add(new)
                mapping[d.name] = new
    pi = Renaming(mapping)
    renamed = rename_presentation(base, pi)
    ctx = dict(renamed.classifiers)
    ext = gen_decls(rng, ctx, rng.randint(0, cfg.ext_max), cfg, avoid)
    target = wf_check(renamed.decls + tuple(ext))
    return embedding_from_renaming(base, target, pi)


# --------------------------------------------------------------------------
# renamings satisfying the renaming condition


def valid_renamings(rng, u_left: Embedding, u_right: Embedding, right_fixes_base: bool = False):
    """Random ``(π_left, π_right)`` meeting the renaming condition.

    With ``right_fixes_base`` the right renaming is the identity on base
    images, which is what mixin accepts.
    """
    gamma = u_left.source
    used: set = set()
    pl: dict = {}
    pr: dict = {}
    for z in gamma.names:
        x, y = u_left.pi(z), u_right.pi(z)
        if right_fixes_base:
            n = y
        else:
            first = rng.choice([x, y, z, z + "0"])
            n = next(c for c in [first, y, x, z, z + "0", z + "00", z + "000"] if c not in used)
        used.add(n)
        pl[x], pr[y] = n, n
    base_x = {u_left.pi(z) for z in gamma.names}
    base_y = {u_right.pi(z) for z in gamma.names}

    def place(name, table):
        cand = name if rng.random() < 0.6 else name + "_" + rng.choice("lrst")
        while cand in used:
            cand = cand + "'"
        used.add(cand)
        table[name] = cand

    # every extension name is placed after all base names so clashes are seen
    for x in u_left.target.names:
        if x not in base_x:
            place(x, pl)
    for y in u_right.target.names:
        if y not in base_y:
            place(y, pr)
    return Renaming(pl), Renaming(pr)


@dataclass
class CombineInstance:
    gamma: Presentation
    u_left: Embedding
    u_right: Embedding
    pi_left: Renaming
    pi_right: Renaming
    extra: dict = field(default_factory=dict)


def gen_combine_instance(rng, cfg: GenConfig = GenConfig(), right_fixes_base=False, sizes=None):
    if sizes is None:
        nb = rng.randint(1, cfg.base_max)
    else:
        nb = sizes[0]
    gamma = gen_presentation(rng, nb, cfg)
    if sizes is not None:
        sub = GenConfig(**{**cfg.__dict__, "ext_max": sizes[1]})
        ul, ur = gen_embedding(rng, gamma, sub), gen_embedding(rng, gamma, sub)
    else:
        ul, ur = gen_embedding(rng, gamma, cfg), gen_embedding(rng, gamma, cfg)
    pl, pr = valid_renamings(rng, ul, ur, right_fixes_base)
    return CombineInstance(gamma, ul, ur, pl, pr)


# --------------------------------------------------------------------------
# general views


def _flip(img_name: str, cls):
    """``\\x y. f y x`` for a binary ``f : A -> A -> B``, else ``None``."""
    if not (isinstance(cls, TPi) and isinstance(cls.codomain, TPi)):
        return None
    a, rest = cls.domain, cls.codomain
    if rest.domain != shift(a, 1) or not isinstance(rest.codomain, TAtom):
        return None
    # the inner binder's domain lives under the outer one
    return Lam(a, Lam(shift(a, 1), App(App(Sym(img_name), Bound(0)), Bound(1)), "y"), "x")


def gen_view_out(rng, src: Presentation, cfg: GenConfig = GenConfig(), flips=True, suffix="'"):
    """A new target ``Ω`` and a view ``src → Ω``.

    Each symbol is sent to a fresh target symbol whose classifier is the
    transported one; binary operations may be sent to their flipped version,
    and (with ``p_collapse``) a symbol may reuse an earlier target symbol of
    the right classifier, which makes the view non-injective.
    """
    a: dict = {}
    tdecls: list = []
    tctx: dict = {}
    for d in src.decls:
        expected = substitute(d.classifier, a, reduce=True)
        if rng.random() < cfg.p_collapse:
            reuse = [t.name for t in tdecls if t.classifier == expected]
            if reuse:
                name = rng.choice(reuse)
                a[d.name] = TAtom(name) if d.is_type_symbol else Sym(name)
                continue
        name = d.name if rng.random() < 0.5 else d.name + suffix
        while name in tctx:
            name += suffix
        tdecls.append(Declaration(name, expected))
        tctx[name] = expected
        if d.is_type_symbol:
            a[d.name] = TAtom(name)
            continue
        flipped = _flip(name, expected) if flips and rng.random() < cfg.p_flip else None
        a[d.name] = flipped if flipped is not None else Sym(name)
    target = wf_check(tdecls)
    return target, View(src, target, a)


def gen_view_into(rng, src: Presentation, cfg: GenConfig = GenConfig(), flips=True):
    """A view out of ``src`` whose target is then extended a little."""
    target, v = gen_view_out(rng, src, cfg, flips)
    ctx = dict(target.classifiers)
    more = gen_decls(rng, ctx, rng.randint(0, 1), cfg)
    if more:
        target = wf_check(target.decls + tuple(more))
        v = View(src, target, v.assignment)
    return target, v


def cospan_through(rng, left_leg: View, right_leg: View, pres: Presentation, cfg=GenConfig(), flips=True):
    """A commuting cospan obtained by post-composing the legs with ``m : pres → Ω``."""
    _, m = gen_view_into(rng, pres, cfg, flips)
    return compose(left_leg, m), compose(right_leg, m), m


def lift_renaming(delta: Presentation, u_right: Embedding, pi_right: Renaming) -> Renaming:
    """A left renaming for mixin that keeps ``Δ``'s names off the extension's."""
    taken = {pi_right(y) for y in u_right.extension.names} | set(delta.names)
    out = {}
    for x in delta.names:
        if x in {pi_right(y) for y in u_right.extension.names}:
            new = x + "_v"
            while new in taken:
                new += "'"
            taken.add(new)
            out[x] = new
    return Renaming(out)


def as_view(e: Embedding) -> View:
    return View(e.source, e.target, e.assignment)


def run_combine(inst: CombineInstance):
    return combine(inst.u_left, inst.u_right, inst.pi_left, inst.pi_right)


def run_mixin(inst: CombineInstance, v=None):
    return mixin(v if v is not None else as_view(inst.u_left), inst.u_right, inst.pi_left, inst.pi_right)


def seeded(seed: int) -> random.Random:
    return random.Random(seed)


def theory(body: str) -> Presentation:
    """Presentation from the body of a ``Theory { ... }`` literal."""
    from tpc.elaborator import elaborate_text

    env, _ = elaborate_text(f"T := Theory {{ {body} }}")
    return env["T"].as_theory


# --------------------------------------------------------------------------
# combinator expressions over an elaborated module


@dataclass
class ExprPool:
    """Expressions known to type, indexed by their inferred type."""

    elab: object
    known: dict
    items: list = field(default_factory=list)  # (text, expr, type)
    counter: int = 0

    def fresh(self, stem: str) -> str:
        self.counter += 1
        return f"{stem}{self.counter}"


def expr_pool(env) -> ExprPool:
    from tpc.frontend import RefE

    known = {n: ("renaming" if n in env.renamings else "assignment" if n in env.assignments else "expr")
             for n in env.order}
    pool = ExprPool(env.elaborator, known)
    for n in env.order:
        if known[n] == "expr":
            e = RefE(n)
            pool.items.append((n, e, pool.elab.infer(e)))
    return pool


def _paren(text: str) -> str:
    return f"({text})"


def propose(rng, pool: ExprPool) -> str:
    """Text of a candidate expression built from pool members (may not type)."""
    from tpc.elaborator import Emb, as_view_type

    elab = pool.elab
    embs = [(t, e, ty) for t, e, ty in pool.items if isinstance(ty, Emb)]
    views = [(t, e, ty) for t, e, ty in pool.items if as_view_type(ty) is not None]
    theories = [(t, e, ty) for t, e, ty in pool.items if elab.denotes_theory(e)]
    k = rng.randrange(7)
    if k in (0, 1) and embs:
        a = rng.choice(embs)
        same = [b for b in embs if b[2].a == a[2].a]
        b = rng.choice(same)
        if k == 0:
            return f"{_paren(a[0])} || {_paren(b[0])}"
        ext = [n for n in elab.sem_e(b[1]).extension.names]
        r = {n: pool.fresh("n") for n in ext if rng.random() < 0.7}
        body = ", ".join(f"`{x}` |-> {y}" for x, y in r.items())
        return f"combine {_paren(a[0])} [], {_paren(b[0])} [{body}]"
    if k == 2 and views:
        a = rng.choice(views)
        tgt = as_view_type(a[2]).b
        nxt = [b for b in views if as_view_type(b[2]).a == tgt]
        if nxt:
            return f"{_paren(a[0])} ; {_paren(rng.choice(nxt)[0])}"
    if k == 3 and theories:
        a = rng.choice(theories)
        names = elab.sem_c(a[1]).names
        if names:
            x = rng.choice(names)
            return f"{_paren(a[0])} [`{x}` |-> {pool.fresh('r')}]"
    if k == 4 and theories:
        a = rng.choice(theories)
        p = elab.sem_c(a[1])
        cls = "U" if "U" in p.classifiers else "type"
        return f"extend {_paren(a[0])} by {{ {pool.fresh('c')} : {cls} }}"
    if k == 5 and views and embs:
        v = rng.choice(views)
        src = as_view_type(v[2]).a
        cands = [b for b in embs if b[2].a == src]
        if cands:
            b = rng.choice(cands)
            ext = elab.sem_e(b[1]).extension.names
            body = ", ".join(f"`{x}` |-> {pool.fresh('m')}" for x in ext)
            return f"mixin {_paren(v[0])} [], {_paren(b[0])} [{body}]"
    if k == 6 and theories:
        a, b = rng.choice(theories), rng.choice(theories)
        return f"view {_paren(a[0])} as {_paren(b[0])} via []"
    a = rng.choice(pool.items)
    return a[0]


def parse_candidate(pool: ExprPool, text: str):
    from tpc.frontend import parse_expr

    return parse_expr(text, dict(pool.known))
