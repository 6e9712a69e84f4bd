import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    SIGNATURE,
    Ap,
    Lm,
    V,
    beta_normal,
    eta_long,
    kernel_type,
    random_term,
    random_type,
    subst,
    to_kernel,
)
from tpc.errors import IllTyped, KindMismatch, TypeMismatch, UnboundName
from tpc.frontend import parse_term
from tpc.kernel import (
    check_classifier,
    check_kind,
    conv,
    infer_type,
    normalize,
    type_conv,
)
from tpc.printer import show
from tpc.resolve import Resolver
from tpc.syntax import (
    App,
    Bound,
    KPi,
    KType,
    Lam,
    Sym,
    TAtom,
    arrow,
    beta_nf,
    free_symbols,
    instantiate,
    is_closed,
    rename_symbols,
    shift,
    substitute,
)

U = TAtom("U")
MAGMA = {"U": KType(), "*": arrow(U, arrow(U, U))}
CTX = {name: kernel_type(ty) for name, ty in SIGNATURE.items()} | {"o": KType()}


def parse(ctx, text):
    return Resolver(ctx).classifier(parse_term(text))


# -------------------------------------------------------------- de Bruijn basics


def test_alpha_equivalence_is_structural_equality():
    a = Lam(U, Bound(0), "x")
    b = Lam(U, Bound(0), "y")
    assert a == b and hash(a) == hash(b)
    assert Lam(U, Lam(U, Bound(1))) != Lam(U, Lam(U, Bound(0)))


def test_shift_respects_cutoff():
    e = Lam(U, App(Bound(0), Bound(1)))
    assert shift(e, 2) == Lam(U, App(Bound(0), Bound(3)))


def test_instantiate_drops_binder():
    body = App(App(Sym("*"), Bound(0)), Bound(1))
    assert instantiate(body, Sym("e")) == App(App(Sym("*"), Sym("e")), Bound(0))


def test_substitute_type_image_appends_arguments():
    t = TAtom("P", (Sym("x"),))
    assert substitute(t, {"P": TAtom("Q", (Sym("a"),))}) == TAtom("Q", (Sym("a"), Sym("x")))


def test_hereditary_substitution_only_contracts_new_redexes():
    flip = Lam(U, Lam(U, App(App(Sym("*"), Bound(0)), Bound(1))))
    e = App(App(Sym("*"), Sym("a")), Sym("b"))
    assert substitute(e, {"*": flip}) == App(App(flip, Sym("a")), Sym("b"))
    assert substitute(e, {"*": flip}, reduce=True) == App(App(Sym("*"), Sym("b")), Sym("a"))
    old = App(Lam(U, Bound(0)), Sym("a"))
    assert substitute(old, {"a": Sym("b")}, reduce=True) == App(Lam(U, Bound(0)), Sym("b"))


def test_free_symbols_and_renaming():
    cls = parse(MAGMA | {"e": U}, "forall x : U. e * x = x")
    assert free_symbols(cls) == {"U", "*", "e"}
    renamed = rename_symbols(cls, {"*": "+", "e": "0"})
    assert free_symbols(renamed) == {"U", "+", "0"}
    assert is_closed(cls)


# ------------------------------------------------------------------ typing


def test_infer_application_and_lambda():
    ctx = MAGMA | {"e": U}
    assert infer_type(ctx, App(App(Sym("*"), Sym("e")), Sym("e"))) == U
    lam = Lam(U, App(App(Sym("*"), Bound(0)), Bound(0)))
    assert infer_type(ctx, lam) == arrow(U, U)


@pytest.mark.parametrize(
    "text, exc",
    [
        ("e e", TypeMismatch),
        ("* e U", KindMismatch),
        ("q", UnboundName),
    ],
)
def test_typing_errors(text, exc):
    ctx = MAGMA | {"e": U}
    with pytest.raises(exc):
        infer_type(ctx, _raw_kernel(ctx, text))


def _raw_kernel(ctx, text):
    """Build a kernel term without the resolver's own checks."""
    parts = text.split()
    out = Sym(parts[0])
    for p in parts[1:]:
        out = App(out, Sym(p))
    return out


def test_dependent_family_kinding():
    ctx = {"U": KType(), "P": KPi(U, KType()), "a": U}
    assert check_kind(ctx, TAtom("P", (Sym("a"),))) == KType()
    with pytest.raises(KindMismatch):
        check_kind(ctx, TAtom("P", (Sym("a"), Sym("a"))))
    check_classifier(ctx, parse(ctx, "forall x : U. P x"))


def test_equation_sides_must_share_a_type():
    ctx = {"U": KType(), "V": KType(), "a": U, "b": TAtom("V")}
    with pytest.raises(Exception):
        parse(ctx, "a = b")


# ------------------------------------------------------------- conversion


def test_eta_long_normal_form_of_a_binary_symbol():
    nf = normalize(MAGMA, Sym("*"), MAGMA["*"])
    assert nf == Lam(U, Lam(U, App(App(Sym("*"), Bound(1)), Bound(0))))


def test_flip_flip_is_convertible_to_identity_but_flip_is_not():
    flip = Lam(U, Lam(U, App(App(Sym("*"), Bound(0)), Bound(1))))
    twice = Lam(U, Lam(U, App(App(flip, Bound(0)), Bound(1))))
    ty = MAGMA["*"]
    assert conv(MAGMA, twice, ty, Sym("*"), ty)
    assert not conv(MAGMA, flip, ty, Sym("*"), ty)


def test_conv_reports_ill_typed_inputs():
    with pytest.raises(IllTyped):
        conv(MAGMA, Sym("U"), U, Sym("*"), MAGMA["*"])


def test_type_conv_normalizes_embedded_terms():
    ctx = {"U": KType(), "P": KPi(U, KType()), "a": U}
    redex = TAtom("P", (App(Lam(U, Bound(0)), Sym("a")),))
    assert type_conv(ctx, redex, TAtom("P", (Sym("a"),)))


def test_capture_avoiding_printing():
    # substituting [y |-> x] under a binder named x must not capture
    ctx = MAGMA | {"x": U, "y": U}
    e = Lam(U, App(App(Sym("*"), Bound(0)), Sym("y")), "x")
    out = substitute(e, {"y": Sym("x")})
    assert show(out, ctx) == "\\x':U. x' * x"


# ---------------------------------------------------- oracle comparisons


def _closed_named(rng, ty, depth=3):
    return random_term(rng, ty, dict(SIGNATURE), depth)


@settings(max_examples=300, deadline=None)
@given(st.randoms(use_true_random=False))
def test_substitution_matches_named_oracle(rng):
    ty = random_type(rng)
    t = _closed_named(rng, ty)
    # images may mention free names that coincide with binder names in t
    sigma = {}
    for sym, sty in SIGNATURE.items():
        if rng.random() < 0.5:
            sigma[sym] = _closed_named(rng, sty, 2)
    expected = to_kernel(subst(t, sigma))
    got = substitute(to_kernel(t), {k: to_kernel(v) for k, v in sigma.items()})
    assert got == expected


@settings(max_examples=300, deadline=None)
@given(st.randoms(use_true_random=False))
def test_beta_normal_form_matches_named_oracle(rng):
    ty = random_type(rng)
    t = _closed_named(rng, ty, 4)
    assert beta_nf(to_kernel(t)) == to_kernel(beta_normal(t))


@settings(max_examples=300, deadline=None)
@given(st.randoms(use_true_random=False))
def test_eta_long_form_matches_named_oracle(rng):
    ty = random_type(rng)
    t = _closed_named(rng, ty, 3)
    expected = eta_long(beta_normal(t), ty, dict(SIGNATURE))
    assert normalize(CTX, to_kernel(t), kernel_type(ty)) == to_kernel(expected)


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_hereditary_substitution_agrees_with_raw_up_to_beta(rng):
    ty = random_type(rng)
    t = _closed_named(rng, ty, 3)
    sigma = {"g": to_kernel(_closed_named(rng, SIGNATURE["g"], 2))}
    k = to_kernel(t)
    raw = substitute(k, sigma)
    her = substitute(k, sigma, reduce=True)
    assert beta_nf(raw) == beta_nf(her)
    assert conv(CTX, raw, kernel_type(ty), her, kernel_type(ty))


def test_oracle_itself_avoids_capture():
    # (\x. f y)[y |-> x] renames the binder
    t = Lm("x", "o", Ap(V("f"), V("y")))
    out = subst(t, {"y": V("x")})
    assert isinstance(out, Lm) and out.var != "x" and out.body == Ap(V("f"), V("x"))


def test_random_terms_are_well_typed():
    rng = random.Random(0)
    for _ in range(50):
        ty = random_type(rng)
        t = _closed_named(rng, ty)
        assert infer_type(CTX, to_kernel(t)) is not None
