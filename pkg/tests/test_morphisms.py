import pytest

from gen import theory
from tpc.errors import (
    ExtraAssignment,
    KindMismatch,
    MissingAssignment,
    NotAnEmbedding,
    SourceTargetMismatch,
    TypeMismatch,
)
from tpc.morphisms import (
    Embedding,
    Renaming,
    View,
    as_embedding,
    check_view,
    compose,
    embedding_from_renaming,
    equiv,
    identity,
    recompose,
)
from tpc.printer import show
from tpc.syntax import App, Bound, Lam, Sym, TAtom

MAGMA = theory("U : type; * : U -> U -> U")
U = TAtom("U")
FLIP_IMG = Lam(U, Lam(U, App(App(Sym("*"), Bound(0)), Bound(1)), "y"), "x")


def flip():
    return check_view(MAGMA, MAGMA, {"U": U, "*": FLIP_IMG})


def test_renaming_drops_identity_entries():
    r = Renaming({"a": "a", "b": "c"})
    assert r.mapping == {"b": "c"} and r("a") == "a" and r("b") == "c"
    assert Renaming().is_identity()


def test_check_view_accepts_flip():
    v = flip()
    assert v.source == MAGMA and v.target == MAGMA


def test_check_view_errors():
    with pytest.raises(MissingAssignment):
        check_view(MAGMA, MAGMA, {"U": U})
    with pytest.raises(ExtraAssignment):
        check_view(MAGMA, MAGMA, {"U": U, "*": Sym("*"), "q": Sym("*")})
    with pytest.raises(KindMismatch):
        check_view(MAGMA, MAGMA, {"U": Sym("*"), "*": Sym("*")})
    pointed = theory("U : type; e : U")
    with pytest.raises(TypeMismatch):
        check_view(pointed, MAGMA, {"U": U, "e": Sym("*")})


def test_compose_flip_flip_keeps_the_redex_and_is_equivalent_to_identity():
    ff = compose(flip(), flip())
    assert show(ff.assignment["*"], MAGMA) == "\\x:U. \\y:U. (\\x':U. \\y':U. y' * x') y x"
    assert equiv(ff, identity(MAGMA))
    assert not equiv(flip(), identity(MAGMA))


def test_compose_requires_matching_endpoints():
    other = theory("U : type")
    with pytest.raises(SourceTargetMismatch):
        compose(identity(other), flip())


def test_compose_is_associative_on_the_nose():
    v = flip()
    assert compose(compose(v, v), v) == compose(v, compose(v, v))


def test_identity_is_neutral():
    v = flip()
    assert compose(identity(MAGMA), v) == v
    assert compose(v, identity(MAGMA)) == v


def test_embedding_decomposition_recomposes():
    sg = theory("U : type; + : U -> U -> U; c : forall x y : U. x + y = y + x")
    e = embedding_from_renaming(MAGMA, sg, Renaming({"*": "+"}))
    assert isinstance(e, Embedding)
    assert e.renamed_base.names == ["U", "+"]
    assert e.extension.names == ["c"]
    assert recompose(e) == sg


def test_as_embedding_recognises_renamings_and_rejects_flip():
    add = theory("U : type; + : U -> U -> U")
    v = check_view(MAGMA, add, {"U": U, "*": Sym("+")})
    emb = as_embedding(v)
    assert emb.pi.mapping == {"*": "+"}
    with pytest.raises(NotAnEmbedding):
        as_embedding(flip())


def test_as_embedding_rejects_non_injective_views():
    two = theory("U : type; a : U; b : U")
    one = theory("U : type; a : U")
    v = check_view(two, one, {"U": U, "a": Sym("a"), "b": Sym("a")})
    with pytest.raises(NotAnEmbedding):
        as_embedding(v)


def test_composite_of_embeddings_is_an_embedding():
    add = theory("U : type; + : U -> U -> U")
    e1 = embedding_from_renaming(MAGMA, add, Renaming({"*": "+"}))
    e2 = embedding_from_renaming(add, MAGMA, Renaming({"+": "*"}))
    c = compose(e1, e2)
    assert isinstance(c, Embedding) and c.pi.is_identity()
    assert c == identity(MAGMA)


def test_view_equality_is_syntactic():
    assert flip() == View(MAGMA, MAGMA, {"U": U, "*": FLIP_IMG})
    assert flip() != identity(MAGMA)
