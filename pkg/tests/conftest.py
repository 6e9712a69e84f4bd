import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))  # test helpers: gen, oracles

CORPUS = HERE.parent / "corpus"


def corpus_text(name: str) -> str:
    return (CORPUS / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def tiny():
    from tpc.elaborator import elaborate_text

    return elaborate_text(corpus_text("tiny.tpc"))


@pytest.fixture(scope="session")
def section6():
    from tpc.elaborator import elaborate_text

    return elaborate_text(corpus_text("section6.tpc"))


@pytest.fixture(scope="session")
def library():
    from tpc.elaborator import elaborate_text

    return elaborate_text(corpus_text("library.tpc"))
