"""Time parsing, elaboration and flattening of every corpus file.

    python3 scripts/time_corpus.py [--repeat N] [corpus_dir]

Prints one row per file: definitions, graph nodes and edges, and the best
wall-clock time over the repeats.
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from tpc.elaborator import elaborate
from tpc.errors import TpcError
from tpc.frontend import parse_module
from tpc.presentations import flatten_text

DEFAULT_CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@dataclass(frozen=True)
class TimingConfig:
    corpus: Path = DEFAULT_CORPUS
    repeat: int = 5


def run_once(text: str):
    env, graph = elaborate(parse_module(text))
    for name in env.order:
        if name in env.results and env[name].as_theory is not None:
            flatten_text(env[name].as_theory)
    return env, graph


def time_file(path: Path, repeat: int) -> str:
    text = path.read_text(encoding="utf-8")
    best = float("inf")
    try:
        for _ in range(repeat):
            start = time.perf_counter()
            env, graph = run_once(text)
            best = min(best, time.perf_counter() - start)
    except TpcError as exc:
        return f"{path.name:28} rejected: {exc.kind} ({exc.message})"
    return (
        f"{path.name:28} {len(env.order):4} defs {len(graph.nodes):4} nodes "
        f"{len(graph.edges):4} edges {best * 1000:8.1f} ms"
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("corpus", nargs="?", type=Path, default=DEFAULT_CORPUS)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    cfg = TimingConfig(args.corpus, args.repeat)
    for path in sorted(cfg.corpus.glob("*.tpc")):
        print(time_file(path, cfg.repeat))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
