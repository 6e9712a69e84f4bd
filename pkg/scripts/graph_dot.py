"""Write a theory graph (by default the tiny-theories script) as Graphviz DOT.

    python3 scripts/graph_dot.py [-o tiny.dot] [--input corpus/tiny.tpc]

Render with ``dot -Tsvg tiny.dot > tiny.svg`` if Graphviz is installed.
Inclusions and renamings are solid edges; views are dashed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from tpc.cli import graph_dot
from tpc.elaborator import elaborate_text

DEFAULT_INPUT = Path(__file__).resolve().parent.parent / "corpus" / "tiny.tpc"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="theory graph as DOT")
    ap.add_argument("--input", type=Path, default=DEFAULT_INPUT)
    ap.add_argument("-o", "--output", type=Path)
    args = ap.parse_args(argv)
    _, graph = elaborate_text(args.input.read_text(encoding="utf-8"))
    dot = graph_dot(graph)
    if args.output:
        args.output.write_text(dot, encoding="utf-8")
        kinds = {}
        for e in graph.edges:
            kinds[e.kind] = kinds.get(e.kind, 0) + 1
        summary = ", ".join(f"{n} {k}" for k, n in sorted(kinds.items()))
        print(f"wrote {args.output}: {len(graph.nodes)} nodes; {summary}", file=sys.stderr)
    else:
        sys.stdout.write(dot)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
