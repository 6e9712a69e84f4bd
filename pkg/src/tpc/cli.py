"""Command-line driver: ``tpc check|flatten|graph|dump FILE``.

Exit status is 0 on success, 1 for a reported user error and 2 when an
internal invariant breaks.  All output is deterministic for a given input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from .elaborator import Emb, Th, ViewT, elaborate
from .errors import SpecificationError, TpcError, UnknownDefinition
from .frontend import parse_module
from .presentations import EMPTY, Presentation, flatten_text
from .printer import show
from .surface import show_raw

COMMANDS = ("check", "flatten", "graph", "dump")
GRAPH_FORMATS = ("dot", "text")
COLLATIONS = ("codepoint",)


@dataclass(frozen=True)
class CliConfig:
    command: str
    input: str
    target: Optional[str] = None
    output: Optional[str] = None
    format: str = "text"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.command == "flatten" and not self.target:
            raise ValueError("flatten needs --target")
        if self.command == "graph" and self.format not in GRAPH_FORMATS:
            raise ValueError(f"graph format must be one of {', '.join(GRAPH_FORMATS)}")


class CliError(TpcError):
    rule = "command line"


# --------------------------------------------------------------------------
# the four commands; each takes module text and returns output text


def _load(text: str):
    return elaborate(parse_module(text))


def cmd_check(text: str) -> str:
    _load(text)
    return ""


def cmd_flatten(text: str, target: str) -> str:
    env, _ = _load(text)
    if target not in env.results:
        if target == "Empty":
            return flatten_text(EMPTY)
        if target in env.renamings or target in env.assignments:
            raise SpecificationError(f"'{target}' is a renaming or assignment, not a theory")
        raise UnknownDefinition(f"no definition named '{target}'")
    res = env[target]
    if res.as_theory is None:
        raise SpecificationError(f"'{target}' is a view and denotes no theory")
    return flatten_text(res.as_theory)


def _quote(name: str) -> str:
    return json.dumps(name)


def graph_dot(graph) -> str:
    lines = ["digraph theories {", "  node [shape=box];"]
    lines += [f"  {_quote(n)};" for n in graph.nodes]
    for e in graph.sorted_edges():
        style = "dashed" if e.kind == "view" else "solid"
        lines.append(
            f"  {_quote(e.source)} -> {_quote(e.target)} "
            f"[style={style}, label={_quote(e.label)}, tooltip={_quote(e.kind)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_text(graph) -> str:
    lines = [f"node {n}" for n in graph.nodes]
    lines += [f"edge {e.source} -> {e.target} {e.kind} {e.label}" for e in graph.sorted_edges()]
    return "".join(line + "\n" for line in lines)


def cmd_graph(text: str, fmt: str = "dot") -> str:
    _, graph = _load(text)
    return graph_dot(graph) if fmt == "dot" else graph_text(graph)


def _theory_name(graph, p: Presentation):
    return graph.node_of(p)


def _type_record(graph, t) -> dict:
    if isinstance(t, Th):
        return {"tag": "Th"}
    tag = "Emb" if isinstance(t, Emb) else "View" if isinstance(t, ViewT) else type(t).__name__
    return {"tag": tag, "source": _theory_name(graph, t.a), "target": _theory_name(graph, t.b)}


def _assignment_record(view) -> dict:
    return {
        d.name: show(view.assignment[d.name], view.target)
        for d in view.source.canonical().decls
    }


def _morphism_record(graph, m) -> dict:
    return {
        "source": _theory_name(graph, m.source),
        "target": _theory_name(graph, m.target),
        "assignment": _assignment_record(m),
    }


def dump_data(env, graph) -> dict:
    defs = []
    for name in env.order:
        if name in env.renamings or name in env.assignments:
            kind = "renaming" if name in env.renamings else "assignment"
            raw = (env.renamings if name in env.renamings else env.assignments)[name]
            entries = [[k, v if isinstance(v, str) else show_raw(v)] for k, v in raw.entries]
            defs.append({"name": name, "kind": kind, "entries": entries})
            continue
        res = env[name]
        rec: dict = {"name": name, "type": _type_record(graph, res.type)}
        if res.as_theory is not None:
            rec["node"] = graph.aliases.get(name)
            rec["theory"] = flatten_text(res.as_theory).splitlines()
        if res.as_embedding is not None:
            rec["embedding"] = _morphism_record(graph, res.as_embedding)
        elif res.as_view is not None:
            rec["view"] = _morphism_record(graph, res.as_view)
        defs.append(rec)
    return {"definitions": defs}


def cmd_dump(text: str) -> str:
    env, graph = _load(text)
    return json.dumps(dump_data(env, graph), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# --------------------------------------------------------------------------
# driver


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tpc", description="theory presentation combinators")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("check", "parse, type-check and elaborate every definition"),
        ("flatten", "print the flattened presentation of one definition"),
        ("graph", "print the theory graph"),
        ("dump", "print every definition as JSON"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input")
        p.add_argument("-o", "--output", help="write to this file instead of stdout")
        if name == "flatten":
            p.add_argument("--target", required=True)
        if name == "graph":
            p.add_argument("--format", choices=GRAPH_FORMATS, default="dot")
    return ap


def run(cfg: CliConfig) -> str:
    collation = os.environ.get("TPC_COLLATION", "codepoint")
    if collation not in COLLATIONS:
        raise CliError(f"TPC_COLLATION must be 'codepoint', not {collation!r}")
    try:
        with open(cfg.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read input: {exc.strerror}") from None
    if cfg.command == "check":
        return cmd_check(text)
    if cfg.command == "flatten":
        return cmd_flatten(text, cfg.target)
    if cfg.command == "graph":
        return cmd_graph(text, cfg.format)
    return cmd_dump(text)


def format_error(path: str, exc: TpcError) -> str:
    where = path if exc.line is None else f"{path}:{exc.line}:{exc.col}"
    return f"{where}: error[{exc.kind}] ({exc.rule}): {exc.message}"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = CliConfig(
        command=args.command,
        input=args.input,
        target=getattr(args, "target", None),
        output=args.output,
        format=getattr(args, "format", "text"),
    )
    try:
        out = run(cfg)
    except TpcError as exc:
        print(format_error(cfg.input, exc), file=sys.stderr)
        return 1
    except Exception as exc:  # an invariant of the implementation broke
        print(f"{cfg.input}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
