"""Run the universal-property checks over a range of seeds.

    python3 scripts/check_laws.py [--seeds 2000] [--start 0] [--law all]

Laws: ``commutative`` (combine with its inputs swapped), ``mixin-combine``
(mixin along an embedding agrees with combine, with mediating views on
three cospans), ``lift`` (mixin along generated non-trivial views) and
``unique`` (exhaustive search for commuting symbol-to-symbol views).
Reports failures with their seeds, so any one can be replayed with
``--start SEED --seeds 1``.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from laws import (  # noqa: E402
    LawConfig,
    check_cartesian_lift,
    check_commutative,
    check_mixin_is_combine,
    check_unique_mediator,
)

LAWS = {
    "commutative": check_commutative,
    "mixin-combine": check_mixin_is_combine,
    "lift": check_cartesian_lift,
    "unique": check_unique_mediator,
}


@dataclass(frozen=True)
class RunConfig:
    seeds: int = 2000
    start: int = 0
    law: str = "all"
    cospans: int = 3


def run(cfg: RunConfig) -> int:
    names = list(LAWS) if cfg.law == "all" else [cfg.law]
    law_cfg = LawConfig(cospans=cfg.cospans)
    total_failures = 0
    for name in names:
        check = LAWS[name]
        start = time.perf_counter()
        failures = []
        for seed in range(cfg.start, cfg.start + cfg.seeds):
            try:
                problem = check(random.Random(seed), law_cfg)
            except Exception as exc:
                problem = f"{type(exc).__name__}: {exc}"
            if problem:
                failures.append((seed, problem))
        elapsed = time.perf_counter() - start
        print(f"{name:14} {cfg.seeds} seeds  {len(failures)} failures  {elapsed:6.2f}s")
        for seed, problem in failures[:5]:
            print(f"    seed {seed}: {problem}")
        total_failures += len(failures)
    return 1 if total_failures else 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="check the combinators' laws on random instances")
    ap.add_argument("--seeds", type=int, default=2000)
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--law", choices=["all", *LAWS], default="all")
    ap.add_argument("--cospans", type=int, default=3)
    args = ap.parse_args(argv)
    return run(RunConfig(args.seeds, args.start, args.law, args.cospans))


if __name__ == "__main__":
    raise SystemExit(main())
