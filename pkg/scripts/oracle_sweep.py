"""Cross-check search verdicts against the Horn-clause oracle on random programs.

    python scripts/oracle_sweep.py [--programs 200] [--depth 6] [--split never|once|full]

Every pattern the search declares empty is handed to the resolver; a
witness found there is a disagreement and is printed with its program.
"""

from __future__ import annotations

import argparse
import collections
import time
from dataclasses import dataclass, field

from gadtcheck import horn
from gadtcheck import syntax as S
from gadtcheck.driver import NON_EXHAUSTIVE, CheckConfig, check_program, load_prelude
from gadtcheck.randprog import GenConfig, random_program
from gadtcheck.search import SplitPolicy
from gadtcheck.tycore import Trail


@dataclass
class SweepConfig:
    programs: int = 200
    first_seed: int = 0
    depth: int = 6
    split: SplitPolicy = SplitPolicy.NEVER
    fuel: int = 256
    gen: GenConfig = field(default_factory=GenConfig)


def run(cfg: SweepConfig) -> int:
    prelude = load_prelude()
    config = CheckConfig(split_policy=cfg.split, fuel=cfg.fuel)
    counts: collections.Counter = collections.Counter()
    start = time.perf_counter()
    for seed in range(cfg.first_seed, cfg.first_seed + cfg.programs):
        prog = random_program(seed, cfg.gen)
        result = check_program(prog, config, prelude)
        counts["checks"] += len(prog.checks)
        counts["non-exhaustive"] += sum(d.kind == NON_EXHAUSTIVE for d in result.diagnostics)
        clauses = horn.program_clauses(result.env) if result.env else None
        for c, report in zip(prog.checks, result.reports):
            for v in (report.empty if report is not None else ()):
                counts["empty"] += 1
                t = result.env.convert(c.scrutinee, {}, Trail())
                res = horn.sld_inhabited(t, cfg.depth, clauses, pattern=v.pattern)
                counts[type(res).__name__] += 1
                if isinstance(res, horn.Witness):
                    print(f"seed {seed}: {S.print_pattern(v.pattern)} declared empty, "
                          f"oracle found {S.print_pattern(res.value)}")
                    print(S.print_program(prog))
    elapsed = time.perf_counter() - start
    print(f"{cfg.programs} programs, {elapsed:.1f}s: " +
          ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    return counts["Witness"]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--programs", type=int, default=200)
    ap.add_argument("--first-seed", type=int, default=0)
    ap.add_argument("--depth", type=int, default=6)
    ap.add_argument("--split", choices=[p.value for p in SplitPolicy], default="never")
    ap.add_argument("--fuel", type=int, default=256)
    a = ap.parse_args()
    bad = run(SweepConfig(a.programs, a.first_seed, a.depth, SplitPolicy(a.split), a.fuel))
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
