"""Time the 8-factor stress example and report the search counters.

    python scripts/bench_exponential.py [--repeats 3] [--factors 8]

With --factors below 8 a smaller instance of the same family is generated,
which shows the 4^n growth of the leaf count.
"""

from __future__ import annotations

import argparse
import statistics
import time
from dataclasses import dataclass

from gadtcheck import syntax as S
from gadtcheck.driver import CheckConfig, check_program, load_prelude

HEADER = ("type _ t = A : int t | B : bool t | C : char t | D : float t\n"
          "type (_, _, _, _) u = U : (int, int, int, int) u\n")
VARS = "abcdefghijklmnop"


@dataclass
class BenchConfig:
    factors: int = 8  # a multiple of 4
    repeats: int = 3


def program(n: int) -> str:
    if n % 4 or n <= 0:
        raise ValueError("factors must be a positive multiple of 4")
    vs = [f"'{VARS[i]}" for i in range(n)]
    groups = [", ".join(vs[i:i + 4]) for i in range(0, n, 4)]
    scrut = " * ".join([f"{v} t" for v in vs] + [f"({g}) u" for g in groups])
    arm = ", ".join(["A"] * n + ["U"] * len(groups))
    return HEADER + f"check {scrut} with\n  | {arm} -> ok\n"


def run(cfg: BenchConfig) -> None:
    prog = S.parse_program(program(cfg.factors))
    prelude = load_prelude()
    times = []
    for _ in range(cfg.repeats):
        start = time.perf_counter()
        result = check_program(prog, CheckConfig(), prelude)
        times.append(time.perf_counter() - start)
    stats = result.reports[0].stats
    verdict = "exhaustive" if not result.diagnostics else f"{len(result.diagnostics)} diagnostics"
    print(f"factors={cfg.factors} verdict={verdict} leaves={stats.leaves} "
          f"(4^{cfg.factors}={4 ** cfg.factors}) splits={stats.splits}")
    print(f"time: median {statistics.median(times):.3f}s, min {min(times):.3f}s "
          f"over {cfg.repeats} run(s)")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--factors", type=int, default=8)
    ap.add_argument("--repeats", type=int, default=3)
    a = ap.parse_args()
    run(BenchConfig(a.factors, a.repeats))


if __name__ == "__main__":
    main()
