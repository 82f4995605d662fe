"""Check every corpus file and print a one-line verdict per match.

    python scripts/run_corpus.py [--split never|once|full] [--fuel N] [--oracle-check]
"""

from __future__ import annotations

import argparse
import dataclasses
import time
from dataclasses import dataclass
from pathlib import Path

from gadtcheck import syntax as S
from gadtcheck.driver import CheckConfig, check_program, load_prelude
from gadtcheck.search import DEFAULT_FUEL, SplitPolicy

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@dataclass
class RunConfig:
    corpus: Path = CORPUS
    split: SplitPolicy = SplitPolicy.NEVER
    fuel: int = DEFAULT_FUEL
    oracle_check: bool = False


def describe(d) -> str:
    parts = [d.kind]
    if d.arm_index is not None:
        parts.append(f"arm {d.arm_index}")
    if d.witness is not None:
        parts.append(S.print_pattern(d.witness))
    if d.suggest_refutation:
        parts.append("suggest refutation")
    return ", ".join(parts)


def run(cfg: RunConfig) -> int:
    prelude = load_prelude()
    config = CheckConfig(split_policy=cfg.split, fuel=cfg.fuel, oracle_check=cfg.oracle_check)
    flagged = 0
    for path in sorted(cfg.corpus.glob("*.gml")):
        start = time.perf_counter()
        prog = S.parse_program(path.read_text(encoding="utf-8"))
        result = check_program(prog, config, prelude)
        ms = (time.perf_counter() - start) * 1000
        verdict = "; ".join(describe(d) for d in result.diagnostics) or "clean"
        flagged += bool(result.diagnostics)
        print(f"{path.stem:14s} {ms:9.1f} ms  {verdict}")
    return flagged


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--corpus", type=Path, default=CORPUS)
    ap.add_argument("--split", choices=[p.value for p in SplitPolicy], default="never")
    ap.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    ap.add_argument("--oracle-check", action="store_true")
    a = ap.parse_args()
    cfg = RunConfig(a.corpus, SplitPolicy(a.split), a.fuel, a.oracle_check)
    print(f"# {dataclasses.asdict(cfg)}")
    n = run(cfg)
    print(f"# {n} file(s) with diagnostics")


if __name__ == "__main__":
    main()
