"""Time the exhaustive badness oracle on the standard instances, single- and multi-threaded."""

import argparse
import time
from dataclasses import dataclass

from rankx.cli import BENCH_CASES
from rankx.extract import measure_badness


@dataclass
class BenchConfig:
    threads: tuple[int, ...] = (1, 2)
    repeats: int = 2


def main(cfg: BenchConfig):
    for name, make in BENCH_CASES.items():
        fam = make()
        measure_badness(fam)  # warm-up / compile
        for th in cfg.threads:
            best = min(_timed(fam, th) for _ in range(cfg.repeats))
            rep = measure_badness(fam, threads=th)
            print(f"{name:16s} threads={th} n={fam.n:3d} L={fam.theoretical_L:3d} "
                  f"max_bad={rep.max_bad:3d} subspaces={rep.subspaces_checked:8d} {best:7.2f}s")


def _timed(fam, threads):
    t0 = time.perf_counter()
    measure_badness(fam, threads=threads)
    return time.perf_counter() - t0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--threads", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--repeats", type=int, default=2)
    a = ap.parse_args()
    main(BenchConfig(tuple(a.threads), a.repeats))
