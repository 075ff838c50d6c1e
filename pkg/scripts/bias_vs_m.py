"""Measured bias of the trace-of-powers sets as m grows, for both exponent patterns."""

import argparse
from dataclasses import dataclass
from fractions import Fraction

from rankx.blocking import bias, build_biased_set


@dataclass
class BiasConfig:
    q: int = 2
    k: int = 16
    m_min: int = 8
    m_max: int = 16


def main(cfg: BiasConfig):
    strong = Fraction(cfg.q - 1, 2 * cfg.q**2)
    print(f"q={cfg.q} k={cfg.k}; strong s=1 threshold {strong}, affine s=1 threshold 1/{cfg.q}")
    print(f"{'m':>3s} {'|S|':>7s} {'coprime':>12s} {'consecutive':>12s} {'heuristic':>10s}")
    for m in range(cfg.m_min, cfg.m_max + 1):
        S = build_biased_set(cfg.q, cfg.k, m)
        b = bias(S)
        c = bias(build_biased_set(cfg.q, cfg.k, m, "consecutive"))
        print(f"{m:3d} {len(S.vectors):7d} {float(b):12.6f} {float(c):12.6f} {S.meta['heuristic_bias']:10.4f}"
              + ("  strong_ok" if b < strong else ""))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--k", type=int, default=16)
    ap.add_argument("--m-min", type=int, default=8)
    ap.add_argument("--m-max", type=int, default=16)
    a = ap.parse_args()
    main(BiasConfig(a.q, a.k, a.m_min, a.m_max))
