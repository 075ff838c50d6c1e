"""Where does the union-bound existence argument first succeed?

For each q, reports delta*(q) and the smallest L whose n = ceil(L / delta*) makes
the union bound go through, then checks seeded random families at that size.
"""

import argparse
import math
from dataclasses import dataclass

from rankx.extract import delta_star, existence_scan, measure_badness, random_family


@dataclass
class ScanConfig:
    qs: tuple[int, ...] = (2, 3, 4, 5, 7, 8, 9)
    r: int = 2
    k: int = 6
    families: int = 20
    max_subspaces: int = 200_000


def main(cfg: ScanConfig):
    from rankx.algebra import gaussian_binomial
    print(f"{'q':>4s} {'delta*':>12s} {'4L scan':>10s} {'L/delta* scan':>14s} {'random pass':>12s}")
    for q in cfg.qs:
        ds = delta_star(q)
        four = existence_scan(q, cfg.r, cfg.k, lambda L: 4 * L, L_max=2000)
        scan = existence_scan(q, cfg.r, cfg.k, lambda L: math.ceil(L / ds))
        passed = "-"
        if scan and gaussian_binomial(cfg.k, cfg.r, q) <= cfg.max_subspaces:
            L, n = scan
            ok = sum(measure_badness(random_family(q, cfg.r, cfg.k, n, s)).max_bad <= L
                     for s in range(cfg.families))
            passed = f"{ok}/{cfg.families}"
        print(f"{q:4d} {ds:12.9f} {str(four):>10s} {str(scan):>14s} {passed:>12s}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="+", default=list(ScanConfig.qs))
    ap.add_argument("--families", type=int, default=20)
    a = ap.parse_args()
    main(ScanConfig(qs=tuple(a.q), families=a.families))
