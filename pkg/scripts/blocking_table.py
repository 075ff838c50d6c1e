"""Strong 1-blocking sets from the small-field pipeline and from biased sets, against lower bounds."""

import argparse
from dataclasses import dataclass

from rankx.blocking import (bias, biased_to_blocking, bound_tables, build_biased_set, disperser_to_blocking,
                            verify_strong_blocking)
from rankx.fieldreduce import pipeline_small_field_disperser


@dataclass
class TableConfig:
    q: int = 2
    ks: tuple[int, ...] = (4, 5, 6, 7, 8)
    theta: int = 4


def main(cfg: TableConfig):
    print(f"{'k':>3s} {'lower':>6s} {'disperser |B|':>14s} {'ok':>4s} {'biased |B| (m)':>15s} {'ok':>4s}")
    for k in cfg.ks:
        t = bound_tables(cfg.q, k, 1)
        B = disperser_to_blocking(pipeline_small_field_disperser(cfg.q, 2, k, theta=cfg.theta))
        ok = verify_strong_blocking(B, 1).holds
        for m in range(k, 3 * k):
            S = build_biased_set(cfg.q, k, m)
            S.measured_bias = bias(S)
            res = biased_to_blocking(S, 1)
            if res.strong_ok:
                P = res.strong_set
                pok = verify_strong_blocking(P, 1).holds
                break
        else:
            P, pok, m = None, False, None
        bsize = f"{len(P)} ({m})" if P is not None else "-"
        print(f"{k:3d} {float(t.b_strong_lower):6.0f} {len(B):14d} {str(ok):>4s} {bsize:>15s} {str(pok):>4s}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--k", type=int, nargs="+", default=[4, 5, 6, 7, 8])
    ap.add_argument("--theta", type=int, default=4)
    a = ap.parse_args()
    main(TableConfig(a.q, tuple(a.k), a.theta))
