"""Prime-field extractor pipeline: measured L/n against the target delta."""

import argparse
from dataclasses import dataclass

from rankx.fieldreduce import measured_ratio, pipeline_prime_field_extractor


@dataclass
class PrimeConfig:
    q: int = 13
    r: int = 2
    k: int = 4
    delta: float = 0.5
    points: int = 20
    subspaces: int = 10_000
    seed: int = 0


def main(cfg: PrimeConfig):
    fam = pipeline_prime_field_extractor(cfg.q, cfg.r, cfg.k, cfg.delta, samples=cfg.points, seed=cfg.seed)
    tr = fam.meta["pipeline"]
    hit = fam.meta["hit"]
    ratio, rep = measured_ratio(fam, samples=cfg.subspaces, seed=cfg.seed)
    print(f"Q={tr['Q']} instance={tr['instance']['kind']} L0={tr['L0']} n1={tr['n1']} kept={tr['kept']}")
    print(f"hitting family: p={hit['p']} t={hit['t']} |S|={hit['S_size']} required={hit['S_required']} "
          f"undersized={hit['undersized']}")
    print(f"output n={fam.n}; sampled max_bad={rep.max_bad} over {rep.subspaces_checked} subspaces; "
          f"L/n={ratio:.3f} (target {cfg.delta})")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for f, v in PrimeConfig.__dataclass_fields__.items():
        ap.add_argument(f"--{f}", type=type(v.default), default=v.default)
    main(PrimeConfig(**vars(ap.parse_args())))
