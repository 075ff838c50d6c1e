"""Command-line interface.

Exit codes: 0 property holds, 1 property violated, 2 bad input, 3 enumeration
budget exceeded without ``--sample``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import blocking as bl
from .algebra.field import field_make, next_prime
from .algebra.subspaces import BudgetExceeded
from .designs import family_to_designs, verify_weak_design
from .extract import MatrixFamily, build_fs, build_gr, is_disperser, measure_badness, random_family
from .fieldreduce import pipeline_prime_field_extractor, pipeline_small_field_disperser
from .funcfield import hermitian_function_field, rational_function_field
from .hitting import build_hitting_family, estimate_hit_fraction, random_rank_one_det, supp
from .serialize import (FORMAT_VERSION, ParseError, badness_to_json, biased_to_json, blocking_to_json,
                        dump, family_to_json, field_to_json, load_artifact)

OK, VIOLATED, BAD_INPUT, OVER_BUDGET = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    output: str | None = None
    format_version: int = FORMAT_VERSION


def _config(args, command: str) -> dict:
    params = {k: v for k, v in vars(args).items() if k not in ("func", "out") and v is not None}
    return asdict(RunConfig(command, params, getattr(args, "out", None)))


def _function_field(args):
    if args.ell is not None:
        FF = hermitian_function_field(args.ell)
        if args.q is not None and args.q != args.ell**2:
            raise ValueError(f"Hermitian field with ell={args.ell} lives over q={args.ell ** 2}, not {args.q}")
        return FF
    if args.q is None:
        raise ValueError("--q is required")
    return rational_function_field(args.q)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError("missing required option(s): " + ", ".join("--" + m for m in missing))


def cmd_construct(args) -> int:
    kind = args.kind
    cfg = _config(args, f"construct {kind}")
    if kind in ("gr", "fs"):
        _require(args, "k", "r")
        if args.r > args.k:
            raise ValueError(f"dimension error: r={args.r} exceeds k={args.k}")
        FF = _function_field(args)
        fam = (build_fs if kind == "fs" else build_gr)(FF, args.r, args.k)
        dump(family_to_json(fam, cfg), args.out)
    elif kind == "random":
        _require(args, "q", "k", "r", "n", "seed")
        dump(family_to_json(random_family(args.q, args.r, args.k, args.n, args.seed), cfg), args.out)
    elif kind == "small-field-disperser":
        _require(args, "q", "k", "r")
        fam = pipeline_small_field_disperser(args.q, args.r, args.k, theta=args.theta)
        dump(family_to_json(fam, cfg), args.out)
    elif kind == "prime-field-extractor":
        _require(args, "q", "k", "r", "delta", "seed")
        fam = pipeline_prime_field_extractor(args.q, args.r, args.k, args.delta,
                                             samples=args.samples or 10, seed=args.seed)
        dump(family_to_json(fam, cfg), args.out)
    elif kind == "biased":
        _require(args, "q", "k", "m")
        S = bl.build_biased_set(args.q, args.k, args.m, args.exponents)
        S.measured_bias = bl.bias(S, args.budget)
        dump(biased_to_json(S, cfg), args.out)
    return OK


def _mode_kwargs(args):
    if args.sample:
        if args.seed is None:
            raise ValueError("--sample needs --seed")
        return {"mode": "sample", "samples": args.sample, "seed": args.seed}
    return {"mode": "exhaustive", "budget": args.budget}


def cmd_verify(args) -> int:
    art = load_artifact(args.artifact)
    cfg = _config(args, f"verify {args.kind}")
    kind = args.kind
    report: dict = {"format_version": FORMAT_VERSION, "type": "Report", "kind": kind, "run_config": cfg}
    if kind in ("extractor", "disperser", "design"):
        if not isinstance(art, MatrixFamily):
            raise ParseError("expected a MatrixFamily artifact")
        kw = _mode_kwargs(args)
        if kind == "design":
            pair = family_to_designs(art)
            side = pair.dual if args.dual else pair.primal
            t = args.t if args.t is not None else (art.r if args.dual else art.k - art.r)
            kw.pop("budget", None) if kw["mode"] == "sample" else None
            rep = verify_weak_design(side, t, **kw)
            claimed = args.L if args.L is not None else art.theoretical_L
            holds = claimed is not None and rep.A_meas <= claimed
            report.update({"A_meas": rep.A_meas, "claimed_A": claimed, "t": t, "dropped": pair.dropped,
                           "subspaces_checked": rep.subspaces_checked, "exhaustive": rep.exhaustive,
                           "holds": holds})
        else:
            rep = measure_badness(art, threads=args.threads, **kw)
            body = badness_to_json(rep, art.field)
            if kind == "disperser":
                holds = rep.max_bad <= art.n - 1
            else:
                claimed = args.L if args.L is not None else art.theoretical_L
                if claimed is None:
                    raise ValueError("family carries no claimed bound; pass --L")
                holds = rep.max_bad <= claimed and claimed < art.n
                body["claimed_L"] = claimed
            report.update(body)
            report["holds"] = holds
    elif kind in ("blocking-strong", "blocking-affine"):
        if not isinstance(art, bl.BlockingSet):
            raise ParseError("expected a BlockingSet artifact")
        s = args.s or 1
        fn = bl.verify_strong_blocking if kind == "blocking-strong" else bl.verify_affine_blocking
        if kind == "blocking-affine" and art.mode != "affine":
            art = bl.BlockingSet("affine", art.field, art.k, art.points, art.meta)
        cert = fn(art, s, budget=args.budget, sample=args.sample or 0, seed=args.seed)
        report.update(asdict(cert))
        holds = cert.holds
    elif kind == "bias":
        if not isinstance(art, bl.BiasedSet):
            raise ParseError("expected a BiasedSet artifact")
        s = args.s or 1
        res = bl.biased_to_blocking(art, s, args.budget)
        report.update({"bias": res.bias, "affine_threshold": res.affine_threshold,
                       "strong_threshold": res.strong_threshold, "affine_ok": res.affine_ok,
                       "strong_ok": res.strong_ok})
        holds = res.affine_ok if args.affine else res.strong_ok
        report["holds"] = holds
    else:
        raise ValueError(f"unknown verification {kind!r}")
    dump(report, args.out)
    return OK if holds else VIOLATED


def cmd_pipeline_blocking(args) -> int:
    if args.s >= args.k:
        raise ValueError(f"need s < k, got s={args.s}, k={args.k}")
    cfg = _config(args, "pipeline-blocking")
    stage = "disperser"
    try:
        fam = pipeline_small_field_disperser(args.q, args.s + 1, args.k, theta=args.theta)
        stage = "blocking"
        B = bl.disperser_to_blocking(fam, args.s)
        stage = "verification"
        cert = bl.verify_strong_blocking(B, args.s, budget=args.budget)
    except BudgetExceeded:
        raise
    except Exception as exc:
        raise RuntimeError(f"stage {stage} failed: {exc}") from exc
    tables = bl.bound_tables(args.q, args.k, args.s)
    exact, loose = tables.disperser_size_bound(fam.n)
    B.meta.update({"pipeline": fam.meta.get("pipeline"), "strong_lower_bound": tables.b_strong_lower,
                   "size_bound": exact, "size_bound_loose": loose,
                   "at_least_lower_bound": len(B) >= tables.b_strong_lower})
    dump(blocking_to_json(B, asdict(cert), cfg), args.out)
    return OK if cert.holds else VIOLATED


def cmd_hitting(args) -> int:
    cfg = _config(args, f"hitting {args.action}")
    F = field_make(args.p if args.p else next_prime(2**24))
    fam = build_hitting_family(F, args.N, args.delta, s=args.s_weight)
    if args.action == "build":
        dump({"format_version": FORMAT_VERSION, "type": "HittingFamily", "field": field_to_json(F),
              **fam.descriptor(), "run_config": cfg}, args.out)
        return OK
    if args.seed is None:
        raise ValueError("hitting estimate needs --seed")
    rng = np.random.default_rng(args.seed)
    rows = []
    ok = True
    for inst in range(args.instances):
        A = random_rank_one_det(F, args.r, args.N, rng)
        while not supp(A):
            A = random_rank_one_det(F, args.r, args.N, rng)
        est = estimate_hit_fraction(A, fam, args.samples, seed=args.seed * 1000 + inst)
        good = est.fraction >= 1 - args.delta - est.radius
        ok &= good
        rows.append({"instance": inst, "fraction": est.fraction, "radius": est.radius, "passes": good})
    dump({"format_version": FORMAT_VERSION, "type": "HitEstimate", "family": fam.descriptor(),
          "instances": rows, "holds": ok, "run_config": cfg}, args.out)
    return OK if ok else VIOLATED


BENCH_CASES = {
    "fs-hermitian-3": lambda: build_fs(hermitian_function_field(3), 2, 4),
    "gr-hermitian-3": lambda: build_gr(hermitian_function_field(3), 2, 4),
    "fs-rational-11": lambda: build_fs(rational_function_field(11), 2, 5),
    "fs-hermitian-2": lambda: build_fs(hermitian_function_field(2), 2, 6),
}


def cmd_bench(args) -> int:
    names = args.cases or list(BENCH_CASES)
    rows = []
    for name in names:
        if name not in BENCH_CASES:
            raise ValueError(f"unknown bench case {name!r}; choose from {sorted(BENCH_CASES)}")
        fam = BENCH_CASES[name]()
        t0 = time.perf_counter()
        rep = measure_badness(fam, threads=args.threads, budget=args.budget)
        dt = time.perf_counter() - t0
        rows.append({"case": name, "n": fam.n, "theoretical_L": fam.theoretical_L, "max_bad": rep.max_bad,
                     "subspaces": rep.subspaces_checked, "seconds": round(dt, 3)})
        print(f"{name:16s} n={fam.n:3d} L={fam.theoretical_L:3d} max_bad={rep.max_bad:3d} "
              f"subspaces={rep.subspaces_checked:8d} {dt:7.2f}s", file=sys.stderr)
    if args.out:
        dump({"format_version": FORMAT_VERSION, "type": "Bench", "rows": rows,
              "run_config": _config(args, "bench")}, args.out)
    return OK


def cmd_report(args) -> int:
    groups: dict[tuple, list] = {}
    for path in args.inputs:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        if obj.get("type") != "BlockingSet":
            raise ParseError(f"{path} is not a blocking set")
        q = obj["field"]["p"] ** obj["field"]["d"]
        k = obj["k"]
        s = obj.get("meta", {}).get("s") or (obj.get("certificate") or {}).get("s") or 1
        cert = obj.get("certificate")
        groups.setdefault((q, k, s), []).append({
            "source": str(Path(path).name), "method": obj.get("meta", {}).get("source"),
            "size": obj["size"], "verified": bool(cert and cert.get("holds")),
        })
    table = []
    lines = []
    for (q, k, s), rows in sorted(groups.items()):
        tb = bl.bound_tables(q, k, s)
        lines.append(f"q={q} k={k} s={s}  strong lower bound {float(tb.b_strong_lower):.1f}")
        lines.append(f"  {'artifact':32s} {'method':10s} {'size':>6s} {'verified':>9s}")
        for r in rows:
            flag = "yes" if r["verified"] else "UNVERIFIED"
            lines.append(f"  {r['source']:32s} {str(r['method']):10s} {r['size']:6d} {flag:>9s}")
        table.append({"q": q, "k": k, "s": s, "strong_lower_bound": tb.b_strong_lower, "rows": rows})
    print("\n".join(lines))
    if args.out:
        dump({"format_version": FORMAT_VERSION, "type": "Table", "groups": table,
              "run_config": _config(args, "report")}, args.out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rankx", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, sample=False):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--budget", type=int, default=None, help="enumeration budget (env RANKX_BUDGET)")
        p.add_argument("--threads", type=int, default=1)
        if sample:
            p.add_argument("--sample", type=int, default=0, help="check a seeded sample of this size")
            p.add_argument("--seed", type=int, default=None)

    c = sub.add_parser("construct", help="build a family or biased set")
    c.add_argument("kind", choices=["gr", "fs", "random", "small-field-disperser", "prime-field-extractor", "biased"])
    for name, tp in [("q", int), ("ell", int), ("k", int), ("r", int), ("n", int), ("m", int),
                     ("seed", int), ("theta", int), ("delta", float), ("samples", int)]:
        c.add_argument(f"--{name}", type=tp, default=None)
    c.add_argument("--exponents", choices=["coprime", "consecutive"], default="coprime")
    common(c)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check an artifact")
    v.add_argument("kind", choices=["extractor", "disperser", "design", "blocking-strong", "blocking-affine", "bias"])
    v.add_argument("artifact")
    v.add_argument("--s", type=int, default=None)
    v.add_argument("--t", type=int, default=None)
    v.add_argument("--L", type=int, default=None, help="claimed bound (default: the family's own)")
    v.add_argument("--dual", action="store_true", help="check the dual design")
    v.add_argument("--affine", action="store_true", help="bias: test the affine threshold")
    common(v, sample=True)
    v.set_defaults(func=cmd_verify)

    pb = sub.add_parser("pipeline-blocking", help="disperser -> strong blocking set, verified")
    pb.add_argument("--q", type=int, required=True)
    pb.add_argument("--k", type=int, required=True)
    pb.add_argument("--s", type=int, required=True)
    pb.add_argument("--theta", type=int, default=None)
    common(pb)
    pb.set_defaults(func=cmd_pipeline_blocking)

    h = sub.add_parser("hitting", help="hitting-set family tools")
    h.add_argument("action", choices=["build", "estimate"])
    h.add_argument("--p", type=int, default=None, help="prime field order (default next prime after 2^24)")
    h.add_argument("--N", type=int, required=True)
    h.add_argument("--r", type=int, default=2)
    h.add_argument("--delta", type=float, default=0.5)
    h.add_argument("--s-weight", type=int, default=None, help="reduced cycle-count parameter")
    h.add_argument("--samples", type=int, default=500)
    h.add_argument("--instances", type=int, default=1)
    h.add_argument("--seed", type=int, default=None)
    common(h)
    h.set_defaults(func=cmd_hitting)

    b = sub.add_parser("bench", help="time the exhaustive oracle on standard instances")
    b.add_argument("cases", nargs="*")
    common(b)
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("report", help="tabulate blocking sets")
    r.add_argument("inputs", nargs="*")
    r.add_argument("--out", default=None)
    r.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except BudgetExceeded as exc:
        print(f"error: {exc}; rerun with --sample N --seed S", file=sys.stderr)
        return OVER_BUDGET
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
