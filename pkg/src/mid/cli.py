"""``mid``: command-line front end.

Exit codes: 0 success, 2 usage or unreadable input, 3 domain error, 4 budget
exceeded.  Every artifact records the tool version, compressor id, seed and
budgets of the run that produced it.
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import __version__
from .compressors import CompressorError, default_source
from .core import ListEncodingError, all_bitstrings, canonicalize
from .estimators import (NORM_MAX_SUBLIST, NORMALIZED_SCHEMES, PAIR_SCHEMES, SCHEMES, EstimatorError,
                         distance_matrix, list_distance)
from .harness import (LINKAGES, ClusterError, HarnessError, ListSampler, additivity_demo, cluster,
                      inequality_chain_check, metric_check, minimal_overlap_demo, normalization_violation_demo)
from .harness.reports import ViolationReport
from .overlap import OverlapError, random_instance, roundtrip
from .toylab import (DEFAULT_L, DEFAULT_S, BudgetError, admissible_offset, coding_check, density_all,
                     dominance_check, emax_table, hamming_distance, literal_length, oracle, soi_residual,
                     toy_universe)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_BUDGET = 0, 2, 3, 4

SUITES = ("metric", "additivity", "normalization", "chain", "minimal-overlap")
LAB_OPS = ("complexity", "apriori", "soi", "coding", "density", "dominance", "overlap")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    compressor: str
    cache: Optional[str]
    seed: int
    fmt: str
    out: Optional[str] = None
    jobs: int = 1
    scheme: Optional[str] = None
    budgets: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(compressor=args.compressor or os.environ.get("MID_COMPRESSOR") or "builtin",
                   cache=args.cache or os.environ.get("MID_CACHE"),
                   seed=args.seed, fmt=args.format, out=args.out, jobs=args.jobs,
                   scheme=getattr(args, "scheme", None))

    def source(self):
        return default_source(self.cache, self.compressor)

    def meta(self, compressor_id: Optional[str] = None) -> dict:
        return {"tool": "mid", "version": __version__, "compressor": compressor_id,
                "seed": self.seed, "scheme": self.scheme, "budgets": self.budgets}


def _emit(cfg: RunConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _comment(meta: dict) -> str:
    return " ".join(f"{k}={json.dumps(v, sort_keys=True)}" for k, v in meta.items())


def _read(paths) -> list[tuple[str, bytes]]:
    items = []
    for p in paths:
        try:
            with open(p, "rb") as fh:
                items.append((os.path.basename(p) or p, fh.read()))
        except OSError as exc:
            raise UsageError(f"cannot read {p}: {exc.strerror or exc}") from None
    return items


# ---------------------------------------------------------------------------
# subcommands


def cmd_matrix(args, cfg: RunConfig) -> int:
    if len(args.paths) < 2:
        raise UsageError("matrix needs at least two files")
    items = _read(args.paths)
    labels = [label for label, _ in items]
    if len(set(labels)) != len(labels):
        items = [(p, data) for p, (_, data) in zip(args.paths, items)]
    src = cfg.source()
    M = distance_matrix(items, cfg.scheme, src, jobs=cfg.jobs)
    M.meta = cfg.meta(src.id)
    if cfg.fmt == "json":
        _emit(cfg, M.to_json())
    elif cfg.fmt == "csv":
        _emit(cfg, "# " + _comment(M.meta) + "\n" + M.to_csv())
    else:
        width = max(len(label) for label in M.labels)
        lines = [f"# {_comment(M.meta)}"]
        lines += [f"{label:<{width}}  " + " ".join(f"{v:8.4f}" for v in row) for label, row in zip(M.labels, M.entries)]
        _emit(cfg, "\n".join(lines))
    return EXIT_OK


def cmd_list(args, cfg: RunConfig) -> int:
    if not args.paths:
        raise UsageError("list needs at least one file")
    items = _read(args.paths)
    X = canonicalize([data for _, data in items])
    src = cfg.source()
    report = list_distance(X, cfg.scheme, src)
    doc = {"schema": "mid.list-report/1", "files": [label for label, _ in items],
           "m": X.m, "report": report.to_dict(), "meta": cfg.meta(src.id)}
    if cfg.fmt == "text":
        den = "" if report.denominator_bits is None else f" / {report.denominator_bits:g}"
        _emit(cfg, f"{report.scheme} {report.value!r} ({report.numerator_bits:g}{den} bits)")
    else:
        _emit(cfg, json.dumps(doc, indent=1))
    return EXIT_OK


def _run_suite(args, cfg: RunConfig, src) -> list:
    suite = args.suite
    if suite == "metric":
        cfg.budgets = {"trials": args.trials}
        return list(metric_check(ListSampler(cfg.seed), src, args.trials, cfg.seed))
    if suite == "additivity":
        cfg.budgets = {"n": args.n or 8000}
        return [additivity_demo(args.n or 8000, src, cfg.seed)]
    if suite == "normalization":
        cfg.budgets = {"n": args.n or 10_000}
        schemes = [cfg.scheme] if cfg.scheme else list(NORMALIZED_SCHEMES)
        return [normalization_violation_demo(args.n or 10_000, s, src, cfg.seed) for s in schemes]
    if suite == "chain":
        cfg.budgets = {"trials": args.trials}
        sampler = iter(ListSampler(cfg.seed, m=(3, 5)))
        return [inequality_chain_check(next(sampler), src) for _ in range(args.trials)]
    if suite == "minimal-overlap":
        cfg.budgets = {"n": args.n or 8000}
        return [minimal_overlap_demo(args.n or 8000, src, cfg.seed)]
    raise UsageError(f"unknown suite {suite!r}")


def cmd_check(args, cfg: RunConfig) -> int:
    if cfg.scheme is not None and cfg.scheme not in NORMALIZED_SCHEMES:
        raise UsageError(f"--scheme must be one of {', '.join(NORMALIZED_SCHEMES)}")
    src = cfg.source()
    reports = _run_suite(args, cfg, src)
    passed = all(r.passed for r in reports)
    doc = {"schema": "mid.report/1", "suite": args.suite, "passed": passed,
           "reports": [r.to_dict() for r in reports], "meta": cfg.meta(src.id)}
    if cfg.fmt == "text":
        lines = [f"# {_comment(doc['meta'])}"]
        for r in reports:
            if isinstance(r, ViolationReport):
                lines.append(f"{r.property}: {'pass' if r.passed else 'FAIL'} worst slack {r.worst_slack:g} "
                             f"allowance {r.allowance:g} violations {len(r.violations())}/{len(r.records)}")
            else:
                lines.append(f"{r.name}: {'pass' if r.passed else 'FAIL'} {json.dumps(r.checks, sort_keys=True)}")
        lines.append(f"suite {args.suite}: {'pass' if passed else 'FAIL'}")
        _emit(cfg, "\n".join(lines))
    else:
        _emit(cfg, json.dumps(doc, indent=1))
    return EXIT_OK if passed else 1


def _bitstring(s: Optional[str], what: str) -> str:
    s = s or ""
    if s.strip("01"):
        raise UsageError(f"{what} must be a bit string, got {s!r}")
    return s


def _lab(args, cfg: RunConfig) -> dict:
    L, S = args.L, args.S
    op = args.op
    if op in ("complexity", "apriori"):
        cfg.budgets = {"L": L, "S": S}
        x, y = _bitstring(args.target, "--target"), _bitstring(args.condition, "--condition")
        c, q = oracle(L, S).lookup(x, y)
        return {"target": x, "condition": y, "bits": c, "absent": c is None, "apriori": q}
    if op == "soi":
        cfg.budgets = {"L": L, "S": S, "max_len": args.max_len}
        strings = all_bitstrings(args.max_len)
        resolved, unresolved, worst, lo, hi = 0, 0, None, None, None
        for x, y in itertools.combinations_with_replacement(strings, 2):
            r = soi_residual(x, y, L, S)
            if r is None:
                unresolved += 1
                continue
            resolved += 1
            if worst is None or r.worst > worst["residual"]:
                worst = {"x": x, "y": y, "residual": r.worst}
            lo = min(v for v in (lo, r.xy, r.yx) if v is not None)
            hi = max(v for v in (hi, r.xy, r.yx) if v is not None)
        return {"pairs": resolved + unresolved, "resolved": resolved, "unresolved": unresolved,
                "max_abs_residual": None if worst is None else worst["residual"], "worst": worst,
                "min_residual": lo, "max_residual": hi}
    if op == "coding":
        cfg.budgets = {"L": L, "S": S, "max_len": args.max_len}
        vals = {x: coding_check(x, L, S) for x in all_bitstrings(args.max_len)}
        got = [v for v in vals.values() if v is not None]
        return {"strings": len(vals), "resolved": len(got), "unresolved": len(vals) - len(got),
                "min_residual": min(got, default=None), "max_residual": max(got, default=None),
                "max_abs_residual": max((abs(v) for v in got), default=None)}
    if op in ("density", "dominance"):
        cfg.budgets = {"L": L, "S": S, "max_m": args.max_m, "max_len": args.max_len}
        universe = toy_universe(args.max_m, args.max_len)
        emax = emax_table(universe, L, S)
        if op == "density":
            reps = density_all(emax, universe)
            return {"lists": len(universe), "anchors": len(reps), "passed": all(r.passed for r in reps),
                    "max_sum": max((r.sum for r in reps), default=0.0),
                    "unresolved_lists": sum(v is None for v in emax.values())}
        lit = literal_length
        ham0 = hamming_distance(0.0)
        family = {
            "emax": emax,
            "emax+5": {X: (None if v is None else v + 5) for X, v in emax.items()},
            "literal": lit,
            "hamming": hamming_distance(float(admissible_offset(ham0, universe))),
            "constant-1": lambda X: 1.0,
        }
        out = {}
        for name, D in family.items():
            r = dominance_check(D, universe, emax)
            out[name] = {"c": r.c, "admissible": r.admissible, "passed": r.passed,
                         "checked": r.checked, "unresolved": r.unresolved, "density_failures": len(r.failures)}
        return {"lists": len(universe), "candidates": out}
    if op == "overlap":
        cfg.budgets = {"m": args.m, "k1": args.k1, "k2": args.k2, "instances": args.instances}
        rng = random.Random(cfg.seed)
        insts = [random_instance(rng, m=args.m, k1=args.k1, k2=args.k2) for _ in range(args.instances)]
        rt = roundtrip(insts)
        return {"instances": rt.instances, "vectors": rt.vectors, "trials": rt.trials, "failures": rt.failures,
                "build_errors": rt.build_errors, "round_trip_rate": rt.rate,
                "max_degree_ok": rt.max_degree_ok, "color_width_ok": rt.color_width_ok, "passed": rt.passed}
    raise UsageError(f"unknown lab op {op!r}")


def cmd_lab(args, cfg: RunConfig) -> int:
    result = _lab(args, cfg)
    doc = {"schema": "mid.lab/1", "op": args.op, "result": result,
           "meta": cfg.meta(None if args.op == "overlap" else oracle(args.L, args.S).machine)}
    if cfg.fmt == "text":
        _emit(cfg, f"# {_comment(doc['meta'])}\n" + "\n".join(f"{k}: {json.dumps(v)}" for k, v in result.items()))
    else:
        _emit(cfg, json.dumps(doc, indent=1))
    return EXIT_OK


def cmd_cluster(args, cfg: RunConfig) -> int:
    if len(args.paths) < 2:
        raise UsageError("cluster needs at least two files")
    items = _read(args.paths)
    src = cfg.source()
    cfg.scheme = cfg.scheme or "ncd"
    M = distance_matrix(items, cfg.scheme, src, jobs=cfg.jobs)
    tree = cluster(M, args.linkage)
    meta = cfg.meta(src.id)
    meta["linkage"] = args.linkage
    if cfg.fmt == "json":
        _emit(cfg, json.dumps({"schema": "mid.tree/1", "newick": tree.newick(),
                               "merges": [list(m) for m in tree.merges], "meta": meta}, indent=1))
    else:
        # Newick comments are square-bracketed and ignored by readers
        _emit(cfg, f"[{_comment(meta)}]" + tree.newick())
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--compressor", help="builtin, xz, gzip, bzip2 or a command line (env MID_COMPRESSOR)")
    common.add_argument("--cache", help="size cache file (env MID_CACHE)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--out", help="write the artifact here instead of stdout")
    common.add_argument("--jobs", type=int, default=1)

    p = argparse.ArgumentParser(prog="mid", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"mid {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("matrix", parents=[common], help="pairwise distance matrix of files")
    m.add_argument("paths", nargs="*")
    m.add_argument("--scheme", choices=PAIR_SCHEMES, default="ncd")
    m.set_defaults(func=cmd_matrix, default_format="json")

    li = sub.add_parser("list", parents=[common], help="distance of the list of files")
    li.add_argument("paths", nargs="*")
    li.add_argument("--scheme", choices=SCHEMES + NORMALIZED_SCHEMES, default="emax")
    li.set_defaults(func=cmd_list, default_format="json")

    c = sub.add_parser("check", parents=[common], help="property suites and constructions")
    c.add_argument("--suite", choices=SUITES, required=True)
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--n", type=int, default=None, help="string length in bits")
    c.add_argument("--scheme", choices=NORMALIZED_SCHEMES, default=None)
    c.set_defaults(func=cmd_check, default_format="json")

    lab = sub.add_parser("lab", parents=[common], help="exact toy-machine and overlap experiments")
    lab.add_argument("--op", choices=LAB_OPS, required=True)
    lab.add_argument("--target")
    lab.add_argument("--condition", default="")
    lab.add_argument("--L", type=int, default=DEFAULT_L)
    lab.add_argument("--S", type=int, default=DEFAULT_S)
    lab.add_argument("--max-len", type=int, default=None)
    lab.add_argument("--max-m", type=int, default=3)
    lab.add_argument("--m", type=int, default=2)
    lab.add_argument("--k1", type=int, default=1)
    lab.add_argument("--k2", type=int, default=2)
    lab.add_argument("--instances", type=int, default=50)
    lab.set_defaults(func=cmd_lab, default_format="json")

    cl = sub.add_parser("cluster", parents=[common], help="hierarchical clustering of files as Newick")
    cl.add_argument("paths", nargs="*")
    cl.add_argument("--linkage", choices=LINKAGES, default="average")
    cl.add_argument("--scheme", choices=PAIR_SCHEMES, default="ncd")
    cl.set_defaults(func=cmd_cluster, default_format="text")
    return p


_MAX_LEN_DEFAULTS = {"soi": 6, "coding": 8, "density": 5, "dominance": 5}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    if getattr(args, "max_len", False) is None:
        args.max_len = _MAX_LEN_DEFAULTS.get(args.op, 5)
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    cfg = RunConfig.from_args(args)
    try:
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"mid: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print(f"mid: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (EstimatorError, ListEncodingError, ClusterError, OverlapError, HarnessError, ValueError) as exc:
        print(f"mid: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except CompressorError as exc:
        print(f"mid: compressor error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
