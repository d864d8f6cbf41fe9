"""Command-line interface: ``tope-committees SUBCOMMAND ...``.

Exit status is 0 on success (and agreement), 1 when some method disagrees
with brute force, 2 on usage or validation errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import blocking, convex, cross, formulas
from .bits import mask_of
from .errors import TopeError
from .generate import random_realizable
from .om import format_topes, parse_topes, validate
from .oracle import kappa_sweep

EXIT_OK, EXIT_DISAGREE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    path: str | None = None
    k_range: list | None = None
    methods: tuple = ()
    ell: str = "auto"
    variants: tuple = ()
    seed: object = None
    out: str = "json"
    threads: int = 1
    extra: dict = field(default_factory=dict)


def parse_k_range(text: str) -> list:
    """``"5"`` or ``"3..7"`` (inclusive)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k range {text!r}, expected A..B") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty k range {text!r}")
    return list(range(lo, hi + 1))


def parse_ratio(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad ratio {text!r}, expected P/Q") from None


def read_antichain(path, signed: bool = False) -> list:
    """One set per line, comma-separated integers; ``#`` starts a comment."""
    sets = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            items = [int(x) for x in line.replace(" ", "").split(",") if x]
        except ValueError:
            raise UsageError(f"{path}:{lineno}: expected comma-separated integers") from None
        if not signed and any(x <= 0 for x in items):
            raise UsageError(f"{path}:{lineno}: elements must be positive")
        sets.append(items)
    return sets


def _load(path):
    try:
        return parse_topes(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _ms(seconds: float) -> float:
    return round(seconds * 1000, 3)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_validate(cfg: RunConfig) -> int:
    om = _load(cfg.path)
    problems = validate(om)
    if cfg.out == "json":
        _emit(json.dumps({"instance": {"t": om.t, "num_topes": om.num_topes},
                          "valid": not problems,
                          "violations": [{"kind": v.kind, "message": v.message} for v in problems]},
                         indent=2))
    else:
        _emit(f"t={om.t} topes={om.num_topes} " + ("valid" if not problems else "invalid"))
        for v in problems:
            _emit(f"{v.kind}\t{v.message}")
    return EXIT_OK if not problems else EXIT_USAGE


def _brute_kappa(om, cfg: RunConfig) -> int:
    start = time.perf_counter()
    rep = kappa_sweep(om, cfg.k_range, variants=cfg.variants, workers=cfg.threads)
    if cfg.out == "tsv":
        _emit(rep.to_tsv())
        return EXIT_OK
    elapsed = _ms(time.perf_counter() - start)
    results = []
    for variant in ("kappa", "kappa_free", "kappa_min", "kappa_maxplus", "n_star"):
        values = getattr(rep, variant)
        if values is None:
            continue
        for k in rep.k_range:
            results.append({"k": k, "method": "brute", "variant": variant, "value": values[k],
                            "elapsed_ms": None, "agrees": None})
    totals = {key: rep.total(key) for key in ("kappa", "kappa_free", "kappa_min", "kappa_maxplus")
              if getattr(rep, key) is not None}
    totals["elapsed_ms"] = elapsed
    _emit(json.dumps({"instance": {"t": om.t, "num_topes": om.num_topes},
                      "results": results, "totals": totals}, indent=2))
    return EXIT_OK


def _emit_crosscheck(report, cfg: RunConfig) -> int:
    if cfg.out == "tsv":
        _emit(report.to_tsv())
    else:
        d = report.to_dict()
        d["results"] = [{"k": c["k"], "method": c["method"], "variant": c["variant"],
                         "value": c["value"], "oracle": c["oracle"],
                         "elapsed_ms": _ms(c["elapsed"]), "agrees": c["agrees"],
                         "error": c["error"]} for c in d["results"]]
        _emit(json.dumps(d, indent=2))
    return EXIT_OK if report.ok else EXIT_DISAGREE


def cmd_kappa(cfg: RunConfig) -> int:
    om = _load(cfg.path)
    method = cfg.methods[0] if cfg.methods else "brute"
    if method == "brute":
        return _brute_kappa(om, cfg)
    free = "free" in cfg.variants
    N = om.num_topes
    ks = cfg.k_range or list(range(3, (N // 2 if free else N - 3) + 1))
    if method == "all":
        names = formulas.FREE_METHODS if free else formulas.METHODS
        report = formulas.crosscheck(om, ks, methods=() if free else names,
                                     free_methods=names if free else (), ell=cfg.ell,
                                     workers=cfg.threads)
        return _emit_crosscheck(report, cfg)
    name = formulas.CLI_NAMES.get(method, method)
    rows = []
    for k in ks:
        if free:
            res = formulas.free_committee_sum(om, k, name)
        else:
            res = formulas.committee_sum(om, k, name, ell=cfg.ell)
        rows.append({"k": k, "method": method, "variant": "kappa_free" if free else "kappa",
                     "value": res.value, "ell": res.ell, "elapsed_ms": _ms(res.elapsed),
                     "agrees": None})
    if cfg.out == "tsv":
        _emit("k\tmethod\tvalue\n" + "\n".join(f"{r['k']}\t{method}\t{r['value']}" for r in rows))
    else:
        _emit(json.dumps({"instance": {"t": om.t, "num_topes": N}, "results": rows,
                          "totals": {"value": sum(r["value"] for r in rows)}}, indent=2))
    return EXIT_OK


def cmd_crosscheck(cfg: RunConfig) -> int:
    om = _load(cfg.path)
    methods = cfg.methods or formulas.METHODS
    free_methods = [m for m in methods if formulas.CLI_NAMES.get(m, m) in formulas.FREE_METHODS]
    report = formulas.crosscheck(om, cfg.k_range, methods=methods, free_methods=free_methods,
                                 ell=cfg.ell, workers=cfg.threads)
    return _emit_crosscheck(report, cfg)


def cmd_gen(cfg: RunConfig) -> int:
    t, d = cfg.extra["t"], cfg.extra["dim"]
    om = random_realizable(t, d, cfg.seed)
    text = format_topes(om, f"random realizable t={t} d={d} seed={cfg.seed}")
    if cfg.path and cfg.path != "-":
        Path(cfg.path).write_text(text)
    else:
        _emit(text)
    return EXIT_OK


def _block_report(instance: dict, names, run, brute, cfg: RunConfig) -> int:
    start = time.perf_counter()
    truth = brute()
    results = [{"method": "brute", "value": truth, "elapsed_ms": _ms(time.perf_counter() - start),
                "agrees": None}]
    for name in names:
        start = time.perf_counter()
        try:
            value = run(name)
            error = None
        except TopeError as exc:
            value, error = None, f"{type(exc).__name__}: {exc}"
        results.append({"method": name, "value": value,
                        "elapsed_ms": _ms(time.perf_counter() - start),
                        "agrees": None if value is None else value == truth, "error": error})
    bad = [r for r in results if r["agrees"] is False]
    if cfg.out == "tsv":
        _emit("method\tvalue\tagrees\n" + "\n".join(
            f"{r['method']}\t{'' if r['value'] is None else r['value']}\t"
            f"{'' if r['agrees'] is None else str(r['agrees']).lower()}" for r in results))
    else:
        _emit(json.dumps({"instance": instance, "results": results,
                          "totals": {"methods": len(results) - 1, "disagree": len(bad),
                                     "skipped": sum(1 for r in results[1:] if r["value"] is None)}},
                         indent=2))
    return EXIT_DISAGREE if bad else EXIT_OK


def _single_block(instance: dict, method: str, value: int, cfg: RunConfig) -> int:
    if cfg.out == "tsv":
        _emit(f"method\tvalue\n{method}\t{value}")
    else:
        _emit(json.dumps({"instance": instance,
                          "results": [{"method": method, "value": value, "elapsed_ms": None,
                                       "agrees": None}],
                          "totals": {"value": value}}, indent=2))
    return EXIT_OK


def cmd_bool_block(cfg: RunConfig) -> int:
    x = cfg.extra
    if x["antichain"]:
        masks = tuple(mask_of(i - 1 for i in s) for s in read_antichain(x["antichain"]))
    else:
        count, size, seed = x["random"]
        masks = blocking.random_antichain(x["n"], count, size, seed)
    inst = blocking.BlockingInstance(x["n"], masks, x["r"], x["k"])
    st = blocking.check_constraints(inst)
    instance = {"n": inst.n, "antichain": inst.sets(), "r": str(inst.r), "k": inst.k,
                "nu": inst.nu, "rank_window": st.rank_window, "rank_floor": st.rank_floor}
    method = cfg.methods[0] if cfg.methods else "all"
    if method == "all":
        return _block_report(instance, list(blocking.ALL_METHODS),
                             lambda name: blocking.run_method(inst, name),
                             lambda: blocking.brute_blockers(inst), cfg)
    if method != "brute" and method not in blocking.ALL_METHODS:
        raise UsageError(f"unknown method {method!r}")
    return _single_block(instance, method, blocking.run_method(inst, method), cfg)


def cmd_cross_block(cfg: RunConfig) -> int:
    x = cfg.extra
    sets = read_antichain(x["antichain"], signed=True)
    inst = cross.CrossInstance.from_sets(x["m"], sets, x["r"], x["k"])
    instance = {"m": inst.m, "antichain": inst.sets(), "r": str(inst.r), "k": inst.k,
                "nu": inst.nu}
    method = cfg.methods[0] if cfg.methods else "all"
    if method == "all":
        return _block_report(instance, list(cross.CLI_METHODS),
                             lambda name: cross.count_blockers_cross(inst, cross.CLI_METHODS[name]),
                             lambda: cross.brute_blockers_cross(inst), cfg)
    if method == "brute":
        return _single_block(instance, method, cross.brute_blockers_cross(inst), cfg)
    if method not in cross.CLI_METHODS:
        raise UsageError(f"unknown method {method!r}")
    return _single_block(instance, method,
                         cross.count_blockers_cross(inst, cross.CLI_METHODS[method]), cfg)


def cmd_convex(cfg: RunConfig) -> int:
    om = _load(cfg.path)
    lat = convex.convex_sets(om)
    out = {"instance": {"t": om.t, "num_topes": om.num_topes},
           "convex_sets": len(lat), "free_sets": len(lat.free_sets()),
           "by_size": {str(s): row for s, row in lat.summary().items()}}
    status = EXIT_OK
    layer = cfg.extra.get("layer")
    if layer is not None:
        direct = convex.ideal_layer_count(om, layer, "Direct")
        free = convex.ideal_layer_count(om, layer, "FreeSets", lat)
        out["layer"] = {"j": layer, "Direct": direct, "FreeSets": free, "agrees": direct == free}
        status = EXIT_OK if direct == free else EXIT_DISAGREE
    if cfg.out == "tsv":
        lines = ["size\tconvex\tfree"]
        lines += [f"{s}\t{row['convex']}\t{row['free']}" for s, row in lat.summary().items()]
        if layer is not None:
            lines.append(f"# layer {layer}: Direct={out['layer']['Direct']} "
                         f"FreeSets={out['layer']['FreeSets']}")
        _emit("\n".join(lines))
    else:
        _emit(json.dumps(out, indent=2))
    return status


COMMANDS = {
    "validate": cmd_validate, "kappa": cmd_kappa, "crosscheck": cmd_crosscheck, "gen": cmd_gen,
    "bool-block": cmd_bool_block, "cross-block": cmd_cross_block, "convex": cmd_convex,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _method_list(text: str) -> tuple:
    return tuple(m.strip() for m in text.split(",") if m.strip())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", choices=("json", "tsv"), default="json",
                        help="report format (for gen: the output file)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker processes (default: available CPUs)")

    p = argparse.ArgumentParser(prog="tope-committees",
                                description="Count tope committees of oriented matroids.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a .topes file")
    s.add_argument("file")

    s = sub.add_parser("kappa", parents=[common], help="committee counts per size")
    s.add_argument("file")
    s.add_argument("--k", type=parse_k_range)
    s.add_argument("--free", action="store_true", help="also (or only) count opposite-free committees")
    s.add_argument("--min", action="store_true", help="count minimal committees (brute only)")
    s.add_argument("--maxplus", action="store_true",
                   help="count committees containing the maximal positive topes (brute only)")
    s.add_argument("--method", default="brute",
                   choices=["brute", "all", *formulas.CLI_NAMES])
    s.add_argument("--ell", default="auto", help="small, large or auto")

    s = sub.add_parser("crosscheck", parents=[common], help="every formula against brute force")
    s.add_argument("file")
    s.add_argument("--k", type=parse_k_range)
    s.add_argument("--methods", type=_method_list, help="comma-separated method names")
    s.add_argument("--ell", default="auto")

    s = sub.add_parser("gen", help="seeded random realizable instance")
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--seed", required=True)
    s.add_argument("--out", default="-", help="output .topes file (default stdout)")

    s = sub.add_parser("bool-block", parents=[common], help="relative blocking in the Boolean lattice")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=parse_ratio, required=True)
    s.add_argument("--k", type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--antichain")
    g.add_argument("--random", nargs=3, type=int, metavar=("COUNT", "SIZE", "SEED"))
    s.add_argument("--method", default="all",
                   choices=["all", "brute", *blocking.ALL_METHODS])

    s = sub.add_parser("cross-block", parents=[common], help="relative blocking on the crosspolytope")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=parse_ratio, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--antichain", required=True)
    s.add_argument("--method", default="all", choices=["all", "brute", *cross.CLI_METHODS])

    s = sub.add_parser("convex", parents=[common], help="convex and free sets")
    s.add_argument("file")
    s.add_argument("--layer", type=int)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(ns.subcommand)
    cfg.threads = max(1, getattr(ns, "threads", 1) or 1)
    if ns.subcommand == "gen":
        cfg.path = ns.out
        cfg.seed = int(ns.seed) if ns.seed.lstrip("-").isdigit() else ns.seed
        cfg.extra = {"t": ns.t, "dim": ns.dim}
        return cfg
    cfg.out = ns.out
    cfg.path = getattr(ns, "file", None)
    cfg.k_range = getattr(ns, "k", None) if ns.subcommand in ("kappa", "crosscheck") else None
    cfg.ell = getattr(ns, "ell", "auto")
    if ns.subcommand == "kappa":
        cfg.methods = (ns.method,)
        cfg.variants = tuple(v for v, on in (("free", ns.free), ("min", ns.min),
                                             ("maxplus", ns.maxplus)) if on)
        if ns.method != "brute" and (ns.min or ns.maxplus):
            raise UsageError("--min and --maxplus are only counted by --method brute")
    elif ns.subcommand == "crosscheck":
        cfg.methods = ns.methods or ()
    elif ns.subcommand in ("bool-block", "cross-block"):
        cfg.methods = (ns.method,)
        cfg.extra = {key: getattr(ns, key, None) for key in ("n", "m", "r", "k", "antichain", "random")}
    elif ns.subcommand == "convex":
        cfg.extra = {"layer": ns.layer}
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TopeError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
