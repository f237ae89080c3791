"""Command line front end.

Exit codes: 0 success or passing verdict, 1 failing verdict, 2 bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from . import __version__
from .census import delta_H, named_pattern, parse_pattern, triangle_family
from .hypercore import Hypergraph, HypergraphError, b_codegree, degree_table, load, max_degree, save
from .oracles import chromatic_number_exact, max_matching_exact, transversal_number_exact
from .pipeline import (
    CertificateError,
    HypothesisError,
    color_corlin,
    color_cortri,
    eps_partition,
    partition_full,
)
from .process import GENERATORS, generate, random_greedy_is
from .resample import ResampleFailure, rankk_color
from .rng import derive_seed
from . import verify

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
RANDOM_KINDS = {"uniform_random", "partial_steiner", "planted_pattern"}

log = logging.getLogger("hyperchroma")


class InputError(Exception):
    pass


def _configure_logging() -> None:
    level = os.environ.get("HYPERCHROMA_LOG", "quiet").strip().lower()
    if level not in LOG_LEVELS:
        raise InputError(f"HYPERCHROMA_LOG must be one of {', '.join(LOG_LEVELS)}")
    logging.basicConfig(level=LOG_LEVELS[level], format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _seed(value: str) -> int:
    try:
        seed = int(value, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {value!r}")
    if seed < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    return seed


def _patterns(spec: str | None) -> list:
    if not spec:
        return []
    out = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if item == "triangles":
            out.extend(triangle_family())
        elif Path(item).is_file():
            out.append(parse_pattern(Path(item).read_text(), name=Path(item).stem))
        else:
            out.append(named_pattern(item))
    return out


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def _require_seed(args, what: str) -> int:
    if args.seed is None:
        raise InputError(f"{what} is randomized and needs an explicit --seed")
    return args.seed


# -- subcommands ----------------------------------------------------------------------------


def cmd_gen(args) -> int:
    params = {}
    for key in ("n", "m", "k", "copies"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    if args.kind == "planted_pattern":
        if not args.base or not args.pattern:
            raise InputError("planted_pattern needs --base FILE and --pattern NAME")
        params["base"] = load(args.base)
        params["pattern"] = args.pattern
    seed = _require_seed(args, f"gen {args.kind}") if args.kind in RANDOM_KINDS else (args.seed or 0)
    G = generate(args.kind, params, seed)
    comment = f"{args.kind} " + " ".join(f"{k}={v}" for k, v in sorted(params.items()) if k != "base")
    if args.kind in RANDOM_KINDS:
        comment += f" seed={seed}"
    if args.out:
        save(G, args.out, comment=comment.strip())
    print(f"generated {args.kind}: n={G.vertex_count} k={G.rank} m={len(G)}")
    return EXIT_OK


def cmd_stats(args) -> int:
    G = load(args.file)
    k = G.rank
    print(f"n = {G.vertex_count}")
    print(f"k = {k}")
    print(f"m = {len(G)}")
    for j in range(2, k + 1):
        print(f"Delta_{j} = {max_degree(G, j)}")
    for (j, l), value in sorted(degree_table(G).items()):
        if 2 <= l < j:
            print(f"Delta_{{{j},{l}}} = {value}")
    for b in range(1, k):
        print(f"Gamma_{b} = {b_codegree(G, b)}")
    patterns = _patterns(args.pattern) or (triangle_family() if k == 3 else [])
    for P in patterns:
        value, root = delta_H(G, P)
        print(f"Delta_H[{P.label()}] = {value} (root {root})")
    if args.out:
        data = {
            "n": G.vertex_count,
            "k": k,
            "m": len(G),
            "degrees": {f"{j},{l}": v for (j, l), v in sorted(degree_table(G).items())},
            "codegrees": {str(b): b_codegree(G, b) for b in range(1, k)},
            "delta_H": {P.label(): delta_H(G, P)[0] for P in patterns},
        }
        _write(args.out, json.dumps(data, sort_keys=True, indent=1) + "\n")
    return EXIT_OK


def cmd_color(args) -> int:
    G = load(args.file)
    if args.method == "exact":
        chi, coloring = chromatic_number_exact(G)
        print(f"chi = {chi}")
        if G.vertex_count <= 20:
            tau, _ = transversal_number_exact(G)
            print(f"tau = {tau}")
            print(f"matching = {max_matching_exact(G)}")
        result = {"method": "exact", "colors": chi, "coloring": coloring}
    else:
        seed = _require_seed(args, f"color --method {args.method}")
        if args.method == "rankk":
            res = rankk_color(G, seed)
            used = len(set(res.coloring))
            print(f"r = {res.r}")
            print(f"colors used = {used}")
            print(f"resamples = {res.resamples}")
            result = {"method": "rankk", "r": res.r, "colors": used, "coloring": res.coloring, "resamples": res.resamples}
        else:
            if args.f is None:
                raise InputError(f"--method {args.method} needs --f")
            fn = color_corlin if args.method == "corlin" else color_cortri
            res = fn(G, args.f, seed)
            print(f"colors = {res.num_colors}")
            print(f"route = {res.route}")
            if res.parts is not None:
                print(f"parts = {len(res.parts.parts)}")
            result = {
                "method": args.method,
                "colors": res.num_colors,
                "route": res.route,
                "coloring": res.coloring,
                "details": res.details,
            }
    _write(args.out, json.dumps(result, sort_keys=True, indent=1, default=str) + "\n")
    return EXIT_OK


def cmd_partition(args) -> int:
    G = load(args.file)
    patterns = _patterns(args.patterns)
    seed = _require_seed(args, "partition")
    omega = args.omega
    if args.eps is not None:
        res = eps_partition(G, patterns, args.eps, omega, seed, delta=args.delta)
    else:
        if args.f is None:
            raise InputError("partition needs --eps or --f")
        res = partition_full(G, patterns, args.f, omega, seed, delta=args.delta)
    print(f"parts = {len(res.parts)}")
    print(f"certified = {all(c.ok for c in res.certificates)}")
    for key in ("r", "T", "part_bound", "scale"):
        if key in res.meta:
            print(f"{key} = {res.meta[key]}")
    _write(args.out, res.to_json() + "\n")
    return EXIT_OK


def _greedy_trial(payload: tuple[Hypergraph, int]) -> tuple[int, list[int], list[int]]:
    G, seed = payload
    tr = random_greedy_is(G, seed)
    return seed, tr.independent_set, tr.eligible_counts


def cmd_greedy(args) -> int:
    G = load(args.file)
    seed = _require_seed(args, "greedy")
    if args.trials < 1:
        raise InputError("--trials must be positive")
    seeds = [derive_seed(seed, t) for t in range(args.trials)]
    payloads = [(G, s) for s in seeds]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_greedy_trial, payloads))
    else:
        results = [_greedy_trial(p) for p in payloads]
    sizes = [len(r[1]) for r in results]
    print(f"trials = {len(sizes)}")
    print(f"mean |I| = {sum(sizes) / len(sizes):.6g}")
    print(f"min |I| = {min(sizes)}")
    print(f"max |I| = {max(sizes)}")
    if args.out:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "seed", "size"])
        for t, (s, chosen, _) in enumerate(results):
            w.writerow([t, s, len(chosen)])
        _write(args.out, buf.getvalue())
    if args.trace:
        s, chosen, eligible = results[0]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "chosen_vertex", "eligible_count"])
        for step, (v, c) in enumerate(zip(chosen, eligible)):
            w.writerow([step, v, c])
        _write(args.trace, buf.getvalue())
    return EXIT_OK


def cmd_verify(args) -> int:
    check = args.check
    if check == "seqclaim":
        rep = verify.check_seqclaim(args.a, args.b, args.m, args.g, args.d0, args.steps)
    elif check == "heavybound":
        rep = verify.check_heavybound(_need_file(args), args.p, args.alpha)
    elif check == "tail":
        rep = verify.mc_transversal_tail(_need_file(args), args.p, args.alpha, args.c, args.trials, _require_seed(args, "verify tail"))
    elif check == "ctlemma":
        A = [int(x) for x in args.A.split(",") if x.strip()] if args.A else []
        rep = verify.check_ctlemma(_need_file(args), A, args.h, args.omega)
    elif check == "events":
        G = _need_file(args)
        rep = verify.mc_event_frequencies(
            G, _patterns(args.patterns), mode=args.mode, epsilon=args.eps, trials=args.trials,
            seed=_require_seed(args, "verify events"),
        )
    elif check == "perturbation":
        rep = verify.perturbation_check(_need_file(args))
    elif check == "moments":
        m = verify.compute_polynomial_moments(_need_file(args), args.p)
        print("M = " + " ".join(f"{x:.6g}" for x in m.levels))
        print("M_cumulative = " + " ".join(f"{x:.6g}" for x in m.cumulative))
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts the choices
        raise InputError(f"unknown check {check!r}")
    print(f"{rep.name}: {rep.verdict}")
    for key, value in rep.details.items():
        if isinstance(value, (int, float, str, bool)) or value is None:
            print(f"  {key} = {value}")
    _write(args.out, rep.to_csv())
    return EXIT_FAIL if rep.verdict == verify.FAIL else EXIT_OK


def _need_file(args) -> Hypergraph:
    if not args.file:
        raise InputError(f"verify {args.check} needs --file")
    return load(args.file)


# -- parser ------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyperchroma", description="Sparse hypergraph coloring toolkit.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("kind", choices=GENERATORS)
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--copies", type=int)
    g.add_argument("--base", help="base instance file (planted_pattern)")
    g.add_argument("--pattern", help="pattern name (planted_pattern)")
    g.add_argument("--seed", type=_seed)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("stats", help="degree, codegree and pattern-degree tables")
    s.add_argument("file")
    s.add_argument("--pattern", help="comma-separated pattern names or files")
    s.add_argument("--out")
    s.set_defaults(func=cmd_stats)

    c = sub.add_parser("color", help="color an instance")
    c.add_argument("file")
    c.add_argument("--method", choices=["rankk", "corlin", "cortri", "exact"], required=True)
    c.add_argument("--f", type=float)
    c.add_argument("--seed", type=_seed)
    c.add_argument("--out")
    c.set_defaults(func=cmd_color)

    p = sub.add_parser("partition", help="partition into pattern-free sparse parts")
    p.add_argument("file")
    p.add_argument("--patterns", default="", help="comma-separated names (C3,F5,K4-,H<l>:<k>,triangles) or files")
    p.add_argument("--f", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--seed", type=_seed)
    p.add_argument("--out")
    p.set_defaults(func=cmd_partition)

    gr = sub.add_parser("greedy", help="random greedy independent set trials")
    gr.add_argument("file")
    gr.add_argument("--trials", type=int, default=1)
    gr.add_argument("--jobs", type=int, default=1)
    gr.add_argument("--seed", type=_seed)
    gr.add_argument("--out", help="per-trial summary CSV")
    gr.add_argument("--trace", help="trace CSV of the first trial")
    gr.set_defaults(func=cmd_greedy)

    v = sub.add_parser("verify", help="run a verification check")
    v.add_argument("check", choices=["seqclaim", "heavybound", "tail", "ctlemma", "events", "perturbation", "moments"])
    v.add_argument("--file")
    v.add_argument("--a", type=float, default=1)
    v.add_argument("--b", type=float, default=1)
    v.add_argument("--m", type=float, default=2)
    v.add_argument("--g", type=float, default=1.0)
    v.add_argument("--d0", type=float, default=1e6)
    v.add_argument("--steps", type=int, default=20)
    v.add_argument("--p", type=float, default=0.1)
    v.add_argument("--alpha", type=float, default=0.5)
    v.add_argument("--c", type=float, default=20.0)
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--A", default="")
    v.add_argument("--h", type=int, default=4)
    v.add_argument("--omega", type=float, default=1.0)
    v.add_argument("--mode", choices=["eps", "halving"], default="halving")
    v.add_argument("--eps", type=float)
    v.add_argument("--patterns", default="")
    v.add_argument("--seed", type=_seed)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: usage errors exit 2, --help/--version exit 0
        return int(exc.code or 0)
    try:
        _configure_logging()
        return args.func(args)
    except (InputError, HypergraphError, HypothesisError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ResampleFailure, CertificateError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
