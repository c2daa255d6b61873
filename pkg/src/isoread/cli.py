"""Command-line interface: ``isoread <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import harness
from .automorphism import build_S, enumerate_automorphisms, pair_orbits
from .generators import (
    complete_graph,
    gen_cfi_pair,
    gen_cycle_pair,
    gen_er,
    gen_petersen,
    gen_rook4,
    gen_shrikhande,
)
from .graph import Graph, GraphFormatError, laplacian, load_graph, parse_graph6, write_graph6
from .io import load_features, vector_json
from .readout import READOUT_KINDS, ReadoutConfig, prepare_bundle, readout, sort_blocks
from .search import is_isomorphic
from .symlinalg import block_projectors, group_eigenvalues, sym_eig
from .wl import wl_equivalent


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _graph_arg(value: str) -> Graph:
    """A file (graph6 or edge list) or, if no such file exists, a literal graph6 string."""
    if os.path.exists(value):
        return load_graph(value)
    return parse_graph6(value.encode("ascii"))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _family_graphs(args) -> list[Graph]:
    name = args.family
    if name == "cycles":
        return list(gen_cycle_pair(args.k))
    if name in ("cfi-k3", "cfi-k4"):
        return list(gen_cfi_pair(complete_graph(3 if name == "cfi-k3" else 4)))
    if name == "petersen":
        return [gen_petersen()]
    if name == "gm-petersen":
        return list(harness.gm_petersen_pair())
    if name == "srg16":
        return [gen_shrikhande(), gen_rook4()]
    if name == "shrikhande":
        return [gen_shrikhande()]
    if name == "rook4":
        return [gen_rook4()]
    if name == "er":
        return [gen_er(args.n, args.p, args.seed)]
    raise ValueError(f"unknown family {name!r}")


def cmd_gen(args) -> int:
    graphs = _family_graphs(args)
    _emit("".join(write_graph6(g).decode("ascii") + "\n" for g in graphs), args.out)
    return 0


def cmd_wl_check(args) -> int:
    g, h = _graph_arg(args.first), _graph_arg(args.second)
    out = {"wl_equivalent": wl_equivalent(g, h)}
    if g.n <= 64:
        out["isomorphic"] = is_isomorphic(g, h)
    print(json.dumps(out))
    return 0


def cmd_decompose(args) -> int:
    g = _graph_arg(args.graph)
    auts = enumerate_automorphisms(g, args.cap)
    orbits = pair_orbits(auts, g)
    coeffs = _floats(args.coeffs) if args.coeffs else None
    S = build_S(orbits, coeffs=coeffs, seed=None if coeffs else args.seed)
    eig = sym_eig(S)
    blocks = block_projectors(eig, group_eigenvalues(eig, args.eig_tol))
    A = g.adj.astype(np.float64)
    order, keys = sort_blocks(blocks.projectors, [b.eigenvalue for b in blocks.blocks], A, laplacian(g))
    reps = []
    for t in range(orbits.m):
        i, j = np.argwhere(orbits.orbit_id == t)[0]
        reps.append({"orbit": t, "size": int(orbits.sizes[t]), "pair": [int(i), int(j)]})
    out = {
        "n": g.n,
        "automorphisms": auts.order,
        "capped": auts.capped,
        "orbits": reps,
        "eigenvalues": [float(x) for x in eig.eigenvalues],
        "block_sizes": blocks.sizes,
        "sorted_blocks": [
            {
                "eigenvalue": blocks.blocks[i].eigenvalue,
                "size": blocks.blocks[i].multiplicity,
                "keys": [float(x) for x in keys[i]],
            }
            for i in order
        ],
    }
    print(json.dumps(out, indent=2))
    return 0


def _readout_cfg(args) -> ReadoutConfig:
    return ReadoutConfig(
        max_blocks=args.max_blocks,
        rp_dim=args.rp_dim,
        seed=args.seed,
        centering=args.center,
    )


def cmd_readout(args) -> int:
    g = _graph_arg(args.graph)
    M = load_features(args.features)
    cfg = _readout_cfg(args)
    bundle = prepare_bundle(g, cfg) if args.kind.startswith("isotypic") else None
    print(vector_json(readout(args.kind, M, bundle, cfg)))
    return 0


def cmd_separate(args) -> int:
    cfg = _readout_cfg(args)
    if args.pair:
        pairs = [("pair", "custom", lambda: (_graph_arg(args.pair[0]), _graph_arg(args.pair[1])))]
    else:
        pairs = [(s.pair_id, s.family, s.build) for s in harness.family_pairs(args.family)]
    reports = []
    for idx, (pid, fam, build) in enumerate(pairs):
        try:
            g1, g2 = build()
        except Exception as exc:
            reports.append({"pair_id": pid, "family": fam, "error": f"{type(exc).__name__}: {exc}"})
            continue
        r = harness.run_pair(
            g1, g2, readout_kind=args.readout, readout_cfg=cfg, seeds=args.seeds,
            threshold=args.threshold, pair_index=idx, pair_id=pid, family=fam, workers=args.workers,
        )
        reports.append(r.as_dict(args.timings))
    print(json.dumps(reports, indent=2))
    return 0


def cmd_suite(args) -> int:
    rep = harness.run_suite(
        readout_kind=args.readout,
        readout_cfg=_readout_cfg(args),
        seeds=args.seeds,
        threshold=args.threshold,
        workers=args.workers,
    )
    if args.out and args.out.lower().endswith(".csv"):
        _emit(rep.to_csv(args.timings), args.out)
    elif args.out:
        _emit(rep.to_json(args.timings), args.out)
    if not args.quiet:
        print(rep.table())
    return 0


def cmd_sweep(args) -> int:
    counts = harness.block_sweep(
        _ints(args.blocks), readout_kind=args.readout, seeds=args.seeds, workers=args.workers
    )
    lines = ["max_blocks,separated"] + [f"{b},{c}" for b, c in counts.items()]
    _emit("\r\n".join(lines) + "\r\n", args.out)
    return 0


def cmd_bench_er(args) -> int:
    _, text = harness.bench_er(_ints(args.ns), args.p, args.count, seed=harness.master_seed())
    _emit(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isoread", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit family graphs as graph6, one per line")
    p.add_argument("family", choices=["cycles", "cfi-k3", "cfi-k4", "petersen", "gm-petersen",
                                      "srg16", "shrikhande", "rook4", "er"])
    p.add_argument("--k", type=int, default=3, help="cycle length for the cycles family")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("wl-check", help="1-WL equivalence (and isomorphism for n <= 64)")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_wl_check)

    p = sub.add_parser("decompose", help="orbit operator spectrum, blocks and sort keys")
    p.add_argument("--graph", required=True)
    p.add_argument("--coeffs", help="comma-separated coefficients in canonical orbit order")
    p.add_argument("--seed", type=int, default=0, help="coefficient seed when --coeffs is absent")
    p.add_argument("--eig-tol", type=float, default=1e-12)
    p.add_argument("--cap", type=int, default=50_000)
    p.set_defaults(func=cmd_decompose)

    def readout_opts(p, kinds=True):
        if kinds:
            p.add_argument("--readout", choices=READOUT_KINDS, default="isotypic")
        p.add_argument("--center", action="store_true")
        p.add_argument("--max-blocks", type=int, default=16)
        p.add_argument("--rp-dim", type=int, default=8)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("readout", help="graph-level readout of a feature matrix")
    p.add_argument("--graph", required=True)
    p.add_argument("--features", required=True, help="CSV (row per node) or JSON {n, d, data}")
    p.add_argument("--kind", choices=READOUT_KINDS, required=True)
    readout_opts(p, kinds=False)
    p.set_defaults(func=cmd_readout)

    def run_opts(p, seeds):
        p.add_argument("--seeds", type=int, default=seeds)
        p.add_argument("--threshold", type=float, default=harness.DEFAULT_THRESHOLD)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--timings", action="store_true", help="include wall-clock timings in output")

    p = sub.add_parser("separate", help="training-free separation for one family or pair")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--family", choices=list(harness.FAMILIES) + ["srg16"])
    g.add_argument("--pair", nargs=2, metavar=("A", "B"))
    readout_opts(p)
    run_opts(p, harness.DEFAULT_SEEDS)
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("suite", help="run the full training-free suite")
    readout_opts(p)
    run_opts(p, harness.DEFAULT_SEEDS)
    p.add_argument("--out", help="write JSON, or CSV when the name ends in .csv")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("sweep", help="separated count as a function of max_blocks")
    p.add_argument("--blocks", default="1,2,4,8,16")
    p.add_argument("--readout", choices=["isotypic", "isotypic-linear"], default="isotypic")
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench-er", help="readout runtime on Erdos-Renyi graphs")
    p.add_argument("--ns", default="16,32,64,128")
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench_er)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphFormatError, ValueError, LookupError, OSError) as exc:
        print(f"isoread: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
