"""Command-line toolkit tying the library together.

Exit codes: 0 success (and verified, where applicable), 1 verification
failure, 2 usage or format errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from . import formats
from .coloring import (
    excellent_refinement,
    good_refinement,
    low_rankwidth_coloring_of_power,
    treedepth_coloring,
    verify_low_rw_coloring,
    verify_td_coloring,
)
from .ehchi import chi_product_coloring, eh_witness, even_split_provider
from .families import (
    cycle,
    grid,
    h_graph,
    h_tilde,
    interval_model,
    line_graph_via_subdivision,
    map_graph_from_rotation,
    path,
    random_degenerate,
    segment_model,
    twisted_chain,
)
from .graph import Graph, power
from .lab import (
    ImbalanceReport,
    certificate_rank,
    lower_bound_certificate,
    monochromatic_substructure,
    random_balanced_bipartition,
    ramsey_bireduce,
    ramsey_threshold,
)
from .orderings import wcol_exact, wcol_heuristic
from .widths import rank_width_exact, rank_width_upper, tree_depth_exact, verify_decomposition

OUTDIR_ENV = "RWCOLOR_OUTDIR"


def _resolve(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get(OUTDIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _write(path: str, text: str) -> None:
    path = _resolve(path)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_graph(path: str) -> Graph:
    return formats.parse_edge_list(_read(path))


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        _write(args.output, text)
    else:
        sys.stdout.write(text)


def _write_manifest(args, argv, outputs: list[str], seeds: list[int], t0: float) -> None:
    if not getattr(args, "manifest", None):
        return
    params = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "manifest") and v is not None
    }
    manifest = {
        "tool": "rwcolor",
        "version": __version__,
        "argv": list(argv),
        "command": " ".join(argv),
        "parameters": params,
        "seeds": seeds,
        "inputs": [p for p in (getattr(args, "input", None),) if p],
        "outputs": outputs,
        "elapsed_ms": round((time.perf_counter() - t0) * 1000.0, 3),
    }
    _write(args.manifest, formats.dumps_json(manifest))


def cmd_gen(args, argv) -> int:
    t0 = time.perf_counter()
    model_obj = None
    if args.family == "h":
        g = h_graph(args.n, args.m)
    elif args.family == "htilde":
        g = h_tilde(args.n, args.m)
    elif args.family == "chain":
        g = twisted_chain(args.order, args.variant)
    elif args.family == "path":
        g = path(args.n)
    elif args.family == "cycle":
        g = cycle(args.n)
    elif args.family == "grid":
        g = grid(args.a, args.b)
    elif args.family == "random":
        g = random_degenerate(args.n, args.d, args.seed)
    elif args.family == "map":
        rotations = formats.rotations_from_json(_read(args.input))
        g = map_graph_from_rotation(rotations)
    elif args.family == "linegraph":
        g = line_graph_via_subdivision(_load_graph(args.input))
    elif args.family == "model":
        model = (
            interval_model(args.order)
            if args.kind == "interval"
            else segment_model(args.order)
        )
        if args.kind == "interval":
            model_obj = {"intervals": [list(iv) for iv in model.intervals]}
        else:
            model_obj = {"segments": [list(s) for s in model.segments]}
        model_obj["scale"] = model.scale
        model_obj["relabel_to_chain"] = list(model.relabel_to_chain)
        from .families import intersection_graph

        g = intersection_graph(model)
    else:
        raise ValueError(f"unknown family {args.family!r}")
    outputs = []
    if model_obj is not None and args.model_out:
        _write(args.model_out, formats.dumps_json(model_obj))
        outputs.append(args.model_out)
    _emit(args, formats.serialize_edge_list(g))
    if args.output:
        outputs.append(args.output)
    if args.labels:
        _write(args.labels, formats.labels_to_json(g))
        outputs.append(args.labels)
    _write_manifest(args, argv, outputs, [getattr(args, "seed", 0)], t0)
    return 0


def cmd_power(args, argv) -> int:
    t0 = time.perf_counter()
    g = _load_graph(args.input)
    _emit(args, formats.serialize_edge_list(power(g, args.r)))
    _write_manifest(args, argv, [args.output] if args.output else [], [], t0)
    return 0


def cmd_wcol(args, argv) -> int:
    t0 = time.perf_counter()
    g = _load_graph(args.input)
    if args.exact:
        value, order = wcol_exact(g, args.r)
        method = "exact"
    else:
        value, order = wcol_heuristic(g, args.r)
        method = "heuristic"
    if args.order_out:
        _write(args.order_out, formats.order_to_json(order))
    _emit(args, formats.dumps_json({"r": args.r, "value": value, "method": method}))
    _write_manifest(args, argv, [p for p in (args.output, args.order_out) if p], [], t0)
    return 0


def cmd_color(args, argv) -> int:
    t0 = time.perf_counter()
    g = _load_graph(args.input)
    outputs = []
    if args.mode == "td":
        c = treedepth_coloring(g, args.p, strategy=args.strategy)
        _emit(args, formats.dumps_json(formats.coloring_to_obj(c)))
    elif args.mode == "refine":
        base = formats.coloring_from_obj(json.loads(_read(args.coloring)))
        orders = []
        for radius in range(2, args.r + 1):
            orders.append(wcol_heuristic(g, radius)[1])
        if args.good:
            ref = good_refinement(g, base, args.r, orders[-1])
        else:
            ref = excellent_refinement(g, base, args.r, orders)
        _emit(args, formats.dumps_json(formats.refinement_to_obj(ref)))
    elif args.mode == "lowrw":
        ref, profile = low_rankwidth_coloring_of_power(g, args.r, args.p)
        obj = formats.refinement_to_obj(ref)
        obj["p"] = args.p
        obj["q"] = {str(i): v for i, v in sorted(profile.q.items())}
        _emit(args, formats.dumps_json(obj))
        if args.profile:
            _write(args.profile, formats.dumps_json(formats.profile_to_obj(profile)))
            outputs.append(args.profile)
    else:
        raise ValueError(f"unknown color mode {args.mode!r}")
    if args.output:
        outputs.append(args.output)
    _write_manifest(args, argv, outputs, [], t0)
    return 0


def cmd_verify(args, argv) -> int:
    t0 = time.perf_counter()
    g = _load_graph(args.input)
    if args.what == "decomposition":
        D = formats.decomposition_from_obj(json.loads(_read(args.decomposition)))
        try:
            width = verify_decomposition(g, D)
        except ValueError as exc:
            sys.stderr.write(f"invalid decomposition: {exc}\n")
            return 1
        _emit(args, formats.dumps_json({"width": width}))
        if args.max_width is not None and width > args.max_width:
            return 1
        return 0
    obj = json.loads(_read(args.coloring))
    c = formats.coloring_from_obj(obj)
    if args.mode == "td":
        report = verify_td_coloring(g, c, args.p)
        _emit(
            args,
            formats.dumps_json(
                {
                    "verified": report.ok,
                    "checked_unions": report.checked_unions,
                    "failures": [list(f[0]) for f in report.failures],
                }
            ),
        )
        return 0 if report.ok else 1
    if args.mode == "lowrw":
        if args.profile:
            prof_obj = json.loads(_read(args.profile))
            q = {int(i): v for i, v in prof_obj["q"].items()}
        elif "q" in obj:
            q = {int(i): v for i, v in obj["q"].items()}
        elif args.q_linear is not None:
            q = {i: args.q_linear * i for i in range(1, args.p + 1)}
        else:
            raise ValueError(
                "budget unknown: pass --profile, --q-linear, or a coloring "
                "file that embeds its q table"
            )
        profile = verify_low_rw_coloring(g, c, args.p, q)
        _emit(args, formats.dumps_json(formats.profile_to_obj(profile)))
        _write_manifest(args, argv, [], [], t0)
        return 0 if profile.verified else 1
    raise ValueError(f"unknown verify mode {args.mode!r}")


def cmd_width(args, argv) -> int:
    t0 = time.perf_counter()
    g = _load_graph(args.input)
    if args.what == "rank":
        rep = rank_width_exact(g) if args.exact else rank_width_upper(g)
        _emit(args, formats.dumps_json(formats.width_report_to_obj(rep)))
    elif args.what == "treedepth":
        value = tree_depth_exact(g)
        _emit(args, formats.dumps_json({"value": value, "method": "exact"}))
    else:
        raise ValueError(f"unknown width kind {args.what!r}")
    _write_manifest(args, argv, [args.output] if args.output else [], [], t0)
    return 0


def cmd_lab(args, argv) -> int:
    t0 = time.perf_counter()
    if args.what == "certificate":
        if args.input:
            g = _load_graph(args.input)
            labels = formats.labels_from_json(_read(args.labels))
            g = Graph(g.n, g.adj, labels)
            part_obj = json.loads(_read(args.partition))
            part = formats.partition_from_obj(part_obj, g)
            result = lower_bound_certificate(g, part)
            if isinstance(result, ImbalanceReport):
                _emit(
                    args,
                    formats.dumps_json(
                        {
                            "imbalance": {
                                "heavy_side": result.heavy_side,
                                "heavy_count": result.heavy_count,
                                "c_size": result.c_size,
                            }
                        }
                    ),
                )
                return 1
            rank = certificate_rank(g, result)
            obj = formats.certificate_to_obj(result)
            obj["rank"] = rank
            _emit(args, formats.dumps_json(obj))
            return 0 if rank == result.order else 1
        g = twisted_chain(args.order, "bare")
        rows = []
        ok = True
        for s in range(args.seeds):
            seed = args.seed + s
            part = random_balanced_bipartition(g, seed)
            result = lower_bound_certificate(g, part)
            if isinstance(result, ImbalanceReport):
                rows.append((seed, 0, False))
                ok = False
                continue
            rank = certificate_rank(g, result)
            verified = rank == result.order and result.order >= args.order // 12
            ok = ok and verified
            rows.append((seed, result.order, verified))
        text = _harness_csv(rows)
        if args.csv:
            _write(args.csv, text)
        else:
            sys.stdout.write(text)
        _write_manifest(args, argv, [args.csv] if args.csv else [], [args.seed], t0)
        return 0 if ok else 1
    if args.what == "ramsey":
        import random as _random

        rows = []
        ok = True
        for s in range(args.seeds):
            seed = args.seed + s
            rng = _random.Random(seed)
            table = {
                (x, y): rng.randint(1, args.d)
                for x in range(args.size)
                for y in range(args.size)
            }
            res = ramsey_bireduce(
                lambda x, y: table[(x, y)],
                list(range(args.size)),
                list(range(args.size)),
                args.k,
                args.d,
            )
            verified = res.size >= args.k
            ok = ok and verified and res.guaranteed == (args.size >= ramsey_threshold(args.k, args.d))
            rows.append((seed, res.size, verified))
        text = _harness_csv(rows)
        if args.csv:
            _write(args.csv, text)
        else:
            sys.stdout.write(text)
        _write_manifest(args, argv, [args.csv] if args.csv else [], [args.seed], t0)
        return 0 if ok else 1
    if args.what == "extract":
        import random as _random

        g = twisted_chain(args.order, "bare")
        rng = _random.Random(args.seed)
        colors = [rng.randint(1, args.colors) for _ in range(g.n)]
        sub, report = monochromatic_substructure(g, colors, args.target)
        _emit(args, formats.dumps_json(formats.extraction_report_to_obj(report)))
        _write_manifest(args, argv, [args.output] if args.output else [], [args.seed], t0)
        return 0 if report.achieved >= 1 else 1
    raise ValueError(f"unknown lab command {args.what!r}")


def _harness_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["seed", "achieved_order", "verified"])
    for seed, order, verified in rows:
        writer.writerow([seed, order, str(bool(verified)).lower()])
    return buf.getvalue()


def cmd_eh(args, argv) -> int:
    t0 = time.perf_counter()
    g = _load_graph(args.input)
    provider = even_split_provider(args.classes, args.width_bound)
    witness, kind, params = eh_witness(g, provider)
    _emit(args, formats.dumps_json(formats.witness_to_obj(witness, kind, params, g.n)))
    _write_manifest(args, argv, [args.output] if args.output else [], [], t0)
    return 0


def cmd_chi(args, argv) -> int:
    t0 = time.perf_counter()
    g = _load_graph(args.input)
    c = formats.coloring_from_obj(json.loads(_read(args.coloring)))
    out = chi_product_coloring(g, c)
    _emit(args, formats.dumps_json(formats.coloring_to_obj(out)))
    _write_manifest(args, argv, [args.output] if args.output else [], [], t0)
    return 0


SWEEP_FIELDS = [
    "name",
    "family",
    "n",
    "palette",
    "widths",
    "budgets",
    "verified",
    "min_order",
    "max_order",
    "elapsed_ms",
    "error",
]


def _sweep_generate(spec: dict) -> Graph:
    gen = spec["generator"]
    family = gen["family"]
    if family == "h":
        return h_graph(gen["n"], gen["m"])
    if family == "htilde":
        return h_tilde(gen["n"], gen["m"])
    if family == "grid":
        return grid(gen["a"], gen["b"])
    if family == "path":
        return path(gen["n"])
    if family == "cycle":
        return cycle(gen["n"])
    if family == "chain":
        return twisted_chain(gen["order"], gen.get("variant", "bare"))
    if family == "random":
        return random_degenerate(gen["n"], gen["d"], gen.get("seed", 0))
    raise ValueError(f"unknown sweep family {family!r}")


def _sweep_row(spec: dict) -> dict:
    t0 = time.perf_counter()
    row = {f: "" for f in SWEEP_FIELDS}
    row["name"] = spec.get("name", "")
    row["family"] = spec.get("generator", {}).get("family", "")
    try:
        g = _sweep_generate(spec)
        row["n"] = g.n
        pipe = spec["pipeline"]
        kind = pipe["kind"]
        if kind == "rowcolor-verify":
            from .families import row_coloring

            gen = spec["generator"]
            p = pipe["p"]
            c = row_coloring(gen["n"], gen["m"], p)
            profile = verify_low_rw_coloring(g, c, p, {i: 3 * i for i in range(1, p + 1)})
            row["palette"] = c.palette_size
            row["widths"] = ";".join(str(profile.measured[i][0]) for i in sorted(profile.measured))
            row["budgets"] = ";".join(str(profile.q[i]) for i in sorted(profile.q))
            row["verified"] = str(bool(profile.verified)).lower()
        elif kind == "power-lowrw":
            r, p = pipe["r"], pipe["p"]
            ref, profile = low_rankwidth_coloring_of_power(g, r, p)
            h = power(g, r)
            checked = verify_low_rw_coloring(h, ref.refined, p, profile.q)
            row["palette"] = ref.refined.palette_size
            row["widths"] = ";".join(str(checked.measured[i][0]) for i in sorted(checked.measured))
            row["budgets"] = ";".join(str(profile.q[i]) for i in sorted(profile.q))
            row["verified"] = str(bool(checked.verified)).lower()
        elif kind == "certificate":
            seeds = pipe.get("seeds", 1)
            seed0 = pipe.get("seed", 0)
            orders = []
            good = True
            for s in range(seeds):
                part = random_balanced_bipartition(g, seed0 + s)
                result = lower_bound_certificate(g, part)
                if isinstance(result, ImbalanceReport):
                    good = False
                    orders.append(0)
                    continue
                rank = certificate_rank(g, result)
                good = good and rank == result.order
                orders.append(result.order)
            row["min_order"] = min(orders) if orders else ""
            row["max_order"] = max(orders) if orders else ""
            row["verified"] = str(bool(good)).lower()
        else:
            raise ValueError(f"unknown pipeline kind {kind!r}")
    except Exception as exc:  # recorded per row; the runner keeps going
        row["error"] = str(exc)
    row["elapsed_ms"] = round((time.perf_counter() - t0) * 1000.0, 3)
    return row


def cmd_report(args, argv) -> int:
    t0 = time.perf_counter()
    spec = json.loads(_read(args.spec))
    runs = spec.get("runs", [])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_FIELDS, lineterminator="\n")
    writer.writeheader()
    if runs:
        with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
            for row in pool.map(_sweep_row, runs):
                writer.writerow(row)
    text = buf.getvalue()
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    _write_manifest(args, argv, [args.output] if args.output else [], [], t0)
    return 0


def cmd_rerun(args, argv) -> int:
    manifest = json.loads(_read(args.manifest))
    return main(manifest["argv"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rwcolor",
        description="Construct, verify, and refute low rank-width colorings.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("-o", "--output", help="output file (default stdout)")
        p.add_argument("--manifest", help="write a run manifest to this path")
        p.add_argument("--seed", type=int, default=0, help="base RNG seed")

    p = sub.add_parser("gen", help="generate a graph family")
    p.add_argument("family", choices=[
        "h", "htilde", "chain", "path", "cycle", "grid", "random", "map",
        "linegraph", "model",
    ])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--a", type=int, default=2)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--variant", default="bare")
    p.add_argument("--kind", choices=["interval", "segment"], default="interval")
    p.add_argument("-i", "--input", help="input file for map/linegraph")
    p.add_argument("--labels", help="write the label sidecar JSON here")
    p.add_argument("--model-out", help="write the intersection model JSON here")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("power", help="graph power")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-i", "--input", required=True)
    common(p)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("wcol", help="weak coloring numbers")
    p.add_argument("-r", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true")
    group.add_argument("--heuristic", action="store_true")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--order-out", help="write the witness order JSON here")
    common(p)
    p.set_defaults(func=cmd_wcol)

    p = sub.add_parser("color", help="tree-depth and refinement colorings")
    p.add_argument("mode", choices=["td", "refine", "lowrw"])
    p.add_argument("-r", type=int, default=2)
    p.add_argument("-p", type=int, default=1)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-c", "--coloring", help="base coloring JSON (refine mode)")
    p.add_argument("--good", action="store_true", help="single-radius refinement")
    p.add_argument("--strategy", help="tree-depth provider strategy")
    p.add_argument("--profile", help="write the budget profile JSON here")
    common(p)
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", help="verify colorings and decompositions")
    p.add_argument("what", choices=["coloring", "decomposition"])
    p.add_argument("--mode", choices=["td", "lowrw"], default="lowrw")
    p.add_argument("-p", type=int, default=1)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-c", "--coloring")
    p.add_argument("-d", "--decomposition")
    p.add_argument("--profile", help="budget profile JSON")
    p.add_argument("--q-linear", type=int, help="use the budget Q(i) = COEFF*i")
    p.add_argument("--max-width", type=int)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("width", help="exact widths")
    p.add_argument("what", choices=["rank", "treedepth"])
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", default=True)
    group.add_argument("--upper", dest="exact", action="store_false")
    p.add_argument("-i", "--input", required=True)
    common(p)
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("lab", help="lower-bound machinery")
    p.add_argument("what", choices=["certificate", "ramsey", "extract"])
    p.add_argument("--order", type=int, default=12)
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--size", type=int, default=32)
    p.add_argument("--colors", type=int, default=2)
    p.add_argument("--target", type=int, default=2)
    p.add_argument("-i", "--input")
    p.add_argument("--labels")
    p.add_argument("--partition")
    p.add_argument("--csv", help="write the harness CSV here")
    common(p)
    p.set_defaults(func=cmd_lab)

    p = sub.add_parser("eh", help="clique-or-independent-set witnesses")
    p.add_argument("what", choices=["extract"])
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--width-bound", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_eh)

    p = sub.add_parser("chi", help="product colorings")
    p.add_argument("what", choices=["product"])
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-c", "--coloring", required=True)
    common(p)
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("report", help="experiment sweeps")
    p.add_argument("what", choices=["sweep"])
    p.add_argument("--spec", required=True)
    p.add_argument("--threads", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("rerun", help="re-execute a recorded manifest")
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=cmd_rerun)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args, argv)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
