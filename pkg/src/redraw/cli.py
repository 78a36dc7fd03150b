"""Command-line front end: layout, metrics, convert and corpus runs.

Exit codes: 0 on success, 1 on input errors, 2 on an internal invariant
failure (a produced drawing that fails its own vertical check).
"""

import argparse
import csv
import io as stdio
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import io as diagram_io
from .drawing import satisfies_vertical_constraint
from .engine import LayoutParams, ProgressEvent, redraw
from .fca import SizeLimitExceeded, concept_lattice, parse_cxt
from .freese import FreeseParams, freese_layout
from .metrics import metrics_report, validate_drawing
from .order import AxiomViolation, CycleDetected, OrderedSet, cover_relation

PROGRESS_HZ = 10.0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # input errors exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_layout_params(parser: argparse.ArgumentParser) -> None:
    defaults = LayoutParams()
    parser.add_argument("--max-iterations", type=int, default=defaults.max_iterations,
                        help="iteration cap per step")
    parser.add_argument("--epsilon", type=float, default=defaults.epsilon,
                        help="stop when the maximum force drops to this")
    parser.add_argument("--delta", type=float, default=defaults.delta, help="damping factor")
    parser.add_argument("--c-vert", type=float, default=defaults.c_vert,
                        help="vertical spacing constant")
    parser.add_argument("--c-hor", type=float, default=defaults.c_hor,
                        help="horizontal force constant")
    parser.add_argument("--c-par", type=float, default=defaults.c_par,
                        help="cosine-distance threshold for the near-parallel line force")
    parser.add_argument("--c-ang", type=float, default=defaults.c_ang,
                        help="cosine-distance threshold for the shared-endpoint angle force")
    parser.add_argument("--c-dist", type=float, default=defaults.c_dist,
                        help="node-to-line distance threshold")
    parser.add_argument("--initial-dim", type=int, default=defaults.initial_dim,
                        help="dimension of the initial embedding")
    parser.add_argument("--horizontal-scale", type=float, default=defaults.horizontal_scale,
                        help="final horizontal scaling factor")
    parser.add_argument("--cache-interval", type=int, default=defaults.cache_interval,
                        help="recompute line-step candidate sets every k-th iteration")
    parser.add_argument("--c-attr", type=float, default=FreeseParams().c_attr,
                        help="attraction constant of the rank-based baseline")
    parser.add_argument("--c-rep", type=float, default=FreeseParams().c_rep,
                        help="repulsion constant of the rank-based baseline")
    parser.add_argument("--seed", default="0",
                        help="RNG seed (integer), or 'random' for a fresh one")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="redraw", description=__doc__,
                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    layout = sub.add_parser("layout", help="lay out an order and write the drawing",
                            formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    layout.add_argument("--in", dest="input", required=True, help="input file")
    layout.add_argument("--format", choices=("edges", "cxt", "json"), default=None,
                        help="input format (default: by extension)")
    layout.add_argument("--algo", choices=("redraw", "freese"), default="redraw")
    layout.add_argument("--out-json", help="write the diagram document here ('-' for stdout)")
    layout.add_argument("--out-svg", help="write an SVG rendering here")
    layout.add_argument("--out-tikz", help="write a TikZ fragment here")
    layout.add_argument("--progress", action="store_true", help="show progress on stderr")
    _add_layout_params(layout)

    metrics = sub.add_parser("metrics", help="report metrics of a diagram document",
                             formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    metrics.add_argument("--in", dest="input", required=True, help="diagram document (JSON)")
    metrics.add_argument("--json", action="store_true", help="emit JSON instead of text")

    convert = sub.add_parser("convert", help="transcode between file formats",
                             formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    convert.add_argument("--in", dest="input", required=True)
    convert.add_argument("--out", dest="output", required=True)
    convert.add_argument("--format", choices=("edges", "cxt", "json"), default=None,
                         help="input format (default: by extension)")

    corpus = sub.add_parser("corpus", help="run layout + metrics over a directory",
                            formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    corpus.add_argument("--dir", dest="directory", required=True)
    corpus.add_argument("--algo", action="append", choices=("redraw", "freese"),
                        help="algorithm to run (repeatable; default: both)")
    corpus.add_argument("--out", dest="output", default="corpus.csv", help="CSV output path")
    _add_layout_params(corpus)
    return parser


def _resolve_seed(raw) -> int:
    if isinstance(raw, int):
        return raw
    if raw == "random":
        return int(np.random.SeedSequence().entropy % (2**32))
    try:
        return int(raw)
    except ValueError:
        raise diagram_io.ParseError(f"seed must be an integer or 'random', got {raw!r}") from None


def _layout_params(args, seed: int) -> LayoutParams:
    return LayoutParams(
        max_iterations=args.max_iterations,
        epsilon=args.epsilon,
        delta=args.delta,
        c_vert=args.c_vert,
        c_hor=args.c_hor,
        c_par=args.c_par,
        c_ang=args.c_ang,
        c_dist=args.c_dist,
        initial_dim=args.initial_dim,
        horizontal_scale=args.horizontal_scale,
        seed=seed,
        cache_interval=args.cache_interval,
    )


def _freese_params(args) -> FreeseParams:
    return FreeseParams(
        c_attr=args.c_attr,
        c_rep=args.c_rep,
        max_iterations=args.max_iterations,
        epsilon=args.epsilon,
        delta=args.delta,
    )


def _detect_format(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    suffix = Path(path).suffix.lower()
    if suffix in (".edges", ".tsv", ".txt"):
        return "edges"
    if suffix == ".cxt":
        return "cxt"
    if suffix == ".json":
        return "json"
    raise diagram_io.ParseError(f"cannot infer the format of {path!r}; pass --format")


def _load_order(path: str, fmt: str) -> OrderedSet:
    text = Path(path).read_text(encoding="utf-8")
    if fmt == "edges":
        return diagram_io.parse_cover_edges(text)
    if fmt == "cxt":
        return concept_lattice(parse_cxt(text))
    if fmt == "json":
        return diagram_io.read_json(text).order()
    raise ValueError(f"unknown format {fmt!r}")


def _progress_printer():
    last = [0.0]

    def hook(event: ProgressEvent) -> None:
        now = time.monotonic()
        if now - last[0] < 1.0 / PROGRESS_HZ:
            return
        last[0] = now
        print(
            f"cycle {event.cycle} dim {event.dim} {event.step} step "
            f"iteration {event.iteration} max force {event.max_force:.6g}",
            file=sys.stderr,
        )

    return hook


def _run_layout_algorithm(order: OrderedSet, algo: str, args, seed: int, hook=None):
    if algo == "redraw":
        params = _layout_params(args, seed)
        drawing = redraw(order, params, hook=hook)
        meta_params = {k: getattr(params, k) for k in (
            "max_iterations", "epsilon", "delta", "c_vert", "c_hor", "c_par", "c_ang",
            "c_dist", "initial_dim", "horizontal_scale", "cache_interval")}
        cycles = params.initial_dim - 1 if params.initial_dim > 2 else 1
    else:
        params = _freese_params(args)
        drawing = freese_layout(order, params, np.random.default_rng(seed))
        meta_params = {k: getattr(params, k) for k in (
            "c_attr", "c_rep", "max_iterations", "epsilon", "delta")}
        cycles = 1
    return drawing, meta_params, cycles


def _cmd_layout(args) -> int:
    seed = _resolve_seed(args.seed)
    order = _load_order(args.input, _detect_format(args.input, args.format))
    hook = _progress_printer() if args.progress else None
    started = time.monotonic()
    drawing, meta_params, cycles = _run_layout_algorithm(order, args.algo, args, seed, hook)
    elapsed = time.monotonic() - started

    if not satisfies_vertical_constraint(order, drawing):
        print("internal error: produced drawing violates the vertical constraint",
              file=sys.stderr)
        return 2

    doc = diagram_io.document_from_drawing(order, drawing, args.algo, meta_params, seed)
    wrote_stdout = False
    if args.out_json:
        text = diagram_io.write_json(doc)
        if args.out_json == "-":
            sys.stdout.write(text)
            wrote_stdout = True
        else:
            Path(args.out_json).write_text(text, encoding="utf-8")
    if args.out_svg:
        Path(args.out_svg).write_text(diagram_io.write_svg(doc), encoding="utf-8")
    if args.out_tikz:
        Path(args.out_tikz).write_text(diagram_io.write_tikz(doc), encoding="utf-8")
    if not (args.out_json or args.out_svg or args.out_tikz):
        sys.stdout.write(diagram_io.write_json(doc))
        wrote_stdout = True

    summary = (
        f"{args.algo}: {order.n} elements, {len(cover_relation(order).pairs)} edges, "
        f"{cycles} cycles, {elapsed:.2f}s"
    )
    print(summary, file=sys.stderr if wrote_stdout else sys.stdout)
    return 0


def _cmd_metrics(args) -> int:
    doc = diagram_io.read_json(Path(args.input).read_text(encoding="utf-8"))
    order = doc.order()
    report = metrics_report(order, doc.drawing())
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    return 0


def _cmd_convert(args) -> int:
    in_fmt = _detect_format(args.input, args.format)
    suffix = Path(args.output).suffix.lower()
    text = Path(args.input).read_text(encoding="utf-8")

    if in_fmt in ("edges", "cxt"):
        order = _load_order(args.input, in_fmt)
        if suffix not in (".edges", ".tsv", ".txt"):
            print(f"cannot convert {in_fmt} to {suffix or '?'}; lay it out first",
                  file=sys.stderr)
            return 1
        Path(args.output).write_text(diagram_io.write_cover_edges(order), encoding="utf-8")
        return 0

    doc = diagram_io.read_json(text)
    if suffix in (".json", ".svg", ".tikz", ".tex"):
        # never write a drawing that breaks the vertical order
        if not satisfies_vertical_constraint(doc.order(), doc.drawing()):
            print("internal error: document violates the vertical constraint",
                  file=sys.stderr)
            return 2
    if suffix == ".json":
        out = diagram_io.write_json(doc)
    elif suffix == ".svg":
        out = diagram_io.write_svg(doc)
    elif suffix in (".tikz", ".tex"):
        out = diagram_io.write_tikz(doc)
    elif suffix in (".edges", ".tsv", ".txt"):
        out = diagram_io.write_cover_edges(doc.order())
    else:
        print(f"unsupported output format {suffix!r}", file=sys.stderr)
        return 1
    Path(args.output).write_text(out, encoding="utf-8")
    return 0


def _corpus_job(job):
    path, algo, args_dict, seed = job
    args = argparse.Namespace(**args_dict)
    order = _load_order(path, _detect_format(path, None))
    started = time.monotonic()
    drawing, _, _ = _run_layout_algorithm(order, algo, args, seed)
    elapsed = time.monotonic() - started
    if not satisfies_vertical_constraint(order, drawing):
        raise RuntimeError(f"vertical constraint violated on {path}")
    violations = validate_drawing(order, drawing)
    report = metrics_report(order, drawing)
    return {
        "input": Path(path).name,
        "algorithm": algo,
        "elements": order.n,
        "edges": len(order.cover_index_pairs),
        "crossings": report.crossings,
        "min_node_line_distance": (
            "" if report.min_node_line_distance is None else repr(report.min_node_line_distance)
        ),
        "distinct_edge_directions": report.distinct_edge_directions,
        "vertical_ok": str(report.vertical_ok).lower(),
        "coincident_nodes": report.coincident_nodes,
        "rtd": "" if report.rtd is None else repr(report.rtd),
        "violations": len(violations),
        "seconds": f"{elapsed:.3f}",
    }


CSV_COLUMNS = [
    "input", "algorithm", "elements", "edges", "crossings", "min_node_line_distance",
    "distinct_edge_directions", "vertical_ok", "coincident_nodes", "rtd",
    "violations", "seconds",
]


def _cmd_corpus(args) -> int:
    seed = _resolve_seed(args.seed)
    directory = Path(args.directory)
    inputs = sorted(
        str(p) for p in list(directory.glob("*.edges")) + list(directory.glob("*.cxt"))
    )
    if not inputs:
        print(f"no .edges or .cxt files in {directory}", file=sys.stderr)
        return 1
    algos = args.algo or ["redraw", "freese"]
    args_dict = vars(args).copy()
    jobs = [(path, algo, args_dict, seed) for path in inputs for algo in algos]

    threads = int(os.environ.get("REDRAW_THREADS", "1"))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_corpus_job, jobs))
    else:
        rows = [_corpus_job(job) for job in jobs]
    rows.sort(key=lambda r: (r["input"], r["algorithm"]))

    buffer = stdio.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    Path(args.output).write_text(buffer.getvalue(), encoding="utf-8")

    for algo in algos:
        crossings = [r["crossings"] for r in rows if r["algorithm"] == algo]
        mean = sum(crossings) / len(crossings) if crossings else 0.0
        print(f"{algo}: mean crossings {mean:.3f} over {len(crossings)} drawings")
    print(f"wrote {args.output}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "layout":
            return _cmd_layout(args)
        if args.command == "metrics":
            return _cmd_metrics(args)
        if args.command == "convert":
            return _cmd_convert(args)
        if args.command == "corpus":
            return _cmd_corpus(args)
    except (diagram_io.ParseError, AxiomViolation, CycleDetected, SizeLimitExceeded,
            FileNotFoundError, NotADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:  # internal invariant failures
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
