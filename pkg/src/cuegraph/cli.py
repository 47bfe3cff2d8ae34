"""Command-line entry points.

Four subcommands: analyze an annotation file (optionally merged with a later
delta), run an exploration session against a model backend, serve the HTTP
API, and export graphs or sessions to DOT/JSON.  The artifact goes to stdout,
diagnostics go to stderr, and exit codes follow convention: 0 success, 1
domain failure, 2 usage.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .annotation import AnnotationError, load_annotation, parse_annotation, to_graph
from .engine import (
    AutoOverlapPolicy,
    EngineError,
    ExplorationSession,
    RandomPolicy,
    ReplayPolicy,
    load_trace,
    run_policy,
)
from .graph import GraphError, merge_graphs
from .metrics import (
    MetricsError,
    PolarityLexicon,
    delta_paths,
    enumerate_paths,
    load_analogy_map,
    metrics_report_dict,
)
from .providers import LiveProvider, Provider, ProviderError, ReplayProvider, ScriptedProvider
from .render import graph_to_dict, graph_to_dot

logger = logging.getLogger(__name__)


class CliError(RuntimeError):
    pass


def _build_provider(spec: str) -> Provider:
    if spec == "live":
        return LiveProvider.from_env()
    kind, sep, path = spec.partition(":")
    if not sep or not path:
        raise CliError(f"provider spec {spec!r} must be live, replay:<file> or scripted:<file>")
    if kind == "replay":
        return ReplayProvider.from_path(path)
    if kind == "scripted":
        return ScriptedProvider.from_path(path)
    raise CliError(f"unknown provider kind {kind!r}")


def _build_policy(spec: str, seed: int, budget: int):
    if spec == "auto":
        return AutoOverlapPolicy(budget=budget)
    if spec == "random":
        return RandomPolicy(seed=seed, budget=budget)
    kind, sep, path = spec.partition(":")
    if kind == "replay" and sep and path:
        return ReplayPolicy.from_trace(load_trace(path))
    raise CliError(f"policy spec {spec!r} must be auto, random or replay:<trace file>")


def _histogram_text(histogram: dict) -> str:
    items = sorted(histogram.items(), key=lambda kv: int(kv[0]))
    return ", ".join(f"length {k}: {v}" for k, v in items) if items else "none"


def _report_text(report: dict) -> str:
    lines = []
    lines.append(f"concepts: {report['concept_count']}")
    paths = report["paths"]
    lines.append(
        f"paths: {paths['path_count']} (max depth {paths['max_depth']}, breadth {paths['breadth']})"
    )
    lines.append(f"  histogram: {_histogram_text(paths['length_histogram'])}")
    if report.get("path_delta") is not None:
        delta = report["path_delta"]
        lines.append(f"new paths after merge: {delta['path_count']}")
        lines.append(f"  histogram: {_histogram_text(delta['length_histogram'])}")
    top = report["centrality"][:5]
    lines.append("central concepts:")
    for row in top:
        lines.append(f"  {row['concept']} (degree {row['degree']})")
    if report["clusters"]:
        sizes = ", ".join(f"{name}: {count}" for name, count in report["clusters"].items())
        lines.append(f"clusters: {sizes}")
    if report["unconnected"]["isolated"]:
        lines.append("isolated concepts: " + ", ".join(report["unconnected"]["isolated"]))
    for pair in report["unconnected"]["implied_only_bridges"]:
        lines.append(f"implied-only link: {pair[0]} / {pair[1]}")
    if report["unexplored"]["unanchored_llm"]:
        lines.append(
            "unexplored model concepts: " + ", ".join(report["unexplored"]["unanchored_llm"])
        )
    if report["unexplored"]["author_without_llm"]:
        lines.append(
            "author concepts without model follow-up: "
            + ", ".join(report["unexplored"]["author_without_llm"])
        )
    for chain in report["idea_flow"]["flagged"]:
        lines.append("long causal sequence: " + " -> ".join(chain))
    for finding in report.get("inconsistencies", []):
        pair = finding["pair"]
        lines.append(
            f"polarity conflict ({finding['severity']}): {pair[0]} vs {pair[1]}"
        )
        for conflict in finding["conflicts"]:
            lines.append(
                f"  {conflict['source_attribute']} ({conflict['source_polarity']}) vs "
                f"{conflict['target_attribute']} ({conflict['target_polarity']})"
            )
    return "\n".join(lines) + "\n"


def _cmd_analyze(args) -> int:
    base_doc = load_annotation(args.annotation)
    graph = to_graph(base_doc)
    delta_report = None
    if args.merge:
        base = graph
        for path in args.merge:
            graph = merge_graphs(graph, to_graph(load_annotation(path)))
        delta = delta_paths(base, graph)
        delta_report = {
            "path_count": len(delta.new_paths),
            "length_histogram": {str(k): v for k, v in delta.length_histogram.items()},
            "paths": [list(p) for p in delta.new_paths],
        }
    lexicon = PolarityLexicon.from_path(args.lexicon) if args.lexicon else None
    analogy = load_analogy_map(args.analogy_map) if args.analogy_map else None
    report = metrics_report_dict(graph, analogy=analogy, lexicon=lexicon)
    report["path_delta"] = delta_report
    if args.format == "json":
        sys.stdout.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(_report_text(report))
    return 0


def _cmd_explore(args) -> int:
    paragraph = Path(args.paragraph).read_text("utf-8")
    provider = _build_provider(args.provider)
    policy = _build_policy(args.policy, seed=args.seed, budget=args.budget)
    session = ExplorationSession(args.session_id, paragraph)
    run_policy(session, provider, policy)
    sys.stdout.write(session.export_json())
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import SessionStore, create_app

    provider = _build_provider(args.provider) if args.provider else None
    store = SessionStore(data_dir=args.data_dir, provider=provider)
    app = create_app(store)
    logger.info("serving on %s:%d", args.host, args.port)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _load_session_graph(path: str, revision: int):
    doc = json.loads(Path(path).read_text("utf-8"))
    session = ExplorationSession.from_document(doc)
    if not 0 <= revision < len(session.revisions):
        raise EngineError("unknown-revision", f"session has no revision {revision}")
    layers = [
        to_graph(parse_annotation(session.annotations[rev]))
        for rev in sorted(session.annotations)
        if rev <= revision
    ]
    if not layers:
        raise EngineError("no-annotation", f"no annotation at or before revision {revision}")
    graph = layers[0]
    for layer in layers[1:]:
        graph = merge_graphs(graph, layer)
    return graph


def _cmd_export(args) -> int:
    if bool(args.session) == bool(args.annotation):
        raise CliError("pass exactly one of --session or --annotation")
    if args.session:
        graph = _load_session_graph(args.session, args.revision)
    else:
        graph = to_graph(load_annotation(args.annotation))
    if args.format == "dot":
        sys.stdout.write(graph_to_dot(graph))
    else:
        sys.stdout.write(json.dumps(graph_to_dict(graph), indent=2, ensure_ascii=False) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuegraph",
        description="Concept-graph analysis and cue-driven exploration for write-ups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="compute metrics for an annotation file")
    analyze.add_argument("annotation", help="annotation (.cga) file")
    analyze.add_argument(
        "--merge",
        action="append",
        default=[],
        metavar="DELTA",
        help="later-revision annotation to merge in (repeatable)",
    )
    analyze.add_argument("--lexicon", help="polarity lexicon TSV", default=None)
    analyze.add_argument("--analogy-map", help="analogy mapping JSON", default=None)
    analyze.add_argument("--format", choices=("json", "text"), default="text")
    analyze.set_defaults(func=_cmd_analyze)

    explore = sub.add_parser("explore", help="run an exploration session")
    explore.add_argument("--paragraph", required=True, help="file with the working paragraph")
    explore.add_argument(
        "--provider",
        required=True,
        help="model backend: replay:<fixture.json>, scripted:<script.json> or live",
    )
    explore.add_argument(
        "--policy",
        required=True,
        help="decision policy: replay:<trace.json>, auto or random",
    )
    explore.add_argument("--seed", type=int, default=0)
    explore.add_argument("--budget", type=int, default=5, help="maximum prompt count")
    explore.add_argument("--session-id", default="s1")
    explore.set_defaults(func=_cmd_explore)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--provider", default=None, help="model backend spec (see explore)")
    serve.add_argument("--data-dir", default=None, help="directory for session persistence")
    serve.set_defaults(func=_cmd_serve)

    export = sub.add_parser("export", help="render a graph to DOT or JSON")
    export.add_argument("--session", default=None, help="session export JSON file")
    export.add_argument("--annotation", default=None, help="annotation (.cga) file")
    export.add_argument("--revision", type=int, default=0)
    export.add_argument("--format", choices=("dot", "json"), default="dot")
    export.set_defaults(func=_cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        CliError,
        AnnotationError,
        GraphError,
        MetricsError,
        EngineError,
        ProviderError,
        OSError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
