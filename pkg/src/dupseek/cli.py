"""Command-line interface.

Exit codes: 0 for success (including a "unique" verdict), 10 when a check
finds a duplicate, 1 for usage errors, 2 for data errors (unreadable
files, malformed exports, bad stores, out-of-range parameters).
"""

from __future__ import annotations

import argparse
import os
import sys

from .dot import poset_to_dot, similarity_to_dot
from .errors import DupseekError, ParameterError, StoreIOError
from .evaluation import ExperimentResult, load_ground_truth, run_experiment
from .fca import binarize, build_aoc_poset
from .ingest import BugReport, load_corpus, parse_bugzilla_xml, save_corpus, Corpus
from .lsi import csm_to_csv, tdm_to_csv, tqm_to_csv
from .pipeline import (
    CheckConfig,
    RetrievalReport,
    VERDICT_DUPLICATE,
    report_from_json,
    run_check,
    similarity_matrix_of,
)
from .stopwords import DEFAULT_STOP_WORDS, load_stop_words

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_DUPLICATE = 10


class _UsageError(Exception):
    """A command was invoked incoherently; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; our contract reserves 2 for data
    # errors, so route usage problems to exit code 1 instead
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _threshold_value(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError("threshold must lie in [0, 1]")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _read_bytes(path) -> bytes:
    try:
        with open(path, "rb") as handle:
            return handle.read()
    except OSError as exc:
        raise StoreIOError(path, exc) from exc


def _read_text(path) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise StoreIOError(path, exc) from exc


def _write_text(path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        raise StoreIOError(path, exc) from exc


def _add_query_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--summary", help="summary of the report to check")
    parser.add_argument("--description", default="", help="description of the report")
    parser.add_argument("--id", dest="report_id", help="id of the report")
    parser.add_argument("--xml", help="one-bug Bugzilla XML file with the report")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--threshold", type=_threshold_value, default=None,
        help="duplicate decision threshold in [0, 1] (default 0.80)",
    )
    parser.add_argument(
        "--topics", type=_positive_int, default=None,
        help="number of latent topics (default: reports in play minus one, capped at 300)",
    )
    parser.add_argument("--stopwords", help="stop-word file: one word per line, # comments")


def _config_from(args) -> CheckConfig:
    stop_words = DEFAULT_STOP_WORDS
    if args.stopwords:
        stop_words = load_stop_words(args.stopwords)
    threshold = args.threshold if args.threshold is not None else CheckConfig().threshold
    return CheckConfig(threshold=threshold, topics=args.topics, stop_words=stop_words)


def _new_report_from(args, require_id: bool = False) -> BugReport:
    if args.xml and args.summary:
        raise _UsageError("give the report via --xml or --summary, not both")
    if args.xml:
        reports = parse_bugzilla_xml(_read_bytes(args.xml))
        if len(reports) != 1:
            raise ParameterError(
                f"{args.xml}: expected exactly 1 bug element, found {len(reports)}"
            )
        return reports[0]
    if not args.summary:
        raise _UsageError("a report is required: --summary or --xml")
    if require_id and not args.report_id:
        raise _UsageError("--id is required here")
    return BugReport(args.report_id or "0", args.summary, args.description)


def cmd_ingest(args) -> int:
    reports = parse_bugzilla_xml(_read_bytes(args.xml))
    corpus = Corpus(tuple(reports))
    save_corpus(corpus, args.store)
    noun = "report" if len(corpus) == 1 else "reports"
    print(f"{len(corpus)} {noun} ingested")
    return EXIT_OK


def _render_text_report(result: RetrievalReport, corpus_size: int) -> str:
    diagnostics = result.diagnostics
    duplicate_ids = {
        doc_id for doc_id, _ in (result.duplicates.matches if result.duplicates else ())
    }
    lines = [
        f"verdict: {result.verdict}",
        (
            f"query {result.query_id} against {corpus_size} reports"
            f" (threshold {diagnostics.threshold:g}, topics {diagnostics.effective_topics},"
            f" dropped terms {diagnostics.dropped_terms})"
        ),
    ]
    if diagnostics.degenerate:
        lines.append("warning: no query term appears in the corpus vocabulary")
    for doc_id, score in result.ranked:
        flag = "  <- duplicate" if doc_id in duplicate_ids else ""
        lines.append(f"  {doc_id}  {score:+.5f}{flag}")
    return "\n".join(lines) + "\n"


def cmd_check(args) -> int:
    corpus = load_corpus(args.store)
    report = _new_report_from(args)
    config = _config_from(args)
    result, artifacts = run_check(corpus, report, config)
    if args.dump_matrices:
        os.makedirs(args.dump_matrices, exist_ok=True)
        _write_text(os.path.join(args.dump_matrices, "tdm.csv"),
                    tdm_to_csv(artifacts.tdm, artifacts.vocabulary))
        _write_text(os.path.join(args.dump_matrices, "tqm.csv"),
                    tqm_to_csv([artifacts.query], artifacts.vocabulary))
        _write_text(os.path.join(args.dump_matrices, "csm.csv"),
                    csm_to_csv(artifacts.csm))
    if args.out:
        _write_text(args.out, result.to_json())
    if args.format == "machine":
        sys.stdout.write(result.to_json())
    else:
        sys.stdout.write(_render_text_report(result, len(corpus)))
    return EXIT_DUPLICATE if result.verdict == VERDICT_DUPLICATE else EXIT_OK


def cmd_accept(args) -> int:
    corpus = load_corpus(args.store)
    report = _new_report_from(args, require_id=True)
    corpus = corpus.add(report)
    save_corpus(corpus, args.store)
    print(f"report {report.id} accepted (store now holds {len(corpus)} reports)")
    return EXIT_OK


def cmd_reject(args) -> int:
    ledger = args.ledger or f"{args.store}.rejected"
    try:
        with open(ledger, "a", encoding="utf-8") as handle:
            handle.write(f"{args.report_id}\n")
    except OSError as exc:
        raise StoreIOError(ledger, exc) from exc
    print(f"report {args.report_id} rejected")
    return EXIT_OK


def cmd_graph(args) -> int:
    if args.report and (args.store or args.summary or args.xml):
        raise _UsageError("give --report or a store with query flags, not both")
    if args.report:
        result = report_from_json(_read_text(args.report))
        if args.kind == "similarity":
            dot = similarity_to_dot(result)
        else:
            csm = similarity_matrix_of(result)
            poset = build_aoc_poset(binarize(csm, result.diagnostics.threshold))
            dot = poset_to_dot(poset)
    else:
        if not args.store:
            raise _UsageError("a store (with query flags) or --report is required")
        corpus = load_corpus(args.store)
        report = _new_report_from(args)
        result, artifacts = run_check(corpus, report, _config_from(args))
        dot = similarity_to_dot(result) if args.kind == "similarity" else poset_to_dot(artifacts.poset)
    _write_text(args.out, dot)
    print(f"wrote {args.kind} graph to {args.out}")
    return EXIT_OK


def _format_percent(value: float) -> str:
    return f"{value * 100:.1f}%"


def _render_eval_table(result: ExperimentResult) -> str:
    header = f"{'query':<12} {'recall':>9} {'precision':>9} {'f-measure':>9}"
    lines = [header, "-" * len(header)]
    for query_id in sorted(result.per_query, key=lambda i: (len(i), i)):
        metrics = result.per_query[query_id].metrics
        lines.append(
            f"{query_id:<12} {_format_percent(metrics.recall):>9}"
            f" {_format_percent(metrics.precision):>9}"
            f" {_format_percent(metrics.f_measure):>9}"
        )
    lines.append("-" * len(header))
    aggregate = result.aggregate
    lines.append(
        f"{'micro':<12} {_format_percent(aggregate.recall):>9}"
        f" {_format_percent(aggregate.precision):>9}"
        f" {_format_percent(aggregate.f_measure):>9}"
    )
    if result.unlabeled_false_positives is not None:
        count = len(result.unlabeled_false_positives)
        lines.append(f"unlabeled reports retrieving something: {count}")
        for query_id in sorted(result.unlabeled_false_positives, key=lambda i: (len(i), i)):
            ids = sorted(result.unlabeled_false_positives[query_id], key=lambda i: (len(i), i))
            lines.append(f"  {query_id} -> {', '.join(ids)}")
    return "\n".join(lines) + "\n"


def _eval_to_json(result: ExperimentResult) -> str:
    import json

    ordered = sorted(result.per_query, key=lambda i: (len(i), i))
    payload = {
        "format": "dupseek-eval v1",
        "per_query": {
            query_id: {
                "recall": result.per_query[query_id].metrics.recall,
                "precision": result.per_query[query_id].metrics.precision,
                "f_measure": result.per_query[query_id].metrics.f_measure,
                "relevant": sorted(result.per_query[query_id].relevant, key=lambda i: (len(i), i)),
                "retrieved": sorted(result.per_query[query_id].retrieved, key=lambda i: (len(i), i)),
            }
            for query_id in ordered
        },
        "aggregate": {
            "recall": result.aggregate.recall,
            "precision": result.aggregate.precision,
            "f_measure": result.aggregate.f_measure,
        },
        "unlabeled_false_positives": (
            None
            if result.unlabeled_false_positives is None
            else {
                query_id: sorted(ids, key=lambda i: (len(i), i))
                for query_id, ids in sorted(result.unlabeled_false_positives.items())
            }
        ),
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def cmd_eval(args) -> int:
    corpus = load_corpus(args.store)
    truth = load_ground_truth(args.truth)
    result = run_experiment(
        corpus, truth, _config_from(args), diagnose_unlabeled=args.diagnose_unlabeled
    )
    rendered = _eval_to_json(result) if args.format == "machine" else _render_eval_table(result)
    if args.out:
        _write_text(args.out, _eval_to_json(result))
    sys.stdout.write(rendered)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(
        prog="dupseek",
        description="Detect duplicate bug reports in a Bugzilla corpus.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", help="parse a Bugzilla XML export into a store")
    ingest.add_argument("xml", help="Bugzilla XML export file")
    ingest.add_argument("store", help="corpus store file to write")
    ingest.set_defaults(handler=cmd_ingest)

    check = commands.add_parser("check", help="check a new report against a store")
    check.add_argument("store", help="corpus store file")
    _add_query_flags(check)
    _add_config_flags(check)
    check.add_argument("--format", choices=("text", "machine"), default="text")
    check.add_argument("--out", help="also write the machine-readable report here")
    check.add_argument("--dump-matrices", metavar="DIR",
                       help="write tdm.csv, tqm.csv, csm.csv into DIR")
    check.set_defaults(handler=cmd_check)

    accept = commands.add_parser("accept", help="append a unique report to the store")
    accept.add_argument("store", help="corpus store file")
    _add_query_flags(accept)
    accept.set_defaults(handler=cmd_accept)

    reject = commands.add_parser("reject", help="log a duplicate report as discarded")
    reject.add_argument("store", help="corpus store file (stays untouched)")
    reject.add_argument("--id", dest="report_id", required=True, help="id of the rejected report")
    reject.add_argument("--ledger", help="discard ledger file (default: STORE.rejected)")
    reject.set_defaults(handler=cmd_reject)

    graph = commands.add_parser("graph", help="render a check as a Graphviz DOT file")
    graph.add_argument("store", nargs="?", help="corpus store file")
    _add_query_flags(graph)
    _add_config_flags(graph)
    graph.add_argument("--report", help="machine-readable report to render instead of re-checking")
    graph.add_argument("--kind", choices=("similarity", "poset"), default="similarity")
    graph.add_argument("--out", required=True, help="path for the DOT output")
    graph.set_defaults(handler=cmd_graph)

    evaluate = commands.add_parser("eval", help="score retrieval against known duplicate pairs")
    evaluate.add_argument("store", help="corpus store file")
    evaluate.add_argument("truth", help="ground truth file: query_id<TAB>duplicate_id per line")
    _add_config_flags(evaluate)
    evaluate.add_argument("--format", choices=("text", "machine"), default="text")
    evaluate.add_argument("--out", help="also write the machine-readable result here")
    evaluate.add_argument("--diagnose-unlabeled", action="store_true",
                          help="also report what unlabeled reports retrieve")
    evaluate.set_defaults(handler=cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except _UsageError as exc:
        print(f"dupseek: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DupseekError as exc:
        print(f"dupseek: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
