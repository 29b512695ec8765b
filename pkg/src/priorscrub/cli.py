"""Command-line entry point covering every pipeline."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from priorscrub import jsonl
from priorscrub.detector import detect, flag_sentences
from priorscrub.diffscore import align_corpora, score_corpus
from priorscrub.lexicon import Lexicon, default_lexicon, load_lexicon
from priorscrub.models import Label, make_report
from priorscrub.rewrite import (
    HttpCompletion,
    MockCompletion,
    RewriteConfig,
    default_context_examples,
    merged_text,
    rewrite_report,
)
from priorscrub import retrieval
from priorscrub import metrics as eval_metrics
from priorscrub import review
from priorscrub import scrubber
from priorscrub import stats as corpus_stats


def _lexicon(args) -> Lexicon:
    if getattr(args, "lexicon", None):
        return load_lexicon(args.lexicon)
    return default_lexicon()


def _write_json(payload, path: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def cmd_scrub(args) -> int:
    lexicon = _lexicon(args)
    with open(args.input, encoding="utf-8") as inp, open(args.output, "w", encoding="utf-8") as out:
        stats = scrubber.scrub_corpus(inp, lexicon, out)
    if args.stats:
        _write_json(stats.as_dict(), args.stats)
    else:
        print(json.dumps(stats.as_dict()))
    return 1 if stats.lines_skipped else 0


def cmd_detect(args) -> int:
    lexicon = _lexicon(args)
    with open(args.input, encoding="utf-8") as inp, open(args.output, "w", encoding="utf-8") as out:
        for record in jsonl.read_records(inp):
            labeled = detect(make_report(record["id"], record["text"]), lexicon)
            out.write(
                json.dumps(
                    {
                        "id": record["id"],
                        "labels": [
                            [1 if l is Label.REMOVE else 0 for l in sent]
                            for sent in labeled.labels
                        ],
                        "spans": [
                            {
                                "sentence": s.sentence_index,
                                "start": s.token_start,
                                "end": s.token_end,
                                "keyword": s.keyword,
                                "rule_id": s.rule_id,
                            }
                            for s in labeled.spans
                        ],
                    }
                )
                + "\n"
            )
    return 0


def cmd_rewrite(args) -> int:
    lexicon = _lexicon(args)
    if args.config:
        config = RewriteConfig.from_file(args.config)
    else:
        config = RewriteConfig(context_examples=default_context_examples())
    if not config.context_examples:
        config.context_examples = default_context_examples()
    transport = MockCompletion(lexicon) if args.mock else HttpCompletion()
    failures = 0
    with open(args.input, encoding="utf-8") as inp, open(args.output, "w", encoding="utf-8") as out:
        for record in jsonl.read_records(inp):
            report = make_report(record["id"], record["text"])
            flags = flag_sentences(report, lexicon, threshold=args.threshold)
            results = rewrite_report(report, flags, config, transport)
            failures += sum(1 for r in results if r.error)
            out.write(
                json.dumps(
                    {
                        "id": record["id"],
                        "text": merged_text(results),
                        "sentences": [
                            {
                                "index": r.sentence_index,
                                "original": r.original,
                                "rewritten": r.rewritten,
                                "source": r.source.value,
                                "error": r.error,
                            }
                            for r in results
                        ],
                    }
                )
                + "\n"
            )
    if failures:
        print("warning: %d sentence(s) kept their original text after transport failures" % failures,
              file=sys.stderr)
    return 0


def _tokens_by_id(path: str) -> dict[str, list[str]]:
    out = {}
    for record in jsonl.read_records_path(path):
        report = make_report(record["id"], record["text"])
        out[record["id"]] = [t.text for t in report.all_tokens()]
    return out


def cmd_score_f1(args) -> int:
    triples = align_corpora(
        _tokens_by_id(args.original),
        _tokens_by_id(args.modified),
        _tokens_by_id(args.ground_truth),
    )
    result = score_corpus(triples)
    _write_json(result, args.report)
    if args.figures:
        from priorscrub.figures import f1_figures

        for path in f1_figures(result, args.figures):
            print("wrote", path, file=sys.stderr)
    return 0


def cmd_stats(args) -> int:
    lexicon = _lexicon(args)
    if args.stats_command == "count":
        records = jsonl.read_records_path(args.input)
        table = corpus_stats.keyword_counts(
            records, lexicon, denominator=args.denominator, raw_surface=args.raw
        )
        display = [
            {**row, "relative": "%.3f" % row["relative"] if row["relative"] is not None else "n/a"}
            for row in table["rows"]
        ]
        print(corpus_stats.format_table(display, ["keyword", "instance_count", "report_count", "relative"]))
        print("total: %d reports with a keyword (relative %s, denominator %d)"
              % (table["total"]["report_count"], table["total"]["relative"], table["denominator"]))
        if args.output:
            _write_json(table, args.output)
        return 0
    if args.stats_command == "diff":
        table = corpus_stats.before_after(
            jsonl.read_records_path(args.before),
            jsonl.read_records_path(args.after),
            lexicon,
            raw_surface=args.raw,
        )
        print(corpus_stats.format_table(table["rows"], ["keyword", "before", "after"]))
        reduction = table["reduction"]
        print("total: %d -> %d (reduction %s)"
              % (table["total_before"], table["total_after"],
                 "n/a" if reduction is None else "%.4f" % reduction))
        if args.output:
            _write_json(table, args.output)
        return 0
    if args.stats_command == "split":
        return _do_split(args)
    raise SystemExit("unknown stats subcommand")


def _do_split(args) -> int:
    records = jsonl.read_records_path(args.input)
    train, test = corpus_stats.split(records, train_fraction=args.fraction, seed=args.seed)
    jsonl.write_records_path(train, args.train_output)
    jsonl.write_records_path(test, args.test_output)
    shared = corpus_stats.leakage(train, test)
    print("train=%d test=%d shared_patients=%d" % (len(train), len(test), len(shared)))
    return 1 if shared else 0


def cmd_retrieve(args) -> int:
    store = retrieval.load_store(args.store)
    queries = retrieval.load_store(args.queries)
    mode = retrieval.RetrievalMode.REPORT if args.mode == "report" else retrieval.RetrievalMode.SENTENCES
    results = retrieval.batch_retrieve(queries.vectors, store, mode, k=args.k)
    with open(args.output, "w", encoding="utf-8") as out:
        for qid, result in zip(queries.ids, results):
            out.write(json.dumps({"query_id": qid, **result.as_dict()}) + "\n")
    return 0


def cmd_metrics(args) -> int:
    predictions = {r["id"]: r["text"] for r in jsonl.read_records_path(args.pred)}
    truths = {r["id"]: r["text"] for r in jsonl.read_records_path(args.truth)}

    report_vectors = None
    if args.semb_store:
        pred_store = retrieval.load_store(args.semb_store[0])
        truth_store = retrieval.load_store(args.semb_store[1])
        pred_vecs = dict(zip(pred_store.ids, pred_store.vectors))
        truth_vecs = dict(zip(truth_store.ids, truth_store.vectors))
        report_vectors = {
            i: (pred_vecs[i], truth_vecs[i]) for i in pred_vecs if i in truth_vecs
        }

    token_embeddings = None
    if args.token_emb_dir:
        import os

        token_embeddings = {}
        for name in sorted(os.listdir(args.token_emb_dir)):
            if not name.endswith(".pred.embs"):
                continue
            report_id = name[: -len(".pred.embs")]
            truth_name = report_id + ".truth.embs"
            truth_path = os.path.join(args.token_emb_dir, truth_name)
            if not os.path.exists(truth_path):
                continue
            ps = retrieval.load_store(os.path.join(args.token_emb_dir, name))
            ts = retrieval.load_store(truth_path)
            token_embeddings[report_id] = (
                eval_metrics.TokenEmbeddings(tokens=ps.texts, matrix=np.asarray(ps.vectors)),
                eval_metrics.TokenEmbeddings(tokens=ts.texts, matrix=np.asarray(ts.vectors)),
            )

    entities = None
    if args.entities:
        pred_entities = {
            r["id"]: eval_metrics.EntitySet.from_records(r["entities"])
            for r in jsonl.read_records_path(args.entities[0])
        }
        truth_entities = {
            r["id"]: eval_metrics.EntitySet.from_records(r["entities"])
            for r in jsonl.read_records_path(args.entities[1])
        }
        entities = {
            i: (pred_entities[i], truth_entities[i])
            for i in pred_entities
            if i in truth_entities
        }

    result = eval_metrics.evaluate_run(
        predictions,
        truths,
        report_vectors=report_vectors,
        token_embeddings=token_embeddings,
        entities=entities,
    )
    _write_json(result, args.output)
    if args.figures:
        from priorscrub.figures import metric_figures

        for path in metric_figures(result, args.figures):
            print("wrote", path, file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    lexicon = _lexicon(args)
    records = jsonl.read_records_path(args.corpus)
    try:
        review.serve(
            records,
            lexicon,
            session_path=args.session,
            bind_address=args.bind,
            static_dir=args.static_dir,
            export_path=args.export_path,
            annotator=args.annotator,
        )
    except (review.CorruptSession, review.BindError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="priorscrub",
        description="Detect and remove references to prior studies in radiology reports",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scrub", help="remove detected prior references from a corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--stats")
    p.set_defaults(func=cmd_scrub)

    p = sub.add_parser("detect", help="emit KEEP/REMOVE labels and spans for a corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--lexicon")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("rewrite", help="rewrite flagged sentences via a completion endpoint")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--config")
    p.add_argument("--lexicon")
    p.add_argument("--mock", action="store_true", help="use the offline mock transport")
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("score-f1", help="three-way diff F1 of removals")
    p.add_argument("--original", required=True)
    p.add_argument("--modified", required=True)
    p.add_argument("--ground-truth", required=True)
    p.add_argument("--report")
    p.add_argument("--figures")
    p.set_defaults(func=cmd_score_f1)

    p = sub.add_parser("stats", help="corpus keyword statistics")
    stats_sub = p.add_subparsers(dest="stats_command", required=True)
    c = stats_sub.add_parser("count", help="keyword frequency table")
    c.add_argument("--input", required=True)
    c.add_argument("--lexicon")
    c.add_argument("--denominator", type=int)
    c.add_argument("--raw", action="store_true", help="count surface matches, ignoring the change qualifier rule")
    c.add_argument("--output")
    c.set_defaults(func=cmd_stats)
    d = stats_sub.add_parser("diff", help="before/after keyword counts")
    d.add_argument("--before", required=True)
    d.add_argument("--after", required=True)
    d.add_argument("--lexicon")
    d.add_argument("--raw", action="store_true")
    d.add_argument("--output")
    d.set_defaults(func=cmd_stats)
    s = stats_sub.add_parser("split", help="shuffled patient-grouped split")
    s.add_argument("--input", required=True)
    s.add_argument("--train-output", required=True)
    s.add_argument("--test-output", required=True)
    s.add_argument("--fraction", type=float, default=0.8)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--lexicon")
    s.set_defaults(func=cmd_stats)

    p = sub.add_parser("split", help="shuffled patient-grouped train/test split")
    p.add_argument("--input", required=True)
    p.add_argument("--train-output", required=True)
    p.add_argument("--test-output", required=True)
    p.add_argument("--fraction", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_do_split)

    p = sub.add_parser("retrieve", help="exact dot-product retrieval from an embedding store")
    p.add_argument("--store", required=True)
    p.add_argument("--queries", required=True, help="embedding store whose rows are the queries")
    p.add_argument("--mode", choices=["report", "sentences"], required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("metrics", help="semantic metrics over supplied embeddings/entities")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--semb-store", nargs=2, metavar=("PRED", "TRUTH"))
    p.add_argument("--token-emb-dir")
    p.add_argument("--entities", nargs=2, metavar=("PRED", "TRUTH"))
    p.add_argument("--output")
    p.add_argument("--figures")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("serve", help="run the span-review HTTP service")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--session", required=True)
    p.add_argument("--bind", default="127.0.0.1:8077")
    p.add_argument("--static-dir")
    p.add_argument("--export-path")
    p.add_argument("--annotator", default="annotator")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
