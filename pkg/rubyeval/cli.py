"""
Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 validation failure (bad corpus,
unparseable reference, mismatched reports), 3 I/O failure.
"""
import argparse
import json
import logging
import math
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Sequence

from rubyeval.config import settings
from rubyeval.core.metrics import BleuConfig, MetricOptions, RubyError, bleu, ruby
from rubyeval.core.minilang import TokenMode, parse_source, tokenize
from rubyeval.core.pdg import build_pdg, is_applicable
from rubyeval.core.stats import StatisticsError, t_critical
from rubyeval.harness.analysis import IdMismatchError, compare_models, consensus_subsets
from rubyeval.harness.corpus import CorpusIOError, CorpusValidationError, load_corpus, write_corpus
from rubyeval.harness.permute import permute_corpus
from rubyeval.harness.report import read_records_csv, write_records_csv, write_summary_json
from rubyeval.harness.scoring import score_corpus

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_IO = 3

BP_CHOICES = {"ratio": "ratio", "exp": "exponential", "exponential": "exponential"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CorpusIOError(f"cannot read {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise CorpusIOError(f"cannot decode {path} as UTF-8: {e}") from e


def _write(path: str, text: str):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise CorpusIOError(f"cannot write {path}: {e}") from e


def _bleu_config(args) -> BleuConfig:
    return BleuConfig(
        max_n=args.max_n,
        bp_mode=BP_CHOICES[args.bp],
        zero_ngram_policy="add-one-smoothing" if args.smoothing else settings.BLEU_ZERO_POLICY,
    )


def _json_safe(value):
    # JSON has no infinities; a degenerate t-test reports t = +-inf
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def _print_json(payload):
    print(json.dumps(_json_safe(payload), indent=2, sort_keys=True, allow_nan=False))


def cmd_score(args) -> int:
    reference, candidate = _read(args.reference), _read(args.candidate)
    cfg = _bleu_config(args)
    options = MetricOptions.from_settings(settings).model_copy(
        update={"bleu": cfg, "token_mode": TokenMode(args.mode), "sts_norm": args.norm or settings.STS_NORM})
    record = ruby(reference, candidate, options, pair_id=Path(args.candidate).stem)
    payload = record.model_dump(mode="json")
    # BLEU depends on tokenisation; report every mode side by side
    payload["bleu_by_mode"] = {
        m.value: bleu(tokenize(reference, m), tokenize(candidate, m), cfg) for m in TokenMode
    }
    _print_json(payload)
    return 0


def cmd_corpus(args) -> int:
    corpus = load_corpus(args.input)
    for err in corpus.errors:
        print(f"{args.input}: {err}", file=sys.stderr)
    report = score_corpus(corpus.pairs, MetricOptions.from_settings(settings), args.workers)
    for failure in report.failures:
        print(f"{args.input}: pair {failure.pair_id}: {failure.error}", file=sys.stderr)
    write_records_csv(args.out, report.records)
    if args.summary:
        write_summary_json(args.summary, report.summary)
    s = report.summary
    print(f"scored {s.count} pairs ({s.failures} failed, {len(corpus.errors)} rejected lines); "
          f"levels {s.ruby_levels}")
    return 0


def cmd_compare(args) -> int:
    result = compare_models(read_records_csv(args.a), read_records_csv(args.b), args.metric, args.confidence)
    payload = asdict(result)
    payload["metric"] = args.metric
    payload["t_critical"] = t_critical(result.df, args.confidence)
    payload["significant"] = result.p_two_sided < 1 - args.confidence
    _print_json(payload)
    return 0


def cmd_permute(args) -> int:
    corpus = load_corpus(args.input)
    cfg = BleuConfig(max_n=args.max_n)
    permuted = permute_corpus(corpus.pairs, cfg, TokenMode(args.mode), args.seed, settings.PERMUTE_MAX_ATTEMPTS)
    write_corpus(args.out, permuted)
    changed = sum(1 for a, b in zip(corpus.pairs, permuted) if a.candidate != b.candidate)
    print(f"permuted {changed} of {len(permuted)} candidates")
    return 0


def cmd_ransac(args) -> int:
    result = consensus_subsets(read_records_csv(args.input), args.iterations, args.epsilon, args.seed, args.runs)
    _print_json({
        "inliers": len(result.inlier_ids),
        "subset_correlation": result.subset_correlation,
        "line": list(result.line),
        "runs": [{"size": r.size, "correlation": r.correlation} for r in result.runs],
        "outlier_ids": sorted(str(i) for i in result.outlier_ids),
    })
    return 0


def cmd_pdg_dump(args) -> int:
    outcome = parse_source(_read(args.file))
    if not outcome.parsed:
        print(f"{args.file}: does not parse: {outcome.diagnostics[0]}", file=sys.stderr)
        return EXIT_VALIDATION
    graph = build_pdg(outcome.tree)
    if not is_applicable(graph):
        print(f"{args.file}: no dependence graph: {graph.reason}", file=sys.stderr)
        return EXIT_VALIDATION
    dot = graph.to_dot(Path(args.file).stem or "pdg")
    if args.out:
        _write(args.out, dot)
    else:
        sys.stdout.write(dot)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rubyeval", description="Similarity metrics for migrated source code.")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("score", help="score one reference/candidate pair")
    p.add_argument("--reference", required=True)
    p.add_argument("--candidate", required=True)
    p.add_argument("--mode", choices=[m.value for m in TokenMode], default=settings.TOKEN_MODE)
    p.add_argument("--max-n", type=int, default=settings.BLEU_MAX_N)
    p.add_argument("--bp", choices=sorted(BP_CHOICES), default=settings.BLEU_BP_MODE)
    p.add_argument("--smoothing", action="store_true", help="add-one smoothing for 2+-gram precisions")
    p.add_argument("--norm", choices=["max-length", "reference-length"], default=None)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("corpus", help="score a JSON-lines corpus")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--summary")
    p.add_argument("--workers", type=int, default=settings.WORKERS)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("compare", help="paired t-test between two reports")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--metric", choices=["bleu", "sts", "trs", "grs", "ruby", "semantic"], default="ruby")
    p.add_argument("--confidence", type=float, default=0.95)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("permute", help="BLEU-preserving permutation of every candidate")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=[m.value for m in TokenMode], default=settings.TOKEN_MODE)
    p.add_argument("--max-n", type=int, default=settings.BLEU_MAX_N)
    p.set_defaults(func=cmd_permute)

    p = sub.add_parser("ransac", help="consensus subset of (ruby, semantic) points")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--runs", type=int, default=settings.RANSAC_RUNS)
    p.add_argument("--epsilon", type=float, default=settings.RANSAC_EPSILON)
    p.add_argument("--iterations", type=int, default=settings.RANSAC_ITERATIONS)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_ransac)

    p = sub.add_parser("pdg-dump", help="write a method's dependence graph as DOT")
    p.add_argument("--file", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pdg_dump)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format='%(asctime)s - %(levelname)s - %(message)s')
    if getattr(args, "max_n", 1) < 1:
        parser.error("--max-n must be >= 1")
    try:
        return args.func(args)
    except CorpusIOError as e:
        logger.error(str(e))
        return EXIT_IO
    except CorpusValidationError as e:
        logger.error(str(e))
        for err in e.errors:
            print(f"  {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except (RubyError, IdMismatchError, StatisticsError) as e:
        logger.error(str(e))
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
