"""Command-line entry points: translate, simulate, score, tune-gap, serve.

Exit codes: 0 success, 1 usage error, 2 data error. Flags win over the
optional key=value config file (--config), which wins over built-in
defaults; --model also falls back to the IMT_MODEL_PATH environment
variable. All subcommands are deterministic given identical inputs.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from segimt.corpus_io import (
    CorpusFormatError,
    ParallelCorpus,
    load_parallel,
    load_parallel_tsv,
    report_csv,
    report_json,
    write_session_logs,
)
from segimt.core import Side, TokenSeq
from segimt.decoder import DecoderConfig, decode
from segimt.metrics import CorpusScores, bleu, corpus_ter, effort_metrics
from segimt.scorer import ToyModelFormatError, load_toy_model
from segimt.simulator import SessionLog, SimConfig, SimulationError, run_session

USAGE_ERROR = 1
DATA_ERROR = 2

DEFAULT_MAX_GAP = 5


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage problems; we document 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise CliError(message, USAGE_ERROR)


def _build_parser() -> _Parser:
    parser = _Parser(prog="segimt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: _Parser) -> None:
        p.add_argument("--config", help="flat key=value file supplying flag defaults")
        p.add_argument("--model", help="toy model file (fallback: IMT_MODEL_PATH)")
        p.add_argument("--max-gap", type=int, help="largest searched gap length (default 5)")
        p.add_argument("--max-len", type=int, help="decoding length cap (default 2*source+5)")

    def add_corpus(p: _Parser) -> None:
        p.add_argument("--source", help="source-side text file, one sentence per line")
        p.add_argument("--target", help="reference-side text file, aligned with --source")
        p.add_argument("--tsv", help="2-column TSV corpus (alternative to --source/--target)")
        p.add_argument("--lowercase", action="store_true", help="lowercase both sides on load")

    p = sub.add_parser("translate", help="greedily translate a source file to stdout")
    p.add_argument("--input", required=True, help="source text file")
    add_common(p)

    p = sub.add_parser("simulate", help="run simulated sessions and report all metrics")
    add_corpus(p)
    add_common(p)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--csv", help="write the CSV report here")
    p.add_argument("--log", help="write JSONL session logs here")
    p.add_argument("--max-iterations", type=int, default=1000)

    p = sub.add_parser("score", help="BLEU/TER of a hypothesis file against a reference file")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--config", help="flat key=value file supplying flag defaults")

    p = sub.add_parser("tune-gap", help="pick the gap length minimizing simulated KSR")
    p.add_argument("--dev-corpus", help="2-column TSV development corpus")
    p.add_argument("--dev-source", help="source file (two-file alternative)")
    p.add_argument("--dev-target", help="reference file (two-file alternative)")
    p.add_argument("--max-gap-range", required=True, help="inclusive range A..B")
    add_common(p)

    p = sub.add_parser("serve", help="run the live session HTTP service")
    p.add_argument("--port", type=int, help="TCP port (default 8000)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--persist", help="append accepted sessions to this JSONL file")
    p.add_argument("--cors-origin", action="append", help="allowed UI origin (repeatable)")
    add_common(p)

    return parser


def _apply_config(args: argparse.Namespace) -> None:
    """Fill unset flags from the --config file (flags win)."""
    path = getattr(args, "config", None)
    if not path:
        return
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise CliError(f"{path}:{lineno}: expected key=value", DATA_ERROR)
                attr = key.strip().replace("-", "_")
                if not hasattr(args, attr):
                    continue
                current = getattr(args, attr)
                if current in (None, False):
                    value = value.strip()
                    if isinstance(current, bool):
                        setattr(args, attr, value.lower() in ("1", "true", "yes"))
                    elif attr in ("max_gap", "max_len", "port", "max_iterations"):
                        setattr(args, attr, int(value))
                    else:
                        setattr(args, attr, value)
    except OSError as exc:
        raise CliError(f"cannot read config: {exc}", DATA_ERROR)


def _load_model(args: argparse.Namespace):
    path = getattr(args, "model", None) or os.environ.get("IMT_MODEL_PATH")
    if not path:
        raise CliError("no model: pass --model or set IMT_MODEL_PATH", USAGE_ERROR)
    try:
        return load_toy_model(path)
    except FileNotFoundError:
        raise CliError(f"model file not found: {path}", DATA_ERROR)
    except ToyModelFormatError as exc:
        raise CliError(f"bad model file {path}: {exc}", DATA_ERROR)


def _decoder_config(args: argparse.Namespace) -> DecoderConfig:
    max_gap = getattr(args, "max_gap", None)
    max_len = getattr(args, "max_len", None)
    try:
        return DecoderConfig(
            max_gap_len=DEFAULT_MAX_GAP if max_gap is None else max_gap,
            max_total_len=max_len,
        )
    except ValueError as exc:
        raise CliError(str(exc), USAGE_ERROR)


def _load_corpus(args: argparse.Namespace, tsv_attr="tsv", src_attr="source", tgt_attr="target") -> ParallelCorpus:
    tsv = getattr(args, tsv_attr, None)
    src = getattr(args, src_attr, None)
    tgt = getattr(args, tgt_attr, None)
    lowercase = bool(getattr(args, "lowercase", False))
    try:
        if tsv:
            corpus = load_parallel_tsv(tsv, lowercase=lowercase)
        elif src and tgt:
            corpus = load_parallel(src, tgt, lowercase=lowercase)
        else:
            raise CliError("no corpus: pass --tsv or both --source and --target", USAGE_ERROR)
    except FileNotFoundError as exc:
        raise CliError(f"corpus file not found: {exc.filename}", DATA_ERROR)
    except CorpusFormatError as exc:
        raise CliError(str(exc), DATA_ERROR)
    if len(corpus) == 0:
        raise CliError("corpus is empty", DATA_ERROR)
    return corpus


def _cmd_translate(args: argparse.Namespace) -> int:
    scorer = _load_model(args)
    config = _decoder_config(args)
    try:
        with open(args.input, encoding="utf-8") as fh:
            lines = [line.strip() for line in fh]
    except OSError as exc:
        raise CliError(f"cannot read input: {exc}", DATA_ERROR)
    lines = [line for line in lines if line]
    if not lines:
        raise CliError("input file is empty", DATA_ERROR)
    for line in lines:
        source = TokenSeq.from_text(line, Side.SOURCE)
        print(decode(source, scorer, config).tokens.text())
    return 0


def _simulate_corpus(
    corpus: ParallelCorpus, scorer, config: DecoderConfig, max_iterations: int
) -> tuple[CorpusScores, list[SessionLog]]:
    logs: list[SessionLog] = []
    initial_hyps: list[TokenSeq] = []
    for src, ref in corpus.pairs:
        try:
            log = run_session(src, ref, scorer, config, SimConfig(max_iterations=max_iterations))
        except SimulationError as exc:
            raise CliError(f"session for {src.text()!r} diverged: {exc}", DATA_ERROR)
        logs.append(log)
        initial = log.iterations[0].hypothesis_before.tokens if log.iterations else log.reference
        initial_hyps.append(initial)
    references = corpus.references()
    wsr, ksr, mar = effort_metrics(logs)
    scores = CorpusScores(
        bleu=bleu(initial_hyps, references),
        ter=corpus_ter(initial_hyps, references),
        wsr=wsr,
        ksr=ksr,
        mar=mar,
        sentences=len(corpus),
    )
    return scores, logs


def _cmd_simulate(args: argparse.Namespace) -> int:
    scorer = _load_model(args)
    config = _decoder_config(args)
    corpus = _load_corpus(args)
    scores, logs = _simulate_corpus(corpus, scorer, config, args.max_iterations)
    payload = report_json(scores)
    sys.stdout.write(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(report_csv(scores))
    if args.log:
        write_session_logs(logs, args.log)
    return 0


def _cmd_score(args: argparse.Namespace) -> int:
    try:
        hyps = [TokenSeq.from_text(l) for l in _nonempty_lines(args.hyp)]
        refs = [TokenSeq.from_text(l) for l in _nonempty_lines(args.ref)]
    except OSError as exc:
        raise CliError(f"cannot read file: {exc}", DATA_ERROR)
    if not hyps or not refs:
        raise CliError("empty hypothesis or reference file", DATA_ERROR)
    if len(hyps) != len(refs):
        raise CliError(f"line count {len(hyps)} != {len(refs)}", DATA_ERROR)
    import json

    payload = (
        json.dumps(
            {"bleu": bleu(hyps, refs), "ter": corpus_ter(hyps, refs), "sentences": len(hyps)},
            sort_keys=True,
        )
        + "\n"
    )
    sys.stdout.write(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    return 0


def _nonempty_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def _cmd_tune_gap(args: argparse.Namespace) -> int:
    bounds = args.max_gap_range.split("..")
    if len(bounds) != 2:
        raise CliError("--max-gap-range must look like A..B", USAGE_ERROR)
    try:
        low, high = int(bounds[0]), int(bounds[1])
    except ValueError:
        raise CliError("--max-gap-range bounds must be integers", USAGE_ERROR)
    if low > high or low < 0:
        raise CliError(f"empty range {low}..{high}", USAGE_ERROR)

    scorer = _load_model(args)
    corpus = _load_corpus(args, tsv_attr="dev_corpus", src_attr="dev_source", tgt_attr="dev_target")
    ksr_by_gap: dict[int, float] = {}
    for gap in range(low, high + 1):
        config = DecoderConfig(max_gap_len=gap, max_total_len=getattr(args, "max_len", None))
        scores, _ = _simulate_corpus(corpus, scorer, config, max_iterations=1000)
        ksr_by_gap[gap] = scores.ksr
    best = min(ksr_by_gap, key=lambda g: (ksr_by_gap[g], g))
    import json

    sys.stdout.write(
        json.dumps(
            {"best_max_gap": best, "ksr_by_max_gap": {str(g): k for g, k in ksr_by_gap.items()}},
            sort_keys=True,
        )
        + "\n"
    )
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    port = args.port if args.port is not None else 8000
    if not 1 <= port <= 65535:
        raise CliError(f"port out of range: {port}", USAGE_ERROR)
    scorer = _load_model(args)
    config = _decoder_config(args)

    import uvicorn

    from segimt.service import create_app

    app = create_app(
        scorer,
        config,
        persist_path=args.persist,
        cors_origins=tuple(args.cors_origin) if args.cors_origin else ("*",),
    )
    uvicorn.run(app, host=args.host, port=port, log_level="info")
    return 0


_COMMANDS = {
    "translate": _cmd_translate,
    "simulate": _cmd_simulate,
    "score": _cmd_score,
    "tune-gap": _cmd_tune_gap,
    "serve": _cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args)
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"segimt: {exc}", file=sys.stderr)
        return exc.code


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
