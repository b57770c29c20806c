"""Command-line entry points.

Subcommands: identify, mine, train, expand, eval (ai|ad|sciai|sciad),
serve. Each one is a thin wrapper over the library API; see README.md
for worked invocations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _cmd_identify(args: argparse.Namespace) -> int:
    from .identify import identify, load_cues

    cues = load_cues(args.cues) if args.cues else None
    annotation = identify(_read_input(args.input), cues)
    if args.format == "json":
        json.dump(annotation.to_dict(), sys.stdout, ensure_ascii=False, indent=2)
        sys.stdout.write("\n")
    else:
        for acr, lf, rule in annotation.glossary_rows():
            sys.stdout.write(f"{acr}\t{lf}\t{rule}\n")
    return 0


def _cmd_mine(args: argparse.Namespace) -> int:
    from .mining import mine_corpus, read_documents_jsonl, write_mining_outputs

    docs = read_documents_jsonl(args.input)
    glossary, samples, manifest, splits = mine_corpus(
        docs, chunk_size_limit=args.chunk_size, seed=args.seed
    )
    write_mining_outputs(args.out_dir, glossary, samples, manifest, splits)
    stats = glossary.stats()
    print(
        f"mined {len(docs)} documents: {stats['unique_acronyms']} acronyms, "
        f"{stats['unique_long_forms']} long forms, {len(samples)} samples, "
        f"{len(manifest.chunks)} chunks -> {args.out_dir}"
    )
    return 0


def _load_train_config(path: str | None):
    from .model import TrainConfig

    if not path:
        return TrainConfig()
    if sys.version_info >= (3, 11):
        import tomllib
    else:
        import tomli as tomllib
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    return TrainConfig.from_dict(data.get("train", data))


def _cmd_train(args: argparse.Namespace) -> int:
    from .mining import ChunkManifest, SplitAssignment, read_samples_jsonl
    from .model import save_model, train_chunk

    manifest = ChunkManifest.load(args.manifest)
    data_dir = os.path.dirname(os.path.abspath(args.manifest))
    chunk = next((c for c in manifest.chunks if c.chunk_id == args.chunk), None)
    if chunk is None:
        print(f"no such chunk: {args.chunk}", file=sys.stderr)
        return 2
    samples = read_samples_jsonl(os.path.join(data_dir, f"samples-{chunk.chunk_id}.jsonl"))
    splits = SplitAssignment.load(os.path.join(data_dir, "splits.json"))
    train_ids, dev_ids = set(splits.train), set(splits.dev)
    train = [s for s in samples if s.id in train_ids]
    dev = [s for s in samples if s.id in dev_ids]

    config = _load_train_config(args.config)
    result = train_chunk(
        train,
        dev,
        chunk.label_space,
        config,
        chunk_id=chunk.chunk_id,
        acronyms=chunk.acronyms,
    )
    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(args.out, f"{chunk.chunk_id}.npz")
    save_model(result.params, out_path)
    for entry in result.log:
        dev_part = "" if entry.dev_accuracy is None else f"  dev acc {entry.dev_accuracy:.4f}"
        print(f"epoch {entry.epoch:3d}  loss {entry.train_loss:.4f}{dev_part}")
    print(f"saved {out_path}")
    return 0


def _cmd_expand(args: argparse.Namespace) -> int:
    from .glossary import Glossary
    from .identify import identify
    from .model import ModelRegistry, predict_sequence
    from .tokenize import tokenize

    glossary = Glossary.load(args.glossary)
    registry = ModelRegistry.load_dir(args.models) if args.models else None
    annotation = identify(args.text)
    seq = tokenize(args.text)
    covered = [(p.acronym.start, p.acronym.end) for p in annotation.pairs]
    out = {}
    for acr in annotation.acronyms:
        if any(s <= acr.start and acr.end <= e for s, e in covered):
            continue
        if seq[acr.token_idx].text != acr.text:
            continue
        prediction = predict_sequence(seq, acr.token_idx, glossary, registry)
        key = f"{acr.text}@{acr.start}"
        out[key] = None if prediction is None else prediction.to_dict(top_k=args.top_k)
    json.dump(out, sys.stdout, ensure_ascii=False, indent=2)
    sys.stdout.write("\n")
    return 0


def _load_docs_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _cmd_eval(args: argparse.Namespace) -> int:
    from . import evaluate

    if args.task == "ai":
        gold_docs = _load_docs_file(args.gold)["docs"]
        pred_docs = _load_docs_file(args.pred)["docs"]
        score = evaluate.score_ai(
            {k: evaluate.DocSpans.from_dict(v) for k, v in gold_docs.items()},
            {k: evaluate.DocSpans.from_dict(v) for k, v in pred_docs.items()},
        )
        print(evaluate.format_ai_report(score))
        if args.json:
            json.dump(score.to_dict(), sys.stdout, indent=2)
            sys.stdout.write("\n")
    elif args.task == "ad":
        gold = _load_docs_file(args.gold)["samples"]
        pred = _load_docs_file(args.pred)["samples"]
        score = evaluate.score_ad(gold, pred)
        print(evaluate.format_ad_report(score))
        if args.json:
            json.dump(score.to_dict(), sys.stdout, indent=2)
            sys.stdout.write("\n")
    elif args.task == "sciai":
        records = evaluate.load_benchmark_ai(args.data)
        score = evaluate.run_ai_benchmark(records)
        print(evaluate.format_ai_report(score))
    elif args.task == "sciad":
        from .glossary import build_from_dictionary
        from .model import ModelRegistry, predict_sequence

        samples = evaluate.load_benchmark_ad(args.data)
        with open(args.dictionary, encoding="utf-8") as fh:
            glossary = build_from_dictionary(json.load(fh), source="benchmark")
        registry = ModelRegistry.load_dir(args.models) if args.models else None
        gold = {s.id: s.gold_long_form for s in samples}
        pred = {}
        for s in samples:
            p = predict_sequence(s.tokens, s.acronym_idx, glossary, registry)
            if p is not None:
                pred[s.id] = p.chosen
        score = evaluate.score_ad(gold, pred)
        print(evaluate.format_ad_report(score))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    serve(args.config, args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acrolex", description="Acronym identification and disambiguation"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identify", help="annotate acronyms and local long forms")
    p.add_argument("--input", required=True, help="text file or - for stdin")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--cues", help="JSON file with extra cue phrases")
    p.set_defaults(func=_cmd_identify)

    p = sub.add_parser("mine", help="mine a JSONL corpus into glossary + samples")
    p.add_argument("--input", required=True, help="corpus.jsonl")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--chunk-size", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=13)
    p.set_defaults(func=_cmd_mine)

    p = sub.add_parser("train", help="train the model of one chunk")
    p.add_argument("--manifest", required=True)
    p.add_argument("--chunk", required=True)
    p.add_argument("--config", help="train.toml")
    p.add_argument("--out", required=True, help="models directory")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("expand", help="expand acronyms of one text")
    p.add_argument("--text", required=True)
    p.add_argument("--glossary", required=True)
    p.add_argument("--models")
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("eval", help="score annotations or benchmark files")
    ev = p.add_subparsers(dest="task", required=True)
    ai = ev.add_parser("ai", help="span scores from gold/pred annotation files")
    ai.add_argument("--gold", required=True)
    ai.add_argument("--pred", required=True)
    ai.add_argument("--json", action="store_true")
    ai.set_defaults(func=_cmd_eval)
    ad = ev.add_parser("ad", help="expansion scores from gold/pred label files")
    ad.add_argument("--gold", required=True)
    ad.add_argument("--pred", required=True)
    ad.add_argument("--json", action="store_true")
    ad.set_defaults(func=_cmd_eval)
    sciai = ev.add_parser("sciai", help="run the cascade over a BIO benchmark file")
    sciai.add_argument("--data", required=True)
    sciai.set_defaults(func=_cmd_eval)
    sciad = ev.add_parser("sciad", help="expansion benchmark with a dictionary file")
    sciad.add_argument("--data", required=True)
    sciad.add_argument("--dictionary", required=True)
    sciad.add_argument("--models")
    sciad.set_defaults(func=_cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--config")
    p.add_argument("--port", type=int)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
