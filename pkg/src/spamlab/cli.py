"""Command-line interface: ingest, train, evaluate, classify, report, synth.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from . import evaluation, modelio
from .config import FORMATS, load_config
from .corpus import (
    Corpus,
    Label,
    SplitSpec,
    dump_csv,
    load_csv,
    load_eml_dir,
    load_mbox_dir,
    parse_eml,
    parse_mbox,
    stratified_split,
    to_example,
)
from .errors import ConfigError, DataError, ManifestMismatch, SpamlabError
from .pipeline import MODEL_KINDS, train_models
from .preprocess import LemmaRules, Preprocessor, StopwordList

log = logging.getLogger("spamlab")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3
MANIFEST_FORMAT = "spamlab-manifest/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@contextmanager
def stage(name: str):
    try:
        yield
    except (SpamlabError, OSError) as exc:
        if not hasattr(exc, "stage"):
            exc.stage = name
        raise


# -- helpers --------------------------------------------------------------

def load_dataset(path, fmt: str, include_subject: bool = True, label=None) -> Corpus:
    path = Path(path)
    if fmt == "csv":
        return load_csv(path)
    if fmt == "eml-dir":
        return load_eml_dir(path)
    if fmt == "mbox":
        if path.is_dir():
            return load_mbox_dir(path)
        if label is None:
            raise UsageError("--label is required when the mbox source is a single file")
        with open(path, "rb") as fh:
            msgs = parse_mbox(fh, source=path.name)
        return Corpus.from_examples(to_example(m, Label.parse(label), include_subject) for m in msgs)
    raise UsageError(f"unknown format {fmt!r}")


def dataset_digest(corpus: Corpus) -> str:
    """SHA-256 of the corpus in canonical CSV form (independent of source format)."""
    return hashlib.sha256(dump_csv(corpus)).hexdigest()


def _class_counts(corpus: Corpus) -> str:
    return ", ".join(f"{l.value}={corpus.class_counts.get(l, 0)}" for l in (Label.SPAM, Label.HAM))


def _preprocessor(cfg) -> Preprocessor:
    stop = StopwordList.load(cfg.stopwords_path) if cfg.stopwords_path else None
    rules = LemmaRules.load(cfg.lemma_rules_path) if cfg.lemma_rules_path else None
    return Preprocessor(cfg.preprocess, stop, rules)


def write_manifest(path: Path, corpus: Corpus, split, spec: SplitSpec, data_path, data_format) -> None:
    doc = {
        "format": MANIFEST_FORMAT,
        "dataset": {"path": str(data_path), "format": data_format, "sha256": dataset_digest(corpus)},
        "split": {"train_fraction": repr(spec.train_fraction), "seed": spec.seed, "stratified": spec.stratified},
        "train": [ex.id for ex in split.train],
        "test": [ex.id for ex in split.test],
    }
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def read_manifest(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestMismatch(f"{path}: not a manifest ({exc})") from None
    if doc.get("format") != MANIFEST_FORMAT:
        raise ManifestMismatch(f"{path}: not a {MANIFEST_FORMAT} file")
    return doc


def test_side(corpus: Corpus, manifest: dict) -> Corpus:
    """The manifest's test examples, checked against the dataset."""
    digest = dataset_digest(corpus)
    if digest != manifest["dataset"]["sha256"]:
        raise ManifestMismatch("dataset contents differ from the ones the manifest was written for")
    by_id = {ex.id: ex for ex in corpus}
    missing = [i for i in manifest["test"] + manifest["train"] if i not in by_id]
    if missing:
        raise ManifestMismatch(f"manifest references {len(missing)} id(s) missing from the dataset, e.g. {missing[0]!r}")
    return Corpus.from_examples((by_id[i] for i in manifest["test"]), "test")


# -- commands -------------------------------------------------------------

def cmd_ingest(args) -> int:
    with stage("ingest"):
        corpus = load_dataset(args.source, args.format, not args.no_subject, args.label)
        Path(args.output).write_bytes(dump_csv(corpus))
    print(f"wrote {len(corpus)} examples to {args.output} ({_class_counts(corpus)})")
    return EXIT_OK


def cmd_train(args) -> int:
    cfg = load_config(args.config, {
        "data_path": args.data, "data_format": args.format, "seed": args.seed,
        "models": args.model, "output_dir": args.output,
    })
    with stage("load"):
        corpus = load_dataset(cfg.data_path, cfg.data_format, cfg.include_subject)
    with stage("split"):
        split = stratified_split(corpus, cfg.split)
    with stage("preprocess"):
        pre = _preprocessor(cfg)
    with stage("fit"):
        models = train_models(split, cfg.models, pre, cfg.settings, cfg.min_df, cfg.max_size, cfg.representation)
    out = Path(cfg.output_dir)
    with stage("write"):
        out.mkdir(parents=True, exist_ok=True)
        for kind, trained in models.items():
            modelio.save_model(trained, out / f"{kind}.model")
        write_manifest(out / "split.manifest.json", corpus, split, cfg.split, cfg.data_path, cfg.data_format)
    vocab = next(iter(models.values())).pipeline.vocabulary
    print(f"dataset   {cfg.data_path} ({len(corpus)} examples: {_class_counts(corpus)})")
    print(f"split     train={len(split.train)} ({_class_counts(split.train)})  "
          f"test={len(split.test)} ({_class_counts(split.test)})")
    print(f"features  {len(vocab)} terms, representation={cfg.representation.value}")
    print(f"models    {', '.join(str(out / f'{k}.model') for k in models)}")
    print(f"manifest  {out / 'split.manifest.json'}")
    return EXIT_OK


def _evaluate(models: dict, test: Corpus, positive) -> evaluation.ComparisonTable:
    truths = [ex.label for ex in test]
    texts = [ex.text for ex in test]
    rows = []
    for name, trained in models.items():
        preds = trained.predict(texts)
        cm = evaluation.confusion(preds, truths, positive)
        rows.append((name, evaluation.metrics(cm), cm))
    return evaluation.compare(rows)


def cmd_evaluate(args) -> int:
    paths = [Path(p) for p in args.models]
    if args.dir:
        paths += sorted(Path(args.dir).glob("*.model"))
    if not paths:
        raise UsageError("give model files or --dir")
    manifest_path = Path(args.manifest) if args.manifest else (Path(args.dir) / "split.manifest.json" if args.dir else None)
    if manifest_path is None:
        raise UsageError("--manifest is required without --dir")
    with stage("load"):
        manifest = read_manifest(manifest_path)
        data = args.data or manifest["dataset"]["path"]
        fmt = args.format or manifest["dataset"]["format"]
        corpus = load_dataset(data, fmt)
        test = test_side(corpus, manifest)
        models = {}
        for p in paths:
            trained = modelio.load_model(p)
            name = trained.kind if trained.kind not in models else p.stem
            models[name] = trained
    positive = Label.parse(args.positive)
    with stage("evaluate"):
        table = _evaluate(models, test, positive)
    for row in table.rows:
        print(evaluation.render_confusion(row.name, row.matrix))
        print()
    print(table.render())
    report = Path(args.report) if args.report else manifest_path.parent / "report.json"
    report.write_text(evaluation.dumps_report(table, positive.value), encoding="utf-8")
    print(f"\nreport written to {report}")
    return EXIT_OK


def cmd_classify(args) -> int:
    with stage("load"):
        trained = modelio.load_model(args.model)
    with stage("read"):
        if args.input in (None, "-"):
            raw = sys.stdin.buffer.read()
        else:
            raw = Path(args.input).read_bytes()
        if args.eml:
            msg = parse_eml(raw, source=args.input or "<stdin>")
            text = to_example(msg, Label.HAM).text
        else:
            text = raw.decode("utf-8", errors="replace")
    if len(trained.pipeline.vector(text)) == 0:
        log.warning("input has no in-vocabulary terms; the prediction reflects class priors only")
    label, probs = trained.score(text)
    if trained.kind == "c45":
        dist = " ".join(f"{c}={p:.4f}" for c, p in probs.items())
        print(f"{label}\tleaf {dist}")
    else:
        print(f"{label}\tp(spam)={probs[Label.SPAM]:.6f}")
    return EXIT_OK


def cmd_report(args) -> int:
    with stage("load"):
        table = evaluation.loads_report(Path(args.report).read_text(encoding="utf-8"))
    if args.paper_row:
        rows = [(r.name, r.report, r.matrix) for r in table.rows] + [evaluation.PAPER_MLP_ROW]
        table = evaluation.compare(rows)
    print(table.render())
    return EXIT_OK


def cmd_synth(args) -> int:
    from .synth import generate

    corpus = generate(args.n, args.signal, args.seed)
    Path(args.output).write_bytes(dump_csv(corpus))
    print(f"wrote {len(corpus)} examples to {args.output} ({_class_counts(corpus)})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spamlab", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("ingest", help="convert EML/mbox/CSV sources to the canonical CSV dataset")
    s.add_argument("source")
    s.add_argument("--format", required=True, choices=FORMATS)
    s.add_argument("--output", "-o", required=True)
    s.add_argument("--label", choices=["spam", "ham"], help="label for a single mbox file")
    s.add_argument("--no-subject", action="store_true", help="classify the body only")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("train", help="split, preprocess, and fit the selected models")
    s.add_argument("--config")
    s.add_argument("--data")
    s.add_argument("--format", choices=FORMATS)
    s.add_argument("--model", action="append", choices=MODEL_KINDS)
    s.add_argument("--seed", type=int)
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("evaluate", help="score models on the manifest's test side")
    s.add_argument("models", nargs="*")
    s.add_argument("--dir", help="directory written by train")
    s.add_argument("--data")
    s.add_argument("--format", choices=FORMATS)
    s.add_argument("--manifest")
    s.add_argument("--report")
    s.add_argument("--positive", default="spam", choices=["spam", "ham"])
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("classify", help="label one message")
    s.add_argument("model")
    s.add_argument("input", nargs="?", help="text file, or - / omitted for stdin")
    s.add_argument("--eml", action="store_true", help="input is an RFC-822 message")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("report", help="render a machine report as a table")
    s.add_argument("report")
    s.add_argument("--paper-row", action="store_true", help="add the published MLP row for reference")
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    s.add_argument("--n", type=int, default=600)
    s.add_argument("--signal", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=2024)
    s.add_argument("--output", "-o", required=True)
    s.set_defaults(func=cmd_synth)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        args = parser.parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.INFO)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        where = f"[{exc.stage}] " if hasattr(exc, "stage") else ""
        print(f"error: {where}{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
