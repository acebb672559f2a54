"""Command line entry point.

Subcommands: train, eval, chat, serve, preprocess. Exit codes: 0 success,
1 usage error, 2 data or validation error, 3 unexpected runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .artifact import ArtifactError, ModelArtifact, load_artifact, save_artifact
from .classifiers import (
    ActivationKind,
    EmptyTrainingSetError,
    MissingClassError,
    SingleClassError,
    SvmHyper,
    TrainConfig,
    train_dnn,
    train_mnb,
    train_svm,
)
from .dialogue import ConversationContext, DialogueConfig, DialogueEngine
from .evaluation import activation_sweep, compare_classifiers, write_report
from .features import (
    EmptyVocabularyError,
    TooFewExamplesError,
    make_dataset,
)
from .intents import CatalogError, load_catalog, sample_catalog_path
from .textproc import RuleFileError, default_config, load_config, preprocess

USAGE_EXIT = 1
DATA_EXIT = 2
RUNTIME_EXIT = 3

DATA_ERRORS = (
    CatalogError,
    RuleFileError,
    ArtifactError,
    EmptyVocabularyError,
    TooFewExamplesError,
    EmptyTrainingSetError,
    MissingClassError,
    SingleClassError,
    FileNotFoundError,
    IsADirectoryError,
    PermissionError,
)


class UsageError(Exception):
    pass


class CliParser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; this build reserves 2 for data errors."""

    def error(self, message):
        raise UsageError(message)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--rules-dir", help="directory with the preprocessing rule files")
    p.add_argument("--seed", type=int, default=42)


def build_parser() -> CliParser:
    parser = CliParser(prog="fidelbot", description=__doc__)
    parser.add_argument("--version", action="version", version=f"fidelbot {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    p = sub.add_parser("train", help="train a classifier and write a model artifact")
    _add_common(p)
    p.add_argument("--catalog", help="intent catalog JSON (default: bundled sample)")
    p.add_argument("--kind", choices=["dnn", "svm", "mnb"], default="dnn")
    p.add_argument("--out", default="model.json", help="artifact output path")
    p.add_argument("--epochs", type=int, default=150)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--dropout", type=float, default=0.2)
    p.add_argument("--learning-rate", type=float, default=1e-4)
    p.add_argument(
        "--activation",
        choices=[k.value for k in ActivationKind],
        default=ActivationKind.RELU.value,
    )
    p.add_argument("--alpha", type=float, default=1.0, help="mnb Laplace smoothing")
    p.add_argument("--l2-lambda", type=float, default=1e-4, help="svm regularization")
    p.add_argument("--quiet", action="store_true", help="suppress per-epoch lines")

    p = sub.add_parser("eval", help="train and score classifiers on a held-out split")
    _add_common(p)
    p.add_argument("--catalog")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--compare", action="store_true", help="dnn vs svm vs mnb")
    mode.add_argument("--sweep", action="store_true", help="dnn across activations")
    p.add_argument("--out", help="machine-readable report path")

    p = sub.add_parser("chat", help="interactive chat against a saved model")
    _add_common(p)
    p.add_argument("--artifact", required=True)
    p.add_argument("--catalog")
    p.add_argument("--user", default="local", help="conversation user id")
    p.add_argument("--threshold", type=float, default=0.25)
    p.add_argument("--debug", action="store_true", help="show tag, confidence, context")

    p = sub.add_parser("serve", help="run the HTTP service")
    _add_common(p)
    p.add_argument("--config", help="service config JSON")
    p.add_argument("--artifact")
    p.add_argument("--catalog")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--verify-token")
    p.add_argument("--snapshot", help="context snapshot file")
    p.add_argument("--ui-dir", help="static chat client directory to mount at /ui")

    p = sub.add_parser("preprocess", help="show each text pipeline stage")
    _add_common(p)
    p.add_argument("text", nargs="?", help="input text (default: read stdin)")

    return parser


def _preprocess_config(args):
    return load_config(args.rules_dir) if args.rules_dir else default_config()


def _catalog_path(args) -> str:
    return args.catalog if args.catalog else str(sample_catalog_path())


def cmd_train(args) -> int:
    pconfig = _preprocess_config(args)
    catalog_path = _catalog_path(args)
    catalog = load_catalog(catalog_path)
    vocab, labels, examples = make_dataset(catalog, pconfig)
    started = time.time()

    if args.kind == "dnn":
        config = TrainConfig(
            epochs=args.epochs,
            batch_size=args.batch_size,
            dropout_rate=args.dropout,
            seed=args.seed,
            activation=ActivationKind(args.activation),
            learning_rate=args.learning_rate,
        )

        def progress(report):
            if not args.quiet:
                print(
                    f"epoch {report.epoch:3d}/{config.epochs}"
                    f"  loss {report.loss:.4f}"
                    f"  acc {report.accuracy:.4f}"
                    f"  mse {report.mse:.4f}"
                )

        model, _ = train_dnn(examples, config, progress=progress)
        config_echo = {k: (v.value if isinstance(v, ActivationKind) else v)
                       for k, v in asdict(config).items()}
    elif args.kind == "svm":
        hyper = SvmHyper(l2_lambda=args.l2_lambda, epochs=args.epochs, seed=args.seed)
        model = train_svm(examples, len(labels.tags), hyper)
        config_echo = asdict(hyper)
    else:
        model = train_mnb(examples, len(labels.tags), alpha=args.alpha)
        config_echo = {"alpha": args.alpha}

    artifact = ModelArtifact(
        kind=args.kind,
        preprocess_fingerprint=pconfig.fingerprint,
        vocabulary=vocab,
        labels=labels,
        vector_mode="binary",
        model=model,
        train_config=config_echo,
        metadata={
            "created_at": datetime.now(timezone.utc).isoformat(),
            "seed": args.seed,
            "catalog": str(catalog_path),
            "tool_version": __version__,
            "train_seconds": round(time.time() - started, 3),
        },
    )
    save_artifact(artifact, args.out)
    print(f"wrote {args.kind} artifact: {args.out} "
          f"(vocabulary {len(vocab)}, classes {len(labels.tags)})")
    return 0


def cmd_eval(args) -> int:
    pconfig = _preprocess_config(args)
    catalog = load_catalog(_catalog_path(args))
    if args.compare:
        report = compare_classifiers(catalog, pconfig, seed=args.seed)
    else:
        report = activation_sweep(catalog, pconfig, seed=args.seed)
    report.created_at = datetime.now(timezone.utc).isoformat()
    print(report.table())
    if args.out:
        write_report(report, args.out)
        print(f"report written: {args.out}")
    return 0


def _engine_from_args(args) -> DialogueEngine:
    pconfig = _preprocess_config(args)
    catalog = load_catalog(_catalog_path(args))
    artifact = load_artifact(args.artifact, expected_config=pconfig)
    dconfig = DialogueConfig(confidence_threshold=args.threshold, seed=args.seed)
    return DialogueEngine(artifact, catalog, pconfig, dconfig)


def cmd_chat(args) -> int:
    engine = _engine_from_args(args)
    ctx = ConversationContext(user_id=args.user)
    interactive = sys.stdin.isatty()
    if interactive:
        print("fidelbot ready; end input (Ctrl-D) to quit")
    while True:
        if interactive:
            print("> ", end="", flush=True)
        line = sys.stdin.readline()
        if not line:
            break
        reply, ctx = engine.turn(ctx, line.rstrip("\n"))
        print(reply.text)
        if args.debug:
            tag = reply.intent_tag if reply.intent_tag else "-"
            context = ctx.active_context if ctx.active_context else "-"
            print(f"  [intent={tag} confidence={reply.confidence:.2f} context={context}]")
    return 0


def cmd_serve(args) -> int:
    from .service import ServiceConfig, build_engine, create_app

    config = ServiceConfig.from_file(args.config) if args.config else ServiceConfig()
    config = config.with_env_overrides()
    overrides = {
        "artifact_path": args.artifact,
        "catalog_path": args.catalog,
        "rules_dir": args.rules_dir,
        "host": args.host,
        "port": args.port,
        "verify_token": args.verify_token,
        "snapshot_path": args.snapshot,
        "ui_dir": args.ui_dir,
    }
    for name, value in overrides.items():
        if value is not None:
            setattr(config, name, value)
    if not config.catalog_path:
        config.catalog_path = str(sample_catalog_path())
    config.seed = args.seed

    engine = build_engine(config)
    app = create_app(config, engine)

    import uvicorn

    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def cmd_preprocess(args) -> int:
    config = _preprocess_config(args)
    text = args.text if args.text is not None else sys.stdin.read()
    from .textproc import normalize, remove_stopwords, tokenize

    norm = normalize(text, config.folding)
    tokens = tokenize(norm)
    kept = remove_stopwords(tokens, config.stoplist)
    stems = preprocess(text, config)
    print(f"normalized: {norm}")
    print(f"tokens: {' '.join(tokens)}")
    print(f"filtered: {' '.join(kept)}")
    print(f"stems: {' '.join(stems)}")
    return 0


COMMANDS = {
    "train": cmd_train,
    "eval": cmd_eval,
    "chat": cmd_chat,
    "serve": cmd_serve,
    "preprocess": cmd_preprocess,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    try:
        return COMMANDS[args.command](args)
    except DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except KeyboardInterrupt:
        return RUNTIME_EXIT
    except Exception as exc:  # anything unplanned is a runtime failure
        print(f"unexpected failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return RUNTIME_EXIT


if __name__ == "__main__":
    sys.exit(main())
