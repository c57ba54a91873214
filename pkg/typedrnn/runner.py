"""Main runner CLI: train, evaluate and inspect typed tree-RNN pair models."""

import argparse
import logging
import shutil
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from . import __version__
from .checkpoint import load_checkpoint, save_checkpoint
from .config import RunConfig, load_run_config, parse_overrides
from .db import finish_run, get_run, init_db, insert_epoch, insert_run
from .deptree import DepTree, RelationVocab, parse_conllu
from .embeddings import WordEmbeddings, load_word_list
from .encoders import ENCODERS
from .errors import EXIT_DATA, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, CompatibilityError, TypedRNNError, UsageError
from .gradsuite import run_gradcheck, summarize
from .metrics import MetricRecord
from .model import build_model
from .pairmodel import ENTAILMENT_LABELS
from .report import compare_runs, export_epoch_csv, generate_report
from .sick import PairExample, Split, attach_trees, check_alignment, group_by_split, read_sick
from .synthetic import write_dataset
from .tasks import TASKS, get_task
from .trainer import EpochRecord, evaluate, train

console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger("typedrnn")


def setup_logging(verbose: bool = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


# Data loading


@dataclass
class Dataset:
    """SICK pairs with trees, grouped by split, and the matching embeddings."""

    splits: dict[Split, list[PairExample]]
    words: WordEmbeddings


def read_trees(path: str | Path, coarse_relations: bool = False) -> list[DepTree]:
    return parse_conllu(Path(path).read_text(encoding="utf-8"), coarse_relations)


def load_embeddings(config: RunConfig, trees: Sequence[DepTree]) -> WordEmbeddings:
    """GloVe vectors restricted to the word list, or to the words of the trees."""
    if config.word_list is not None:
        wanted = load_word_list(config.word_list)
    else:
        forms = {w for tree in trees for w in tree.words()}
        wanted = forms | {w.lower() for w in forms}
    words = WordEmbeddings.load(config.embeddings, restrict_to=wanted)
    all_words = [w for tree in trees for w in tree.words()]
    logger.info("Embedding coverage %.1f%% of %d tokens", 100 * words.coverage(all_words), len(all_words))
    return words


def load_dataset(config: RunConfig) -> Dataset:
    """Read the SICK file, both CoNLL-U files and the embeddings of a config."""
    config.check_paths()
    records = read_sick(config.sick_path)
    coarse = config.hp.coarse_relations
    examples = attach_trees(
        records, read_trees(config.conllu_a, coarse), read_trees(config.conllu_b, coarse)
    )
    splits = group_by_split(examples)
    logger.info(
        "Loaded %s: %s",
        config.sick_path,
        ", ".join(f"{split.value.lower()} {len(rows)}" for split, rows in splits.items()),
    )
    trees = [t for e in examples for t in (e.tree_a, e.tree_b)]
    return Dataset(splits, load_embeddings(config, trees))


# Output helpers


def metrics_table(title: str, metrics: MetricRecord) -> Table:
    table = Table(title=title)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")
    for name, value in metrics.as_row().items():
        if value is not None:
            table.add_row(name, f"{value:.4f}" if isinstance(value, float) else str(value))
    for flag in metrics.flags:
        table.add_row("flag", f"[yellow]{flag}[/yellow]")
    return table


def confusion_table(confusion: list[list[int]]) -> Table:
    table = Table(title="Confusion (rows gold, columns predicted)")
    table.add_column("gold \\ pred", style="cyan")
    for label in ENTAILMENT_LABELS:
        table.add_column(label, style="magenta")
    for label, row in zip(ENTAILMENT_LABELS, confusion):
        table.add_row(label, *(str(n) for n in row))
    return table


def print_metrics(title: str, metrics: MetricRecord) -> None:
    console.print(metrics_table(title, metrics))
    if metrics.confusion is not None:
        console.print(confusion_table(metrics.confusion))


# Commands


def cmd_train(args: argparse.Namespace) -> int:
    overrides = parse_overrides(args.set)
    flags = {
        "task": args.task,
        "encoder_kind": args.encoder,
        "epochs": args.epochs,
        "seed": args.seed,
        "out_dir": args.out_dir,
    }
    config = load_run_config(args.config, {**overrides, **{k: v for k, v in flags.items() if v is not None}})
    hp = config.hp

    run_id = args.run_id or datetime.now().strftime("%Y%m%d_%H%M%S")
    run_dir = Path(config.out_dir) / run_id
    if run_dir.exists():
        raise UsageError(f"run directory already exists: {run_dir}")

    console.print("\n[bold blue]Typed tree-RNN training[/bold blue]")
    console.print(f"Run ID: {run_id}")
    console.print(f"Task: {hp.task}  Encoder: {hp.encoder_kind}{'' if not args.untied else ' (untied)'}")
    console.print()

    data = load_dataset(config)
    train_examples = data.splits[Split.TRAIN]
    relations = RelationVocab.from_trees(t for e in train_examples for t in (e.tree_a, e.tree_b))
    model = build_model(hp, relations, data.words, tied=not args.untied)

    db = init_db(args.db_path)
    if get_run(db, run_id) is not None:
        raise UsageError(f"run {run_id} already exists in {args.db_path}")
    insert_run(db, run_id, hp.task, hp.encoder_kind, config.to_flat(), str(run_dir), tied=not args.untied)
    run_dir.mkdir(parents=True)

    def on_epoch(record: EpochRecord) -> None:
        insert_epoch(db, run_id, record.as_row())

    try:
        result = train(
            model,
            train_examples,
            hp,
            dev_examples=data.splits[Split.TRIAL] or None,
            test_examples=data.splits[Split.TEST] or None,
            on_epoch=on_epoch,
        )
        extra = {"best_epoch": result.best_epoch, "epochs_run": len(result.log)}
        save_checkpoint(run_dir / "best.ckpt", model, config, result.best_params, extra)
        save_checkpoint(run_dir / "final.ckpt", model, config, result.final_params, extra)
        export_epoch_csv([r.as_row() for r in result.log], run_dir / "epochs.csv")

        test_metrics = None
        if data.splits[Split.TEST]:
            model.load_parameters(result.best_params)
            test_metrics = evaluate(model, data.splits[Split.TEST])
        finish_run(
            db,
            run_id,
            "finished",
            best_epoch=result.best_epoch,
            test_metric=model.task.selection_value(test_metrics) if test_metrics else None,
            test_metrics=test_metrics.as_row() if test_metrics else None,
        )
        generate_report(args.db_path, run_id, run_dir)
    except BaseException:
        shutil.rmtree(run_dir, ignore_errors=True)
        finish_run(db, run_id, "failed")
        raise

    console.print(f"\nBest epoch: {result.best_epoch} of {len(result.log)}")
    if test_metrics is not None:
        print_metrics("Test metrics (best epoch)", test_metrics)
    console.print(f"[green]Checkpoints saved to {run_dir}[/green]")
    console.print(f"[green]Report saved to {run_dir / 'report.md'}[/green]")
    return EXIT_OK


def _checkpoint_config(args: argparse.Namespace, config: RunConfig) -> RunConfig:
    """Checkpoint config with data paths replaced by command-line ones."""
    paths = {
        "sick_path": args.sick,
        "conllu_a": args.conllu_a,
        "conllu_b": args.conllu_b,
        "embeddings": args.embeddings,
    }
    return config.model_copy(update={k: Path(v) for k, v in paths.items() if v is not None})


def cmd_eval(args: argparse.Namespace) -> int:
    checkpoint = load_checkpoint(args.checkpoint)
    config = _checkpoint_config(args, checkpoint.config)
    if args.task is not None:
        task = get_task(args.task)
        if task.num_classes != config.hp.num_classes:
            raise CompatibilityError(
                f"checkpoint predicts {config.hp.num_classes} classes, task {task.name} needs {task.num_classes}"
            )
        if task.name != config.hp.task:
            raise CompatibilityError(f"checkpoint was trained for {config.hp.task}, not {task.name}")

    data = load_dataset(config)
    model = checkpoint.build_model(data.words)
    split = Split(args.split.upper())
    examples = data.splits[split]
    if not examples:
        raise UsageError(f"split {split.value} is empty in {config.sick_path}")

    metrics = evaluate(model, examples)
    print_metrics(f"{model.task.name} on {split.value} ({len(examples)} pairs)", metrics)
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    checkpoint = load_checkpoint(args.checkpoint)
    config = _checkpoint_config(args, checkpoint.config)
    trees_a = read_trees(args.pred_a, config.hp.coarse_relations)
    trees_b = read_trees(args.pred_b, config.hp.coarse_relations)
    if len(trees_a) != len(trees_b):
        raise UsageError(f"{args.pred_a} has {len(trees_a)} sentences, {args.pred_b} has {len(trees_b)}")
    if not trees_a:
        return EXIT_OK

    model = checkpoint.build_model(load_embeddings(config, [*trees_a, *trees_b]))
    out = sys.stdout
    for tree_a, tree_b in zip(trees_a, trees_b):
        p_hat = model.predict_distribution(tree_a, tree_b)
        prediction = model.task.predict(p_hat)
        probabilities = " ".join(f"{p:.6f}" for p in p_hat)
        if isinstance(prediction, float):
            out.write(f"{prediction:.6f}\t{probabilities}\n")
        else:
            out.write(f"{prediction}\t{probabilities}\n")
    return EXIT_OK


def cmd_gradcheck(args: argparse.Namespace) -> int:
    kinds = list(ENCODERS) if args.encoder == "all" else [args.encoder]
    failed = False
    for kind in kinds:
        results = run_gradcheck(
            kind, seed=args.seed, pairs=args.pairs, tol=args.tol, step=args.step, corrupt_op=args.corrupt_op
        )
        passed = all(r.report.passed for r in results)
        failed = failed or not passed

        table = Table(title=f"Gradient check: {kind} ({args.pairs} pairs, tol {args.tol:g})")
        table.add_column("Parameter", style="cyan")
        table.add_column("Max relative error", style="blue")
        table.add_column("Status", style="green")
        for name, error in summarize(results).items():
            status = "[green]PASS[/green]" if error <= args.tol else "[red]FAIL[/red]"
            table.add_row(name, f"{error:.3e}", status)
        console.print(table)
        console.print(f"{kind}: " + ("[green]PASS[/green]" if passed else "[red]FAIL[/red]"))
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_align(args: argparse.Namespace) -> int:
    config = load_run_config(args.config, parse_overrides(args.set))
    config.check_paths()
    coarse = config.hp.coarse_relations
    examples = attach_trees(
        read_sick(config.sick_path), read_trees(config.conllu_a, coarse), read_trees(config.conllu_b, coarse)
    )
    issues = check_alignment(examples, tolerance=args.tolerance)
    if not issues:
        console.print(f"[green]{len(examples)} pairs aligned[/green]")
        return EXIT_OK

    table = Table(title=f"{len(issues)} misaligned sentences")
    table.add_column("Pair", style="cyan")
    table.add_column("Side", style="magenta")
    table.add_column("Tokens", style="yellow")
    table.add_column("Tree", style="yellow")
    table.add_column("Sentence")
    for issue in issues[: args.limit]:
        table.add_row(str(issue.pair_id), issue.side, str(issue.expected_tokens), str(issue.tree_tokens), issue.sentence)
    console.print(table)
    return EXIT_DATA


def cmd_synth(args: argparse.Namespace) -> int:
    config = write_dataset(args.out_dir, count=args.count, seed=args.seed, dim=args.dim, task=args.task)
    console.print(f"[green]Synthetic dataset written to {args.out_dir}[/green]")
    console.print(f"Train with: python -m typedrnn.runner train --config {Path(args.out_dir) / 'train.cfg'}")
    logger.debug("config %s", config.to_flat())
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    if len(args.run_ids) == 1:
        output_dir = Path(args.output) if args.output else Path("runs") / args.run_ids[0]
        path = generate_report(args.db_path, args.run_ids[0], output_dir)
        console.print(f"[green]Report saved to {path}[/green]")
        return EXIT_OK

    content = compare_runs(args.db_path, args.run_ids)
    if args.output:
        Path(args.output).write_text(content, encoding="utf-8")
        console.print(f"[green]Comparison saved to {args.output}[/green]")
    else:
        console.print(content, markup=False)
    return EXIT_OK


# Argument parsing


def _add_data_paths(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sick", default=None, help="SICK file (default: the checkpoint's)")
    parser.add_argument("--conllu-a", default=None, help="CoNLL-U file of the A sentences")
    parser.add_argument("--conllu-b", default=None, help="CoNLL-U file of the B sentences")
    parser.add_argument("--embeddings", default=None, help="GloVe text embeddings")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typedrnn",
        description="Typed dependency tree-RNNs for sentence-pair relatedness and entailment",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="Train a model and write checkpoints, epoch log and report")
    p.add_argument("--config", default=None, help="key=value config file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="Override a config key (repeatable)")
    p.add_argument("--task", choices=sorted(TASKS), default=None, help="Task (default: from config)")
    p.add_argument("--encoder", choices=sorted(ENCODERS), default=None, help="Encoder kind (default: typed)")
    p.add_argument("--epochs", type=int, default=None, help="Number of epochs (default: task default)")
    p.add_argument("--seed", type=int, default=None, help="Random seed (default: 0)")
    p.add_argument("--out-dir", default=None, help="Directory for run outputs (default: runs)")
    p.add_argument("--run-id", default=None, help="Run identifier (default: auto-generated timestamp)")
    p.add_argument("--untied", action="store_true", help="Separate encoder weights for the B sentence")
    p.add_argument("--db-path", default="results.sqlite", help="Path to SQLite database (default: results.sqlite)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="Evaluate a checkpoint on a split")
    p.add_argument("checkpoint", help="Checkpoint file")
    p.add_argument("--split", default="test", choices=["train", "trial", "test"], help="Split (default: test)")
    p.add_argument("--task", choices=sorted(TASKS), default=None, help="Expected task")
    _add_data_paths(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="Score pre-parsed sentence pairs")
    p.add_argument("checkpoint", help="Checkpoint file")
    p.add_argument("pred_a", metavar="CONLLU_A", help="CoNLL-U file of the A sentences")
    p.add_argument("pred_b", metavar="CONLLU_B", help="CoNLL-U file of the B sentences")
    p.add_argument("--embeddings", default=None, help="GloVe text embeddings (default: the checkpoint's)")
    p.set_defaults(func=cmd_predict, sick=None, conllu_a=None, conllu_b=None)

    p = sub.add_parser("gradcheck", help="Finite-difference check of an encoder's gradients")
    p.add_argument("--encoder", choices=[*sorted(ENCODERS), "all"], default="typed", help="Encoder kind (default: typed)")
    p.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    p.add_argument("--pairs", type=int, default=5, help="Random tree pairs (default: 5)")
    p.add_argument("--tol", type=float, default=1e-4, help="Relative error tolerance (default: 1e-4)")
    p.add_argument("--step", type=float, default=1e-5, help="Finite-difference step (default: 1e-5)")
    p.add_argument("--corrupt-op", default=None, help="Corrupt the backward rule of this operation, e.g. matvec")
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("align", help="Check SICK sentences against CoNLL-U trees by token count")
    p.add_argument("--config", default=None, help="key=value config file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="Override a config key (repeatable)")
    p.add_argument("--tolerance", type=int, default=0, help="Allowed token count difference (default: 0)")
    p.add_argument("--limit", type=int, default=20, help="Rows to show (default: 20)")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("synth", help="Write a small synthetic dataset with a config file")
    p.add_argument("out_dir", help="Output directory")
    p.add_argument("--count", type=int, default=40, help="Number of pairs (default: 40)")
    p.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    p.add_argument("--dim", type=int, default=16, help="Embedding dimension (default: 16)")
    p.add_argument("--task", choices=sorted(TASKS), default="entailment", help="Task (default: entailment)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("report", help="Markdown report of a run, or learning curves of several")
    p.add_argument("run_ids", nargs="+", metavar="RUN_ID", help="Run identifiers")
    p.add_argument("--db-path", default="results.sqlite", help="Path to SQLite database (default: results.sqlite)")
    p.add_argument("--output", default=None, help="Output directory (one run) or file (comparison)")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        return args.func(args)
    except TypedRNNError as e:
        err_console.print(f"{type(e).__name__}: {e}", style="red", markup=False, highlight=False, soft_wrap=True)
        return e.exit_code
    except (OSError, ValueError) as e:
        err_console.print(f"{type(e).__name__}: {e}", style="red", markup=False, highlight=False, soft_wrap=True)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
