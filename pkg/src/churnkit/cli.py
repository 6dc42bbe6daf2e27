"""Command-line entry point: eda, train, compare and evaluate subcommands.

Every run is reproducible from its echoed run_config.json plus the master
seed; no command ever mutates the input dataset file. Reports are JSON,
tabular/plot data is CSV, and files are written atomically.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from .baselines import (
    DecisionTreeClassifier,
    LogisticRegressionClassifier,
    RandomForestClassifier,
    SGDLinearClassifier,
)
from .eda import charge_differential, charges_csv, clv_csv, clv_distribution, tenure_csv, tenure_histogram
from .errors import ChurnKitError, ConfigError, FingerprintMismatchError
from .ingest import dataset_summary, load_dataset
from .metrics import CostModel, compute_report, report_to_text
from .nn import MlpClassifier
from .persistence import load_model, save_model, write_json_atomic, write_text_atomic
from .pipeline import ChurnPreprocessor, PipelineParams, SplitSpec, apply_pipeline, extract_labels, stratified_split_indices

MODEL_CHOICES = ("mlp", "logreg", "sgd", "tree", "forest", "all")
COMPARE_ORDER = ("logreg", "sgd", "tree", "forest", "mlp")

DEFAULTS = {
    "seed": 42,
    "test_fraction": 0.2,
    "epochs": 100,
    "batch_size": 32,
    "lr": 1e-3,
    "weight_decay": 1e-3,
    "patience": 10,
    "cost_fp": 1.0,
    "cost_fn": 1.0,
}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved configuration, echoed into every output directory."""

    command: str
    data: str
    out: str
    seed: int
    test_fraction: float
    epochs: int
    batch_size: int
    lr: float
    weight_decay: float
    patience: int
    cost_fp: float
    cost_fn: float
    model: str


def _read_config_file(path: str) -> dict:
    """Parse a `key = value` file; keys mirror the long flag names."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected `key = value`")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


_INT_KEYS = {"seed", "epochs", "batch_size", "patience"}
_FLOAT_KEYS = {"test_fraction", "lr", "weight_decay", "cost_fp", "cost_fn"}


def _coerce(key: str, value):
    if isinstance(value, str):
        try:
            if key in _INT_KEYS:
                return int(value)
            if key in _FLOAT_KEYS:
                return float(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {value!r}") from exc
    return value


def _resolve(args: argparse.Namespace) -> RunConfig:
    file_values = _read_config_file(args.config) if args.config else {}
    defaults = dict(DEFAULTS)
    defaults["model"] = "all" if args.command == "compare" else "mlp"
    resolved = {}
    for key, default in defaults.items():
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            resolved[key] = cli_value
        elif key in file_values:
            resolved[key] = _coerce(key, file_values[key])
        else:
            resolved[key] = default
    if resolved["model"] not in MODEL_CHOICES:
        raise ConfigError(f"unknown model {resolved['model']!r}")
    data = args.data if args.data is not None else file_values.get("data")
    if data is None:
        raise ConfigError("--data is required (flag or config file)")
    out = args.out if args.out is not None else file_values.get("out")
    if out is None:
        out = str(Path("runs") / time.strftime("%Y%m%d-%H%M%S"))
    return RunConfig(command=args.command, data=str(data), out=str(out), **resolved)


def _build_model(name: str, cfg: RunConfig):
    if name == "mlp":
        return MlpClassifier(
            learning_rate=cfg.lr,
            weight_decay=cfg.weight_decay,
            batch_size=cfg.batch_size,
            max_epochs=cfg.epochs,
            patience=cfg.patience,
            random_state=cfg.seed,
        )
    if name == "logreg":
        return LogisticRegressionClassifier(random_state=cfg.seed)
    if name == "sgd":
        return SGDLinearClassifier(random_state=cfg.seed)
    if name == "tree":
        return DecisionTreeClassifier(random_state=cfg.seed)
    if name == "forest":
        return RandomForestClassifier(random_state=cfg.seed)
    raise ConfigError(f"unknown model {name!r}")


def _split_records(cfg: RunConfig):
    ds = load_dataset(cfg.data)
    labels = extract_labels(ds)
    train_idx, test_idx = stratified_split_indices(
        labels, SplitSpec(test_fraction=cfg.test_fraction, seed=cfg.seed)
    )
    train_records = [ds.records[i] for i in train_idx]
    test_records = [ds.records[i] for i in test_idx]
    return ds, train_records, test_records


def _fit_and_score(name: str, cfg: RunConfig, X_tr, y_tr, X_te, y_te):
    model = _build_model(name, cfg)
    model.fit(X_tr, y_tr)
    report = compute_report(
        model.predict(X_te), y_te, CostModel(c_fp=cfg.cost_fp, c_fn=cfg.cost_fn)
    )
    return model, report


def _echo_config(cfg: RunConfig) -> None:
    write_json_atomic(Path(cfg.out) / "run_config.json", asdict(cfg))


def _metrics_doc(cfg: RunConfig, name: str, report, model=None) -> dict:
    doc = {
        "model": name,
        "seed": cfg.seed,
        "test_fraction": cfg.test_fraction,
        "cost_model": {"c_fp": cfg.cost_fp, "c_fn": cfg.cost_fn},
        "report": report.to_json_doc(),
    }
    if isinstance(model, MlpClassifier) and model.history_ is not None:
        doc["training"] = {
            "best_epoch": model.history_.best_epoch,
            "stopped_epoch": model.history_.stopped_epoch,
        }
    return doc


def cmd_eda(cfg: RunConfig) -> int:
    ds = load_dataset(cfg.data)
    summary = dataset_summary(ds)
    diff = charge_differential(ds)
    clv = clv_distribution(ds)
    tenure = tenure_histogram(ds)

    out = Path(cfg.out)
    _echo_config(cfg)
    write_json_atomic(
        out / "summary.json",
        {
            "n_rows": summary.n_rows,
            "n_columns": summary.n_columns,
            "missing_by_column": summary.missing_by_column,
            "churn_rate": summary.churn_fraction,
            "monthly_charges": {
                "churned_mean": diff.churned.mean,
                "retained_mean": diff.retained.mean,
                "premium_percent": diff.premium_percent,
            },
        },
    )
    write_text_atomic(out / "fig1_charges.csv", charges_csv(diff))
    write_text_atomic(out / "fig2_clv.csv", clv_csv(clv))
    write_text_atomic(out / "fig3_tenure.csv", tenure_csv(tenure))
    print(f"rows={summary.n_rows} columns={summary.n_columns} "
          f"churn_rate={summary.churn_fraction:.4f}")
    print(f"eda outputs written to {out}")
    return 0


def cmd_train(cfg: RunConfig) -> int:
    if cfg.epochs < 1:
        raise ConfigError("nothing to train: --epochs must be >= 1")
    if cfg.model == "all":
        raise ConfigError("train fits one model; use `compare` for all of them")
    _, train_records, test_records = _split_records(cfg)

    pre = ChurnPreprocessor().fit(train_records)
    X_tr, y_tr = apply_pipeline(train_records, pre.params_)
    X_te, y_te = apply_pipeline(test_records, pre.params_)
    model, report = _fit_and_score(cfg.model, cfg, X_tr, y_tr, X_te, y_te)

    out = Path(cfg.out)
    _echo_config(cfg)
    write_json_atomic(out / "pipeline.json", pre.params_.to_json_doc())
    save_model(model, pre.params_, out / "model.json")
    write_json_atomic(out / "metrics.json", _metrics_doc(cfg, cfg.model, report, model))
    if isinstance(model, MlpClassifier):
        h = model.history_
        lines = ["epoch,train_loss,val_loss,val_accuracy"]
        for i in range(len(h.train_loss)):
            lines.append(f"{i + 1},{h.train_loss[i]!r},{h.val_loss[i]!r},{h.val_accuracy[i]!r}")
        write_text_atomic(out / "history.csv", "\n".join(lines) + "\n")

    print(report_to_text(report))
    print(f"\nmodel={cfg.model} seed={cfg.seed} outputs written to {out}")
    return 0


_HIGHER_BETTER = ("accuracy", "churn_f1", "weighted_f1")


def cmd_compare(cfg: RunConfig) -> int:
    if cfg.epochs < 1:
        raise ConfigError("nothing to train: --epochs must be >= 1")
    names = COMPARE_ORDER if cfg.model == "all" else (cfg.model,)
    _, train_records, test_records = _split_records(cfg)

    pre = ChurnPreprocessor().fit(train_records)
    X_tr, y_tr = apply_pipeline(train_records, pre.params_)
    X_te, y_te = apply_pipeline(test_records, pre.params_)

    rows = []
    for name in names:
        _, report = _fit_and_score(name, cfg, X_tr, y_tr, X_te, y_te)
        rows.append(
            {
                "method": name,
                "accuracy": report.accuracy,
                "churn_f1": report.per_class[1].f1,
                "weighted_f1": report.weighted.f1,
                "total_cost": report.total_cost,
            }
        )

    best = {col: max(r[col] for r in rows) for col in _HIGHER_BETTER}
    best["total_cost"] = min(r["total_cost"] for r in rows)

    out = Path(cfg.out)
    _echo_config(cfg)
    csv_lines = ["method,accuracy,churn_f1,weighted_f1,total_cost"]
    for r in rows:
        csv_lines.append(
            f"{r['method']},{r['accuracy']!r},{r['churn_f1']!r},"
            f"{r['weighted_f1']!r},{r['total_cost']!r}"
        )
    write_text_atomic(out / "compare.csv", "\n".join(csv_lines) + "\n")
    write_json_atomic(out / "compare.json", {"rows": rows, "best": best})

    header = f"{'method':<10}{'accuracy':>10}{'churn_f1':>10}{'wgt_f1':>10}{'cost':>12}"
    print(header)
    for r in rows:
        cells = [f"{r['method']:<10}"]
        for col, width in (("accuracy", 10), ("churn_f1", 10), ("weighted_f1", 10)):
            mark = "*" if r[col] == best[col] else " "
            cells.append(f"{r[col]:>{width - 1}.4f}{mark}")
        mark = "*" if r["total_cost"] == best["total_cost"] else " "
        cells.append(f"{r['total_cost']:>11.2f}{mark}")
        print("".join(cells))
    print(f"\ncomparison written to {out} (* marks the best value per column)")
    return 0


def cmd_evaluate(cfg: RunConfig, model_file: str, pipeline_file: str | None) -> int:
    model_path = Path(model_file)
    model, meta = load_model(model_path)
    pipeline_path = Path(pipeline_file) if pipeline_file else model_path.parent / "pipeline.json"
    try:
        pipeline_doc = json.loads(pipeline_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read pipeline file {pipeline_path}: {exc}") from exc
    params = PipelineParams.from_json_doc(pipeline_doc)
    if meta["pipeline_fingerprint"] != params.fingerprint():
        raise FingerprintMismatchError(
            "model was trained against different preprocessing parameters; "
            "serving-time and training-time pipelines must be identical"
        )

    ds = load_dataset(cfg.data)
    labels = extract_labels(ds)
    _, test_idx = stratified_split_indices(
        labels, SplitSpec(test_fraction=cfg.test_fraction, seed=cfg.seed)
    )
    test_records = [ds.records[i] for i in test_idx]
    X_te, y_te = apply_pipeline(test_records, params)
    report = compute_report(
        model.predict(X_te), y_te, CostModel(c_fp=cfg.cost_fp, c_fn=cfg.cost_fn)
    )

    out = Path(cfg.out)
    _echo_config(cfg)
    write_json_atomic(out / "metrics.json", _metrics_doc(cfg, meta["model_kind"], report))
    print(report_to_text(report))
    print(f"\nevaluation written to {out}")
    return 0


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", help="path to the Telco churn CSV")
    parser.add_argument("--out", help="output directory for this run")
    parser.add_argument("--config", help="key=value file mirroring the flags")
    parser.add_argument("--seed", type=int, help="master seed (default 42)")
    parser.add_argument("--test-fraction", type=float, dest="test_fraction")


def _add_train_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epochs", "--max-epochs", type=int, dest="epochs")
    parser.add_argument("--batch-size", type=int, dest="batch_size")
    parser.add_argument("--lr", type=float)
    parser.add_argument("--weight-decay", type=float, dest="weight_decay")
    parser.add_argument("--patience", type=int)
    parser.add_argument("--cost-fp", type=float, dest="cost_fp")
    parser.add_argument("--cost-fn", type=float, dest="cost_fn")
    parser.add_argument("--model", choices=MODEL_CHOICES)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="churnkit",
        description="Telco churn prediction: EDA, training, evaluation, comparison",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eda = sub.add_parser("eda", help="dataset summary and figure data files")
    _add_common_flags(p_eda)

    p_train = sub.add_parser("train", help="train one model on the 80/20 split")
    _add_common_flags(p_train)
    _add_train_flags(p_train)

    p_cmp = sub.add_parser("compare", help="train and score all five methods")
    _add_common_flags(p_cmp)
    _add_train_flags(p_cmp)

    p_eval = sub.add_parser("evaluate", help="score a persisted model file")
    _add_common_flags(p_eval)
    p_eval.add_argument("--model-file", required=True, dest="model_file")
    p_eval.add_argument("--pipeline-file", dest="pipeline_file")
    p_eval.add_argument("--cost-fp", type=float, dest="cost_fp")
    p_eval.add_argument("--cost-fn", type=float, dest="cost_fn")

    return parser


def _apply_sibling_run_config(args: argparse.Namespace) -> None:
    """Default evaluate's data/split/cost settings from the run_config.json
    echoed next to the model file, so the model scores its own test slice."""
    sibling = Path(args.model_file).parent / "run_config.json"
    if not sibling.exists():
        return
    try:
        doc = json.loads(sibling.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return
    for key in ("data", "seed", "test_fraction", "cost_fp", "cost_fn"):
        if getattr(args, key, None) is None and key in doc:
            setattr(args, key, doc[key])


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "evaluate":
            _apply_sibling_run_config(args)
        cfg = _resolve(args)
        if args.command == "eda":
            return cmd_eda(cfg)
        if args.command == "train":
            return cmd_train(cfg)
        if args.command == "compare":
            return cmd_compare(cfg)
        if args.command == "evaluate":
            return cmd_evaluate(cfg, args.model_file, args.pipeline_file)
        raise ConfigError(f"unknown command {args.command!r}")
    except ChurnKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
