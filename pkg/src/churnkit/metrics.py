"""Confusion-matrix evaluation with cost-sensitive totals.

The positive class is churn = 1 throughout. Zero-denominator rates return
0.0 and are listed in the report's undefined_rates so degenerate folds stay
visible without crashing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyDatasetError, LengthMismatchError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def mirrored(self) -> "ConfusionMatrix":
        """The same predictions scored with class 0 as the positive class."""
        return ConfusionMatrix(tp=self.tn, fp=self.fn, fn=self.fp, tn=self.tp)


@dataclass(frozen=True)
class CostModel:
    """Unit costs: c_fp per false alarm, c_fn per missed churner."""

    c_fp: float = 1.0
    c_fn: float = 1.0

    def __post_init__(self):
        if self.c_fp < 0 or self.c_fn < 0:
            raise ValueError("unit costs must be non-negative")


def confusion(preds, labels) -> ConfusionMatrix:
    """Tally the 2x2 confusion matrix."""
    preds = np.asarray(preds)
    labels = np.asarray(labels)
    if preds.shape != labels.shape:
        raise LengthMismatchError(
            f"{preds.shape[0]} predictions vs {labels.shape[0]} labels"
        )
    if preds.size == 0:
        raise EmptyDatasetError("cannot evaluate zero samples")
    return ConfusionMatrix(
        tp=int(np.sum((preds == 1) & (labels == 1))),
        fp=int(np.sum((preds == 1) & (labels == 0))),
        fn=int(np.sum((preds == 0) & (labels == 1))),
        tn=int(np.sum((preds == 0) & (labels == 0))),
    )


def _rate(numerator: int, denominator: int) -> float:
    return numerator / denominator if denominator else 0.0


def precision(cm: ConfusionMatrix) -> float:
    return _rate(cm.tp, cm.tp + cm.fp)


def recall(cm: ConfusionMatrix) -> float:
    return _rate(cm.tp, cm.tp + cm.fn)


def f1(cm: ConfusionMatrix) -> float:
    p, r = precision(cm), recall(cm)
    return 2.0 * p * r / (p + r) if p + r else 0.0


def accuracy(cm: ConfusionMatrix) -> float:
    return _rate(cm.tp + cm.tn, cm.total)


def weighted_f1(cm: ConfusionMatrix) -> float:
    """Support-weighted mean of the per-class F1 scores."""
    support_1 = cm.tp + cm.fn
    support_0 = cm.tn + cm.fp
    total = support_1 + support_0
    if total == 0:
        return 0.0
    return (f1(cm) * support_1 + f1(cm.mirrored()) * support_0) / total


def total_cost(cm: ConfusionMatrix, costs: CostModel) -> float:
    """Misclassification cost: c_fp * FP + c_fn * FN."""
    return costs.c_fp * cm.fp + costs.c_fn * cm.fn


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    per_class: dict[int, ClassMetrics]
    weighted: ClassMetrics
    total_cost: float
    confusion: ConfusionMatrix
    n_samples: int
    undefined_rates: tuple[str, ...]

    def to_json_doc(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "per_class": {
                str(cls): {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "support": m.support,
                }
                for cls, m in sorted(self.per_class.items())
            },
            "weighted": {
                "precision": self.weighted.precision,
                "recall": self.weighted.recall,
                "f1": self.weighted.f1,
                "support": self.weighted.support,
            },
            "total_cost": self.total_cost,
            "confusion": {
                "tp": self.confusion.tp,
                "fp": self.confusion.fp,
                "fn": self.confusion.fn,
                "tn": self.confusion.tn,
            },
            "n_samples": self.n_samples,
            "undefined_rates": list(self.undefined_rates),
        }


def compute_report(preds, labels, costs: CostModel = CostModel()) -> MetricReport:
    """Full evaluation of hard predictions against labels."""
    cm = confusion(preds, labels)
    per_class = {}
    undefined = []
    for cls, view in ((1, cm), (0, cm.mirrored())):
        if view.tp + view.fp == 0:
            undefined.append(f"precision_{cls}")
        if view.tp + view.fn == 0:
            undefined.append(f"recall_{cls}")
        per_class[cls] = ClassMetrics(
            precision=precision(view),
            recall=recall(view),
            f1=f1(view),
            support=view.tp + view.fn,
        )
    total = cm.total
    weighted = ClassMetrics(
        precision=sum(m.precision * m.support for m in per_class.values()) / total,
        recall=sum(m.recall * m.support for m in per_class.values()) / total,
        f1=weighted_f1(cm),
        support=total,
    )
    return MetricReport(
        accuracy=accuracy(cm),
        per_class=per_class,
        weighted=weighted,
        total_cost=total_cost(cm, costs),
        confusion=cm,
        n_samples=total,
        undefined_rates=tuple(sorted(undefined)),
    )


def report_to_text(report: MetricReport) -> str:
    """Aligned plain-text rendering for the CLI."""
    cm = report.confusion
    lines = [
        f"samples            {report.n_samples}",
        f"accuracy           {report.accuracy:.4f}",
        f"confusion          tp={cm.tp} fp={cm.fp} fn={cm.fn} tn={cm.tn}",
        f"total cost         {report.total_cost:.2f}",
        "",
        f"{'class':<10}{'precision':>10}{'recall':>10}{'f1':>10}{'support':>10}",
    ]
    for cls in (0, 1):
        m = report.per_class[cls]
        lines.append(
            f"{cls:<10}{m.precision:>10.4f}{m.recall:>10.4f}{m.f1:>10.4f}{m.support:>10}"
        )
    w = report.weighted
    lines.append(
        f"{'weighted':<10}{w.precision:>10.4f}{w.recall:>10.4f}{w.f1:>10.4f}{w.support:>10}"
    )
    if report.undefined_rates:
        lines.append("")
        lines.append("undefined rates reported as 0: " + ", ".join(report.undefined_rates))
    return "\n".join(lines)
