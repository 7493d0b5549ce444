"""Confusion matrices, the four headline metrics, and model comparison tables.

Metrics are kept as exact ``Fraction`` values; floats only appear when a
report is rendered.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DuplicateName, EmptyEvaluation, EmptyMatrix, LengthMismatch

REPORT_FORMAT = "spamlab-report/1"


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int
    positive_label: object = "spam"

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def swapped(self, negative_label) -> "ConfusionMatrix":
        """Same predictions viewed with the other class as positive."""
        return ConfusionMatrix(self.tn, self.fn, self.tp, self.fp, negative_label)


@dataclass(frozen=True)
class MetricsReport:
    accuracy: Fraction
    precision: Fraction
    recall: Fraction
    f1: Fraction
    zero_division: frozenset = field(default_factory=frozenset)

    def as_floats(self) -> dict:
        return {k: float(getattr(self, k)) for k in ("accuracy", "precision", "recall", "f1")}


def confusion(predictions: Sequence, truths: Sequence, positive_label="spam") -> ConfusionMatrix:
    if len(predictions) != len(truths):
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(truths)} truths")
    if not predictions:
        raise EmptyEvaluation("nothing to evaluate")
    tp = fp = tn = fn = 0
    for p, t in zip(predictions, truths):
        if p == positive_label:
            if t == positive_label:
                tp += 1
            else:
                fp += 1
        elif t == positive_label:
            fn += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fp, tn, fn, positive_label)


def _ratio(num: int, den: int, name: str, flags: set) -> Fraction:
    if den == 0:
        flags.add(name)
        return Fraction(0)
    return Fraction(num, den)


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    if cm.total == 0:
        raise EmptyMatrix("confusion matrix has no entries")
    flags: set = set()
    accuracy = Fraction(cm.tp + cm.tn, cm.total)
    precision = _ratio(cm.tp, cm.tp + cm.fp, "precision", flags)
    recall = _ratio(cm.tp, cm.tp + cm.fn, "recall", flags)
    if precision + recall == 0:
        flags.add("f1")
        f1 = Fraction(0)
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return MetricsReport(accuracy, precision, recall, f1, frozenset(flags))


@dataclass(frozen=True)
class ComparisonRow:
    name: str
    report: MetricsReport
    matrix: ConfusionMatrix | None = None


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[ComparisonRow, ...]

    def render(self) -> str:
        return render_table(self)

    def to_json(self) -> str:
        return dumps_report(self)


def compare(reports: Sequence) -> ComparisonTable:
    """Order rows by descending accuracy, then by name.

    Items are ``(name, MetricsReport)`` or ``(name, MetricsReport, ConfusionMatrix)``.
    """
    rows = [ComparisonRow(*item) for item in reports]
    names = [r.name for r in rows]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise DuplicateName(f"duplicate model names: {', '.join(dupes)}")
    rows.sort(key=lambda r: (-r.report.accuracy, r.name))
    return ComparisonTable(tuple(rows))


# Headline row reported for the MLP model on the original (private) corpus.
# Shown for context only; never recomputed.
PAPER_MLP_ROW = (
    "mlp (published)",
    MetricsReport(Fraction(96, 100), Fraction(97, 100), Fraction(94, 100), Fraction(96, 100)),
)


def render_table(table: ComparisonTable) -> str:
    header = f"{'model':<18} {'accuracy':>9} {'precision':>9} {'recall':>9} {'f1':>9}"
    lines = [header, "-" * len(header)]
    for row in table.rows:
        m = row.report.as_floats()
        flag = " *" if row.report.zero_division else ""
        lines.append(
            f"{row.name:<18} {m['accuracy']:>9.4f} {m['precision']:>9.4f} "
            f"{m['recall']:>9.4f} {m['f1']:>9.4f}{flag}"
        )
    if any(r.report.zero_division for r in table.rows):
        lines.append("* a 0/0 ratio was reported as 0")
    return "\n".join(lines)


def render_confusion(name: str, cm: ConfusionMatrix) -> str:
    pos = str(cm.positive_label)
    return (
        f"{name}: positive={pos}\n"
        f"{'':>14}{'pred ' + pos:>12}{'pred other':>12}\n"
        f"{'true ' + pos:>14}{cm.tp:>12}{cm.fn:>12}\n"
        f"{'true other':>14}{cm.fp:>12}{cm.tn:>12}"
    )


def dumps_report(table: ComparisonTable, positive_label="spam") -> str:
    """Machine-readable report; see docs/formats.md."""
    models = []
    for row in table.rows:
        rec = {"model": row.name}
        rec.update(row.report.as_floats())
        for k in ("tp", "fp", "tn", "fn"):
            rec[k] = getattr(row.matrix, k) if row.matrix is not None else None
        rec["zero_division"] = sorted(row.report.zero_division)
        models.append(rec)
    doc = {"format": REPORT_FORMAT, "positive_label": str(positive_label), "models": models}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads_report(text: str) -> ComparisonTable:
    doc = json.loads(text)
    if doc.get("format") != REPORT_FORMAT:
        raise ValueError(f"not a {REPORT_FORMAT} document")
    rows = []
    for rec in doc["models"]:
        cm = None
        if rec.get("tp") is not None:
            cm = ConfusionMatrix(rec["tp"], rec["fp"], rec["tn"], rec["fn"], doc["positive_label"])
        if cm is not None and cm.total:
            report = metrics(cm)
        else:
            report = MetricsReport(*(Fraction(rec[k]).limit_denominator(10**9)
                                     for k in ("accuracy", "precision", "recall", "f1")),
                                   frozenset(rec.get("zero_division", ())))
        rows.append((rec["model"], report, cm))
    return compare(rows)
