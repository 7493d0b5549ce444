import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from spamlab.errors import DuplicateName, EmptyEvaluation, EmptyMatrix, LengthMismatch
from spamlab.evaluation import (
    PAPER_MLP_ROW,
    ConfusionMatrix,
    compare,
    confusion,
    dumps_report,
    loads_report,
    metrics,
    render_confusion,
    render_table,
)

from oracles import recount

P, N = "spam", "ham"


def test_confusion_examples():
    truths = [P, P, N, N]
    assert confusion(truths, truths) == ConfusionMatrix(2, 0, 2, 0)
    assert confusion([P] * 4, truths) == ConfusionMatrix(2, 2, 0, 0)
    assert confusion([P, P, N, N, P], [P, N, P, N, P]) == ConfusionMatrix(2, 1, 1, 1)


def test_confusion_errors():
    with pytest.raises(LengthMismatch):
        confusion([P], [P, N])
    with pytest.raises(EmptyEvaluation):
        confusion([], [])
    with pytest.raises(EmptyMatrix):
        metrics(ConfusionMatrix(0, 0, 0, 0))


def test_metrics_examples():
    perfect = metrics(ConfusionMatrix(2, 0, 2, 0))
    assert (perfect.accuracy, perfect.precision, perfect.recall, perfect.f1) == (1, 1, 1, 1)
    assert not perfect.zero_division
    m = metrics(ConfusionMatrix(tp=3, fp=1, tn=4, fn=2))
    assert m.accuracy == Fraction(7, 10)
    assert m.precision == Fraction(3, 4)
    assert m.recall == Fraction(3, 5)
    assert m.f1 == Fraction(2, 3)
    assert round(float(m.f1), 5) == 0.66667
    never = metrics(ConfusionMatrix(0, 0, 3, 2))
    assert never.precision == 0 and "precision" in never.zero_division
    assert never.f1 == 0 and "f1" in never.zero_division


def test_zero_division_flags():
    no_positives = metrics(ConfusionMatrix(0, 2, 3, 0))
    assert no_positives.zero_division == {"recall", "f1"}
    both = metrics(ConfusionMatrix(0, 0, 5, 0))
    assert both.zero_division == {"precision", "recall", "f1"}


def test_recount_oracle_randomized():
    rnd = random.Random(1234)
    for _ in range(200):
        n = rnd.randint(1, 10)
        preds = [rnd.choice((P, N)) for _ in range(n)]
        truths = [rnd.choice((P, N)) for _ in range(n)]
        cm = confusion(preds, truths)
        tp, fp, tn, fn = recount(preds, truths, P)
        assert (cm.tp, cm.fp, cm.tn, cm.fn) == (tp, fp, tn, fn)
        m = metrics(cm)
        assert m.accuracy == Fraction(tp + tn, n)
        if tp + fp:
            assert m.precision == Fraction(tp, tp + fp)
        if tp + fn:
            assert m.recall == Fraction(tp, tp + fn)
        if tp:
            assert m.f1 == Fraction(2 * tp, 2 * tp + fp + fn)


labels = st.lists(st.sampled_from([P, N]), min_size=1, max_size=10)


@given(st.data())
def test_swap_and_ranges(data):
    truths = data.draw(labels)
    preds = data.draw(st.lists(st.sampled_from([P, N]), min_size=len(truths), max_size=len(truths)))
    cm = confusion(preds, truths, P)
    other = confusion(preds, truths, N)
    assert other == cm.swapped(N)
    assert (other.tp, other.fp, other.tn, other.fn) == (cm.tn, cm.fn, cm.tp, cm.fp)
    assert metrics(cm).accuracy == metrics(other).accuracy
    m = metrics(cm)
    for v in (m.accuracy, m.precision, m.recall, m.f1):
        assert 0 <= v <= 1
    if m.precision + m.recall:
        assert m.f1 == 2 * m.precision * m.recall / (m.precision + m.recall)
    assert cm.total == len(truths)


def _report(acc_num):
    return metrics(ConfusionMatrix(acc_num, 0, 0, 10 - acc_num))


def test_compare_orders_by_accuracy_then_name():
    table = compare([("b", _report(5)), ("a", _report(9)), ("c", _report(7))])
    assert [r.name for r in table.rows] == ["a", "c", "b"]
    tied = compare([("zeta", _report(5)), ("alpha", _report(5))])
    assert [r.name for r in tied.rows] == ["alpha", "zeta"]
    with pytest.raises(DuplicateName):
        compare([("a", _report(5)), ("a", _report(6))])


def test_published_row():
    name, rep = PAPER_MLP_ROW
    assert rep.as_floats() == {"accuracy": 0.96, "precision": 0.97, "recall": 0.94, "f1": 0.96}
    text = render_table(compare([PAPER_MLP_ROW]))
    assert "0.9600" in text and "0.9700" in text and "0.9400" in text


def test_render_four_decimals():
    cm = ConfusionMatrix(3, 1, 4, 2)
    text = render_table(compare([("nb", metrics(cm), cm)]))
    assert text.splitlines()[2].split() == ["nb", "0.7000", "0.7500", "0.6000", "0.6667"]
    assert "3" in render_confusion("nb", cm)


def test_machine_report_roundtrip():
    rows = []
    for name, cm in (("nb", ConfusionMatrix(3, 1, 4, 2)), ("c45", ConfusionMatrix(0, 0, 5, 5))):
        rows.append((name, metrics(cm), cm))
    table = compare(rows)
    text = dumps_report(table)
    doc = json.loads(text)
    assert doc["format"] == "spamlab-report/1"
    assert set(doc["models"][0]) == {
        "model", "accuracy", "precision", "recall", "f1", "tp", "fp", "tn", "fn", "zero_division"
    }
    back = loads_report(text)
    assert [(r.name, r.report, r.matrix) for r in back.rows] == [(r.name, r.report, r.matrix) for r in table.rows]
    assert dumps_report(back) == text
