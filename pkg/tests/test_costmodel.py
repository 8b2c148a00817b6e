import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdmbench.costmodel import (ConfusionCounts, CostSchedule, baseline_cost,
                                classification_metrics, confusion, evaluate_counts, savings,
                                total_cost)
from pdmbench.data import LabeledRecord

from conftest import make_record


def test_default_schedule():
    s = CostSchedule()
    assert (s.tp_cost, s.fp_cost, s.fn_cost, s.tn_cost) == (5_000, 500, 25_000, 0)


@pytest.mark.parametrize("kwargs", [{"fp_cost": -1}, {"tp_cost": 0.5}])
def test_schedule_validation(kwargs):
    with pytest.raises(ValueError):
        CostSchedule(**kwargs)


def test_counts_reject_negative():
    with pytest.raises(ValueError):
        ConfusionCounts(tp=-1)


@pytest.mark.parametrize("counts,expected", [
    (ConfusionCounts(58, 5, 8), 492_500),
    (ConfusionCounts(0, 0, 0, 2_000), 0),
    (ConfusionCounts(54, 346, 12), 743_000),
])
def test_total_cost(counts, expected):
    assert total_cost(counts) == expected


def _labeled(n_pos, n_neg=3):
    return [LabeledRecord(make_record(i), i < n_pos) for i in range(n_pos + n_neg)]


@pytest.mark.parametrize("n_pos,expected", [(66, 1_650_000), (0, 0), (1, 25_000)])
def test_baseline(n_pos, expected):
    assert baseline_cost(_labeled(n_pos)) == expected
    assert baseline_cost([True] * n_pos + [False]) == expected


def test_savings_examples():
    usd, pct = savings(492_500, 1_650_000)
    assert usd == 1_157_500 and round(pct, 3) == 0.702
    assert savings(1_650_000, 1_650_000) == (0, 0.0)
    assert savings(0, 1_650_000) == (1_650_000, 1.0)
    assert savings(2_000_000, 1_000_000) == (-1_000_000, -1.0)
    with pytest.raises(ZeroDivisionError):
        savings(10, 0)


def test_metrics_examples():
    r, p, f = classification_metrics(ConfusionCounts(58, 5, 8))
    assert (round(r, 3), round(p, 3), round(f, 3)) == (0.879, 0.921, 0.899)
    assert classification_metrics(ConfusionCounts(0, 0, 66)) == (0.0, 0.0, 0.0)
    _, p, f = classification_metrics(ConfusionCounts(58, 165, 8))
    assert abs(p - 0.260) <= 0.001 and abs(f - 0.401) <= 0.001


def test_confusion_and_evaluate():
    c = confusion([True, True, False, False, True], [True, False, True, False, True])
    assert c == ConfusionCounts(tp=2, fp=1, fn=1, tn=1)
    m = evaluate_counts(c, baseline=75_000)
    assert m.total_cost == 2 * 5_000 + 500 + 25_000
    assert m.savings_usd == 75_000 - m.total_cost
    with pytest.raises(ValueError):
        confusion([True], [True, False])


counts = st.builds(ConfusionCounts, *(st.integers(0, 10_000) for _ in range(4)))
schedules = st.builds(CostSchedule, *(st.integers(0, 100_000) for _ in range(4)))


@given(counts, schedules, st.sampled_from(["tp", "fp", "fn"]), st.integers(1, 100))
def test_cost_monotone(c, s, field, bump):
    bigger = ConfusionCounts(**{**c.__dict__, field: getattr(c, field) + bump})
    assert total_cost(bigger, s) >= total_cost(c, s)


@given(counts, st.integers(1, 10 ** 9))
def test_cost_plus_savings_is_baseline(c, baseline):
    cost = total_cost(c)
    usd, _ = savings(cost, baseline)
    assert cost + usd == baseline


@given(counts)
def test_metrics_bounded(c):
    r, p, f = classification_metrics(c)
    assert all(0.0 <= v <= 1.0 for v in (r, p, f))
    assert (f == 0.0) == (c.tp == 0)
