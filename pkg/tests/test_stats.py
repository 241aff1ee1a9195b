from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.stats
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import fisher_oracle, pearson_mp
from umwelt_lab.errors import DataError
from umwelt_lab.extraction import Extraction
from umwelt_lab.runner.models import TrialKey, TrialRecord
from umwelt_lab.stats import (
    accounting,
    accuracy_table,
    bootstrap_ci,
    cohens_d,
    compliance_filter,
    cross_model_correlations,
    delta_pp,
    effect_rows,
    fisher_exact,
    gap_normalized,
    pearson_r,
    wordcount_table,
)
from umwelt_lab.stats.reconstruct import load_table1_counts, reconstruct_ledger, wordcount_fixture
from umwelt_lab.stats.report import build_report, render_text
from umwelt_lab.stats.tables import CellSummary, round_half_away

# ---- Fisher ------------------------------------------------------------------


def test_fisher_degenerate_and_symmetric():
    assert fisher_exact(0, 0, 0, 0) == 1.0
    assert fisher_exact(5, 5, 5, 5) == pytest.approx(1.0, abs=1e-12)


def test_fisher_perfect_separation_against_oracle():
    # Only the two extreme tables are as unlikely as the observed one: 2 / C(20, 10).
    assert fisher_exact(10, 0, 0, 10) == pytest.approx(2 / math.comb(20, 10), rel=1e-12)
    assert fisher_exact(10, 0, 0, 10) == pytest.approx(fisher_oracle(10, 0, 0, 10), abs=1e-12)


tables = st.tuples(*[st.integers(0, 40)] * 4)


@given(tables)
def test_fisher_matches_oracle_and_scipy(t):
    p = fisher_exact(*t)
    assert abs(p - fisher_oracle(*t)) < 1e-12
    if sum(t):
        assert p == pytest.approx(scipy.stats.fisher_exact([[t[0], t[1]], [t[2], t[3]]]).pvalue, abs=1e-9)


@given(tables)
def test_fisher_swap_invariance(t):
    a, b, c, d = t
    p = fisher_exact(a, b, c, d)
    assert fisher_exact(d, c, b, a) == pytest.approx(p, abs=1e-12)  # both swaps
    assert fisher_exact(c, d, a, b) == pytest.approx(p, abs=1e-12)  # rows
    assert fisher_exact(b, a, d, c) == pytest.approx(p, abs=1e-12)  # columns
    assert fisher_exact(a, c, b, d) == pytest.approx(p, abs=1e-12)  # transpose


@given(tables)
def test_fisher_doubling_bounds(t):
    p = fisher_exact(*t, method="doubling")
    assert 0 <= p <= 1
    assert p == pytest.approx(fisher_exact(t[3], t[2], t[1], t[0], method="doubling"), abs=1e-12)


def test_fisher_rejects_negative():
    with pytest.raises(ValueError):
        fisher_exact(-1, 0, 0, 0)


# ---- effect sizes ------------------------------------------------------------


def test_cohens_d_formula():
    assert cohens_d(153 / 160, 160, 134 / 175, 175) == pytest.approx(0.544, abs=5e-4)
    assert cohens_d(0.5, 10, 0.5, 20) == 0.0
    assert cohens_d(1.0, 5, 1.0, 5) == 0.0
    assert cohens_d(1.0, 5, 0.0, 5, standardizer="average") is None
    with pytest.raises(ValueError):
        cohens_d(0.5, 0, 0.5, 1)


@given(st.floats(0, 1), st.integers(1, 500), st.floats(0, 1), st.integers(1, 500))
def test_cohens_d_antisymmetric(p1, n1, p0, n0):
    d = cohens_d(p1, n1, p0, n0)
    e = cohens_d(p0, n0, p1, n1)
    if d is None:
        assert e is None
    else:
        assert d == pytest.approx(-e, abs=1e-12)


def test_gap_examples():
    assert round(gap_normalized(8.3, 0.917), 1) == 100.0
    assert gap_normalized(42.3, 0.417) == pytest.approx(72.4, abs=0.5)
    assert gap_normalized(0, 0.3) == 0
    assert gap_normalized(5, 1.0) is None


@given(st.floats(-100, 100), st.floats(0, 0.999))
def test_gap_recovers_delta(delta, c):
    # The gap is a percentage of the headroom, hence the final division by 100.
    assert gap_normalized(delta, c) * (100 * (1 - c)) / 100 == pytest.approx(delta, abs=1e-9)


def test_pearson_examples():
    x = [1.0, 2.5, 3.0, 4.2]
    assert pearson_r(x, x) == pytest.approx(1.0)
    assert pearson_r(x, [-v for v in x]) == pytest.approx(-1.0)
    assert pearson_r([1, 1, 1], [1, 2, 3]) is None
    with pytest.raises(ValueError):
        pearson_r([1], [1])


def test_pearson_seven_point_oracle():
    x = [-2.1, 14.1, 0.4, -3.0, 3.1, -5.7, 15.5]
    y = [1.2, 8.9, -0.3, -1.4, 13.4, -27.5, 5.0]
    assert abs(pearson_r(x, y) - pearson_mp(x, y)) < 1e-12


@given(st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=2, max_size=20))
def test_pearson_oracle_property(pairs):
    x, y = [p[0] for p in pairs], [p[1] for p in pairs]
    r = pearson_r(x, y)
    assume(r is not None)
    assert abs(r - pearson_mp(x, y)) < 1e-9


# ---- bootstrap ---------------------------------------------------------------


def test_bootstrap_degenerate_zero_width():
    lo, hi = bootstrap_ci({"t": [1.0] * 20, "c": [1.0] * 30}, delta_pp("t", "c"), resamples=500)
    assert lo == hi == 0.0


def test_bootstrap_reproducible():
    groups = {"t": [1, 0, 1, 1, 0, 1], "c": [0, 0, 1, 0, 1, 0]}
    a = bootstrap_ci(groups, delta_pp("t", "c"), resamples=2000, seed=7)
    b = bootstrap_ci(groups, delta_pp("t", "c"), resamples=2000, seed=7)
    assert a == b
    assert a != bootstrap_ci(groups, delta_pp("t", "c"), resamples=2000, seed=8)


def test_bootstrap_redraws_undefined():
    calls = {"n": 0}

    def flaky(s):
        calls["n"] += 1
        return None if calls["n"] % 3 == 0 else float(s["x"].mean())

    lo, hi = bootstrap_ci({"x": [0, 1]}, flaky, resamples=100)
    assert 0 <= lo <= hi <= 1 and calls["n"] > 100
    with pytest.raises(DataError):
        bootstrap_ci({"x": [0, 1]}, lambda s: float("nan"), resamples=10, max_redraws=5)
    with pytest.raises(DataError):
        bootstrap_ci({"x": []}, flaky)


def test_bootstrap_coverage_simulation():
    """Intervals from a known generator bracket the true delta in at least 93% of repeats."""
    gen = np.random.default_rng(12345)
    p_t, p_c, n = 0.8, 0.6, 200
    hits = 0
    for rep in range(200):
        groups = {"t": gen.random(n) < p_t, "c": gen.random(n) < p_c}
        lo, hi = bootstrap_ci(groups, delta_pp("t", "c"), resamples=1000, seed=rep)
        hits += lo <= 100 * (p_t - p_c) <= hi
    assert hits >= 186


# ---- tables ------------------------------------------------------------------


def record(i, cond="control", outcome="correct", task="causal", status="ok", model="m", violations=0, words=3):
    key = TrialKey(f"q{i}", cond, model, 0)
    if status != "ok":
        return TrialRecord(key, 0.0, status, task_type=task)
    ans = None if outcome == "unscored" else "A"
    text = " ".join(["w"] * words)
    return TrialRecord(
        key, 0.0, "ok", response=text, task_type=task,
        extraction=Extraction(ans, "explicit_marker" if ans else "no_match", 0 if ans else None),
        outcome=outcome, violations=violations, word_count=words,
    )


def test_accuracy_table_basic():
    recs = [record(i, outcome=o) for i, o in enumerate(["correct", "correct", "correct", "incorrect"])]
    cells, notes = accuracy_table(recs)
    assert len(cells) == 1 and cells[0].accuracy == 0.75 and not notes


def test_accuracy_table_groups_disjoint():
    recs = [record(0, task="causal"), record(1, task="causal", outcome="incorrect"), record(2, task="analogical")]
    cells, _ = accuracy_table(recs)
    assert {(c.task_type, c.n_scoreable, c.n_correct) for c in cells} == {("causal", 2, 1), ("analogical", 1, 1)}


def test_accuracy_table_only_unscored():
    recs = [record(0, outcome="unscored"), record(1, status="timeout")]
    cells, notes = accuracy_table(recs)
    assert cells == [] and len(notes) == 1


def test_compliance_filter():
    recs = [record(i, cond="e_prime", violations=v) for i, v in enumerate([0, 2, 0, 1, 0])]
    assert len(compliance_filter(recs, "e_prime")) == 3
    clean = [record(i, cond="e_prime") for i in range(4)]
    assert compliance_filter(clean, "e_prime") == clean
    ctrl = [record(i) for i in range(4)]
    assert len(compliance_filter(ctrl, "control")) == 4


def test_wordcount_hand_computed():
    recs = [record(0, words=10), record(1, words=20), record(2, cond="e_prime", words=12), record(3, cond="e_prime", words=9)]
    (row,) = wordcount_table(recs)
    assert row.means == {"control": 15.0, "e_prime": 10.5}
    assert row.delta_pct == {"e_prime": -30}


def test_wordcount_missing_control():
    (row,) = wordcount_table([record(0, cond="e_prime")])
    assert row.delta_pct == {}


def test_wordcount_equal_means():
    (row,) = wordcount_table([record(0, words=5), record(1, cond="e_prime", words=5)])
    assert row.delta_pct == {"e_prime": 0}


def test_round_half_away():
    assert [round_half_away(x) for x in (-2.5, -1.5, 0.5, 1.5, 2.4, -0.4)] == [-3, -2, 1, 2, 2, 0]


def test_wordcount_fixture_means_exact():
    recs = wordcount_fixture({"classification": {"control": 407, "e_prime": 273}})
    (row,) = wordcount_table(recs)
    assert row.means == {"control": 407.0, "e_prime": 273.0} and row.delta_pct["e_prime"] == -33
    assert all(r.word_count == len(r.response.split()) for r in recs)


def test_effect_rows_small():
    cells = [CellSummary("causal", "control", "pooled", 10, 5), CellSummary("causal", "e_prime", "pooled", 10, 9)]
    (row,) = effect_rows(cells)
    assert row.delta_pp == pytest.approx(40.0)
    assert row.gap_pct == pytest.approx(80.0)
    assert row.p_value == pytest.approx(fisher_oracle(9, 1, 5, 5), abs=1e-12)


def test_effect_rows_gap_undefined_for_losses():
    cells = [CellSummary("causal", "control", "pooled", 10, 9), CellSummary("causal", "e_prime", "pooled", 10, 5)]
    assert effect_rows(cells)[0].gap_pct is None


def test_cross_model_correlation():
    cells = []
    for m, deltas in {"a": [1, 2, 3], "b": [2, 4, 6], "c": [3, 2, 1]}.items():
        for t, dl in zip(["causal", "analogical", "math_word"], deltas):
            cells += [CellSummary(t, "control", m, 100, 50), CellSummary(t, "e_prime", m, 100, 50 + dl)]
    r = cross_model_correlations(cells, "e_prime")
    assert r["a vs b"] == pytest.approx(1.0) and r["a vs c"] == pytest.approx(-1.0)


# ---- reconstructed ledger ----------------------------------------------------


@pytest.fixture(scope="module")
def ledger():
    return reconstruct_ledger()


def test_reconstruction_matches_counts(ledger):
    cells, _ = accuracy_table(ledger)
    got = {(c.task_type, c.condition): (c.n_scoreable, c.n_correct) for c in cells}
    want = {(c["task_type"], c["condition"]): (c["n_scoreable"], c["n_correct"]) for c in load_table1_counts()}
    assert got == want


def test_accounting_partition(ledger):
    acc = accounting(ledger)
    assert acc["planned"] == acc["scoreable"] + acc["no_match"] + acc["unparseable"] + acc["errors"] + acc["missing"]
    keys = sorted({r.key for r in ledger})
    assert accounting(ledger, plan=keys + [TrialKey("extra", "control", "m", 0)])["missing"] == 1


def test_report_round_trips_and_renders(ledger):
    import json

    rep = build_report(ledger, resamples=200, seed=1)
    assert json.loads(json.dumps(rep)) == rep
    text = render_text(rep)
    assert "+19.1***" in text and "planned 4680" in text
    assert rep["compliance_filtered"]["e_prime"]["retained"] > 0
