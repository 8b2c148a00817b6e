import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdmbench.causal import (CycleError, Dag, DagError, NodeNameError, SingularDesignError,
                             build_default_dag, causal_insights, d_separated, default_dag_text,
                             derive_causal_features, estimate_effect, find_minimal_adjustment_set,
                             parse_edge_list, satisfies_backdoor, validate_dag, variable_table)
from pdmbench.data import build_labeled

from conftest import make_record
from oracles import (backdoor_by_paths, confounded_scm, d_separated_by_paths,
                     random_ordered_dag)


def chain():
    return Dag("ABC", [("A", "B"), ("B", "C")])


def test_default_dag_shape():
    dag = build_default_dag()
    validate_dag(dag)
    assert {"temp_diff", "power", "overstrain"} <= dag.parents("failure")
    assert dag.parents("failure") == {"temp_diff", "power", "overstrain", "tool_wear"}
    assert len(dag.edges) == 12
    assert "failure" in dag.descendants("torque")
    assert {"power", "overstrain"} <= dag.children("torque")


def test_default_dag_file_roundtrip():
    dag = build_default_dag()
    assert parse_edge_list(dag.to_edge_list()) == dag
    assert "#" in default_dag_text()


def test_edge_list_parsing_errors(tmp_path):
    with pytest.raises(CycleError) as exc:
        parse_edge_list("A -> B\nB -> A\n")
    assert exc.value.cycle == ["A", "B"]
    with pytest.raises(DagError, match="line 2"):
        parse_edge_list("A -> B\nA -> -> C\n")


def test_dangling_endpoint_named():
    with pytest.raises(NodeNameError, match="Q"):
        validate_dag(Dag(["A"], [("A", "Q")]))


def test_unknown_node_errors():
    with pytest.raises(NodeNameError):
        d_separated(chain(), "A", "Z")
    with pytest.raises(NodeNameError):
        satisfies_backdoor(chain(), "A", "C", {"nope"})


def test_textbook_structures():
    assert d_separated(chain(), "A", "C", {"B"})
    assert not d_separated(chain(), "A", "C")
    fork = Dag("ABC", [("B", "A"), ("B", "C")])
    assert d_separated(fork, "A", "C", {"B"})
    collider = Dag("ABC", [("A", "B"), ("C", "B")])
    assert d_separated(collider, "A", "C")
    assert not d_separated(collider, "A", "C", {"B"})
    with_child = Dag("ABCD", [("A", "B"), ("C", "B"), ("B", "D")])
    assert not d_separated(with_child, "A", "C", {"D"})


def test_conditioning_on_endpoint_rejected():
    with pytest.raises(DagError):
        d_separated(chain(), "A", "C", {"A"})


def test_backdoor_textbook():
    dag = Dag("XYZ", [("Z", "X"), ("Z", "Y"), ("X", "Y")])
    assert satisfies_backdoor(dag, "X", "Y", {"Z"})
    assert not satisfies_backdoor(dag, "X", "Y", set())
    assert find_minimal_adjustment_set(dag, "X", "Y") == {"Z"}
    med = Dag("XMYZ", [("Z", "X"), ("Z", "Y"), ("X", "M"), ("M", "Y")])
    # M blocks nothing on the backdoor and is a descendant of X
    assert not satisfies_backdoor(med, "X", "Y", {"Z", "M"})
    assert find_minimal_adjustment_set(chain(), "A", "C") == frozenset()


def test_backdoor_none_when_unobserved():
    dag = Dag("XYU", [("U", "X"), ("U", "Y"), ("X", "Y")])
    assert find_minimal_adjustment_set(dag, "X", "Y", observed={"X", "Y"}) is None


def test_default_dag_backdoor_matches_paths():
    dag = build_default_dag()
    for t in ("tool_wear", "torque", "rot_speed"):
        want = backdoor_by_paths(dag.edges, t, "failure", set())
        assert satisfies_backdoor(dag, t, "failure", set()) == want
        z = find_minimal_adjustment_set(dag, t, "failure")
        assert z is not None and satisfies_backdoor(dag, t, "failure", z)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 6), st.floats(0.1, 0.9), st.integers(0, 2 ** 32 - 1), st.data())
def test_d_separation_matches_path_enumeration(n, p, seed, data):
    dag = random_ordered_dag(np.random.default_rng(seed), n, p)
    nodes = sorted(dag.nodes)
    x, y = data.draw(st.lists(st.sampled_from(nodes), min_size=2, max_size=2, unique=True))
    rest = [v for v in nodes if v not in (x, y)]
    z = set(data.draw(st.lists(st.sampled_from(rest), unique=True))) if rest else set()
    got = d_separated(dag, x, y, z)
    assert got == d_separated_by_paths(dag.edges, x, y, z)
    assert got == d_separated(dag, y, x, z)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 7), st.floats(0.1, 0.8), st.integers(0, 2 ** 32 - 1), st.data())
def test_minimal_sets_pass_backdoor(n, p, seed, data):
    dag = random_ordered_dag(np.random.default_rng(seed), n, p)
    t, y = data.draw(st.lists(st.sampled_from(sorted(dag.nodes)), min_size=2, max_size=2,
                              unique=True))
    z = find_minimal_adjustment_set(dag, t, y)
    if z is not None:
        assert satisfies_backdoor(dag, t, y, z)
        assert backdoor_by_paths(dag.edges, t, y, z)
        # adding a descendant of the treatment always breaks the criterion
        for d in dag.descendants(t) - {y}:
            assert not satisfies_backdoor(dag, t, y, z | {d})


# --- features

def test_features_first_row():
    f = derive_causal_features(make_record(air=298.1, process=308.6, rpm=1551, torque=42.8, wear=0))
    assert f.temp_diff == pytest.approx(10.5)
    assert f.power == pytest.approx(42.8 * 1551 * 2 * math.pi / 60)
    assert abs(f.power - 6951.5) < 0.1  # 162.42 rad/s x 42.8 Nm
    assert f.overstrain == 0


def test_features_zero_torque_and_narrative():
    f = derive_causal_features(make_record(torque=0.0, wear=100))
    assert f.power == 0 and f.overstrain == 0
    assert derive_causal_features(make_record(torque=56.0, wear=215)).overstrain == 12_040


@given(st.floats(0, 1e4), st.floats(1e-3, 1e5), st.floats(0, 1e4), st.floats(1, 1e3),
       st.floats(1, 1e3))
def test_feature_signs(torque, rpm, wear, air, process):
    f = derive_causal_features(make_record(air=air, process=process, rpm=rpm, torque=torque,
                                           wear=wear))
    assert f.power >= 0 and f.overstrain >= 0
    assert np.sign(f.temp_diff) == np.sign(process - air)


# --- effects

def test_effect_exact_line():
    est = estimate_effect({"x": np.array([0.0, 1.0]), "y": np.array([0.0, 2.0])}, "x", "y")
    assert est.coefficient == pytest.approx(2.0, abs=1e-12)


def test_effect_noise_free_is_exact():
    rng = np.random.default_rng(0)
    x, z = rng.normal(size=50), rng.normal(size=50)
    est = estimate_effect({"x": x, "z": z, "y": 1.5 * x - 2 * z + 4}, "x", "y", {"z"})
    assert abs(est.coefficient - 1.5) < 1e-12


def test_effect_duplicate_column_is_singular():
    x = np.arange(10.0)
    with pytest.raises(SingularDesignError) as exc:
        estimate_effect({"x": x, "z": x.copy(), "y": x}, "x", "y", {"z"})
    assert exc.value.columns == ["z"]


def test_confounded_scm_recovery():
    data, dag = confounded_scm()
    z = find_minimal_adjustment_set(dag, "x", "y")
    adj = estimate_effect(data, "x", "y", z, dag=dag)
    raw = estimate_effect(data, "x", "y")
    assert abs(adj.coefficient - 3.0) < 3 * adj.std_error
    assert abs(raw.coefficient - 3.0) > 3 * adj.std_error
    with pytest.raises(ValueError, match="backdoor"):
        estimate_effect(data, "x", "y", (), dag=dag)


def test_variable_table_and_insights(small_labeled):
    table = variable_table(small_labeled)
    assert "machine_type[L]" not in table and "failure" in table
    rows = causal_insights(small_labeled)
    assert [r["treatment"] for r in rows] == ["tool_wear", "torque", "rot_speed"]
    for r in rows:
        assert r["identifiable"] and math.isfinite(r["coefficient"])


def test_machine_type_adjustment_uses_indicators():
    recs = build_labeled([make_record(i, machine_type="LMH"[i % 3], torque=20 + i % 7,
                                      wear=float(i), osf=i % 5 == 0) for i in range(1, 60)])
    est = estimate_effect(recs, "tool_wear", "failure", {"machine_type"})
    assert math.isfinite(est.std_error)


def test_insights_mark_unidentifiable():
    dag = parse_edge_list("tool_wear -> failure\n")
    rows = causal_insights([], dag, treatments=("torque",))
    assert rows[0]["identifiable"] is False
