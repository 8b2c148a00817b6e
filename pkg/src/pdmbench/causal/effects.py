"""Backdoor-adjusted linear effect estimates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .dag import Dag, build_default_dag, find_minimal_adjustment_set, satisfies_backdoor
from .features import causal_feature_matrix

TREATMENTS = ("tool_wear", "torque", "rot_speed")


class SingularDesignError(np.linalg.LinAlgError):
    def __init__(self, columns):
        super().__init__("design matrix is singular; collinear columns: " + ", ".join(columns))
        self.columns = list(columns)


@dataclass(frozen=True)
class EffectEstimate:
    treatment: str
    outcome: str
    adjustment: tuple[str, ...]
    coefficient: float
    std_error: float


def variable_table(records) -> dict[str, np.ndarray]:
    """Every DAG variable as a column; machine type becomes M/H indicators (L is reference)."""
    recs = [getattr(r, "record", r) for r in records]
    derived = causal_feature_matrix(recs)
    table = {
        "air_temp": np.array([r.air_temp for r in recs], dtype=float),
        "process_temp": np.array([r.process_temp for r in recs], dtype=float),
        "rot_speed": np.array([r.rot_speed for r in recs], dtype=float),
        "torque": np.array([r.torque for r in recs], dtype=float),
        "tool_wear": np.array([r.tool_wear for r in recs], dtype=float),
        "machine_type[M]": np.array([r.machine_type == "M" for r in recs], dtype=float),
        "machine_type[H]": np.array([r.machine_type == "H" for r in recs], dtype=float),
        "temp_diff": derived[:, 0],
        "power": derived[:, 1],
        "overstrain": derived[:, 2],
    }
    if records and hasattr(records[0], "label"):
        table["failure"] = np.array([r.label for r in records], dtype=float)
    return table


def _columns(table: Mapping[str, np.ndarray], name: str) -> list[str]:
    if name in table:
        return [name]
    expanded = sorted(k for k in table if k.startswith(name + "["))
    if not expanded:
        raise KeyError(f"variable {name!r} is not available in the data")
    return expanded


def _collinear(X: np.ndarray, names: Sequence[str]) -> list[str]:
    """Columns that lie in the span of the columns before them."""
    bad = []
    kept = []
    scale = np.linalg.norm(X, axis=0)
    for j in range(X.shape[1]):
        col = X[:, j]
        if scale[j] == 0:
            bad.append(names[j])
            continue
        if kept:
            B = X[:, kept]
            coef, *_ = np.linalg.lstsq(B, col, rcond=None)
            if np.linalg.norm(col - B @ coef) <= 1e-9 * scale[j]:
                bad.append(names[j])
                continue
        kept.append(j)
    return bad


def ols(X: np.ndarray, y: np.ndarray, names: Sequence[str]):
    """Least squares with classical standard errors; raises on a singular design."""
    bad = _collinear(X, names)
    if bad:
        raise SingularDesignError(bad)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    n, p = X.shape
    dof = n - p
    if dof > 0:
        resid = y - X @ coef
        sigma2 = float(resid @ resid) / dof
        cov = sigma2 * np.linalg.inv(X.T @ X)
        se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    else:
        se = np.full(p, np.nan)
    return coef, se


def estimate_effect(data, treatment: str, outcome: str, adjustment=(),
                    dag: Dag | None = None) -> EffectEstimate:
    """OLS of ``outcome`` on ``treatment`` plus the adjustment covariates.

    ``data`` is a mapping of column arrays or a sequence of (labeled) records.
    When ``dag`` is given, the adjustment set must satisfy the backdoor criterion.
    """
    adjustment = tuple(sorted(adjustment))
    if dag is not None and not satisfies_backdoor(dag, treatment, outcome, adjustment):
        raise ValueError(f"{set(adjustment) or '{}'} is not a backdoor set for "
                         f"{treatment} -> {outcome}")
    table = data if isinstance(data, Mapping) else variable_table(data)
    names = ["(intercept)"] + _columns(table, treatment)
    for a in adjustment:
        names += _columns(table, a)
    y = np.asarray(table[outcome], dtype=float)
    X = np.column_stack([np.ones(y.shape[0])] + [np.asarray(table[c], dtype=float) for c in names[1:]])
    coef, se = ols(X, y, names)
    return EffectEstimate(treatment=treatment, outcome=outcome, adjustment=adjustment,
                          coefficient=float(coef[1]), std_error=float(se[1]))


def causal_insights(records, dag: Dag | None = None, treatments=TREATMENTS,
                    outcome: str = "failure") -> list[dict]:
    """Identification and adjusted effect for each treatment on the outcome."""
    dag = build_default_dag() if dag is None else dag
    rows = []
    for t in treatments:
        if t not in dag.nodes or outcome not in dag.nodes:
            rows.append({"treatment": t, "outcome": outcome, "identifiable": False,
                         "adjustment": None, "coefficient": None, "std_error": None})
            continue
        z = find_minimal_adjustment_set(dag, t, outcome)
        row = {"treatment": t, "outcome": outcome, "identifiable": z is not None,
               "adjustment": None if z is None else sorted(z),
               "coefficient": None, "std_error": None}
        if z is not None:
            est = estimate_effect(records, t, outcome, z)
            row["coefficient"] = est.coefficient
            row["std_error"] = est.std_error
        rows.append(row)
    return rows
