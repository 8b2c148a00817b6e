from .dag import (CycleError, Dag, DagError, NodeNameError, build_default_dag,
                  d_separated, default_dag_text, find_cycle, find_minimal_adjustment_set,
                  load_edge_list, parse_edge_list, satisfies_backdoor, validate_dag)
from .effects import (EffectEstimate, SingularDesignError, causal_insights, estimate_effect,
                      variable_table)
from .features import (CAUSAL_FEATURE_NAMES, CausalFeatures, causal_feature_matrix,
                       derive_causal_features)

__all__ = [
    "CycleError", "Dag", "DagError", "NodeNameError", "build_default_dag", "d_separated",
    "default_dag_text", "find_cycle", "find_minimal_adjustment_set", "load_edge_list",
    "parse_edge_list", "satisfies_backdoor", "validate_dag",
    "EffectEstimate", "SingularDesignError", "causal_insights", "estimate_effect",
    "variable_table",
    "CAUSAL_FEATURE_NAMES", "CausalFeatures", "causal_feature_matrix", "derive_causal_features",
]
