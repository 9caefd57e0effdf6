from ._relnet import (
    DesignLimitError,
    DesignResult,
    Network,
    RbdExpr,
    ReliabilityEstimate,
    ScenarioSet,
    SchemaError,
    active_difference,
    apply_design,
    estimate_reliability,
    eval_rbd,
    load_network,
    load_rbd,
    parse_network,
    parse_rbd,
    pareto,
    rbd_to_network,
    sample_scenarios,
    solve_design,
)

__all__ = [
    "DesignLimitError",
    "DesignResult",
    "Network",
    "RbdExpr",
    "ReliabilityEstimate",
    "ScenarioSet",
    "SchemaError",
    "active_difference",
    "apply_design",
    "estimate_reliability",
    "eval_rbd",
    "load_network",
    "load_rbd",
    "parse_network",
    "parse_rbd",
    "pareto",
    "rbd_to_network",
    "sample_scenarios",
    "solve_design",
]
