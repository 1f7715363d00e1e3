"""Regular path query evaluation with shared reduced transitive closures."""

from .automaton import Nfa, compile_nfa, eval_restricted_rpq, eval_rpq_without_kc
from .engine import (
    EvalStats,
    RtcCache,
    eval_batch_unit,
    evaluate_workload,
    full_sharing,
    join_concat,
    no_sharing,
    rtc_sharing,
)
from .graph import LabeledGraph, PairRelation, generate_rmat, load_edge_list, parse_edge_list
from .oracle import OracleConfig, oracle_eval
from .reduction import compute_rtc, condense, edge_level_reduce, expand_rtc
from .rpq import canonical_text, decompose_clause, parse_rpq, to_dnf

__all__ = [
    "EvalStats",
    "LabeledGraph",
    "Nfa",
    "OracleConfig",
    "PairRelation",
    "RtcCache",
    "canonical_text",
    "compile_nfa",
    "compute_rtc",
    "condense",
    "decompose_clause",
    "edge_level_reduce",
    "eval_batch_unit",
    "eval_restricted_rpq",
    "eval_rpq_without_kc",
    "evaluate_workload",
    "expand_rtc",
    "full_sharing",
    "generate_rmat",
    "join_concat",
    "load_edge_list",
    "no_sharing",
    "oracle_eval",
    "parse_edge_list",
    "parse_rpq",
    "rtc_sharing",
    "to_dnf",
]
