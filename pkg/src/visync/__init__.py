"""Synchronizing words for deterministic visibly push-down automata."""
from .automata import (
    BOTTOM,
    ClassReport,
    Dfa,
    Dvpda,
    Kind,
    PartitionedAlphabet,
    StackAlphabet,
    ValidationError,
    cerny,
    classify,
    embed_dfa,
    validate,
)
from .emptiness import AcceptanceMode, StateBudgetExceeded, check_emptiness, is_empty
from .oracle import OracleResult, Outcome, oracle_search, oracle_table
from .semantics import SyncModel, check_witness, run, simulate_all
from .sync import Decision, decide_sync, dfa_pair_sync, sync_empty_pairwise
from .transducer import Vst, classify_vst, trace_sync_vst, trace_sync_vvst, vst_to_dvpda

__all__ = [
    "BOTTOM", "AcceptanceMode", "ClassReport", "Decision", "Dfa", "Dvpda", "Kind",
    "OracleResult", "Outcome", "PartitionedAlphabet", "StackAlphabet", "StateBudgetExceeded",
    "SyncModel", "ValidationError", "Vst", "cerny", "check_emptiness", "check_witness",
    "classify", "classify_vst", "decide_sync", "dfa_pair_sync", "embed_dfa", "is_empty",
    "oracle_search", "oracle_table", "run", "simulate_all", "sync_empty_pairwise",
    "trace_sync_vst", "trace_sync_vvst", "validate", "vst_to_dvpda",
]
