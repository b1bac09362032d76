"""Rooted prize-collecting Steiner tree: moat growing, Steiner subroutines, the
iterative best-of-three wrapper, and a certification layer."""

from .instance import (
    INFINITE,
    InstanceError,
    ParseError,
    PcstInstance,
    Solution,
    Tree,
    evaluate_cost,
    gen_random,
    gen_star,
    make_instance,
    parse_instance,
    random_corpus,
    serialize_instance,
)
from .iterate import DEFAULT_BETA, BetaRangeError, IterTrace, LevelRecord, ipcst
from .moat import MoatRun, replay_check, run_gw
from .steiner import EXACT_DP, MST2, SteinerSolver, steiner_tree

__version__ = "0.1.0"

__all__ = [
    "INFINITE", "InstanceError", "ParseError", "PcstInstance", "Solution", "Tree",
    "evaluate_cost", "gen_random", "gen_star", "make_instance", "parse_instance",
    "random_corpus", "serialize_instance", "DEFAULT_BETA", "BetaRangeError", "IterTrace",
    "LevelRecord", "ipcst", "MoatRun", "replay_check", "run_gw", "EXACT_DP", "MST2",
    "SteinerSolver", "steiner_tree",
]
