from .cases import CASES, GapReport, verify_calx, verify_case, verify_ell1, verify_mixed, verify_rank_one
from .lp import LPResult, solve_lp
from .models import (
    INF,
    Codomain,
    ConvexCombination,
    GapResult,
    OperatorModel,
    Pigeonhole,
    coordinate_codomain,
    minimax_gap,
    pigeonhole_witness,
    pointwise_gap,
    rationalize,
    residual_norm,
    slot_codomain,
)

__all__ = [
    "CASES", "Codomain", "ConvexCombination", "GapReport", "GapResult", "INF", "LPResult", "OperatorModel",
    "Pigeonhole", "coordinate_codomain", "minimax_gap", "pigeonhole_witness", "pointwise_gap", "rationalize",
    "residual_norm", "slot_codomain", "solve_lp", "verify_calx", "verify_case", "verify_ell1", "verify_mixed",
    "verify_rank_one",
]
