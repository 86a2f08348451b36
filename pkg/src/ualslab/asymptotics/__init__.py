from .generators import (
    BUILTIN_NAMES,
    SequenceGenerator,
    builtin,
    from_lists,
    james_pair,
    jt_level_blocks,
    jt_nodes,
    lp_basis,
    lp_blocks,
)
from .jsm import (
    CoeffNet,
    JsmEstimate,
    TableRow,
    default_schedule,
    equivalence_constant,
    jsm_estimate,
    lp_norm_of,
    matrix_text,
    suppression_constant,
)
from .levelblock import (
    HypothesisError,
    LevelBlockFamily,
    LevelBlockResult,
    build_level_block_family,
    level_block_check,
)
from .oracles import JAMES, JT, Norm, Oracle, lp_oracle

__all__ = [
    "BUILTIN_NAMES", "CoeffNet", "HypothesisError", "JAMES", "JT", "JsmEstimate", "LevelBlockFamily",
    "LevelBlockResult", "Norm", "Oracle", "SequenceGenerator", "TableRow", "build_level_block_family",
    "builtin", "default_schedule", "equivalence_constant", "from_lists", "james_pair", "jsm_estimate",
    "jt_level_blocks", "jt_nodes", "level_block_check", "lp_basis", "lp_blocks", "lp_norm_of",
    "lp_oracle", "matrix_text", "suppression_constant",
]
