from .james import NormResult, james_example_pair, james_norm_sq, james_norm_sq_blocks, james_norm_sq_brute, realize_pair
from .jtree import closure, jt_norm_sq, jt_norm_sq_brute, jt_norm_sq_closure_brute, segment_value
from .mixed import CalxNorm, MixedValue, QuadSurd, calx_norm_sq, exact_sqrt, mixed_norm, mixed_pq_norm, slot_norms_sq
from .mr import (
    DEFAULT_MU,
    LineSet,
    MrBounds,
    MrFunctional,
    MuCertificate,
    MuSequence,
    RegistryConflict,
    SigmaRegistry,
    SpecialSequence,
    build_special_sequence,
    build_special_vectors,
    check_functional,
    describe,
    detect_special,
    evaluate,
    mr_norm_bounds,
    special_combination,
    structural_upper,
)

__all__ = [
    "CalxNorm", "DEFAULT_MU", "LineSet", "MixedValue", "MrBounds", "MrFunctional", "MuCertificate",
    "MuSequence", "NormResult", "QuadSurd", "RegistryConflict", "SigmaRegistry", "SpecialSequence",
    "build_special_sequence", "build_special_vectors", "calx_norm_sq", "check_functional", "closure",
    "describe", "detect_special", "evaluate", "exact_sqrt", "james_example_pair", "james_norm_sq",
    "james_norm_sq_blocks", "james_norm_sq_brute", "jt_norm_sq", "jt_norm_sq_brute", "jt_norm_sq_closure_brute", "mixed_norm",
    "mixed_pq_norm", "mr_norm_bounds", "realize_pair", "segment_value", "slot_norms_sq",
    "special_combination", "structural_upper",
]
