from . import tower
from .finvec import FinVec, as_fraction, combine, fmt_rational, linear_combination, natural, parse_rational, vec_arith
from .io import DocumentError, canonical_json, vec_read, vec_to_doc, vec_write
from .rle import LineInterval, RleVec, Run, from_natural, rle_restrict, rle_sum, to_natural
from .schemes import (
    DYADIC,
    MIXED,
    MRLINE,
    NATURAL,
    Band,
    IndexScheme,
    SchemeError,
    Segment,
    comparable,
    interleaved,
    is_prefix,
)

__all__ = [
    "Band", "DYADIC", "DocumentError", "FinVec", "IndexScheme", "LineInterval", "MIXED", "MRLINE",
    "NATURAL", "RleVec", "Run", "SchemeError", "Segment", "as_fraction", "canonical_json", "combine",
    "comparable", "fmt_rational", "from_natural", "interleaved", "is_prefix", "linear_combination",
    "natural", "parse_rational", "rle_restrict", "rle_sum", "to_natural", "tower", "vec_arith",
    "vec_read", "vec_to_doc", "vec_write",
]
