"""Finite number representation systems: codecs, oracles, and benchmarks.

The package models bit-level number formats (IEEE 754 style floats, a
bias-exponent float without subnormals, sign-magnitude fixed point, posits,
and four tapered-float variants whose exponent field width varies per
value), provides exact rational oracles for every computation, and ships
the evaluation harness that measures them: dynamic range, value density,
exhaustive unary/binary accuracy sweeps, and a set of classic
numerical-robustness benchmarks.
"""

from .bigfloat import RE, RZ, BigFloat
from .exact import UndefinedResult, parse_rational, rat_arith, rat_pow, \
    rat_root_approx, taylor_eval
from .formats import (
    Decoded,
    Descriptor,
    NOT_REPRESENTABLE,
    UnorderedComparison,
    bit_compare,
    decode,
    decode_raw,
    encode,
    enumerate_patterns,
    parse_descriptor,
)
from .ops import AccuracyResult, decimal_accuracy, nrs_arith, nrs_fun
from .bench import (
    SweepStats,
    binary_sweep,
    density_histogram,
    dynamic_range,
    golden_zone_count,
    throughput,
    unary_sweep,
)

__all__ = [
    "RE", "RZ", "BigFloat", "UndefinedResult", "parse_rational", "rat_arith",
    "rat_pow", "rat_root_approx", "taylor_eval", "Decoded", "Descriptor",
    "NOT_REPRESENTABLE", "UnorderedComparison", "bit_compare", "decode",
    "decode_raw", "encode", "enumerate_patterns", "parse_descriptor",
    "AccuracyResult", "decimal_accuracy", "nrs_arith", "nrs_fun",
    "SweepStats", "binary_sweep", "density_histogram", "dynamic_range",
    "golden_zone_count", "throughput", "unary_sweep",
]

__version__ = "0.1.0"
