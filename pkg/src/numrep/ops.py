"""Format-generic arithmetic and elementary functions, plus the accuracy metric.

nrs_arith decodes both operands, runs the operation on the working float
engine at the format's working precision (tapered formats work at the full
bit width, fixed float formats at fs+2 guard bits, fixed point wide enough
to be exact through the grid), and encodes with the format's own policy.
Special operands absorb: NaN/NaR/NR in, error value out.

nrs_fun computes at extended precision (working fraction size + 32 bits,
one retry 32 bits higher when the rounding decision is ambiguous) and
rounds once.  Roots come from integer Newton with an exact remainder
marker, so perfect powers round exactly; exp/ln/sin come from the reduced
fixed-point series kernels with tracked error bounds.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from . import kernels
from .bigfloat import RE, RZ
from .exact import UndefinedResult, int_nthroot, log10_int
from .formats import (
    FIN,
    INF,
    NAR,
    NR,
    QNAN,
    SNAN,
    ZERO,
    Descriptor,
    NOT_REPRESENTABLE,
    codec,
    decode_raw,
    fit_scaled,
)

_LN10 = math.log(10)
_LOG10_LN10 = math.log10(_LN10)


def working_fs(desc: Descriptor) -> int:
    """Working-precision fraction size for in-format arithmetic."""
    k = desc.kind
    if k in ("posit", "morris", "morrisheb", "morrisbias", "morrisunary"):
        return desc.width  # tapered formats work at the bit width
    if k in ("floatp", "ieee754"):
        return desc.p2 + 2
    if k == "fixedp":
        return 2 * (desc.p1 + desc.p2) + 4  # wide enough to be exact-or-sticky
    raise ValueError(f"no working precision for {k}")


def error_value(desc: Descriptor):
    """The format's error result (NaN/NaR/NR pattern, or the NR marker)."""
    k = desc.kind
    c = codec(desc)
    if k == "ieee754":
        return c.qnan_pattern()
    if k == "posit":
        return 1 << (desc.width - 1)  # NaR
    if k == "morris":
        return (1 << desc.width) - 1  # NaN, all ones
    if k in ("morrisheb", "morrisbias", "morrisunary"):
        return 1 << (desc.width - 1)  # NR pattern
    return NOT_REPRESENTABLE  # floatp / fixedp have no error pattern


def _div_zero_value(desc: Descriptor, sign: int):
    k = desc.kind
    if k in ("ieee754", "floatp"):
        return codec(desc).inf_pattern(sign)
    if k == "posit":
        return 1 << (desc.width - 1)
    return error_value(desc)


def _zero_result(desc: Descriptor, sign: int):
    k = desc.kind
    if k in ("ieee754", "floatp"):
        return codec(desc).zero_pattern(sign)
    return codec(desc).zero_pattern(0)


def _inf_result(desc: Descriptor, sign: int):
    if desc.kind in ("ieee754", "floatp"):
        return codec(desc).inf_pattern(sign)
    raise AssertionError("infinity outside ieee754/floatp")


_ERROR_CLASSES = (QNAN, SNAN, NAR, NR)


def nrs_arith(desc: Descriptor, op: str, pa: int, pb: int):
    """Add/sub/mul/div two patterns; returns a pattern or the NR marker."""
    ca, sa, ma, ea = decode_raw(desc, pa)
    cb, sb, mb, eb = decode_raw(desc, pb)
    if op == "sub":
        sb ^= 1
        op = "add"
    if ca in _ERROR_CLASSES or cb in _ERROR_CLASSES:
        return error_value(desc)
    if ca == INF or cb == INF:
        return _inf_arith(desc, op, ca, sa, cb, sb)
    if ca == ZERO or cb == ZERO:
        return _zero_arith(desc, op, ca, sa, ma, ea, cb, sb, mb, eb)
    # finite path: exact scaled-integer arithmetic, then one format rounding
    if op == "add":
        z = min(ea, eb)
        s = ((-ma if sa else ma) << (ea - z)) + ((-mb if sb else mb) << (eb - z))
        if s == 0:
            return _zero_result(desc, 0)
        sign = 1 if s < 0 else 0
        p, _ = fit_scaled(desc, sign, abs(s), z, False)
        return p
    if op == "mul":
        p, _ = fit_scaled(desc, sa ^ sb, ma * mb, ea + eb, False)
        return p
    if op == "div":
        shift = working_fs(desc) + 3 + mb.bit_length() - ma.bit_length()
        if shift < 0:
            shift = 0
        q, r = divmod(ma << shift, mb)
        p, _ = fit_scaled(desc, sa ^ sb, q, ea - eb - shift, r != 0)
        return p
    raise ValueError(f"unknown op {op!r}")


def _inf_arith(desc, op, ca, sa, cb, sb):
    if desc.kind not in ("ieee754", "floatp"):
        raise AssertionError("infinity operand outside ieee754/floatp")
    if op == "add":
        if ca == INF and cb == INF:
            if sa == sb:
                return _inf_result(desc, sa)
            return error_value(desc)  # inf - inf
        return _inf_result(desc, sa if ca == INF else sb)
    if op == "mul":
        if ca == ZERO or cb == ZERO:
            return error_value(desc)  # 0 * inf
        return _inf_result(desc, sa ^ sb)
    if op == "div":
        if ca == INF and cb == INF:
            return error_value(desc)
        if ca == INF:
            return _inf_result(desc, sa ^ sb)
        return _zero_result(desc, sa ^ sb)  # finite / inf
    raise ValueError(op)


def _zero_arith(desc, op, ca, sa, ma, ea, cb, sb, mb, eb):
    """Zero-operand cases; None means fall through to the finite path."""
    if op == "add":
        if ca == ZERO and cb == ZERO:
            # +0 plus -0 is +0 under RE and RZ; -0 only from (-0) + (-0)
            return _zero_result(desc, sa & sb)
        if ca == ZERO:
            p, _ = fit_scaled(desc, sb, mb, eb, False)
            return p
        p, _ = fit_scaled(desc, sa, ma, ea, False)
        return p
    if op == "mul":
        return _zero_result(desc, sa ^ sb)
    if op == "div":
        if ca == ZERO and cb == ZERO:
            return error_value(desc)
        if cb == ZERO:
            return _div_zero_value(desc, sa ^ sb)
        return _zero_result(desc, sa ^ sb)
    raise ValueError(op)


# --------------------------------------------------------------------------
# elementary functions

def _fit_interval(desc, sign, lo, hi, e2):
    """Round an interval [lo, hi]*2^e2; (pattern, unambiguous)."""
    if lo <= 0:
        return None, False  # interval straddles zero: precision too low
    plo, _ = fit_scaled(desc, sign, lo, e2, True)
    phi, _ = fit_scaled(desc, sign, hi, e2, False)
    return (plo, True) if plo == phi else (phi, False)


def nrs_fun(desc: Descriptor, fun: str, pa: int, n: int | None = None,
            y: Fraction | None = None):
    """sqrt, nth_root(n), inverse, exp, ln, sin, pow(y) on one pattern."""
    ca, sa, ma, ea = decode_raw(desc, pa)
    if ca in _ERROR_CLASSES:
        return error_value(desc)
    if ca == INF:
        return _inf_fun(desc, fun, sa, y)
    if ca == ZERO:
        return _zero_fun(desc, fun, sa, n, y)
    if fun == "inverse":
        return nrs_arith_value_div(desc, 1, 0, 0, sa, ma, ea)
    if fun == "sqrt":
        fun, n = "nth_root", 2
    if fun == "nth_root":
        if sa and n % 2 == 0:
            return error_value(desc)
        return _root(desc, sa, ma, ea, n)
    if fun == "exp":
        return _transcendental(desc, "exp", sa, ma, ea)
    if fun == "ln":
        if sa:
            return error_value(desc)
        if _is_one(ma, ea):
            return _zero_result(desc, 0)  # ln(1) = 0 exactly
        return _transcendental(desc, "ln", sa, ma, ea)
    if fun == "sin":
        return _transcendental(desc, "sin", sa, ma, ea)
    if fun == "pow":
        return _pow(desc, sa, ma, ea, Fraction(y))
    raise ValueError(f"unknown function {fun!r}")


def _inf_fun(desc, fun, sa, y):
    if fun in ("sqrt", "nth_root", "exp", "pow"):
        if sa and fun in ("sqrt", "nth_root"):
            return error_value(desc)
        if fun == "exp" and sa:
            return _zero_result(desc, 0)
        return _inf_result(desc, 0 if fun == "exp" else sa)
    if fun == "inverse":
        return _zero_result(desc, sa)
    return error_value(desc)  # ln(inf)? sin(inf) undefined


def _zero_fun(desc, fun, sa, n, y):
    if fun in ("sqrt", "nth_root", "sin"):
        return _zero_result(desc, sa)
    if fun == "exp":
        p, _ = fit_scaled(desc, 0, 1, 0, False)
        return p  # e^0 = 1
    if fun == "inverse":
        return _div_zero_value(desc, sa)
    if fun == "ln":
        return error_value(desc)
    if fun == "pow":
        if y == 0:
            p, _ = fit_scaled(desc, 0, 1, 0, False)
            return p
        return _zero_result(desc, 0) if y > 0 else _div_zero_value(desc, 0)
    raise ValueError(fun)


def _is_one(m: int, e2: int) -> bool:
    return e2 <= 0 and m == (1 << -e2)


def nrs_arith_value_div(desc, m1, e1, s1, s2, m2, e2):
    """value-level division used by inverse: (m1*2^e1)/(m2*2^e2)."""
    wfs = working_fs(desc)
    shift = wfs + 3 + m2.bit_length() - m1.bit_length()
    if shift < 0:
        shift = 0
    q, r = divmod(m1 << shift, m2)
    p, _ = fit_scaled(desc, s1 ^ s2, q, e1 - e2 - shift, r != 0)
    return p


def _root(desc, sign, m, e2, n):
    wfs = working_fs(desc) + 32
    # scale so the exponent is divisible by n and the root has wfs+3 bits
    shift = n * (wfs + 3) - m.bit_length()
    if shift < 0:
        shift = 0
    shift += (e2 - shift) % n
    scaled = m << shift
    root, exact = int_nthroot(scaled, n)
    p, _ = fit_scaled(desc, sign, root, (e2 - shift) // n, not exact)
    return p


def _transcendental(desc, fun, sign, m, e2):
    if fun == "exp":
        if _exp_overflows(desc, sign, m, e2):
            return _overflow_result(desc, 0)
        if _exp_underflows(desc, sign, m, e2):
            return _underflow_tiny(desc)
    prec = working_fs(desc) + 32
    p = None
    for _ in range(4):
        if fun == "exp":
            val, rexp, err = kernels.exp_scaled(sign, m, e2, prec)
            rsign = 0
        elif fun == "ln":
            rsign, val, rexp, err = kernels.ln_scaled(m, e2, prec)
        else:
            rsign, val, rexp, err = kernels.sin_scaled(sign, m, e2, prec)
        if val > err:
            p, ok = _fit_interval(desc, rsign, val - err, val + err, rexp)
            if ok:
                return p
        prec *= 2  # ambiguous rounding (or unresolved sign): retry wider
    if p is None:
        p, _ = fit_scaled(desc, rsign, max(val, 1), rexp, True)
    return p  # documented: not a correctly-rounded guarantee


def _pow(desc, sign, m, e2, y: Fraction):
    if y.denominator == 1:
        k = y.numerator
        if k == 0:
            p, _ = fit_scaled(desc, 0, 1, 0, False)
            return p
        rsign = sign if k % 2 else 0
        mk = m ** abs(k)
        ek = e2 * abs(k)
        if k > 0:
            p, _ = fit_scaled(desc, rsign, mk, ek, False)
            return p
        return nrs_arith_value_div(desc, 1, 0, 0, rsign, mk, ek)
    if sign:
        return error_value(desc)
    if _is_one(m, e2):
        p, _ = fit_scaled(desc, 0, 1, 0, False)
        return p
    prec = working_fs(desc) + 32
    p = None
    for _ in range(4):
        lsign, lval, lexp, lerr = kernels.ln_scaled(m, e2, prec + 8)
        assert lexp == -(prec + 8)
        # y * ln(x) as fixed point at prec+8 bits
        mag = abs(y.numerator) * lval // y.denominator
        xerr = abs(y.numerator) * (lerr + 1) // y.denominator + 2
        xf = -mag if lsign ^ (y < 0) else mag
        val, rexp, err = kernels._exp_from_fixed(xf, xerr, prec + 8, prec)
        if val > err:
            p, ok = _fit_interval(desc, 0, val - err, val + err, rexp)
            if ok:
                return p
        prec *= 2
    if p is None:
        p, _ = fit_scaled(desc, 0, max(val, 1), rexp, True)
    return p


def _exp_overflows(desc, sign, m, e2):
    if sign:
        return False
    # e^x overflows when x > (emax+2) ln2; quick log2-level test
    approx_log2x = e2 + m.bit_length()
    return approx_log2x > max(_emax_bits(desc), 8)


def _exp_underflows(desc, sign, m, e2):
    if not sign:
        return False
    approx_log2x = e2 + m.bit_length()
    return approx_log2x > max(_emax_bits(desc), 8)


def _emax_bits(desc):
    c = codec(desc)
    if hasattr(c, "fmt"):
        return int(c.fmt.emax).bit_length() + 2
    return int(getattr(c, "emax", 64)).bit_length() + 2


def _overflow_result(desc, sign):
    k = desc.kind
    c = codec(desc)
    if k in ("ieee754", "floatp"):
        if desc.rounding == RZ:
            return c.max_finite(sign)
        return c.inf_pattern(sign)
    if k == "fixedp":
        return NOT_REPRESENTABLE
    return c.fmt._overflow(sign)  # posit clamps; morris family goes to NR


def _underflow_tiny(desc):
    # e^(large negative): a positive value below every representable
    k = desc.kind
    c = codec(desc)
    if k == "posit":
        e, f = c.fmt.min_value()
        return c.fmt.assemble(0, e, f)
    return _zero_result(desc, 0)


# --------------------------------------------------------------------------
# decimal accuracy

class AccuracyResult(NamedTuple):
    kind: str   # "exact" | "digits" | "wrong"
    digits: float

    @property
    def is_exact(self):
        return self.kind == "exact"


EXACT = AccuracyResult("exact", math.inf)
WRONG = AccuracyResult("wrong", 0.0)

ACCURACY_CAP = 16.0


def decimal_accuracy(computed, reference: Fraction) -> AccuracyResult:
    """-log10 |log10(computed/reference)| digits, capped to [0, 16].

    `computed` may be a Fraction or any non-Fraction marker for a special
    result (NaN/NaR/NR/infinity), which scores Wrong.  Sign mismatches and
    zero-vs-nonzero score Wrong; equality is Exact.
    """
    if not isinstance(computed, Fraction):
        return WRONG
    if computed == reference:
        return EXACT
    if computed == 0 or reference == 0:
        return WRONG
    if (computed < 0) != (reference < 0):
        return WRONG
    return AccuracyResult("digits", _digits_fraction(computed, reference))


_LOG10_2 = math.log10(2)


def _digits_from_log(log10_l: float) -> float:
    d = -log10_l
    if d < 0.0:
        return 0.0
    return min(d, ACCURACY_CAP)


def _digits_fraction(c: Fraction, r: Fraction) -> float:
    t = c / r - 1
    lt = log10_int(abs(t.numerator)) - log10_int(t.denominator)
    if lt < -6:
        # |log10(1+t)| ~ |t|/ln10 with relative error below |t|
        return _digits_from_log(lt - _LOG10_LN10)
    # log10(c/r) from exact integer logs; fine whenever the ratio is not
    # extremely close to 1, which lt >= -6 guarantees
    lratio = (log10_int(abs(c.numerator)) - log10_int(c.denominator)) - (
        log10_int(abs(r.numerator)) - log10_int(r.denominator)
    )
    if abs(lratio) > 0.1:
        return _digits_from_log(math.log10(abs(lratio)))
    tf = t.numerator / t.denominator  # ratio near 1: |tf| < 0.26
    return _digits_from_log(math.log10(abs(math.log1p(tf)) / _LN10))


def digits_scaled(cm: int, ce: int, rm: int, re_: int) -> float:
    """decimal_accuracy digits for same-sign magnitudes cm*2^ce vs rm*2^re.

    Exactness and sign checks happen in the caller; this only measures.
    """
    z = min(ce, re_)
    num = (cm << (ce - z)) - (rm << (re_ - z))  # t = num / (rm * 2^(re-z))
    if num == 0:
        return math.inf
    lt = log10_int(abs(num)) - log10_int(rm) - (re_ - z) * _LOG10_2
    if lt < -6:
        return _digits_from_log(lt - _LOG10_LN10)
    lratio = (log10_int(cm) + ce * _LOG10_2) - (log10_int(rm) + re_ * _LOG10_2)
    if abs(lratio) > 0.1:
        return _digits_from_log(math.log10(abs(lratio)))
    tf = 10.0 ** lt
    if num < 0:
        tf = -tf
    return _digits_from_log(math.log10(abs(math.log1p(tf)) / _LN10))
