"""Sign-magnitude floating values with unbounded exponent and rest bits.

A BigFloat keeps a normalized mantissa of exactly fs+1 bits (top bit set)
plus the ordered tail of bits the producing operation generated beyond
that ("rest bits"), plus a sticky flag meaning "a strictly positive amount
below the last explicit bit".  The exact value is therefore

    (-1)^sign * (mant * 2^rlen + rest + sticky*epsilon) * 2^(exp - fs - rlen)

with 0 < epsilon < 1.  Keeping the tail explicit is what lets a later
rounding step (to any smaller fraction size) be a single correct rounding
instead of a double one.

Operations never round on their own: they produce at least working_fs+1
mantissa bits and push everything else into the tail.  Exponent alignment
in add/sub is clamped, with the clamped-away contribution folded into the
tail, so intermediate integers stay small no matter how far apart the
operand exponents are.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import UndefinedResult

RE = "RE"  # round to nearest, ties to even
RZ = "RZ"  # round toward zero

_ROUNDINGS = (RE, RZ)


class BigFloat:
    __slots__ = ("sign", "exp", "mant", "fs", "rest", "rlen", "sticky", "zero")

    def __init__(self, sign, exp, mant, fs, rest=0, rlen=0, sticky=False, zero=False):
        self.sign = sign
        self.exp = exp
        self.mant = mant
        self.fs = fs
        self.rest = rest
        self.rlen = rlen
        self.sticky = sticky
        self.zero = zero

    @staticmethod
    def zero_value(sign: int = 0, fs: int = 0) -> "BigFloat":
        return BigFloat(sign, 0, 0, fs, zero=True)

    @property
    def is_exact(self) -> bool:
        """True when no nonzero bits live in the tail."""
        return self.rest == 0 and not self.sticky

    def check(self) -> None:
        if self.zero:
            assert self.mant == 0 and self.rest == 0 and not self.sticky
        else:
            assert self.mant.bit_length() == self.fs + 1, "unnormalized mantissa"
            assert self.rest >> self.rlen == 0

    def __repr__(self):
        if self.zero:
            return f"BigFloat({'-' if self.sign else '+'}0)"
        tail = ""
        if self.rlen or self.sticky:
            bits = format(self.rest, f"0{self.rlen}b") if self.rlen else ""
            tail = f" rest={bits}{'+' if self.sticky else ''}"
        return (
            f"BigFloat({'-' if self.sign else '+'}{self.mant:#x}"
            f"*2^({self.exp}-{self.fs}){tail})"
        )


def from_scaled_int(sign: int, m: int, e2: int, fs: int, sticky: bool = False) -> BigFloat:
    """Normalize |m| * 2**e2 (m > 0) into a BigFloat with fs+1 mantissa bits.

    A sticky marker needs at least one explicit tail bit above it, otherwise
    a later rounding at fs would be ambiguous; callers arrange that.
    """
    bl = m.bit_length()
    exp = e2 + bl - 1
    extra = bl - (fs + 1)
    if extra <= 0:
        assert not sticky, "sticky with no explicit tail bit"
        return BigFloat(sign, exp, m << -extra, fs, 0, 0, False)
    rest = m & ((1 << extra) - 1)
    return BigFloat(sign, exp, m >> extra, fs, rest, extra, sticky)


def from_fraction(x: Fraction, fs: int) -> BigFloat:
    """Round-free conversion: fs+1 quotient bits plus a sticky marker."""
    if x == 0:
        return BigFloat.zero_value(0, fs)
    sign = 1 if x < 0 else 0
    p, q = abs(x.numerator), x.denominator
    # shift so the quotient has at least fs+2 bits
    shift = fs + 2 - (p.bit_length() - q.bit_length())
    if shift < 0:
        shift = 0
    m, r = divmod(p << shift, q)
    return from_scaled_int(sign, m, -shift, fs, r != 0)


def to_fraction(a: BigFloat) -> Fraction:
    """Exact value; the tail must be empty (round first)."""
    if a.zero:
        return Fraction(0)
    assert a.is_exact, "to_fraction on a value with rest bits"
    v = Fraction(a.mant, 1) * Fraction(2) ** (a.exp - a.fs)
    return -v if a.sign else v


def round_to(a: BigFloat, fs: int, mode: str) -> BigFloat:
    """Round to fs fraction bits; RE inspects guard and sticky, RZ truncates."""
    assert mode in _ROUNDINGS
    if a.zero:
        return BigFloat.zero_value(a.sign, fs)
    m = (a.mant << a.rlen) | a.rest
    drop = a.fs + a.rlen - fs
    if drop <= 0:
        assert not a.sticky, "cannot widen past a sticky marker"
        return BigFloat(a.sign, a.exp, m << -drop, fs)
    kept = m >> drop
    tail = m & ((1 << drop) - 1)
    if mode == RE:
        guard = (tail >> (drop - 1)) & 1
        rest_sticky = (tail & ((1 << (drop - 1)) - 1)) != 0 or a.sticky
        if guard and (rest_sticky or (kept & 1)):
            kept += 1
    exp = a.exp
    if kept.bit_length() == fs + 2:  # carry: mantissa reached 2.0
        kept >>= 1
        exp += 1
    return BigFloat(a.sign, exp, kept, fs)


def fadd(a: BigFloat, b: BigFloat, working_fs: int) -> BigFloat:
    """Exact-as-far-as-kept addition at working_fs fraction bits."""
    assert a.is_exact and b.is_exact, "operands must be tail-free"
    if a.zero and b.zero:
        # +0 plus -0 is +0 (both roundings we support are nearest/toward-zero)
        sign = a.sign & b.sign
        return BigFloat.zero_value(sign, working_fs)
    if a.zero:
        return _requant(b, working_fs)
    if b.zero:
        return _requant(a, working_fs)
    za = a.exp - a.fs
    zb = b.exp - b.fs
    lim = working_fs + 6
    if za < zb or (za == zb and a.mant < b.mant):
        a, b = b, a
        za, zb = zb, za
    d = za - zb
    if d > lim + b.fs + 1:
        # b lies entirely below the kept window: |b| < one unit at za-lim,
        # so the magnitude is floor(|a| +/- |b|) at that scale plus a tail
        m = a.mant << lim
        if a.sign != b.sign:
            m -= 1
        return from_scaled_int(a.sign, m, za - lim, working_fs, True)
    sa = -1 if a.sign else 1
    sb = -1 if b.sign else 1
    s = (sa * a.mant << d) + sb * b.mant
    if s == 0:
        return BigFloat.zero_value(0, working_fs)
    sign = 1 if s < 0 else 0
    return from_scaled_int(sign, abs(s), zb, working_fs, False)


def fsub(a: BigFloat, b: BigFloat, working_fs: int) -> BigFloat:
    nb = BigFloat(1 - b.sign, b.exp, b.mant, b.fs, b.rest, b.rlen, b.sticky, b.zero)
    return fadd(a, nb, working_fs)


def fmul(a: BigFloat, b: BigFloat, working_fs: int) -> BigFloat:
    assert a.is_exact and b.is_exact
    sign = a.sign ^ b.sign
    if a.zero or b.zero:
        return BigFloat.zero_value(sign, working_fs)
    m = a.mant * b.mant
    return from_scaled_int(sign, m, (a.exp - a.fs) + (b.exp - b.fs), working_fs)


def fdiv(a: BigFloat, b: BigFloat, working_fs: int) -> BigFloat:
    assert a.is_exact and b.is_exact
    if b.zero:
        raise UndefinedResult("division by zero")
    sign = a.sign ^ b.sign
    if a.zero:
        return BigFloat.zero_value(sign, working_fs)
    # working_fs+3 explicit quotient bits plus a sticky remainder marker
    shift = working_fs + 3 + b.mant.bit_length() - a.mant.bit_length()
    if shift < 0:
        shift = 0
    q, r = divmod(a.mant << shift, b.mant)
    return from_scaled_int(sign, q, (a.exp - a.fs) - (b.exp - b.fs) - shift,
                           working_fs, r != 0)


def fsqrt(a: BigFloat, working_fs: int) -> BigFloat:
    import math

    assert a.is_exact
    if a.zero:
        return BigFloat.zero_value(a.sign, working_fs)
    if a.sign:
        raise UndefinedResult("square root of a negative value")
    # scale to an even exponent with enough bits for working_fs+2 root bits
    e2 = a.exp - a.fs
    shift = 2 * (working_fs + 3) - a.mant.bit_length()
    if shift < 0:
        shift = 0
    if (e2 - shift) & 1:
        shift += 1
    n = a.mant << shift
    s = math.isqrt(n)
    return from_scaled_int(0, s, (e2 - shift) // 2, working_fs, s * s != n)


def fc_arith(op: str, a: BigFloat, b: BigFloat, working_fs: int) -> BigFloat:
    if op == "add":
        return fadd(a, b, working_fs)
    if op == "sub":
        return fsub(a, b, working_fs)
    if op == "mul":
        return fmul(a, b, working_fs)
    if op == "div":
        return fdiv(a, b, working_fs)
    raise ValueError(f"unknown op {op!r}")


def _requant(a: BigFloat, fs: int) -> BigFloat:
    if a.zero:
        return BigFloat.zero_value(a.sign, fs)
    return from_scaled_int(a.sign, a.mant, a.exp - a.fs, fs, False)
