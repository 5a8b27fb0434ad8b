"""Descriptors and bit-level codecs for every concrete format.

decode is total: all 2^width patterns map to exactly one class.  encode is
nearest-representable under the descriptor's rounding mode, with each
format's own underflow/overflow policy.  Formats with duplicate encodings
(morris, and morrisheb when the exponent is zero) encode to a canonical
pattern choice, documented in `tapered`.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from . import bigfloat
from .bigfloat import RE, RZ, BigFloat
from .tapered import (
    NOT_REPRESENTABLE,
    MorrisBiasFormat,
    MorrisFormat,
    MorrisHebFormat,
    MorrisUnaryFormat,
    PositFormat,
)

# decoded classes
FIN = 0
ZERO = 1
INF = 2
QNAN = 3
SNAN = 4
NAR = 5
NR = 6

CLASS_NAMES = {
    FIN: "finite", ZERO: "zero", INF: "inf", QNAN: "qnan",
    SNAN: "snan", NAR: "nar", NR: "nr",
}

KINDS = {
    "fixedp": 2, "floatp": 2, "ieee754": 2, "posit": 2,
    "morris": 2, "morrisheb": 2, "morrisbias": 2, "morrisunary": 1,
    "rational": 0,
}


class UnorderedComparison(ValueError):
    """bit_compare got a special operand or an unordered format."""


@dataclass(frozen=True)
class Descriptor:
    kind: str
    p1: int | None
    p2: int | None
    rounding: str | None

    @property
    def width(self) -> int:
        k = self.kind
        if k == "fixedp":
            return self.p1 + self.p2
        if k in ("floatp", "ieee754"):
            return 1 + self.p1 + self.p2
        if k in ("posit", "morris", "morrisheb", "morrisbias", "morrisunary"):
            return self.p1
        raise ValueError(f"{k} has no bit width")

    @property
    def text(self) -> str:
        parts = [self.kind]
        if self.p1 is not None:
            parts.append(str(self.p1))
        if self.p2 is not None:
            parts.append(str(self.p2))
        if self.rounding is not None:
            parts.append(self.rounding)
        return ":".join(parts)

    def __str__(self):
        return self.text


def parse_descriptor(text: str) -> Descriptor:
    toks = text.strip().split(":")
    kind = toks[0]
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    nparams = KINDS[kind]
    if kind == "rational":
        if len(toks) == 1 or (len(toks) == 2 and toks[1] in (RE, RZ)):
            return Descriptor("rational", None, None, None)
        raise ValueError(f"bad rational descriptor {text!r}")
    if len(toks) != nparams + 2:
        raise ValueError(
            f"{kind} takes {nparams} parameter(s) plus a rounding mode: {text!r}"
        )
    params = []
    for t in toks[1:-1]:
        if not t.isdigit():
            raise ValueError(f"bad parameter {t!r} in {text!r}")
        params.append(int(t))
    rounding = toks[-1]
    if rounding not in (RE, RZ):
        raise ValueError(f"bad rounding {rounding!r} in {text!r}")
    p1 = params[0]
    p2 = params[1] if len(params) > 1 else None
    d = Descriptor(kind, p1, p2, rounding)
    _validate(d)
    return d


def _validate(d: Descriptor) -> None:
    k = d.kind
    if k == "fixedp":
        if d.p1 < 1 or d.p2 < 0:
            raise ValueError(f"bad fixedp sizes in {d.text!r}")
    elif k in ("floatp", "ieee754"):
        if d.p1 < 2 or d.p2 < 1:
            raise ValueError(f"bad exponent/fraction sizes in {d.text!r}")
    elif k == "posit":
        if d.p1 < 3 or d.p2 < 0:
            raise ValueError(f"bad posit sizes in {d.text!r}")
    elif k in ("morris", "morrisheb"):
        if d.p2 < 1 or d.p1 < d.p2 + 3:
            raise ValueError(f"bad morris sizes in {d.text!r}")
    elif k == "morrisbias":
        if d.p2 < 1 or d.p1 < d.p2 + 2:
            raise ValueError(f"bad morris sizes in {d.text!r}")
    elif k == "morrisunary":
        if d.p1 < 4:
            raise ValueError(f"bad size in {d.text!r}")


@dataclass
class Decoded:
    cls: int
    sign: int = 0
    value: Fraction | None = None
    fields: dict | None = None

    @property
    def class_name(self):
        return CLASS_NAMES[self.cls]


# --------------------------------------------------------------------------
# shared rounding at an absolute bit position

def _round_at(m: int, e2: int, pos: int, mode: str, sticky: bool):
    """Round m * 2^e2 (+ sticky eps) at 2^pos: (q, inexact), result q * 2^pos."""
    shift = pos - e2
    if shift <= 0:
        return m << -shift, sticky
    q = m >> shift
    tail = m & ((1 << shift) - 1)
    inexact = tail != 0 or sticky
    if mode == RE and shift >= 1:
        guard = (m >> (shift - 1)) & 1
        low = (tail & ((1 << (shift - 1)) - 1)) != 0 or sticky
        if guard and (low or (q & 1)):
            q += 1
    return q, inexact


# --------------------------------------------------------------------------
# fixed-layout codecs

class _FixedpCodec:
    """Sign bit plus magnitude, scaled by 2^-fs.

    The value is kept as a signed magnitude (same as the unbounded integer
    type underneath), so the range is symmetric and there are two zero
    patterns; overflow has no pattern and becomes NR.
    """

    def __init__(self, d: Descriptor):
        self.int_size, self.fs = d.p1, d.p2
        self.width = d.width
        self.sign_bit = 1 << (self.width - 1)
        self.limit = self.sign_bit - 1

    def decode_raw(self, p: int):
        sign = 1 if p & self.sign_bit else 0
        mag = p & (self.sign_bit - 1)
        if mag == 0:
            return (ZERO, sign, 0, 0)
        return (FIN, sign, mag, -self.fs)

    def fit(self, sign, m, e2, sticky, mode):
        q, inexact = _round_at(m, e2, -self.fs, mode, sticky)
        if q == 0:
            return 0, not inexact
        if q > self.limit:
            return NOT_REPRESENTABLE, False
        return (self.sign_bit | q) if sign else q, not inexact

    def zero_pattern(self, sign):
        return 0


class _FloatpCodec:
    def __init__(self, d: Descriptor):
        self.es, self.fs = d.p1, d.p2
        self.width = d.width
        self.bias = (1 << (self.es - 1)) - 1
        self.emin = -self.bias
        self.emax = (1 << self.es) - 1 - self.bias
        self.body_mask = (1 << (self.es + self.fs)) - 1

    def _pat(self, sign, efield, frac):
        return (sign << (self.es + self.fs)) | (efield << self.fs) | frac

    def inf_pattern(self, sign):
        return self._pat(sign, (1 << self.es) - 1, (1 << self.fs) - 1)

    def zero_pattern(self, sign):
        return self._pat(sign, 0, 0)

    def max_finite(self, sign):
        return self._pat(sign, (1 << self.es) - 1, (1 << self.fs) - 2)

    def decode_raw(self, p: int):
        sign = p >> (self.es + self.fs)
        body = p & self.body_mask
        if body == 0:
            return (ZERO, sign, 0, 0)
        if body == self.body_mask:
            return (INF, sign, 0, 0)
        efield = body >> self.fs
        frac = body & ((1 << self.fs) - 1)
        return (FIN, sign, (1 << self.fs) | frac, efield - self.bias - self.fs)

    def fit(self, sign, m, e2, sticky, mode):
        e = e2 + m.bit_length() - 1
        if e < self.emin:
            # only 0 and minpos = 2^emin*(1+2^-fs) live below here
            if mode == RZ:
                return self.zero_pattern(sign), False
            minpos_m = (1 << self.fs) + 1
            c = _cmp(m, e2, sticky, minpos_m, self.emin - self.fs - 1)
            if c > 0:
                return self._pat(sign, 0, 1), False
            return self.zero_pattern(sign), False
        q, inexact = _round_at(m, e2, e - self.fs, mode, sticky)
        if q.bit_length() == self.fs + 2:
            q >>= 1
            e += 1
        if e > self.emax:
            if mode == RZ:
                return self.max_finite(sign), False
            return self.inf_pattern(sign), False
        frac = q - (1 << self.fs)
        efield = e - self.emin
        if efield == 0 and frac == 0:
            # the would-be pattern is the zero encoding: 2^emin itself is a
            # hole; nearest is the fraction-1 neighbour, RZ truncates to 0
            if mode == RZ:
                return self.zero_pattern(sign), False
            return self._pat(sign, 0, 1), False
        p = self._pat(sign, efield, frac)
        if p == self.inf_pattern(sign):
            # rounded into the all-ones encoding: treat as overflow
            if mode == RZ:
                return self.max_finite(sign), False
            return self.inf_pattern(sign), False
        return p, not inexact


class _IeeeCodec:
    def __init__(self, d: Descriptor):
        self.es, self.fs = d.p1, d.p2
        self.width = d.width
        self.bias = (1 << (self.es - 1)) - 1
        self.emin = 1 - self.bias           # smallest normal exponent
        self.emax = self.bias               # largest normal exponent
        self.efield_max = (1 << self.es) - 1

    def _pat(self, sign, efield, frac):
        return (sign << (self.es + self.fs)) | (efield << self.fs) | frac

    def qnan_pattern(self):
        return self._pat(0, self.efield_max, 1 << (self.fs - 1))

    def inf_pattern(self, sign):
        return self._pat(sign, self.efield_max, 0)

    def zero_pattern(self, sign):
        return self._pat(sign, 0, 0)

    def max_finite(self, sign):
        return self._pat(sign, self.efield_max - 1, (1 << self.fs) - 1)

    def decode_raw(self, p: int):
        sign = p >> (self.es + self.fs)
        efield = (p >> self.fs) & self.efield_max
        frac = p & ((1 << self.fs) - 1)
        if efield == self.efield_max:
            if frac == 0:
                return (INF, sign, 0, 0)
            if frac >> (self.fs - 1):
                return (QNAN, sign, 0, 0)
            return (SNAN, sign, 0, 0)
        if efield == 0:
            if frac == 0:
                return (ZERO, sign, 0, 0)
            return (FIN, sign, frac, self.emin - self.fs)  # gradual underflow
        return (FIN, sign, (1 << self.fs) | frac, efield - self.bias - self.fs)

    def fit(self, sign, m, e2, sticky, mode):
        e = e2 + m.bit_length() - 1
        if e >= self.emin:
            q, inexact = _round_at(m, e2, e - self.fs, mode, sticky)
            if q.bit_length() == self.fs + 2:
                q >>= 1
                e += 1
            if e > self.emax:
                if mode == RZ:
                    return self.max_finite(sign), False
                return self.inf_pattern(sign), False
            return self._pat(sign, e - self.emin + 1, q - (1 << self.fs)), not inexact
        # subnormal range: fixed rounding position
        q, inexact = _round_at(m, e2, self.emin - self.fs, mode, sticky)
        if q == 0:
            return self.zero_pattern(sign), False
        if q < (1 << self.fs):
            return self._pat(sign, 0, q), not inexact
        return self._pat(sign, 1, 0), not inexact  # rounded up to min normal


def _cmp(m, e2, sticky, n, z):
    from .tapered import _cmp_scaled

    return _cmp_scaled(m, e2, sticky, n, z)


class _TaperedCodec:
    def __init__(self, fmt, width):
        self.fmt = fmt
        self.width = width

    def decode_raw(self, p: int):
        t = self.fmt.decode(p)
        if t[0] == "zero":
            return (ZERO, 0, 0, 0)
        if t[0] == "nar":
            return (NAR, 0, 0, 0)
        if t[0] == "nr":
            return (NR, 0, 0, 0)
        if t[0] == "nan":
            return (QNAN, 0, 0, 0)
        sign, e, frac, fs = t
        return (FIN, sign, (1 << fs) | frac, e - fs)

    def fit(self, sign, m, e2, sticky, mode):
        return self.fmt.fit(sign, m, e2, sticky, mode)

    def zero_pattern(self, sign):
        return self.fmt.zero_pattern


@functools.lru_cache(maxsize=None)
def codec(desc: Descriptor):
    k = desc.kind
    if k == "fixedp":
        return _FixedpCodec(desc)
    if k == "floatp":
        return _FloatpCodec(desc)
    if k == "ieee754":
        return _IeeeCodec(desc)
    if k == "posit":
        return _TaperedCodec(PositFormat(desc.p1, desc.p2), desc.p1)
    if k == "morris":
        return _TaperedCodec(MorrisFormat(desc.p1, desc.p2), desc.p1)
    if k == "morrisheb":
        return _TaperedCodec(MorrisHebFormat(desc.p1, desc.p2), desc.p1)
    if k == "morrisbias":
        return _TaperedCodec(MorrisBiasFormat(desc.p1, desc.p2), desc.p1)
    if k == "morrisunary":
        return _TaperedCodec(MorrisUnaryFormat(desc.p1), desc.p1)
    raise ValueError(f"{k} has no bit codec")


# --------------------------------------------------------------------------
# public operations

def decode_raw(desc: Descriptor, p: int):
    """(class, sign, mantissa, exp2): value = (-1)^sign * mantissa * 2^exp2."""
    if not 0 <= p < (1 << desc.width):
        raise ValueError(f"pattern {p:#x} exceeds width {desc.width}")
    return codec(desc).decode_raw(p)


def decode(desc: Descriptor, p: int) -> Decoded:
    cls, sign, m, e2 = decode_raw(desc, p)
    value = None
    if cls == FIN:
        value = Fraction(m << e2) if e2 >= 0 else Fraction(m, 1 << -e2)
        if sign:
            value = -value
    return Decoded(cls, sign, value, _field_view(desc, p))


def _field_view(desc: Descriptor, p: int) -> dict:
    """Bit-field breakdown, for display."""
    k = desc.kind
    w = desc.width
    bits = format(p, f"0{w}b")
    view = {"bits": bits}
    if k == "fixedp":
        view["integer_bits"] = bits[: desc.p1]
        view["fraction_bits"] = bits[desc.p1:]
    elif k in ("floatp", "ieee754"):
        view["sign"] = bits[0]
        view["exponent_bits"] = bits[1 : 1 + desc.p1]
        view["fraction_bits"] = bits[1 + desc.p1 :]
    else:
        fmt = codec(desc).fmt
        t = fmt.decode(p)
        view["sign"] = bits[0]
        if len(t) == 4:
            sign, e, frac, fs = t
            view.update(exponent=e, fraction=frac, fraction_size=fs)
    return view


def fit_scaled(desc: Descriptor, sign: int, m: int, e2: int, sticky: bool,
               mode: str | None = None):
    """Encode (-1)^sign * m * 2^e2 (+ sticky eps): (pattern_or_NR, exact)."""
    if mode is None:
        mode = desc.rounding
    c = codec(desc)
    if m == 0:
        return c.zero_pattern(sign), not sticky
    return c.fit(sign, m, e2, sticky, mode)


def encode(desc: Descriptor, x, mode: str | None = None):
    """Nearest pattern for a Fraction or BigFloat; NR sentinel when the
    format has no pattern for the (overflowed) result."""
    if isinstance(x, BigFloat):
        if x.zero:
            return codec(desc).zero_pattern(x.sign)
        m = (x.mant << x.rlen) | x.rest
        p, _ = fit_scaled(desc, x.sign, m, x.exp - x.fs - x.rlen, x.sticky, mode)
        return p
    x = Fraction(x)
    if x == 0:
        return codec(desc).zero_pattern(0)
    sign = 1 if x < 0 else 0
    b = bigfloat.from_fraction(abs(x), desc.width + 8)
    m = (b.mant << b.rlen) | b.rest
    p, _ = fit_scaled(desc, sign, m, b.exp - b.fs - b.rlen, b.sticky, mode)
    return p


def enumerate_patterns(desc: Descriptor, cap: int = 16):
    """Yield (pattern, Decoded) for all 2^width patterns."""
    if desc.width > cap:
        raise ValueError(
            f"{desc.text} is {desc.width} bits wide; enumeration capped at "
            f"{cap} bits (pass a larger cap explicitly to override)"
        )
    for p in range(1 << desc.width):
        yield p, decode(desc, p)


def decode_table(desc: Descriptor, cap: int = 16):
    """[(class, sign, mantissa, exp2)] for all patterns, for sweeps."""
    if desc.width > cap:
        raise ValueError(f"{desc.text} too wide for a decode table")
    c = codec(desc)
    return [c.decode_raw(p) for p in range(1 << desc.width)]


_ORDERED_KINDS = ("posit", "morrisbias", "morrisunary")


def bit_compare(desc: Descriptor, p: int, q: int) -> int:
    """Integer-level comparison contract for the ordered formats."""
    if desc.kind not in _ORDERED_KINDS:
        raise UnorderedComparison(f"{desc.kind} patterns are not ordered")
    for x in (p, q):
        cls = decode_raw(desc, x)[0]
        if cls not in (FIN, ZERO):
            raise UnorderedComparison(f"special pattern {x:#x}")
    return (_order_key(desc, p) > _order_key(desc, q)) - (
        _order_key(desc, p) < _order_key(desc, q)
    )


def _order_key(desc: Descriptor, p: int) -> int:
    n = desc.width
    if desc.kind == "posit":
        return p - (1 << n) if p >> (n - 1) else p  # two's complement
    payload = p & ((1 << (n - 1)) - 1)
    return -payload if p >> (n - 1) else payload  # sign-magnitude
