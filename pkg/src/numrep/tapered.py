"""Layout engines for the tapered formats (posit and the Morris family).

Every tapered format stores an exponent whose field widths depend on the
exponent's own magnitude, so "round to this format" is a two-step dance:
derive the field layout from the value's exponent, round the mantissa to
the fraction width that layout leaves over, and re-derive the layout if the
rounding carried the exponent up.  On top of that, exponent fields get
truncated at the word end (the surviving bits are the most significant
ones, missing low bits read as zero), which punches alignment gaps into the
set of representable exponents.  The engine below models the representable
set directly: each format exposes the field layout per exponent, floor/ceil
navigation over representable exponents, and pattern assembly; `fit` turns
an arbitrary scaled integer into the nearest pattern under RE or RZ.

Two patterns are reserved everywhere (all bits zero -> 0, sign bit followed
by zeros -> NR; plain Morris instead reserves all-ones for NaN), and a few
values collide with them.  Collisions are resolved by rounding to the
nearest valid neighbour, with one value-preserving exception: formats with
duplicate encodings sidestep the reserved pattern by picking the next
encoding of the same value.
"""

from __future__ import annotations

from .bigfloat import RE, RZ

# out-of-band result for formats whose error value has no bit pattern
NOT_REPRESENTABLE = "NR"


class Layout:
    """Field split for one representable exponent."""

    __slots__ = ("fs", "data")

    def __init__(self, fs, data):
        self.fs = fs
        self.data = data  # kind-specific: whatever assemble() needs


class TaperedFormat:
    """Base: subclasses define the exponent levels and pattern assembly."""

    #: True when underflow clamps to minpos instead of flushing to zero
    underflow_to_minpos = False
    #: True when overflow clamps to maxpos instead of producing NR
    overflow_to_maxpos = False
    #: NaN pattern (plain Morris), else None
    nan_pattern = None

    def __init__(self, n: int):
        self.n = n
        self.zero_pattern, self.nr_pattern, self.nan_pattern = self._reserved()
        self._emin, self._emax = self._exp_bounds()
        # fraction offset at the bottom exponent when (emin, frac=0)
        # assembles into the zero pattern
        lay = self.layout(self._emin)
        self.bottom_frac = 1 if self._assemble_raw(0, self._emin, 0, lay) == self.zero_pattern else 0
        if self.bottom_frac and lay.fs == 0:
            raise AssertionError("bottom exponent has no nonzero fraction")

    # -- per-kind hooks -----------------------------------------------------

    def _reserved(self):
        return 0, 1 << (self.n - 1), None  # zero, NR, NaN

    def _exp_bounds(self):
        raise NotImplementedError

    def layout(self, e: int):
        """Layout for exponent e, or None when e is not representable."""
        raise NotImplementedError

    def exp_floor(self, e: int):
        """Largest representable exponent <= e, or None."""
        raise NotImplementedError

    def exp_ceil(self, e: int):
        """Smallest representable exponent >= e, or None."""
        raise NotImplementedError

    def _assemble_raw(self, sign, e, frac, lay) -> int:
        raise NotImplementedError

    # -- shared machinery ---------------------------------------------------

    @property
    def emin(self):
        return self._emin

    @property
    def emax(self):
        return self._emax

    def assemble(self, sign, e, frac, lay=None):
        """Pattern for a finite value, or None when it hits a reserved one."""
        if lay is None:
            lay = self.layout(e)
        p = self._assemble_raw(sign, e, frac, lay)
        if p == self.zero_pattern or p == self.nr_pattern or p == self.nan_pattern:
            return None
        return p

    def min_value(self):
        """(e, frac) of the smallest positive value."""
        return self._emin, self.bottom_frac

    def max_value(self):
        """(e, frac) of the largest positive value."""
        lay = self.layout(self._emax)
        return self._emax, (1 << lay.fs) - 1

    # value helpers: v = 2^e * (1 + frac/2^fs) as an exact pair (num, exp2)
    def _vparts(self, e, frac, fs):
        return (1 << fs) + frac, e - fs

    def _value_below(self, sign, e, frac):
        """Largest valid (e', frac') strictly below (e, frac), or None -> zero."""
        lay = self.layout(e)
        while True:
            floor_frac = self.bottom_frac if e == self._emin else 0
            if frac > floor_frac:
                frac -= 1
            else:
                e2 = self.exp_floor(e - 1)
                if e2 is None:
                    return None
                e, lay = e2, self.layout(e2)
                frac = (1 << lay.fs) - 1
            if self.assemble(sign, e, frac, lay) is not None:
                return e, frac, lay

    def _value_above(self, sign, e, frac):
        """Smallest valid (e', frac') strictly above (e, frac), or None -> over."""
        lay = self.layout(e)
        while True:
            if frac < (1 << lay.fs) - 1:
                frac += 1
            else:
                e2 = self.exp_ceil(e + 1)
                if e2 is None:
                    return None
                e, lay = e2, self.layout(e2)
                frac = self.bottom_frac if e == self._emin else 0
            if self.assemble(sign, e, frac, lay) is not None:
                return e, frac, lay

    def fit(self, sign, m, e2, sticky, mode):
        """Nearest pattern for (-1)^sign * m * 2^e2 (+ sticky epsilon), m > 0.

        Returns (pattern_or_sentinel, exact).  `exact` is True only when the
        encoded pattern decodes back to precisely the input value.
        """
        e = e2 + m.bit_length() - 1
        if e > self._emax:
            return self._overflow(sign), False
        if e < self._emin:
            return self._underflow(sign, m, e2, sticky, mode), False
        lay = self.layout(e)
        if lay is None:
            lo = self.exp_floor(e)
            hi = self.exp_ceil(e)
            return self._band(sign, m, e2, sticky, mode, lo, hi), False
        # round the mantissa at this layout's fraction size
        shift = (e - lay.fs) - e2
        if shift <= 0:
            q = m << -shift
            dropped = False
        else:
            q = m >> shift
            tail = m & ((1 << shift) - 1)
            dropped = tail != 0
            if mode == RE:
                guard = (tail >> (shift - 1)) & 1 if shift else 0
                low = (tail & ((1 << (shift - 1)) - 1)) != 0 or sticky
                if guard and (low or (q & 1)):
                    q += 1
        inexact = dropped or sticky
        if q.bit_length() == lay.fs + 2:
            # carry to 2.0: the true value sits between the top of level e
            # and the bottom of the next level
            if e + 1 > self._emax:
                return self._overflow(sign), False
            lay2 = self.layout(e + 1)
            if lay2 is not None:
                p = self.assemble(sign, e + 1, 0, lay2)
                if p is not None:
                    return p, not inexact
            return self._band(sign, m, e2, sticky, mode, e, self.exp_ceil(e + 1)), False
        frac = q - (1 << lay.fs)
        p = self.assemble(sign, e, frac, lay)
        if p is not None:
            return p, not inexact
        # reserved-pattern collision: round to the nearest valid neighbour
        return self._collide(sign, e, frac, m, e2, sticky, mode), False

    # -- policy pieces ------------------------------------------------------

    def _overflow(self, sign):
        if self.overflow_to_maxpos:
            e, f = self.max_value()
            return self.assemble(sign, e, f)
        if self.nr_pattern is not None:
            return self.nr_pattern
        return NOT_REPRESENTABLE

    def _minpos_pattern(self, sign):
        e, f = self.min_value()
        return self.assemble(sign, e, f)

    def _underflow(self, sign, m, e2, sticky, mode):
        if self.underflow_to_minpos:
            return self._minpos_pattern(sign)
        if mode == RZ:
            return self.zero_pattern
        # nearest of {0, minpos}: compare against minpos/2
        e, f = self.min_value()
        lay = self.layout(e)
        num, ve = self._vparts(e, f, lay.fs)
        c = _cmp_scaled(m, e2, sticky, num, ve - 1)
        if c > 0:
            return self._minpos_pattern(sign)
        return self.zero_pattern

    def _band(self, sign, m, e2, sticky, mode, elo, ehi):
        """Round into the space between exponent levels elo and ehi."""
        lo = None
        if elo is not None:
            llo = self.layout(elo)
            lo = self._value_at_or_below(sign, elo, (1 << llo.fs) - 1)
        hi = None
        if ehi is not None:
            lhi = self.layout(ehi)
            f0 = self.bottom_frac if ehi == self._emin else 0
            hi = self._value_at_or_above(sign, ehi, f0)
        if hi is None and lo is None:
            return self._overflow(sign)  # nothing on either side
        if hi is None:
            return self._overflow(sign) if mode == RE else self._pattern_of(sign, lo)
        if lo is None:
            return self._underflow(sign, m, e2, sticky, mode)
        if mode == RZ:
            return self._pattern_of(sign, lo)
        c = self._cmp_to_mid(m, e2, sticky, lo, hi)
        if c > 0:
            return self._pattern_of(sign, hi)
        if c < 0:
            return self._pattern_of(sign, lo)
        # true tie: pick the even pattern
        plo = self._pattern_of(sign, lo)
        phi = self._pattern_of(sign, hi)
        return plo if (plo & 1) == 0 else phi

    def _cmp_to_mid(self, m, e2, sticky, lo, hi):
        """Compare the value against the midpoint of two candidates."""
        nlo, zlo = self._vparts(lo[0], lo[1], lo[2].fs)
        nhi, zhi = self._vparts(hi[0], hi[1], hi[2].fs)
        z = min(zlo, zhi) - 1
        mid2 = (nlo << (zlo - z)) + (nhi << (zhi - z))  # (lo+hi) at scale z
        # compare 2v against lo+hi to avoid the halving
        return _cmp_scaled(m, e2 + 1, sticky, mid2, z)

    def _value_at_or_below(self, sign, e, frac):
        lay = self.layout(e)
        if self.assemble(sign, e, frac, lay) is not None:
            return e, frac, lay
        return self._value_below(sign, e, frac)

    def _value_at_or_above(self, sign, e, frac):
        lay = self.layout(e)
        if self.assemble(sign, e, frac, lay) is not None:
            return e, frac, lay
        return self._value_above(sign, e, frac)

    def _pattern_of(self, sign, efl):
        if efl is None:
            return self.zero_pattern
        return self.assemble(sign, efl[0], efl[1], efl[2])

    def _collide(self, sign, e, frac, m, e2, sticky, mode):
        lo = self._value_below(sign, e, frac)
        hi = self._value_above(sign, e, frac)
        if mode == RZ:
            if lo is None:
                return self.zero_pattern
            return self._pattern_of(sign, lo)
        if hi is None:
            return self._overflow(sign) if lo is None else self._pattern_of(sign, lo)
        if lo is None:
            # nearest of {0, hi}
            nhi, zhi = self._vparts(hi[0], hi[1], hi[2].fs)
            c = _cmp_scaled(m, e2, sticky, nhi, zhi - 1)
            return self._pattern_of(sign, hi) if c > 0 else self.zero_pattern
        c = self._cmp_to_mid(m, e2, sticky, lo, hi)
        if c > 0:
            return self._pattern_of(sign, hi)
        if c < 0:
            return self._pattern_of(sign, lo)
        plo = self._pattern_of(sign, lo)
        phi = self._pattern_of(sign, hi)
        return plo if (plo & 1) == 0 else phi


def _cmp_scaled(m, e2, sticky, n, z):
    """Compare m*2^e2 (+sticky eps) against n*2^z; both m, n > 0."""
    # align exponents without materializing absurd shifts
    d = e2 - z
    if d >= 0:
        bl, bn = m.bit_length() + d, n.bit_length()
        if bl > bn:
            return 1
        if bl < bn:
            return -1
        a, b = m << d, n
    else:
        bl, bn = m.bit_length(), n.bit_length() - d
        if bl > bn:
            return 1
        if bl < bn:
            return -1
        a, b = m, n << -d
    if a > b:
        return 1
    if a < b:
        return -1
    return 1 if sticky else 0


def _aligned_floor(x, lo, hi, step):
    """Largest lo + k*step <= x within [lo, hi], or None."""
    if x < lo:
        return None
    if x > hi:
        x = hi
    return lo + (x - lo) // step * step


def _aligned_ceil(x, lo, hi, step):
    if x > hi:
        return None
    if x < lo:
        return lo
    return lo + -(-(x - lo) // step) * step


class PositFormat(TaperedFormat):
    underflow_to_minpos = True
    overflow_to_maxpos = True

    def __init__(self, n, es):
        self.es = es
        super().__init__(n)

    def _regime_len(self, k):
        nominal = k + 2 if k >= 0 else -k + 1
        return min(nominal, self.n - 1)

    def _level(self, k):
        # (lo, hi, step, w, rl) of exponent values k*2^es + e
        rl = self._regime_len(k)
        w = min(self.es, self.n - 1 - rl)
        step = 1 << (self.es - w)
        lo = k << self.es
        hi = lo + (1 << self.es) - step
        return lo, hi, step, w, rl

    def _exp_bounds(self):
        kmax = self.n - 2
        return (-kmax) << self.es, (kmax << self.es)  # e=0 at both extremes

    def layout(self, e):
        k = e >> self.es
        if k < -(self.n - 2) or k > self.n - 2:
            return None
        lo, hi, step, w, rl = self._level(k)
        if (e - lo) % step:
            return None
        fs = self.n - 1 - rl - w
        return Layout(fs, (k, (e - lo) >> (self.es - w), w, rl))

    def exp_floor(self, e):
        k = e >> self.es
        kmax = self.n - 2
        while k >= -kmax:
            if k > kmax:
                k = kmax
                e = (k << self.es) + (1 << self.es) - 1
            lo, hi, step, w, rl = self._level(k)
            c = _aligned_floor(e, lo, hi, step)
            if c is not None:
                return c
            k -= 1
            e = (k << self.es) + (1 << self.es) - 1
        return None

    def exp_ceil(self, e):
        k = e >> self.es
        kmax = self.n - 2
        while k <= kmax:
            if k < -kmax:
                k = -kmax
                e = k << self.es
            lo, hi, step, w, rl = self._level(k)
            c = _aligned_ceil(e, lo, hi, step)
            if c is not None:
                return c
            k += 1
            e = k << self.es
        return None

    def _assemble_raw(self, sign, e, frac, lay):
        k, stored_e, w, rl = lay.data
        if k >= 0:
            ones = (1 << min(k + 1, self.n - 1)) - 1
            regime = ones << (rl - min(k + 1, self.n - 1))
        else:
            regime = 1 if rl == -k + 1 else 0  # terminator only if it fits
        body = regime
        body = (body << w) | stored_e
        body = (body << lay.fs) | frac
        if sign:
            return (-body) & ((1 << self.n) - 1)  # two's complement
        return body

    def assemble(self, sign, e, frac, lay=None):
        if lay is None:
            lay = self.layout(e)
        return self._assemble_raw(sign, e, frac, lay)  # posit has no collisions

    def decode(self, p):
        """('zero',) | ('nar',) | (sign, e, frac, fs)"""
        n = self.n
        if p == 0:
            return ("zero",)
        if p == 1 << (n - 1):
            return ("nar",)
        sign = p >> (n - 1)
        if sign:
            p = (-p) & ((1 << n) - 1)
        body = p & ((1 << (n - 1)) - 1)
        width = n - 1
        top = (body >> (width - 1)) & 1
        run = 1
        while run < width and ((body >> (width - 1 - run)) & 1) == top:
            run += 1
        if top:
            k = run - 1
        else:
            k = -run
        rl = min(run + 1, width)  # runs plus terminator, capped at the end
        w = min(self.es, width - rl)
        fs = width - rl - w
        rest = body & ((1 << (width - rl)) - 1)
        stored_e = rest >> fs
        frac = rest & ((1 << fs) - 1)
        e = (k << self.es) + (stored_e << (self.es - w))
        return (sign, e, frac, fs)


class MorrisFormat(TaperedFormat):
    """sign | G (g bits) | exponent sign | exponent | fraction; es = G+1."""

    def __init__(self, n, g):
        self.g = g
        self.gmax = (1 << g) - 1
        self.wmax = n - 2 - g  # bits left for exponent-or-fraction
        if self.wmax < 0:
            raise ValueError("width too small for morris layout")
        super().__init__(n)

    def _reserved(self):
        # all-ones is NaN; sign bit followed by zeros is an ordinary value
        return 0, None, (1 << self.n) - 1

    def _exp_bounds(self):
        best = 0
        for G in range(self.gmax + 1):
            es = G + 1
            w = min(es, self.wmax)
            hi = ((1 << w) - 1) << (es - w)
            best = max(best, hi)
        return -best, best

    def _g_for(self, absexp):
        # smallest G whose (possibly truncated) field holds absexp exactly
        b = absexp.bit_length()
        if b > self.gmax + 1:
            return None
        for G in range(max(b - 1, 0), self.gmax + 1):
            es = G + 1
            w = min(es, self.wmax)
            if absexp % (1 << (es - w)) == 0:
                return G
        return None

    def layout(self, e):
        absexp = -e if e < 0 else e
        G = self._g_for(absexp)
        if G is None:
            return None
        es = G + 1
        w = min(es, self.wmax)
        fs = self.wmax - w
        return Layout(fs, (G, w, es))

    def exp_floor(self, e):
        if e < self._emin:
            return None
        if e >= 0:
            best = None
            for G in range(self.gmax + 1):
                es = G + 1
                w = min(es, self.wmax)
                step = 1 << (es - w)
                hi = ((1 << w) - 1) << (es - w)
                c = _aligned_floor(e, 0, hi, step)
                if c is not None and (best is None or c > best):
                    best = c
            return best
        # negative: floor(e) = -ceil(|e|)
        c = self._abs_ceil(-e)
        return -c if c is not None else None

    def exp_ceil(self, e):
        if e > self._emax:
            return None
        if e <= 0:
            c = self.exp_floor(-e)
            return -c if c is not None else None
        c = self._abs_ceil(e)
        return c if c is not None else None

    def _abs_ceil(self, a):
        best = None
        for G in range(self.gmax + 1):
            es = G + 1
            w = min(es, self.wmax)
            step = 1 << (es - w)
            hi = ((1 << w) - 1) << (es - w)
            c = _aligned_ceil(a, 0, hi, step)
            if c is not None and (best is None or c < best):
                best = c
        return best

    def _assemble_with_g(self, sign, e, frac, G, fs_from):
        es = G + 1
        w = min(es, self.wmax)
        fs = self.wmax - w
        if fs_from > fs:
            shift = fs_from - fs
            if frac & ((1 << shift) - 1):
                return None  # fraction does not fit the coarser grid
            frac >>= shift
        else:
            frac <<= fs - fs_from
        absexp = -e if e < 0 else e
        stored = absexp >> (es - w)
        body = (sign << (self.g + 1)) | (G << 1) | (1 if e < 0 else 0)
        body = (body << w) | stored
        body = (body << fs) | frac
        return body

    def _assemble_raw(self, sign, e, frac, lay):
        G, w, es = lay.data
        return self._assemble_with_g(sign, e, frac, G, lay.fs)

    def assemble(self, sign, e, frac, lay=None):
        if lay is None:
            lay = self.layout(e)
        G, w, es = lay.data
        p = self._assemble_with_g(sign, e, frac, G, lay.fs)
        if p not in (self.zero_pattern, self.nan_pattern):
            return p
        # duplicate encodings: the same value may fit a bigger G field
        absexp = -e if e < 0 else e
        for G2 in range(G + 1, self.gmax + 1):
            es2 = G2 + 1
            w2 = min(es2, self.wmax)
            if absexp % (1 << (es2 - w2)):
                continue
            p = self._assemble_with_g(sign, e, frac, G2, lay.fs)
            if p is not None and p not in (self.zero_pattern, self.nan_pattern):
                return p
        return None

    def decode(self, p):
        n = self.n
        if p == 0:
            return ("zero",)
        if p == (1 << n) - 1:
            return ("nan",)
        sign = p >> (n - 1)
        G = (p >> (n - 1 - self.g)) & self.gmax
        esign = (p >> (n - 2 - self.g)) & 1
        es = G + 1
        w = min(es, self.wmax)
        fs = self.wmax - w
        rest = p & ((1 << self.wmax) - 1)
        stored = rest >> fs
        frac = rest & ((1 << fs) - 1)
        absexp = stored << (es - w)
        e = -absexp if esign else absexp
        return (sign, e, frac, fs)


class MorrisHebFormat(TaperedFormat):
    """Like Morris but es = G-1 and a hidden exponent bit: |e| in [2^es, 2^(es+1))."""

    def __init__(self, n, g):
        self.g = g
        self.gmax = (1 << g) - 1
        self.wmax = n - 2 - g
        if self.wmax < 0:
            raise ValueError("width too small for morris layout")
        super().__init__(n)

    def _exp_bounds(self):
        es = self.gmax - 1
        w = min(es, self.wmax)
        hi = (1 << es) + (((1 << w) - 1) << (es - w))
        return -hi, hi

    def _es_parts(self, absexp):
        # the hidden exponent bit pins es = bit_length - 1
        es = absexp.bit_length() - 1
        if es + 1 > self.gmax:
            return None
        w = min(es, self.wmax)
        bexp = absexp - (1 << es)
        if bexp % (1 << (es - w)):
            return None
        return es, w, bexp

    def layout(self, e):
        if e == 0:
            return Layout(self.wmax, (0, -1, 0, 0))  # G=0, es=-1
        parts = self._es_parts(-e if e < 0 else e)
        if parts is None:
            return None
        es, w, bexp = parts
        return Layout(self.wmax - w, (es + 1, es, w, bexp))

    def _abs_levels(self):
        for es in range(0, self.gmax):
            w = min(es, self.wmax)
            step = 1 << (es - w)
            lo = 1 << es
            hi = lo + (((1 << w) - 1) << (es - w))
            yield lo, hi, step

    def _abs_floor(self, a):
        best = None
        for lo, hi, step in self._abs_levels():
            c = _aligned_floor(a, lo, hi, step)
            if c is not None and (best is None or c > best):
                best = c
        return best

    def _abs_ceil(self, a):
        best = None
        for lo, hi, step in self._abs_levels():
            c = _aligned_ceil(a, lo, hi, step)
            if c is not None and (best is None or c < best):
                best = c
        return best

    def exp_floor(self, e):
        if e < self._emin:
            return None
        if e > 0:
            c = self._abs_floor(e)
            return c if c is not None else 0
        if e == 0:
            return 0
        c = self._abs_ceil(-e)
        return -c if c is not None else self._emin  # |e|>=1 always has a ceil here

    def exp_ceil(self, e):
        if e > self._emax:
            return None
        if e < 0:
            c = self._abs_floor(-e)
            return -c if c is not None else 0
        if e == 0:
            return 0
        c = self._abs_ceil(e)
        return c

    def _assemble_raw(self, sign, e, frac, lay):
        G, es, w, bexp = lay.data
        esign = 1 if e < 0 else 0
        if e == 0 and frac == 0:
            # the canonical esign=0 encoding is the reserved zero/NR pattern;
            # use the equivalent esign=1 form for +/-1.0
            esign = 1
        stored = bexp >> (es - w) if es >= 0 else 0
        body = (sign << (self.g + 1)) | (G << 1) | esign
        body = (body << w) | stored
        body = (body << lay.fs) | frac
        return body

    def decode(self, p):
        n = self.n
        if p == 0:
            return ("zero",)
        if p == 1 << (n - 1):
            return ("nr",)
        sign = p >> (n - 1)
        G = (p >> (n - 1 - self.g)) & self.gmax
        esign = (p >> (n - 2 - self.g)) & 1
        es = G - 1
        w = min(es, self.wmax) if es >= 0 else 0
        fs = self.wmax - w
        rest = p & ((1 << self.wmax) - 1)
        stored = rest >> fs
        frac = rest & ((1 << fs) - 1)
        if es < 0:
            e = 0
        else:
            absexp = (1 << es) + (stored << (es - w))
            e = -absexp if esign else absexp
        return (sign, e, frac, fs)


class MorrisBiasFormat(TaperedFormat):
    """sign | G in bias form | exponent (negated when G<0) | fraction.

    No exponent sign bit: signum(G) is the exponent sign, es = |G|-1, and
    negative exponents store their bits inverted so plain integer compare
    of patterns matches value order.
    """

    def __init__(self, n, g):
        self.g = g
        self.bias = (1 << (g - 1)) - 1
        self.gpos = (1 << g) - 1 - self.bias   # largest G
        self.gneg = -self.bias                 # smallest G
        self.wmax = n - 1 - g
        if self.wmax < 0:
            raise ValueError("width too small for morris layout")
        super().__init__(n)

    def _exp_bounds(self):
        def top(gabs):
            es = gabs - 1
            w = min(es, self.wmax)
            return (1 << es) + (((1 << w) - 1) << (es - w))

        return -top(-self.gneg), top(self.gpos)

    def _levels(self, positive):
        gabs_max = self.gpos if positive else -self.gneg
        for es in range(0, gabs_max):
            w = min(es, self.wmax)
            step = 1 << (es - w)
            lo = 1 << es
            hi = lo + (((1 << w) - 1) << (es - w))
            yield lo, hi, step

    def _abs_floor(self, a, positive):
        best = None
        for lo, hi, step in self._levels(positive):
            c = _aligned_floor(a, lo, hi, step)
            if c is not None and (best is None or c > best):
                best = c
        return best

    def _abs_ceil(self, a, positive):
        best = None
        for lo, hi, step in self._levels(positive):
            c = _aligned_ceil(a, lo, hi, step)
            if c is not None and (best is None or c < best):
                best = c
        return best

    def layout(self, e):
        if e == 0:
            return Layout(self.wmax, (0, -1, 0, 0))
        absexp = -e if e < 0 else e
        es = absexp.bit_length() - 1
        G = es + 1 if e > 0 else -(es + 1)
        if G > self.gpos or G < self.gneg:
            return None
        w = min(es, self.wmax)
        bexp = absexp - (1 << es)
        if bexp % (1 << (es - w)):
            return None
        return Layout(self.wmax - w, (G, es, w, bexp))

    def exp_floor(self, e):
        if e < self._emin:
            return None
        if e > 0:
            c = self._abs_floor(e, True)
            return c if c is not None else 0
        if e == 0:
            return 0
        c = self._abs_ceil(-e, False)
        return -c if c is not None else self._emin

    def exp_ceil(self, e):
        if e > self._emax:
            return None
        if e < 0:
            c = self._abs_floor(-e, False)
            return -c if c is not None else 0
        if e == 0:
            return 0
        return self._abs_ceil(e, True)

    def _assemble_raw(self, sign, e, frac, lay):
        G, es, w, bexp = lay.data
        stored = bexp >> (es - w) if es >= 0 else 0
        if G < 0:
            stored = ~stored & ((1 << w) - 1)
        body = (sign << self.g) | (G + self.bias)
        body = (body << w) | stored
        body = (body << lay.fs) | frac
        return body

    def decode(self, p):
        n = self.n
        if p == 0:
            return ("zero",)
        if p == 1 << (n - 1):
            return ("nr",)
        sign = p >> (n - 1)
        G = ((p >> self.wmax) & ((1 << self.g) - 1)) - self.bias
        es = (G if G >= 0 else -G) - 1
        w = min(es, self.wmax) if es >= 0 else 0
        fs = self.wmax - w
        rest = p & ((1 << self.wmax) - 1)
        stored = rest >> fs
        frac = rest & ((1 << fs) - 1)
        if es < 0:
            e = 0
        else:
            if G < 0:
                stored = ~stored & ((1 << w) - 1)
            absexp = (1 << es) + (stored << (es - w))
            e = -absexp if G < 0 else absexp
        return (sign, e, frac, fs)


class MorrisUnaryFormat(TaperedFormat):
    """sign | unary regime | exponent (negated when k<0) | fraction.

    The regime plays the role of the G field: es = |k|-1 with the hidden
    exponent bit, exactly like posit's run-length field.
    """

    def __init__(self, n):
        super().__init__(n)

    def _regime_len(self, k):
        nominal = k + 2 if k >= 0 else -k + 1
        return min(nominal, self.n - 1)

    def _level(self, k):
        # exponent progression for regime k (k != 0)
        es = k - 1 if k > 0 else -k - 1
        rl = self._regime_len(k)
        w = min(es, self.n - 1 - rl)
        step = 1 << (es - w)
        lo = 1 << es
        hi = lo + (((1 << w) - 1) << (es - w))
        return lo, hi, step, es, w, rl

    def _exp_bounds(self):
        # positive k up to n-2 (all ones, no terminator); negative k down to
        # -(n-2): one more zero would collide with the reserved patterns
        lo, hi, step, es, w, rl = self._level(self.n - 2)
        emax = hi
        lo, hi, step, es, w, rl = self._level(-(self.n - 2))
        return -hi, emax

    def layout(self, e):
        if e == 0:
            return Layout(self.n - 3, (0, -1, 0, 2))  # regime "10"
        absexp = -e if e < 0 else e
        es = absexp.bit_length() - 1
        k = es + 1 if e > 0 else -(es + 1)
        if not (-(self.n - 2) <= k <= self.n - 2):
            return None
        lo, hi, step, es, w, rl = self._level(k)
        bexp = absexp - lo
        if bexp % step:
            return None
        return Layout(self.n - 1 - rl - w, (k, es, w, rl))

    def _abs_floor(self, a, positive):
        best = None
        for k in range(1, self.n - 1):
            lo, hi, step, es, w, rl = self._level(k if positive else -k)
            c = _aligned_floor(a, lo, hi, step)
            if c is not None and (best is None or c > best):
                best = c
        return best

    def _abs_ceil(self, a, positive):
        best = None
        for k in range(1, self.n - 1):
            lo, hi, step, es, w, rl = self._level(k if positive else -k)
            c = _aligned_ceil(a, lo, hi, step)
            if c is not None and (best is None or c < best):
                best = c
        return best

    def exp_floor(self, e):
        if e < self._emin:
            return None
        if e > 0:
            c = self._abs_floor(e, True)
            return c if c is not None else 0
        if e == 0:
            return 0
        c = self._abs_ceil(-e, False)
        return -c if c is not None else self._emin

    def exp_ceil(self, e):
        if e > self._emax:
            return None
        if e < 0:
            c = self._abs_floor(-e, False)
            return -c if c is not None else 0
        if e == 0:
            return 0
        return self._abs_ceil(e, True)

    def _assemble_raw(self, sign, e, frac, lay):
        k, es, w, rl = lay.data
        if k >= 0:
            run = min(k + 1, self.n - 1)
            regime = ((1 << run) - 1) << (rl - run)
        else:
            regime = 1 if rl == -k + 1 else 0
        absexp = -e if e < 0 else e
        stored = (absexp - (1 << es)) >> (es - w) if es >= 0 else 0
        if k < 0:
            stored = ~stored & ((1 << w) - 1)
        body = (sign << (rl)) | regime
        body = (body << w) | stored
        body = (body << lay.fs) | frac
        return body

    def decode(self, p):
        n = self.n
        if p == 0:
            return ("zero",)
        if p == 1 << (n - 1):
            return ("nr",)
        sign = p >> (n - 1)
        body = p & ((1 << (n - 1)) - 1)
        width = n - 1
        top = (body >> (width - 1)) & 1
        run = 1
        while run < width and ((body >> (width - 1 - run)) & 1) == top:
            run += 1
        k = run - 1 if top else -run
        rl = min(run + 1, width)
        es = k - 1 if k >= 0 else -k - 1
        w = min(es, width - rl) if es >= 0 else 0
        fs = width - rl - w
        rest = body & ((1 << (width - rl)) - 1)
        stored = rest >> fs
        frac = rest & ((1 << fs) - 1)
        if es < 0:
            e = 0
        else:
            if k < 0:
                stored = ~stored & ((1 << w) - 1)
            absexp = (1 << es) + (stored << (es - w))
            e = -absexp if k < 0 else absexp
        return (sign, e, frac, fs)
