"""Fixed-point big-integer kernels for exp, ln, sin and their constants.

Everything here works on integers scaled by 2**P.  Each kernel returns a
value together with a conservative error bound in units of 2**-P, so the
caller can round correctly (or detect that the rounding decision is still
ambiguous and retry at a higher precision).  Series arguments are always
reduced first: exp subtracts a multiple of ln 2, ln normalizes the mantissa
into [sqrt(1/2), sqrt(2)), sin subtracts a multiple of pi/2 computed at a
precision that covers the argument's own exponent.
"""

from __future__ import annotations

import functools
import math


@functools.lru_cache(maxsize=64)
def ln2_fixed(p: int) -> int:
    # 2*atanh(1/3): term_k = 2 / (3^(2k+1) (2k+1)); error under nterms ulps
    s = 0
    k = 0
    scale = 1 << (p + 8)
    while True:
        term = scale // (3 ** (2 * k + 1) * (2 * k + 1))
        if term == 0:
            break
        s += term
        k += 1
    return (2 * s) >> 8


@functools.lru_cache(maxsize=64)
def _atan_inv_fixed(m: int, p: int) -> int:
    s = 0
    k = 0
    scale = 1 << p
    m2 = m * m
    mm = m
    while True:
        term = scale // (mm * (2 * k + 1))
        if term == 0:
            break
        s += -term if k & 1 else term
        mm *= m2
        k += 1
    return s


@functools.lru_cache(maxsize=64)
def pi_fixed(p: int) -> int:
    # Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    return 16 * _atan_inv_fixed(5, p + 8) - 4 * _atan_inv_fixed(239, p + 8) >> 8


@functools.lru_cache(maxsize=64)
def sqrt2_fixed(p: int) -> int:
    return math.isqrt(2 << (2 * p))


def _tz_shift(a: int, k: int) -> int:
    """Shift right truncating toward zero (so |result| strictly shrinks)."""
    return a >> k if a >= 0 else -((-a) >> k)


def _tz_div(a: int, b: int) -> int:
    return a // b if a >= 0 else -((-a) // b)


def _exp_series(r: int, p: int):
    """e^r for |r| <= ~0.36*2^p; (value, err_ulps)."""
    term = 1 << p
    s = term
    k = 1
    steps = 0
    while term:
        term = _tz_div(_tz_shift(term * r, p), k)
        s += term
        k += 1
        steps += 1
    return s, 2 * steps + 2


def _sin_series(r: int, p: int):
    term = r
    s = term
    r2 = (r * r) >> p
    k = 0
    steps = 0
    while term:
        term = -_tz_div(_tz_shift(term * r2, p), (2 * k + 2) * (2 * k + 3))
        s += term
        k += 1
        steps += 1
    return s, 2 * steps + 2


def _cos_series(r: int, p: int):
    term = 1 << p
    s = term
    r2 = (r * r) >> p
    k = 0
    steps = 0
    while term:
        term = -_tz_div(_tz_shift(term * r2, p), (2 * k + 1) * (2 * k + 2))
        s += term
        k += 1
        steps += 1
    return s, 2 * steps + 2


def _atanh_series(t: int, p: int):
    """atanh(t) for |t| <= ~0.18*2^p; (value, err_ulps)."""
    s = t
    pw = t
    t2 = (t * t) >> p
    k = 1
    steps = 0
    while pw:
        pw = _tz_shift(pw * t2, p)
        s += _tz_div(pw, 2 * k + 1)
        k += 1
        steps += 1
    return s, 2 * steps + 4


def _to_fixed(m: int, e2: int, p: int) -> int:
    """floor(m * 2^(e2+p)); caller tracks the <=1 ulp truncation."""
    sh = e2 + p
    return m << sh if sh >= 0 else m >> -sh


def exp_scaled(sign: int, m: int, e2: int, p: int):
    """e^((-1)^sign * m * 2^e2) as (N, rexp, err): value ~ (N +/- err) * 2^rexp.

    N carries about p significant bits.
    """
    xbits = max(0, e2 + m.bit_length())
    p2 = p + xbits + 16
    xf = _to_fixed(m, e2, p2)
    if sign:
        xf = -xf
    return _exp_from_fixed(xf, 2, p2, p)


def _exp_from_fixed(xf: int, xerr: int, p2: int, p: int):
    ln2 = ln2_fixed(p2)
    k = (xf + (ln2 >> 1)) // ln2  # nearest multiple
    r = xf - k * ln2
    r >>= p2 - p
    s, serr = _exp_series(r, p)
    # r carried ~xerr+2 ulps at p2 -> ~1 ulp at p; de^r = e^r dr <= 2 ulps
    return s, k - p, serr + 4 + xerr


def ln_scaled(m: int, e2: int, p: int):
    """ln(m * 2^e2), m > 0: (sign, N, rexp, err) with value (N +/- err) 2^rexp."""
    e = e2 + m.bit_length() - 1
    p2 = p + max(e.bit_length() if e else 1, 1) + 16
    # mantissa in [1, 2) at p2 bits
    mf = _to_fixed(m, -(m.bit_length() - 1), p2)
    if mf >= sqrt2_fixed(p2):
        mf >>= 1
        e += 1
    one = 1 << p2
    t = ((mf - one) << p2) // (mf + one)
    at, aterr = _atanh_series(t, p2)
    val = e * ln2_fixed(p2) + 2 * at
    err = 2 * aterr + abs(e).bit_length() + 8
    sign = 1 if val < 0 else 0
    val = abs(val)
    # value = val * 2^-p2; renormalize to ~p bits
    drop = p2 - p
    return sign, val >> drop, -(p2 - drop), (err >> drop) + 2


def sin_scaled(sign: int, m: int, e2: int, p: int):
    """sin((-1)^sign * m * 2^e2): (rsign, N, rexp, err)."""
    xbits = max(0, e2 + m.bit_length())
    p2 = p + xbits + 24
    xf = _to_fixed(m, e2, p2)
    halfpi = pi_fixed(p2) >> 1
    q = (xf + (halfpi >> 1)) // halfpi
    r = xf - q * halfpi
    r >>= p2 - p
    quad = q & 3
    if quad == 0:
        s, serr = _sin_series(r, p)
    elif quad == 1:
        s, serr = _cos_series(r, p)
    elif quad == 2:
        s, serr = _sin_series(r, p)
        s = -s
    else:
        s, serr = _cos_series(r, p)
        s = -s
    # the reduced argument absorbed ~q ulps of pi error at p2; the p2 margin
    # of xbits+24 bits leaves that below a few ulps at p
    err = serr + 8
    rsign = 1 if s < 0 else 0
    if sign:
        rsign ^= 1
    return rsign, abs(s), -p, err
