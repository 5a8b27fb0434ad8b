import math
import random
import struct
from fractions import Fraction as F

import numpy as np
import pytest

from numrep.formats import (
    FIN,
    INF,
    NAR,
    QNAN,
    SNAN,
    ZERO,
    NOT_REPRESENTABLE,
    decode,
    decode_raw,
    encode,
    parse_descriptor,
)
from numrep.ops import (
    AccuracyResult,
    decimal_accuracy,
    digits_scaled,
    error_value,
    nrs_arith,
    nrs_fun,
    _digits_fraction,
)

D = parse_descriptor
F32 = D("ieee754:8:23:RE")

np.seterr(all="ignore")


def f32_bits(x) -> int:
    return struct.unpack(">I", struct.pack(">f", np.float32(x)))[0]


def bits_f32(b: int) -> np.float32:
    return np.float32(struct.unpack(">f", struct.pack(">I", b))[0])


def frac_of(desc, p) -> F:
    d = decode(desc, p)
    if d.cls == ZERO:
        return F(0)
    assert d.cls == FIN
    return d.value


# -- arithmetic ---------------------------------------------------------------

def test_add_identity_and_commutativity():
    d = D("posit:12:2:RE")
    rng = random.Random(5)
    zero = 0
    for _ in range(300):
        a = rng.randrange(1 << 12)
        b = rng.randrange(1 << 12)
        assert nrs_arith(d, "add", zero, a) == a or \
            frac_of(d, nrs_arith(d, "add", zero, a)) == frac_of(d, a)
        assert nrs_arith(d, "add", a, b) == nrs_arith(d, "add", b, a)
        assert nrs_arith(d, "mul", a, b) == nrs_arith(d, "mul", b, a)


def test_special_propagation():
    d = F32
    qnan = 0x7FC00000
    inf = 0x7F800000
    one = f32_bits(1.0)
    assert decode_raw(d, nrs_arith(d, "add", qnan, one))[0] == QNAN
    assert decode_raw(d, nrs_arith(d, "sub", inf, inf))[0] == QNAN
    assert decode_raw(d, nrs_arith(d, "mul", inf, 0))[0] == QNAN
    assert decode_raw(d, nrs_arith(d, "div", 0, 0))[0] == QNAN
    assert decode_raw(d, nrs_arith(d, "div", one, 0)) == (INF, 0, 0, 0)
    assert decode_raw(d, nrs_arith(d, "div", one, 0x80000000)) == (INF, 1, 0, 0)
    assert decode_raw(d, nrs_arith(d, "add", inf, one))[0] == INF
    # posit: NaR absorbs, division by zero is NaR
    dp = D("posit:12:2:RE")
    nar = 1 << 11
    assert nrs_arith(dp, "add", nar, 5) == nar
    assert nrs_arith(dp, "div", 5, 0) == nar
    # morris family: error pattern absorbs; fixedp overflows to the marker
    du = D("morrisunary:12:RE")
    assert nrs_arith(du, "div", 7, 0) == 1 << 11
    df = D("fixedp:6:6:RE")
    assert nrs_arith(df, "div", 7, 0) == NOT_REPRESENTABLE
    big = encode(df, F(30))
    assert nrs_arith(df, "add", big, big) == NOT_REPRESENTABLE


def test_signed_zero_rules():
    d = F32
    pz, nz = 0, 0x80000000
    assert nrs_arith(d, "add", pz, nz) == pz       # +0 plus -0 is +0
    assert nrs_arith(d, "add", nz, nz) == nz
    one = f32_bits(1.0)
    assert nrs_arith(d, "sub", one, one) == pz     # x - x is +0
    assert nrs_arith(d, "mul", nz, one) == nz
    assert nrs_arith(d, "mul", nz, f32_bits(-1.0)) == pz


@pytest.mark.parametrize("op,npop", [
    ("add", np.add), ("mul", np.multiply), ("div", np.divide),
])
def test_float32_oracle_random(op, npop):
    """Bit-exact agreement with native single precision."""
    d = F32
    rng = random.Random(hash(op) & 0xFFFF)
    checked = 0
    for _ in range(4000):
        a = rng.getrandbits(32)
        b = rng.getrandbits(32)
        if decode_raw(d, a)[0] in (QNAN, SNAN) or decode_raw(d, b)[0] in (QNAN, SNAN):
            continue
        want = f32_bits(npop(bits_f32(a), bits_f32(b)))
        got = nrs_arith(d, op, a, b)
        if decode_raw(d, want)[0] in (QNAN, SNAN):
            assert decode_raw(d, got)[0] in (QNAN, SNAN), (hex(a), hex(b))
        else:
            assert got == want, (op, hex(a), hex(b), hex(want))
        checked += 1
    assert checked > 3000


def test_sqrt_matches_float32():
    d = F32
    rng = random.Random(11)
    for _ in range(1500):
        a = rng.getrandbits(31)
        if decode_raw(d, a)[0] != FIN:
            continue
        want = f32_bits(np.sqrt(bits_f32(a)))
        assert nrs_fun(d, "sqrt", a) == want, hex(a)


def test_fun_examples():
    d = D("posit:16:2:RE")
    four = encode(d, F(4))
    assert frac_of(d, nrs_fun(d, "sqrt", four)) == 2
    assert frac_of(d, nrs_fun(d, "exp", 0)) == 1
    assert frac_of(d, nrs_fun(d, "ln", encode(d, F(1)))) == 0
    # inverse of minpos clamps to maxpos (2^56)
    minpos = 0x0001
    inv = nrs_fun(d, "inverse", minpos)
    assert frac_of(d, inv) == F(2) ** 56
    # cube root of a perfect cube is exact
    assert frac_of(d, nrs_fun(d, "nth_root", encode(d, F(27)), n=3)) == 3
    assert frac_of(d, nrs_fun(d, "nth_root", encode(d, F(-27)), n=3)) == -3
    # domain errors land on the format's error value
    assert nrs_fun(d, "sqrt", encode(d, F(-1))) == error_value(d)
    assert nrs_fun(d, "ln", encode(d, F(-1))) == error_value(d)
    assert nrs_fun(d, "inverse", 0) == error_value(d)


def test_fun_transcendental_vs_mpmath():
    import mpmath

    mpmath.mp.prec = 150
    d = D("morrisbias:16:4:RE")
    rng = random.Random(3)
    checked = 0
    while checked < 120:
        p = rng.getrandbits(16)
        cls, s, m, e2 = decode_raw(d, p)
        if cls != FIN or not -60 < e2 + m.bit_length() < 60:
            continue
        x = mpmath.mpf(m) * mpmath.mpf(2) ** e2
        if s:
            x = -x
        for fun, mf in (("exp", mpmath.exp), ("sin", mpmath.sin)):
            want = encode(d, F(str(mf(x))))
            got = nrs_fun(d, fun, p)
            assert got == want, (fun, hex(p))
        if x > 0:
            want = encode(d, F(str(mpmath.log(x))))
            assert nrs_fun(d, "ln", p) == want, hex(p)
        checked += 1


def test_pow_fractional():
    import mpmath

    mpmath.mp.prec = 120
    d = D("posit:32:2:RE")
    x = encode(d, F(3917, 1000))
    got = nrs_fun(d, "pow", x, y=F(67, 16))
    xv = frac_of(d, x)
    want = encode(d, F(str(mpmath.mpf(xv.numerator) / xv.denominator ** 1 * 1)))
    want = mpmath.power(mpmath.mpf(xv.numerator) / xv.denominator, mpmath.mpf(67) / 16)
    assert got == encode(d, F(str(want)))
    # integer powers are exact repeated squaring
    two = encode(d, F(2))
    assert frac_of(d, nrs_fun(d, "pow", two, y=F(10))) == 1024
    assert frac_of(d, nrs_fun(d, "pow", two, y=F(-2))) == F(1, 4)


# -- decimal accuracy ---------------------------------------------------------

def test_decimal_accuracy_basics():
    assert decimal_accuracy(F(5, 7), F(5, 7)).kind == "exact"
    assert decimal_accuracy("nar", F(1)) == AccuracyResult("wrong", 0.0)
    assert decimal_accuracy(F(-1), F(1)).kind == "wrong"
    assert decimal_accuracy(F(0), F(1)).kind == "wrong"
    assert decimal_accuracy(F(1), F(0)).kind == "wrong"
    r = decimal_accuracy(F(1001, 1000), F(1))
    assert r.kind == "digits"
    # high-precision oracle for -log10|log10(1.001)|
    import mpmath

    mpmath.mp.dps = 40
    want = -mpmath.log10(abs(mpmath.log10(mpmath.mpf(1001) / 1000)))
    assert abs(r.digits - float(want)) < 1e-9


def test_decimal_accuracy_symmetry_and_cap():
    a, b = F(312, 171), F(311, 170)
    assert abs(decimal_accuracy(a, b).digits - decimal_accuracy(b, a).digits) < 1e-9
    # ridiculously close values hit the cap
    r = decimal_accuracy(F(10**30 + 1, 10**30), F(1))
    assert r.digits == 16.0
    # ratio beyond a factor of 10 scores zero
    assert decimal_accuracy(F(100), F(1)).digits == 0.0


def test_digits_scaled_matches_fraction_route():
    rng = random.Random(17)
    for _ in range(1500):
        cm = rng.randint(1, 1 << 24)
        rm = rng.randint(1, 1 << 24)
        ce = rng.randint(-200, 200)
        re_ = rng.randint(-200, 200)
        c = F(cm) * F(2) ** ce
        r = F(rm) * F(2) ** re_
        if c == r:
            continue
        got = digits_scaled(cm, ce, rm, re_)
        want = _digits_fraction(c, r)
        assert abs(got - want) < 1e-9
