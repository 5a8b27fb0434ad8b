import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, strategies as st

from numrep import exact
from numrep.exact import (
    UndefinedResult,
    e_rational,
    int_nthroot,
    parse_rational,
    pi_rational,
    rat_arith,
    rat_pow,
    rat_root_approx,
    sci_digits,
    taylor_eval,
)

rationals = st.fractions(
    min_value=F(-1000), max_value=F(1000), max_denominator=10**6
)


def test_parse_rational():
    assert parse_rational("1/3") == F(1, 3)
    assert parse_rational("-22/7") == F(-22, 7)
    assert parse_rational("333.74") == F(33374, 100)
    assert parse_rational("1e-3") == F(1, 1000)
    assert parse_rational("-0.5") == F(-1, 2)
    assert parse_rational(".25") == F(1, 4)
    assert parse_rational("6.62607015e-34") == F(662607015, 10**42)
    with pytest.raises(ValueError):
        parse_rational("abc")
    with pytest.raises(ValueError):
        parse_rational("1/0")


def test_rat_arith_examples():
    assert rat_arith("add", F(1, 3), F(1, 6)) == F(1, 2)
    assert rat_arith("mul", F(0), F(987, 13)) == 0
    assert rat_arith("div", F(22, 7), F(11, 7)) == 2
    with pytest.raises(UndefinedResult):
        rat_arith("div", F(1), F(0))


@given(rationals, rationals, rationals)
def test_rat_arith_commutes_and_associates(a, b, c):
    assert rat_arith("add", a, b) == rat_arith("add", b, a)
    assert rat_arith("mul", a, b) == rat_arith("mul", b, a)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)


@given(rationals, rationals)
def test_rat_arith_canonical(a, b):
    r = rat_arith("add", a, b)
    assert math.gcd(r.numerator, r.denominator) == 1
    assert r.denominator > 0


def test_rat_pow():
    assert rat_pow(F(2), 10) == 1024
    assert rat_pow(F(7, 2), 2) == F(49, 4)
    assert rat_pow(F(5, 3), 0) == 1
    assert rat_pow(F(2), -3) == F(1, 8)
    with pytest.raises(UndefinedResult):
        rat_pow(F(0), -1)


def test_taylor_trivial():
    assert taylor_eval("exp", F(0), 30) == 1
    assert taylor_eval("sin", F(0), 30) == 0
    with pytest.raises(UndefinedResult):
        taylor_eval("ln", F(-1), 10)


def test_taylor_exp1_matches_e_to_30_digits():
    # independent oracle: mpmath at 60 significant digits
    mpmath.mp.dps = 60
    got = taylor_eval("exp", F(1), 30)
    err = abs(mpmath.mpf(got.numerator) / got.denominator - mpmath.e)
    assert err < mpmath.mpf(10) ** -30


def test_taylor_ln_and_sin_match_mpmath():
    mpmath.mp.dps = 50
    for x in (F(1, 2), F(2), F(10), F(7, 3)):
        got = taylor_eval("ln", x, 200)
        want = mpmath.log(mpmath.mpf(x.numerator) / x.denominator)
        assert abs(mpmath.mpf(got.numerator) / got.denominator - want) < mpmath.mpf("1e-20")
    got = taylor_eval("sin", F(1, 3), 30)
    want = mpmath.sin(mpmath.mpf(1) / 3)
    assert abs(mpmath.mpf(got.numerator) / got.denominator - want) < mpmath.mpf("1e-30")


@given(
    st.sampled_from(["exp", "sin", "ln"]),
    st.fractions(min_value=F(1, 100), max_value=F(50), max_denominator=1000),
    st.integers(min_value=1, max_value=20),
)
def test_taylor_term_recurrence(fun, x, n):
    # the (n+1)-term sum differs from the n-term sum by exactly term n
    a = taylor_eval(fun, x, n)
    b = taylor_eval(fun, x, n + 1)
    diff = b - a
    if fun == "exp":
        term = x**n / math.factorial(n)
    elif fun == "sin":
        term = (-1) ** n * x ** (2 * n + 1) / math.factorial(2 * n + 1)
    else:
        t = (x - 1) / (x + 1)
        term = 2 * t ** (2 * n + 1) / (2 * n + 1)
    assert diff == term


def test_int_nthroot():
    assert int_nthroot(0, 3) == (0, True)
    assert int_nthroot(27, 3) == (3, True)
    assert int_nthroot(26, 3) == (2, False)
    assert int_nthroot(10**30, 2) == (10**15, True)
    big = (7**40) ** 5
    assert int_nthroot(big, 5) == (7**40, True)


@given(st.integers(min_value=1, max_value=10**24), st.integers(min_value=2, max_value=7))
def test_int_nthroot_brackets(n, k):
    r, exact_flag = int_nthroot(n, k)
    assert r**k <= n < (r + 1) ** k
    assert exact_flag == (r**k == n)


def test_rat_root_examples():
    r = rat_root_approx(F(4), 2, 64)
    assert abs(r - 2) < F(1, 2**64)
    assert rat_root_approx(F(1), 5, 30) == 1
    # long-division oracle for sqrt(9976): digit-by-digit on scaled integers
    scaled = math.isqrt(9976 * 10**40)
    want = F(scaled, 10**20)
    got = rat_root_approx(F(9976), 2, 128)
    assert abs(got - want) < F(1, 10**18)
    assert str(got * 10**8 // 1)[:10] == "9987992791"  # 99.87992791...
    with pytest.raises(UndefinedResult):
        rat_root_approx(F(-4), 2, 32)
    assert rat_root_approx(F(-27), 3, 64) + 3 < F(1, 2**60)


@given(
    st.fractions(min_value=F(1, 1000), max_value=F(1000), max_denominator=10**6),
    st.integers(min_value=2, max_value=5),
)
def test_rat_root_brackets(a, n):
    p = 80
    r = rat_root_approx(a, n, p)
    tol = F(1, 2**p)
    hi = (r + tol) ** n
    lo = (r - tol) ** n if r > tol else F(0)
    assert lo <= a <= hi


def test_constants_against_mpmath():
    mpmath.mp.dps = 80
    for bits in (64, 128, 200):
        e = e_rational(bits)
        pi = pi_rational(bits)
        assert abs(mpmath.mpf(e.numerator) / e.denominator - mpmath.e) < mpmath.mpf(2) ** -bits
        assert abs(mpmath.mpf(pi.numerator) / pi.denominator - mpmath.pi) < mpmath.mpf(2) ** -bits


def test_sci_digits_exact():
    assert sci_digits(1, 0) == ("1000", 0)
    assert sci_digits(1, 10) == ("1024", 3)
    assert sci_digits(1, -1) == ("5000", -1)
    assert sci_digits(3, -2) == ("7500", -1)
    # 2**-24 = 5.9604...e-8
    assert sci_digits(1, -24) == ("5960", -8)
    # 2**8192 = 1.0907...e2466
    d, e10 = sci_digits(1, 8192)
    assert (d, e10) == ("1090", 2466)


def test_format_truncation():
    assert exact.truncate3(3.0915) == 3.091
    assert exact.truncate3(-0.8273) == -0.827
    assert exact.fraction_truncate3(F(-54767, 66192)) == "-0.827"
    assert exact.fraction_truncate3(F(6004, 1000)) == "6.004"
