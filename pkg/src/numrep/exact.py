"""Exact arithmetic layer: unbounded rationals, series, and integer roots.

All accuracy measurements in this package are made against values produced
here.  Rationals are `fractions.Fraction` (always stored in lowest terms
with a positive denominator, which matches the canonical-form invariant we
need); integers are plain Python ints.  Nothing in this module ever rounds
unless a precision is explicitly requested.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction


class UndefinedResult(ArithmeticError):
    """An operation with no defined result (division by zero, ln(x<=0), ...)."""


# --------------------------------------------------------------------------
# parsing / formatting

_RAT_RE = re.compile(
    r"""^([+-]?)(?:
        (\d+)\s*/\s*(\d+)                      # p/q
      | (\d+)(?:\.(\d+))?(?:[eE]([+-]?\d+))?   # decimal, optional exponent
      | \.(\d+)(?:[eE]([+-]?\d+))?             # .ddd
    )$""",
    re.VERBOSE,
)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", integer, or decimal strings ("333.74", "1e-3") exactly."""
    m = _RAT_RE.match(text.strip())
    if m is None:
        raise ValueError(f"not a rational literal: {text!r}")
    sign, p, q, ip, fp, ex, fp2, ex2 = m.groups()
    if p is not None:
        if int(q) == 0:
            raise ValueError(f"zero denominator: {text!r}")
        val = Fraction(int(p), int(q))
    else:
        if ip is None:
            ip, fp, ex = "0", fp2, ex2
        digits = ip + (fp or "")
        val = Fraction(int(digits), 10 ** len(fp or ""))
        if ex:
            e = int(ex)
            val = val * 10**e if e >= 0 else val / 10**-e
    return -val if sign == "-" else val


def rat_arith(op: str, a: Fraction, b: Fraction) -> Fraction:
    """Exact rational add/sub/mul/div; division by zero raises UndefinedResult."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise UndefinedResult("division by zero")
        return a / b
    raise ValueError(f"unknown op {op!r}")


def rat_pow(a: Fraction, n: int) -> Fraction:
    """Exact integer power; 0**negative raises UndefinedResult."""
    if n < 0 and a == 0:
        raise UndefinedResult("zero to a negative power")
    return a**n


# --------------------------------------------------------------------------
# series evaluation

def taylor_eval(fun: str, x: Fraction, iterations: int) -> Fraction:
    """Partial sum of a series for exp/sin/ln after exactly `iterations` terms.

    exp: sum x^k/k!, sin: sum (-1)^k x^(2k+1)/(2k+1)!, and ln in the atanh
    form 2*sum t^(2k+1)/(2k+1) with t=(x-1)/(x+1), which converges for every
    x > 0.  "iterations" counts summed terms, starting from the first.
    """
    x = Fraction(x)
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    if fun == "exp":
        s = Fraction(0)
        term = Fraction(1)
        for k in range(iterations):
            s += term
            term = term * x / (k + 1)
        return s
    if fun == "sin":
        s = Fraction(0)
        term = x
        x2 = x * x
        for k in range(iterations):
            s += term
            term = -term * x2 / ((2 * k + 2) * (2 * k + 3))
        return s
    if fun == "ln":
        if x <= 0:
            raise UndefinedResult("ln of a nonpositive value")
        t = (x - 1) / (x + 1)
        t2 = t * t
        s = Fraction(0)
        p = t
        for k in range(iterations):
            s += p / (2 * k + 1)
            p *= t2
        return 2 * s
    raise ValueError(f"unknown function {fun!r}")


# --------------------------------------------------------------------------
# integer / rational roots

def int_nthroot(n: int, k: int) -> tuple[int, bool]:
    """floor(n ** (1/k)) for n >= 0, plus an exactness flag."""
    if n < 0:
        raise UndefinedResult("even-style integer root of a negative value")
    if n == 0:
        return 0, True
    if k == 1:
        return n, True
    if k == 2:
        r = math.isqrt(n)
        return r, r * r == n
    # Newton's method on integers, rounded-up seed keeps it descending.
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x, x**k == n


def rat_root_approx(a: Fraction, n: int, precision_bits: int) -> Fraction:
    """r with |r - a**(1/n)| < 2**-precision_bits * max(1, a**(1/n)).

    Newton iteration carried out on scaled integers.  Even roots of negative
    values raise UndefinedResult; odd roots pass the sign through.
    """
    if precision_bits < 1:
        raise ValueError("precision_bits must be >= 1")
    a = Fraction(a)
    if a < 0:
        if n % 2 == 0:
            raise UndefinedResult("even root of a negative value")
        return -rat_root_approx(-a, n, precision_bits)
    if a == 0:
        return Fraction(0)
    t = 1 << (precision_bits + 2)
    scaled = a.numerator * t**n // a.denominator
    r, _ = int_nthroot(scaled, n)
    return Fraction(r, t)


# --------------------------------------------------------------------------
# high-precision constants (for references only; error < 2**-(bits+4))

def e_rational(bits: int) -> Fraction:
    """Partial exp(1) sum with the tail provably below 2**-(bits+4)."""
    s = Fraction(0)
    term = Fraction(1)
    k = 0
    bound = Fraction(1, 1 << (bits + 5))
    while term > bound:
        s += term
        k += 1
        term /= k
    return s + term


def _atan_inv(m: int, bits: int) -> Fraction:
    # atan(1/m) = sum (-1)^k / ((2k+1) m^(2k+1)); alternating, so the error
    # is below the first omitted term.
    s = Fraction(0)
    k = 0
    m2 = m * m
    p = m
    while True:
        term = Fraction(1, (2 * k + 1) * p)
        if term < Fraction(1, 1 << (bits + 6)):
            break
        s += -term if k % 2 else term
        p *= m2
        k += 1
    return s


def pi_rational(bits: int) -> Fraction:
    """Machin's formula, error below 2**-(bits+4)."""
    return 16 * _atan_inv(5, bits + 5) - 4 * _atan_inv(239, bits + 5)


# --------------------------------------------------------------------------
# exact decimal rendering (paper tables truncate, so we truncate too)

def sci_digits(m: int, e2: int, ndigits: int = 4) -> tuple[str, int]:
    """Exact leading decimal digits and exponent of m * 2**e2 (m > 0).

    Returns (digits, exp10) with len(digits) == ndigits, truncated, so the
    value is digits[0].digits[1:] * 10**exp10.
    """
    if m <= 0:
        raise ValueError("m must be positive")
    n = (m << e2) if e2 >= 0 else (m * 5**-e2)
    import sys

    need = int(n.bit_length() * _LOG10_2) + 16
    if need > sys.get_int_max_str_digits() > 0:
        sys.set_int_max_str_digits(need)
    s = str(n)
    exp10 = len(s) - 1 + (e2 if e2 < 0 else 0)
    if len(s) < ndigits:
        s += "0" * (ndigits - len(s))
    return s[:ndigits], exp10


def format_pow2_sci(m: int, e2: int, sign: int = 0) -> str:
    """Paper-style scientific string for (+/-) m * 2**e2, 3 truncated decimals."""
    if m == 0:
        return "0"
    digits, exp10 = sci_digits(m, e2, 4)
    body = f"{digits[0]}.{digits[1:]}e{exp10:+03d}"
    return "-" + body if sign else body


def truncate3(x: float) -> float:
    """Truncate toward zero to 3 decimals, the convention used for all
    reported values."""
    return math.trunc(x * 1000) / 1000


def fraction_truncate3(x: Fraction) -> str:
    """Exact 3-decimal truncation of a rational, as a string."""
    neg = x < 0
    n = abs(x.numerator) * 1000 // x.denominator
    s = f"{n // 1000}.{n % 1000:03d}"
    return "-" + s if neg and n else s


def log10_int(n: int) -> float:
    """log10 for arbitrarily large positive ints without overflow."""
    if n <= 0:
        raise ValueError("n must be positive")
    if n.bit_length() <= 900:
        return math.log10(n)
    shift = n.bit_length() - 64
    return math.log10(n >> shift) + shift * _LOG10_2


_LOG10_2 = math.log10(2)


def log10_pow2(m: int, e2: int) -> float:
    """log10(m * 2**e2) for m > 0, safe for huge exponents."""
    return log10_int(m) + e2 * _LOG10_2
