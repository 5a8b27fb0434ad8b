"""Evaluation harness: dynamic range, density, golden zone, exhaustive sweeps.

Binary sweeps iterate every ordered pattern pair of a format.  Patterns are
first collapsed into value classes (specials by class, finite values by
exact signed magnitude) with multiplicities, so formats with duplicate
encodings don't pay for their duplicates twice; results per pair are
classified against the exact rational reference.

Classification conventions (chosen to reproduce the published sweep
tables; see the ledger for the analysis):
  - pairs with a special operand, and division by zero, count as Exact:
    the reference pipeline maps them to its own error value, and
    error-equals-error is a match;
  - a finite result whose relative error sits below 2^-54 also counts as
    Exact: the accuracy ratio passes through a 64-bit double, where such
    a ratio rounds to exactly 1;
  - special results arising from finite operands (overflow to NR or
    infinity) score zero digits and stay in the inexact pool, like any
    "wrong" result (zero instead of nonzero, sign flip).

True no-information-discarded exactness is tracked separately
(`exact_arith_count`).  Sweeps are deterministic; the pair space can be
sharded across processes and the partial statistics merged.
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .bigfloat import RE
from .exact import (
    log10_int,
    log10_pow2,
    rat_root_approx,
    taylor_eval,
    UndefinedResult,
)
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
)
from .ops import (
    ACCURACY_CAP,
    decimal_accuracy,
    digits_scaled,
    error_value,
    nrs_arith,
    nrs_fun,
    working_fs,
)

HIST_BINS = int(ACCURACY_CAP * 10) + 1


@dataclass
class SweepStats:
    desc: str
    op: str
    total_pairs: int = 0
    exact_count: int = 0          # per the table convention (see module doc)
    exact_arith_count: int = 0    # strictly representable results only
    special_operand_pairs: int = 0
    special_count: int = 0        # special results from finite operands
    wrong_count: int = 0          # finite/zero results scoring zero digits
    accuracy_sum: float = 0.0     # over the inexact pool (incl. zeros above)
    histogram: list = field(default_factory=lambda: [0] * HIST_BINS)
    elapsed: float = 0.0

    @property
    def inexact_count(self):
        """Pairs in the accuracy average (everything that is not Exact)."""
        return self.total_pairs - self.exact_count

    @property
    def exact_pct(self):
        return 100.0 * self.exact_count / self.total_pairs if self.total_pairs else 0.0

    @property
    def special_pct(self):
        return 100.0 * self.special_count / self.total_pairs if self.total_pairs else 0.0

    @property
    def special_operand_pct(self):
        if not self.total_pairs:
            return 0.0
        return 100.0 * self.special_operand_pairs / self.total_pairs

    @property
    def avg_digits(self):
        n = self.inexact_count
        return self.accuracy_sum / n if n else 0.0

    @property
    def kops(self):
        return self.total_pairs / self.elapsed / 1000.0 if self.elapsed else 0.0

    def merge(self, other: "SweepStats") -> "SweepStats":
        assert (self.desc, self.op) == (other.desc, other.op)
        self.total_pairs += other.total_pairs
        self.exact_count += other.exact_count
        self.exact_arith_count += other.exact_arith_count
        self.special_count += other.special_count
        self.special_operand_pairs += other.special_operand_pairs
        self.wrong_count += other.wrong_count
        self.accuracy_sum += other.accuracy_sum
        self.histogram = [a + b for a, b in zip(self.histogram, other.histogram)]
        return self

    def row(self) -> dict:
        return {
            "desc": self.desc,
            "op": self.op,
            "total": self.total_pairs,
            "exact_pct": round(self.exact_pct, 3),
            "exact_arith_pct": round(100.0 * self.exact_arith_count / self.total_pairs, 3)
            if self.total_pairs else 0.0,
            "special_pct": round(self.special_pct, 3),
            "special_operand_pct": round(self.special_operand_pct, 3),
            "avg_digits": round(self.avg_digits, 3),
            "kops": round(self.kops, 1),
        }


# --------------------------------------------------------------------------
# value classes

def _value_classes(desc: Descriptor):
    """Collapse patterns into (kind, sign, m, e2) classes with multiplicity.

    kind 0 = finite, 1 = zero, 2 = special.  Finite magnitudes are stored
    with odd mantissas so duplicates collide.  Returns (classes, counts,
    class_index_per_pattern).
    """
    n = 1 << desc.width
    c = codec(desc)
    classes = []
    counts = []
    index = {}
    per_pattern = [0] * n
    for p in range(n):
        cls, s, m, e2 = c.decode_raw(p)
        if cls == FIN:
            while m & 1 == 0:
                m >>= 1
                e2 += 1
            key = (0, s, m, e2)
        elif cls == ZERO:
            key = (1, 0, 0, 0)
        else:
            key = (2, 0, 0, 0)
        i = index.get(key)
        if i is None:
            i = len(classes)
            index[key] = i
            classes.append(key)
            counts.append(0)
        counts[i] += 1
        per_pattern[p] = i
    return classes, counts, per_pattern


# --------------------------------------------------------------------------
# the sweep kernel

# |computed/reference - 1| below 2^-54 collapses to ratio 1.0 in a double
_LT_TAU = -54 * math.log10(2)
_LOG10_LN10 = math.log10(math.log(10))
_LOG10_2 = math.log10(2)

# score kinds
_K_DIGITS = 0
_K_WRONG = 1       # finite-or-zero result scoring zero digits
_K_SPECIAL = 2     # special result from finite operands (scores zero too)
_K_TAU_EXACT = 3   # relative error under the double-rounding threshold


def _sweep_chunk(desc: Descriptor, op: str, classes, counts, i_range,
                 grid_cells=None):
    """Accumulate sweep stats for unique-class rows i in i_range.

    For commutative ops the caller passes symmetric ranges and we fold
    (i, j) with j > i at double weight.
    """
    c = codec(desc)
    fit = c.fit
    table = [c.decode_raw(p) for p in range(1 << desc.width)]
    mode = desc.rounding
    div_shift = working_fs(desc) + 3
    commutative = op in ("add", "mul")
    st = SweepStats(desc.text, op)
    hist = st.histogram
    nclasses = len(classes)
    exact = exact_arith = special = wrong = spec_operand = 0
    acc = 0.0
    total = 0
    for i in i_range:
        ki, si, mi, ei = classes[i]
        wi = counts[i]
        js = range(i, nclasses) if commutative else range(nclasses)
        for j in js:
            kj, sj, mj, ej = classes[j]
            w = wi * counts[j]
            if commutative and j != i:
                w *= 2
            total += w
            cell = math.inf
            if ki == 2 or kj == 2 or (op == "div" and kj == 1):
                # special operand (or division by zero): the reference is
                # an error value too, which matches the computed error
                exact += w
                spec_operand += w
            elif op == "add":
                if ki == 1 or kj == 1:
                    exact += w
                    exact_arith += w  # 0 + x re-encodes exactly
                else:
                    z = ei if ei < ej else ej
                    s = (-mi if si else mi) << (ei - z)
                    s += (-mj if sj else mj) << (ej - z)
                    if s == 0:
                        exact += w
                        exact_arith += w
                    else:
                        sign = 1 if s < 0 else 0
                        mags = -s if s < 0 else s
                        p, ex = fit(sign, mags, z, False, mode)
                        if ex:
                            exact += w
                            exact_arith += w
                        else:
                            cell, kind = _score(table, p, mags, z)
                            if kind == _K_DIGITS:
                                acc += w * cell
                                hist[int(cell * 10)] += w
                            elif kind == _K_TAU_EXACT:
                                exact += w
                            else:
                                acc += 0.0
                                hist[0] += w
                                cell = 0.0
                                if kind == _K_WRONG:
                                    wrong += w
                                else:
                                    special += w
            elif op == "mul":
                if ki == 1 or kj == 1:
                    exact += w
                    exact_arith += w
                else:
                    m = mi * mj
                    z = ei + ej
                    p, ex = fit(si ^ sj, m, z, False, mode)
                    if ex:
                        exact += w
                        exact_arith += w
                    else:
                        cell, kind = _score(table, p, m, z)
                        if kind == _K_DIGITS:
                            acc += w * cell
                            hist[int(cell * 10)] += w
                        elif kind == _K_TAU_EXACT:
                            exact += w
                        else:
                            hist[0] += w
                            cell = 0.0
                            if kind == _K_WRONG:
                                wrong += w
                            else:
                                special += w
            else:  # div
                if ki == 1:
                    exact += w    # 0/x = 0 exactly
                    exact_arith += w
                else:
                    shift = div_shift + mj.bit_length() - mi.bit_length()
                    if shift < 0:
                        shift = 0
                    q, r = divmod(mi << shift, mj)
                    p, ex = fit(si ^ sj, q, ei - ej - shift, r != 0, mode)
                    if ex:
                        exact += w
                        exact_arith += w
                    else:
                        cell, kind = _score_div(table, p, mi, mj, ei - ej)
                        if kind == _K_DIGITS:
                            acc += w * cell
                            hist[int(cell * 10)] += w
                        elif kind == _K_TAU_EXACT:
                            exact += w
                        else:
                            hist[0] += w
                            cell = 0.0
                            if kind == _K_WRONG:
                                wrong += w
                            else:
                                special += w
            if grid_cells is not None:
                v = 10.0 if cell == math.inf else min(cell, 10.0)
                grid_cells[i * nclasses + j] = v
                if commutative:
                    grid_cells[j * nclasses + i] = v
    st.total_pairs = total
    st.exact_count = exact
    st.exact_arith_count = exact_arith
    st.special_count = special
    st.special_operand_pairs = spec_operand
    st.wrong_count = wrong
    st.accuracy_sum = acc
    return st


def _raw_digits(num, rm, rze_):
    """Uncapped digit score for t = num / (rm * 2^rze_); None if t == 0."""
    if num == 0:
        return None
    lt = log10_int(-num if num < 0 else num) - log10_int(rm) - rze_ * _LOG10_2
    if lt < _LT_TAU:
        return math.inf  # double-rounded ratio collapses to 1
    if lt < -6:
        return -(lt - _LOG10_LN10)
    return math.nan  # caller must use the wide-ratio path


def _score(table, p, rm, re_):
    """(digits, kind) vs reference rm*2^re (rm sign handled by caller)."""
    if isinstance(p, str):
        return 0.0, _K_SPECIAL
    cls, s, cm, ce = table[p]
    if cls == ZERO:
        return 0.0, _K_WRONG
    if cls != FIN:
        return 0.0, _K_SPECIAL
    z = ce if ce < re_ else re_
    raw = _raw_digits((cm << (ce - z)) - (rm << (re_ - z)), rm, re_ - z)
    if raw is None or raw is math.inf:
        return 0.0, _K_TAU_EXACT
    if raw == raw:  # not NaN: tiny-ratio fast path
        return (raw if raw < ACCURACY_CAP else ACCURACY_CAP), _K_DIGITS
    return digits_scaled(cm, ce, rm, re_), _K_DIGITS


def _score_div(table, p, ma, mb, ediff):
    """Score vs the exact quotient (ma * 2^ediff) / mb."""
    if isinstance(p, str):
        return 0.0, _K_SPECIAL
    cls, s, cm, ce = table[p]
    if cls == ZERO:
        return 0.0, _K_WRONG
    if cls != FIN:
        return 0.0, _K_SPECIAL
    cmb = cm * mb
    z = ce if ce < ediff else ediff
    raw = _raw_digits((cmb << (ce - z)) - (ma << (ediff - z)), ma, ediff - z)
    if raw is None or raw is math.inf:
        return 0.0, _K_TAU_EXACT
    if raw == raw:
        return (raw if raw < ACCURACY_CAP else ACCURACY_CAP), _K_DIGITS
    return digits_scaled(cmb, ce, ma, ediff), _K_DIGITS


def binary_sweep(desc: Descriptor, op: str, workers: int | None = None,
                 grid: bool = False, cap: int = 12, allow_large: bool = False):
    """Full ordered-pair sweep; returns (SweepStats, grid or None)."""
    if desc.width > cap and not allow_large:
        raise ValueError(
            f"{desc.text}: full sweep is {desc.width}-bit^2 pairs; pass "
            f"allow_large=True to run anyway"
        )
    classes, counts, per_pattern = _value_classes(desc)
    n = len(classes)
    grid_cells = [0.0] * (n * n) if grid else None
    t0 = time.perf_counter()
    if workers is None:
        workers = min(os.cpu_count() or 1, 8)
    if workers <= 1 or desc.width <= 8:
        st = _sweep_chunk(desc, op, classes, counts, range(n), grid_cells)
    else:
        st = _sweep_parallel(desc, op, classes, counts, workers)
        if grid:  # grids need the single-process pass for cell values
            _sweep_chunk(desc, op, classes, counts, range(n), grid_cells)
    st.elapsed = time.perf_counter() - t0
    out_grid = None
    if grid:
        import numpy as np

        cells = np.array(grid_cells, dtype=np.float32).reshape(n, n)
        idx = np.array(per_pattern)
        out_grid = cells[np.ix_(idx, idx)]
    assert st.total_pairs == (1 << desc.width) ** 2
    assert sum(st.histogram) == st.inexact_count  # every inexact pair binned
    return st, out_grid


def _sweep_parallel(desc, op, classes, counts, workers):
    import multiprocessing as mp

    n = len(classes)
    commutative = op in ("add", "mul")
    # balance: for commutative sweeps row i costs (n - i); pair up rows from
    # both ends so chunks are even
    order = list(range(n))
    if commutative:
        order.sort(key=lambda i: min(i, n - 1 - i))
    chunks = [order[k::workers] for k in range(workers)]
    ctx = mp.get_context("fork")
    args = [(desc, op, classes, counts, chunk, None) for chunk in chunks]
    with ctx.Pool(workers) as pool:
        parts = pool.starmap(_sweep_chunk, args)
    st = parts[0]
    for part in parts[1:]:
        st.merge(part)
    return st


# --------------------------------------------------------------------------
# characteristics

def unique_abs_values(desc: Descriptor, cap: int = 16):
    """Sorted-by-nothing list of distinct finite |values| as (m_odd, e2)."""
    if desc.width > cap:
        raise ValueError(f"{desc.text} too wide for exhaustive enumeration")
    c = codec(desc)
    seen = set()
    for p in range(1 << desc.width):
        cls, s, m, e2 = c.decode_raw(p)
        if cls != FIN:
            continue
        while m & 1 == 0:
            m >>= 1
            e2 += 1
        seen.add((m, e2))
    return seen


def dynamic_range(desc: Descriptor, cap: int = 16) -> dict:
    """Min |v|, top three distinct |v|, and log10(max/min)."""
    vals = unique_abs_values(desc, cap)
    ordered = sorted(vals, key=lambda t: log10_pow2(t[0], t[1]))
    lo = ordered[0]
    top3 = ordered[-1:-4:-1]
    dr = log10_pow2(*top3[0]) - log10_pow2(*lo)
    return {
        "desc": desc.text,
        "min_abs": lo,
        "max1": top3[0],
        "max2": top3[1] if len(top3) > 1 else None,
        "max3": top3[2] if len(top3) > 2 else None,
        "dynamic_range": dr,
    }


def _cmp_value_fraction(m: int, e2: int, frac: Fraction) -> int:
    """sign(m*2^e2 - frac) exactly, avoiding giant shifts when possible."""
    if frac <= 0:
        return 1
    approx = log10_pow2(m, e2) - (
        log10_pow2(frac.numerator, 0) - log10_pow2(frac.denominator, 0)
    )
    if approx > 1e-6:
        return 1
    if approx < -1e-6:
        return -1
    lhs = m * frac.denominator
    rhs = frac.numerator
    if e2 >= 0:
        lhs <<= e2
    else:
        rhs <<= -e2
    return (lhs > rhs) - (lhs < rhs)


def golden_zone_count(desc: Descriptor, lo: Fraction, hi: Fraction,
                      cap: int = 16) -> int:
    """Distinct finite |v| with lo < |v| < hi (open interval)."""
    if lo >= hi:
        return 0
    count = 0
    for m, e2 in unique_abs_values(desc, cap):
        if _cmp_value_fraction(m, e2, lo) > 0 and _cmp_value_fraction(m, e2, hi) < 0:
            count += 1
    return count


def density_histogram(desc: Descriptor, cap: int = 16) -> dict[int, int]:
    """Count of distinct |v| per log10 decade (floor(log10 |v|))."""
    hist: dict[int, int] = {}
    for m, e2 in unique_abs_values(desc, cap):
        l = log10_pow2(m, e2)
        d = math.floor(l)
        if abs(l - round(l)) < 1e-9:
            # near a decade boundary: settle exactly
            k = round(l)
            c = _cmp_value_fraction(m, e2, Fraction(10) ** k)
            d = k if c >= 0 else k - 1
        hist[d] = hist.get(d, 0) + 1
    return dict(sorted(hist.items()))


# --------------------------------------------------------------------------
# unary sweep

_UNARY_FUNS = ("sqrt", "ln", "inverse", "exp", "sin", "cbrt")


def _unary_reference(fun: str, v: Fraction) -> Fraction:
    if fun == "sqrt":
        return rat_root_approx(v, 2, 128)
    if fun == "cbrt":
        return rat_root_approx(v, 3, 128)
    if fun == "inverse":
        return 1 / v
    # exp/ln/sin reference is the exact 30-term series sum
    return taylor_eval(fun, v, 30)


def _in_domain(fun: str, v: Fraction) -> bool:
    if fun in ("sqrt", "ln"):
        return v > 0 if fun == "ln" else v >= 0
    if fun == "inverse":
        return v != 0
    return True


def unary_sweep(desc: Descriptor, fun: str, cap: int = 16):
    """Decimal accuracies for every finite pattern in fun's domain.

    Returns (sorted accuracies ascending, domain size).  Values are
    memoized per distinct operand value; exact results score the cap.
    """
    if fun not in _UNARY_FUNS:
        raise ValueError(f"unknown unary function {fun!r}")
    if desc.width > cap:
        raise ValueError(f"{desc.text} too wide for a unary sweep")
    c = codec(desc)
    nrs_args = {"sqrt": ("sqrt",), "cbrt": ("nth_root", 3)}.get(fun)
    memo = {}
    out = []
    for p in range(1 << desc.width):
        cls, s, m, e2 = c.decode_raw(p)
        if cls != FIN:
            continue
        key = (s, m, e2)
        if key in memo:
            out.append(memo[key])
            continue
        v = Fraction(m << e2) if e2 >= 0 else Fraction(m, 1 << -e2)
        if s:
            v = -v
        if not _in_domain(fun, v):
            continue
        if fun == "sqrt":
            rp = nrs_fun(desc, "sqrt", p)
        elif fun == "cbrt":
            rp = nrs_fun(desc, "nth_root", p, n=3)
        else:
            rp = nrs_fun(desc, fun, p)
        if isinstance(rp, str):
            computed = None
        else:
            rcls, rs, rm, re_ = c.decode_raw(rp)
            if rcls == FIN:
                computed = Fraction(rm << re_) if re_ >= 0 else Fraction(rm, 1 << -re_)
                if rs:
                    computed = -computed
            elif rcls == ZERO:
                computed = Fraction(0)
            else:
                computed = None
        try:
            ref = _unary_reference(fun, v)
        except UndefinedResult:
            continue
        if computed is None:
            d = 0.0
        else:
            r = decimal_accuracy(computed, ref)
            d = ACCURACY_CAP if r.is_exact else r.digits
        memo[key] = d
        out.append(d)
    out.sort()
    return out, len(out)


def cdf_points(accuracies: list) -> list:
    """(digits, fraction-of-results-with-at-most-that-accuracy) pairs."""
    n = len(accuracies)
    return [(d, (i + 1) / n) for i, d in enumerate(accuracies)]


# --------------------------------------------------------------------------
# throughput

def throughput(desc: Descriptor, op: str, seconds: float = 1.0,
               seed: int = 0) -> float:
    """Measured Kops of nrs_arith on random valid operand patterns."""
    import random

    rng = random.Random(seed)
    n = 1 << desc.width
    pats = [rng.randrange(n) for _ in range(4096)]
    count = 0
    i = 0
    t0 = time.perf_counter()
    deadline = t0 + seconds
    while time.perf_counter() < deadline:
        for _ in range(512):
            nrs_arith(desc, op, pats[i & 4095], pats[(i * 7 + 3) & 4095])
            i += 1
        count += 512
    dt = time.perf_counter() - t0
    return count / dt / 1000.0


# --------------------------------------------------------------------------
# artifact writers

def write_csv(path: str, rows: list[dict]) -> None:
    import csv

    with open(path, "w", newline="") as f:
        if not rows:
            return
        w = csv.DictWriter(f, fieldnames=list(rows[0].keys()))
        w.writeheader()
        w.writerows(rows)


def write_json(path: str, payload) -> None:
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, default=str)
        f.write("\n")


def write_pgm(path: str, grid) -> None:
    """P2 PGM, 256 gray levels; black = 10+ digits, white = 0."""
    import numpy as np

    arr = np.asarray(grid, dtype=np.float32)
    quant = 255 - np.clip(arr / 10.0, 0.0, 1.0) * 255.0
    quant = quant.astype(np.uint8)
    h, w = quant.shape
    with open(path, "w") as f:
        f.write(f"P2\n{w} {h}\n255\n")
        for row in quant:
            f.write(" ".join(str(int(v)) for v in row))
            f.write("\n")
