"""Command-line front end: codecs, sweeps, and the benchmark suite.

Exit status: 0 on success, 1 on usage errors, 2 on refused workloads
(width over the cap) or I/O failure.  All numeric output is truncated to
three decimals, matching the tables this tool reproduces.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bench, litbench
from .exact import format_pow2_sci, parse_rational, truncate3
from .formats import (
    FIN,
    ZERO,
    CLASS_NAMES,
    Descriptor,
    decode,
    decode_raw,
    encode,
    enumerate_patterns,
    parse_descriptor,
)
from .ops import nrs_arith


class _Usage(Exception):
    pass


class _Refused(Exception):
    pass


def _desc(text: str) -> Descriptor:
    try:
        return parse_descriptor(text)
    except ValueError as e:
        raise _Usage(str(e))


def _pattern(desc: Descriptor, text: str) -> int:
    try:
        p = int(text, 0)
    except ValueError:
        raise _Usage(f"bad pattern literal {text!r}")
    if not 0 <= p < (1 << desc.width):
        raise _Usage(f"pattern {text} exceeds width {desc.width}")
    return p


def _print_decoded(desc: Descriptor, p: int) -> None:
    d = decode(desc, p)
    print(f"pattern  0x{p:0{(desc.width + 3) // 4}x}  {d.fields['bits']}")
    for k, v in d.fields.items():
        if k != "bits":
            print(f"  {k}: {v}")
    if d.cls == FIN:
        cls, s, m, e2 = decode_raw(desc, p)
        print(f"value    {d.value}  ({format_pow2_sci(m, e2, s)})")
    else:
        print(f"value    {d.class_name}")


def cmd_decode(args) -> int:
    desc = _desc(args.descriptor)
    _print_decoded(desc, _pattern(desc, args.pattern))
    return 0


def cmd_encode(args) -> int:
    desc = _desc(args.descriptor)
    try:
        x = parse_rational(args.value)
    except ValueError as e:
        raise _Usage(str(e))
    p = encode(desc, x)
    if isinstance(p, str):
        print(p)
        return 0
    _print_decoded(desc, p)
    return 0


def cmd_convert(args) -> int:
    src = _desc(args.source)
    dst = _desc(args.target)
    p = _pattern(src, args.pattern)
    cls, s, m, e2 = decode_raw(src, p)
    if cls == FIN:
        v = Fraction(m << e2) if e2 >= 0 else Fraction(m, 1 << -e2)
        q = encode(dst, -v if s else v)
    elif cls == ZERO:
        q = encode(dst, Fraction(0))
    else:
        from .ops import error_value

        q = error_value(dst)  # NaN/NaR/NR and infinities map to the error class
        if cls == 2 and dst.kind in ("ieee754", "floatp"):  # infinity preserved
            from .formats import codec

            q = codec(dst).inf_pattern(s)
    if isinstance(q, str):
        print(q)
    else:
        _print_decoded(dst, q)
    return 0


def cmd_enumerate(args) -> int:
    desc = _desc(args.descriptor)
    if desc.width > args.cap and not args.allow_large:
        raise _Refused(f"{desc.text} exceeds the {args.cap}-bit enumeration cap")
    rows = []
    for p, d in enumerate_patterns(desc, cap=max(desc.width, args.cap)):
        rows.append({
            "pattern": f"0x{p:0{(desc.width + 3) // 4}x}",
            "class": d.class_name,
            "value": str(d.value) if d.value is not None else d.class_name,
        })
    _emit(args, rows)
    print(f"{len(rows)} patterns")
    return 0


def cmd_dynamic_range(args) -> int:
    desc = _desc(args.descriptor)
    if desc.width > args.cap and not args.allow_large:
        raise _Refused(f"{desc.text} exceeds the {args.cap}-bit cap")
    r = bench.dynamic_range(desc, cap=max(desc.width, args.cap))
    row = {
        "desc": r["desc"],
        "min_abs": format_pow2_sci(*r["min_abs"]),
        "max1": format_pow2_sci(*r["max1"]),
        "max2": format_pow2_sci(*r["max2"]) if r["max2"] else "",
        "max3": format_pow2_sci(*r["max3"]) if r["max3"] else "",
        "dynamic_range": truncate3(r["dynamic_range"]),
    }
    _emit(args, [row])
    print(" ".join(f"{k}={v}" for k, v in row.items()))
    return 0


def cmd_density(args) -> int:
    desc = _desc(args.descriptor)
    if desc.width > args.cap and not args.allow_large:
        raise _Refused(f"{desc.text} exceeds the {args.cap}-bit cap")
    hist = bench.density_histogram(desc, cap=max(desc.width, args.cap))
    rows = [{"decade": k, "count": v} for k, v in hist.items()]
    _emit(args, rows)
    print(f"{sum(hist.values())} distinct absolute values over "
          f"{len(hist)} decades")
    return 0


def cmd_golden_zone(args) -> int:
    desc = _desc(args.descriptor)
    if desc.width > args.cap and not args.allow_large:
        raise _Refused(f"{desc.text} exceeds the {args.cap}-bit cap")
    lo = parse_rational(args.lo)
    hi = parse_rational(args.hi)
    n = bench.golden_zone_count(desc, lo, hi, cap=max(desc.width, args.cap))
    print(n)
    return 0


def cmd_unary_cdf(args) -> int:
    desc = _desc(args.descriptor)
    if desc.width > args.cap and not args.allow_large:
        raise _Refused(f"{desc.text} exceeds the {args.cap}-bit cap")
    accs, n = bench.unary_sweep(desc, args.function, cap=max(desc.width, args.cap))
    rows = [{"digits": truncate3(d), "cdf": truncate3((i + 1) / n)}
            for i, d in enumerate(accs)]
    _emit(args, rows)
    at3 = sum(1 for d in accs if d >= 3.0) / n if n else 0.0
    print(f"{desc.text} {args.function}: {n} inputs, "
          f"{truncate3(100 * at3)}% with >= 3 digits")
    return 0


def cmd_binary_sweep(args) -> int:
    desc = _desc(args.descriptor)
    if desc.width > args.cap and not args.allow_large:
        raise _Refused(
            f"{desc.text} is a {desc.width}-bit format: a full sweep is "
            f"2^{2 * desc.width} pairs; pass --allow-large to run it anyway"
        )
    grid = args.pgm is not None
    st, g = bench.binary_sweep(desc, args.op, workers=args.workers,
                               grid=grid, cap=desc.width, allow_large=True)
    if grid:
        bench.write_pgm(args.pgm, g)
    row = st.row()
    _emit(args, [row])
    print(f"{desc.text} {args.op}: exact {truncate3(st.exact_pct)}% "
          f"avg {truncate3(st.avg_digits)} digits "
          f"special-operands {truncate3(st.special_operand_pct)}% "
          f"({st.kops:.0f} Kops sweep rate)")
    return 0


def cmd_litbench(args) -> int:
    if args.table == "table4":
        rows = litbench.run_table4(args.descriptors or None)
    else:
        rows = litbench.run_table5(args.descriptors or None)
    _emit(args, rows)
    for r in rows:
        print("  ".join(f"{k}={v}" for k, v in r.items()))
    return 0


def cmd_throughput(args) -> int:
    desc = _desc(args.descriptor)
    kops = bench.throughput(desc, args.op, seconds=args.seconds)
    print(f"{desc.text} {args.op}: {kops:.0f} Kops")
    return 0


def _emit(args, rows) -> None:
    path = getattr(args, "csv", None)
    if path:
        try:
            bench.write_csv(path, rows)
        except OSError as e:
            raise _Refused(f"cannot write {path}: {e}")
    path = getattr(args, "json", None)
    if path:
        try:
            bench.write_json(path, rows)
        except OSError as e:
            raise _Refused(f"cannot write {path}: {e}")


def _add_out(p) -> None:
    p.add_argument("--csv", help="write rows to a CSV file")
    p.add_argument("--json", help="write rows to a JSON file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="numrep",
        description="decode/encode, exhaustive sweeps, and benchmarks for "
                    "finite number representation systems",
    )
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("decode", help="decode a bit pattern")
    p.add_argument("descriptor")
    p.add_argument("pattern")
    p.set_defaults(fn=cmd_decode)

    p = sub.add_parser("encode", help="encode a rational value")
    p.add_argument("descriptor")
    p.add_argument("value")
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("convert", help="convert a pattern between formats")
    p.add_argument("source")
    p.add_argument("pattern")
    p.add_argument("target")
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("enumerate", help="list every pattern of a format")
    p.add_argument("descriptor")
    p.add_argument("--cap", type=int, default=16)
    p.add_argument("--allow-large", action="store_true")
    _add_out(p)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("dynamic-range", help="min/max magnitudes and range")
    p.add_argument("descriptor")
    p.add_argument("--cap", type=int, default=16)
    p.add_argument("--allow-large", action="store_true")
    _add_out(p)
    p.set_defaults(fn=cmd_dynamic_range)

    p = sub.add_parser("density", help="distinct |values| per decade")
    p.add_argument("descriptor")
    p.add_argument("--cap", type=int, default=16)
    p.add_argument("--allow-large", action="store_true")
    _add_out(p)
    p.set_defaults(fn=cmd_density)

    p = sub.add_parser("golden-zone", help="distinct |values| in an interval")
    p.add_argument("descriptor")
    p.add_argument("--lo", required=True)
    p.add_argument("--hi", required=True)
    p.add_argument("--cap", type=int, default=16)
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(fn=cmd_golden_zone)

    p = sub.add_parser("unary-cdf", help="decimal-accuracy CDF of a function")
    p.add_argument("descriptor")
    p.add_argument("function",
                   choices=["sqrt", "ln", "inverse", "exp", "sin", "cbrt"])
    p.add_argument("--cap", type=int, default=16)
    p.add_argument("--allow-large", action="store_true")
    _add_out(p)
    p.set_defaults(fn=cmd_unary_cdf)

    p = sub.add_parser("binary-sweep", help="exhaustive pair sweep of an op")
    p.add_argument("descriptor")
    p.add_argument("op", choices=["add", "sub", "mul", "div"])
    p.add_argument("--cap", type=int, default=12)
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--workers", type=int,
                   default=int(os.environ.get("NUMREP_WORKERS", "0")) or None)
    p.add_argument("--pgm", help="write the accuracy color map as PGM (P2)")
    _add_out(p)
    p.set_defaults(fn=cmd_binary_sweep)

    p = sub.add_parser("litbench", help="literature benchmark tables")
    p.add_argument("table", choices=["table4", "table5"])
    p.add_argument("descriptors", nargs="*")
    _add_out(p)
    p.set_defaults(fn=cmd_litbench)

    p = sub.add_parser("throughput", help="measured Kops of one operation")
    p.add_argument("descriptor")
    p.add_argument("op", choices=["add", "sub", "mul", "div"])
    p.add_argument("--seconds", type=float, default=1.0)
    p.set_defaults(fn=cmd_throughput)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code else 0
    try:
        return args.fn(args)
    except _Usage as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except _Refused as e:
        print(f"refused: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
