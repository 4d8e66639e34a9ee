"""Command-line front end.

Exit codes: 0 on success, 1 on a domain error (bad input, unstable split,
failed reproduction), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import difflib
import io
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable

from ffrt.fedder import fedder_monomial_ideal, fedder_principal
from ffrt.field_poly import Ring, format_monomial, format_poly, is_prime
from ffrt.matfac import InstabilityError, count_power_summands
from ffrt.monomial import decompose_monomial_quotient
from ffrt.relmat import block_order_labels, build_rel_matrix
from ffrt.signature import (
    artin_schreier_count,
    signature_sharp,
    signature_uv_empirical,
)

MATRIX_LIMIT = 10**6


class DomainError(Exception):
    pass


@dataclass
class RunConfig:
    prime: int
    vars: int | None = None
    level: int | None = None
    precision: int | None = None
    fmt: str = "json"
    output: str | None = None


# serialization


def rational(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator, "float": float(x)}


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def dump_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# input parsing

_XK = re.compile(r"\bx(\d+)\b")
_LETTER = re.compile(r"\b([xyz])\b")


def infer_vars(text: str) -> int:
    """Smallest variable count that makes every identifier in ``text`` valid."""
    idx = [int(k) for k in _XK.findall(text)]
    if idx:
        return max(idx)
    letters = _LETTER.findall(text)
    return max(("xyz".index(c) + 1 for c in letters), default=1)


def make_ring(cfg: RunConfig, *texts: str) -> Ring:
    """Ring for the expressions; keeps the names x, y, z when those are the ones used."""
    if not is_prime(cfg.prime):
        raise DomainError(f"{cfg.prime} is not prime")
    n = cfg.vars if cfg.vars is not None else max(infer_vars(t) for t in texts)
    if n < 1:
        raise DomainError("need at least one variable")
    lettered = any(_LETTER.search(t) for t in texts) and not any(_XK.search(t) for t in texts)
    if lettered and n <= 3:
        return Ring(cfg.prime, n, ("x", "y", "z")[:n])
    return Ring(cfg.prime, n)


def parse_monomials(ring: Ring, text: str) -> list[tuple[int, ...]]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise DomainError(f"empty generator in {text!r}")
        g = ring.parse(part)
        if not g.is_monomial():
            raise DomainError(f"{part!r} is not a monomial")
        out.append(next(iter(g.terms)))
    return out


def parse_exponents(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise DomainError(f"bad exponent list {text!r}") from exc
    if not vals or min(vals) < 1:
        raise DomainError("exponents must be positive integers")
    return vals


def check_level(e: int):
    if e < 1:
        raise DomainError("level must be >= 1")


def guard_size(p: int, e: int, n: int, force: bool):
    size = (p**e) ** n
    if size > MATRIX_LIMIT and not force:
        raise DomainError(f"basis size q^n = {size} exceeds {MATRIX_LIMIT}; pass --force to continue")


def env_precision(explicit: int | None) -> int | None:
    if explicit is not None:
        return explicit
    raw = os.environ.get("FFRT_PRECISION")
    if raw is None or raw == "":
        return None
    try:
        value = int(raw)
    except ValueError as exc:
        raise DomainError(f"FFRT_PRECISION must be an integer, got {raw!r}") from exc
    if value < 1:
        raise DomainError("FFRT_PRECISION must be >= 1")
    return value


# subcommands; each returns the rendered output text


def relmat_payload(p: int, e: int, n: int, text: str, force: bool = False) -> tuple[dict, Ring]:
    check_level(e)
    ring = make_ring(RunConfig(p, n), text)
    guard_size(p, e, ring.nvars, force)
    f = ring.parse(text)
    if f.is_zero():
        raise DomainError("the zero polynomial has no matrix of relations")
    A = build_rel_matrix(f, e)
    entries = [{"row": i, "col": j, "poly": format_poly(v)} for i, j, v in A.entries()]
    return {"p": p, "e": e, "n": ring.nvars, "size": A.size, "entries": entries}, ring


def cmd_relmat(args) -> str:
    payload, ring = relmat_payload(args.prime, args.level, args.vars, args.poly, args.force)
    if args.format == "json":
        return dump_json(payload)
    if args.format == "csv":
        return dump_csv(["row", "col", "poly"], [[x["row"], x["col"], x["poly"]] for x in payload["entries"]])
    size = payload["size"]
    grid = [["0"] * size for _ in range(size)]
    for x in payload["entries"]:
        grid[x["row"]][x["col"]] = x["poly"]
    width = max((len(c) for row in grid for c in row), default=1)
    basis = build_rel_matrix(ring.one(), args.level).labels
    lines = [f"# basis: {', '.join(format_monomial(m, ring.names) for m in basis)}"]
    lines += ["  ".join(c.rjust(width) for c in row) for row in grid]
    return "\n".join(lines) + "\n"


def cmd_count(args) -> str:
    check_level(args.level)
    ring = make_ring(RunConfig(args.prime, args.vars), args.poly)
    guard_size(args.prime, args.level, ring.nvars, args.force)
    f = ring.parse(args.poly)
    q = args.prime**args.level
    if not 0 <= args.power <= q:
        raise DomainError(f"--power must lie in [0, {q}]")
    N = env_precision(args.precision)
    res = count_power_summands(f, args.power, args.level, N)
    payload = {"t": res.t, "r": res.r, "reduced_size": res.reduced_size, "precision_used": res.precision_used}
    if args.format == "json":
        return dump_json(payload)
    if args.format == "csv":
        return dump_csv(list(payload), [list(payload.values())])
    return "".join(f"{k}: {v}\n" for k, v in payload.items())


def decompose_payload(p: int, e: int, n: int | None, text: str) -> dict:
    check_level(e)
    ring = make_ring(RunConfig(p, n), text)
    guard_size(p, e, ring.nvars, True)
    gens = parse_monomials(ring, text)
    dec = decompose_monomial_quotient(gens, p, e)
    return dec.to_dict(ring.names)


def cmd_decompose(args) -> str:
    payload = decompose_payload(args.prime, args.level, args.vars, args.ideal)
    if args.format == "json":
        return dump_json(payload)
    rows = [["(" + ", ".join(s["ideal"]) + ")", s["multiplicity"]] for s in payload["summands"]]
    if args.format == "csv":
        return dump_csv(["ideal", "multiplicity"], rows)
    return "".join(f"(S/{ideal})^{m}\n" for ideal, m in rows) + f"total: {payload['total']}\n"


def signature_payload(kind: str, p: int, exponents: tuple[int, ...], e_min: int, e_max: int) -> dict:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if e_min < 1 or e_max < e_min:
        raise DomainError("need 1 <= --e-min <= --e-max")
    fn = signature_uv_empirical if kind == "uv" else signature_sharp
    report = fn(exponents, p, range(e_min, e_max + 1))
    return {
        "kind": kind,
        "p": p,
        "exponents": list(exponents),
        "dimension": report.dimension,
        "alpha": report.alpha,
        "exact": rational(report.exact) if report.exact is not None else None,
        "estimates": [{"e": x.e, "a_e": x.count, "ratio": rational(x.ratio)} for x in report.estimates],
    }


def artin_schreier_payload(p: int, n: int | None, text: str, d: int, N: int | None, force: bool) -> dict:
    if d < 1:
        raise DomainError("--d must be >= 1")
    ring = make_ring(RunConfig(p, n), text)
    guard_size(p, d, ring.nvars, force)
    f = ring.parse(text)
    a, used = artin_schreier_count(f, d, N)
    value = Fraction(a, p ** (ring.nvars * d))
    return {
        "kind": "artin-schreier",
        "p": p,
        "poly": format_poly(f),
        "d": d,
        "dimension": ring.nvars,
        "alpha": 0,
        "exact": rational(value),
        "estimates": [{"e": d, "a_e": a, "ratio": rational(value)}],
        "precision_used": used,
    }


def cmd_signature(args) -> str:
    if args.kind == "artin-schreier":
        if args.poly is None:
            raise DomainError("artin-schreier needs --poly")
        payload = artin_schreier_payload(
            args.prime, args.vars, args.poly, args.d, env_precision(args.precision), args.force
        )
    else:
        if args.exponents is None:
            raise DomainError(f"{args.kind} needs --exponents")
        payload = signature_payload(args.kind, args.prime, parse_exponents(args.exponents), args.e_min, args.e_max)
    if args.format == "json":
        return dump_json(payload)
    rows = [
        [x["e"], x["a_e"], x["ratio"]["num"], x["ratio"]["den"], repr(x["ratio"]["float"])]
        for x in payload["estimates"]
    ]
    if args.format == "csv":
        return dump_csv(["e", "a_e", "ratio_num", "ratio_den", "ratio_float"], rows)
    out = io.StringIO()
    if payload["exact"] is not None:
        ex = payload["exact"]
        out.write(f"exact: {ex['num']}/{ex['den']} ({ex['float']:.6g})\n")
    for e, a, num, den, fl in rows:
        out.write(f"e={e}  a_e={a}  ratio={num}/{den} ({float(fl):.6g})\n")
    return out.getvalue()


def fpure_payload(p: int, n: int | None, poly: str | None, ideal: str | None) -> dict:
    text = poly if poly is not None else ideal
    ring = make_ring(RunConfig(p, n), text)
    if poly is not None:
        verdict = fedder_principal(ring.parse(poly))
    else:
        verdict = fedder_monomial_ideal(parse_monomials(ring, ideal), p)
    payload = {
        "f_pure": verdict.f_pure,
        "witness": format_monomial(verdict.witness, ring.names) if verdict.witness is not None else None,
    }
    if verdict.colon is not None:
        payload["colon"] = [format_monomial(g, ring.names) for g in verdict.colon]
    return payload


def cmd_fpure(args) -> str:
    payload = fpure_payload(args.prime, args.vars, args.poly, args.ideal)
    if args.format == "json":
        return dump_json(payload)
    lines = [f"f_pure: {str(payload['f_pure']).lower()}", f"witness: {payload['witness'] or '-'}"]
    if "colon" in payload:
        lines.append(f"colon: ({', '.join(payload['colon'])})")
    return "\n".join(lines) + "\n"


# reproduction targets


def _matrix_example() -> dict:
    """The 9x9 matrix for x^2 + xy at p = 3, rows and columns in the 1, x, x^2, y, ... order."""
    ring = Ring(3, 2, ("x", "y"))
    A = build_rel_matrix(ring.parse("x^2 + x*y"), 1)
    order = block_order_labels(((0,), (1,), (2,)), 3)
    B = A.permuted(order)
    return {
        "basis": [format_monomial(m, ring.names) for m in order],
        "rows": [[format_poly(v) for v in row] for row in B.to_rows()],
    }


def _uv_2_3() -> dict:
    return signature_payload("uv", 5, (2, 3), 1, 8)


def _uv_1_over_d() -> dict:
    return {str(d): signature_payload("uv", 3, (d,), 10, 10) for d in range(2, 11)}


def _sharp_squarefree() -> dict:
    return {str(n): signature_payload("sharp", 3, (1,) * n, 1, 6) for n in range(1, 6)}


def _ideal_decomp() -> dict:
    return decompose_payload(2, 1, 2, "x1^2, x1*x2")


TARGETS: dict[str, Callable[[], dict]] = {
    "matrix-example": _matrix_example,
    "uv-2-3": _uv_2_3,
    "uv-1-over-d": _uv_1_over_d,
    "sharp-squarefree": _sharp_squarefree,
    "ideal-decomp": _ideal_decomp,
}


def expected_artifact(target: str) -> str:
    return resources.files("ffrt").joinpath("expected", f"{target}.json").read_text()


def reproduce(target: str) -> tuple[bool, str]:
    """Run ``target`` and diff against its checked-in artifact."""
    got = dump_json(TARGETS[target]())
    want = expected_artifact(target)
    if got == want:
        return True, ""
    diff = difflib.unified_diff(
        want.splitlines(keepends=True), got.splitlines(keepends=True), f"expected/{target}.json", "computed"
    )
    return False, "".join(diff)


def cmd_reproduce(args) -> str:
    targets = list(TARGETS) if args.target == "all" else [args.target]
    lines, failed = [], []
    for t in targets:
        ok, diff = reproduce(t)
        lines.append(f"{'PASS' if ok else 'FAIL'} {t}")
        if not ok:
            failed.append(t)
            lines.append(diff.rstrip("\n"))
    text = "\n".join(lines) + "\n"
    if failed:
        raise ReproduceFailure(text)
    return text


class ReproduceFailure(DomainError):
    pass


# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ffrt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("json", "text")):
        p.add_argument("-p", "--prime", type=int, required=True)
        p.add_argument("--format", choices=formats, default="json")
        p.add_argument("-o", "--output", help="write to this file instead of stdout")

    p = sub.add_parser("relmat", help="matrix of relations M(f, e)")
    common(p, ("json", "text", "csv"))
    p.add_argument("-e", "--level", type=int, required=True)
    p.add_argument("-n", "--vars", type=int)
    p.add_argument("--poly", required=True)
    p.add_argument("--force", action="store_true", help="allow bases larger than 10^6")
    p.set_defaults(func=cmd_relmat)

    p = sub.add_parser("count-summands", help="split (M(f^k), M(f^(q-k))) into trivial blocks")
    common(p, ("json", "text", "csv"))
    p.add_argument("-e", "--level", type=int, required=True)
    p.add_argument("-n", "--vars", type=int)
    p.add_argument("--poly", required=True)
    p.add_argument("-k", "--power", type=int, required=True)
    p.add_argument("--precision", type=int)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("decompose", help="F_*^e(S/I) for a monomial ideal I")
    common(p, ("json", "text", "csv"))
    p.add_argument("-e", "--level", type=int, required=True)
    p.add_argument("-n", "--vars", type=int)
    p.add_argument("--ideal", required=True, help='comma-separated monomials, e.g. "x1^2, x1*x2"')
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("signature", help="F-signature of x^d + uv, x^d + z^2, or y^(p^d) + f")
    p.add_argument("kind", choices=("uv", "sharp", "artin-schreier"))
    common(p, ("json", "csv", "text"))
    p.add_argument("--exponents", help='exponent vector, e.g. "2,3"')
    p.add_argument("--e-min", type=int, default=1)
    p.add_argument("--e-max", type=int, default=6)
    p.add_argument("--poly")
    p.add_argument("-n", "--vars", type=int)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--precision", type=int)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_signature)

    p = sub.add_parser("fpure", help="Fedder's criterion")
    common(p)
    p.add_argument("-n", "--vars", type=int)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--poly")
    g.add_argument("--ideal")
    p.set_defaults(func=cmd_fpure)

    p = sub.add_parser("reproduce", help="rerun a bundled example and diff against its artifact")
    p.add_argument("target", choices=(*TARGETS, "all"))
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except ReproduceFailure as exc:
        sys.stdout.write(str(exc))
        return 1
    except (DomainError, ValueError, InstabilityError) as exc:
        if args.format == "json":
            err = {"error": type(exc).__name__, "message": str(exc)}
            sys.stderr.write(json.dumps(err) + "\n")
        else:
            sys.stderr.write(f"error: {exc}\n")
        return 1
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0
