"""Command-line interface: ``clusterlab <command> [options]``.

Exit codes: 0 success, 1 input or domain error, 2 incoherent verdict when
``--expect-coherent`` is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .catalog import UnknownType, catalog_entry, default_depth, integer_matrix
from .core import NotSignSkewSymmetric, as_matrix, matrix_str
from .scalar import from_json, parse_scalar, to_json
from .skewsym import CycleInconsistent, Quiver


class InputError(ValueError):
    """Unreadable or malformed input file."""


def _enc(m) -> list:
    return [[to_json(x) for x in row] for row in m]


def _matrix_from_obj(obj):
    if isinstance(obj, dict) and "arrows" in obj:
        return Quiver.from_json(obj).weights, None
    d = None
    if isinstance(obj, dict):
        if "B" not in obj:
            raise InputError('expected a list of rows, {"B": ...} or quiver JSON')
        d = obj.get("D")
        obj = obj["B"]
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise InputError("matrix must be a list of rows")
    m = as_matrix([[from_json(x) for x in row] for row in obj])
    if d is not None:
        d = tuple(from_json(x) for x in d)
    return m, d


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def load_matrix(args) -> tuple:
    """Matrix and optional symmetrizer from ``--input`` or ``--type``."""
    if getattr(args, "type", None):
        if getattr(args, "integer", False):
            return integer_matrix(args.type), None
        return catalog_entry(args.type).matrix(), None
    if not getattr(args, "input", None):
        raise InputError("one of --input or --type is required")
    try:
        return _matrix_from_obj(load_json(args.input))
    except InputError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{args.input}: {exc}") from exc


def load_quiver(args) -> Quiver:
    m, _ = load_matrix(args)
    return Quiver.from_matrix(m)


def _depth(args) -> int:
    if args.depth is not None:
        if args.depth < 0:
            raise InputError("depth must be non-negative")
        return args.depth
    if getattr(args, "type", None):
        return default_depth(args.type)
    raise InputError("--depth is required with --input")


def _emit(obj, fmt: str, text: Optional[str] = None) -> None:
    if fmt == "text" and text is not None:
        sys.stdout.write(text)
    else:
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _kv_text(pairs) -> str:
    return "".join(f"{k}: {v}\n" for k, v in pairs)


# ---------------------------------------------------------------------------
# commands


def cmd_b_pattern(args) -> int:
    from .explore import enumerate_b_pattern

    m, _ = load_matrix(args)
    rep = enumerate_b_pattern(m, _depth(args))
    _emit(rep.to_json(), args.format, rep.to_text())
    return 0


def cmd_c_pattern(args) -> int:
    from .explore import enumerate_c_pattern

    m, d = load_matrix(args)
    rep = enumerate_c_pattern(m, _depth(args), d, verify=args.verify)
    text = rep.to_text()
    if not (args.check_sign_coherence or args.expect_coherent):
        text = text[: text.index("Coherence\n")]
    _emit(rep.to_json(), args.format, text)
    if args.verify and rep.duality_failures:
        return 1
    if args.expect_coherent and not rep.coherent:
        return 2
    return 0


def cmd_classify(args) -> int:
    from .quasiint import classify_quasi_integer, construct_integer_matrix

    q = load_quiver(args)
    verdict = classify_quasi_integer(q)
    if verdict.ok:
        cert = construct_integer_matrix(q)
        out = {"verdict": "QuasiInteger", "cycles": [list(c) for c in verdict.cycles], "certificate": cert.to_json()}
        text = _kv_text([
            ("verdict", "QuasiInteger"),
            ("B", "\n" + matrix_str(as_matrix(cert.B))),
            ("D", list(cert.D)),
            ("verified", cert.verified),
        ])
    else:
        out = {"verdict": "NotQuasiInteger", "reason": verdict.reason}
        if verdict.pair:
            out["pair"] = list(verdict.pair)
        if verdict.cycle:
            out["cycle"] = list(verdict.cycle)
        text = _kv_text([(k, v) for k, v in out.items()])
    _emit(out, args.format, text)
    return 0


def cmd_construct(args) -> int:
    from .quasiint import construct_integer_matrix

    cert = construct_integer_matrix(load_quiver(args))
    text = _kv_text([("B", "\n" + matrix_str(as_matrix(cert.B))), ("D", list(cert.D)), ("perm", list(cert.perm)),
                     ("verified", cert.verified)])
    _emit(cert.to_json(), args.format, text)
    return 0


def cmd_skew_symmetrizer(args) -> int:
    from .skewsym import find_skew_symmetrizer

    m, _ = load_matrix(args)
    d = find_skew_symmetrizer(m)
    _emit({"D": [to_json(x) for x in d]}, args.format, _kv_text([("D", "(" + ", ".join(str(x) for x in d) + ")")]))
    return 0


def cmd_sk(args) -> int:
    from .skewsym import sk

    m, _ = load_matrix(args)
    s = sk(m)
    _emit({"Sk": _enc(s), "quiver": Quiver(s).to_json()}, args.format, matrix_str(s) + "\n")
    return 0


def cmd_fan(args) -> int:
    from .geometry import g_fan

    m, d = load_matrix(args)
    rep = g_fan(m, _depth(args), d, verify=args.verify)
    text = _kv_text([("cones", len(rep.cones)), ("rays", rep.rays)]
                    + ([("fan_verified", rep.verdict.passed)] if rep.verdict else []))
    _emit(rep.to_json(), args.format, text)
    if rep.verdict is not None and not rep.verdict.passed:
        return 1
    return 0


def cmd_exchange_graph(args) -> int:
    from .geometry import build_exchange_graph

    m, d = load_matrix(args)
    g = build_exchange_graph(m, args.kind, _depth(args), d)
    lines = [f"kind: {g.kind}", f"vertices: {g.size}", f"regular: {g.is_regular()}"]
    for i, nbrs in enumerate(g.adjacency):
        lines.append(f"{list(g.words[i])}: " + " ".join(str(list(g.words[j])) for j in sorted(nbrs)))
    _emit(g.to_json(), args.format, "\n".join(lines) + "\n")
    return 0


def cmd_rank2(args) -> int:
    from .rank2 import CoherentInfinite, CoxeterFinite, classify_rank2, rank2_fan

    a = parse_scalar(args.a)
    b = parse_scalar(args.b) if args.b is not None else a
    verdict = classify_rank2(a, b)
    out = {"a": to_json(a), "b": to_json(b), "verdict": verdict.kind}
    if isinstance(verdict, CoxeterFinite):
        out["m"] = verdict.m
    elif isinstance(verdict, CoherentInfinite):
        out["certificate"] = verdict.certificate
    else:
        out["word"] = list(verdict.word)
        out["column"] = verdict.column
        out["vector"] = [to_json(x) for x in verdict.vector]
    svg = None
    if verdict.coherent:
        fan = rank2_fan(a, b, args.depth)
        out["cones"] = len(fan.cones)
        svg = fan.to_svg()
        if args.svg:
            with open(args.svg, "w", encoding="utf-8") as fh:
                fh.write(svg)
    if args.format == "svg":
        if svg is None:
            raise InputError("no fan to draw: the pattern is incoherent")
        sys.stdout.write(svg)
        return 0
    pairs = [("a", a), ("b", b), ("verdict", verdict.kind)]
    if isinstance(verdict, CoxeterFinite):
        pairs.append(("m", verdict.m))
    elif not verdict.coherent:
        pairs += [("word", list(verdict.word)), ("column", verdict.column),
                  ("vector", "(" + ", ".join(str(x) for x in verdict.vector) + ")")]
    if "cones" in out:
        pairs.append(("cones", out["cones"]))
    _emit(out, args.format, _kv_text(pairs))
    if args.expect_coherent and not verdict.coherent:
        return 2
    return 0


def cmd_catalog(args) -> int:
    ent = catalog_entry(args.name)
    q = ent.quiver()
    out = {"name": ent.name, "B": _enc(ent.matrix()), "quiver": q.to_json(), "default_depth": default_depth(args.name)}
    _emit(out, args.format, f"{ent.name}\n{matrix_str(ent.matrix())}\n")
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_source(p, depth: bool = True) -> None:
    p.add_argument("--input", help="matrix JSON: list of rows, {\"B\": rows, \"D\": diag} or quiver JSON")
    p.add_argument("--type", help="catalog type such as H3, F4, I2(7)")
    p.add_argument("--integer", action="store_true", help="with --type: use the integer matrix of a crystallographic type")
    if depth:
        p.add_argument("--depth", type=int, help="mutation depth (defaults per catalog type)")


def _add_format(p, choices=("json", "text")) -> None:
    p.add_argument("--format", choices=choices, default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clusterlab", description="Exact C-, G-pattern exploration for real exchange matrices.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("b-pattern", help="distinct B-matrices up to permutation")
    _add_source(p)
    _add_format(p)
    p.set_defaults(func=cmd_b_pattern)

    p = sub.add_parser("c-pattern", help="distinct (B, C) pairs up to permutation")
    _add_source(p)
    _add_format(p)
    p.add_argument("--check-sign-coherence", action="store_true", help="include the coherence section")
    p.add_argument("--expect-coherent", action="store_true", help="exit 2 when a C-matrix is incoherent")
    p.add_argument("--verify", action="store_true", help="check the duality identities at every node")
    p.set_defaults(func=cmd_c_pattern)

    p = sub.add_parser("classify-quasi-integer", help="decide quasi-integer type and build a certificate")
    _add_source(p, depth=False)
    _add_format(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("construct-integer", help="integer matrix whose Sk is the quiver")
    _add_source(p, depth=False)
    _add_format(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("skew-symmetrizer", help="normalized skew-symmetrizer D")
    _add_source(p, depth=False)
    _add_format(p)
    p.set_defaults(func=cmd_skew_symmetrizer)

    p = sub.add_parser("sk", help="skew-symmetric form Sk(B)")
    _add_source(p, depth=False)
    _add_format(p)
    p.set_defaults(func=cmd_sk)

    p = sub.add_parser("fan", help="G-cones, ray count and optional fan verification")
    _add_source(p)
    _add_format(p)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_fan)

    p = sub.add_parser("exchange-graph", help="exchange graph of one of the five patterns")
    _add_source(p)
    _add_format(p)
    p.add_argument("--kind", choices=("C", "G", "fan", "modC", "modG"), default="C")
    p.set_defaults(func=cmd_exchange_graph)

    p = sub.add_parser("rank2", help="classify [[0,-a],[b,0]] and draw its fan")
    p.add_argument("--a", required=True, help="scalar such as 6/5, sqrt(2), cos(7)")
    p.add_argument("--b", help="defaults to a")
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--svg", help="write the fan drawing here")
    p.add_argument("--expect-coherent", action="store_true")
    _add_format(p, ("json", "text", "svg"))
    p.set_defaults(func=cmd_rank2)

    p = sub.add_parser("catalog", help="Coxeter quiver by name")
    p.add_argument("name")
    _add_format(p)
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, UnknownType, NotSignSkewSymmetric, CycleInconsistent, ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"clusterlab: error: {exc}\n")
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
