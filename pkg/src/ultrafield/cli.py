"""Command-line front end: ``ultrafield <command> ...``.

Exit status: 0 on success, 1 when a mathematical check fails, 2 on malformed
input.  All output is deterministic for fixed inputs and seeds.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import jsonio
from .embed import broughan_embed, check_certificate, embed_space, stream_embed
from .errors import SchemaError, UltrafieldError
from .hahn import SeriesBase
from .padic_hahn import normalize
from .umetric import random_ultrametric, verify_ultrametric
from .urysohn import delta, injective_extend, petal_distance
from .valuecore import INF, CharMode, Generator, PrimeField, format_exponent, is_prime
from .witt import PadicInt, base_digits, padic_arith, teich_digits, teichmuller_lift

__all__ = ["main", "run"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError("", f"usage: {message}")


def _read(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SchemaError("", f"cannot read {path}: {exc.strerror}") from None
    return jsonio.load_json(text)


# -- text rendering ------------------------------------------------------------

def _coeff_text(c) -> str:
    if isinstance(c, Generator):
        return str(c) if c.is_pure else f"({c.scale})·b_{c.index}"
    if isinstance(c, PrimeField):
        return str(c.value)
    s = str(c)
    return f"({s})" if "/" in s or s.startswith("-") else s


def series_text(x: SeriesBase) -> str:
    parts = [f"{_coeff_text(c)}·τ^{{{format_exponent(g)}}}" for g, c in x.terms]
    if x.trunc is not INF:
        parts.append(f"O(τ^{{{format_exponent(x.trunc)}}})")
    return " + ".join(parts) if parts else "0"


def distance_text(g, eta=None) -> str:
    if g is INF:
        return "0"
    s = f"η^{{-{format_exponent(g)}}}" if g >= 0 else f"η^{{{format_exponent(-g)}}}"
    if eta is not None:
        s += f" = {float(eta) ** -float(g):.6g}"
    return s


# -- commands ------------------------------------------------------------------

def _mode(args) -> CharMode:
    p = args.p if args.p is not None else (2 if args.mode == "mixed" else 0)
    try:
        return CharMode(args.mode, p)
    except ValueError as exc:
        raise SchemaError("", str(exc)) from None


def cmd_verify(args):
    X, _ = jsonio.space_from_json(_read(args.space), check=False)
    ok, triple = verify_ultrametric(X.labels, X.exponents)
    out = {"ultrametric": ok, "points": len(X)}
    if not ok:
        out["violation"] = list(triple)
    text = "ultrametric: yes" if ok else f"ultrametric: no, violated at {tuple(triple)}"
    return (0 if ok else 1), out, text


def _load_space(path):
    X, eta = jsonio.space_from_json(_read(path))
    return X, eta


def _state_text(state, eta=None) -> str:
    lines = [f"mode {state.mode}, sentinel {state.sentinel}, base point {state.x0}, "
             f"g0 {format_exponent(state.g0)}"]
    for x in state.order:
        lines.append(f"H({x}) = {series_text(state.images[x])}")
    lines.append(f"generators used: {state.generator_count}")
    return "\n".join(lines)


def cmd_embed(args):
    X, eta = _load_space(args.space)
    order = args.order.split(",") if args.order else None
    state = embed_space(X, _mode(args), x0=args.x0, g0=args.g0, order=order)
    return 0, jsonio.state_to_json(state), _state_text(state, eta if args.eta is None else args.eta)


def _witness_json(w):
    if w is None:
        return None
    if isinstance(w, tuple):
        return [_witness_json(v) for v in w]
    if isinstance(w, (Generator, PrimeField)):
        return jsonio.coeff_to_json(w)
    if isinstance(w, Fraction) or w is INF:
        return format_exponent(w)
    return w


def cmd_check(args):
    state = jsonio.state_from_json(_read(args.images))
    X, eta = _load_space(args.space)
    try:
        cert = check_certificate(state, X)
    except ValueError as exc:
        raise SchemaError("/images", str(exc)) from None
    checks = {name: {"status": c.status, "witness": _witness_json(c.witness), "note": c.note}
              for name, c in cert.checks.items()}
    out = {"passed": cert.passed, "checks": checks,
           "note": "P1-style full injectivity is not finitely checkable; only the listed conditions are"}
    lines = [f"{name}: {c.status}" + (f"  witness {_witness_json(c.witness)}" if c.witness is not None
                                      and not c.passed else "")
             for name, c in cert.checks.items()]
    lines.append("certificate: " + ("pass" if cert.passed else "FAIL"))
    for c in cert.failures():
        print(f"{c.name} failed: witness {_witness_json(c.witness)}", file=sys.stderr)
    return (0 if cert.passed else 1), out, "\n".join(lines)


def cmd_extend(args):
    state = jsonio.state_from_json(_read(args.state))
    node = _read(args.distances)
    if not isinstance(node, dict):
        raise SchemaError("", "distances must be an object keyed by label")
    exps = {k: jsonio.exp_from_json(v, jsonio._ptr("", k)) for k, v in node.items()}
    new = stream_embed(state, args.label, exps, attained=not args.unattained)
    return 0, jsonio.state_to_json(new), _state_text(new)


def cmd_teich(args):
    p, a, N = args.p_arg, args.a, args.N
    if not is_prime(p):
        raise SchemaError("", f"p must be prime, got {p}")
    if not 0 <= a < p or N < 1:
        raise SchemaError("", "need 0 <= a < p and N >= 1")
    lift = teichmuller_lift(a, p, N)
    reductions = {f"{p}^{k}": lift % p ** k for k in range(1, N + 1)}
    check = a == 0 or pow(lift, p - 1, p ** N) == 1
    w = PadicInt(lift, p, N)
    out = {
        "p": p, "a": a, "N": N,
        "lift": lift,
        "reductions": reductions,
        "digits": base_digits(lift, p, N),
        "teich_digits": teich_digits(w),
        "fixed_point": pow(lift, p, p ** N) == lift,
        "unit_check": check,
    }
    lines = [f"omega({a}) = {lift} mod {p}^{N}"]
    lines += [f"  mod {k}: {v}" for k, v in reductions.items()]
    lines.append(f"  base-{p} digits: {out['digits']}")
    if a:
        lines.append(f"  check: {lift}^{p - 1} = {pow(lift, p - 1, p ** N)} mod {p}^{N}")
    return (0 if check and out["fixed_point"] else 1), out, "\n".join(lines)


def cmd_normalize(args):
    p, terms, trunc = jsonio.raw_terms_from_json(_read(args.raw))
    if args.trunc is not None:
        trunc = min(trunc, jsonio.exp_from_json(args.trunc))
    x = normalize(terms, p, trunc)
    return 0, jsonio.series_to_json(x), series_text(x)


def _load_operand(path):
    node = _read(path)
    if isinstance(node, dict) and "N" in node:
        return jsonio.padic_from_json(node)
    return jsonio.series_from_json(node)


def cmd_arith(args):
    x = _load_operand(args.x)
    if args.op == "inv":
        if args.y is not None:
            raise SchemaError("", "inv takes a single operand")
        if not isinstance(x, SeriesBase):
            raise SchemaError("", "inv applies to series")
        if args.trunc is None:
            raise SchemaError("", "inv needs --trunc (the target order)")
        r = x.invert(jsonio.exp_from_json(args.trunc))
        return 0, jsonio.series_to_json(r), series_text(r)
    if args.y is None:
        raise SchemaError("", f"{args.op} needs two operands")
    y = _load_operand(args.y)
    if isinstance(x, PadicInt) != isinstance(y, PadicInt):
        raise SchemaError("", "cannot mix p-adic integers and series")
    if isinstance(x, PadicInt):
        r = padic_arith(x, y, args.op)
        return 0, jsonio.padic_to_json(r), str(r)
    if args.op == "divexact":
        raise SchemaError("", "divexact applies to p-adic integers")
    if args.trunc is not None:
        t = jsonio.exp_from_json(args.trunc)
        x, y = x.truncate_below(t), y.truncate_below(t)
    r = {"add": lambda: x + y, "sub": lambda: x - y, "mul": lambda: x * y}[args.op]()
    return 0, jsonio.series_to_json(r), series_text(r)


def _exponent_list(node, path=""):
    if isinstance(node, dict):
        node = jsonio._obj(node, path, required=("exponents",))["exponents"]
        path = jsonio._ptr(path, "exponents")
    items = jsonio._list(node, path)
    return [jsonio.exp_from_json(v, jsonio._ptr(path, i)) for i, v in enumerate(items)]


def cmd_urysohn(args):
    if args.action == "delta":
        f = jsonio.point_from_json(_read(args.first))
        h = jsonio.point_from_json(_read(args.second))
        g = delta(f, h)
        return 0, {"exponent": format_exponent(g)}, distance_text(g, args.eta)
    if args.action == "piece-dist":
        node = _read(args.first)
        is_point = isinstance(node, dict) and "support" in node
        x = jsonio.point_from_json(node) if is_point else jsonio.series_from_json(node)
        try:
            S = _exponent_list(_read(args.second))
            g, y = petal_distance(x, S)
        except ValueError as exc:
            raise SchemaError("", str(exc)) from None
        wj = jsonio.point_to_json(y) if is_point else jsonio.series_to_json(y)
        out = {"exponent": format_exponent(g), "witness": wj}
        return 0, out, f"distance {distance_text(g, args.eta)}"
    node = _read(args.first)
    if isinstance(node, dict):
        node = jsonio._obj(node, "", required=("points",))["points"]
        base = "/points"
    else:
        base = ""
    pts = [jsonio.point_from_json(v, jsonio._ptr(base, i))
           for i, v in enumerate(jsonio._list(node, base))]
    B, _ = _load_space(args.second)
    f = injective_extend(pts, B)
    text = ", ".join(f"{format_exponent(g)}:{m}" for g, m in f.support) or "(empty)"
    return 0, jsonio.point_to_json(f), text


def cmd_broughan(args):
    X, eta = _load_space(args.space)
    p = args.p if args.p is not None else 3
    state = broughan_embed(X, p, x0=args.x0, g0=args.g0)
    out = jsonio.state_to_json(state)
    out["report"] = {
        "p": p,
        "points": len(X),
        "generators": state.generator_count,
        "transcendence_degree_required": state.generator_count,
    }
    text = _state_text(state) + f"\ntranscendence degree required: {state.generator_count}"
    return 0, out, text


def cmd_gen(args):
    X = random_ultrametric(args.n, depth=args.depth, seed=args.seed,
                           denominator=args.denominator)
    out = jsonio.space_to_json(X, args.eta)
    lines = [" ".join(X.labels)]
    for x, row in zip(X.labels, X.exponents):
        lines.append(f"{x}: " + " ".join(format_exponent(g) for g in row))
    return 0, out, "\n".join(lines)


# -- wiring --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--report", choices=("json", "text"), default="json")
    common.add_argument("--eta", type=Fraction, default=None, help="numeric eta for display")
    common.add_argument("-o", "--output", default=None)

    modal = _Parser(add_help=False)
    modal.add_argument("--mode", choices=("equal", "mixed"), default="equal")
    modal.add_argument("--p", type=int, default=None)
    modal.add_argument("--x0", default=None)
    modal.add_argument("--g0", default=None)

    parser = _Parser(prog="ultrafield", description="Exact non-Archimedean fields and ultrametric embeddings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify", parents=[common], help="check the strong triangle inequality")
    s.add_argument("space")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("embed", parents=[common, modal], help="embed a space")
    s.add_argument("space")
    s.add_argument("--order", default=None, help="comma-separated insertion order")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("check", parents=[common], help="certify an embedding")
    s.add_argument("images")
    s.add_argument("space")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("extend", parents=[common], help="insert one more point into a state")
    s.add_argument("state")
    s.add_argument("label")
    s.add_argument("distances", help="JSON object label -> exponent")
    s.add_argument("--unattained", action="store_true")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("teich", parents=[common], help="Teichmüller lift of a mod p")
    s.add_argument("p_arg", metavar="p", type=int)
    s.add_argument("a", type=int)
    s.add_argument("N", type=int)
    s.set_defaults(func=cmd_teich)

    s = sub.add_parser("normalize", parents=[common], help="standard representation of raw terms")
    s.add_argument("raw")
    s.add_argument("--trunc", default=None)
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("arith", parents=[common], help="series or p-adic arithmetic")
    s.add_argument("op", choices=("add", "sub", "mul", "divexact", "inv"))
    s.add_argument("x")
    s.add_argument("y", nargs="?")
    s.add_argument("--trunc", default=None)
    s.set_defaults(func=cmd_arith)

    s = sub.add_parser("urysohn", parents=[common], help="function-space model operations")
    s.add_argument("action", choices=("delta", "piece-dist", "extend"))
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_urysohn)

    s = sub.add_parser("broughan", parents=[common, modal], help="integer-exponent space into the p-adic field")
    s.add_argument("space")
    s.set_defaults(func=cmd_broughan)

    s = sub.add_parser("gen", parents=[common], help="random ultrametric space")
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--depth", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--denominator", type=int, default=1)
    s.set_defaults(func=cmd_gen)
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        code, payload, text = args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UltrafieldError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        # input-shaped problems (bad values, inconsistent data) versus failed mathematics
        return 2 if isinstance(exc, ValueError) else 1
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    body = jsonio.dumps(payload) if args.report == "json" else text + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        stdout.write(body)
    return code


def main():
    sys.exit(run())
