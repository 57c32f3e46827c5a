"""JSON encodings of exponents, coefficients, series, spaces and states.

Decoders validate shape as they go and raise :class:`SchemaError` carrying a
JSON pointer to the offending node.
"""
from __future__ import annotations

import json
from fractions import Fraction
from types import MappingProxyType

from .embed import EmbedState
from .errors import SchemaError
from .hahn import Series, SeriesBase
from .padic_hahn import PadicSeries
from .umetric import UltraSpace
from .urysohn import UrysohnPoint
from .valuecore import INF, CharMode, Generator, PrimeField, exponent, format_exponent
from .witt import PadicInt

__all__ = [
    "dumps", "exp_to_json", "exp_from_json", "coeff_to_json", "coeff_from_json",
    "series_to_json", "series_from_json", "padic_to_json", "padic_from_json",
    "space_to_json", "space_from_json", "point_to_json", "point_from_json",
    "state_to_json", "state_from_json", "mode_from_json", "raw_terms_from_json",
]


def dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def _ptr(path, key) -> str:
    key = str(key).replace("~", "~0").replace("/", "~1")
    return f"{path}/{key}"


def _obj(node, path, required=(), optional=()):
    if not isinstance(node, dict):
        raise SchemaError(path, f"expected an object, got {type(node).__name__}")
    for k in required:
        if k not in node:
            raise SchemaError(_ptr(path, k), "missing required key")
    extra = set(node) - set(required) - set(optional)
    if extra:
        raise SchemaError(_ptr(path, sorted(extra)[0]), "unexpected key")
    return node


def _list(node, path):
    if not isinstance(node, list):
        raise SchemaError(path, f"expected an array, got {type(node).__name__}")
    return node


def _int(node, path, minimum=None):
    if isinstance(node, bool) or not isinstance(node, int):
        raise SchemaError(path, f"expected an integer, got {node!r}")
    if minimum is not None and node < minimum:
        raise SchemaError(path, f"must be >= {minimum}")
    return node


# -- scalars -------------------------------------------------------------------

def exp_to_json(g) -> str:
    return format_exponent(g)


def exp_from_json(node, path=""):
    if isinstance(node, bool) or not isinstance(node, (str, int)):
        raise SchemaError(path, f"exponent must be a string like \"p/q\" or \"inf\", got {node!r}")
    try:
        return exponent(node)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError(path, f"bad exponent {node!r}: {exc}") from None


def _rat_from_json(node, path):
    if isinstance(node, bool) or not isinstance(node, (str, int)):
        raise SchemaError(path, f"expected a rational string, got {node!r}")
    try:
        return Fraction(node)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(path, f"bad rational {node!r}") from None


def coeff_to_json(c):
    if isinstance(c, Generator):
        out = {"gen": c.index}
        if not c.is_pure:
            out["scale"] = coeff_to_json(c.scale)
        return out
    if isinstance(c, PrimeField):
        return {"pf": c.value}
    if isinstance(c, PadicInt):
        return {"pw": c.digits()}
    if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
        return {"rat": str(Fraction(c))}
    raise TypeError(f"cannot encode coefficient {c!r}")


def coeff_from_json(node, mode: CharMode, path=""):
    """Decode a tagged coefficient for ``mode``.

    ``{"pw": digits}`` yields a :class:`PadicInt` with ``N = len(digits)`` and
    ``{"rat": "n"}`` in mixed mode yields the exact integer ``n``.
    """
    _obj(node, path, optional=("pf", "rat", "pw", "gen", "scale"))
    tags = [k for k in ("pf", "rat", "pw", "gen") if k in node]
    if len(tags) != 1:
        raise SchemaError(path, "coefficient needs exactly one of pf, rat, pw, gen")
    tag = tags[0]
    if "scale" in node and tag != "gen":
        raise SchemaError(_ptr(path, "scale"), "scale only applies to gen")
    p = mode.p
    if tag == "gen":
        idx = _int(node["gen"], _ptr(path, "gen"), 0)
        if "scale" not in node:
            return Generator(idx)
        scale = coeff_from_json(node["scale"], mode, _ptr(path, "scale"))
        if isinstance(scale, (Generator, PadicInt)) or not scale:
            raise SchemaError(_ptr(path, "scale"), "scale must be a non-zero base constant")
        return Generator(idx, scale)
    if tag == "pf":
        if p == 0:
            raise SchemaError(_ptr(path, "pf"), "prime-field residue in characteristic 0")
        v = _int(node["pf"], _ptr(path, "pf"))
        if not 0 <= v < p:
            raise SchemaError(_ptr(path, "pf"), f"residue must lie in [0, {p})")
        return PrimeField(v, p)
    if tag == "rat":
        q = _rat_from_json(node["rat"], _ptr(path, "rat"))
        if mode.is_mixed:
            if q.denominator != 1:
                raise SchemaError(_ptr(path, "rat"), "mixed mode accepts integer values only")
            return int(q)
        try:
            return mode.coerce(q)
        except ValueError as exc:
            raise SchemaError(_ptr(path, "rat"), str(exc)) from None
    digits = _list(node["pw"], _ptr(path, "pw"))
    if not mode.is_mixed and p == 0:
        raise SchemaError(_ptr(path, "pw"), "p-adic word needs a prime")
    if not digits:
        raise SchemaError(_ptr(path, "pw"), "p-adic word needs at least one digit")
    value = 0
    for i, d in enumerate(digits):
        d = _int(d, _ptr(_ptr(path, "pw"), i), 0)
        if d >= p:
            raise SchemaError(_ptr(_ptr(path, "pw"), i), f"digit must lie in [0, {p})")
        value += d * p ** i
    return PadicInt(value, p, len(digits))


# -- series --------------------------------------------------------------------

def mode_from_json(kind, p, path=""):
    if kind not in ("equal", "mixed"):
        raise SchemaError(_ptr(path, "mode"), "mode must be \"equal\" or \"mixed\"")
    p = _int(p, _ptr(path, "p"), 0)
    try:
        return CharMode(kind, p)
    except ValueError as exc:
        raise SchemaError(_ptr(path, "p"), str(exc)) from None


def series_to_json(x: SeriesBase) -> dict:
    return {
        "mode": x.mode.kind,
        "p": x.mode.p,
        "trunc": exp_to_json(x.trunc),
        "terms": [{"g": exp_to_json(g), "c": coeff_to_json(c)} for g, c in x.terms],
    }


def _terms_from_json(node, mode, path):
    out = []
    for i, t in enumerate(_list(node, path)):
        tp = _ptr(path, i)
        _obj(t, tp, required=("g", "c"))
        g = exp_from_json(t["g"], _ptr(tp, "g"))
        if g is INF:
            raise SchemaError(_ptr(tp, "g"), "term exponent must be finite")
        out.append((g, coeff_from_json(t["c"], mode, _ptr(tp, "c"))))
    return out


def series_from_json(node, path="", mode: CharMode | None = None) -> SeriesBase:
    _obj(node, path, required=("mode", "p", "terms"), optional=("trunc",))
    m = mode_from_json(node["mode"], node["p"], path)
    if mode is not None and m != mode:
        raise SchemaError(_ptr(path, "mode"), f"expected mode {mode}, got {m}")
    trunc = exp_from_json(node.get("trunc", "inf"), _ptr(path, "trunc"))
    terms = _terms_from_json(node["terms"], m, _ptr(path, "terms"))
    try:
        if m.is_mixed:
            return PadicSeries(m.p, terms, trunc)
        gs = [g for g, _ in terms]
        if len(set(gs)) != len(gs):
            raise ValueError("duplicate term exponent")
        return Series(m, terms, trunc)
    except (ValueError, TypeError) as exc:
        raise SchemaError(_ptr(path, "terms"), str(exc)) from None


def raw_terms_from_json(node, path=""):
    """A raw term list for normalization: ``{"p", "trunc"?, "terms"}``."""
    _obj(node, path, required=("p", "terms"), optional=("trunc", "mode"))
    mode = mode_from_json(node.get("mode", "mixed"), node["p"], path)
    if not mode.is_mixed:
        raise SchemaError(_ptr(path, "mode"), "raw term lists are mixed-characteristic")
    trunc = exp_from_json(node.get("trunc", "inf"), _ptr(path, "trunc"))
    return mode.p, _terms_from_json(node["terms"], mode, _ptr(path, "terms")), trunc


def padic_to_json(a: PadicInt) -> dict:
    return {"p": a.p, "N": a.N, "v": a.value}


def padic_from_json(node, path="") -> PadicInt:
    _obj(node, path, required=("p", "N", "v"))
    p = _int(node["p"], _ptr(path, "p"), 2)
    N = _int(node["N"], _ptr(path, "N"), 1)
    v = _int(node["v"], _ptr(path, "v"))
    try:
        return PadicInt(v, p, N)
    except ValueError as exc:
        raise SchemaError(_ptr(path, "p"), str(exc)) from None


# -- spaces, points, states ----------------------------------------------------

def space_to_json(X: UltraSpace, eta=None) -> dict:
    out = {
        "points": list(X.labels),
        "exponents": [[exp_to_json(g) for g in row] for row in X.exponents],
    }
    if eta is not None:
        out["eta"] = eta
    return out


def space_from_json(node, path="", check=True):
    """Return ``(space, eta)``; ``eta`` is None unless given."""
    _obj(node, path, required=("points", "exponents"), optional=("eta",))
    labels = _list(node["points"], _ptr(path, "points"))
    for i, x in enumerate(labels):
        if not isinstance(x, str):
            raise SchemaError(_ptr(_ptr(path, "points"), i), "point labels must be strings")
    rows_node = _list(node["exponents"], _ptr(path, "exponents"))
    if len(rows_node) != len(labels):
        raise SchemaError(_ptr(path, "exponents"), f"expected {len(labels)} rows")
    rows = []
    for i, row in enumerate(rows_node):
        rp = _ptr(_ptr(path, "exponents"), i)
        row = _list(row, rp)
        if len(row) != len(labels):
            raise SchemaError(rp, f"expected {len(labels)} entries")
        rows.append([exp_from_json(v, _ptr(rp, j)) for j, v in enumerate(row)])
    eta = node.get("eta")
    if eta is not None and (isinstance(eta, bool) or not isinstance(eta, (int, float, str))):
        raise SchemaError(_ptr(path, "eta"), "eta must be a number")
    return UltraSpace(labels, rows, check=check), eta


def point_to_json(f: UrysohnPoint) -> dict:
    return {"support": [{"g": exp_to_json(g), "m": m} for g, m in f.support]}


def point_from_json(node, path="") -> UrysohnPoint:
    _obj(node, path, required=("support",))
    pairs = []
    for i, t in enumerate(_list(node["support"], _ptr(path, "support"))):
        tp = _ptr(_ptr(path, "support"), i)
        _obj(t, tp, required=("g", "m"))
        g = exp_from_json(t["g"], _ptr(tp, "g"))
        if g is INF:
            raise SchemaError(_ptr(tp, "g"), "marker exponent must be finite")
        pairs.append((g, _int(t["m"], _ptr(tp, "m"), 1)))
    try:
        return UrysohnPoint(tuple(pairs))
    except ValueError as exc:
        raise SchemaError(_ptr(path, "support"), str(exc)) from None


def state_to_json(state: EmbedState) -> dict:
    return {
        "mode": state.mode.kind,
        "p": state.mode.p,
        "x0": state.x0,
        "g0": exp_to_json(state.g0),
        "sentinel": state.sentinel,
        "order": list(state.order),
        "generators": state.generator_count,
        "images": {x: series_to_json(state.images[x]) for x in state.order},
        "space": space_to_json(state.space),
    }


def state_from_json(node, path="") -> EmbedState:
    _obj(node, path, required=("mode", "p", "order", "images", "space"),
         optional=("x0", "g0", "sentinel", "generators"))
    mode = mode_from_json(node["mode"], node["p"], path)
    order = _list(node["order"], _ptr(path, "order"))
    if not order or not all(isinstance(x, str) for x in order):
        raise SchemaError(_ptr(path, "order"), "order must be a non-empty list of labels")
    images_node = _obj(node["images"], _ptr(path, "images"), optional=order)
    images = {}
    for x in order:
        if x not in images_node:
            raise SchemaError(_ptr(_ptr(path, "images"), x), "missing image")
        images[x] = series_from_json(images_node[x], _ptr(_ptr(path, "images"), x), mode)
    space, _ = space_from_json(node["space"], _ptr(path, "space"), check=False)
    if set(space.labels) != set(order):
        raise SchemaError(_ptr(path, "space"), "space points differ from the insertion order")
    sentinel = node.get("sentinel", order[0])
    if sentinel != order[0]:
        raise SchemaError(_ptr(path, "sentinel"), "the sentinel must come first in the order")
    x0 = node.get("x0", order[1] if len(order) > 1 else None)
    g0 = exp_from_json(node.get("g0", "0"), _ptr(path, "g0"))
    return EmbedState(mode, space, MappingProxyType(images), tuple(order), x0, g0, sentinel)


def load_json(text: str, path=""):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(path, f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
