"""p-adic Hahn / p-adic Levi-Civita elements in standard representation.

The indeterminate is identified with ``p``, so ``tau**1`` is the element ``p``
and a term ``c tau**g`` with an integer coefficient ``c`` spills over into
``tau**(g+1), tau**(g+2), ...``.  Elements are stored with every coefficient a
Teichmüller digit: a residue ``d`` standing for ``omega(d)``, or a pure
:class:`Generator` standing for the lift of a transcendental residue.
"""
from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable

from .errors import DomainError, PrecisionLoss, UnsupportedSymbolic
from .hahn import SeriesBase
from .valuecore import INF, Exponent, Generator, MixedChar, PrimeField, exponent
from .witt import PadicInt, teichmuller_lift

__all__ = [
    "PadicSeries", "normalize", "pseries_arith", "pseries_valuation",
    "pseries_dist_valuation", "pseries_invert",
]


def _digit(c, p: int):
    """Validate a stored coefficient: a residue mod p or a pure generator."""
    if isinstance(c, Generator):
        if not c.is_pure:
            raise UnsupportedSymbolic("only bare generators can be p-adic digits")
        return c
    if isinstance(c, PrimeField):
        if c.p != p:
            raise DomainError(f"digit mod {c.p} in a p={p} series")
        return c
    if isinstance(c, int) and not isinstance(c, bool):
        if not 0 <= c < p:
            raise ValueError(f"digit {c} outside [0, {p}); use normalize() for raw values")
        return PrimeField(c, p)
    raise TypeError(f"{c!r} is not a p-adic digit")


class PadicSeries(SeriesBase):
    """Element of the p-adic Levi-Civita field, stored in normal form."""

    __slots__ = ()

    def __init__(self, p: int, terms: Iterable = (), trunc=INF):
        trunc = exponent(trunc)
        mode = MixedChar(p)
        if isinstance(terms, dict):
            terms = terms.items()
        seen = {}
        for g, c in terms:
            g = exponent(g)
            if g in seen:
                raise ValueError(f"duplicate exponent {g}; use normalize() to merge")
            c = _digit(c, p)
            if c and g < trunc:
                seen[g] = c
        super().__init__(mode, tuple(sorted(seen.items())), trunc)

    @classmethod
    def zero(cls, p: int, trunc=INF) -> "PadicSeries":
        return cls(p, (), trunc)

    @classmethod
    def one(cls, p: int) -> "PadicSeries":
        return cls(p, [(0, 1)])

    @classmethod
    def from_int(cls, n: int, p: int, trunc=INF) -> "PadicSeries":
        return normalize([(0, n)], p, trunc)

    def is_digit_only(self) -> bool:
        return not any(isinstance(c, Generator) for _, c in self.terms)

    # -- arithmetic ----------------------------------------------------------

    def _operand(self, other):
        if isinstance(other, SeriesBase):
            self._check_compatible(other)
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return normalize([(0, other)], self.p, self.trunc)
        return None

    def __add__(self, other):
        other = self._operand(other)
        if other is None:
            return NotImplemented
        return _add(self, other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._operand(other)
        if other is None:
            return NotImplemented
        return _add(self, other, -1)

    def __rsub__(self, other):
        other = self._operand(other)
        if other is None:
            return NotImplemented
        return _add(other, self, -1)

    def __neg__(self):
        return _add(PadicSeries.zero(self.p), self, -1)

    def __mul__(self, other):
        other = self._operand(other)
        if other is None:
            return NotImplemented
        return _mul(self, other)

    __rmul__ = __mul__

    def digit_scale_shift(self, d: int, m) -> "PadicSeries":
        """``omega(d) * tau**m * self`` for a unit digit ``d``; exact and carry-free."""
        m = exponent(m)
        if self.generator_indices():
            raise UnsupportedSymbolic("cannot rescale generator digits")
        p = self.p
        if d % p == 0:
            raise DomainError("digit scale must be a unit")
        terms = [(g + m, PrimeField(c.value * d, p)) for g, c in self.terms]
        return self._new(terms, self.trunc + m)

    def invert(self, order) -> "PadicSeries":
        return pseries_invert(self, order)


# -- normalization -------------------------------------------------------------

# raw contributions: ("int", n) exact integer, ("pad", value, N) known mod p**N,
# ("dig", d, sign) for sign*omega(d), ("gen", Generator)


def _contribution(c, p):
    if isinstance(c, Generator):
        if not c.is_pure:
            raise UnsupportedSymbolic("only bare generators can be normalized")
        return ("gen", c)
    if isinstance(c, PadicInt):
        if c.p != p:
            raise DomainError(f"Z_{c.p} coefficient in a p={p} series")
        return ("pad", c.value, c.N)
    if isinstance(c, PrimeField):
        if c.p != p:
            raise DomainError(f"digit mod {c.p} in a p={p} series")
        return ("dig", c.value, 1)
    if isinstance(c, tuple) and c[0] == "neg":
        return ("dig", c[1], -1)
    if isinstance(c, int) and not isinstance(c, bool):
        return ("int", c)
    raise TypeError(f"cannot normalize coefficient {c!r}")


def _exact_lift(d: int, p: int):
    """omega(d) when it is a rational integer: 0, 1 and -1 (odd p)."""
    if d == 0:
        return 0
    if d == 1:
        return 1
    if d == p - 1:
        return -1
    return None


def _normalize_coset(positions: dict, p: int, trunc: Exponent, out: dict):
    """Carry through one coset ``g0 + Z`` of exponents, in increasing order.

    A carry is either an exact integer (``prec is None``) or a residue known
    to exactly the number of digits still needed below ``trunc``.
    """
    pending = sorted(positions)
    idx = 0
    carry, cprec = 0, None
    g = pending[0]
    while g < trunc:
        contribs = []
        if idx < len(pending) and pending[idx] == g:
            contribs = [c for c in positions[g] if not (c[0] in ("int", "dig") and c[1] == 0)]
            idx += 1
        need = None if trunc is INF else math.ceil(trunc - g)
        settled = carry == 0 and cprec is None

        if any(c[0] == "gen" for c in contribs):
            if len(contribs) != 1 or not settled:
                raise UnsupportedSymbolic(f"carry into a generator digit at exponent {g}")
            out[g] = contribs[0][1]
        elif settled and len(contribs) == 1 and contribs[0][0] == "dig" and contribs[0][2] == 1:
            out[g] = PrimeField(contribs[0][1], p)
        else:
            total, prec = carry, cprec
            for c in contribs:
                if c[0] == "int":
                    total += c[1]
                elif c[0] == "pad":
                    total += c[1]
                    prec = c[2] if prec is None else min(prec, c[2])
                else:
                    d, sign = c[1], c[2]
                    lift = _exact_lift(d, p)
                    if lift is None:
                        if need is None:
                            raise PrecisionLoss(
                                f"omega({d}) has infinitely many {p}-adic digits; use a finite trunc")
                        lift = teichmuller_lift(d, p, need)
                        prec = need if prec is None else min(prec, need)
                    total += sign * lift
            if prec is not None:
                if need is None or prec < need:
                    raise PrecisionLoss(
                        f"coefficient near exponent {g} is known to {prec} digits, "
                        f"{'all' if need is None else need} needed")
                prec = need
            d = total % p
            lift = _exact_lift(d, p)
            if prec is None and (lift is None or (p == 2 and total < 0)):
                # exact integer whose expansion does not terminate
                if need is None:
                    raise PrecisionLoss(
                        f"value at exponent {g} has infinitely many digits; use a finite trunc")
                prec = need
            if prec is None:
                carry = (total - lift) // p
            else:
                mod = p ** prec
                carry = ((total - teichmuller_lift(d, p, prec)) % mod) // p
                prec -= 1
                if carry == 0:
                    prec = None
            cprec = prec
            if d:
                out[g] = PrimeField(d, p)
        if carry == 0 and cprec is None:
            if idx >= len(pending):
                return
            g = pending[idx]
        else:
            g += 1


def normalize(raw, p: int, trunc=INF) -> PadicSeries:
    """Standard (Teichmüller-digit) representation of a raw term list.

    ``raw`` pairs exponents with ints, :class:`PadicInt` values, residues
    (:class:`PrimeField`, read as Teichmüller digits) or bare generators;
    repeated exponents are summed.  Each coset ``g + Z`` is processed in
    increasing order: the digit at ``g`` is ``c mod p`` and
    ``(c - omega(c mod p)) / p`` is carried to ``g + 1``.
    """
    trunc = exponent(trunc)
    if isinstance(raw, dict):
        raw = raw.items()
    cosets = defaultdict(lambda: defaultdict(list))
    for g, c in raw:
        g = exponent(g)
        if g is INF:
            raise ValueError("a term cannot sit at exponent INF")
        if g < trunc:
            cosets[g - math.floor(g)][g].append(_contribution(c, p))
    out = {}
    for positions in cosets.values():
        _normalize_coset(positions, p, trunc, out)
    return PadicSeries._from_valid(MixedChar(p), tuple(sorted(out.items())), trunc)


def _add(x: PadicSeries, y: PadicSeries, sign: int) -> PadicSeries:
    trunc = min(x.trunc, y.trunc)
    if sign < 0 and x.terms == y.terms:
        return PadicSeries._from_valid(x.mode, (), trunc)
    if not y.terms:
        return x._new([(g, c) for g, c in x.terms if g < trunc], trunc)
    if sign > 0 and not x.terms:
        return y._new([(g, c) for g, c in y.terms if g < trunc], trunc)
    if sign > 0 and not set(x.support()) & set(y.support()):
        # disjoint digit-monomials are already in normal form
        merged = sorted(x.terms + y.terms, key=lambda t: t[0])
        return x._new([(g, c) for g, c in merged if g < trunc], trunc)
    if not (x.is_digit_only() and y.is_digit_only()):
        raise UnsupportedSymbolic("generator digits only support disjoint sums and x - x")
    raw = list(x.terms)
    raw += [(g, c) if sign > 0 else (g, ("neg", c.value)) for g, c in y.terms]
    return normalize(raw, x.p, trunc)


def _mul(x: PadicSeries, y: PadicSeries) -> PadicSeries:
    if not (x.is_digit_only() and y.is_digit_only()):
        raise UnsupportedSymbolic("multiplication of generator-bearing p-adic series")
    trunc = min(x.valuation_lower_bound() + y.trunc, y.valuation_lower_bound() + x.trunc)
    p = x.p
    raw = []
    for ga, ca in x.terms:
        for gb, cb in y.terms:
            g = ga + gb
            if g < trunc:
                # omega is multiplicative, so a product of digits is a digit
                raw.append((g, PrimeField(ca.value * cb.value, p)))
    return normalize(raw, p, trunc)


# -- public operations ---------------------------------------------------------

def pseries_arith(x: PadicSeries, y: PadicSeries, op: str, trunc=None) -> PadicSeries:
    """``add``, ``sub`` or ``mul``; ``trunc`` optionally caps the working order."""
    if trunc is not None:
        t = exponent(trunc)
        x, y = x.truncate_below(t), y.truncate_below(t)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown p-adic series op {op!r}")


def pseries_valuation(x: PadicSeries) -> Exponent:
    return x.valuation()


def pseries_dist_valuation(x: PadicSeries, y: PadicSeries) -> Exponent:
    """``v(x - y)``: the first exponent where the digit sequences differ."""
    return x.first_difference(y)


def pseries_invert(x: PadicSeries, order) -> PadicSeries:
    """``y`` with ``x * y = 1 + O(tau**order)``.

    Write ``x = omega(d) tau**m (1 - u)`` with ``v(u) > 0``; the unit part is
    inverted by the geometric series and the digit/monomial factor exactly.
    """
    order = exponent(order)
    if not x.is_digit_only():
        raise UnsupportedSymbolic("cannot invert generator-bearing p-adic series")
    if not x.terms:
        raise PrecisionLoss("cannot invert a series that is zero at its precision")
    p = x.p
    m, c = x.terms[0]
    dinv = pow(c.value, -1, p)
    if len(x.terms) == 1 and x.trunc is INF:
        return PadicSeries._from_valid(x.mode, ((-m, PrimeField(dinv, p)),), INF)
    target = order - m
    if x.trunc is not INF and target > x.trunc - 2 * m:
        raise PrecisionLoss(
            f"x is known to O(tau^{x.trunc}); inverse to order {order} needs more")
    rel = order
    if rel <= 0:
        return PadicSeries._from_valid(x.mode, (), target)
    unit = x.digit_scale_shift(dinv, -m).truncate_below(rel)
    one = PadicSeries(p, [(0, 1)], rel)
    u = one - unit
    total = one
    power = one
    while power.terms:
        power = (power * u).truncate_below(rel)
        total = total + power
    return total.digit_scale_shift(dinv, -m).truncate_below(target)
