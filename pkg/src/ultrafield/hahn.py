"""Truncated Hahn / Levi-Civita series in equal characteristic.

A series is a finite, exponent-sorted list of non-zero terms ``c * tau**g``
plus a truncation order ``trunc``: every coefficient at an exponent ``>= trunc``
is unknown (the big-O marker).  ``trunc = INF`` means the element is exact.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .errors import DomainError, PrecisionLoss, UnsupportedSymbolic
from .valuecore import (
    INF, CharMode, EqualChar, Exponent, Generator, exponent, format_exponent,
)

__all__ = [
    "SeriesBase", "Series", "monomial", "valuation", "series_arith",
    "invert", "truncate_below", "dist_valuation",
]


def _coeff_str(c) -> str:
    if isinstance(c, Generator):
        return str(c)
    s = str(c)
    return f"({s})" if "/" in s or s.startswith("-") else s


class SeriesBase:
    """Shared storage and the order-theoretic operations of both series kinds."""

    __slots__ = ("mode", "terms", "trunc")

    def __init__(self, mode: CharMode, terms, trunc: Exponent):
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def _new(self, terms, trunc):
        """Build a sibling from already-validated terms."""
        return type(self)._from_valid(self.mode, tuple(terms), trunc)

    @classmethod
    def _from_valid(cls, mode, terms, trunc):
        obj = object.__new__(cls)
        SeriesBase.__init__(obj, mode, terms, trunc)
        return obj

    # -- inspection ----------------------------------------------------------

    @property
    def p(self) -> int:
        return self.mode.p

    def support(self) -> tuple:
        return tuple(g for g, _ in self.terms)

    def coefficients(self) -> dict:
        return dict(self.terms)

    def coefficient(self, g):
        """Coefficient at ``g``; PrecisionLoss if ``g`` lies at or past trunc."""
        g = exponent(g)
        if g >= self.trunc:
            raise PrecisionLoss(f"coefficient at {g} lies beyond trunc {self.trunc}")
        for h, c in self.terms:
            if h == g:
                return c
            if h > g:
                break
        return self.mode.zero()

    def is_exact(self) -> bool:
        return self.trunc is INF

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        """True only for the exact zero element."""
        return not self.terms and self.trunc is INF

    def valuation(self) -> Exponent:
        """Least exponent of the support; INF for the exact zero."""
        if self.terms:
            return self.terms[0][0]
        if self.trunc is INF:
            return INF
        raise PrecisionLoss(f"series is O(tau^{self.trunc}); valuation unknown")

    def valuation_lower_bound(self) -> Exponent:
        return self.terms[0][0] if self.terms else self.trunc

    def head(self, m) -> "SeriesBase":
        """The element ``sum_{g < m} c_g tau**g`` (exact when known up to ``m``)."""
        m = exponent(m)
        trunc = self.trunc if self.trunc < m else INF
        return self._new([(g, c) for g, c in self.terms if g < m], trunc)

    def truncate_below(self, m) -> "SeriesBase":
        """Keep the terms with exponent strictly below ``m``; result is ``+ O(tau**m)``."""
        m = exponent(m)
        return self._new([(g, c) for g, c in self.terms if g < m], min(m, self.trunc))

    def first_difference(self, other) -> Exponent:
        """Least exponent where the two coefficient sequences differ.

        This is ``v(x - y)``: at the first difference the two coefficients
        are distinct digits (or distinct field elements), so their difference
        is a unit there.  Returns INF for equal exact elements.
        """
        self._check_compatible(other)
        limit = min(self.trunc, other.trunc)
        a, b = self.terms, other.terms
        g = INF
        for (ga, ca), (gb, cb) in zip(a, b):
            if ga != gb:
                g = min(ga, gb)
                break
            if ca != cb:
                g = ga
                break
        else:
            if len(a) != len(b):
                g = (a if len(a) > len(b) else b)[min(len(a), len(b))][0]
        if g < limit or limit is INF:
            return g
        raise PrecisionLoss(f"elements agree up to O(tau^{limit})")

    def compare(self, other) -> str:
        """Three-valued equality: ``"equal"``, ``"distinct"`` or ``"unknown"``."""
        try:
            d = self.first_difference(other)
        except PrecisionLoss:
            return "unknown"
        return "equal" if d is INF else "distinct"

    def _check_compatible(self, other):
        if not isinstance(other, SeriesBase):
            raise TypeError(f"expected a series, got {type(other).__name__}")
        if other.mode != self.mode:
            raise DomainError(f"mode mismatch: {self.mode} vs {other.mode}")

    def generator_indices(self) -> set:
        return {c.index for _, c in self.terms if isinstance(c, Generator)}

    # -- dunder --------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SeriesBase):
            return NotImplemented
        return (type(self) is type(other) and self.mode == other.mode
                and self.trunc == other.trunc and self.terms == other.terms)

    def __hash__(self):
        return hash((type(self).__name__, self.mode, self.trunc, tuple(g for g, _ in self.terms)))

    def __repr__(self):
        return f"{type(self).__name__}({self.mode}, {self})"

    def __str__(self):
        parts = []
        for g, c in self.terms:
            if g == 0:
                parts.append(_coeff_str(c) if not isinstance(c, Generator) else str(c))
            else:
                parts.append(f"{_coeff_str(c)}*tau^{format_exponent(g)}")
        if self.trunc is not INF:
            parts.append(f"O(tau^{format_exponent(self.trunc)})")
        return " + ".join(parts) if parts else "0"


def _collect(mode: CharMode, terms, trunc: Exponent):
    """Sort, merge duplicates, drop zeros and anything at or past trunc."""
    acc = {}
    if isinstance(terms, dict):
        terms = terms.items()
    for g, c in terms:
        g = exponent(g)
        if g is INF:
            raise ValueError("a term cannot sit at exponent INF")
        c = mode.coerce(c)
        acc[g] = acc[g] + c if g in acc else c
    return tuple((g, acc[g]) for g in sorted(acc) if acc[g] and g < trunc)


class Series(SeriesBase):
    """An element of the Levi-Civita field over F_p or Q, possibly truncated."""

    __slots__ = ()

    def __init__(self, mode: CharMode, terms: Iterable = (), trunc=INF):
        if mode.is_mixed:
            raise DomainError("use PadicSeries for mixed characteristic")
        trunc = exponent(trunc)
        super().__init__(mode, _collect(mode, terms, trunc), trunc)

    @classmethod
    def zero(cls, mode: CharMode, trunc=INF) -> "Series":
        return cls(mode, (), trunc)

    @classmethod
    def one(cls, mode: CharMode) -> "Series":
        return cls(mode, [(0, mode.one())])

    # -- ring operations -----------------------------------------------------

    def _coerce_operand(self, other):
        if isinstance(other, SeriesBase):
            self._check_compatible(other)
            return other
        if isinstance(other, (int, Fraction, Generator)) or hasattr(other, "p"):
            return Series(self.mode, [(0, other)])
        return None

    def __neg__(self):
        return self._new([(g, -c) for g, c in self.terms], self.trunc)

    def __add__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        trunc = min(self.trunc, other.trunc)
        acc = {}
        for g, c in self.terms + other.terms:
            if g < trunc:
                acc[g] = acc[g] + c if g in acc else c
        return self._new([(g, acc[g]) for g in sorted(acc) if acc[g]], trunc)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce_operand(other)
        if other is None:
            return NotImplemented
        trunc = min(self.valuation_lower_bound() + other.trunc,
                    other.valuation_lower_bound() + self.trunc)
        acc = {}
        for ga, ca in self.terms:
            for gb, cb in other.terms:
                g = ga + gb
                if g >= trunc:
                    continue
                c = ca * cb
                acc[g] = acc[g] + c if g in acc else c
        return self._new([(g, acc[g]) for g in sorted(acc) if acc[g]], trunc)

    __rmul__ = __mul__

    def scale_shift(self, c, m) -> "Series":
        """``c * tau**m * self`` for a base scalar ``c``."""
        m = exponent(m)
        c = self.mode.coerce(c)
        terms = [(g + m, c * d) for g, d in self.terms]
        return self._new([(g, d) for g, d in terms if d], self.trunc + m)

    def invert(self, order) -> "Series":
        """``y`` with ``self * y = 1 + O(tau**order)``.

        Factor ``self = c tau**m (1 - u)`` with ``v(u) > 0`` and sum the
        geometric series ``1 + u + u**2 + ...`` until the terms reach the
        target order.  An exact monomial inverts exactly.
        """
        order = exponent(order)
        if not self.terms:
            raise PrecisionLoss("cannot invert a series that is zero at its precision")
        m, c = self.terms[0]
        if isinstance(c, Generator):
            raise UnsupportedSymbolic("leading generator coefficient is not invertible here")
        cinv = c.inverse() if hasattr(c, "inverse") else 1 / c
        if len(self.terms) == 1 and self.trunc is INF:
            return self._new([(-m, cinv)], INF)
        target = order - m  # absolute trunc of the inverse
        # relative precision of self is trunc - m, so the inverse is known up to trunc - 2m
        if self.trunc is not INF and target > self.trunc - 2 * m:
            raise PrecisionLoss(
                f"x is known to O(tau^{self.trunc}); inverse to order {order} needs more")
        rel = target + m  # precision needed for the unit part and its geometric sum
        # u = 1 - c^{-1} tau^{-m} x, with v(u) > 0
        if rel <= 0:
            return self._new([], target)
        unit = self.scale_shift(cinv, -m)
        u = Series(self.mode, [(0, self.mode.one())], rel) - unit
        total = Series(self.mode, [(0, self.mode.one())], rel)
        power = total
        while power.terms:
            power = (power * u).truncate_below(rel)
            total = total + power
        return total.scale_shift(cinv, -m).truncate_below(target)


def monomial(mode: CharMode, g, c=None):
    """The term ``c * tau**g`` (``c`` defaults to one) in the right series class."""
    if mode.is_mixed:
        from .padic_hahn import PadicSeries
        return PadicSeries(mode.p, [(g, 1 if c is None else c)])
    return Series(mode, [(g, mode.one() if c is None else c)])


def valuation(x: SeriesBase) -> Exponent:
    return x.valuation()


def series_arith(x, y, op: str):
    """``add``, ``sub`` or ``mul`` of two series of the same mode."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown series op {op!r}")


def invert(x, order):
    return x.invert(order)


def truncate_below(x: SeriesBase, m):
    return x.truncate_below(m)


def dist_valuation(x: SeriesBase, y: SeriesBase) -> Exponent:
    """``v(x - y)`` read off as the first differing coefficient."""
    return x.first_difference(y)


def equal_char(p: int) -> CharMode:
    return EqualChar(p)
