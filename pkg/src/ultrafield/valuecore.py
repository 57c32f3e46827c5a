"""Exact exponents, characteristic modes and the coefficient domain.

Exponents live in the value group G, taken to be the rationals.  A distance
``eta ** -g`` is always stored as its exponent ``g``; the distance zero
corresponds to the exponent :data:`INF`.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Union

from .errors import DomainError, UnsupportedSymbolic

__all__ = [
    "INF", "Exponent", "exponent", "exponent_arith", "format_exponent",
    "CharMode", "EqualChar", "MixedChar", "is_prime",
    "PrimeField", "Generator", "coeff_combine", "is_zero",
    "ExponentSet", "is_tenuous",
]


@total_ordering
class _Infinity:
    """The valuation of zero: absorbing for ``+`` and above every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("ultrafield.INF")

    def __lt__(self, other):
        if other is self or isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __gt__(self, other):
        if other is self:
            return False
        if isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __add__(self, other):
        if other is self or isinstance(other, (int, Fraction)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        raise DomainError("INF - x is undefined")

    def __rsub__(self, other):
        raise DomainError("cannot subtract INF")

    def __neg__(self):
        raise DomainError("-INF is not an exponent")


INF = _Infinity()

Exponent = Union[Fraction, _Infinity]


def exponent(x) -> Exponent:
    """Coerce ``x`` to an exponent.

    Accepts ints, Fractions, :data:`INF` and strings such as ``"-1/2"``,
    ``"3"`` or ``"inf"``.  Floats are rejected to keep the core exact.
    """
    if x is INF:
        return INF
    if isinstance(x, bool):
        raise TypeError("bool is not an exponent")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if s.lower() in ("inf", "+inf", "infinity", "∞"):
            return INF
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exponent: {x!r}") from exc
    raise TypeError(f"cannot convert {type(x).__name__} to an exponent")


def format_exponent(g: Exponent) -> str:
    """Serialize as ``"p/q"``, ``"n"`` or ``"inf"``."""
    return "inf" if g is INF else str(g)


def exponent_arith(a, b, op: str):
    """Apply ``op`` (``add``, ``sub``, ``min`` or ``cmp``) to two exponents.

    ``cmp`` returns -1, 0 or 1.
    """
    a, b = exponent(a), exponent(b)
    if op == "add":
        return a + b
    if op == "sub":
        if b is INF:
            raise DomainError("subtraction of INF")
        if a is INF:
            return INF
        return a - b
    if op == "min":
        return b if a is INF else (a if b is INF else min(a, b))
    if op == "cmp":
        return (a > b) - (a < b)
    raise ValueError(f"unknown exponent op {op!r}")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class CharMode:
    """A pair (q, p) of characteristics: q of the field, p of its residue field.

    ``kind == "equal"`` means q = p (p may be 0); ``kind == "mixed"`` means
    q = 0 and p prime, i.e. p-adic style arithmetic with carries.
    """

    kind: str
    p: int

    def __post_init__(self):
        if self.kind not in ("equal", "mixed"):
            raise ValueError(f"unknown mode kind {self.kind!r}")
        if self.kind == "mixed" and not is_prime(self.p):
            raise ValueError(f"mixed characteristic needs a prime, got {self.p}")
        if self.kind == "equal" and self.p != 0 and not is_prime(self.p):
            raise ValueError(f"characteristic must be 0 or prime, got {self.p}")

    @property
    def is_mixed(self) -> bool:
        return self.kind == "mixed"

    @property
    def char_pair(self) -> tuple[int, int]:
        """The pair (q, p)."""
        return (0, self.p) if self.is_mixed else (self.p, self.p)

    def zero(self):
        return Fraction(0) if self.p == 0 else PrimeField(0, self.p)

    def one(self):
        return Fraction(1) if self.p == 0 else PrimeField(1, self.p)

    def coerce(self, c):
        """Bring an int/Fraction into this mode's base coefficient domain."""
        if isinstance(c, Generator):
            return c
        if self.p == 0:
            if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
                return Fraction(c)
        else:
            if isinstance(c, PrimeField):
                if c.p != self.p:
                    raise DomainError(f"F_{c.p} coefficient in a p={self.p} series")
                return c
            if isinstance(c, int) and not isinstance(c, bool):
                return PrimeField(c, self.p)
            if isinstance(c, Fraction):
                if c.denominator % self.p == 0:
                    raise DomainError(f"{c} has no image in F_{self.p}")
                return PrimeField(c.numerator, self.p) * PrimeField(c.denominator, self.p).inverse()
        raise DomainError(f"coefficient {c!r} does not belong to mode {self}")

    def __str__(self):
        return f"{self.kind}({self.p})"


def EqualChar(p: int) -> CharMode:
    return CharMode("equal", p)


def MixedChar(p: int) -> CharMode:
    return CharMode("mixed", p)


@dataclass(frozen=True)
class PrimeField:
    """A residue modulo the prime ``p``, kept in ``[0, p)``."""

    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _other(self, other):
        if isinstance(other, PrimeField):
            if other.p != self.p:
                raise DomainError(f"F_{self.p} and F_{other.p} do not mix")
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        return None

    def __add__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else PrimeField(self.value + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else PrimeField(self.value - v, self.p)

    def __rsub__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else PrimeField(v - self.value, self.p)

    def __mul__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else PrimeField(self.value * v, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeField(-self.value, self.p)

    def inverse(self) -> "PrimeField":
        if self.value == 0:
            raise ZeroDivisionError(f"0 is not invertible in F_{self.p}")
        return PrimeField(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = PrimeField(other, self.p)
        if not isinstance(other, PrimeField):
            return NotImplemented
        return self * other.inverse()

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        # ints compare by residue so that symbolic scales written as 1 or -1
        # agree with their F_p counterparts
        if isinstance(other, PrimeField):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"PrimeField({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class Generator:
    """The transcendence marker ``b_index``, optionally times a base scalar.

    Only the linear fragment is supported: generators with the same index add,
    any generator can be scaled by a base-domain element, and nothing else.
    """

    __slots__ = ("index", "scale")

    def __init__(self, index: int, scale=1):
        if isinstance(index, bool) or not isinstance(index, int) or index < 0:
            raise ValueError(f"generator index must be a non-negative int, got {index!r}")
        if not scale:
            raise ValueError("generator scale must be non-zero")
        self.index = index
        self.scale = scale

    def __setattr__(self, name, value):
        if hasattr(self, name):
            raise AttributeError("Generator is immutable")
        object.__setattr__(self, name, value)

    @property
    def is_pure(self) -> bool:
        """True for the bare symbol ``b_index`` (scale one)."""
        return self.scale == 1

    def _combine(self, other, sign):
        if isinstance(other, Generator):
            if other.index != self.index:
                raise UnsupportedSymbolic(
                    f"b_{self.index} {'+' if sign > 0 else '-'} b_{other.index} is not representable")
            s = self.scale + other.scale if sign > 0 else self.scale - other.scale
            return Generator(self.index, s) if s else s
        if not other:
            return self
        raise UnsupportedSymbolic(f"b_{self.index} plus a base constant is not representable")

    def __add__(self, other):
        return self._combine(other, 1)

    def __radd__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self):
        return Generator(self.index, -self.scale)

    def __mul__(self, other):
        if isinstance(other, Generator):
            raise UnsupportedSymbolic(f"b_{self.index} * b_{other.index} is not supported")
        s = self.scale * other
        return Generator(self.index, s) if s else s

    __rmul__ = __mul__

    def __bool__(self):
        return True

    def __eq__(self, other):
        if not isinstance(other, Generator):
            return False
        return self.index == other.index and self.scale == other.scale

    def __hash__(self):
        return hash(("gen", self.index))

    def __repr__(self):
        if self.is_pure:
            return f"Generator({self.index})"
        return f"Generator({self.index}, scale={self.scale!r})"

    def __str__(self):
        return f"b_{self.index}" if self.is_pure else f"{self.scale}*b_{self.index}"


def is_zero(c) -> bool:
    return not c


def _check_same_domain(a, b):
    if isinstance(a, Generator) or isinstance(b, Generator):
        return
    pa, pb = getattr(a, "p", None), getattr(b, "p", None)
    if pa is not None and pb is not None and pa != pb:
        raise DomainError(f"coefficients over p={pa} and p={pb} do not mix")
    if (pa is None) != (pb is None):
        if not (isinstance(a, int) or isinstance(b, int)):
            raise DomainError(f"{type(a).__name__} and {type(b).__name__} are different domains")


_OPS = {"add": operator.add, "sub": operator.sub, "mul": operator.mul}


def coeff_combine(a, b, op: str):
    """Combine two coefficients with ``add``, ``sub``, ``mul`` or ``eq``."""
    _check_same_domain(a, b)
    if op == "eq":
        return a == b
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown coefficient op {op!r}") from None
    return fn(a, b)


def is_tenuous(s: Iterable) -> bool:
    """True iff the finite exponent list has no duplicates and no INF.

    A finite set is always tenuous; the predicate rejects inputs that could not
    be the support of a series.
    """
    xs = list(s)
    if any(x is INF for x in xs):
        return False
    xs = sorted(exponent(x) for x in xs)
    return all(a < b for a, b in zip(xs, xs[1:]))


class ExponentSet:
    """A finite, strictly increasing set of finite exponents."""

    __slots__ = ("_items", "_set")

    def __init__(self, items: Iterable = ()):
        xs = sorted(exponent(x) for x in items)
        if any(x is INF for x in xs):
            raise ValueError("INF cannot belong to an exponent set")
        if any(a == b for a, b in zip(xs, xs[1:])):
            raise ValueError("duplicate exponents")
        self._items = tuple(xs)
        self._set = frozenset(xs)

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def __contains__(self, g):
        return g in self._set

    def __eq__(self, other):
        return isinstance(other, ExponentSet) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __and__(self, other):
        return ExponentSet(self._set & set(other))

    def __or__(self, other):
        return ExponentSet(self._set | set(other))

    def issuperset(self, items) -> bool:
        return self._set.issuperset(items)

    def __repr__(self):
        return "ExponentSet([" + ", ".join(map(format_exponent, self._items)) + "])"
