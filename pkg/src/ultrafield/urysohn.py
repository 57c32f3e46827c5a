"""Finite-support function model of the universal ultrametric space.

A point is a function from exponents to a countable marker alphabet
(non-negative integers) with marker 0 almost everywhere.  Only the non-zero
markers are stored.  The distance between ``f`` and ``h`` is ``eta**-g`` with
``g`` the least exponent where they disagree.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import AlphabetOverflow, InconsistentPrefix, PrecisionLoss
from .hahn import Series, SeriesBase
from .padic_hahn import PadicSeries
from .umetric import UltraSpace
from .valuecore import INF, CharMode, Exponent, ExponentSet, Generator, exponent

__all__ = [
    "UrysohnPoint", "Alphabet", "delta", "to_urysohn", "from_urysohn",
    "petal_distance", "in_piece", "injective_extend",
]


@dataclass(frozen=True)
class UrysohnPoint:
    """Sorted ``(exponent, marker)`` pairs with positive markers."""

    support: tuple = ()

    def __post_init__(self):
        items = self.support.items() if isinstance(self.support, dict) else self.support
        pairs = []
        for g, m in items:
            g = exponent(g)
            if g is INF:
                raise ValueError("a point cannot carry a marker at exponent inf")
            if not isinstance(m, int) or isinstance(m, bool) or m < 0:
                raise ValueError(f"marker must be a non-negative integer, got {m!r}")
            if m:
                pairs.append((g, m))
        pairs.sort(key=lambda t: t[0])
        for (g, _), (h, _) in zip(pairs, pairs[1:]):
            if g == h:
                raise ValueError(f"exponent {g} carries two markers")
        object.__setattr__(self, "support", tuple(pairs))

    def marker(self, g) -> int:
        g = exponent(g)
        for h, m in self.support:
            if h == g:
                return m
        return 0

    def exponents(self) -> ExponentSet:
        return ExponentSet(g for g, _ in self.support)

    def below(self, m) -> "UrysohnPoint":
        m = exponent(m)
        return UrysohnPoint(tuple((g, k) for g, k in self.support if g < m))

    def __len__(self):
        return len(self.support)


def delta(f: UrysohnPoint, h: UrysohnPoint) -> Exponent:
    """Least exponent where the markers of ``f`` and ``h`` differ; INF if equal."""
    a, b = f.support, h.support
    i = j = 0
    while i < len(a) or j < len(b):
        ga = a[i][0] if i < len(a) else INF
        gb = b[j][0] if j < len(b) else INF
        if ga == gb:
            if a[i][1] != b[j][1]:
                return ga
            i += 1
            j += 1
        else:
            return min(ga, gb)
    return INF


class Alphabet:
    """Bijection between non-zero coefficients and positive markers.

    Base constants come first (by default the non-zero residues ``1..p-1`` of
    the residue field; nothing for Q), then ``b_alpha`` maps to
    ``len(constants) + 1 + alpha``.  The alphabet is never bounded unless
    ``max_generator`` is given.
    """

    def __init__(self, mode: CharMode, constants: Sequence | None = None,
                 max_generator: int | None = None):
        self.mode = mode
        if constants is None:
            constants = range(1, mode.p) if mode.p else ()
        self.constants = tuple(mode.coerce(c) for c in constants)
        if any(not c for c in self.constants) or len(set(self.constants)) != len(self.constants):
            raise ValueError("alphabet constants must be distinct and non-zero")
        self._const_marker = {c: i + 1 for i, c in enumerate(self.constants)}
        self.max_generator = max_generator

    @property
    def _offset(self) -> int:
        return len(self.constants) + 1

    def marker(self, c) -> int:
        if isinstance(c, Generator):
            if not c.is_pure:
                raise AlphabetOverflow(f"scaled generator {c!r} is not an alphabet letter")
            if self.max_generator is not None and c.index > self.max_generator:
                raise AlphabetOverflow(f"generator index {c.index} exceeds {self.max_generator}")
            return self._offset + c.index
        try:
            return self._const_marker[self.mode.coerce(c)]
        except (KeyError, TypeError, ValueError):
            raise AlphabetOverflow(f"coefficient {c} is outside the alphabet") from None

    def letter(self, m: int):
        if m <= 0:
            raise AlphabetOverflow("marker 0 stands for the zero coefficient")
        if m < self._offset:
            return self.constants[m - 1]
        index = m - self._offset
        if self.max_generator is not None and index > self.max_generator:
            raise AlphabetOverflow(f"marker {m} exceeds the declared alphabet")
        return Generator(index)


def _default_alphabet(mode, alphabet):
    return alphabet if alphabet is not None else Alphabet(mode)


def to_urysohn(x: SeriesBase, alphabet: Alphabet | None = None) -> UrysohnPoint:
    """Read an exact normalized element as a marker function."""
    if not x.is_exact():
        raise PrecisionLoss("only exact elements correspond to points")
    alphabet = _default_alphabet(x.mode, alphabet)
    return UrysohnPoint(tuple((g, alphabet.marker(c)) for g, c in x.terms))


def from_urysohn(f: UrysohnPoint, mode: CharMode, alphabet: Alphabet | None = None) -> SeriesBase:
    alphabet = _default_alphabet(mode, alphabet)
    terms = [(g, alphabet.letter(m)) for g, m in f.support]
    if mode.is_mixed:
        return PadicSeries(mode.p, terms)
    return Series(mode, terms)


def _support(x) -> tuple:
    if isinstance(x, UrysohnPoint):
        return tuple(g for g, _ in x.support)
    return x.support()


def in_piece(x, S: Iterable) -> bool:
    """Membership in the piece over ``S``: the support lies inside ``S``."""
    S = S if isinstance(S, ExponentSet) else ExponentSet(S)
    return S.issuperset(_support(x))


def petal_distance(x, S: Iterable):
    """Distance exponent from ``x`` to the piece over ``S`` and a nearest point.

    The offending exponent ``m`` is the least one in ``supp(x)`` outside
    ``S``; everything below it already lies in ``S``, so the part of ``x``
    below ``m`` is in the piece at exponent ``m`` from ``x``.  Returns
    ``(INF, x)`` when ``x`` is in the piece.
    """
    S = S if isinstance(S, ExponentSet) else ExponentSet(S)
    outside = [g for g in _support(x) if g not in S]
    if not outside:
        return INF, x
    m = outside[0]
    if isinstance(x, UrysohnPoint):
        return m, x.below(m)
    return m, x.head(m)


def injective_extend(A_points: Sequence[UrysohnPoint], B: UltraSpace) -> UrysohnPoint:
    """A point realizing the last row of ``B`` against ``A_points``.

    ``A_points[i]`` plays the role of ``B.labels[i]``; ``B`` has exactly one
    more point.  Copies the markers of the nearest prefix point below the
    decisive exponent and puts a marker unused there by ``A`` at it.
    """
    k = len(A_points)
    if len(B) != k + 1:
        raise InconsistentPrefix(f"space has {len(B)} points; expected {k + 1}")
    labels = B.labels
    for i in range(k):
        for j in range(i + 1, k):
            got = delta(A_points[i], A_points[j])
            if got != B.g(labels[i], labels[j]):
                raise InconsistentPrefix(
                    f"points {labels[i]!r}, {labels[j]!r} are at exponent {got}, "
                    f"space says {B.g(labels[i], labels[j])}")
    if k == 0:
        return UrysohnPoint()
    new = labels[k]
    best, m = 0, B.g(labels[0], new)
    for i in range(1, k):
        g = B.g(labels[i], new)
        if g > m:
            best, m = i, g
    used = {a.marker(m) for a in A_points}
    fresh = 1
    while fresh in used:
        fresh += 1
    return UrysohnPoint(A_points[best].below(m).support + ((m, fresh),))
