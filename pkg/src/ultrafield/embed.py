"""Isometric embedding of finite ultrametric spaces into Levi-Civita fields.

The engine adds a sentinel point (image 0), then inserts the remaining points
one at a time.  For a new point ``xi`` with insertion index ``lam``:

* ``m`` is the largest distance exponent from ``xi`` to an embedded point,
  i.e. the smallest distance, attained by some embedded ``a`` (earliest
  insertion wins ties);
* ``gamma`` is the part of ``H(a)`` strictly below ``tau**m``;
* ``H(xi) = gamma + b_lam * tau**m`` with a fresh generator ``b_lam``.

A finite space always attains the minimum distance, so the limit step needed
for infinite spaces never arises; :func:`stream_embed` surfaces it as
:class:`LimitCaseRequired`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .errors import IsometryFailure, LimitCaseRequired, NonIntegralExponent, PrecisionLoss
from .hahn import Series, SeriesBase, monomial
from .padic_hahn import PadicSeries
from .umetric import SENTINEL, UltraSpace, sentinel_extend
from .valuecore import INF, CharMode, Generator, MixedChar, exponent

__all__ = [
    "EmbedState", "CheckResult", "EmbedCertificate", "embed_space",
    "stream_embed", "check_certificate", "broughan_embed", "zero_for",
]


def zero_for(mode: CharMode) -> SeriesBase:
    return PadicSeries.zero(mode.p) if mode.is_mixed else Series.zero(mode)


@dataclass(frozen=True)
class EmbedState:
    """Images of the points inserted so far, sentinel first."""

    mode: CharMode
    space: UltraSpace
    images: Mapping
    order: tuple
    x0: object
    g0: object
    sentinel: str = SENTINEL

    @property
    def next_gen(self) -> int:
        return len(self.order)

    def image(self, label) -> SeriesBase:
        return self.images[label]

    def points(self) -> tuple:
        """Inserted labels other than the sentinel, in insertion order."""
        return self.order[1:]

    def generators_used(self) -> set:
        used = set()
        for x in self.points():
            used |= self.images[x].generator_indices()
        return used

    @property
    def generator_count(self) -> int:
        return len(self.generators_used())

    def distance_exponent(self, x, y):
        return self.images[x].first_difference(self.images[y])


def _nearest(space: UltraSpace, embedded, xi):
    """The embedded point at least distance from ``xi`` (earliest on ties)."""
    best, best_g = None, None
    for z in embedded:
        g = space.g(z, xi)
        if best is None or g > best_g:
            best, best_g = z, g
    return best, best_g


def _step(mode, space, images, embedded, xi, lam):
    a, m = _nearest(space, embedded, xi)
    gamma = images[a].head(m)
    return gamma + monomial(mode, m, Generator(lam))


def _verify_isometry(state: EmbedState):
    labels = state.order
    for i, x in enumerate(labels):
        for y in labels[i + 1:]:
            try:
                got = state.distance_exponent(x, y)
            except PrecisionLoss as exc:
                raise IsometryFailure(f"distance {x!r}-{y!r} undetermined: {exc}") from exc
            want = state.space.g(x, y)
            if got != want:
                raise IsometryFailure(f"v(H({x!r}) - H({y!r})) = {got}, expected {want}")


def embed_space(X: UltraSpace, mode: CharMode, *, x0=None, g0=None, order=None,
                sentinel: str = SENTINEL, verify: bool = True) -> EmbedState:
    """Embed ``X`` isometrically; ``order`` permutes the insertion order of ``X``."""
    if x0 is None:
        x0 = X.labels[0]
    if g0 is None:
        es = X.exponent_set()
        g0 = min(es) if es else exponent(0)
    g0 = exponent(g0)
    E = sentinel_extend(X, x0, g0, label=sentinel)
    order = tuple(X.labels if order is None else order)
    if len(order) != len(X) or set(order) != set(X.labels):
        raise ValueError("insertion order must be a permutation of the points")
    images = {sentinel: zero_for(mode)}
    embedded = [sentinel]
    for lam, xi in enumerate(order, start=1):
        images[xi] = _step(mode, E, images, embedded, xi, lam)
        embedded.append(xi)
    state = EmbedState(mode, E, MappingProxyType(images), (sentinel,) + order, x0, g0, sentinel)
    if verify:
        _verify_isometry(state)
    return state


def stream_embed(state: EmbedState, label, exps: Mapping, *, attained: bool = True,
                 verify: bool = True) -> EmbedState:
    """Insert one more point given its distance exponents to the inserted points.

    The sentinel distance may be omitted; it follows from the base point.
    ``attained=False`` declares that the infimum distance to the (conceptually
    infinite) embedded set is not attained, which needs the limit construction.
    """
    if not attained:
        raise LimitCaseRequired(
            f"infimum distance from {label!r} is not attained; the limit step is not implemented")
    exps = {k: exponent(v) for k, v in exps.items()}
    if state.sentinel not in exps:
        exps[state.sentinel] = min(exps[state.x0], state.g0)
    space = state.space.with_point(label, exps)
    images = dict(state.images)
    images[label] = _step(state.mode, space, images, state.order, label, state.next_gen)
    new = EmbedState(state.mode, space, MappingProxyType(images), state.order + (label,),
                     state.x0, state.g0, state.sentinel)
    if verify:
        for x in state.order:
            got = new.distance_exponent(x, label)
            if got != space.g(x, label):
                raise IsometryFailure(f"v(H({x!r}) - H({label!r})) = {got}, expected {space.g(x, label)}")
    return new


def broughan_embed(X: UltraSpace, p: int, **kwargs) -> EmbedState:
    """Embed an integer-exponent (``p**-n`` valued) space into the p-adic field.

    The result lives in the mixed-characteristic field over ``G = Z`` with one
    fresh generator per point, the transcendence degree the construction uses.
    """
    for i, row in enumerate(X.exponents):
        for j, g in enumerate(row):
            if g is not INF and g.denominator != 1:
                raise NonIntegralExponent(
                    f"exponent {g} between {X.labels[i]!r} and {X.labels[j]!r} is not an integer")
    g0 = kwargs.get("g0")
    if g0 is not None and exponent(g0).denominator != 1:
        raise NonIntegralExponent(f"sentinel exponent {g0} is not an integer")
    return embed_space(X, MixedChar(p), **kwargs)


# -- certificate ---------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "certified-by-construction"
    witness: object = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"


@dataclass
class EmbedCertificate:
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self) -> list:
        return [c for c in self.checks.values() if not c.passed]

    def __getitem__(self, name) -> CheckResult:
        return self.checks[name]


def _coeff_at(x: SeriesBase, g):
    for h, c in x.terms:
        if h == g:
            return c
        if h > g:
            break
    return None


def _distinct_above(images, pairs):
    """Shared core of (B3) and (N1): from the distance exponent on, coefficients differ.

    ``pairs`` yields ``(x, y, g_xy)``; returns the first witness ``(x, y, g)``.
    """
    for x, y, gxy in pairs:
        cx, cy = images[x].coefficients(), images[y].coefficients()
        for g in sorted(set(cx) | set(cy)):
            if g < gxy:
                continue
            a, b = cx.get(g), cy.get(g)
            if (a or b) and a == b:
                return (x, y, g)
    return None


def _unique_exponent_by_index(images, labels):
    """(B4) via an index: every non-zero coefficient sits at a single exponent."""
    seen = {}
    for x in labels:
        for g, c in images[x].terms:
            for y, h in seen.get(c, ()):
                if h != g:
                    return (y, h, x, g, c)
            seen.setdefault(c, []).append((x, g))
    return None


def _unique_exponent_pairwise(images, labels):
    """(T1) by brute force over all pairs of images and exponent pairs."""
    for x in labels:
        for y in labels:
            for g, c in images[x].terms:
                for h, d in images[y].terms:
                    if g != h and c == d:
                        return (x, g, y, h, c)
    return None


def _lemma_witness(images, labels):
    """A point and exponent whose coefficient no other image shares there."""
    if len(labels) < 2:
        return (labels[0], images[labels[0]].valuation()) if labels else None
    u = min(images[x].first_difference(images[y])
            for i, x in enumerate(labels) for y in labels[i + 1:])
    for x in labels:
        c = _coeff_at(images[x], u)
        if c is not None and all(_coeff_at(images[y], u) != c for y in labels if y != x):
            return (x, u)
    return None


def check_certificate(state: EmbedState, X: UltraSpace) -> EmbedCertificate:
    """Re-check (B1)-(B5), (N1), (T1) and report (T2) for the images of ``X``.

    (B3) and (N1) are checked over the finite union of support exponents; a
    coefficient can only be non-zero there.
    """
    labels = list(X.labels)
    missing = [x for x in labels if x not in state.images]
    if missing:
        raise ValueError(f"state has no image for {missing}")
    images = state.images
    cert = EmbedCertificate()
    pairs = [(x, y) for i, x in enumerate(labels) for y in labels[i + 1:]]

    zero = [x for x in labels if not images[x].terms]
    cert.checks["B1"] = CheckResult("B1", "fail" if zero else "pass", zero[0] if zero else None,
                                    "every image is non-zero")

    bad = None
    for x, y in pairs:
        try:
            got = images[x].first_difference(images[y])
        except PrecisionLoss:
            got = None
        if got != X.g(x, y):
            bad = (x, y, X.g(x, y), got)
            break
    cert.checks["B2"] = CheckResult("B2", "fail" if bad else "pass", bad, "isometry")

    w = _distinct_above(images, ((x, y, X.g(x, y)) for x, y in pairs))
    cert.checks["B3"] = CheckResult("B3", "fail" if w else "pass", w,
                                    "coefficients differ from the distance exponent on")

    w = _unique_exponent_by_index(images, labels)
    cert.checks["B4"] = CheckResult("B4", "fail" if w else "pass", w,
                                    "no coefficient reappears at another exponent")

    pos = {x: i for i, x in enumerate(state.order)}
    w = None
    for x in labels:
        alpha = pos.get(x)
        for g, c in images[x].terms:
            if not isinstance(c, Generator) or alpha is None or c.index > alpha:
                w = (x, g, c, alpha)
                break
        if w:
            break
    cert.checks["B5"] = CheckResult("B5", "fail" if w else "pass", w,
                                    "image of the alpha-th point uses only b_0..b_alpha")

    if zero:
        cert.checks["N1"] = CheckResult("N1", "fail", zero[0], "the image set contains zero")
    else:
        try:
            dist_pairs = [(x, y, images[x].first_difference(images[y])) for x, y in pairs]
        except PrecisionLoss as exc:
            dist_pairs = None
            cert.checks["N1"] = CheckResult("N1", "fail", None, f"distance undetermined: {exc}")
        if dist_pairs is not None:
            w = _distinct_above(images, dist_pairs)
            note = "from v(x - y) on, coefficients differ"
            if not w:
                lw = _lemma_witness(images, labels)
                if lw is not None:
                    note += f"; isolated coefficient at {lw}"
            cert.checks["N1"] = CheckResult("N1", "fail" if w else "pass", w, note)

    w = _unique_exponent_pairwise(images, labels)
    cert.checks["T1"] = CheckResult("T1", "fail" if w else "pass", w,
                                    "coefficient/exponent uniqueness, pairwise")

    w = None
    for x in labels:
        for g, c in images[x].terms:
            if not (isinstance(c, Generator) and c.is_pure):
                w = (x, g, c)
                break
        if w:
            break
    cert.checks["T2"] = CheckResult(
        "T2", "fail" if w else "certified-by-construction", w,
        "every coefficient is a distinct fresh transcendence marker" if not w
        else "coefficient is not a bare transcendence marker")
    return cert
