from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import exponents
from oracles import first_diff, same_pattern
from ultrafield.embed import embed_space
from ultrafield.errors import AlphabetOverflow, InconsistentPrefix
from ultrafield.hahn import Series, dist_valuation
from ultrafield.padic_hahn import PadicSeries
from ultrafield.umetric import UltraSpace, random_ultrametric
from ultrafield.urysohn import (
    Alphabet, UrysohnPoint, delta, from_urysohn, in_piece, injective_extend,
    petal_distance, to_urysohn,
)
from ultrafield.valuecore import INF, EqualChar, ExponentSet, Generator, MixedChar

I = "inf"


def U(*pairs):
    return UrysohnPoint(tuple(pairs))


def test_delta_examples():
    assert delta(U((1, 3)), U((1, 4))) == 1
    f = U((1, 3), (2, 5))
    assert delta(f, f) is INF
    assert delta(f, U((1, 3))) == 2


def test_point_invariants():
    assert U((2, 1), (1, 0)).support == ((2, 1),)
    with pytest.raises(ValueError):
        U((1, 1), (1, 2))
    with pytest.raises(ValueError):
        U((1, -1))


def test_zero_series_maps_to_empty_point():
    assert to_urysohn(Series.zero(EqualChar(3))).support == ()


def test_alphabet_overflow():
    x = Series(EqualChar(0), [(0, Fraction(1, 2))])
    with pytest.raises(AlphabetOverflow):
        to_urysohn(x)
    bounded = Alphabet(EqualChar(3), max_generator=2)
    with pytest.raises(AlphabetOverflow):
        bounded.marker(Generator(3))
    with pytest.raises(AlphabetOverflow):
        bounded.marker(Generator(1, 2))
    assert bounded.letter(bounded.marker(Generator(2))) == Generator(2)


def test_petal_examples():
    x = Series(EqualChar(0), [(-1, Generator(0)), (Fraction(1, 2), Generator(1))])
    ints = ExponentSet(range(-5, 6))
    g, y = petal_distance(x, ints)
    assert g == Fraction(1, 2)
    assert dist_valuation(x, y) == g and in_piece(y, ints)
    assert petal_distance(x, [-1, Fraction(1, 2)]) == (INF, x)


def test_injective_extend_examples():
    B1 = UltraSpace(["b"], [[I]])
    assert injective_extend([], B1) == UrysohnPoint()
    a = U((0, 4), (1, 2), (3, 7))
    B = UltraSpace(["a", "b"], [[I, 2], [2, I]])
    f = injective_extend([a], B)
    assert f == U((0, 4), (1, 2), (2, 1))
    assert delta(a, f) == 2


def test_injective_extend_rejects_bad_prefix():
    B = UltraSpace(["a", "b", "c"], [[I, 1, 0], [1, I, 0], [0, 0, I]])
    with pytest.raises(InconsistentPrefix):
        injective_extend([U((0, 1)), U((0, 2))], B)
    with pytest.raises(InconsistentPrefix):
        injective_extend([U((0, 1))], B)


MODES = [EqualChar(2), EqualChar(5), MixedChar(3), MixedChar(7)]


@st.composite
def elements(draw, mode, max_terms=6):
    gs = draw(st.lists(exponents(3), unique=True, max_size=max_terms))
    letters = [Generator(i) for i in range(4)] + list(range(1, mode.p))
    terms = [(g, draw(st.sampled_from(letters))) for g in gs]
    return PadicSeries(mode.p, terms) if mode.is_mixed else Series(mode, terms)


@st.composite
def points(draw, max_terms=5, markers=3):
    gs = draw(st.lists(exponents(2, -3, 3), unique=True, max_size=max_terms))
    return UrysohnPoint(tuple((g, draw(st.integers(1, markers))) for g in gs))


@given(points(), points(), points())
def test_delta_is_an_ultrametric(f, g, h):
    assert delta(f, g) == delta(g, f)
    assert (delta(f, g) is INF) == (f == g)
    assert delta(f, g) >= min(delta(f, h), delta(h, g))
    d = first_diff(dict(f.support), dict(g.support))
    assert delta(f, g) == (INF if d is None else d)


@given(st.sampled_from(MODES), st.data())
def test_round_trip_and_isometry(mode, data):
    x, y = data.draw(elements(mode)), data.draw(elements(mode))
    assert from_urysohn(to_urysohn(x), mode) == x
    assert delta(to_urysohn(x), to_urysohn(y)) == dist_valuation(x, y)


@given(points(6), st.lists(exponents(2, -3, 3), unique=True, max_size=8))
def test_petal_distance_lands_outside_s(f, S):
    g, y = petal_distance(f, S)
    outside = set(f.exponents()) - set(S)
    assert g is INF if not outside else g in outside
    assert in_piece(y, S) and delta(f, y) == g


@given(points(6), st.lists(exponents(2, -3, 3), unique=True, max_size=8),
       st.lists(exponents(2, -3, 3), unique=True, max_size=8))
def test_piece_axioms(f, S, T):
    assert in_piece(f, f.exponents())
    S, T = ExponentSet(S), ExponentSet(T)
    assert (in_piece(f, S) and in_piece(f, T)) == in_piece(f, S & T)


def _extend_all(B):
    pts = []
    for k in range(len(B)):
        pts.append(injective_extend(pts, B.subspace(B.labels[:k + 1])))
    return pts


@given(st.integers(1, 16), st.integers(0, 10 ** 6), st.integers(1, 4))
def test_repeated_extension_is_exact(n, seed, den):
    B = random_ultrametric(n, seed=seed, denominator=den)
    pts = _extend_all(B)
    for i in range(n):
        for j in range(i + 1, n):
            assert delta(pts[i], pts[j]) == B.g(B.labels[i], B.labels[j])


@given(st.integers(1, 12), st.integers(0, 10 ** 6))
def test_extension_rederives_embedding(n, seed):
    X = random_ultrametric(n, seed=seed, denominator=2)
    E = embed_space(X, EqualChar(2))
    pts = _extend_all(E.space.reordered(E.order))
    by_label = {x: dict(p.support) for x, p in zip(E.order, pts)}
    embedded = {x: dict(to_urysohn(E.images[x]).support) for x in E.order}
    assert same_pattern(by_label, embedded, E.order)
