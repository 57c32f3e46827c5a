"""Acceptance suite.

Each test records one line ``criterion N: PASS|FAIL ...``; conftest prints the
collected lines in the terminal summary, so they show up in every pytest run.
"""
import io
import json
import random
import sys
import time
from fractions import Fraction
from itertools import combinations
from types import MappingProxyType

import pytest

sys.path.insert(0, __import__("os").path.dirname(__file__))

from oracles import (  # noqa: E402
    brute_ultrametric, coset_bases, coset_values, convolve, first_diff,
    teich_by_iteration, teich_closed_form,
)
from ultrafield import jsonio  # noqa: E402
from ultrafield.cli import run  # noqa: E402
from ultrafield.embed import (  # noqa: E402
    EmbedState, broughan_embed, check_certificate, embed_space,
)
from ultrafield.hahn import Series, dist_valuation  # noqa: E402
from ultrafield.padic_hahn import PadicSeries, normalize, pseries_invert  # noqa: E402
from ultrafield.umetric import SENTINEL, UltraSpace, random_ultrametric  # noqa: E402
from ultrafield.urysohn import (  # noqa: E402
    UrysohnPoint, delta, in_piece, injective_extend, petal_distance, to_urysohn,
)
from ultrafield.valuecore import INF, EqualChar, Generator, MixedChar, PrimeField  # noqa: E402
from ultrafield.witt import PadicInt, teich_digits, teich_reassemble, teichmuller  # noqa: E402

FIELDS = [EqualChar(2), EqualChar(3), EqualChar(0), MixedChar(2), MixedChar(3), MixedChar(5)]
SEEDS = range(200)


def corpus_space(seed):
    return random_ultrametric(1 + seed % 32, seed=seed, denominator=1 + seed % 8)


RESULTS = []


def report(n, ok, detail=""):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
    RESULTS.append(line)
    print(line)
    assert ok, line


def series(mode, terms, trunc=INF):
    if mode.is_mixed:
        return PadicSeries(mode.p, terms, trunc)
    return Series(mode, terms, trunc)


# -- 1 -------------------------------------------------------------------------

def test_criterion_1_exact_isometry():
    corpus = [corpus_space(s) for s in SEEDS]
    assert all(len(X) <= 32 for X in corpus)
    assert all(g.denominator <= 8 for X in corpus for g in X.exponent_set())
    bad = []
    start = time.perf_counter()
    for seed, X in zip(SEEDS, corpus):
        for mode in FIELDS:
            E = embed_space(X, mode, verify=False)
            for x, y in combinations(X.labels, 2):
                if dist_valuation(E.images[x], E.images[y]) != X.g(x, y):
                    bad.append((seed, str(mode), x, y))
    elapsed = time.perf_counter() - start
    checked = sum(len(X) * (len(X) - 1) // 2 for X in corpus) * len(FIELDS)
    report(1, not bad and elapsed < 5.0,
           f"{len(corpus)} spaces x {len(FIELDS)} fields, {checked} pairs, "
           f"{len(bad)} mismatches, {elapsed:.2f}s")


# -- 2 -------------------------------------------------------------------------

def _forge(E, **images):
    imgs = dict(E.images)
    imgs.update(images)
    return EmbedState(E.mode, E.space, MappingProxyType(imgs), E.order, E.x0, E.g0)


def _violations():
    I = "inf"
    X = UltraSpace(["a", "b"], [[I, 0], [0, I]])
    m3, q = EqualChar(3), EqualChar(0)
    E3, Eq, Em = embed_space(X, m3), embed_space(X, q), embed_space(X, MixedChar(3))
    g = Generator
    return X, [
        ("B1", _forge(Em, a=PadicSeries.zero(3)), lambda w: w == "a"),
        ("B3", _forge(E3, a=series(m3, [(0, g(1)), (2, g(2))]),
                      b=series(m3, [(0, g(2)), (2, g(2))])), lambda w: w == ("a", "b", 2)),
        ("B4", _forge(E3, a=series(m3, [(0, g(1))]),
                      b=series(m3, [(0, g(2)), (1, g(1))])), lambda w: w is not None),
        ("B5", _forge(Eq, a=series(q, [(0, g(7))])), lambda w: w[0] == "a"),
    ]


def test_criterion_2_certificates():
    failures = 0
    checked = 0
    for seed in SEEDS:
        X = corpus_space(seed)
        mode = FIELDS[seed % len(FIELDS)]
        cert = check_certificate(embed_space(X, mode), X)
        checked += 1
        core = [cert[k] for k in ("B1", "B2", "B3", "B4", "B5", "N1", "T1")]
        if not all(c.status == "pass" for c in core) or cert.failures():
            failures += 1
    X, cases = _violations()
    triggered = []
    for name, state, witness_ok in cases:
        c = check_certificate(state, X)[name]
        triggered.append(c.status == "fail" and c.witness is not None and witness_ok(c.witness))
    report(2, failures == 0 and all(triggered),
           f"{checked} engine certificates, {failures} failing; "
           f"violations {'/'.join(n for n, *_ in cases)} triggered: {triggered}")


# -- 3 -------------------------------------------------------------------------

TRUNC = Fraction(10)


def _random_element(rng, mode):
    k = rng.randint(1, 4)
    gs = sorted({Fraction(rng.randint(-6, 4), rng.choice((1, 2, 3))) for _ in range(k)})
    terms = []
    for g in gs:
        if mode.p == 0:
            c = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5))
        else:
            c = rng.randint(1, mode.p - 1)
        terms.append((g, c))
    return series(mode, terms, TRUNC)


def _reduce_for(mode):
    return (lambda c: c) if mode.p == 0 else (lambda c: c % mode.p)


def _plain(x):
    return {g: (c.value if isinstance(c, PrimeField) else c) for g, c in x.terms}


def test_criterion_3_field_axioms():
    rng = random.Random(3)
    bad = []
    count = 0
    for mode in FIELDS:
        for _ in range(500):
            x, y = _random_element(rng, mode), _random_element(rng, mode)
            vx, vy = x.valuation(), y.valuation()
            prod = x * y
            if prod.valuation() != vx + vy:
                bad.append(("mul", mode, x, y))
            if not mode.is_mixed:
                want = convolve(_plain(x), _plain(y), _reduce_for(mode))
                want = {g: c for g, c in want.items() if g < prod.trunc}
                if _plain(prod) != want:
                    bad.append(("conv", mode, x, y))
            s = x + y
            if vx != vy:
                if s.valuation() != min(vx, vy):
                    bad.append(("add=", mode, x, y))
            elif s.valuation_lower_bound() < min(vx, vy):
                bad.append(("add>=", mode, x, y))
            order = min(Fraction(6), TRUNC - 2 * vx)
            assert order >= 2
            inv = pseries_invert(x, order) if mode.is_mixed else x.invert(order)
            back = x * inv
            one = series(mode, [(0, 1)], order)
            if back.trunc < order or back.truncate_below(order) != one:
                bad.append(("inv", mode, x))
            count += 1
    report(3, not bad, f"{count} element pairs across {len(FIELDS)} fields, {len(bad)} failures")


# -- 4 -------------------------------------------------------------------------

def test_criterion_4_teichmuller():
    bad = []
    checks = 0
    for p in (2, 3, 5, 7):
        for N in range(1, 9):
            mod = p ** N
            w = {a: teichmuller(a, p, N).value for a in range(p)}
            for a in range(p):
                checks += 1
                if w[a] != teich_by_iteration(a, p, N) or w[a] != teich_closed_form(a, p, N):
                    bad.append(("oracle", p, N, a))
                if a and pow(w[a], p - 1, mod) != 1:
                    bad.append(("unit", p, N, a))
                for b in range(p):
                    if w[a * b % p] != w[a] * w[b] % mod:
                        bad.append(("mult", p, N, a, b))
    rng = random.Random(4)
    for _ in range(1000):
        p, N = rng.choice((2, 3, 5, 7)), rng.randint(1, 8)
        a = PadicInt(rng.randrange(p ** N), p, N)
        if teich_reassemble(teich_digits(a), p, N) != a:
            bad.append(("reassemble", a))
    spot = teichmuller(2, 5, 2).value
    oracle = teich_by_iteration(2, 5, 2)
    report(4, not bad and spot == oracle == 7,
           f"{checks} residue lifts, 1000 reassemblies, omega(2) mod 25 = {spot}, "
           f"{len(bad)} failures")


# -- 5 -------------------------------------------------------------------------

def _raw_list(rng, p, trunc):
    out = []
    for _ in range(rng.randint(0, 6)):
        g = Fraction(rng.randint(-8, 8), rng.choice((1, 2, 4)))
        kind = rng.choice(("int", "digit", "padic"))
        if kind == "int":
            c = rng.randint(-200, 200)
        elif kind == "digit":
            c = PrimeField(rng.randrange(p), p)
        else:
            need = max(1, -(-(trunc - g) // 1))
            c = PadicInt(rng.randrange(p ** (need + 2)), p, int(need) + rng.randint(0, 2))
        out.append((g, c))
    return out


def _ints(terms, p):
    out = []
    for g, c in terms:
        if isinstance(c, PrimeField):
            out.append((g, teich_closed_form(c.value, p, 48)))
        elif isinstance(c, PadicInt):
            out.append((g, c.value))
        else:
            out.append((g, c))
    return out


def test_criterion_5_normalization():
    rng = random.Random(5)
    bad = []
    for i in range(500):
        p = (2, 3, 5, 7)[i % 4]
        trunc = Fraction(rng.randint(2, 24), rng.choice((1, 2, 4)))
        raw, raw2 = _raw_list(rng, p, trunc), _raw_list(rng, p, trunc)
        x, y = normalize(raw, p, trunc), normalize(raw2, p, trunc)
        if normalize(x.terms, p, trunc) != x:
            bad.append(("idempotent", i))
        supp = [g for g, _ in raw]
        if not all(any(h <= g and (g - h).denominator == 1 for h in supp) for g in x.support()):
            bad.append(("support", i))
        if normalize(raw + raw2, p, trunc) != normalize(list(x.terms) + list(y.terms), p, trunc):
            bad.append(("additive", i))
        a, b = _ints(raw, p), _ints(x.terms, p)
        bases = coset_bases(a, b)
        if coset_values(a, p, trunc, bases) != coset_values(b, p, trunc, bases):
            bad.append(("value", i))
    report(5, not bad, f"500 raw term lists, {len(bad)} failures")


# -- 6 -------------------------------------------------------------------------

def _point(rng, terms=5, markers=3):
    gs = {Fraction(rng.randint(-6, 6), rng.choice((1, 2))) for _ in range(rng.randint(0, terms))}
    return UrysohnPoint(tuple((g, rng.randint(1, markers)) for g in gs))


def _element(rng, mode):
    gs = {Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3))) for _ in range(rng.randint(0, 6))}
    letters = [Generator(i) for i in range(4)] + list(range(1, mode.p))
    return series(mode, [(g, rng.choice(letters)) for g in gs])


def test_criterion_6_urysohn():
    rng = random.Random(6)
    bad = []
    for _ in range(1000):
        f, g, h = _point(rng), _point(rng), _point(rng)
        d = delta(f, g)
        want = first_diff(dict(f.support), dict(g.support))
        if d != (INF if want is None else want) or d != delta(g, f):
            bad.append("delta-oracle")
        if (d is INF) != (f == g) or d < min(delta(f, h), delta(h, g)):
            bad.append("delta-ultrametric")
    modes = [EqualChar(2), EqualChar(3), EqualChar(5), MixedChar(2), MixedChar(3), MixedChar(7)]
    for i in range(500):
        mode = modes[i % len(modes)]
        x, y = _element(rng, mode), _element(rng, mode)
        if delta(to_urysohn(x), to_urysohn(y)) != dist_valuation(x, y):
            bad.append("T-isometry")
    for _ in range(500):
        f = _point(rng, terms=6)
        S = {Fraction(rng.randint(-6, 6), rng.choice((1, 2))) for _ in range(rng.randint(0, 8))}
        gexp, w = petal_distance(f, S)
        outside = set(f.exponents()) - S
        if (gexp is INF) != (not outside) or (outside and gexp not in outside):
            bad.append("P4")
        if not in_piece(w, S) or delta(f, w) != gexp:
            bad.append("petal-witness")
    extended = 0
    for k in range(100):
        B = random_ultrametric(rng.randint(1, 16), seed=10_000 + k, denominator=rng.randint(1, 4))
        pts = []
        for j in range(len(B)):
            pts.append(injective_extend(pts, B.subspace(B.labels[:j + 1])))
        if any(delta(pts[i], pts[j]) != B.g(B.labels[i], B.labels[j])
               for i, j in combinations(range(len(B)), 2)):
            bad.append("extend")
        extended += 1
    report(6, not bad, f"1000 triples, 500 pairs, 500 petal samples, "
                       f"{extended} extension instances, {len(bad)} failures")


# -- 7 -------------------------------------------------------------------------

def test_criterion_7_broughan(tmp_path):
    X = random_ultrametric(10, seed=7, denominator=1)
    assert all(g.denominator == 1 for g in X.exponent_set())
    E = broughan_embed(X, 3)
    p = Fraction(3)
    exact = all(
        dist_valuation(E.images[x], E.images[y]) == X.g(x, y)
        and p ** -int(dist_valuation(E.images[x], E.images[y])) == p ** -int(X.g(x, y))
        for x, y in combinations(X.labels, 2))
    gens = set()
    for x in X.labels:
        gens |= E.images[x].generator_indices()
    sentinel_zero = E.images[SENTINEL].is_zero()
    path = tmp_path / "space.json"
    path.write_text(jsonio.dumps(jsonio.space_to_json(X)))
    out = io.StringIO()
    code = run(["broughan", "--p", "3", str(path)], stdout=out)
    rep = json.loads(out.getvalue())["report"]
    ok = (exact and E.mode == MixedChar(3) and len(gens) == 10 and E.generator_count == 10
          and sentinel_zero and code == 0 and rep["transcendence_degree_required"] == 10)
    report(7, ok, f"10 points over Z, p=3, distances exact: {exact}, "
                  f"fresh generators: {len(gens)}, reported degree: {rep['transcendence_degree_required']}")


# -- 8 -------------------------------------------------------------------------

def test_criterion_8_order_robustness():
    rng = random.Random(8)
    bad = []
    runs = 0
    for seed in SEEDS:
        X = corpus_space(seed)
        for k in range(5):
            order = list(X.labels)
            rng.shuffle(order)
            mode = FIELDS[(seed + k) % len(FIELDS)]
            E = embed_space(X, mode, order=order, verify=False)
            runs += 1
            for x, y in combinations(X.labels, 2):
                got = first_diff(dict(E.images[x].terms), dict(E.images[y].terms))
                if got != X.g(x, y):
                    bad.append((seed, k, x, y))
    assert not any(brute_ultrametric(X.labels, X.exponents) for X in map(corpus_space, range(20)))
    report(8, not bad, f"{runs} shuffled embeddings, {len(bad)} mismatches")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
