import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from k3ncount.quadform import (
    GramForm,
    Vec,
    apply,
    automorphisms,
    canonical_pair,
    det2,
    enumerate_vectors,
    matmul,
    orthogonal_complement,
    pair_index,
    pairs_isometric,
    reduce,
    reduced_forms_of_det,
)
from oracles import brute_automorphisms, brute_vectors


@st.composite
def even_forms(draw, bound=200):
    a = 2 * draw(st.integers(1, bound // 2))
    c = 2 * draw(st.integers(1, bound // 2))
    b = draw(st.integers(-bound, bound))
    if a * c - b * b <= 0:
        b = 0
    return GramForm(a, b, c)


def random_even_form(rng, bound=200):
    while True:
        a = 2 * rng.randint(1, bound // 2)
        c = 2 * rng.randint(1, bound // 2)
        b = rng.randint(-bound, bound)
        if a * c - b * b > 0:
            return GramForm(a, b, c)


def test_gram_form_validation():
    with pytest.raises(ValueError):
        GramForm(2, 3, 2)
    with pytest.raises(ValueError):
        GramForm(3, 1, 2)
    assert GramForm(4, 2, 10).det == 36
    assert GramForm.from_matrix([[4, 6], [6, 18]]) == GramForm(4, 6, 18)


@pytest.mark.parametrize(
    "form, expected",
    [
        ((2, 1, 2), (2, 1, 2)),
        ((4, 6, 18), (4, 2, 10)),
        ((10, 12, 18), (4, 2, 10)),
    ],
)
def test_reduce_examples(form, expected):
    g = GramForm(*form)
    reduced, p = reduce(g)
    assert reduced == GramForm(*expected)
    assert g.transform(p) == reduced
    assert det2(p) in (1, -1)


def test_reduce_identity_when_reduced():
    assert reduce(GramForm(2, 1, 2))[1] == ((1, 0), (0, 1))


def test_reduce_ten_thousand_random_forms():
    rng = random.Random(20261016)
    for _ in range(10**4):
        g = random_even_form(rng)
        reduced, p = reduce(g)
        assert 0 <= 2 * abs(reduced.b) <= reduced.a <= reduced.c
        assert reduced.det == g.det
        assert det2(p) in (1, -1)
        assert g.transform(p) == reduced
        assert reduce(reduced) == (reduced, ((1, 0), (0, 1)))


@given(even_forms(), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_reduce_is_a_class_invariant(g, p, q, r, s):
    if p * s - q * r not in (1, -1):
        return
    assert reduce(g.transform(((p, q), (r, s))))[0] == reduce(g)[0]


def test_reduced_forms_are_pairwise_inequivalent():
    # distinct reduced forms have distinct sorted norm spectra or are not isometric
    for det in (3, 15, 36, 44, 100, 416):
        forms = reduced_forms_of_det(det)
        for f in forms:
            assert f.is_reduced() and f.det == det
        for f, g in combinations(forms, 2):
            norms_f = [len(enumerate_vectors(f, k)) for k in range(2, 40, 2)]
            norms_g = [len(enumerate_vectors(g, k)) for k in range(2, 40, 2)]
            if norms_f == norms_g:
                # same theta series prefix: look for an explicit isometry
                assert not any(
                    g.transform(((p, q), (r, s))) == f
                    for p in range(-4, 5) for q in range(-4, 5)
                    for r in range(-4, 5) for s in range(-4, 5)
                    if p * s - q * r in (1, -1)
                )


def test_reduced_forms_cover_every_class():
    rng = random.Random(7)
    for _ in range(500):
        g = random_even_form(rng, bound=60)
        assert reduce(g)[0] in reduced_forms_of_det(g.det)


@pytest.mark.parametrize(
    "form, norm, expected",
    [
        ((2, 0, 2), 2, [(-1, 0), (0, -1), (0, 1), (1, 0)]),
        ((2, 0, 4), 6, [(-1, -1), (-1, 1), (1, -1), (1, 1)]),
    ],
)
def test_enumerate_vectors_examples(form, norm, expected):
    assert enumerate_vectors(GramForm(*form), norm) == expected


def test_enumerate_vectors_contains_glued_h():
    # overlattice of the (n, d, t) = (10, 9, 3) glue, reduced; h has norm 18
    vecs = enumerate_vectors(GramForm(4, 2, 10), 18)
    assert vecs
    assert Vec(-2, 1) in vecs and Vec(2, -1) in vecs


@settings(max_examples=300)
@given(even_forms(bound=40), st.integers(1, 40))
def test_enumerate_vectors_complete(g, half):
    norm = 2 * half
    box = norm + 2
    assert enumerate_vectors(g, norm) == brute_vectors(g.a, g.b, g.c, norm, box)


@pytest.mark.parametrize("form, order", [((2, 0, 4), 4), ((2, 1, 2), 12), ((2, 0, 2), 8), ((4, 2, 10), 4)])
def test_automorphism_orders(form, order):
    g = GramForm(*form)
    group = automorphisms(g)
    assert len(group) == order
    assert group == brute_automorphisms(*form)


def _closed(group):
    ids = set(group)
    assert ((1, 0), (0, 1)) in ids and ((-1, 0), (0, -1)) in ids
    for m in group:
        for n in group:
            assert matmul(m, n) in ids
        assert any(matmul(m, n) == ((1, 0), (0, 1)) for n in group)


@settings(max_examples=200)
@given(even_forms(bound=60))
def test_automorphism_group_closed(g):
    reduced = reduce(g)[0]
    group = automorphisms(reduced)
    _closed(group)
    for m in group:
        assert reduced.transform(m) == reduced


@pytest.mark.parametrize(
    "form, h, expected",
    [
        ((18, 0, 18), (1, 0), (0, 1)),
        ((2, 0, 4), (0, 1), (1, 0)),
    ],
)
def test_orthogonal_complement_examples(form, h, expected):
    assert orthogonal_complement(GramForm(*form), h) == expected


def test_orthogonal_complement_of_glued_h():
    g = GramForm(4, 2, 10)
    delta = orthogonal_complement(g, (-2, 1))
    assert g.norm(delta) == 18
    assert g.inner(delta, (-2, 1)) == 0


@given(even_forms(bound=80), st.integers(-6, 6), st.integers(-6, 6))
def test_orthogonal_complement_properties(g, x, y):
    if x == 0 and y == 0:
        return
    delta = orthogonal_complement(g, (x, y))
    assert g.inner(delta, (x, y)) == 0
    assert delta.is_primitive()
    assert delta > Vec(0, 0)


@pytest.mark.parametrize(
    "form, h, expected",
    [((18, 0, 18), (1, 0), 1), ((2, 0, 2), (1, 0), 1), ((4, 6, 18), (3, -1), 3), ((4, 2, 10), (-2, 1), 3)],
)
def test_pair_index_examples(form, h, expected):
    assert pair_index(GramForm(*form), h) == expected


@given(even_forms(bound=60), st.integers(-5, 5), st.integers(-5, 5))
def test_pair_index_identity(g, x, y):
    from math import gcd
    if gcd(x, y) != 1:
        return
    delta = orthogonal_complement(g, (x, y))
    beta = pair_index(g, (x, y))
    assert beta * beta * g.det == g.norm((x, y)) * g.norm(delta)
    # the index is also the determinant of the (h, delta) basis matrix
    assert beta == abs(x * delta.y - y * delta.x)


def test_pairs_isometric_examples():
    g = GramForm(4, 6, 18)
    assert pairs_isometric((g, (3, -1)), (g, (3, -1)))
    assert pairs_isometric((g, (3, -1)), (g, (-3, 1)))
    # the two (10, 9, 3) glues
    assert pairs_isometric((g, (3, -1)), (GramForm(10, 12, 18), (3, -2)))


def test_pairs_isometric_distinguishes():
    g = GramForm(2, 0, 22)
    h1 = Vec(1, 0)
    h2 = Vec(0, 1)
    assert not pairs_isometric((g, h1), (g, h2))


def test_canonical_pair_examples():
    first = canonical_pair(GramForm(4, 6, 18), (3, -1))
    second = canonical_pair(GramForm(10, 12, 18), (3, -2))
    assert first == second
    assert first.gram == GramForm(4, 2, 10)
    assert canonical_pair(first.gram, first.h) == first
    assert first.beta == 3 and first.gram.norm(first.delta) == 18


def _sample_pairs(det, norm):
    pairs = []
    for form in reduced_forms_of_det(det):
        for h in enumerate_vectors(form, norm):
            if h.is_primitive():
                pairs.append((form, h))
    return pairs


@pytest.mark.parametrize("det, norm", [(44, 30), (36, 18), (416, 210), (100, 10), (3, 2), (4, 2)])
def test_canonical_iff_isometric(det, norm):
    pairs = _sample_pairs(det, norm)
    rng = random.Random(det)
    # scramble the basis so reduction actually has to work
    scrambled = []
    for g, h in pairs:
        p = rng.choice([((1, 1), (0, 1)), ((0, 1), (1, 0)), ((2, 1), (1, 1)), ((1, -3), (0, -1))])
        inv = ((p[1][1], -p[0][1]), (-p[1][0], p[0][0]))
        if det2(p) == -1:
            inv = tuple(tuple(-v for v in row) for row in inv)
        scrambled.append((g.transform(p), apply(inv, h)))
    for (p1, q1) in combinations(pairs + scrambled, 2):
        assert (canonical_pair(*p1) == canonical_pair(*q1)) == pairs_isometric(p1, q1)


def test_pairs_isometric_is_an_equivalence():
    pairs = _sample_pairs(44, 30) + _sample_pairs(36, 18)
    rel = {(i, j): pairs_isometric(p, q) for i, p in enumerate(pairs) for j, q in enumerate(pairs)}
    idx = range(len(pairs))
    assert all(rel[i, i] for i in idx)
    assert all(rel[i, j] == rel[j, i] for i in idx for j in idx)
    for i in idx:
        for j in idx:
            if not rel[i, j]:
                continue
            for k in idx:
                if rel[j, k]:
                    assert rel[i, k]


@given(even_forms(bound=60), st.integers(-4, 4), st.integers(-4, 4))
def test_canonical_pair_collapses_orbits(g, x, y):
    from math import gcd
    if gcd(x, y) != 1:
        return
    base = canonical_pair(g, (x, y))
    for m in automorphisms(g):
        assert canonical_pair(g, apply(m, (x, y))) == base


def test_pair_index_guard(monkeypatch):
    import k3ncount.quadform as qf

    # a wrong complement generator makes the quotient non-integral
    monkeypatch.setattr(qf, "orthogonal_complement", lambda g, h: Vec(1, 1))
    with pytest.raises(qf.NotAnInteger):
        qf.pair_index(GramForm(2, 0, 4), (1, 0))
