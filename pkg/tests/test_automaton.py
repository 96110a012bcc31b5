import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from eetc import automaton as fa
from eetc.model import Interaction, Trace
from eetc.randexpr import POOL

a, b, c, d = (Interaction("A", "B", m) for m in "abcd")


def lang(aut, n=8):
    return fa.words(aut, n)


def brute_shuffle(u, v):
    """Merges of u and v by choosing which positions come from u."""
    out = set()
    n = len(u) + len(v)
    for mask in itertools.product((0, 1), repeat=n):
        if sum(mask) != len(u):
            continue
        iu, iv = iter(u), iter(v)
        out.add(tuple(next(iu) if bit else next(iv) for bit in mask))
    return out


def test_primitives():
    assert lang(fa.epsilon()) == {()}
    assert lang(fa.empty_language()) == set()
    assert lang(fa.symbol(a)) == {(a,)}
    assert lang(fa.word([a, b])) == {(a, b)}


def test_union_concat_star():
    ab = fa.union(fa.symbol(a), fa.symbol(b))
    assert lang(ab) == {(a,), (b,)}
    assert lang(fa.concat(ab, fa.symbol(c))) == {(a, c), (b, c)}
    assert lang(fa.star(fa.symbol(a)), 3) == {(), (a,), (a, a), (a, a, a)}
    assert lang(fa.concat(fa.epsilon(), fa.symbol(a))) == {(a,)}


@pytest.mark.parametrize("lo, hi, expected", [
    (0, 2, {(), (a,), (a, a)}),
    (1, 1, {(a,)}),
    (2, 3, {(a, a), (a, a, a)}),
    (0, 0, {()}),
])
def test_repeat_bounds(lo, hi, expected):
    assert lang(fa.repeat(fa.symbol(a), lo, hi)) == expected


def test_repeat_unbounded_with_minimum():
    assert lang(fa.repeat(fa.symbol(a), 2, None), 4) == {(a, a), (a, a, a), (a, a, a, a)}


def test_shuffle_of_two_words():
    got = lang(fa.shuffle(fa.word([a, a]), fa.word([b, b])))
    assert got == brute_shuffle((a, a), (b, b))
    assert len(got) == 6


def test_shuffle_with_epsilon_is_identity():
    x = fa.union(fa.word([a, b]), fa.star(fa.symbol(c)))
    assert lang(fa.shuffle(x, fa.epsilon())) == lang(x)
    assert lang(fa.shuffle(fa.epsilon(), x)) == lang(x)


def test_shuffle_overlapping_alphabets():
    expected = brute_shuffle((a,), (a,))
    assert expected == {(a, a)}
    assert lang(fa.shuffle(fa.symbol(a), fa.symbol(a))) == expected


@pytest.mark.parametrize("m, n", [(m, n) for m in range(1, 5) for n in range(1, 5)])
def test_shuffle_cardinality(m, n):
    got = lang(fa.shuffle(fa.word([a] * m), fa.word([b] * n)), m + n)
    assert len(got) == comb(m + n, m)
    assert got == brute_shuffle((a,) * m, (b,) * n)


def test_determinize_is_complete_and_deterministic():
    x = fa.union(fa.word([a, b]), fa.word([a, c]))
    d_ = fa.determinize(x)
    assert d_.deterministic
    assert len(d_.initial) == 1
    for row in d_.delta:
        assert set(row) == set(d_.alphabet)
    assert lang(d_) == lang(x)


def test_complement_over_wider_alphabet():
    x = fa.symbol(a)
    comp = fa.complement(x, {b})
    assert comp.accepts([])
    assert not comp.accepts([a])
    assert comp.accepts([b])
    assert comp.accepts([a, a])


def test_intersect_and_emptiness():
    x = fa.star(fa.union(fa.symbol(a), fa.symbol(b)))
    y = fa.concat(fa.symbol(b), fa.symbol(a))
    assert lang(fa.intersect(x, y)) == {(b, a)}
    assert fa.is_empty(fa.intersect(x, fa.complement(x))) == (True, None)
    assert fa.is_empty(fa.empty_language()) == (True, None)


def test_intersect_alphabet_is_union():
    assert fa.intersect(fa.symbol(a), fa.symbol(b)).alphabet == {a, b}


def test_shortest_witness_is_lexicographically_least():
    x = fa.union(fa.word([c, c]), fa.word([b, a]), fa.word([a, b, c]), fa.word([b, b]))
    empty, w = fa.is_empty(x)
    assert not empty
    assert w == Trace((b, a))


def test_with_gaps_accepts_scattered_occurrences():
    g = fa.with_gaps(fa.word([a, b]), {a, b, c})
    assert g.accepts([c, a, c, c, b, c])
    assert not g.accepts([b, a])


def test_invalid_automaton_rejected():
    with pytest.raises(ValueError):
        fa.InteractionAutomaton(frozenset({a}), 1, frozenset({0}), frozenset(), ({b: (0,)},))
    with pytest.raises(ValueError):
        fa.InteractionAutomaton(frozenset({a}), 1, frozenset({0}), frozenset(), ({a: (5,)},))


def test_dump_is_sorted_and_stable():
    x = fa.union(fa.word([b, a]), fa.word([a, b]))
    text = fa.dump(x)
    assert text == fa.dump(fa.union(fa.word([b, a]), fa.word([a, b])))
    assert text.splitlines()[0].startswith("initial: ")
    edges = text.splitlines()[2:]
    assert all("\t-> " in line for line in edges)
    assert edges == sorted(edges, key=lambda s: (int(s.split("\t")[0]), int(s.split()[2])))


# random automata built from the primitives

small_events = st.sampled_from(sorted(POOL)[:3])


@st.composite
def automata(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return fa.word(draw(st.lists(small_events, max_size=3)))
    op = draw(st.sampled_from(["union", "concat", "star", "shuffle"]))
    x = draw(automata(depth - 1))
    if op == "star":
        return fa.star(x)
    y = draw(automata(depth - 1))
    return {"union": fa.union, "concat": fa.concat, "shuffle": fa.shuffle}[op](x, y)


@settings(max_examples=150, deadline=None)
@given(automata())
def test_determinize_and_double_complement_preserve_language(x):
    assert lang(fa.determinize(x), 5) == lang(x, 5)
    assert lang(fa.complement(fa.complement(x)), 5) == lang(x, 5)


@settings(max_examples=150, deadline=None)
@given(automata(), automata())
def test_product_constructions_match_set_operations(x, y):
    lx, ly = lang(x, 5), lang(y, 5)
    assert lang(fa.intersect(x, y), 5) == lx & ly
    assert lang(fa.union(x, y), 5) == lx | ly
    brute = set()
    for u in lx:
        for v in ly:
            if len(u) + len(v) <= 5:
                brute |= brute_shuffle(u, v)
    assert lang(fa.shuffle(x, y), 5) == brute


@settings(max_examples=150, deadline=None)
@given(automata())
def test_complement_partitions_all_short_words(x):
    sigma = sorted(x.alphabet)
    comp = fa.complement(x)
    for n in range(4):
        for w in itertools.product(sigma, repeat=n):
            assert x.accepts(w) != comp.accepts(w)


@settings(max_examples=150, deadline=None)
@given(automata())
def test_witness_is_shortest(x):
    empty, w = fa.is_empty(x)
    if empty:
        assert not lang(x, 9)
    else:
        assert x.accepts(w)
        shortest = min(lang(x, len(w)), key=lambda t: (len(t), t))
        assert tuple(w) == shortest
