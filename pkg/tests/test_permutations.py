import itertools

import pytest

from snhecke.permutations import (
    all_elements,
    bruhat_leq,
    compose,
    coset_max_representative,
    coset_min_representative,
    coset_min_representatives,
    element_index,
    elements,
    format_perm,
    identity,
    inverse,
    is_involution,
    left_descents,
    length,
    longest_element,
    mul_simple_left,
    mul_simple_right,
    parabolic_elements,
    parabolic_longest,
    parse_perm,
    reduced_word,
    right_descents,
    simple,
    sort_key,
)


def test_group_operations():
    s, t = simple(1, 3), simple(2, 3)
    e = identity(3)
    assert compose(s, s) == e
    assert compose(e, t) == t
    st, ts = compose(s, t), compose(t, s)
    assert inverse(st) == ts
    for w in elements(4):
        assert compose(w, inverse(w)) == identity(4)
    with pytest.raises(ValueError):
        compose(identity(3), identity(4))


def test_length():
    assert length(identity(5)) == 0
    assert length(longest_element(4)) == 6
    s, t = simple(1, 3), simple(2, 3)
    assert length(compose(compose(s, t), s)) == 3


def test_descents_and_reduced_words():
    w0 = longest_element(4)
    assert right_descents(w0) == frozenset({1, 2, 3})
    assert left_descents(w0) == frozenset({1, 2, 3})
    assert reduced_word(identity(4)) == ()
    assert len(reduced_word(longest_element(3))) == 3
    for w in elements(4):
        word = reduced_word(w)
        assert len(word) == length(w)
        acc = identity(4)
        for i in word:
            acc = compose(acc, simple(i, 4))
        assert acc == w
        assert right_descents(w) == {i for i in range(1, 4) if length(mul_simple_right(w, i)) < length(w)}
        assert left_descents(w) == {i for i in range(1, 4) if length(mul_simple_left(w, i)) < length(w)}


def _bruhat_by_subwords(n):
    # x <= y iff some subword of a reduced word of y multiplies to x
    order = {}
    for y in elements(n):
        word = reduced_word(y)
        reachable = set()
        for k in range(len(word) + 1):
            for positions in itertools.combinations(range(len(word)), k):
                acc = identity(n)
                for p in positions:
                    acc = compose(acc, simple(word[p], n))
                reachable.add(acc)
        order[y] = reachable
    return order


@pytest.mark.parametrize("n", [3, 4])
def test_bruhat_leq_matches_subword_characterization(n):
    order = _bruhat_by_subwords(n)
    for x in elements(n):
        for y in elements(n):
            assert bruhat_leq(x, y) == (x in order[y])


def test_bruhat_examples():
    e = identity(3)
    s, t = simple(1, 3), simple(2, 3)
    for w in elements(3):
        assert bruhat_leq(e, w)
    assert bruhat_leq(s, compose(compose(s, t), s))
    assert not bruhat_leq(compose(s, t), compose(t, s))


def test_length_subadditive_with_reduced_equality():
    for x in elements(4):
        for y in elements(4):
            lxy = length(compose(x, y))
            assert lxy <= length(x) + length(y)
            # equality exactly when concatenating reduced words stays reduced
            assert (lxy == length(x) + length(y)) == (
                len(reduced_word(x) + reduced_word(y)) == lxy
            )


def test_parabolic_subgroups():
    assert parabolic_longest(set(), 4) == identity(4)
    assert parabolic_longest({1, 2, 3}, 4) == longest_element(4)
    assert parabolic_longest({1, 2}, 4) == (3, 2, 1, 4)
    assert len(parabolic_elements({1, 2}, 4)) == 6
    assert len(parabolic_elements({1, 3}, 4)) == 4
    els = parabolic_elements({1, 2}, 4)
    w0j = parabolic_longest({1, 2}, 4)
    assert max(els, key=length) == w0j
    assert sum(1 for w in els if length(w) == length(w0j)) == 1


def test_coset_representatives():
    n = 4
    for J in ({1}, {2}, {1, 2}, {1, 3}):
        reps = coset_min_representatives(J, n, side="left")
        assert len(reps) * len(parabolic_elements(J, n)) == 24
        w0j = parabolic_longest(J, n)
        for w in elements(n):
            mn = coset_min_representative(w, J, side="left")
            mx = coset_max_representative(w, J, side="left")
            assert length(mx) == length(w0j) + length(mn)
            assert mx == compose(w0j, mn)
    # J empty: every element is its own coset representative
    assert coset_min_representatives(set(), n, side="left") == elements(n)
    # J everything: only the identity
    assert coset_min_representatives({1, 2, 3}, n, side="left") == (identity(n),)


def test_all_elements_and_involutions():
    assert len(list(all_elements(4))) == 24
    assert is_involution(longest_element(5))
    assert sum(1 for w in elements(4) if is_involution(w)) == 10
    # fixed total order: length first, then one-line lex
    els = elements(3)
    assert els == ((1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1))
    assert [element_index(3)[w] for w in els] == list(range(6))


def test_parse_and_format():
    assert parse_perm("2314") == (2, 3, 1, 4)
    assert parse_perm("2,3,1,4") == (2, 3, 1, 4)
    assert parse_perm("s1 s2", n=3) == (2, 3, 1)
    assert format_perm((2, 3, 1, 4)) == "2314"
    with pytest.raises(ValueError):
        parse_perm("2134", n=3)
    with pytest.raises(ValueError):
        parse_perm("221")
    with pytest.raises(ValueError):
        parse_perm("s1 s2")
