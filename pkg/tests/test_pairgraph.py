import random

import pytest
from hypothesis import given, settings, strategies as st

from synchrokit.core import Dfa, Transformation, Word
from synchrokit.families import cerny, f
from synchrokit.pairgraph import (
    PairCertificate,
    apply_word_to_pair,
    build_pair_digraph,
    diameter,
    extremal_pair_word,
    index_pair,
    is_strongly_connected,
    pair_certificate,
    pair_digraph_dot,
    pair_distance,
    pair_index,
    scc_count,
    verify_certificate,
)

from conftest import random_permutation


def closed_form_diameter(n: int) -> int:
    """Pair-digraph diameter of the f family for odd n >= 11.

    Quartic-residue split: (n^2 + 5n - 28) / 4 when n % 4 == 3 and
    (n^2 + 5n - 30) / 4 when n % 4 == 1 (valid from n = 13 up).
    """
    if n % 4 == 3:
        return (n * n + 5 * n - 28) // 4
    if n >= 13:
        return (n * n + 5 * n - 30) // 4
    raise ValueError(f"no closed form for n={n}")


class TestPairIndex:
    def test_small_table(self):
        # n = 4 enumerates {0,1},{0,2},{0,3},{1,2},{1,3},{2,3}
        expected = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        for idx, (i, j) in enumerate(expected):
            assert pair_index(4, i, j) == idx
            assert index_pair(4, idx) == (i, j)

    def test_validation(self):
        with pytest.raises(ValueError):
            pair_index(4, 2, 2)
        with pytest.raises(ValueError):
            pair_index(4, 3, 1)
        with pytest.raises(ValueError):
            pair_index(4, 0, 4)

    @given(st.integers(2, 40), st.data())
    def test_round_trip(self, n, data):
        i = data.draw(st.integers(0, n - 2))
        j = data.draw(st.integers(i + 1, n - 1))
        assert index_pair(n, pair_index(n, i, j)) == (i, j)


class TestBuildPairDigraph:
    def test_vertex_and_edge_counts(self):
        d = f(7)
        p = build_pair_digraph(d)
        assert p.n == 7
        assert p.num_vertices == 21
        assert p.letter_names == ("a", "b")
        assert all(len(succ) == 2 for succ in p.succ)

    def test_edges_follow_the_letters(self):
        d = f(7)
        p = build_pair_digraph(d)
        a = d.transformation(0)
        for vtx in range(p.num_vertices):
            i, j = index_pair(7, vtx)
            u, w = sorted((a(i), a(j)))
            assert p.succ[vtx][0] == pair_index(7, u, w)

    def test_permutation_letters_only(self):
        # non-permutation letters are ignored: the cycle family keeps just "a"
        p = build_pair_digraph(cerny(5))
        assert p.letter_names == ("a",)

    def test_rejects_all_merging_alphabet(self):
        d = Dfa(3, (("a", Transformation((0, 0, 1))),))
        with pytest.raises(ValueError):
            build_pair_digraph(d)


class TestPairDistance:
    def test_seven_state_extremal_pair(self):
        p = build_pair_digraph(f(7))
        dist, word = pair_distance(p, (1, 3), (3, 6))
        assert dist == 15 and len(word) == 15
        assert apply_word_to_pair(f(7), (1, 3), word) == (3, 6)

    def test_orderless_endpoints(self):
        p = build_pair_digraph(f(7))
        assert pair_distance(p, (3, 1), (6, 3))[0] == 15

    def test_unreachable_returns_none(self):
        p = build_pair_digraph(cerny(4))
        assert pair_distance(p, (0, 1), (0, 2)) is None

    def test_zero_distance(self):
        p = build_pair_digraph(f(7))
        dist, word = pair_distance(p, (2, 5), (2, 5))
        assert dist == 0 and len(word) == 0


class TestDiameter:
    def test_seven_state_family(self):
        res = diameter(build_pair_digraph(f(7)))
        assert res.strongly_connected
        assert res.value == 15
        assert (res.source, res.target) == ((1, 3), (3, 6))
        assert ((1, 3), (3, 6)) in res.argmax
        assert apply_word_to_pair(f(7), res.source, res.word) == res.target

    @pytest.mark.parametrize("n", (9, 11, 13))
    def test_word_witnesses_the_value(self, n):
        d = f(n)
        res = diameter(build_pair_digraph(d))
        assert len(res.word) == res.value
        assert apply_word_to_pair(d, res.source, res.word) == res.target

    def test_not_strongly_connected(self):
        res = diameter(build_pair_digraph(cerny(4)))
        assert not res.strongly_connected
        assert res.value is None and res.word is None

    def test_single_permutation_cycle(self):
        # one cyclic letter on 3 states: pairs {0,1},{0,2},{1,2} form a 3-cycle
        d = Dfa(3, (("a", Transformation((1, 2, 0))),))
        res = diameter(build_pair_digraph(d))
        assert res.strongly_connected and res.value == 2


class TestSccCount:
    def test_counts(self):
        assert scc_count(3, [(0, 1), (1, 0)]) == 2
        assert scc_count(3, [(0, 1), (1, 2), (2, 0)]) == 1
        assert scc_count(4, []) == 4
        assert scc_count(1, []) == 1

    def test_is_strongly_connected(self):
        assert is_strongly_connected(build_pair_digraph(f(9)))
        assert not is_strongly_connected(build_pair_digraph(cerny(5)))

    @settings(max_examples=40)
    @given(st.data())
    def test_matches_reachability_oracle(self, data):
        seed = data.draw(st.integers(0, 2**32 - 1))
        r = random.Random(seed)
        num = r.randint(1, 8)
        edges = [(r.randrange(num), r.randrange(num)) for _ in range(r.randint(0, 12))]
        # oracle: components from mutual reachability of the transitive closure
        reach = [set([x]) for x in range(num)]
        changed = True
        while changed:
            changed = False
            for u, w in edges:
                new = reach[w] - reach[u]
                if new:
                    reach[u] |= new
                    changed = True
        comps = {frozenset(x for x in range(num) if u in reach[x] and x in reach[u]) for u in range(num)}
        assert scc_count(num, edges) == len(comps)


class TestCertificates:
    def test_seven_state_values(self):
        cert = pair_certificate(7)
        assert cert.bound() == 15
        assert cert.value_of(1, 3) == 15
        assert cert.value_of(3, 1) == 15  # unordered access
        assert cert.value_of(3, 6) == 0
        assert verify_certificate(build_pair_digraph(f(7)), cert).valid

    @pytest.mark.parametrize("n", (11, 15, 19, 23))
    def test_closed_form_certificates_are_valid_and_tight(self, n):
        cert = pair_certificate(n)
        p = build_pair_digraph(f(n))
        assert verify_certificate(p, cert).valid
        dist, _ = pair_distance(p, cert.start, cert.target)
        assert dist == cert.bound() == closed_form_diameter(n)

    def test_unsupported_sizes(self):
        for n in (9, 13, 17, 8):
            with pytest.raises(ValueError):
                pair_certificate(n)

    def test_certified_bound_constrains_bfs(self):
        # soundness: no word from start to target may beat the bound
        n = 11
        cert = pair_certificate(n)
        p = build_pair_digraph(f(n))
        dist, _ = pair_distance(p, cert.start, cert.target)
        assert dist >= cert.bound()

    def test_perturbed_certificate_is_caught(self):
        cert = pair_certificate(7)
        values = list(cert.values)
        values[pair_index(7, 1, 3)] += 5  # inflate the start value
        bad = PairCertificate(n=7, values=tuple(values), start=cert.start, target=cert.target)
        check = verify_certificate(build_pair_digraph(f(7)), bad)
        assert not check.valid
        pair, letter, image = check.counterexample
        assert letter in ("a", "b")
        assert bad.value_of(*image) < bad.value_of(*pair) - 1

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            verify_certificate(build_pair_digraph(f(9)), pair_certificate(7))


class TestExtremalWord:
    @pytest.mark.parametrize("n", (11, 15, 19))
    def test_length_matches_certificate(self, n):
        cert = pair_certificate(n)
        w = extremal_pair_word(n)
        assert len(w) == cert.bound()
        assert apply_word_to_pair(f(n), cert.start, w) == cert.target

    def test_unsupported_sizes(self):
        for n in (7, 9, 13):
            with pytest.raises(ValueError):
                extremal_pair_word(n)


class TestClosedFormDiameters:
    @pytest.mark.parametrize("n,expected", [(11, 37), (13, 51), (15, 68), (17, 86), (19, 107)])
    def test_against_bfs(self, n, expected):
        assert closed_form_diameter(n) == expected
        assert diameter(build_pair_digraph(f(n))).value == expected

    def test_small_cases_fall_outside(self):
        # n = 7 and n = 9 predate the pattern: 15 and 25 measured directly
        assert diameter(build_pair_digraph(f(7))).value == 15
        assert diameter(build_pair_digraph(f(9))).value == 25


class TestDot:
    def test_pair_digraph_dot(self):
        text = pair_digraph_dot(build_pair_digraph(f(7)))
        assert text.startswith("digraph pairs {")
        assert 'label="q2q4"' in text
        assert text.count("->") == 42  # 21 vertices x 2 letters

    def test_values_annotation(self):
        text = pair_digraph_dot(build_pair_digraph(f(7)), pair_certificate(7))
        assert 'label="q2q4\\n15"' in text


@settings(max_examples=50)
@given(st.data())
def test_pair_walks_agree_with_the_automaton(data):
    """Pair-digraph edges mirror the action of the letters on state pairs."""
    seed = data.draw(st.integers(0, 2**32 - 1))
    r = random.Random(seed)
    n = r.randint(2, 8)
    d = Dfa(n, (("a", random_permutation(r, n)), ("b", random_permutation(r, n))))
    p = build_pair_digraph(d)
    w = Word(tuple(r.randrange(2) for _ in range(r.randint(0, 10))))
    i, j = r.randrange(n), r.randrange(n)
    if i == j:
        j = (j + 1) % n
    walked = pair_index(n, *apply_word_to_pair(d, (min(i, j), max(i, j)), w))
    vtx = pair_index(n, min(i, j), max(i, j))
    for letter in w:
        vtx = p.succ[vtx][letter]
    assert vtx == walked
