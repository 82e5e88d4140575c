import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from entropylab import (
    CayleyTableGroup,
    CyclicGroup,
    FiniteSubset,
    FreeGroup,
    GroupError,
    ValidationError,
    ZPowerGroup,
    enumerate_subsets,
    folner,
    inverse_set,
    product_set,
    translate,
)

Z = ZPowerGroup(1)
Z2 = ZPowerGroup(2)
C3 = CyclicGroup(3)
F2 = FreeGroup(2)


def S(group, elems):
    return FiniteSubset.of(group, elems)


class TestArithmetic:
    def test_cyclic_product(self):
        assert C3.op(2, 2) == 1

    def test_z_product(self):
        assert Z.op(3, -5) == -2

    def test_free_cancellation(self):
        a = F2.canonical("a")
        assert F2.op(a, F2.inverse(a)) == ()

    def test_free_word_parsing(self):
        assert F2.canonical("aB") == (1, -2)
        assert F2.canonical("e") == ()
        assert F2.canonical("aA") == ()
        assert F2.encode((1, -2)) == "aB"

    def test_free_word_length_cap(self):
        tight = FreeGroup(1, max_word_len=3)
        w = tight.canonical("aaa")
        with pytest.raises(GroupError):
            tight.op(w, tight.canonical("a"))

    def test_cayley_table_validation(self):
        # Z/2 as an explicit table
        g = CayleyTableGroup(((0, 1), (1, 0)))
        assert g.identity() == 0 and g.op(1, 1) == 0 and g.inverse(1) == 1
        with pytest.raises(ValidationError):
            CayleyTableGroup(((0, 1), (0, 1)))  # no inverse for 1
        with pytest.raises(ValidationError):
            CayleyTableGroup(((1, 0), (0, 1)))  # no identity

    def test_mixed_group_subsets_rejected(self):
        with pytest.raises(GroupError):
            product_set(S(Z, [0, 1]), S(C3, [0, 1]))
        with pytest.raises(GroupError):
            S(Z, [0]).union(S(Z2, [(0, 0)]))

    def test_malformed_elements_rejected(self):
        with pytest.raises(GroupError):
            C3.canonical(3)
        with pytest.raises(GroupError):
            Z2.canonical(5)
        with pytest.raises(GroupError):
            F2.canonical("c")


class TestSubsetOps:
    def test_translate_z(self):
        assert translate(S(Z, [0, 1]), 2).elements == (2, 3)

    def test_translate_cyclic_wraps(self):
        assert translate(S(C3, [0, 1]), 2).elements == (0, 2)

    def test_translate_free(self):
        got = translate(S(F2, ["e", "a"]), F2.canonical("b"))
        assert got.elements == (F2.canonical("b"), F2.canonical("ab"))

    def test_product_identity_factor(self):
        E = S(F2, ["e", "a", "b"])
        assert product_set(E, S(F2, ["e"])) == E

    def test_product_free_expansion(self):
        # |EF| = 5 for E = {e,a,b}, F = {e,a}: ratio 5/2 stays above 2
        E, F = S(F2, ["e", "a", "b"]), S(F2, ["e", "a"])
        EF = product_set(E, F)
        assert set(EF.encode()) == {"e", "a", "aa", "b", "ba"}
        assert len(EF) / len(F) >= 2

    def test_product_interval_sum(self):
        assert product_set(S(Z, [0, 1]), S(Z, [0, 1])).elements == (0, 1, 2)

    def test_inverse_examples(self):
        assert inverse_set(S(Z, [0, 1, 3])).elements == (-3, -1, 0)
        assert inverse_set(S(C3, [1, 2])) == S(C3, [1, 2])
        assert inverse_set(S(F2, ["a", "b"])) == S(F2, ["A", "B"])

    def test_folner_boxes_and_finite(self):
        assert folner(Z, 3).elements == (0, 1, 2)
        assert folner(C3, 1).elements == (0, 1, 2)
        assert folner(C3, 7).elements == (0, 1, 2)
        assert folner(Z2, 2).elements == ((0, 0), (0, 1), (1, 0), (1, 1))

    def test_folner_rejected_for_free(self):
        with pytest.raises(GroupError):
            folner(F2, 2)

    def test_enumerate_subsets_order_and_count(self):
        window = S(Z, [0, 1])
        got = [f.elements for f in enumerate_subsets(window, 2)]
        assert got == [(0,), (1,), (0, 1)]
        window4 = S(Z, range(4))
        assert len(list(enumerate_subsets(window4, 4))) == 15
        singles = [f.elements for f in enumerate_subsets(S(Z, [0, 1, 2]), 1)]
        assert singles == [(0,), (1,), (2,)]

    def test_enumerate_subsets_bad_max_size(self):
        with pytest.raises(ValidationError):
            list(enumerate_subsets(S(Z, [0, 1]), 3))


class TestInvariants:
    @given(st.lists(st.integers(-20, 20), min_size=1, max_size=6),
           st.integers(-10, 10))
    def test_translate_is_bijective(self, elems, g):
        F = S(Z, elems)
        assert len(translate(F, g)) == len(F)

    @given(st.lists(st.integers(-5, 5), min_size=1, max_size=3),
           st.lists(st.integers(-5, 5), min_size=1, max_size=3),
           st.lists(st.integers(-5, 5), min_size=1, max_size=3))
    def test_product_associative(self, a, b, c):
        A, B, C = S(Z, a), S(Z, b), S(Z, c)
        assert product_set(product_set(A, B), C) == product_set(A, product_set(B, C))

    @given(st.lists(st.integers(-20, 20), min_size=1, max_size=6))
    def test_inverse_involution(self, elems):
        F = S(Z, elems)
        assert inverse_set(inverse_set(F)) == F

    word = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=8)

    @given(word, word)
    def test_free_reduction_cancels(self, g, h):
        gg, hh = F2.canonical(g), F2.canonical(h)
        assert F2.op(F2.op(gg, hh), F2.inverse(hh)) == gg

    def test_free_ball_sizes(self):
        assert len(F2.ball(0)) == 1
        assert len(F2.ball(1)) == 5
        assert len(F2.ball(2)) == 17
        assert len(F2.ball(3)) == 53

    def test_folner_ratio_profile(self):
        # |Fn symmdiff F^-1 Fn| / |Fn| decreases to 0 for F = {0,1} in Z
        F = S(Z, [0, 1])
        ratios = []
        for n in (2, 4, 8, 16, 32):
            Fn = folner(Z, n)
            moved = product_set(inverse_set(F), Fn)
            sym = (set(Fn) | set(moved)) - (set(Fn) & set(moved))
            ratios.append(len(sym) / len(Fn))
        assert all(a >= b - 1e-12 for a, b in zip(ratios, ratios[1:]))
        assert ratios[-1] < 0.5
