"""Smith normal form and twist-character enumeration."""

import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from quadwalks import corpus
from quadwalks.lattice import character_twists, coset_order, smith_normal_form


def _matmul(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def _det(m):
    if len(m) == 1:
        return m[0][0]
    total = 0
    for j in range(len(m)):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _det(minor)
    return total


matrices = st.lists(
    st.lists(st.integers(-9, 9), min_size=2, max_size=3),
    min_size=2,
    max_size=3,
).filter(lambda rows: len({len(r) for r in rows}) == 1)


class TestSNF:
    @given(matrices)
    @settings(max_examples=80, deadline=None)
    def test_decomposition(self, mat):
        d, u, v = smith_normal_form(mat)
        assert _matmul(_matmul(u, mat), v) == d
        assert abs(_det(u)) == 1
        assert abs(_det(v)) == 1
        # diagonal with divisibility
        for i in range(len(d)):
            for j in range(len(d[0])):
                if i != j:
                    assert d[i][j] == 0
        diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
        for a, b in zip(diag, diag[1:]):
            if a and b:
                assert b % a == 0
            if a == 0:
                assert b == 0


class TestTwists:
    def test_counts(self, simple, gb, tandem, diagonal):
        assert len(character_twists(simple.offsets)) == 2
        assert len(character_twists(gb.offsets)) == 2
        assert len(character_twists(tandem.offsets)) == 3
        assert len(character_twists(diagonal.offsets)) == 4

    def test_twist_congruence(self):
        for model in corpus.orbit_summable_models():
            for alphas, zeta in character_twists(model.offsets):
                for s in model.offsets:
                    prod = Fraction(0)
                    for a, o in zip(alphas, s):
                        prod += a.exponent * o
                    assert (prod - zeta.exponent) % 1 == 0

    def test_periods(self, simple, tandem, diagonal):
        assert coset_order(simple.offsets) == 2
        assert coset_order(tandem.offsets) == 3
        assert coset_order(diagonal.offsets) == 2

    def test_zeta_orders_divide_index(self):
        for model in corpus.orbit_summable_models():
            twists = character_twists(model.offsets)
            for alphas, zeta in twists:
                assert len(twists) % zeta.order == 0
                for a in alphas:
                    assert len(twists) % a.order == 0
