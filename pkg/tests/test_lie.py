from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toda_blowup import _exact as ex
from toda_blowup.lie import (CartanData, Coweight, GammaVector, LieType, LieTypeError, Weight,
                             cartan_matrix, pair, w0_from_gammas, weight_to_root_coords)

from oracles import N_POSITIVE, closure_roots

ALL_SMALL = ["A1", "A2", "A3", "A4", "A5", "A6", "B2", "B3", "B4", "B5", "B6", "C2", "C3",
             "C4", "C5", "C6", "D4", "D5", "D6", "E6", "F4", "G2"]

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


def test_cartan_conventions():
    assert cartan_matrix("A2") == [[2, -1], [-1, 2]]
    assert cartan_matrix("B2") == [[2, -2], [-1, 2]]
    assert cartan_matrix("C2") == [[2, -1], [-2, 2]]
    assert cartan_matrix("G2") == [[2, -1], [-3, 2]]
    f4 = cartan_matrix("F4")
    assert f4[1][2] == -2 and f4[2][1] == -1
    e6 = cartan_matrix("E6")
    # 2 hangs off 4, the chain is 1-3-4-5-6
    assert e6[1][3] == -1 and e6[0][2] == -1 and e6[0][1] == 0


@pytest.mark.parametrize("bad", ["A0", "B1", "C1", "D3", "E5", "E9", "F3", "G3", "X2", "A-1", ""])
def test_inadmissible_types(bad):
    with pytest.raises(LieTypeError):
        LieType.parse(bad)


@pytest.mark.parametrize("t", ALL_SMALL)
def test_inverse_and_root_count(t):
    c = CartanData.of(t)
    prod = ex.matmul([list(r) for r in c.A], [list(r) for r in c.A_inv])
    assert prod == ex.identity(c.rank)
    assert len(c.positive_roots) == (c.type.dimension - c.rank) // 2


@pytest.mark.parametrize("t", ["A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"])
def test_roots_match_closure_oracle(t):
    c = CartanData.of(t)
    assert set(c.positive_roots) == closure_roots(c.A)
    assert len(c.positive_roots) == N_POSITIVE[t]


def test_root_examples():
    assert set(CartanData.of("A2").positive_roots) == {(1, 0), (0, 1), (1, 1)}
    assert (3, 2) in CartanData.of("G2").positive_roots


def test_pair_basics(a2):
    for i in (1, 2):
        for j in (1, 2):
            assert pair(a2.simple_root(i), a2.dual_basis_E(j)) == int(i == j)
            assert pair(a2.fundamental_weight(i), a2.coroot(j)) == int(i == j)
    s = a2.simple_root(1) + a2.simple_root(2)
    assert pair(s, a2.dual_basis_E(1) + a2.dual_basis_E(2)) == 2


def test_pair_rank_mismatch(a2):
    with pytest.raises(ValueError):
        pair(Weight((1, 0, 0)), Coweight((1, 0)))


@settings(max_examples=200, deadline=None)
@given(a=rationals, b=st.lists(rationals, min_size=3, max_size=3),
       b2=st.lists(rationals, min_size=3, max_size=3), h=st.lists(rationals, min_size=3, max_size=3))
def test_pair_bilinear(a, b, b2, h):
    H = Coweight(tuple(h))
    lhs = pair(Weight(tuple(a * x + y for x, y in zip(b, b2))), H)
    assert lhs == a * pair(Weight(tuple(b)), H) + pair(Weight(tuple(b2)), H)


@settings(max_examples=1000, deadline=None)
@given(t=st.sampled_from(["A3", "B3", "C3", "G2", "D4"]), data=st.data())
def test_root_coords_roundtrip(t, data):
    c = CartanData.of(t)
    b = data.draw(st.lists(rationals, min_size=c.rank, max_size=c.rank))
    m = weight_to_root_coords(c, Weight(tuple(b)))
    assert c.root_weight(m).coords == tuple(b)


def test_root_coord_examples(a2):
    assert weight_to_root_coords(a2, a2.simple_root(1)) == (1, 0)
    assert weight_to_root_coords(a2, Weight((1, 1))) == (1, 1)
    assert weight_to_root_coords(a2, Weight((1, 0))) == (Fraction(2, 3), Fraction(1, 3))


def test_w0_examples(a2):
    a1 = CartanData.of("A1")
    assert pair(a1.simple_root(1), w0_from_gammas(a1, [0])) == 1
    w0 = w0_from_gammas(a2, [0, 0])
    assert [pair(a2.simple_root(i), w0) for i in (1, 2)] == [1, 1]
    w0 = w0_from_gammas(a2, [Fraction(1, 2), Fraction(-1, 4)])
    assert [pair(a2.simple_root(i), w0) for i in (1, 2)] == [Fraction(3, 2), Fraction(3, 4)]


@settings(max_examples=100, deadline=None)
@given(t=st.sampled_from(["A3", "B2", "C3", "G2"]), data=st.data())
def test_w0_reproduces_mu(t, data):
    c = CartanData.of(t)
    g = data.draw(st.lists(st.fractions(min_value=Fraction(-49, 50), max_value=4, max_denominator=50),
                           min_size=c.rank, max_size=c.rank))
    w0 = w0_from_gammas(c, g)
    assert [pair(c.simple_root(i), w0) for i in range(1, c.rank + 1)] == [x + 1 for x in g]
    # real gammas: relative error only
    gf = [float(x) for x in g]
    w0f = w0_from_gammas(c, gf)
    for i in range(1, c.rank + 1):
        got = pair(c.simple_root(i), w0f)
        assert abs(got - (gf[i - 1] + 1)) <= 1e-14 * max(1.0, abs(gf[i - 1] + 1))


@pytest.mark.parametrize("g", [-1, Fraction(-3, 2), -1.0])
def test_gamma_rejects_le_minus_one(g):
    with pytest.raises(ValueError):
        GammaVector((0, g))


def test_cartan_json(a2):
    doc = a2.to_json()
    assert doc == {"family": "A", "rank": 2, "cartan": [[2, -1], [-1, 2]],
                   "inverse_cartan": [["2/3", "1/3"], ["1/3", "2/3"]],
                   "positive_roots": [[1, 0], [0, 1], [1, 1]]}
