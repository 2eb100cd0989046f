import json
from fractions import Fraction

import pytest

from toda_blowup import _exact as ex
from toda_blowup.lie import CartanData, Coweight, Weight
from toda_blowup.rep import (DimensionCapExceeded, FundamentalRep, build_fundamental, coweight_matrix,
                             fundamental, weyl_dim)

from conftest import SUITE_TYPES, group_of
from oracles import FUND_DIMS, a_n_fund_dim


def _sub(a, b):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def _comm(a, b):
    return _sub(ex.matmul(a, b), ex.matmul(b, a))


def _scale(c, a):
    return [[c * x for x in r] for r in a]


def reps_of(t):
    c = CartanData.of(t)
    return [fundamental(c, i) for i in range(1, c.rank + 1)]


@pytest.mark.parametrize("t", list(FUND_DIMS))
def test_dimensions(t):
    c = CartanData.of(t)
    dims = [weyl_dim(c, c.fundamental_weight(i)) for i in range(1, c.rank + 1)]
    assert dims == FUND_DIMS[t]
    if t in ("A1", "A2", "A3", "B2", "C3", "G2"):
        assert [r.dim for r in reps_of(t)] == dims


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_weyl_dim_type_a(n):
    c = CartanData.of(f"A{n}")
    for i in range(1, n + 1):
        assert weyl_dim(c, c.fundamental_weight(i)) == a_n_fund_dim(n, i)


def test_weyl_dim_examples():
    g2 = CartanData.of("G2")
    assert weyl_dim(g2, Weight((0, 0))) == 1
    assert weyl_dim(g2, g2.fundamental_weight(2)) == 14
    with pytest.raises(ValueError):
        weyl_dim(g2, Weight((-1, 0)))


@pytest.mark.parametrize("t", SUITE_TYPES)
def test_representation_invariants(t):
    c = CartanData.of(t)
    n = c.rank
    for rep in reps_of(t):
        Hm = rep.Hm
        zero = ex.zeros(rep.dim, rep.dim)
        for j in range(n):
            for k in range(n):
                target = Hm[j] if j == k else zero
                assert _comm(rep.E[j], rep.F[k]) == target
                assert _comm(Hm[j], rep.F[k]) == _scale(-c.A[k][j], rep.F[k])
                assert _comm(Hm[j], rep.E[k]) == _scale(c.A[k][j], rep.E[k])
            # E_j kills the highest weight vector
            assert all(rep.E[j][r][0] == 0 for r in range(rep.dim))
            # F_j lowers weights by alpha_j
            for r in range(rep.dim):
                for col in range(rep.dim):
                    if rep.F[j][r][col] != 0:
                        want = tuple(x - y for x, y in zip(rep.weights[col], c.A[j]))
                        assert rep.weights[r] == want
        # adjointness on basis vectors
        basis = [[Fraction(int(a == b)) for a in range(rep.dim)] for b in range(rep.dim)]
        for j in range(n):
            for u in basis:
                fu = ex.matvec(rep.F[j], u)
                for v in basis:
                    assert rep.form(fu, v) == rep.form(u, ex.matvec(rep.E[j], v))
        for w in rep.blocks:
            g = rep.gram[w]
            assert g == ex.transpose(g)
            assert all(m > 0 for m in ex.leading_minors(g))
        # multiplicities are Weyl invariant
        for tau in group_of(t):
            for w in rep.blocks:
                assert rep.multiplicity(tau(Weight(w)).coords) == rep.multiplicity(w)


def test_a1_and_a2_examples():
    a1 = fundamental(CartanData.of("A1"), 1)
    assert a1.dim == 2 and set(a1.blocks) == {(1,), (-1,)}
    a2 = fundamental(CartanData.of("A2"), 1)
    f1 = [[int(r == 1 and c == 0) for c in range(3)] for r in range(3)]
    assert a2.F[0] == f1


def test_coweight_matrix(a2):
    rep = fundamental(a2, 1)
    z = coweight_matrix(rep, Coweight((0, 0)))
    assert all(x == 0 for r in z for x in r)
    m = coweight_matrix(rep, Coweight((1, 3)))
    assert [m[i][i] for i in range(3)] == [1, 2, -3]
    H = Coweight((Fraction(2, 7), Fraction(-5, 3)))
    m = coweight_matrix(rep, H)
    trace = sum(m[i][i] for i in range(3))
    direct = sum(len(idx) * sum(x * y for x, y in zip(w, H.coords)) for w, idx in rep.blocks.items())
    assert trace == direct
    for hj in rep.Hm:
        assert ex.matmul(m, hj) == ex.matmul(hj, m)


def test_dimension_cap():
    with pytest.raises(DimensionCapExceeded):
        build_fundamental(CartanData.of("G2"), 2, max_dim=10)
    with pytest.raises(IndexError):
        build_fundamental(CartanData.of("G2"), 3)


def test_disk_cache_roundtrip(tmp_path):
    c = CartanData.of("B2")
    rep = build_fundamental(c, 2)
    doc = rep.to_json()
    again = FundamentalRep.from_json(json.loads(json.dumps(doc)))
    assert again.E == rep.E and again.F == rep.F and again.gram == rep.gram
    assert again.weights == rep.weights
    doc["schema_version"] = -1
    with pytest.raises(ValueError):
        FundamentalRep.from_json(doc)


def test_cache_dir_written(tmp_path, monkeypatch):
    from toda_blowup import rep as repmod
    monkeypatch.setattr(repmod, "_memory_cache", {})
    c = CartanData.of("C3")
    r1 = fundamental(c, 2, cache_dir=tmp_path)
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["rep_C3_2.json"]
    monkeypatch.setattr(repmod, "_memory_cache", {})
    r2 = fundamental(c, 2, cache_dir=tmp_path)
    assert r2.F == r1.F and r2.gram == r1.gram
