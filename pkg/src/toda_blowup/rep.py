"""Fundamental representations with exact Chevalley matrices and Gram blocks.

The module V_i is built as the quotient of the Verma module by the radical
of its contravariant form. Level by level we apply the lowering operators
F_j to the current basis, compute the form on the candidates through the
recursion {F_j u, w} = {u, E_j w} with {|i>, |i>} = 1, keep a maximal
subset with nonsingular Gram matrix (earliest candidates first), and express
the remaining candidates in that subset. Nothing is ever orthonormalized,
so all data stay rational.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import _exact as ex
from .lie import CartanData, Coweight, LieType, Weight, pair

DEFAULT_MAX_DIM = 64
CACHE_SCHEMA_VERSION = 1
CACHE_ENV = "TODA_BLOWUP_CACHE"


class RepresentationError(RuntimeError):
    """Construction produced a non-positive Gram block."""


class DimensionCapExceeded(ValueError):
    pass


def weyl_dim(cartan: CartanData, highest_weight: Weight) -> int:
    """Dimension of the irreducible module via the Weyl product formula.

    Uses the invariant form (omega_i, alpha_j) = d_j delta_ij built from the
    symmetrizer of the Cartan matrix; the product does not depend on its
    normalization.
    """
    lam = highest_weight.coords
    if len(lam) != cartan.rank:
        raise ValueError("rank mismatch")
    if any(Fraction(c).denominator != 1 or c < 0 for c in lam):
        raise ValueError("highest weight must be dominant integral")
    d = cartan.symmetrizer
    num = Fraction(1)
    den = Fraction(1)
    for root in cartan.positive_roots:
        num *= sum((m * (l + 1) * dj for m, l, dj in zip(root, lam, d)), Fraction(0))
        den *= sum((m * dj for m, dj in zip(root, d)), Fraction(0))
    val = num / den
    assert val.denominator == 1
    return int(val)


def weight_key(coords) -> str:
    return ",".join(ex.fmt(c) for c in coords)


@dataclass(eq=False)
class FundamentalRep:
    cartan: CartanData
    index: int
    weights: list            # weight (tuple of Fractions) of each basis vector
    words: list              # lowering word that produced each basis vector
    E: list                  # E[j-1] is the matrix of e_{alpha_j}
    F: list                  # F[j-1] is the matrix of e_{-alpha_j}
    gram: dict               # weight tuple -> Gram block on that weight space
    blocks: dict = field(init=False)

    def __post_init__(self):
        self.blocks = {}
        for k, w in enumerate(self.weights):
            self.blocks.setdefault(w, []).append(k)

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def rank(self) -> int:
        return self.cartan.rank

    @property
    def highest(self) -> list:
        v = [Fraction(0)] * self.dim
        v[0] = Fraction(1)
        return v

    @property
    def Hm(self) -> list:
        """h_{alpha_j} acts on a weight vector by its j-th omega-coordinate."""
        return [[[w[j] if r == c else Fraction(0) for c, w in enumerate(self.weights)]
                 for r in range(self.dim)] for j in range(self.rank)]

    def weight_list(self) -> list:
        """Distinct weights in construction order (by depth below omega_i)."""
        return list(self.blocks)

    def multiplicity(self, w) -> int:
        return len(self.blocks.get(tuple(w), ()))

    def gram_matrix(self) -> list:
        """Full Gram matrix of the form, block diagonal by weight."""
        g = ex.zeros(self.dim, self.dim)
        for w, idx in self.blocks.items():
            blk = self.gram[w]
            for a, ra in enumerate(idx):
                for b, rb in enumerate(idx):
                    g[ra][rb] = blk[a][b]
        return g

    def form(self, u, v):
        """Contravariant form {u, v} on real (or rational) coordinate vectors."""
        total = Fraction(0)
        for w, idx in self.blocks.items():
            blk = self.gram[w]
            for a, ra in enumerate(idx):
                if u[ra] == 0:
                    continue
                for b, rb in enumerate(idx):
                    total += u[ra] * blk[a][b] * v[rb]
        return total

    def block_vector(self, v, w) -> list:
        return [v[k] for k in self.blocks[tuple(w)]]

    def to_json(self) -> dict:
        def mat(m):
            return [[ex.fmt(x) for x in row] for row in m]

        return {
            "schema_version": CACHE_SCHEMA_VERSION,
            "type": str(self.cartan.type),
            "index": self.index,
            "dim": self.dim,
            "weights": [{"beta_omega_coords": [ex.fmt(c) for c in w], "mult": len(idx)}
                        for w, idx in self.blocks.items()],
            "basis": [{"beta_omega_coords": [ex.fmt(c) for c in w], "word": list(word)}
                      for w, word in zip(self.weights, self.words)],
            "E": [mat(m) for m in self.E],
            "F": [mat(m) for m in self.F],
            "H": [mat(m) for m in self.Hm],
            "gram": {weight_key(w): mat(self.gram[w]) for w in self.blocks},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "FundamentalRep":
        if doc.get("schema_version") != CACHE_SCHEMA_VERSION:
            raise ValueError("stale representation cache entry")
        cartan = CartanData.of(LieType.parse(doc["type"]))

        def mat(m):
            return [[Fraction(x) for x in row] for row in m]

        weights = [tuple(Fraction(c) for c in b["beta_omega_coords"]) for b in doc["basis"]]
        words = [tuple(b["word"]) for b in doc["basis"]]
        gram = {}
        for w in dict.fromkeys(weights):
            gram[w] = mat(doc["gram"][weight_key(w)])
        return cls(cartan, doc["index"], weights, words,
                   [mat(m) for m in doc["E"]], [mat(m) for m in doc["F"]], gram)


def build_fundamental(cartan: CartanData, i: int, max_dim: int = DEFAULT_MAX_DIM) -> FundamentalRep:
    """Construct V_i with exact matrices for e_j, f_j and its Gram blocks."""
    n = cartan.rank
    if not 1 <= i <= n:
        raise IndexError(f"fundamental index {i} out of range 1..{n}")
    predicted = weyl_dim(cartan, cartan.fundamental_weight(i))
    if predicted > max_dim:
        raise DimensionCapExceeded(
            f"V_{i} of {cartan.type} has dimension {predicted} > cap {max_dim}")

    alpha = [cartan.A[j] for j in range(n)]
    weights = [cartan.fundamental_weight(i).coords]
    words = [()]
    # e_cols[k][c]: dict basis-index -> coefficient of E_k applied to basis vector c
    e_cols = [[{}] for _ in range(n)]
    # f_cols[j][c]: same for F_j, filled in once the next level is known
    f_cols = [[] for _ in range(n)]
    gram = {weights[0]: [[Fraction(1)]]}
    level = [0]

    def form_on(w, x, y):
        """{x, y} for sparse vectors x, y supported on weight space w."""
        idx = block_index[w]
        blk = gram[w]
        return sum((cx * blk[idx[a]][idx[b]] * cy
                    for a, cx in x.items() for b, cy in y.items()), Fraction(0))

    block_index = {weights[0]: {0: 0}}

    while level:
        cands = []  # (weight, j, b)
        for b in level:
            for j in range(n):
                w = tuple(x - y for x, y in zip(weights[b], alpha[j]))
                cands.append((w, j, b))

        # E_k on each candidate F_j b, in existing-basis coordinates
        cand_e = []
        for (w, j, b) in cands:
            per_k = []
            for k in range(n):
                out = {}
                for d, coef in e_cols[k][b].items():
                    for t, c2 in f_cols[j][d].items():
                        out[t] = out.get(t, 0) + coef * c2
                if k == j:
                    out[b] = out.get(b, 0) + weights[b][k]
                per_k.append({t: c for t, c in out.items() if c != 0})
            cand_e.append(per_k)

        by_weight = {}
        for ci, (w, j, b) in enumerate(cands):
            by_weight.setdefault(w, []).append(ci)

        new_level = []
        cand_coords = {}
        for w, members in by_weight.items():
            m = len(members)
            g = ex.zeros(m, m)
            for p in range(m):
                _, jp, bp = cands[members[p]]
                for q in range(p, m):
                    # {F_jp b_p, c_q} = {b_p, E_jp c_q}
                    val = form_on(weights[bp], {bp: Fraction(1)}, cand_e[members[q]][jp])
                    g[p][q] = g[q][p] = val
            chosen = ex.greedy_independent(g)
            if not chosen:
                for ci in members:
                    cand_coords[ci] = {}
                continue
            g_ss = [[g[p][q] for q in chosen] for p in chosen]
            minors = ex.leading_minors(g_ss)
            if any(x <= 0 for x in minors):
                raise RepresentationError(
                    f"Gram block at weight {weight_key(w)} of V_{i} is not positive definite")
            start = len(weights)
            gram[w] = g_ss
            block_index[w] = {start + a: a for a in range(len(chosen))}
            for a, p in enumerate(chosen):
                ci = members[p]
                _, j, b = cands[ci]
                weights.append(w)
                words.append(words[b] + (j + 1,))
                for k in range(n):
                    e_cols[k].append(cand_e[ci][k])
                new_level.append(start + a)
            chosen_set = set(chosen)
            for p in range(m):
                ci = members[p]
                if p in chosen_set:
                    cand_coords[ci] = {start + chosen.index(p): Fraction(1)}
                else:
                    rhs = [g[s][p] for s in chosen]
                    x = ex.solve(g_ss, rhs)
                    cand_coords[ci] = {start + a: c for a, c in enumerate(x) if c != 0}

        for ci, (w, j, b) in enumerate(cands):
            lst = f_cols[j]
            while len(lst) <= b:
                lst.append({})
            lst[b] = cand_coords[ci]
        for j in range(n):
            while len(f_cols[j]) < len(weights):
                f_cols[j].append({})
        level = new_level
        if len(weights) > max_dim:
            raise DimensionCapExceeded(f"V_{i} construction exceeded {max_dim} vectors")

    dim = len(weights)
    if dim != predicted:
        raise RepresentationError(f"built dimension {dim} != Weyl dimension {predicted}")

    def dense(cols):
        m = ex.zeros(dim, dim)
        for c, col in enumerate(cols):
            for r, v in col.items():
                m[r][c] = Fraction(v)
        return m

    return FundamentalRep(cartan, i, weights, words,
                          [dense(e_cols[k]) for k in range(n)],
                          [dense(f_cols[j]) for j in range(n)], gram)


def coweight_matrix(rep: FundamentalRep, h: Coweight) -> list:
    """Diagonal matrix acting on each weight space by <beta, H>."""
    if h.rank != rep.rank:
        raise ValueError("rank mismatch")
    diag = [pair(Weight(w), h) for w in rep.weights]
    zero = Fraction(0) if h.exact else 0.0
    return [[diag[r] if r == c else zero for c in range(rep.dim)] for r in range(rep.dim)]


def _cache_path(cache_dir, cartan, i):
    return Path(cache_dir) / f"rep_{cartan.type}_{i}.json"


_memory_cache: dict = {}


def fundamental(cartan: CartanData, i: int, cache_dir=None,
                max_dim: int = DEFAULT_MAX_DIM) -> FundamentalRep:
    """build_fundamental with in-process memoization and an optional disk cache.

    ``cache_dir`` falls back to the TODA_BLOWUP_CACHE environment variable.
    """
    key = (cartan.type, i)
    if key in _memory_cache:
        return _memory_cache[key]
    cache_dir = cache_dir or os.environ.get(CACHE_ENV)
    rep = None
    if cache_dir:
        path = _cache_path(cache_dir, cartan, i)
        if path.exists():
            try:
                rep = FundamentalRep.from_json(json.loads(path.read_text()))
            except (ValueError, KeyError):
                rep = None
    if rep is None:
        rep = build_fundamental(cartan, i, max_dim=max_dim)
        if cache_dir:
            path = _cache_path(cache_dir, cartan, i)
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(rep.to_json(), sort_keys=True))
            tmp.replace(path)
    _memory_cache[key] = rep
    return rep
