"""Cartan data for finite-type simple Lie algebras, in exact arithmetic.

Conventions
-----------
Simple roots are ordered as in Bourbaki. The Cartan matrix entry is
``a_ij = alpha_i(h_{alpha_j}) = 2 (alpha_i, alpha_j) / (alpha_j, alpha_j)``,
so row ``i`` of ``A`` holds the fundamental-weight coordinates of
``alpha_i``. Per type:

* ``B_n``: ``alpha_n`` short, ``a_{n-1,n} = -2``.
* ``C_n``: ``alpha_n`` long, ``a_{n,n-1} = -2``.
* ``D_n``: ``alpha_{n-2}`` is the branch node.
* ``E_n``: chain 1-3-4-5-6(-7-8) with 2 attached to 4.
* ``F_4``: ``alpha_1, alpha_2`` long, ``a_23 = -2``.
* ``G_2``: ``alpha_1`` short, ``a_12 = -1`` and ``a_21 = -3``.

Weights are stored in the fundamental-weight basis and coweights (elements
of the real Cartan subalgebra) in the coroot basis ``{h_{alpha_j}}``, so the
pairing of a weight with a coweight is a plain dot product.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import _exact as ex

_ADMISSIBLE = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}

# dim g, used only as a cross-check on the root count
_DIMENSION = {
    "A": lambda n: n * (n + 2),
    "B": lambda n: n * (2 * n + 1),
    "C": lambda n: n * (2 * n + 1),
    "D": lambda n: n * (2 * n - 1),
    "E": lambda n: {6: 78, 7: 133, 8: 248}[n],
    "F": lambda n: 52,
    "G": lambda n: 14,
}


class LieTypeError(ValueError):
    """Raised for an inadmissible (family, rank) pair."""


@dataclass(frozen=True, order=True)
class LieType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _ADMISSIBLE or not isinstance(self.rank, int):
            raise LieTypeError(f"unknown Lie type {self.family}{self.rank}")
        if not _ADMISSIBLE[self.family](self.rank):
            raise LieTypeError(
                f"{self.family}{self.rank} is not an admissible simple type "
                "(A n>=1, B n>=2, C n>=2, D n>=4, E 6-8, F4, G2)")

    @classmethod
    def parse(cls, s: str) -> "LieType":
        m = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)\s*", s)
        if not m:
            raise LieTypeError(f"cannot parse Lie type {s!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    @property
    def dimension(self) -> int:
        return _DIMENSION[self.family](self.rank)

    def __str__(self):
        return f"{self.family}{self.rank}"


def _bond(a, i, j, aij=-1, aji=-1):
    a[i][j] = aij
    a[j][i] = aji


def cartan_matrix(t: LieType | str) -> list[list[int]]:
    """Integer Cartan matrix of a simple type (Bourbaki ordering)."""
    if isinstance(t, str):
        t = LieType.parse(t)
    n = t.rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    f = t.family
    if f in "ABC":
        for i in range(n - 1):
            _bond(a, i, i + 1)
        if f == "B":
            a[n - 2][n - 1] = -2
        elif f == "C":
            a[n - 1][n - 2] = -2
    elif f == "D":
        for i in range(n - 2):
            _bond(a, i, i + 1)
        _bond(a, n - 3, n - 1)
    elif f == "E":
        _bond(a, 0, 2)
        _bond(a, 1, 3)
        for i in range(2, n - 1):
            _bond(a, i, i + 1)
    elif f == "F":
        _bond(a, 0, 1)
        _bond(a, 1, 2, -2, -1)
        _bond(a, 2, 3)
    elif f == "G":
        _bond(a, 0, 1, -1, -3)
    return a


def _symmetrizer(a):
    """Positive rationals d with ``a_ij d_j = a_ji d_i`` (d_j ~ |alpha_j|^2/2)."""
    n = len(a)
    d = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if a[i][j] != 0 and d[j] is None:
                d[j] = Fraction(a[j][i]) * d[i] / a[i][j]
                stack.append(j)
    if any(x is None for x in d):
        raise LieTypeError("Cartan matrix is decomposable")
    # normalize so the shortest root has d = 1
    lo = min(d)
    return [x / lo for x in d]


def _reflect_root(a, m, i):
    """s_i applied to a root given by simple-root coordinates m."""
    pairing = sum(m[j] * a[j][i] for j in range(len(m)))
    out = list(m)
    out[i] -= pairing
    return tuple(out)


def positive_roots(cartan) -> list[tuple[int, ...]]:
    """Positive roots in simple-root coordinates, by reflection closure.

    Accepts a CartanData or a raw integer Cartan matrix. Roots are sorted by
    height, then lexicographically, which puts the simple roots first.
    """
    a = cartan.A if isinstance(cartan, CartanData) else cartan
    n = len(a)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    frontier = list(simple)
    # |Delta| <= 240 for every finite type
    limit = 1000
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(n):
                r = _reflect_root(a, m, i)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
        if len(seen) > limit:
            raise RuntimeError("root closure did not terminate")
    pos = [r for r in seen if all(c >= 0 for c in r)]
    if len(pos) * 2 != len(seen):
        raise RuntimeError("root closure produced mixed-sign roots")
    return sorted(pos, key=lambda r: (sum(r), tuple(-c for c in r)))


@dataclass(frozen=True)
class Weight:
    """Element of the weight space, in fundamental-weight coordinates."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(ex.as_fraction(c) for c in self.coords))

    @property
    def rank(self):
        return len(self.coords)

    def __add__(self, other):
        return Weight(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return Weight(tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self):
        return Weight(tuple(-x for x in self.coords))

    def __rmul__(self, c):
        return Weight(tuple(c * x for x in self.coords))

    def is_dominant(self):
        return all(c >= 0 for c in self.coords)


@dataclass(frozen=True)
class Coweight:
    """Element of the real Cartan subalgebra, in the basis {h_{alpha_j}}.

    Coordinates are exact when possible and floats otherwise (chamber
    points built from real coefficients).
    """

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(ex.as_fraction(c) for c in self.coords))

    @property
    def rank(self):
        return len(self.coords)

    @property
    def exact(self):
        return all(ex.is_exact(c) for c in self.coords)

    def __add__(self, other):
        return Coweight(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __rmul__(self, c):
        return Coweight(tuple(c * x for x in self.coords))


def pair(beta: Weight, h: Coweight):
    """The pairing <beta, H>; exact when both sides are exact."""
    if beta.rank != h.rank:
        raise ValueError(f"rank mismatch: weight of rank {beta.rank}, coweight of rank {h.rank}")
    if h.exact:
        return sum((x * y for x, y in zip(beta.coords, h.coords)), Fraction(0))
    return math.fsum(float(x) * float(y) for x, y in zip(beta.coords, h.coords))


@dataclass(frozen=True)
class GammaVector:
    """Singularity strengths gamma_i > -1 at the origin."""

    values: tuple

    def __post_init__(self):
        vals = tuple(ex.as_fraction(g) for g in self.values)
        for i, g in enumerate(vals):
            if not g > -1:
                raise ValueError(f"gamma_{i + 1} = {g} violates gamma > -1")
        object.__setattr__(self, "values", vals)

    @property
    def exact(self):
        return all(ex.is_exact(g) for g in self.values)

    @property
    def mu(self):
        return tuple(g + 1 for g in self.values)

    def upper(self, cartan: "CartanData"):
        """gamma^i = sum_j a^{ij} gamma_j."""
        return tuple(_rowdot(row, self.values) for row in cartan.A_inv)

    def __len__(self):
        return len(self.values)


def _rowdot(row, v):
    if all(ex.is_exact(x) for x in v):
        return sum((x * y for x, y in zip(row, v)), Fraction(0))
    return math.fsum(float(x) * float(y) for x, y in zip(row, v))


@dataclass(frozen=True, eq=False)
class CartanData:
    type: LieType
    A: tuple = field(repr=False)
    A_inv: tuple = field(repr=False)
    positive_roots: tuple = field(repr=False)

    @classmethod
    def of(cls, t: LieType | str) -> "CartanData":
        if isinstance(t, str):
            t = LieType.parse(t)
        a = cartan_matrix(t)
        a_inv = ex.inverse(a)
        return cls(
            type=t,
            A=tuple(tuple(r) for r in a),
            A_inv=tuple(tuple(r) for r in a_inv),
            positive_roots=tuple(positive_roots(a)),
        )

    @property
    def rank(self) -> int:
        return self.type.rank

    @cached_property
    def symmetrizer(self):
        return tuple(_symmetrizer(self.A))

    def simple_root(self, i: int) -> Weight:
        """alpha_i (1-based) in fundamental-weight coordinates."""
        self._check_index(i)
        return Weight(self.A[i - 1])

    def fundamental_weight(self, i: int) -> Weight:
        self._check_index(i)
        return Weight(tuple(int(j == i - 1) for j in range(self.rank)))

    def coroot(self, i: int) -> Coweight:
        self._check_index(i)
        return Coweight(tuple(int(j == i - 1) for j in range(self.rank)))

    def dual_basis_E(self, j: int) -> Coweight:
        """E_j = sum_k a^{kj} h_{alpha_k}, so that <alpha_i, E_j> = delta_ij."""
        self._check_index(j)
        return Coweight(tuple(self.A_inv[k][j - 1] for k in range(self.rank)))

    def root_weight(self, m: Sequence) -> Weight:
        """Weight of sum_j m_j alpha_j."""
        return Weight(tuple(
            sum((ex.as_fraction(m[j]) * self.A[j][k] for j in range(self.rank)), Fraction(0))
            for k in range(self.rank)))

    def weight_to_root_coords(self, beta: Weight) -> tuple:
        return weight_to_root_coords(self, beta)

    def coweight_from_E(self, c: Sequence) -> Coweight:
        """Coweight sum_j c_j E_j, converted to coroot coordinates."""
        c = [ex.as_fraction(x) for x in c]
        return Coweight(tuple(_rowdot(row, c) for row in self.A_inv))

    def coweight_to_E(self, h: Coweight) -> tuple:
        """E-basis coordinates of h, i.e. (<alpha_1, h>, ..., <alpha_n, h>)."""
        return tuple(pair(self.simple_root(i), h) for i in range(1, self.rank + 1))

    def is_regular(self, h: Coweight) -> bool:
        return all(pair(self.root_weight(r), h) != 0 for r in self.positive_roots)

    def _check_index(self, i):
        if not 1 <= i <= self.rank:
            raise IndexError(f"index {i} out of range 1..{self.rank}")

    def to_json(self) -> dict:
        return {
            "family": self.type.family,
            "rank": self.type.rank,
            "cartan": [list(r) for r in self.A],
            "inverse_cartan": [[ex.fmt(x) for x in r] for r in self.A_inv],
            "positive_roots": [list(r) for r in self.positive_roots],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __eq__(self, other):
        return isinstance(other, CartanData) and self.type == other.type

    def __hash__(self):
        return hash(self.type)


def weight_to_root_coords(cartan: CartanData, beta: Weight) -> tuple:
    """Coordinates m with beta = sum_j m_j alpha_j, i.e. m = (A^{-1})^T b."""
    if beta.rank != cartan.rank:
        raise ValueError("rank mismatch")
    n = cartan.rank
    return tuple(sum((cartan.A_inv[k][j] * beta.coords[k] for k in range(n)), Fraction(0))
                 for j in range(n))


def w0_from_gammas(cartan: CartanData, gamma: GammaVector | Sequence) -> Coweight:
    """The coweight w0 with <alpha_i, w0> = mu_i = gamma_i + 1."""
    if not isinstance(gamma, GammaVector):
        gamma = GammaVector(tuple(gamma))
    if len(gamma) != cartan.rank:
        raise ValueError(f"expected {cartan.rank} gammas, got {len(gamma)}")
    return cartan.coweight_from_E(gamma.mu)
