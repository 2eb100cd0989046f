"""Weyl group enumeration and the exact blowup-mass formula.

An element is identified by its integer action matrix on fundamental-weight
coordinates (faithful for crystallographic groups). Words are kept only as
bookkeeping; the word stored on each element is the first shortest word met
by breadth-first search, which is reduced but not canonical.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _exact as ex
from .lie import CartanData, Coweight, GammaVector, Weight, pair, weight_to_root_coords

DEFAULT_MAX_ORDER = 10**6


class GroupTooLarge(RuntimeError):
    pass


def _mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def _apply(m, v):
    return tuple(sum((m[i][k] * v[k] for k in range(len(v))), Fraction(0))
                 for i in range(len(m)))


@dataclass(frozen=True)
class WeylElement:
    word: tuple
    action: tuple  # integer matrix on omega-coordinates

    @property
    def length(self):
        return len(self.word)

    @property
    def rank(self):
        return len(self.action)

    def __call__(self, beta: Weight) -> Weight:
        return Weight(_apply(self.action, beta.coords))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.word + other.word, _mul(self.action, other.action))

    def inverse_action(self):
        # the matrix has determinant +-1 so the inverse is integral
        inv = ex.inverse([list(r) for r in self.action])
        return tuple(tuple(int(x) for x in r) for r in inv)

    def label(self):
        return " ".join(f"s{i}" for i in self.word) if self.word else "id"

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.action == other.action

    def __hash__(self):
        return hash(self.action)


def identity_element(cartan: CartanData) -> WeylElement:
    n = cartan.rank
    return WeylElement((), tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def simple_reflection(cartan: CartanData, i: int) -> WeylElement:
    """s_i acting on omega-coordinates: b -> b - b_i * (omega-coords of alpha_i)."""
    if not 1 <= i <= cartan.rank:
        raise IndexError(f"reflection index {i} out of range 1..{cartan.rank}")
    n = cartan.rank
    row = cartan.A[i - 1]
    m = tuple(tuple(int(k == l) - (row[k] if l == i - 1 else 0) for l in range(n))
              for k in range(n))
    return WeylElement((i,), m)


def from_word(cartan: CartanData, word: Sequence[int]) -> WeylElement:
    """The product s_{w1} s_{w2} ... (leftmost factor acts last)."""
    el = identity_element(cartan)
    for i in word:
        el = el * simple_reflection(cartan, i)
    return WeylElement(tuple(word), el.action)


def parse_word(text: str) -> tuple:
    """'s1 s2 s1' or '1 2 1' or 'id' -> (1, 2, 1)."""
    text = text.strip()
    if text in ("", "id", "e", "1"):
        return ()
    out = []
    for tok in text.replace(",", " ").split():
        tok = tok.lower().lstrip("s")
        out.append(int(tok))
    return tuple(out)


def inversion_count(cartan: CartanData, el: WeylElement) -> int:
    """Number of positive roots sent to negative roots."""
    count = 0
    for r in cartan.positive_roots:
        img = weight_to_root_coords(cartan, el(cartan.root_weight(r)))
        if all(c <= 0 for c in img):
            count += 1
    return count


class WeylGroup:
    """All elements of W, in BFS order (so sorted by length)."""

    def __init__(self, cartan: CartanData, elements: list[WeylElement]):
        self.cartan = cartan
        self.elements = elements
        top = max(e.length for e in elements)
        tops = [k for k, e in enumerate(elements) if e.length == top]
        if len(tops) != 1:
            raise RuntimeError("longest element is not unique")
        self.longest_index = tops[0]

    @property
    def longest(self) -> WeylElement:
        return self.elements[self.longest_index]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def sorted(self):
        """Elements ordered by (length, lexicographic word)."""
        return sorted(self.elements, key=lambda e: (e.length, e.word))

    def find(self, word: Sequence[int]) -> WeylElement:
        target = from_word(self.cartan, word)
        for e in self.elements:
            if e == target:
                return e
        raise KeyError(word)


def enumerate_group(cartan: CartanData, max_order: int = DEFAULT_MAX_ORDER) -> WeylGroup:
    """Breadth-first closure of the simple reflections, deduplicated by action."""
    gens = [simple_reflection(cartan, i) for i in range(1, cartan.rank + 1)]
    start = identity_element(cartan)
    seen = {start.action: start}
    order = [start]
    queue = deque([start])
    while queue:
        el = queue.popleft()
        for g in gens:
            nxt = el * g
            if nxt.action not in seen:
                seen[nxt.action] = nxt
                order.append(nxt)
                queue.append(nxt)
                if len(order) > max_order:
                    raise GroupTooLarge(
                        f"Weyl group of {cartan.type} exceeds the cap of {max_order} elements")
    return WeylGroup(cartan, order)


def dual_action(tau: WeylElement, h: Coweight) -> Coweight:
    """tau acting on the Cartan subalgebra, so that <tau b, tau h> = <b, h>.

    In our bases this is the inverse transpose of the weight action.
    """
    if tau.rank != h.rank:
        raise ValueError("rank mismatch")
    inv = tau.inverse_action()
    n = tau.rank
    coords = []
    for k in range(n):
        terms = [inv[j][k] * h.coords[j] for j in range(n)]
        coords.append(sum(terms, Fraction(0)) if h.exact else math.fsum(map(float, terms)))
    return Coweight(tuple(coords))


def chamber_point(cartan: CartanData, tau: WeylElement, c: Sequence) -> Coweight:
    """tau applied to sum_i c_i E_i, a regular point of the chamber tau C0."""
    c = [ex.as_fraction(x) for x in c]
    if len(c) != cartan.rank:
        raise ValueError(f"expected {cartan.rank} chamber coefficients")
    if any(not x > 0 for x in c):
        raise ValueError("chamber coefficients must be strictly positive")
    return dual_action(tau, cartan.coweight_from_E(c))


def omega_difference_root_coords(cartan: CartanData, tau: WeylElement) -> list[tuple]:
    """Rows m_i: root coordinates of omega_i - tau omega_i."""
    rows = []
    for i in range(1, cartan.rank + 1):
        w = cartan.fundamental_weight(i)
        rows.append(weight_to_root_coords(cartan, w - tau(w)))
    return rows


def mass_vector(cartan: CartanData, tau: WeylElement, w0: Coweight) -> tuple:
    """sigma_i = <omega_i - tau omega_i, w0> for i = 1..n."""
    out = []
    for i in range(1, cartan.rank + 1):
        w = cartan.fundamental_weight(i)
        out.append(pair(w - tau(w), w0))
    return tuple(out)


def mass_vector_from_gammas(cartan: CartanData, tau: WeylElement, gamma: GammaVector) -> tuple:
    """Same as mass_vector, written as sum_j m_ij mu_j with integer m_ij."""
    mu = gamma.mu
    rows = omega_difference_root_coords(cartan, tau)
    if gamma.exact:
        return tuple(sum((m * u for m, u in zip(row, mu)), Fraction(0)) for row in rows)
    return tuple(math.fsum(float(m) * float(u) for m, u in zip(row, mu)) for row in rows)
