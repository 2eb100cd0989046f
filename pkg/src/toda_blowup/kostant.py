"""The holomorphic frame Phi(z) through its lowering-operator series.

On any representation,

    Phi(z) = sum_s z^{<phi(s), w0>} / p(s, w0) * F_{i_k} ... F_{i_1},

summed over all finite index sequences s = (i_1, ..., i_k), where
phi(s) = alpha_{i_1} + ... + alpha_{i_k} and p(s, w0) is the product of
<phi(s_j), w0> over the suffixes s_j = (i_{j+1}, ..., i_k). The series is
finite on a finite-dimensional module.

Two routes are provided. ``iter_sequences``/``phi_expand`` walk the
sequences one by one (pruning zero branches) and accumulate the column
Phi|i> exactly. ``phi_coefficients`` builds the whole matrix by a recursion
over basis vectors and is what the numerical evaluators use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import _exact as ex
from .lie import CartanData, Coweight, GammaVector, Weight, pair, w0_from_gammas, weight_to_root_coords
from .rep import FundamentalRep


def _mu_of(w0: Coweight, cartan: CartanData):
    return [pair(cartan.simple_root(j), w0) for j in range(1, cartan.rank + 1)]


def p_of(s, mu) -> Fraction | float:
    """p(s, w0) for a sequence of 1-based indices, given mu_j = <alpha_j, w0>.

    Equals 1 for the empty sequence.
    """
    exact = all(ex.is_exact(m) for m in mu)
    prod = Fraction(1) if exact else 1.0
    for j in range(len(s)):
        tail = [mu[i - 1] for i in s[j:]]
        prod *= sum(tail, Fraction(0)) if exact else math.fsum(float(t) for t in tail)
    return prod


@dataclass(frozen=True)
class SequenceTerm:
    s: tuple
    phi: Weight              # sum of alpha_{i_j}
    p: object                # p(s, w0)
    vector: dict             # sparse coordinates of F_{i_k} ... F_{i_1} v


def _apply_sparse(mat, v: dict) -> dict:
    out = {}
    for c, x in v.items():
        for r in range(len(mat)):
            y = mat[r][c]
            if y != 0:
                out[r] = out.get(r, 0) + y * x
    return {r: y for r, y in out.items() if y != 0}


def iter_sequences(rep: FundamentalRep, w0: Coweight, start: int = 0) -> Iterator[SequenceTerm]:
    """Depth-first walk over sequences with nonzero action on basis vector ``start``.

    Children are visited in increasing generator index; branches whose
    running vector vanishes are pruned, which makes the walk finite.
    """
    cartan = rep.cartan
    mu = _mu_of(w0, cartan)
    n = cartan.rank
    zero = Weight(tuple(Fraction(0) for _ in range(n)))

    stack = [((), {start: Fraction(1)})]
    while stack:
        s, vec = stack.pop()
        phi = zero
        for i in s:
            phi = phi + cartan.simple_root(i)
        yield SequenceTerm(s, phi, p_of(s, mu), vec)
        children = []
        for j in range(1, n + 1):
            nv = _apply_sparse(rep.F[j - 1], vec)
            if nv:
                children.append((s + (j,), nv))
        stack.extend(reversed(children))


@dataclass(frozen=True)
class PhiTerm:
    weight: tuple            # beta, omega-coordinates
    root_coords: tuple       # m with omega_i - beta = sum m_j alpha_j
    exponent: object         # b_beta = <omega_i - beta, w0>
    coeff: tuple             # w_beta, coordinates inside the beta block
    q: object                # w_beta^T G_beta w_beta


@dataclass(frozen=True)
class PhiExpansion:
    index: int
    terms: tuple             # PhiTerm, in the representation's weight order
    exact: bool

    def term(self, weight) -> PhiTerm:
        weight = tuple(weight)
        for t in self.terms:
            if t.weight == weight:
                return t
        raise KeyError(weight)

    def q_of(self, weight):
        try:
            return self.term(weight).q
        except KeyError:
            return Fraction(0)

    def to_json(self) -> dict:
        return {
            "i": self.index,
            "terms": [{
                "beta_omega_coords": [ex.fmt(c) for c in t.weight],
                "exponent_m_coords": [ex.fmt(c) for c in t.root_coords],
                "exponent": ex.fmt_number(t.exponent),
                "q": ex.fmt_number(t.q),
            } for t in self.terms],
        }


def phi_expand(rep: FundamentalRep, w0: Coweight, start: int = 0) -> PhiExpansion:
    """Expand Phi applied to a basis vector (default |i>) by weight.

    For each weight beta the coefficient vector is
    w_beta = sum over s with phi(s) = beta_start - beta of vector(s) / p(s);
    q_beta is its squared norm under the contravariant form.
    """
    cartan = rep.cartan
    exact = w0.exact
    acc: dict = {}
    for term in iter_sequences(rep, w0, start):
        for r, x in term.vector.items():
            acc.setdefault(r, []).append(x / term.p if exact else float(x) / float(term.p))
    top = Weight(rep.weights[start])
    terms = []
    for w, idx in rep.blocks.items():
        if not any(r in acc for r in idx):
            continue
        if exact:
            coeff = tuple(sum(acc.get(r, []), Fraction(0)) for r in idx)
        else:
            coeff = tuple(math.fsum(acc.get(r, [])) for r in idx)
        gram = rep.gram[w]
        if exact:
            q = ex.quad_form(gram, list(coeff))
        else:
            q = math.fsum(coeff[a] * float(gram[a][b]) * coeff[b]
                          for a in range(len(idx)) for b in range(len(idx)))
        diff = top - Weight(w)
        terms.append(PhiTerm(w, weight_to_root_coords(cartan, diff), pair(diff, w0), coeff, q))
    return PhiExpansion(rep.index, tuple(terms), exact)


@lru_cache(maxsize=256)
def _coefficients(rep: FundamentalRep, mu: tuple):
    exact = all(ex.is_exact(m) for m in mu)
    dim = rep.dim
    n = rep.rank
    level = [weight_to_root_coords(rep.cartan, Weight(tuple(a - b for a, b in zip(rep.weights[0], w))))
             for w in rep.weights]
    depth = [sum((m * u for m, u in zip(lv, mu)), Fraction(0)) if exact
             else math.fsum(float(m) * float(u) for m, u in zip(lv, mu)) for lv in level]
    cols: list = [None] * dim
    # F_j e_c only involves basis vectors of larger index, so go from the end
    for c in range(dim - 1, -1, -1):
        col = {c: Fraction(1) if exact else 1.0}
        for j in range(n):
            fj = rep.F[j]
            for d in range(c + 1, dim):
                f = fj[d][c]
                if f == 0:
                    continue
                if not exact:
                    f = float(f)
                for r, x in cols[d].items():
                    col[r] = col.get(r, 0) + f * x / (depth[r] - depth[c])
        cols[c] = col
    k = [[Fraction(0) if exact else 0.0] * dim for _ in range(dim)]
    for c, col in enumerate(cols):
        for r, x in col.items():
            k[r][c] = x
    expo = [[depth[r] - depth[c] for c in range(dim)] for r in range(dim)]
    return k, expo


def phi_coefficients(rep: FundamentalRep, gamma: GammaVector):
    """Exact coefficient matrix K and exponent matrix X with Phi(z) = K * z**X.

    X[r][c] = <beta_c - beta_r, w0>; K is zero unless beta_c - beta_r is a
    nonnegative combination of simple roots.
    """
    return _coefficients(rep, tuple(gamma.mu))


def _check_z(z):
    z = complex(z)
    if z.imag == 0 and z.real <= 0:
        raise ValueError(f"z = {z} lies on the cut (-inf, 0]")
    return z


def zpow(z: complex, x) -> complex:
    """Principal branch z**x on C minus (-inf, 0]."""
    if x == 0:
        return 1.0 + 0j
    return complex(np.exp(float(x) * np.log(complex(z))))


_CLD = np.clongdouble


def _ld_real(x):
    if isinstance(x, Fraction):
        return np.longdouble(x.numerator) / np.longdouble(x.denominator)
    return np.longdouble(x)


def _zpow_ld(logz, x):
    if x == 0:
        return _CLD(1)
    return np.exp(_ld_real(x) * logz)


def _phi_ld(rep: FundamentalRep, gamma: GammaVector, z) -> np.ndarray:
    # extended precision: entries grow like |z|^depth and the identity checks
    # below multiply three such matrices together
    k, expo = phi_coefficients(rep, gamma)
    logz = np.log(_CLD(complex(z)))
    dim = rep.dim
    out = np.zeros((dim, dim), dtype=_CLD)
    for r in range(dim):
        for c in range(dim):
            if k[r][c] != 0:
                out[r, c] = _ld_real(k[r][c]) * _zpow_ld(logz, expo[r][c])
    return out


def phi_matrix(rep: FundamentalRep, gamma: GammaVector, z) -> np.ndarray:
    """Numerical Phi(z) on the representation space."""
    z = _check_z(z)
    return _phi_ld(rep, gamma, z).astype(complex)


def lowering_current(rep: FundamentalRep, gamma: GammaVector, z):
    """(zeta(z), xi(z)) = (sum z^{gamma_j} F_j, sum z^{mu_j} F_j)."""
    z = _check_z(z)
    zeta, xi = _currents_ld(rep, gamma, z)
    return zeta.astype(complex), xi.astype(complex)


def _currents_ld(rep, gamma, z):
    logz = np.log(_CLD(complex(z)))
    dim = rep.dim
    zeta = np.zeros((dim, dim), dtype=_CLD)
    xi = np.zeros((dim, dim), dtype=_CLD)
    for j, (g, m) in enumerate(zip(gamma.values, gamma.mu)):
        fj = np.array([[_ld_real(x) for x in row] for row in rep.F[j]], dtype=_CLD)
        zeta += _zpow_ld(logz, g) * fj
        xi += _zpow_ld(logz, m) * fj
    return zeta, xi


def _unit_lower_solve(l, b):
    """l^{-1} b by forward substitution (l unit lower triangular)."""
    x = np.array(b, dtype=_CLD)
    for r in range(1, l.shape[0]):
        x[r] -= l[r, :r] @ x[:r]
    return x


def ad_characterization_residual(rep: FundamentalRep, gamma: GammaVector, z) -> float:
    """max |Phi^{-1} M Phi - (M - xi)| with M the action of w0.

    Evaluated in extended precision; Phi is unit lower triangular in the
    level-ordered basis, so the inverse is a forward substitution.
    """
    z = _check_z(z)
    w0 = w0_from_gammas(rep.cartan, gamma)
    m = np.diag([_ld_real(pair(Weight(w), w0)) for w in rep.weights]).astype(_CLD)
    phi = _phi_ld(rep, gamma, z)
    _, xi = _currents_ld(rep, gamma, z)
    lhs = _unit_lower_solve(phi, m @ phi)
    return float(np.max(np.abs(lhs - (m - xi))))


def expansion_value(expansion: PhiExpansion, rep: FundamentalRep, z) -> np.ndarray:
    """Phi(z)|i> assembled from the expansion terms."""
    z = _check_z(z)
    v = np.zeros(rep.dim, dtype=complex)
    for t in expansion.terms:
        zp = zpow(z, t.exponent)
        for r, c in zip(rep.blocks[t.weight], t.coeff):
            v[r] = float(c) * zp
    return v


def hermitian_form(rep: FundamentalRep, u: np.ndarray, v: np.ndarray) -> complex:
    """{u, v}, conjugate-linear in the second slot."""
    g = np.array(rep.gram_matrix(), dtype=float)
    return complex(u @ g @ np.conj(v))
