"""Closed-form radial solutions of the singular Toda system.

For H in the real Cartan subalgebra and lambda > 0,

    U_i(rho) = 2 gamma^i log rho - log sum_beta q_beta exp(2 lambda a_beta) rho^(2 b_beta)

with a_beta = <beta, H>, b_beta = <omega_i - beta, w0> and q_beta the
contravariant norm of the beta-component of Phi|i>. The components are
u_i = sum_j a_ij U_j. Every sum is evaluated relative to its largest joint
exponent 2 lambda a + 2 b log rho + log q, so lambda can be pushed far past
the point where exp(2 lambda a) overflows.

Evaluation runs in ``np.longdouble``. The residual U'' + U'/rho + 4 e^{u}
balances two terms of size up to ~1e8 at rho = 1e-3, and double precision
leaves ~1e-8 of roundoff there; the 80-bit format (where the platform has
it) brings that down by three orders. Term data are converted directly
from the exact rationals for the same reason.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Context
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .kostant import phi_expand
from .lie import CartanData, Coweight, GammaVector, Weight, pair, w0_from_gammas
from .rep import fundamental
from .weyl import WeylElement

NON_REGULAR_TAG = "non-regular: theorem hypotheses unmet"

LD = np.longdouble
_DEC = Context(prec=34)


def _ld(x) -> np.longdouble:
    """Round an exact rational (or a float) to extended precision."""
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return LD(str(_DEC.divide(x.numerator, x.denominator)))
    return LD(float(x))


def lam_from_k(k: float) -> float:
    """lambda for the parameterization k = exp(2 lambda)."""
    return 0.5 * math.log(k)


@dataclass
class TermList:
    q: np.ndarray            # longdouble arrays from here on
    a: np.ndarray            # <beta, H>
    b: np.ndarray            # <omega_i - beta, w0>
    weights: list            # beta, omega-coordinates
    exact_q: list
    logq: np.ndarray = field(init=False)

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=LD)
        self.a = np.asarray(self.a, dtype=LD)
        self.b = np.asarray(self.b, dtype=LD)
        self.logq = np.log(self.q)

    @classmethod
    def from_exact(cls, q, a, b, weights=None):
        return cls(np.array([_ld(x) for x in q], dtype=LD),
                   np.array([_ld(x) for x in a], dtype=LD),
                   np.array([_ld(x) for x in b], dtype=LD),
                   list(weights or []), list(q))


@dataclass
class SolutionFamily:
    cartan: CartanData
    gamma: GammaVector
    H: Coweight
    terms: list                      # TermList per index i (0-based)
    tau: WeylElement | None = None
    gamma_upper: np.ndarray = field(init=False)
    regular: bool = field(init=False)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        self.gamma_upper = np.array([_ld(g) for g in self.gamma.upper(self.cartan)], dtype=LD)
        self.regular = self.cartan.is_regular(self.H)
        n = self.cartan.rank
        self._gamma = [_ld(g) for g in self.gamma.values]
        self._alpha = [_ld(pair(self.cartan.simple_root(i), self.H)) for i in range(1, n + 1)]
        self._omega = [_ld(pair(self.cartan.fundamental_weight(i), self.H)) for i in range(1, n + 1)]
        if not self.regular and NON_REGULAR_TAG not in self.notes:
            self.notes.append(NON_REGULAR_TAG)

    @property
    def rank(self):
        return self.cartan.rank

    @property
    def A(self) -> np.ndarray:
        return np.array(self.cartan.A, dtype=float)

    def alpha_pairing(self, i: int):
        """<alpha_i, H>."""
        return self._alpha[i - 1]

    def omega_pairing(self, i: int):
        """<omega_i, H>."""
        return self._omega[i - 1]

    def top_term(self, i: int) -> int:
        """Index of the term with the largest <beta, H> (unique when H is regular)."""
        return int(np.argmax(self.terms[i - 1].a))


@lru_cache(maxsize=512)
def _expansion(rep, w0):
    # H-independent, so shared by every Weyl element of a sweep
    return phi_expand(rep, w0)


def build_family(cartan: CartanData, gamma: GammaVector, H: Coweight,
                 tau: WeylElement | None = None, cache_dir=None) -> SolutionFamily:
    """Solution family for C = Id and Lambda = exp(lambda H)."""
    if not isinstance(gamma, GammaVector):
        gamma = GammaVector(tuple(gamma))
    w0 = w0_from_gammas(cartan, gamma)
    terms = []
    for i in range(1, cartan.rank + 1):
        rep = fundamental(cartan, i, cache_dir=cache_dir)
        exp = _expansion(rep, w0)
        keep = [t for t in exp.terms if t.q > 0]
        terms.append(TermList.from_exact(
            [t.q for t in keep],
            [pair(Weight(t.weight), H) for t in keep],
            [t.exponent for t in keep],
            [t.weight for t in keep],
        ))
    return SolutionFamily(cartan, gamma, H, terms, tau)


def _joint(fam: SolutionFamily, i: int, lam: float, logrho: np.ndarray):
    t = fam.terms[i - 1]
    lam = LD(lam)
    return t.logq[None, :] + 2 * lam * t.a[None, :] + 2 * t.b[None, :] * logrho[:, None]


def _lse_and_weights(fam: SolutionFamily, i: int, lam: float, logrho):
    """log S_i and the normalized term weights p_beta at each radius."""
    e = _joint(fam, i, lam, logrho)
    top = e.max(axis=1, keepdims=True)
    w = np.exp(e - top)  # terms far below the max underflow to 0 (dropped)
    s = w.sum(axis=1, keepdims=True)
    return (top + np.log(s))[:, 0], w / s


def _as_rho(rho):
    r = np.atleast_1d(np.asarray(rho, dtype=LD))
    if np.any(r <= 0):
        raise ValueError("rho must be positive")
    return r


def _out(x, rho):
    return float(x[0]) if np.ndim(rho) == 0 else np.asarray(x, dtype=float)


def U(fam: SolutionFamily, i: int, lam: float, rho):
    """U_i at radius rho (scalar or array)."""
    r = _as_rho(rho)
    lse, _ = _lse_and_weights(fam, i, lam, np.log(r))
    return _out(2 * fam.gamma_upper[i - 1] * np.log(r) - lse, rho)


def _u_array(fam, i, lam, r):
    logr = np.log(r)
    lam = LD(lam)
    # split off the highest-weight exponent 2 lambda <omega_j, H> so that the
    # large lambda-linear parts combine into the single term 2 lambda <alpha_i, H>
    total = 2 * fam._gamma[i - 1] * logr - 2 * lam * fam.alpha_pairing(i)
    for j in range(1, fam.rank + 1):
        aij = fam.cartan.A[i - 1][j - 1]
        if aij == 0:
            continue
        t = fam.terms[j - 1]
        e = (t.logq[None, :] + 2 * lam * (t.a[None, :] - fam.omega_pairing(j))
             + 2 * t.b[None, :] * logr[:, None])
        top = e.max(axis=1)
        lse = top + np.log(np.exp(e - top[:, None]).sum(axis=1))
        total = total - aij * lse
    return total


def u(fam: SolutionFamily, i: int, lam: float, rho):
    """u_i = sum_j a_ij U_j."""
    r = _as_rho(rho)
    return _out(_u_array(fam, i, lam, r), rho)


def _moments(fam, i, lam, r):
    _, p = _lse_and_weights(fam, i, lam, np.log(r))
    b = fam.terms[i - 1].b
    mean = p @ b
    var = (p * (b[None, :] - mean[:, None]) ** 2).sum(axis=1)
    return mean, var


def radial_derivatives(fam: SolutionFamily, i: int, lam: float, rho):
    """(U_i', U_i'') from the closed form.

    With p_beta the normalized term weights, U' = 2 (gamma^i - <b>) / rho and
    U'' = (2 <b> - 2 gamma^i - 4 Var(b)) / rho^2.
    """
    r = _as_rho(rho)
    mean, var = _moments(fam, i, lam, r)
    g = fam.gamma_upper[i - 1]
    d1 = 2 * (g - mean) / r
    d2 = (2 * mean - 2 * g - 4 * var) / r**2
    return _out(d1, rho), _out(d2, rho)


def laplacian(fam: SolutionFamily, i: int, lam: float, rho):
    """U'' + U'/rho, which collapses to -4 Var(b) / rho^2."""
    r = _as_rho(rho)
    _, var = _moments(fam, i, lam, r)
    return _out(-4 * var / r**2, rho)


def pde_residual(fam: SolutionFamily, i: int, lam: float, rho):
    """U_i'' + U_i'/rho + 4 exp(u_i); zero away from the origin."""
    r = _as_rho(rho)
    _, var = _moments(fam, i, lam, r)
    res = -4 * var / r**2 + 4 * np.exp(_u_array(fam, i, lam, r))
    return _out(res, rho)


def center_value(fam: SolutionFamily, i: int, lam: float) -> float:
    """lim_{rho -> 0} u_i(rho): finite only when gamma_i = 0."""
    g = fam.gamma.values[i - 1]
    if g == 0:
        return float(-2 * LD(lam) * fam.alpha_pairing(i))
    return -math.inf if g > 0 else math.inf


def blowup_profile(fam: SolutionFamily, lam: float, z, center: int = 1):
    """Rescaled profiles u_i(exp(-u_c(0)/2) |z|) - u_c(0) for every i.

    Returns an array of shape (rank, len(z)). The rescaling uses the center
    value of component ``center`` (default 1), which must be finite.
    """
    if not math.isfinite(center_value(fam, center, lam)):
        raise ValueError(f"u_{center}(0) is not finite (gamma_{center} != 0)")
    rho = np.abs(np.atleast_1d(np.asarray(z, dtype=complex))).astype(LD)
    c0 = -2 * LD(lam) * fam.alpha_pairing(center)
    scale = np.exp(-c0 / 2)
    out = np.empty((fam.rank, rho.size))
    pos = rho > 0
    for i in range(1, fam.rank + 1):
        vals = np.empty(rho.size)
        if pos.any():
            vals[pos] = _u_array(fam, i, lam, scale * rho[pos]) - c0
        if (~pos).any():
            vals[~pos] = center_value(fam, i, lam) - float(c0)
        out[i - 1] = vals
    return out
