"""Local and global blowup masses, numerically and against the exact formula.

Masses are normalized by pi: the local mass of component i at radius r is
(1/pi) * integral of exp(u_i) over the disc B_r, i.e. 2 * int_0^r e^{u_i} rho drho.

Two independent estimators are provided:

* ``local_mass_quad`` integrates e^{u_i} directly (adaptive Gauss-Kronrod
  in t = log rho, with breakpoints at every change of dominant term);
* ``local_mass_green`` uses the divergence theorem on Delta U_i = -4 e^{u_i},
  giving gamma^i - (r/2) U_i'(r).

``limit_mass`` sweeps lambda first and only then shrinks r, which is the
order of limits in the blowup statement; at fixed lambda the r -> 0 limit
is always zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import integrate

from . import _exact as ex
from .lie import CartanData, GammaVector, w0_from_gammas
from .solution import LD, SolutionFamily, _u_array, build_family, pde_residual, radial_derivatives
from .weyl import WeylElement, chamber_point, enumerate_group, mass_vector

QUAD_EPSABS = 1e-9
QUAD_EPSREL = 1e-10
MASS_TOL = 1e-6
GLOBAL_TOL = 1e-7
DEFAULT_RADIUS = 0.1


def default_schedule() -> list[float]:
    """lambda_j = 2^j, j = 0..24."""
    return [2.0**j for j in range(25)]


def _crossings(fam: SolutionFamily, i: int, lam: float) -> list[float]:
    """log-radii where two terms of some S_j (j adjacent to i) trade places."""
    out = []
    lam = LD(lam)
    for j in range(1, fam.rank + 1):
        if fam.cartan.A[i - 1][j - 1] == 0:
            continue
        t = fam.terms[j - 1]
        c = t.logq + 2 * lam * t.a
        for p in range(len(c)):
            for q in range(p + 1, len(c)):
                db = t.b[p] - t.b[q]
                if db != 0:
                    out.append(float((c[q] - c[p]) / (2 * db)))
    return out


@dataclass
class QuadResult:
    value: float
    error: float
    converged: bool
    tail: float


def local_mass_quad(fam: SolutionFamily, i: int, lam: float, r: float,
                    full_output: bool = False):
    """(1/pi) int_{B_r} e^{u_i}, by quadrature in t = log rho.

    Below the lower cutoff t_min the integrand is a pure exponential
    C e^{(2 gamma_i + 2) t} (every sum is dominated by its highest-weight
    term), so the truncated tail f(t_min) / (2 gamma_i + 2) is added back and
    also reported.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    gi = float(fam.gamma.values[i - 1])
    t_hi = math.log(r)
    cross = [c for c in _crossings(fam, i, lam) if math.isfinite(c)]
    t_lo = math.log(1e-12 * r)
    if cross:
        t_lo = min(t_lo, min(cross) - 40.0 / (2 * gi + 2))

    def f(t):
        val = _u_array(fam, i, lam, np.array([np.exp(LD(t))], dtype=LD))[0] + 2 * LD(t)
        return float(2 * np.exp(val))

    pts = sorted({c for c in cross if t_lo < c < t_hi})
    value, err, *rest = integrate.quad(
        f, t_lo, t_hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL,
        limit=200 + 4 * len(pts), points=pts or None, full_output=1)
    # quad appends a message (and sometimes more) only when ier > 0
    converged = len(rest) == 1
    tail = f(t_lo) / (2 * gi + 2)
    total = value + tail
    if full_output:
        return QuadResult(total, err + tail, converged, tail)
    return total


def local_mass_green(fam: SolutionFamily, i: int, lam: float, r: float) -> float:
    """gamma^i - (r/2) U_i'(r): the boundary-flux form of the local mass."""
    if r <= 0:
        raise ValueError("radius must be positive")
    d1, _ = radial_derivatives(fam, i, lam, r)
    return float(fam.gamma_upper[i - 1]) - 0.5 * r * d1


def _settled(fam: SolutionFamily, i: int, lam: float, r: float, margin: float = 20.0) -> bool:
    """True once every lambda-dependent change of dominant term in S_i has left [r/2, r].

    Crossings that drift inward with lambda must sit below r/2, outward ones
    above r, each with a dominance margin of e^margin. Without this the sweep
    can stop on a plateau reached before the mass has moved inside B_r.
    """
    t = fam.terms[i - 1]
    lam = LD(lam)
    c = t.logq + 2 * lam * t.a
    lo, hi = math.log(r / 2), math.log(r)
    for p in range(len(c)):
        for q in range(p + 1, len(c)):
            db = t.b[p] - t.b[q]
            da = t.a[q] - t.a[p]
            if db == 0 or da == 0:
                continue
            x = float((c[q] - c[p]) / (2 * db))
            pad = margin / float(2 * abs(db))
            if da / db < 0 and x > lo - pad:
                return False
            if da / db > 0 and x < hi + pad:
                return False
    return True


@dataclass
class LimitResult:
    estimate: float
    converged: bool
    lam: float
    radius: float
    history: list = field(default_factory=list)

    @property
    def k(self) -> float:
        """k = exp(2 lambda), inf once it overflows."""
        return math.exp(2 * self.lam) if self.lam < 354 else math.inf


def limit_mass(fam: SolutionFamily, i: int, r: float = DEFAULT_RADIUS,
               schedule: Sequence[float] | None = None, tol: float = MASS_TOL) -> LimitResult:
    """lim_{r->0} lim_{lambda->inf} of the local mass, by a lambda sweep.

    Returns the Green estimate at the first lambda where two successive
    values agree to ``tol``, no change of dominant term is still drifting
    through the annulus r/2 < rho < r, and the value at r/2 agrees as well
    (the double limit is r-independent once lambda is large enough). An exhausted
    schedule gives ``converged=False`` with the last estimate.
    """
    schedule = list(schedule or default_schedule())
    prev = None
    history = []
    last = math.nan
    for lam in schedule:
        g = local_mass_green(fam, i, lam, r)
        history.append((lam, g))
        last = g
        if prev is not None and abs(g - prev) < tol and _settled(fam, i, lam, r):
            half = local_mass_green(fam, i, lam, r / 2)
            if abs(half - g) < tol:
                return LimitResult(g, True, lam, r, history)
        prev = g
    return LimitResult(last, False, schedule[-1], r, history)


@dataclass
class GlobalResult:
    value: float
    converged: bool
    radius: float


def global_mass(fam: SolutionFamily, i: int, lam: float, tol: float = GLOBAL_TOL,
                max_doublings: int = 400) -> GlobalResult:
    """(1/pi) int_{R^2} e^{u_i} from the Green estimate at growing radius.

    The starting radius is chosen past the last change of dominant term, so
    the doubling loop cannot stall on an intermediate plateau.
    """
    t = fam.terms[i - 1]
    lam_ld = LD(lam)
    c = t.logq + 2 * lam_ld * t.a
    top = int(np.argmax(t.b))
    t0 = 0.0
    for p in range(len(c)):
        db = t.b[top] - t.b[p]
        if db > 0:
            # dominance of the lowest weight by a factor e^20
            t0 = max(t0, float((c[p] - c[top] + 20) / (2 * db)))
    radius = math.exp(t0)
    prev = local_mass_green(fam, i, lam, radius)
    for _ in range(max_doublings):
        radius *= 2
        cur = local_mass_green(fam, i, lam, radius)
        if abs(cur - prev) < tol:
            return GlobalResult(cur, True, radius)
        prev = cur
    return GlobalResult(prev, False, radius)


@dataclass
class ComponentReport:
    i: int
    exact: object
    green: float
    quad: float | None
    quad_converged: bool
    lam: float
    radius: float
    converged: bool
    matched: bool
    pde_ok: bool = True
    global_mass: float | None = None
    global_exact: object = None
    global_matched: bool = True

    @property
    def error(self) -> float:
        return abs(self.green - float(self.exact))

    def to_json(self) -> dict:
        d = {
            "i": self.i,
            "exact": ex.fmt_number(self.exact),
            "green": self.green,
            "quad": self.quad,
            "quad_converged": self.quad_converged,
            "abs_error": self.error,
            "lambda": self.lam,
            "r": self.radius,
            "converged": self.converged,
            "matched": self.matched,
            "pde_ok": self.pde_ok,
        }
        if self.global_mass is not None:
            d["global"] = self.global_mass
            d["global_exact"] = ex.fmt_number(self.global_exact)
            d["global_matched"] = self.global_matched
        return d


@dataclass
class ElementReport:
    tau: WeylElement
    H: tuple
    components: list
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.converged and c.matched and c.pde_ok and c.global_matched
                   for c in self.components)

    def to_json(self) -> dict:
        return {
            "tau": list(self.tau.word),
            "tau_label": self.tau.label(),
            "H": [ex.fmt_number(x) for x in self.H],
            "components": [c.to_json() for c in self.components],
            "ok": self.ok,
            "notes": list(self.notes),
        }


@dataclass
class MassReport:
    cartan: CartanData
    gamma: GammaVector
    chamber: tuple
    radius: float
    tol: float
    schedule: list
    elements: list

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.elements)

    def to_json(self) -> dict:
        return {
            "type": str(self.cartan.type),
            "gammas": [ex.fmt_number(g) for g in self.gamma.values],
            "chamber": [ex.fmt_number(c) for c in self.chamber],
            "r": self.radius,
            "tol": self.tol,
            "lambda_schedule": list(self.schedule),
            "center_convention": "u_1(0)",
            "elements": [e.to_json() for e in self.elements],
            "ok": self.ok,
        }


# log grid used for the residual sanity check inside verification runs
_CHECK_RHO = np.logspace(-3, 3, 25)
PDE_TOL = 1e-8


def verify_element(cartan: CartanData, gamma: GammaVector, tau: WeylElement,
                   chamber: Sequence, r: float = DEFAULT_RADIUS,
                   schedule: Sequence[float] | None = None, tol: float = MASS_TOL,
                   with_global: bool = False, with_quad: bool = True,
                   family: SolutionFamily | None = None) -> ElementReport:
    """Limit masses for one Weyl element, compared with the exact formula."""
    H = chamber_point(cartan, tau, chamber)
    fam = family or build_family(cartan, gamma, H, tau)
    w0 = w0_from_gammas(cartan, gamma)
    exact = mass_vector(cartan, tau, w0)
    gexact = mass_vector(cartan, enumerate_group(cartan).longest, w0) if with_global else None
    comps = []
    for i in range(1, cartan.rank + 1):
        lim = limit_mass(fam, i, r, schedule, tol)
        quad = None
        quad_ok = False
        if with_quad:
            qr = local_mass_quad(fam, i, lim.lam, r, full_output=True)
            quad, quad_ok = qr.value, qr.converged
        res = max(float(np.max(np.abs(pde_residual(fam, i, lam, _CHECK_RHO)))) for lam in (0.0, 1.0))
        comp = ComponentReport(
            i=i, exact=exact[i - 1], green=lim.estimate, quad=quad, quad_converged=quad_ok,
            lam=lim.lam, radius=r, converged=lim.converged,
            matched=abs(lim.estimate - float(exact[i - 1])) <= tol, pde_ok=res <= PDE_TOL)
        if with_global:
            g = global_mass(fam, i, 1.0)
            comp.global_mass = g.value
            comp.global_exact = gexact[i - 1]
            comp.global_matched = g.converged and abs(g.value - float(gexact[i - 1])) <= tol
        comps.append(comp)
    return ElementReport(tau, H.coords, comps, list(fam.notes))


def mass_report(cartan: CartanData, gamma: GammaVector, taus: Sequence[WeylElement],
                chamber: Sequence | None = None, r: float = DEFAULT_RADIUS,
                schedule: Sequence[float] | None = None, tol: float = MASS_TOL,
                family_hook=None) -> MassReport:
    """Run verify_element over ``taus``; the longest element also gets global masses.

    ``family_hook`` (if given) is applied to each freshly built family before
    evaluation; the CLI uses it for its negative-control switch.
    """
    chamber = tuple(chamber or [1] * cartan.rank)
    schedule = list(schedule or default_schedule())
    kappa = enumerate_group(cartan).longest
    elements = []
    for tau in sorted(taus, key=lambda e: (e.length, e.word)):
        fam = build_family(cartan, gamma, chamber_point(cartan, tau, chamber), tau)
        if family_hook is not None:
            fam = family_hook(fam)
        elements.append(verify_element(cartan, gamma, tau, chamber, r, schedule, tol,
                                       with_global=(tau == kappa), family=fam))
    return MassReport(cartan, gamma, chamber, r, tol, schedule, elements)
