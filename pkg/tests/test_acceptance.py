"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances and runtime budgets are pinned as module constants below.
"""

import cmath
import json
import math
import random
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from toda_blowup.kostant import ad_characterization_residual, lowering_current, phi_expand, phi_matrix
from toda_blowup.lie import CartanData, GammaVector, Weight, w0_from_gammas, weight_to_root_coords
from toda_blowup.mass import global_mass, limit_mass, local_mass_green, local_mass_quad, mass_report
from toda_blowup.rep import fundamental, weyl_dim
from toda_blowup import _exact as ex
from toda_blowup.solution import blowup_profile, build_family, lam_from_k, pde_residual
from toda_blowup.weyl import chamber_point, mass_vector

from conftest import SUITE_TYPES, group_of, suite_cases
from oracles import sl3_profile_error

# criterion 1
C1_TOL, C1_MIN_K, C1_R, C1_BUDGET = 1e-3, 1e4, 0.1, 10.0
# criterion 2
C2_REL = 1e-12
# criterion 3
C3_TOL, C3_BUDGET = 1e-6, 60.0
# criterion 4
C4_BUDGET = 300.0
# criterion 5
C5_PDE, C5_AD, C5_ORDER = 1e-8, 1e-10, 1.9
# criterion 6
C6_TOL = 1e-4
# criterion 7
C7_GLOBAL, C7_QUAD = 1e-6, 1e-7
# criterion 8
C8_TOL = 1e-3

LOG_GRID = np.logspace(-3, 3, 25)


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {n}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_sl3_golden(tmp_path, verdict):
    out = tmp_path / "sl3.json"
    t0 = time.perf_counter()
    p = subprocess.run([sys.executable, "-m", "toda_blowup.cli", "verify", "--type", "A2", "--gammas", "0,0",
                        "--tau", "s1", "--chamber", "1,4", "--radius", str(C1_R), "--out", str(out)],
                       capture_output=True, text=True)
    elapsed = time.perf_counter() - t0
    doc = json.loads(out.read_text())
    (el,) = doc["elements"]
    comps = el["components"]
    masses = [c["green"] for c in comps]
    ks = [math.exp(2 * c["lambda"]) for c in comps]
    ok = (p.returncode == 0 and el["H"] == ["1", "3"]
          and all(abs(m - t) <= C1_TOL for m, t in zip(masses, (1, 0)))
          and all(k >= C1_MIN_K for k in ks) and all(c["r"] == C1_R for c in comps)
          and elapsed <= C1_BUDGET)
    verdict(1, ok, f"masses={masses} k={[f'{k:.3g}' for k in ks]} exit={p.returncode} "
                   f"time={elapsed:.2f}s (tol {C1_TOL}, budget {C1_BUDGET}s)")


def test_criterion_2_phi_exactness(verdict):
    c = CartanData.of("A2")
    w0 = w0_from_gammas(c, [0, 0])
    cols = [phi_expand(fundamental(c, i), w0) for i in (1, 2)]
    # displayed Phi: first column (1, z, z^2/2), second column's lower part (1, z)
    exact_ok = ([t.coeff for t in cols[0].terms] == [(1,), (1,), (Fraction(1, 2),)]
                and [t.exponent for t in cols[0].terms] == [0, 1, 2]
                and all(isinstance(x, Fraction) for t in cols[0].terms for x in t.coeff)
                and [t.coeff[0] for t in cols[1].terms[:2]] == [1, 1]
                and [t.exponent for t in cols[1].terms[:2]] == [0, 1])

    z, k = 0.7 + 0.3j, 5.0
    lam = lam_from_k(k)
    tau = group_of("A2").find((1,))
    fam = build_family(c, GammaVector((0, 0)), chamber_point(c, tau, (1, 4)), tau)
    zb, a2 = z.conjugate(), abs(z) ** 2
    shown = np.array([
        [k + k**2 * a2 + a2**2 / (4 * k**3), k**2 * zb + z * zb**2 / (2 * k**3), zb**2 / (2 * k**3)],
        [k**2 * z + z**2 * zb / (2 * k**3), k**2 + a2 / k**3, zb / k**3],
        [z**2 / (2 * k**3), z / k**3, 1 / k**3]])
    minors = [shown[0, 0].real, np.linalg.det(shown[:2, :2]).real]

    def assembled(i):
        t = fam.terms[i - 1]
        return math.fsum(float(q) * math.exp(2 * lam * float(a)) * abs(z) ** (2 * float(b))
                         for q, a, b in zip(t.exact_q, t.a, t.b))

    rel = [abs(assembled(i) - m) / abs(m) for i, m in zip((1, 2), minors)]
    ok = exact_ok and max(rel) <= C2_REL
    verdict(2, ok, f"exact columns={exact_ok} minor rel. errors={[f'{r:.2e}' for r in rel]} (tol {C2_REL})")


def test_criterion_3_a2_sweep(verdict):
    c = CartanData.of("A2")
    t0 = time.perf_counter()
    rep = mass_report(c, GammaVector((0, 0)), list(group_of("A2")))
    elapsed = time.perf_counter() - t0
    got = {e.tau.word: tuple(x.green for x in e.components) for e in rep.elements}
    exact = {e.tau.word: tuple(x.exact for x in e.components) for e in rep.elements}
    want = {(): (0, 0), (1,): (1, 0), (2,): (0, 1), (1, 2): (1, 2), (2, 1): (2, 1), (1, 2, 1): (2, 2)}
    worst = max(abs(g - float(x)) for w in got for g, x in zip(got[w], exact[w]))
    ok = (exact == want and worst <= C3_TOL and all(x.converged for e in rep.elements for x in e.components)
          and elapsed <= C3_BUDGET)
    verdict(3, ok, f"6 elements, max |error|={worst:.2e} (tol {C3_TOL}), time={elapsed:.2f}s (budget {C3_BUDGET}s)")


def _rep_checks(c, rep, group):
    n = c.rank
    for j in range(n):
        for k in range(n):
            ef = ex.matmul(rep.E[j], rep.F[k])
            fe = ex.matmul(rep.F[k], rep.E[j])
            comm = [[x - y for x, y in zip(r, s)] for r, s in zip(ef, fe)]
            target = rep.Hm[j] if j == k else ex.zeros(rep.dim, rep.dim)
            if comm != target:
                return False
    g = rep.gram_matrix()
    for j in range(n):
        # adjointness as a matrix identity: F_j^T G = G E_j
        if ex.matmul(ex.transpose(rep.F[j]), g) != ex.matmul(g, rep.E[j]):
            return False
    if any(m <= 0 for w in rep.blocks for m in ex.leading_minors(rep.gram[w])):
        return False
    for tau in group:
        for w in rep.blocks:
            if rep.multiplicity(tau(Weight(w)).coords) != rep.multiplicity(w):
                return False
    return rep.dim == weyl_dim(c, c.fundamental_weight(rep.index))


def test_criterion_4_cross_type_properties(verdict):
    t0 = time.perf_counter()
    fails = []
    for t in SUITE_TYPES:
        c = CartanData.of(t)
        group = group_of(t)
        reps = [fundamental(c, i) for i in range(1, c.rank + 1)]
        for rep in reps:
            if not _rep_checks(c, rep, group):
                fails.append(f"{t}: representation V_{rep.index}")
        for gt, gam in [x for x in suite_cases() if x[0] == t]:
            w0 = w0_from_gammas(c, gam)
            exps = [phi_expand(r, w0) for r in reps]
            top = mass_vector(c, group.longest, w0)
            for tau in group:
                for i in range(1, c.rank + 1):
                    if not exps[i - 1].q_of(tau(c.fundamental_weight(i)).coords) > 0:
                        fails.append(f"{t} {gam} {tau.word}: q_tau_omega_{i}")
                    w = c.fundamental_weight(i)
                    m = weight_to_root_coords(c, w - tau(w))
                    if not all(x.denominator == 1 and x >= 0 for x in m):
                        fails.append(f"{t} {tau.word}: m_{i}")
                mv = mass_vector(c, tau, w0)
                if not all(x <= y for x, y in zip(mv, top)):
                    fails.append(f"{t} {gam} {tau.word}: dominance")
    elapsed = time.perf_counter() - t0
    ok = not fails and elapsed <= C4_BUDGET
    verdict(4, ok, f"{len(suite_cases())} (type, gamma) cases, failures={fails[:5]}, "
                   f"time={elapsed:.1f}s (budget {C4_BUDGET}s)")


def _fd_order(rep, gamma, z, h=1e-2):
    phi = phi_matrix(rep, gamma, z)
    zeta, _ = lowering_current(rep, gamma, z)
    target = phi @ zeta
    errs = []
    for step in (h, h / 2):
        fd = (phi_matrix(rep, gamma, z + step) - phi_matrix(rep, gamma, z - step)) / (2 * step)
        errs.append(np.max(np.abs(fd - target)))
    return errs


def test_criterion_5_residuals(verdict):
    worst_pde = 0.0
    worst_ad = 0.0
    orders = []
    exact_fd = 0
    rng = random.Random(11)
    for t, gam in suite_cases():
        c = CartanData.of(t)
        gamma = GammaVector(gam)
        for tau in group_of(t):
            fam = build_family(c, gamma, chamber_point(c, tau, [1] * c.rank), tau)
            for lam in (0.0, 1.0, 5.0):
                for i in range(1, c.rank + 1):
                    worst_pde = max(worst_pde, float(np.max(np.abs(pde_residual(fam, i, lam, LOG_GRID)))))
        zs = []
        while len(zs) < 20:
            z = cmath.rect(rng.uniform(0.05, 3.0), rng.uniform(-math.pi, math.pi))
            if not (z.imag == 0 and z.real <= 0):
                zs.append(z)
        for i in range(1, c.rank + 1):
            rep = fundamental(c, i)
            for z in zs:
                worst_ad = max(worst_ad, ad_characterization_residual(rep, gamma, z))
            e1, e2 = _fd_order(rep, gamma, zs[0])
            if e1 <= 1e-11:
                # central differences are exact on quadratics (gamma = 0, short chains)
                exact_fd += 1
            else:
                orders.append(math.log2(e1 / e2))
    ok = worst_pde <= C5_PDE and worst_ad <= C5_AD and min(orders) >= C5_ORDER
    verdict(5, ok, f"max pde residual={worst_pde:.2e} (tol {C5_PDE}), max ad residual={worst_ad:.2e} "
                   f"(tol {C5_AD}), min FD order={min(orders):.3f} over {len(orders)} cases "
                   f"(+{exact_fd} with exact differences; need {C5_ORDER})")


def test_criterion_6_liouville(verdict):
    c = CartanData.of("A1")
    rows = []
    for g in (Fraction(-1, 2), Fraction(0), Fraction(13, 10)):
        mu = float(g + 1)
        gamma = GammaVector((g,))
        s1 = group_of("A1").longest
        fam = build_family(c, gamma, chamber_point(c, s1, (1,)), s1)
        loc = limit_mass(fam, 1)
        glob = global_mass(fam, 1, 1.0)
        rows.append((mu, loc.estimate, loc.converged, glob.value, glob.converged))
    ok = all(lc and gc and abs(l - mu) <= C6_TOL and abs(gv - mu) <= C6_TOL for mu, l, lc, gv, gc in rows)
    verdict(6, ok, "(mu, local, global)=" + str([(m, round(l, 9), round(gv, 9)) for m, l, _, gv, _ in rows])
            + f" (tol {C6_TOL})")


def test_criterion_7_global_local(verdict):
    worst_global = 0.0
    worst_spread = 0.0
    worst_quad = 0.0
    unconverged = 0
    n_quad = 0
    for t, gam in suite_cases():
        c = CartanData.of(t)
        gamma = GammaVector(gam)
        group = group_of(t)
        top = [float(x) for x in mass_vector(c, group.longest, w0_from_gammas(c, gamma))]
        quad_taus = {(), group.longest.word, (1,)}
        for tau in group:
            fam = build_family(c, gamma, chamber_point(c, tau, [1] * c.rank), tau)
            for i in range(1, c.rank + 1):
                vals = []
                for lam in (0.5, 1.0, 5.0):
                    g = global_mass(fam, i, lam)
                    unconverged += not g.converged
                    vals.append(g.value)
                worst_spread = max(worst_spread, max(vals) - min(vals))
                worst_global = max(worst_global, max(abs(v - top[i - 1]) for v in vals))
                if tau.word in quad_taus:
                    for lam in (0.5, 4.0):
                        for r in (0.1, 1.0):
                            q = local_mass_quad(fam, i, lam, r, full_output=True)
                            unconverged += not q.converged
                            worst_quad = max(worst_quad, abs(q.value - local_mass_green(fam, i, lam, r)))
                            n_quad += 1
    ok = (unconverged == 0 and worst_spread <= C7_GLOBAL and worst_global <= C7_GLOBAL
          and worst_quad <= C7_QUAD)
    verdict(7, ok, f"global: max spread={worst_spread:.2e}, max |global - sigma(kappa)|={worst_global:.2e} "
                   f"(tol {C7_GLOBAL}); quad vs green max diff={worst_quad:.2e} over {n_quad} points "
                   f"(tol {C7_QUAD}); unconverged={unconverged}")


def test_criterion_8_blowup_profile(verdict):
    c = CartanData.of("A2")
    tau = group_of("A2").find((1,))
    fam = build_family(c, GammaVector((0, 0)), chamber_point(c, tau, (1, 4)), tau)
    z = np.linspace(0.0, 2.0, 9)
    target = -np.log((1 + z**2) ** 2)
    measured = []
    for k in (1e2, 1e4, 1e6):
        prof = blowup_profile(fam, lam_from_k(k), z)
        measured.append(float(np.max(np.abs(prof[0] - target))))
    # the same quantity at 50 digits, from the closed form of u
    precise = [max(float(sl3_profile_error(k, x)) for x in z) for k in (1e2, 1e4, 1e6)]
    strict = all(b < a for a, b in zip(precise, precise[1:]))
    nonincreasing = all(b <= a for a, b in zip(measured, measured[1:]))
    agree = all(abs(m - p) <= 1e-12 for m, p in zip(measured, precise))
    ok = measured[-1] <= C8_TOL and nonincreasing and strict and agree
    verdict(8, ok, f"max error at k=1e2,1e4,1e6: measured={[f'{m:.2e}' for m in measured]}, "
                   f"50-digit={[f'{p:.2e}' for p in precise]} (tol {C8_TOL} at 1e6; "
                   f"strictly decreasing={strict}, measured non-increasing={nonincreasing})")
