"""
===============================================================
01. The sl(3) family, end to end
===============================================================

Rank two, no singularity (gamma = 0), and H = diag(1, 2, -3), which is the
transposition s1 applied to diag(2, 1, -3). We build the frame, the two
closed-form components, and watch the local masses settle at (1, 0).

Run with ``python3 demos/01_sl3_worked_example.py``.
"""
import math

import numpy as np

from toda_blowup import (CartanData, GammaVector, U, build_family, chamber_point, enumerate_group,
                         fundamental, lam_from_k, limit_mass, local_mass_green, local_mass_quad,
                         phi_expand, u, w0_from_gammas)
from toda_blowup.solution import blowup_profile

#############################################################################
# Lie data
# --------
# Cartan matrix, the Weyl group (6 elements) and the coweight H.
c = CartanData.of("A2")
W = enumerate_group(c)
s1 = W.find((1,))
H = chamber_point(c, s1, (1, 4))   # <alpha_1, H0> = 1, <alpha_2, H0> = 4
print("Cartan matrix:", c.A)
print("H in coroot coordinates:", [str(x) for x in H.coords])  # (1, 3) = diag(1, 2, -3)

#############################################################################
# The frame applied to |1> and |2>
# --------------------------------
# Coefficients are exact rationals; q is the contravariant norm of each
# weight component.
w0 = w0_from_gammas(c, (0, 0))
for i in (1, 2):
    exp = phi_expand(fundamental(c, i), w0)
    print(f"Phi|{i}>:", [(str(t.coeff[0]), f"z^{t.exponent}") for t in exp.terms],
          " q =", [str(t.q) for t in exp.terms])

#############################################################################
# Closed forms
# ------------
# U = -log(k + k^2 rho^2 + rho^4 / (4 k^3)) and the analogous V.
fam = build_family(c, GammaVector((0, 0)), H, s1)
k = 100.0
lam = lam_from_k(k)
for rho in (0.1, 1.0, 10.0):
    print(f"rho={rho:5}: U={U(fam, 1, lam, rho):.12f}  "
          f"closed form={-math.log(k + k**2 * rho**2 + rho**4 / (4 * k**3)):.12f}")

#############################################################################
# Local masses at r = 0.1 as k grows
# ----------------------------------
# Two estimators: quadrature of e^u and the boundary flux.
for k in (1e1, 1e2, 1e4, 1e8):
    lam = lam_from_k(k)
    row = [(local_mass_quad(fam, i, lam, 0.1), local_mass_green(fam, i, lam, 0.1)) for i in (1, 2)]
    print(f"k={k:8.0e}  mass_1={row[0][0]:.10f} ({row[0][1]:.10f})  mass_2={row[1][0]:.3e}")

for i in (1, 2):
    res = limit_mass(fam, i)
    print(f"limit mass {i}: {res.estimate:.9f} (lambda={res.lam}, converged={res.converged})")

#############################################################################
# Rescaled profile
# ----------------
# u~(z) = u(e^{-u(0)/2} z) - u(0) approaches -log(1+|z|^2)^2.
z = np.linspace(0, 2, 5)
for k in (1e1, 1e2, 1e3):
    prof = blowup_profile(fam, lam_from_k(k), z)
    err = np.max(np.abs(prof[0] + np.log((1 + z**2) ** 2)))
    print(f"k={k:6.0e}  max |u~ + log(1+|z|^2)^2| = {err:.2e}   v~(0) = {prof[1, 0]:.2f}")
