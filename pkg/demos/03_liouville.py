"""
===============================================================
03. Rank one: the singular Liouville equation
===============================================================

For A1 the family is u = -2 log(e^{lambda a0} + e^{lambda a1} rho^{2 mu} / mu^2)
up to constants. All the mass mu sits at the origin when tau = s1, and
none of it when tau = id.
"""
from fractions import Fraction

import numpy as np

from toda_blowup import (CartanData, GammaVector, build_family, chamber_point, enumerate_group,
                         global_mass, limit_mass, local_mass_quad, pde_residual)

c = CartanData.of("A1")
W = enumerate_group(c)
for g in (Fraction(-1, 2), Fraction(0), Fraction(13, 10)):
    gamma = GammaVector((g,))
    for tau in W.sorted():
        fam = build_family(c, gamma, chamber_point(c, tau, (1,)), tau)
        res = limit_mass(fam, 1)
        glob = global_mass(fam, 1, 1.0)
        worst = np.max(np.abs(pde_residual(fam, 1, 1.0, np.logspace(-3, 3, 25))))
        print(f"gamma={str(g):>6} tau={tau.label():>3}: local={res.estimate:.8f} "
              f"global={glob.value:.8f} mu={float(g + 1)} max residual={worst:.1e}")

# the local mass at fixed lambda grows with r from 0 to mu
fam = build_family(c, GammaVector((Fraction(3, 10),)), chamber_point(c, W.longest, (1,)), W.longest)
for r in (0.01, 0.1, 1.0, 10.0, 1e3):
    print(f"r={r:7}: (1/pi) int_B_r e^u = {local_mass_quad(fam, 1, 1.0, r):.8f}")
