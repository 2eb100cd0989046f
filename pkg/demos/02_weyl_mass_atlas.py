"""
===============================================================
02. All Weyl elements of G2
===============================================================

One solution family per Weyl element tau, H chosen inside the chamber
tau C0. The numerical limit masses are compared with the exact values
<omega_i - tau omega_i, w0>; the longest element also gets the global
mass, which every family shares.
"""
from fractions import Fraction

from toda_blowup import CartanData, GammaVector, enumerate_group, mass_report

c = CartanData.of("G2")
gamma = GammaVector((Fraction(1, 5), Fraction(-1, 10)))
W = enumerate_group(c)
print(f"|W(G2)| = {len(W)}, longest element s{' s'.join(map(str, W.longest.word))}")

report = mass_report(c, gamma, W.sorted())
print(f"{'tau':<20}{'exact':<16}{'numerical':<28}lambda")
for e in report.elements:
    exact = ", ".join(str(x.exact) for x in e.components)
    num = ", ".join(f"{x.green:.9f}" for x in e.components)
    print(f"{e.tau.label():<20}{exact:<16}{num:<28}{[x.lam for x in e.components]}")
kappa = report.elements[-1]
print("global masses (longest element):", [round(x.global_mass, 9) for x in kappa.components])
print("all matched:", report.ok)
