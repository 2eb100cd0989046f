"""
===============================================================
04. Fundamental representations and their Gram blocks
===============================================================

Each fundamental module is built exactly as a quotient of the Verma
module. We print dimensions, weight multiplicities, Gram determinants,
and the coefficients q at the extremal weights tau omega_i, which must
all be positive.
"""
from fractions import Fraction

from toda_blowup import CartanData, enumerate_group, fundamental, phi_expand, w0_from_gammas
from toda_blowup import _exact as ex

for t in ("B2", "C3", "G2"):
    c = CartanData.of(t)
    W = enumerate_group(c)
    w0 = w0_from_gammas(c, [Fraction(1, 3)] * c.rank)
    for i in range(1, c.rank + 1):
        rep = fundamental(c, i)
        mults = sorted({len(idx) for idx in rep.blocks.values()})
        dets = sorted({ex.fmt(ex.det(rep.gram[w])) for w in rep.blocks}, key=Fraction)
        exp = phi_expand(rep, w0)
        extremal = {tau(c.fundamental_weight(i)).coords for tau in W}
        qs = [exp.q_of(w) for w in extremal]
        print(f"{t} V_{i}: dim={rep.dim:3d} weights={len(rep.blocks):3d} multiplicities={mults} "
              f"Gram dets={dets[:4]}{'...' if len(dets) > 4 else ''}")
        print(f"       {len(extremal)} extremal weights, min q = {min(qs)} (all > 0: {all(q > 0 for q in qs)})")
