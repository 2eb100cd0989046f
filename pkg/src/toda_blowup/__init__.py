"""Explicit blowup solutions of singular Toda systems and their masses.

Exact Lie data (Cartan matrices, Weyl groups, fundamental representations
with their contravariant forms) feed a closed-form solution family; the
mass module then checks numerically that local blowup masses equal
<omega_i - tau omega_i, w0> for every Weyl element tau.
"""

from .lie import (CartanData, Coweight, GammaVector, LieType, LieTypeError, Weight,
                  cartan_matrix, pair, positive_roots, w0_from_gammas, weight_to_root_coords)
from .weyl import (GroupTooLarge, WeylElement, WeylGroup, chamber_point, dual_action,
                   enumerate_group, from_word, mass_vector, mass_vector_from_gammas, parse_word)
from .rep import DimensionCapExceeded, FundamentalRep, build_fundamental, fundamental, weyl_dim
from .kostant import (ad_characterization_residual, iter_sequences, lowering_current, p_of,
                      phi_coefficients, phi_expand, phi_matrix)
from .solution import (SolutionFamily, U, blowup_profile, build_family, center_value, lam_from_k,
                       laplacian, pde_residual, radial_derivatives, u)
from .mass import (global_mass, limit_mass, local_mass_green, local_mass_quad, mass_report,
                   verify_element)

__version__ = "0.1.0"
