"""KAK (Cartan) decompositions of special unitaries for the three symmetric
pair types, double-coset product certification, and fixed-depth gate
synthesis (Berkeley circuits, block-ZXZ)."""

__version__ = "0.1.0"

from .alcove import (AI, AII, AIII, AffineMap, AffineSubspace, AlcovePoint,
                     PairType, SignedPermutation, alcove_vertices,
                     cyclic_descents, fixed_point_set, in_closed_alcove,
                     pair_ai, pair_aii, pair_aiii, reduce_type_a,
                     reduce_type_c, stabilizer_group, type_a_centroid)
from .cartan import (CartanFactors, alcove_exp, alcove_invariant,
                     apply_involution, cartan_double, decompose_ai,
                     decompose_aiii, k_membership_residual, random_k_element)
from .numerics import (BlockCSD, Tolerance, cs_middle, csd_2block,
                       default_tolerance, diag_symmetric_unitary, eig_unitary,
                       haar_unitary, set_default_tolerance,
                       unitarity_residual)
from .products import (PairCertificate, SubsetTriple, VPolytope,
                       centroid_feasibility_scan, fat_points,
                       fixed_by_alcove_symmetries, in_large_product_set,
                       pair_large_product, qlr_degree_ok)
from .synthesis import (AIIISequence, GatePair, SU4Circuit, ZXZFactors,
                        berkeley_gate, block_zxz, corner_matrix, magic_matrix,
                        synth_aiii, synth_aiii_2x2, synth_su4)

__all__ = [name for name in dir() if not name.startswith("_")]
