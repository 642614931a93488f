"""Isometry of integral quadratic lattices over dyadic local fields.

Fields are Q2 or a totally ramified extension Q2(pi) given by an Eisenstein
polynomial; all arithmetic is exact.  The main entry points are
``isometric_bong``, ``isometric_jordan`` and ``isometric_2adic``.
"""
from .bong import (BongSymbol, a_invariant, binary_isometric, dual, g_membership, good_bong,
                   maximal_norm_splitting, verify_bong)
from .classify import (Verdict, binary_transform_reachable, isometric_2adic, isometric_bong,
                       isometric_jordan, reachable_states)
from .errors import (Degenerate, DyadicError, EvenDenominator, FieldMismatch,
                     InsufficientPrecision, InternalVerificationFailure, MalformedInput,
                     PrecisionLoss, RankError, RankMismatch, RMismatch, ZeroElement, ZeroNorm)
from .field import (DyadicField, FieldElement, all_square_classes, defect_order, hilbert,
                    in_A, in_norm_group, is_square, ord_, parse_element, same_square_class,
                    unit_square_classes)
from .invariants import (AlphaVector, alpha_recursive, alpha_vector, blocks_from_R,
                         bong_weight_orders, lattice_weight_order)
from .lattice import GramLattice, jordan_split, jordan_invariants, s_lattice
from .search import isotropy_search
from .spaces import (SpaceInvariants, anisotropic_dim, hyperbolic_plane, isometric_spaces,
                     lattice_space, negate, orthogonal_sum, represents, space_invariants,
                     witt_index)

__all__ = [name for name in dir() if not name.startswith("_")]
