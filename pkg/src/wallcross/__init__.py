"""Exact wall-crossing factorizations, scattering diagrams of lines, and
integral-affine invariants over rationals and truncated Laurent series."""

from .scalars import (INF, QQ, LaurentSeriesRing, RationalField, ValuedScalar,
                      rational, ring_axiom_suite)
from .series import (ConeBasis, InconsistentDefect, NotAUnit, STANDARD_BASIS, SympAuto,
                     TruncSeries2, exp_ham, log_ham, p_omega, poisson_bracket, residue,
                     symp_filtration_degree)
from .factorization import (NotInCone, Slope, SlopeFactorization, WallFunction,
                            factorize, integrality_probe, ordered_product, slope_auto,
                            vertex_consistency, wedge_wall)
from .tropical import (EmptyRegion, LaurentPoly, PLFunction, ZeroPolynomial,
                       gauss_seminorm, is_affine_on, pl_add, tate_deck_transform,
                       val_function)
from .affine import (AffineTransform, AtSingularPoint, ChainSegment, ChainWithCovector,
                     KAffineTransform, LiftedWord, LoopWord, NotClosed, focus_focus_chart,
                     focus_focus_loop, focus_focus_word, gauss_bonnet_check,
                     i_homomorphism, k_fixed_vectors, matrix_to_lift, monodromy,
                     rho_pairing)
from .scatter import (CollisionEvent, Diagram, DuplicateSingularPoint, EndpointOnLine,
                      Line, PathThroughVertex, SingularPoint, TripleCollision,
                      attach_walls, check_vertex, evolve, export, initial_lines,
                      kaffine_invariance_check, transport)

__version__ = "0.1.0"
