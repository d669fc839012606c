"""Fuzzy F-metric spaces, psi-contractions and a Picard solver for the
satellite web coupling problem."""

from .coverings import (FiniteSubset, boundedness_witness, common_cover_obstruction,
                        greedy_separated_points, is_net, min_net_bruteforce)
from .fixpoint import picard_solve, uniqueness_probe, verify_contraction
from .fmetric import (FMetricConfig, canonical_config, canonical_metric, cauchy_diagnostic,
                      convergence_diagnostic, function_space_config, verify_axioms)
from .functions import (FClassFn, PsiFn, TNorm, psi_iterate, verify_fclass, verify_psi,
                        verify_tnorm)
from .satellite import (BvpConfig, GridFunction, apply_operator, contraction_estimate, green,
                        green_row_integral, residual_check, solve_bvp)

__version__ = "0.1.0"
