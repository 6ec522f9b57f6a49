"""Strong maximum principle toolkit for pure second-order subequations."""

from .characteristic import (CharacteristicTable, char_fn, classify, cone_invariants,
                             containment_check, integral_test, smp_verdict)
from .counterexample import build_counterexample, hopf_function
from .errors import InputError, PositivityViolation, PreconditionError, Refusal, UnsupportedError
from .functions import GFunction, ScalarFn
from .linalg import eigen_sorted, projector, radial_hessian
from .monotonicity import (additivity_check, mg_dual_char, monotonicity_membership, scp_report,
                           subadditive_extend)
from .radial import (RadialFunction, radial_residual, reduce_test_function, smp_witness_check,
                     verify_monotone_radial)
from .subequations import dual, dual_member, orbit_member, positivity_check

__version__ = "0.1.0"
