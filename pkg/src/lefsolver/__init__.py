"""Radial ground states of singular Lane-Emden-Fowler equations with convection.

    -Lap u = p(x) (g(u) + f(u) + |grad u|^a)   in R^N,   u > 0,   u -> 0 at infinity.
"""

from .barriers import (BarrierCertificate, GlobalBarrier, build_certificate, global_barrier,
                       global_k, invert_w, subsolution, supersolution_constants,
                       supersolution_field, verify_supersolution, xi_at)
from .bvp import ComparisonReport, SolveReport, comparison_ratio_check, solve_ball
from .conditions import (ConvergenceVerdict, SphereSampler, capital_phi, necessary_condition,
                         phi_identity_residual, psi_phi_at, sufficient_condition,
                         sup_capital_phi, tail_integral)
from .eigen import EigenPair, HopfData, first_eigenpair, hopf_data
from .errors import *  # noqa: F401,F403
from .grid import RadialField, RadialGrid, radial_laplacian
from .groundstate import GroundStateResult, decay_profile, solve_ground_state
from .hode import HSolution, hprim_power_constant, solve_h
from .kernels import BACKEND
from .problem import (NonlinearityF, NonlinearityG, ProblemSpec, WeightP, infimum_g_plus_f,
                      validate_hypotheses)

__version__ = "0.1.0"
