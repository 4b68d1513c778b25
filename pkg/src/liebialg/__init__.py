"""Exact symbolic verification of transitive Lie bialgebroids over coordinate space."""

from .scalar_field import ScalarFn, ExpPoly, parse, backend_name, set_backend
from .lie_algebra import (
    AlgMultivector,
    Cobracket,
    LieAlgebraData,
    alg_schouten,
    check_cocycle,
    check_jacobi,
    coboundary,
    sl2,
    aff2,
)
from .multivector import Context, Covector, Multivector, bigrade, contract, lie_derivative, parse_section, wedge
from .schouten import Theta, schouten, theta_to_K
from .bialgebroid import (
    Quadruple,
    Report,
    assemble_lambda,
    check_hamiltonian_tau,
    check_master,
    d_star,
    gauge_transform,
    t_components,
    verify_coboundary,
    verify_transitive,
)
from .dual_structures import check_matched_pair, dual_bracket, anchor_identity_suite, prop22_suite

__version__ = "0.1.0"
