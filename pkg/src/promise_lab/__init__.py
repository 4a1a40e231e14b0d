"""Exact simulation and verification of unary DFAs, PFAs and QFAs on promise problems."""

from .automata import (
    BitBudgetExceeded,
    OrthogonalMatrix,
    OutcomeDistribution,
    StochasticMatrix,
    UnaryDFA,
    UnaryMCQFA,
    UnaryPFA,
    dfa_accepts,
    dfa_to_pfa,
    float_shadow,
    pfa_outcome,
    pfa_state_at,
    qfa_accept_probability,
    qfa_state_at,
)
from .constructions import (
    BlockRotationQFA,
    Interval,
    build_lkn_dfa,
    build_lkn_pfa,
    build_lkn_qfa,
    build_theta_qfa,
    cyclic_conversion,
    pfa_to_cyclic_dfa,
)
from .kernels import BACKEND
from .markov import ChainStructure, LimitProfile, analyze_chain, limit_profile, period_certificate
from .numtheory import ResidueConstraint, crt_solve, lcm_list, nth_prime, prime_window
from .problems import (
    LknProblem,
    LThetaProblem,
    PromiseLabel,
    PythagoreanAngle,
    classify_lkn,
    classify_theta,
    enumerate_promised,
    generate_no_instance_lkn,
)
from .verify import (
    BoundReport,
    TableRow,
    emit_table,
    find_no_instance_in_progression,
    verify_bounds,
)

__version__ = "0.1.0"

__all__ = [
    "BitBudgetExceeded",
    "OrthogonalMatrix",
    "OutcomeDistribution",
    "StochasticMatrix",
    "UnaryDFA",
    "UnaryMCQFA",
    "UnaryPFA",
    "dfa_accepts",
    "dfa_to_pfa",
    "float_shadow",
    "pfa_outcome",
    "pfa_state_at",
    "qfa_accept_probability",
    "qfa_state_at",
    "BlockRotationQFA",
    "Interval",
    "build_lkn_dfa",
    "build_lkn_pfa",
    "build_lkn_qfa",
    "build_theta_qfa",
    "cyclic_conversion",
    "pfa_to_cyclic_dfa",
    "LknProblem",
    "LThetaProblem",
    "PromiseLabel",
    "PythagoreanAngle",
    "classify_lkn",
    "classify_theta",
    "enumerate_promised",
    "generate_no_instance_lkn",
    "BoundReport",
    "TableRow",
    "emit_table",
    "find_no_instance_in_progression",
    "verify_bounds",
    "BACKEND",
    "ChainStructure",
    "LimitProfile",
    "analyze_chain",
    "limit_profile",
    "period_certificate",
    "ResidueConstraint",
    "crt_solve",
    "lcm_list",
    "nth_prime",
    "prime_window",
    "__version__",
]
