"""Evaluation and verification of Kampe de Feriet series F^{0:3}_{1:1}."""

from .errors import DenominatorPole, GammaPole, NoConvergence, SamplerExhausted, SeriesError
from .hyper import PFQParams, SeriesValue, Status, eval_pfq, pfq
from .identities import (
    ConstraintReport,
    IdentityEvaluation,
    IdentityId,
    SamplerConfig,
    applicable,
    rhs_value,
    sample_params,
    verify,
)
from .kdf import KdFParams, check_convergence, eval_kdf, termination_profile
from .numeric import SignedLog, beta, gamma_ratio, log_gamma, pochhammer

__all__ = [
    "ConstraintReport",
    "DenominatorPole",
    "GammaPole",
    "IdentityEvaluation",
    "IdentityId",
    "KdFParams",
    "NoConvergence",
    "PFQParams",
    "SamplerConfig",
    "SamplerExhausted",
    "SeriesError",
    "SeriesValue",
    "SignedLog",
    "Status",
    "applicable",
    "beta",
    "check_convergence",
    "eval_kdf",
    "eval_pfq",
    "gamma_ratio",
    "log_gamma",
    "pfq",
    "pochhammer",
    "rhs_value",
    "sample_params",
    "termination_profile",
    "verify",
]
