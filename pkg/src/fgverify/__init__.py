"""Numerical verification of (f,g)-inversion, summation and theta identities."""
from .errors import (BaseNotContracting, ConfigError, FGError, IndexOutOfWindow,
                     NonconvergentLimit, NotSelfOrthogonal, PoleError,
                     TruncationInsufficient, UnknownTarget, ZeroArgument, ZeroPivot)
from .kernels import BACKEND
from .qseries import (DEFAULT_TRUNCATION, Truncation, gen_product, qpochhammer,
                      qpochhammer_inf, theta)
from .report import VerificationReport

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "DEFAULT_TRUNCATION", "Truncation", "VerificationReport",
    "gen_product", "qpochhammer", "qpochhammer_inf", "theta",
    "FGError", "PoleError", "BaseNotContracting", "TruncationInsufficient",
    "ZeroArgument", "IndexOutOfWindow", "ZeroPivot", "NotSelfOrthogonal",
    "NonconvergentLimit", "UnknownTarget", "ConfigError",
]
