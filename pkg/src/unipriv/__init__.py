"""Universal packing, covering and private codes for classical-quantum channels at small block length."""

from .covering import covering_experiment, obfuscation_error, smoothing_chain
from .entropy import Ensemble, alpha_chi, holevo, vn_entropy
from .packing import CqChannel, build_sqrt_povm, lambda_projector, rate_params
from .private import BipartiteCqChannel, build_private_code, evaluate_private_code, marginals, private_rate
from .symm import omega, tau_n

__version__ = "0.1.0"

__all__ = [
    "BipartiteCqChannel",
    "CqChannel",
    "Ensemble",
    "alpha_chi",
    "build_private_code",
    "build_sqrt_povm",
    "covering_experiment",
    "evaluate_private_code",
    "holevo",
    "lambda_projector",
    "marginals",
    "obfuscation_error",
    "omega",
    "private_rate",
    "rate_params",
    "smoothing_chain",
    "tau_n",
    "vn_entropy",
]
