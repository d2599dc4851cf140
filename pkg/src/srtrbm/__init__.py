"""Self-regulated thermodynamic RBM.

Binary restricted Boltzmann machines trained with persistent contrastive
divergence while the sampling temperature is a feedback-controlled state
variable. Ships exact small-model oracles, AIS evaluation, linearized
stability analysis, and MCMC diagnostics.
"""

__version__ = "0.1.0"

from .core import (
    ChainState,
    ChainTrace,
    EpochMetrics,
    RbmParams,
    ThermoState,
    TrainConfig,
    load_checkpoint,
    rng_stream,
    save_checkpoint,
    validate_config,
)

__all__ = [
    "ChainState",
    "ChainTrace",
    "EpochMetrics",
    "RbmParams",
    "ThermoState",
    "TrainConfig",
    "load_checkpoint",
    "rng_stream",
    "save_checkpoint",
    "validate_config",
    "__version__",
]
