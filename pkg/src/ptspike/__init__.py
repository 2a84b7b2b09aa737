"""Single-spike temporal neural classifier.

A grayscale image is translated into one spike delay per input neuron by a
sliding patch window, shaped by a decaying response kernel, and integrated by
a row of threshold neurons. The first output spike decides the class through
an asymmetric prefix code; supervised online updates push each participating
neuron toward its desired firing state.
"""

from .codec import (
    ABSENT,
    EncoderConfig,
    PerPixelConfig,
    SpikeTrain,
    derive_structure,
    encode,
    encode_per_pixel,
)
from .kernels import (
    DUAL_EXP,
    LINEAR,
    KernelParams,
    dual_exp_kernel,
    kernel_table,
    kernel_value,
    linear_kernel,
    normalize_mu,
)
from .network import (
    IfcParams,
    NeuronTrace,
    fire_and_cut,
    load_weights,
    membrane_at,
    save_weights,
    trace,
)
from .plasticity import (
    FiringStatus,
    DesiredPattern,
    ErrorKind,
    ErrorRecord,
    LearningParams,
    apply_update,
    desired_pattern,
    detect_errors,
    init_weights,
    train_epoch,
)
from .decoding import Decision, decode
from .metrics import EnergyModel, OpCounters, energy, pe_cycles, report

__version__ = "0.1.0"

__all__ = [
    "ABSENT",
    "EncoderConfig",
    "PerPixelConfig",
    "SpikeTrain",
    "derive_structure",
    "encode",
    "encode_per_pixel",
    "LINEAR",
    "DUAL_EXP",
    "KernelParams",
    "linear_kernel",
    "dual_exp_kernel",
    "kernel_value",
    "kernel_table",
    "normalize_mu",
    "IfcParams",
    "NeuronTrace",
    "membrane_at",
    "trace",
    "fire_and_cut",
    "save_weights",
    "load_weights",
    "FiringStatus",
    "DesiredPattern",
    "ErrorKind",
    "ErrorRecord",
    "LearningParams",
    "desired_pattern",
    "detect_errors",
    "apply_update",
    "train_epoch",
    "init_weights",
    "Decision",
    "decode",
    "OpCounters",
    "EnergyModel",
    "energy",
    "pe_cycles",
    "report",
    "__version__",
]
