"""Spike-response kernels.

Each input spike at tick t_s contributes kernel(t - t_s) to a downstream
membrane. Two shapes are provided: a linear decay (cheap, the default) and
a dual-exponential reference shape normalized to unit peak. Both are zero
before the spike.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

LINEAR = "linear"
DUAL_EXP = "dual_exp"


class KernelError(ValueError):
    """Invalid kernel parameters."""


@dataclass(frozen=True)
class KernelParams:
    """Shape parameters for a spike-response kernel.

    kind: LINEAR or DUAL_EXP
    tau:  linear decay slope per tick (LINEAR)
    tau1, tau2: slow and fast time constants in ticks (DUAL_EXP), tau1 > tau2
    mu:   peak normalizer (DUAL_EXP)
    """

    kind: str
    tau: float = 0.0
    tau1: float = 0.0
    tau2: float = 0.0
    mu: float = 0.0


def linear_kernel(tau: float) -> KernelParams:
    if tau <= 0:
        raise KernelError(f"linear decay rate must be > 0, got {tau}")
    return KernelParams(kind=LINEAR, tau=tau)


def normalize_mu(tau1: float, tau2: float, time_frame: int) -> float:
    """Peak normalizer so max over dt in [0, T-1] of the raw shape is 1."""
    if tau2 <= 0 or tau1 <= tau2:
        raise KernelError(f"need tau1 > tau2 > 0, got tau1={tau1}, tau2={tau2}")
    if time_frame < 2:
        raise KernelError(
            f"dual-exp kernel needs a frame of at least 2 ticks, got {time_frame}"
        )
    dt = np.arange(time_frame, dtype=np.float64)
    raw = np.exp(-dt / tau1) - np.exp(-dt / tau2)
    return 1.0 / float(raw.max())


def dual_exp_kernel(tau1: float, tau2: float, time_frame: int) -> KernelParams:
    mu = normalize_mu(tau1, tau2, time_frame)
    return KernelParams(kind=DUAL_EXP, tau1=tau1, tau2=tau2, mu=mu)


def kernel_value(params: KernelParams, dt: float) -> float:
    """Contribution of a spike dt ticks in the past; 0 before the spike.

    LINEAR clamps at zero so stale spikes contribute nothing rather than
    pulling the membrane down.
    """
    if dt < 0:
        return 0.0
    if params.kind == LINEAR:
        return max(1.0 - params.tau * dt, 0.0)
    if params.kind == DUAL_EXP:
        return params.mu * (math.exp(-dt / params.tau1) - math.exp(-dt / params.tau2))
    raise KernelError(f"unknown kernel kind {params.kind!r}")


@lru_cache(maxsize=64)
def kernel_table(params: KernelParams, time_frame: int) -> np.ndarray:
    """kernel_value at every integer dt in [0, T-1], as a read-only float64
    lookup array. Cached per (params, frame)."""
    tab = np.array(
        [kernel_value(params, dt) for dt in range(time_frame)], dtype=np.float64
    )
    tab.setflags(write=False)
    return tab
