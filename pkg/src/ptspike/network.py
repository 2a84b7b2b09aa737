"""Single-layer synaptic network and integrate-and-fire evaluation.

Weights are a dense M x I float64 matrix (input m, output i). Learning-mode
evaluation integrates the whole frame with no reset so the peak voltage and
its tick are available; testing-mode evaluation stops at the first output
spike (temporal winner-take-all).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import backend
from .codec import SpikeTrain
from .kernels import KernelParams, kernel_table, kernel_value
from .metrics import OpCounters


class WeightFormatError(ValueError):
    """Malformed weight file."""


WEIGHTS_MAGIC = "PTSPIKE-WEIGHTS v1"


@dataclass(frozen=True)
class IfcParams:
    """Integrate-and-fire threshold."""

    v_th: float = 1.0

    def __post_init__(self):
        if self.v_th <= 0:
            raise ValueError(f"v_th must be > 0, got {self.v_th}")


@dataclass
class NeuronTrace:
    """Full-frame summary of one output neuron's membrane.

    v_max: peak voltage; t_max: earliest tick reaching it; fired: whether the
    peak reached threshold; t_fire: earliest crossing tick, None if silent.
    """

    v_max: float
    t_max: int
    fired: bool
    t_fire: Optional[int]


def _as_delay_array(train: SpikeTrain) -> np.ndarray:
    return np.ascontiguousarray(train.delays, dtype=np.int64)


def membrane_at(
    train: SpikeTrain,
    w_col: np.ndarray,
    k: KernelParams,
    t: int,
    counters: Optional[OpCounters] = None,
) -> float:
    """Membrane voltage of one output neuron at tick t.

    Sums w_m * kernel(t - t_s) over present input spikes; each term with a
    positive kernel value counts as one weighting operation.
    """
    if not 0 <= t <= train.time_frame - 1:
        raise ValueError(f"tick {t} outside frame [0, {train.time_frame - 1}]")
    v = 0.0
    ops = 0
    for m, d in enumerate(train.delays):
        if d < 0:
            continue
        kv = kernel_value(k, t - d)
        if kv > 0.0:
            v += float(w_col[m]) * kv
            ops += 1
    if counters is not None:
        counters.weighting_ops += ops
    return v


def trace(
    train: SpikeTrain,
    w_col: np.ndarray,
    k: KernelParams,
    ifc: IfcParams,
    counters: Optional[OpCounters] = None,
) -> NeuronTrace:
    """Evaluate one output neuron over the whole frame, no reset."""
    ktab = kernel_table(k, train.time_frame)
    v_max, t_max, t_fire, ops = backend.trace_scan(
        _as_delay_array(train),
        np.ascontiguousarray(w_col, dtype=np.float64),
        ktab,
        ifc.v_th,
    )
    if counters is not None:
        counters.weighting_ops += int(ops)
    return NeuronTrace(
        v_max=float(v_max),
        t_max=int(t_max),
        fired=t_fire >= 0,
        t_fire=int(t_fire) if t_fire >= 0 else None,
    )


def fire_and_cut(
    train: SpikeTrain,
    weights: np.ndarray,
    k: KernelParams,
    ifc: IfcParams,
    counters: Optional[OpCounters] = None,
) -> tuple[Optional[int], Optional[int]]:
    """Scan output neurons in index order, stopping at the first spike.

    Neuron i integrates tick by tick until it crosses the threshold or the
    frame ends; the first crossing neuron in scan order wins and every
    later neuron's integrate-and-fire stage is shut down unevaluated. The
    winner's own ticks past its crossing are never evaluated either.
    Returns (winner, decision_tick), or (None, None) when no neuron crosses
    within the frame.
    """
    if weights.ndim != 2 or weights.shape[0] != len(train.delays):
        raise ValueError(
            f"weights shape {weights.shape} does not match {len(train.delays)} inputs"
        )
    ktab = kernel_table(k, train.time_frame)
    winner, tick, ops = backend.wta_scan(
        _as_delay_array(train),
        np.ascontiguousarray(weights, dtype=np.float64),
        ktab,
        ifc.v_th,
    )
    if counters is not None:
        counters.weighting_ops += int(ops)
    if winner < 0:
        return None, None
    return int(winner), int(tick)


def save_weights(weights: np.ndarray, path) -> None:
    """Write the bit-exact text format: magic line, `M I`, then M rows of I
    shortest round-trip floats separated by single spaces, LF endings."""
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 2:
        raise WeightFormatError(f"weights must be 2-D, got shape {w.shape}")
    if not np.isfinite(w).all():
        raise WeightFormatError("weights contain NaN or infinity")
    rows, cols = w.shape
    lines = [WEIGHTS_MAGIC, f"{rows} {cols}"]
    for r in range(rows):
        lines.append(" ".join(repr(float(x)) for x in w[r]))
    with open(path, "w", newline="\n") as fp:
        fp.write("\n".join(lines) + "\n")


def load_weights(path) -> np.ndarray:
    with open(path, "r", newline="\n") as fp:
        text = fp.read()
    lines = text.split("\n")
    if not lines or lines[0] != WEIGHTS_MAGIC:
        raise WeightFormatError(f"{path}: missing '{WEIGHTS_MAGIC}' header")
    if len(lines) < 2:
        raise WeightFormatError(f"{path}: missing dimension line")
    dims = lines[1].split(" ")
    if len(dims) != 2:
        raise WeightFormatError(f"{path}: line 2 must be 'M I', got {lines[1]!r}")
    try:
        rows, cols = int(dims[0]), int(dims[1])
    except ValueError:
        raise WeightFormatError(f"{path}: non-integer dimensions {lines[1]!r}")
    if rows < 1 or cols < 1:
        raise WeightFormatError(f"{path}: dimensions must be positive, got {rows} {cols}")
    body = lines[2:]
    if body and body[-1] == "":
        body = body[:-1]  # trailing LF
    if len(body) != rows:
        raise WeightFormatError(
            f"{path}: expected {rows} weight rows, found {len(body)}"
        )
    w = np.empty((rows, cols), dtype=np.float64)
    for r, line in enumerate(body):
        fields = line.split(" ")
        if len(fields) != cols:
            raise WeightFormatError(
                f"{path}: line {r + 3}: expected {cols} values, found {len(fields)}"
            )
        try:
            w[r] = [float(f) for f in fields]
        except ValueError:
            raise WeightFormatError(f"{path}: line {r + 3}: unparsable float")
    if not np.isfinite(w).all():
        raise WeightFormatError(f"{path}: weights contain NaN or infinity")
    return w
