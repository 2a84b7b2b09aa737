"""Supervised single-spike learning with asymmetric participation.

For a target pattern with index p, outputs 0..p-1 must stay silent, output p
must fire, and higher outputs sit out (they neither constrain the image nor
get updated). A silent must-fire neuron or a firing must-not-fire neuron
yields an error anchored at the membrane's peak tick; every input spike
whose kernel value is still positive there receives a weight change
proportional to the threshold shortfall.
"""

from dataclasses import dataclass
from enum import Enum, auto
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import backend
from .codec import SpikeTrain, encode_with
from .kernels import KernelParams, kernel_table
from .metrics import OpCounters
from .network import IfcParams, NeuronTrace, trace

HUFFMAN = "huffman"
LITERAL = "literal"


class FiringStatus(Enum):
    MUST_FIRE = auto()
    MUST_NOT_FIRE = auto()
    INDEPENDENT = auto()


class ErrorKind(Enum):
    FALSE_FIRE = auto()
    FALSE_MISSING = auto()


@dataclass(frozen=True)
class DesiredPattern:
    """Per-output firing constraints for one target pattern."""

    statuses: tuple


@dataclass(frozen=True)
class ErrorRecord:
    """One detected output error: threshold shortfall and its anchor tick."""

    neuron: int
    err: float  # v_th - v_max; positive for a missing spike, negative for a false one
    t_fal: int
    kind: ErrorKind


@dataclass(frozen=True)
class LearningParams:
    lam: float  # learning rate
    epochs: int
    seed: int
    init_scale: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError(f"learning rate must be > 0, got {self.lam}")
        if self.init_scale <= 0:
            raise ValueError(f"init_scale must be > 0, got {self.init_scale}")
        if self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")


@dataclass
class EpochStats:
    images: int = 0
    false_fire: int = 0
    false_missing: int = 0
    updates: int = 0
    weighting_ops: int = 0
    train_acc: float = 0.0


@lru_cache(maxsize=256)
def _desired(pattern: int, n_outputs: int, rule: str) -> DesiredPattern:
    statuses = [FiringStatus.INDEPENDENT] * n_outputs
    if rule == HUFFMAN:
        for i in range(pattern):
            statuses[i] = FiringStatus.MUST_NOT_FIRE
    elif rule != LITERAL:
        raise ValueError(f"unknown participation rule {rule!r}")
    statuses[pattern] = FiringStatus.MUST_FIRE
    return DesiredPattern(statuses=tuple(statuses))


def desired_pattern(label: int, n_outputs: int, rule: str = HUFFMAN) -> DesiredPattern:
    """Constraints for the pattern whose prefix code is label zeros then a one.

    The huffman rule makes all earlier outputs must-not-fire so the first
    firing neuron identifies the pattern; the literal rule constrains only
    the pattern's own neuron.
    """
    if not 0 <= label < n_outputs:
        raise ValueError(f"label {label} outside [0, {n_outputs - 1}]")
    return _desired(label, n_outputs, rule)


def detect_errors(
    traces: Sequence[Optional[NeuronTrace]],
    desired: DesiredPattern,
    ifc: IfcParams,
) -> list[ErrorRecord]:
    """Compare traces against the desired pattern; independent outputs are
    never inspected (their trace entries may be None)."""
    records = []
    for i, status in enumerate(desired.statuses):
        if status is FiringStatus.INDEPENDENT:
            continue
        tr = traces[i]
        if status is FiringStatus.MUST_FIRE and not tr.fired:
            records.append(
                ErrorRecord(i, ifc.v_th - tr.v_max, tr.t_max, ErrorKind.FALSE_MISSING)
            )
        elif status is FiringStatus.MUST_NOT_FIRE and tr.fired:
            records.append(
                ErrorRecord(i, ifc.v_th - tr.v_max, tr.t_max, ErrorKind.FALSE_FIRE)
            )
    return records


def apply_update(
    weights: np.ndarray,
    train: SpikeTrain,
    rec: ErrorRecord,
    k: KernelParams,
    lp: LearningParams,
    counters: Optional[OpCounters] = None,
) -> int:
    """Apply lam * err * kernel(t_fal - t_c) to the erring neuron's column,
    in place, for every input spike with a positive kernel value at the
    anchor tick. Returns the number of weights touched."""
    if weights.dtype != np.float64:
        raise TypeError("weights must be float64 for in-place updates")
    if not 0 <= rec.neuron < weights.shape[1]:
        raise ValueError(f"record neuron {rec.neuron} outside weight matrix")
    ktab = kernel_table(k, train.time_frame)
    n = backend.update_scan(
        np.ascontiguousarray(train.delays, dtype=np.int64),
        weights,
        rec.neuron,
        rec.err,
        rec.t_fal,
        ktab,
        lp.lam,
    )
    if counters is not None:
        counters.weight_updates += int(n)
    return int(n)


def init_weights(n_inputs: int, n_outputs: int, lp: LearningParams) -> np.ndarray:
    """Uniform [0, init_scale] weights from a seeded PCG64 generator."""
    if n_inputs < 1 or n_outputs < 1:
        raise ValueError(f"need positive dims, got {n_inputs} x {n_outputs}")
    rng = np.random.default_rng(lp.seed)
    return rng.uniform(0.0, lp.init_scale, size=(n_inputs, n_outputs))


def train_epoch(
    weights: np.ndarray,
    dataset,
    enc,
    k: KernelParams,
    ifc: IfcParams,
    lp: LearningParams,
    counters: OpCounters,
    participation: str = HUFFMAN,
    pattern_of_label: Optional[Sequence[int]] = None,
) -> EpochStats:
    """One online pass over the dataset in presentation order.

    Per image: encode, evaluate full traces for participating outputs only,
    detect errors, and apply each update immediately in neuron-index order.
    An image counts as correct when no error is detected before updating.
    """
    n_outputs = weights.shape[1]
    ops_before = counters.weighting_ops
    stats = EpochStats()
    correct = 0
    for image, label in dataset:
        pattern = pattern_of_label[label] if pattern_of_label is not None else label
        train = encode_with(image, enc)
        if len(train.delays) != weights.shape[0]:
            raise ValueError(
                f"encoded train length {len(train.delays)} does not match "
                f"weight rows {weights.shape[0]}"
            )
        counters.images += 1
        counters.input_spikes += train.n_spikes
        desired = desired_pattern(pattern, n_outputs, participation)
        traces: list[Optional[NeuronTrace]] = [None] * n_outputs
        for i, status in enumerate(desired.statuses):
            if status is FiringStatus.INDEPENDENT:
                continue
            traces[i] = trace(train, weights[:, i], k, ifc, counters)
            if traces[i].fired:
                counters.output_spikes += 1
        records = detect_errors(traces, desired, ifc)
        for rec in records:
            if rec.kind is ErrorKind.FALSE_FIRE:
                counters.errors_false_fire += 1
                stats.false_fire += 1
            else:
                counters.errors_false_missing += 1
                stats.false_missing += 1
            stats.updates += apply_update(weights, train, rec, k, lp, counters)
        if not records:
            correct += 1
        stats.images += 1
    stats.weighting_ops = counters.weighting_ops - ops_before
    stats.train_acc = correct / stats.images if stats.images else 0.0
    return stats
