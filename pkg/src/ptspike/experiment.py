"""Run orchestration: seeded training over epochs and batch evaluation,
with the CSV renderings the CLI writes to disk.

Evaluation has two modes. fire_and_cut stops each image at its first output
spike; full_trace integrates every neuron over the whole frame and reads the
earliest crossing off the traces. Both decide identically; they differ only
in how much weighting work they record. The no-fire fallback re-derives the
membrane peaks the scan already visited, so that re-computation is not
charged to the weighting counter.
"""

from dataclasses import dataclass

import numpy as np

from .codec import encode_with
from .config import ResolvedRun, RunConfig, resolve
from .dataset import Dataset, take_subset
from .decoding import Decision, decode
from .metrics import OpCounters
from .network import fire_and_cut, trace
from .plasticity import EpochStats, init_weights, train_epoch

FIRE_AND_CUT = "fire_and_cut"
FULL_TRACE = "full_trace"

EPOCH_CSV_HEADER = "epoch,images,false_fire,false_missing,updates,weighting_ops,train_acc"
EVAL_CSV_HEADER = "index,true_label,pred_label,decision_tick,fallback"


@dataclass
class TrainResult:
    weights: np.ndarray
    epoch_stats: list
    counters: OpCounters
    run: ResolvedRun


@dataclass
class EvalRow:
    index: int
    true_label: int
    pred_label: int
    decision_tick: object  # int or None
    fallback: bool


@dataclass
class EvalResult:
    accuracy: float
    fallback_rate: float
    rows: list
    counters: OpCounters
    run: ResolvedRun


def run_train(cfg: RunConfig, data: Dataset) -> TrainResult:
    run = resolve(cfg)
    n = cfg.train_n if cfg.train_n else len(data)
    subset = take_subset(data, n)
    weights = init_weights(run.n_inputs, cfg.outputs, run.learning)
    counters = OpCounters()
    stats = []
    for _ in range(cfg.epochs):
        stats.append(
            train_epoch(
                weights,
                subset,
                run.enc,
                run.kernel,
                run.ifc,
                run.learning,
                counters,
                participation=cfg.participation,
            )
        )
    return TrainResult(weights=weights, epoch_stats=stats, counters=counters, run=run)


def _first_crossing(traces):
    # first neuron in scan order with any crossing; its earliest crossing tick
    for i, tr in enumerate(traces):
        if tr.t_fire is not None:
            return i, tr.t_fire
    return None, None


def run_eval(
    cfg: RunConfig,
    weights: np.ndarray,
    data: Dataset,
    mode: str = FIRE_AND_CUT,
) -> EvalResult:
    if mode not in (FIRE_AND_CUT, FULL_TRACE):
        raise ValueError(f"unknown eval mode {mode!r}")
    run = resolve(cfg)
    if weights.shape != (run.n_inputs, cfg.outputs):
        raise ValueError(
            f"weights shape {weights.shape} does not match configured "
            f"({run.n_inputs}, {cfg.outputs})"
        )
    n = cfg.test_n if cfg.test_n else len(data)
    subset = take_subset(data, n)
    counters = OpCounters()
    rows = []
    correct = 0
    fallbacks = 0
    for idx, (image, label) in enumerate(subset):
        train = encode_with(image, run.enc)
        counters.images += 1
        counters.input_spikes += train.n_spikes
        if mode == FIRE_AND_CUT:
            winner, tick = fire_and_cut(train, weights, run.kernel, run.ifc, counters)
            vmax_fn = lambda: np.array(
                [
                    trace(train, weights[:, i], run.kernel, run.ifc).v_max
                    for i in range(cfg.outputs)
                ]
            )
            decision = decode(winner, tick, vmax_fn)
        else:
            traces = [
                trace(train, weights[:, i], run.kernel, run.ifc, counters)
                for i in range(cfg.outputs)
            ]
            winner, tick = _first_crossing(traces)
            decision = decode(winner, tick, lambda: np.array([tr.v_max for tr in traces]))
        if winner is not None:
            counters.output_spikes += 1
        if decision.fallback_used:
            fallbacks += 1
        if decision.label == label:
            correct += 1
        rows.append(
            EvalRow(
                index=idx,
                true_label=label,
                pred_label=decision.label,
                decision_tick=decision.decision_tick,
                fallback=decision.fallback_used,
            )
        )
    n_images = len(subset)
    return EvalResult(
        accuracy=correct / n_images if n_images else 0.0,
        fallback_rate=fallbacks / n_images if n_images else 0.0,
        rows=rows,
        counters=counters,
        run=run,
    )


def epoch_csv(stats: list) -> str:
    lines = [EPOCH_CSV_HEADER]
    for e, s in enumerate(stats):
        lines.append(
            f"{e},{s.images},{s.false_fire},{s.false_missing},"
            f"{s.updates},{s.weighting_ops},{s.train_acc!r}"
        )
    return "\n".join(lines) + "\n"


def eval_csv(rows: list) -> str:
    lines = [EVAL_CSV_HEADER]
    for r in rows:
        tick = "" if r.decision_tick is None else r.decision_tick
        lines.append(
            f"{r.index},{r.true_label},{r.pred_label},{tick},{int(r.fallback)}"
        )
    return "\n".join(lines) + "\n"
