"""Vectorized numpy implementations of the hot membrane scans.

Reference semantics for the numba twins in _scan_numba: identical op
counting, tie-breaking, and early-exit behavior. Delay arrays are int64
with -1 marking a silent neuron; kernel lookup tables cover dt in [0, T-1].
"""

import numpy as np


def trace_scan(delays, w_col, ktab, v_th):
    """Full-frame membrane scan of one output neuron.

    Returns (v_max, t_max, t_fire, ops): peak voltage, earliest peak tick,
    earliest threshold crossing (-1 if none), and the number of weighting
    operations (present-spike terms with positive kernel value).
    """
    time_frame = ktab.shape[0]
    dt = np.arange(time_frame, dtype=np.int64)[:, None] - delays[None, :]
    valid = (delays >= 0)[None, :] & (dt >= 0)
    kv = np.zeros(dt.shape, dtype=np.float64)
    kv[valid] = ktab[dt[valid]]
    v = kv @ w_col
    ops = int(np.count_nonzero(kv > 0))
    t_max = int(np.argmax(v))
    v_max = float(v[t_max])
    crossed = np.nonzero(v >= v_th)[0]
    t_fire = int(crossed[0]) if crossed.size else -1
    return v_max, t_max, t_fire, ops


def wta_scan(delays, weights, ktab, v_th):
    """Scan output neurons in index order, each tick by tick, cutting at the
    first spike.

    Neuron i integrates from tick 0 until it crosses v_th (the decision) or
    the frame ends (move on to neuron i+1). Once a neuron fires, all later
    neurons are never evaluated. Weighting ops are charged once per
    (contributing input, evaluated tick) pair, per neuron, up to and
    including its crossing tick. Returns (winner, tick, ops) with -1
    sentinels when nothing fires.
    """
    time_frame = ktab.shape[0]
    dt = np.arange(time_frame, dtype=np.int64)[:, None] - delays[None, :]
    valid = (delays >= 0)[None, :] & (dt >= 0)
    kv = np.zeros(dt.shape, dtype=np.float64)
    kv[valid] = ktab[dt[valid]]
    terms_per_tick = np.count_nonzero(kv > 0, axis=1)
    cum_terms = np.cumsum(terms_per_tick)
    total_terms = int(cum_terms[-1]) if time_frame else 0
    ops = 0
    for i in range(weights.shape[1]):
        v = kv @ weights[:, i]
        crossed = np.nonzero(v >= v_th)[0]
        if crossed.size:
            tick = int(crossed[0])
            ops += int(cum_terms[tick])
            return i, tick, ops
        ops += total_terms
    return -1, -1, ops


def update_scan(delays, weights, col, err, t_fal, ktab, lam):
    """Add lam * err * kernel(t_fal - t_c) to column col for every input
    whose spike causally contributed before t_fal. Returns the update count."""
    dt = t_fal - delays
    mask = (delays >= 0) & (dt >= 0)
    kv = np.zeros(delays.shape, dtype=np.float64)
    kv[mask] = ktab[dt[mask]]
    touched = kv > 0
    weights[touched, col] += lam * err * kv[touched]
    return int(np.count_nonzero(touched))
