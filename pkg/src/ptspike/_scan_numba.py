"""Numba-compiled twins of the _scan_numpy hot loops.

Same contracts as _scan_numpy; sequential accumulation order, no fastmath,
so results stay reproducible run to run.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def trace_scan(delays, w_col, ktab, v_th):
    time_frame = ktab.shape[0]
    n_inputs = delays.shape[0]
    v_max = -np.inf
    t_max = 0
    t_fire = -1
    ops = 0
    for t in range(time_frame):
        acc = 0.0
        for m in range(n_inputs):
            d = delays[m]
            if d < 0:
                continue
            dt = t - d
            if dt < 0:
                continue
            kv = ktab[dt]
            if kv > 0.0:
                acc += w_col[m] * kv
                ops += 1
        if acc > v_max:
            v_max = acc
            t_max = t
        if t_fire < 0 and acc >= v_th:
            t_fire = t
    return v_max, t_max, t_fire, ops


@njit(cache=True)
def wta_scan(delays, weights, ktab, v_th):
    time_frame = ktab.shape[0]
    n_inputs = delays.shape[0]
    n_outputs = weights.shape[1]
    # contributing (input, kernel) terms flattened tick by tick; every
    # neuron reuses them, so they are gathered once
    contrib_m = np.empty(time_frame * n_inputs, dtype=np.int64)
    contrib_kv = np.empty(time_frame * n_inputs, dtype=np.float64)
    tick_end = np.empty(time_frame, dtype=np.int64)
    n_terms = 0
    for t in range(time_frame):
        for m in range(n_inputs):
            d = delays[m]
            if d < 0:
                continue
            dt = t - d
            if dt < 0:
                continue
            kv = ktab[dt]
            if kv > 0.0:
                contrib_m[n_terms] = m
                contrib_kv[n_terms] = kv
                n_terms += 1
        tick_end[t] = n_terms
    ops = 0
    for i in range(n_outputs):
        start = 0
        for t in range(time_frame):
            end = tick_end[t]
            acc = 0.0
            for j in range(start, end):
                acc += contrib_kv[j] * weights[contrib_m[j], i]
            start = end
            if acc >= v_th:
                ops += end  # terms through the crossing tick, inclusive
                return i, t, ops
        ops += n_terms
    return -1, -1, ops


@njit(cache=True)
def update_scan(delays, weights, col, err, t_fal, ktab, lam):
    n_inputs = delays.shape[0]
    n_updates = 0
    for m in range(n_inputs):
        d = delays[m]
        if d < 0:
            continue
        dt = t_fal - d
        if dt < 0:
            continue
        kv = ktab[dt]
        if kv > 0.0:
            weights[m, col] += lam * err * kv
            n_updates += 1
    return n_updates
