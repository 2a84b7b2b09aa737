import struct

import numpy as np
import pytest


def write_idx_images(path, images) -> None:
    """Serialize [N, rows, cols] uint8 into the IDX image container."""
    arr = np.asarray(images, dtype=np.uint8)
    n, rows, cols = arr.shape
    with open(path, "wb") as fp:
        fp.write(struct.pack(">IIII", 0x00000803, n, rows, cols))
        fp.write(arr.tobytes())


def write_idx_labels(path, labels) -> None:
    arr = np.asarray(labels, dtype=np.uint8)
    with open(path, "wb") as fp:
        fp.write(struct.pack(">II", 0x00000801, len(arr)))
        fp.write(arr.tobytes())


@pytest.fixture
def idx_writers():
    return write_idx_images, write_idx_labels


def linear_fn(tau):
    """Test-local kernel closure, independent of the library implementation."""

    def k(dt):
        if dt < 0:
            return 0.0
        return max(1.0 - tau * dt, 0.0)

    return k


def dual_exp_fn(tau1, tau2, mu):
    import math

    def k(dt):
        if dt < 0:
            return 0.0
        return mu * (math.exp(-dt / tau1) - math.exp(-dt / tau2))

    return k


def brute_membrane(delays, w, kern, t):
    """Independent evaluation of the weighted-kernel sum at one tick."""
    v = 0.0
    for m, d in enumerate(delays):
        if d < 0:
            continue
        v += float(w[m]) * kern(t - d)
    return v
