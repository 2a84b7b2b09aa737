import io
import math

import numpy as np
import pytest

from ptspike.codec import (
    ABSENT,
    EncodingError,
    derive_structure,
    encode,
    encode_per_pixel,
    encode_with,
    patch_starts,
    PerPixelConfig,
    write_spike_csv,
)


@pytest.mark.parametrize(
    "P,R,S,M,T",
    [
        (28, 16, 2, 169, 16),
        (28, 4, 2, 196, 4),
        (28, 25, 2, 144, 25),
        (28, 100, 2, 100, 100),
        (1, 1, 1, 1, 1),
    ],
)
def test_derive_structure_known_rows(P, R, S, M, T):
    cfg = derive_structure(P, R, S)
    assert cfg.neuron_count == M
    assert cfg.time_frame == T
    assert cfg.tau_min == 1


def test_derive_structure_errors_name_field():
    with pytest.raises(EncodingError, match="kernel_pixels"):
        derive_structure(28, 15, 2)  # not a perfect square
    with pytest.raises(EncodingError, match="kernel_pixels"):
        derive_structure(2, 9, 1)  # window wider than the image
    with pytest.raises(EncodingError, match="stride"):
        derive_structure(28, 16, 0)


def test_neuron_count_matches_patch_enumeration():
    # Independent oracle: enumerate starts with a while loop and count.
    rng = np.random.default_rng(7)
    for _ in range(200):
        P = int(rng.integers(1, 40))
        side = int(rng.integers(1, P + 1))
        S = int(rng.integers(1, 8))
        cfg = derive_structure(P, side * side, S)
        starts = []
        pos = 0
        while pos <= P - side:
            starts.append(pos)
            pos += S
        assert cfg.neuron_count == len(starts) ** 2
        assert patch_starts(cfg) == starts
        # clamped corners always fit inside the image
        assert all(s + side <= P for s in patch_starts(cfg))


def test_encode_all_zero_image_is_silent():
    cfg = derive_structure(28, 16, 2)
    train = encode(np.zeros((28, 28), dtype=np.uint8), cfg)
    assert len(train) == cfg.neuron_count
    assert np.all(train.delays == ABSENT)
    assert train.n_spikes == 0


def test_encode_saturated_image_spikes_at_frame_end():
    cfg = derive_structure(28, 16, 2)
    train = encode(np.full((28, 28), 255, dtype=np.uint8), cfg)
    assert np.all(train.delays == cfg.time_frame - 1)


def test_encode_half_intensity_patch():
    # One 4x4 window with mean 127.5 in a T=16 frame lands on tick 8.
    cfg = derive_structure(4, 16, 1)
    assert cfg.neuron_count == 1 and cfg.time_frame == 16
    image = np.zeros((4, 4), dtype=np.uint8)
    image[:2] = 255  # mean 127.5
    train = encode(image, cfg)
    assert train.delays.tolist() == [8]


def test_encode_deterministic():
    cfg = derive_structure(28, 16, 2)
    rng = np.random.default_rng(3)
    image = rng.integers(0, 256, size=(28, 28), dtype=np.uint8)
    a = encode(image, cfg)
    b = encode(image, cfg)
    assert np.array_equal(a.delays, b.delays)
    assert a.time_frame == b.time_frame


def test_encode_monotone_in_intensity():
    cfg = derive_structure(12, 9, 3)
    rng = np.random.default_rng(11)
    for _ in range(50):
        lo = rng.integers(0, 200, size=(12, 12)).astype(np.uint8)
        hi = np.minimum(lo.astype(np.int64) + rng.integers(0, 56, size=lo.shape), 255)
        hi = hi.astype(np.uint8)
        d_lo = encode(lo, cfg).delays
        d_hi = encode(hi, cfg).delays
        both = (d_lo != ABSENT) & (d_hi != ABSENT)
        assert np.all(d_hi[both] >= d_lo[both])
        # raising pixels can only create spikes, never remove them
        assert np.all(d_hi[d_lo != ABSENT] != ABSENT)


def test_encode_delays_in_frame():
    rng = np.random.default_rng(5)
    for R in (4, 16, 25):
        cfg = derive_structure(28, R, 2)
        image = rng.integers(0, 256, size=(28, 28), dtype=np.uint8)
        train = encode(image, cfg)
        train.validate()
        present = train.delays[train.delays != ABSENT]
        assert present.min() >= 0
        assert present.max() <= cfg.time_frame - 1


def test_encode_rejects_wrong_shape():
    cfg = derive_structure(28, 16, 2)
    with pytest.raises(EncodingError, match="shape"):
        encode(np.zeros((27, 28), dtype=np.uint8), cfg)


def test_per_pixel_length_and_mapping():
    image = np.zeros((28, 28), dtype=np.uint8)
    train = encode_per_pixel(image, 256)
    assert len(train) == 784
    assert np.all(train.delays == ABSENT)

    uniform = np.full((28, 28), 128, dtype=np.uint8)
    train = encode_per_pixel(uniform, 256)
    assert np.all(train.delays == 128)


def test_per_pixel_matches_windowed_single_pixel():
    # A 1-pixel window encoder must agree with the per-pixel baseline.
    rng = np.random.default_rng(9)
    image = rng.integers(0, 256, size=(6, 6), dtype=np.uint8)
    cfg = derive_structure(6, 1, 1)
    assert cfg.neuron_count == 36
    a = encode(image, cfg)
    b = encode_per_pixel(image, cfg.time_frame)
    assert np.array_equal(a.delays, b.delays)


def test_encode_with_dispatch():
    image = np.full((4, 4), 255, dtype=np.uint8)
    cfg = derive_structure(4, 4, 2)
    assert np.array_equal(encode_with(image, cfg).delays, encode(image, cfg).delays)
    pp = PerPixelConfig(image_width=4, time_frame=256)
    assert np.array_equal(
        encode_with(image, pp).delays, encode_per_pixel(image, 256).delays
    )
    with pytest.raises(EncodingError):
        encode_with(np.zeros((5, 5), dtype=np.uint8), pp)


def test_spike_csv_format():
    cfg = derive_structure(4, 4, 2)
    image = np.zeros((4, 4), dtype=np.uint8)
    image[0, 0] = 255  # only the first window sees intensity
    train = encode(image, cfg)
    buf = io.StringIO()
    write_spike_csv(train, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "neuron,delay"
    assert len(lines) == 1 + cfg.neuron_count
    assert lines[1] == f"0,{train.delays[0]}"
    for m in range(1, cfg.neuron_count):
        if train.delays[m] == ABSENT:
            assert lines[1 + m] == f"{m},"


def test_rounding_half_up_vs_nearest():
    # An exact .5 product rounds away from zero: mean 127.5 over T=16 gives
    # 0.5 * 15 = 7.5 -> tick 8 (covered above). Below .5 stays down:
    # 127/255 * 1 ~ 0.498 -> tick 0, not ABSENT.
    t2 = encode_per_pixel(np.full((2, 2), 127, dtype=np.uint8), 2)
    assert np.all(t2.delays == 0)
    # and a barely-above-half case rounds up
    t3 = encode_per_pixel(np.full((2, 2), 128, dtype=np.uint8), 2)
    assert np.all(t3.delays == 1)
