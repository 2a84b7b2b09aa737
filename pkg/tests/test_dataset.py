import struct

import numpy as np
import pytest

from ptspike.dataset import (
    IdxFormatError,
    load_idx_images,
    load_idx_labels,
    pair,
    take_subset,
)


def test_round_trip_two_image_fixture(tmp_path, idx_writers):
    write_images, write_labels = idx_writers
    rng = np.random.default_rng(0)
    images = rng.integers(0, 256, size=(2, 28, 28)).astype(np.uint8)
    labels = np.array([3, 7], dtype=np.uint8)
    ipath, lpath = tmp_path / "img.idx", tmp_path / "lab.idx"
    write_images(ipath, images)
    write_labels(lpath, labels)
    assert np.array_equal(load_idx_images(ipath), images)
    assert np.array_equal(load_idx_labels(lpath), labels)


def test_empty_file_errors_at_offset_zero(tmp_path):
    path = tmp_path / "empty.idx"
    path.write_bytes(b"")
    with pytest.raises(IdxFormatError, match="byte 0"):
        load_idx_images(path)
    with pytest.raises(IdxFormatError, match="byte 0"):
        load_idx_labels(path)


def test_bad_magic(tmp_path):
    path = tmp_path / "bad.idx"
    path.write_bytes(struct.pack(">IIII", 0xDEADBEEF, 1, 28, 28) + bytes(784))
    with pytest.raises(IdxFormatError, match="magic"):
        load_idx_images(path)
    with pytest.raises(IdxFormatError, match="magic"):
        load_idx_labels(path)


def test_truncated_pixels(tmp_path):
    path = tmp_path / "short.idx"
    path.write_bytes(struct.pack(">IIII", 0x803, 2, 28, 28) + bytes(784))  # one image short
    with pytest.raises(IdxFormatError, match="1584"):
        load_idx_images(path)


def test_trailing_bytes_rejected(tmp_path, idx_writers):
    write_images, _ = idx_writers
    path = tmp_path / "img.idx"
    write_images(path, np.zeros((1, 28, 28), dtype=np.uint8))
    with open(path, "ab") as fp:
        fp.write(b"\x00")
    with pytest.raises(IdxFormatError):
        load_idx_images(path)


def test_wrong_geometry_rejected(tmp_path):
    path = tmp_path / "odd.idx"
    path.write_bytes(struct.pack(">IIII", 0x803, 1, 27, 28) + bytes(27 * 28))
    with pytest.raises(IdxFormatError, match="27x28"):
        load_idx_images(path)


def test_out_of_range_label(tmp_path):
    path = tmp_path / "lab.idx"
    path.write_bytes(struct.pack(">II", 0x801, 3) + bytes([1, 12, 3]))
    with pytest.raises(IdxFormatError, match="12"):
        load_idx_labels(path)


def test_pair_validates_lengths():
    images = np.zeros((3, 28, 28), dtype=np.uint8)
    labels = np.zeros(2, dtype=np.uint8)
    with pytest.raises(IdxFormatError, match="mismatch"):
        pair(images, labels)
    data = pair(images, np.zeros(3, dtype=np.uint8))
    assert len(data) == 3
    item = data[1]
    assert item.pixels.shape == (28, 28)
    assert item.label == 0


def test_take_subset_file_order_and_shuffle():
    images = np.arange(10 * 28 * 28, dtype=np.uint8).reshape(10, 28, 28)
    labels = np.arange(10, dtype=np.uint8) % 10
    data = pair(images, labels)

    assert len(take_subset(data, 0)) == 0
    full = take_subset(data, 10)
    assert np.array_equal(full.images, images)

    first3 = take_subset(data, 3)
    assert np.array_equal(first3.labels, labels[:3])

    s1 = take_subset(data, 10, shuffle_seed=99)
    s2 = take_subset(data, 10, shuffle_seed=99)
    assert np.array_equal(s1.labels, s2.labels)
    assert np.array_equal(s1.images, s2.images)
    assert sorted(s1.labels.tolist()) == sorted(labels.tolist())

    with pytest.raises(ValueError):
        take_subset(data, 11)
