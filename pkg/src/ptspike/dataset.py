"""IDX container parsing and deterministic subset selection.

Raw (non-gzipped) IDX files only: big-endian magic, count header, then
unsigned bytes. Errors carry the byte offset of the problem. 28 x 28 images
are enforced since the classifier's geometry assumes them.
"""

from dataclasses import dataclass
import struct
from typing import Optional

import numpy as np

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801
IMAGE_SIDE = 28


class IdxFormatError(ValueError):
    """Malformed IDX file; message includes the byte offset."""


@dataclass(frozen=True)
class LabeledImage:
    pixels: np.ndarray  # 28 x 28 uint8
    label: int


@dataclass(frozen=True)
class Dataset:
    """Positionally paired images and labels."""

    images: np.ndarray  # [N, 28, 28] uint8
    labels: np.ndarray  # [N] uint8

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, i: int) -> LabeledImage:
        return LabeledImage(self.images[i], int(self.labels[i]))

    def __iter__(self):
        for i in range(len(self.labels)):
            yield self.images[i], int(self.labels[i])


def _read_be32(data: bytes, offset: int, path, what: str) -> int:
    if len(data) < offset + 4:
        raise IdxFormatError(
            f"{path}: truncated {what} at byte {offset} (file is {len(data)} bytes)"
        )
    return struct.unpack_from(">I", data, offset)[0]


def load_idx_images(path) -> np.ndarray:
    """Parse an IDX image file into a [N, 28, 28] uint8 array."""
    with open(path, "rb") as fp:
        data = fp.read()
    magic = _read_be32(data, 0, path, "magic")
    if magic != IMAGE_MAGIC:
        raise IdxFormatError(
            f"{path}: bad image magic 0x{magic:08x} at byte 0, expected 0x{IMAGE_MAGIC:08x}"
        )
    count = _read_be32(data, 4, path, "count")
    rows = _read_be32(data, 8, path, "rows")
    cols = _read_be32(data, 12, path, "cols")
    if rows != IMAGE_SIDE or cols != IMAGE_SIDE:
        raise IdxFormatError(
            f"{path}: expected {IMAGE_SIDE}x{IMAGE_SIDE} images, header at byte 8 says {rows}x{cols}"
        )
    expected = 16 + count * rows * cols
    if len(data) != expected:
        raise IdxFormatError(
            f"{path}: header promises {count} images ({expected} bytes), "
            f"file has {len(data)} bytes (mismatch at byte {min(len(data), expected)})"
        )
    pixels = np.frombuffer(data, dtype=np.uint8, offset=16)
    return pixels.reshape(count, rows, cols).copy()


def load_idx_labels(path) -> np.ndarray:
    """Parse an IDX label file into a [N] uint8 array of digits 0-9."""
    with open(path, "rb") as fp:
        data = fp.read()
    magic = _read_be32(data, 0, path, "magic")
    if magic != LABEL_MAGIC:
        raise IdxFormatError(
            f"{path}: bad label magic 0x{magic:08x} at byte 0, expected 0x{LABEL_MAGIC:08x}"
        )
    count = _read_be32(data, 4, path, "count")
    expected = 8 + count
    if len(data) != expected:
        raise IdxFormatError(
            f"{path}: header promises {count} labels ({expected} bytes), "
            f"file has {len(data)} bytes (mismatch at byte {min(len(data), expected)})"
        )
    labels = np.frombuffer(data, dtype=np.uint8, offset=8).copy()
    bad = np.nonzero(labels > 9)[0]
    if bad.size:
        raise IdxFormatError(
            f"{path}: label {labels[bad[0]]} at byte {8 + int(bad[0])} outside 0-9"
        )
    return labels


def pair(images: np.ndarray, labels: np.ndarray) -> Dataset:
    """Zip image and label arrays, validating equal length."""
    if len(images) != len(labels):
        raise IdxFormatError(
            f"image/label count mismatch: {len(images)} images vs {len(labels)} labels"
        )
    return Dataset(images=images, labels=labels)


def take_subset(data: Dataset, n: int, shuffle_seed: Optional[int] = None) -> Dataset:
    """First n items in file order, or after a seeded Fisher-Yates shuffle."""
    if not 0 <= n <= len(data):
        raise ValueError(f"subset size {n} outside [0, {len(data)}]")
    if shuffle_seed is None:
        return Dataset(images=data.images[:n], labels=data.labels[:n])
    order = np.random.default_rng(shuffle_seed).permutation(len(data))[:n]
    return Dataset(images=data.images[order], labels=data.labels[order])
