"""Temporal encoding: image patches to single-spike delays.

A square patch window of R pixels slides over the image with stride S; each
window position becomes one input neuron whose spike delay is the window's
mean intensity mapped onto the coding frame. Zero-intensity windows stay
silent. A one-to-one per-pixel encoder is kept as a baseline.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

ABSENT = -1  # delay sentinel for a neuron that emits no spike


class EncodingError(ValueError):
    """Invalid encoder geometry or input dimensions."""


@dataclass(frozen=True)
class EncoderConfig:
    """Geometry of the sliding-window encoder.

    image_width:  P, pixels per image side
    kernel_pixels: R, pixels covered by the window (perfect square)
    stride:       S, window step in pixels
    tau_min:      tick length in ms (fixed at 1)
    neuron_count: M, derived number of input neurons
    time_frame:   T, derived number of ticks in the coding frame
    """

    image_width: int
    kernel_pixels: int
    stride: int
    tau_min: int
    neuron_count: int
    time_frame: int

    @property
    def kernel_side(self) -> int:
        return math.isqrt(self.kernel_pixels)


@dataclass(frozen=True)
class PerPixelConfig:
    """Geometry of the one-to-one baseline encoder: one neuron per pixel."""

    image_width: int
    time_frame: int

    @property
    def neuron_count(self) -> int:
        return self.image_width * self.image_width


@dataclass
class SpikeTrain:
    """Single-spike temporal code for one image.

    delays[m] is the spike delay of input neuron m in ticks, or ABSENT.
    """

    delays: np.ndarray  # int64, length M
    time_frame: int

    def __len__(self) -> int:
        return len(self.delays)

    @property
    def n_spikes(self) -> int:
        return int(np.count_nonzero(self.delays != ABSENT))

    def validate(self) -> None:
        present = self.delays[self.delays != ABSENT]
        if present.size and (present.min() < 0 or present.max() > self.time_frame - 1):
            raise EncodingError("spike delay outside [0, T-1]")


def derive_structure(image_width: int, kernel_pixels: int, stride: int) -> EncoderConfig:
    """Compute neuron count and time frame from the encoder geometry.

    M = ceil((P - sqrt(R) + 1) / S) squared, T = R ticks (1 ms tick).
    """
    side = math.isqrt(kernel_pixels)
    if kernel_pixels < 1 or side * side != kernel_pixels:
        raise EncodingError(
            f"kernel_pixels must be a perfect square, got {kernel_pixels}"
        )
    if side > image_width:
        raise EncodingError(
            f"kernel_pixels {kernel_pixels} exceeds image: window side {side} > width {image_width}"
        )
    if stride < 1:
        raise EncodingError(f"stride must be >= 1, got {stride}")
    per_axis = math.ceil((image_width - side + 1) / stride)
    return EncoderConfig(
        image_width=image_width,
        kernel_pixels=kernel_pixels,
        stride=stride,
        tau_min=1,
        neuron_count=per_axis * per_axis,
        time_frame=kernel_pixels,
    )


def patch_starts(cfg: EncoderConfig) -> list[int]:
    """Top-left corner positions along one axis, clamped to the image border."""
    side = cfg.kernel_side
    per_axis = math.ceil((cfg.image_width - side + 1) / cfg.stride)
    last = cfg.image_width - side
    return [min(i * cfg.stride, last) for i in range(per_axis)]


@lru_cache(maxsize=32)
def _patch_pixel_indices(image_width: int, kernel_pixels: int, stride: int) -> np.ndarray:
    """Flat pixel indices of every window, row-major by window corner. [M, R]"""
    cfg = derive_structure(image_width, kernel_pixels, stride)
    side = cfg.kernel_side
    starts = patch_starts(cfg)
    block = (
        np.arange(side)[:, None] * image_width + np.arange(side)[None, :]
    ).ravel()
    corners = np.array(
        [r * image_width + c for r in starts for c in starts], dtype=np.int64
    )
    idx = corners[:, None] + block[None, :]
    idx.setflags(write=False)
    return idx


def _delays_from_intensity(mean_intensity: np.ndarray, time_frame: int) -> np.ndarray:
    # a = 0 stays silent; otherwise t_s = round(a * (T-1)), half away from zero
    a = mean_intensity / 255.0
    delays = np.floor(a * (time_frame - 1) + 0.5).astype(np.int64)
    delays[mean_intensity == 0] = ABSENT
    return delays


def encode(image: np.ndarray, cfg: EncoderConfig) -> SpikeTrain:
    """Encode a P x P grayscale image into one spike delay per window.

    Windows are enumerated row-major by top-left corner stepping by the
    stride; the delay is round(mean(pixels)/255 * (T-1)) ticks, with
    all-zero windows marked ABSENT.
    """
    image = np.asarray(image)
    if image.shape != (cfg.image_width, cfg.image_width):
        raise EncodingError(
            f"image shape {image.shape} does not match config "
            f"({cfg.image_width}, {cfg.image_width})"
        )
    idx = _patch_pixel_indices(cfg.image_width, cfg.kernel_pixels, cfg.stride)
    means = image.ravel().astype(np.float64)[idx].mean(axis=1)
    return SpikeTrain(_delays_from_intensity(means, cfg.time_frame), cfg.time_frame)


def encode_per_pixel(image: np.ndarray, time_frame: int) -> SpikeTrain:
    """One-to-one baseline: every pixel drives its own neuron."""
    if time_frame < 1:
        raise EncodingError(f"time_frame must be >= 1, got {time_frame}")
    image = np.asarray(image)
    if image.ndim != 2 or image.shape[0] != image.shape[1]:
        raise EncodingError(f"expected a square image, got shape {image.shape}")
    values = image.ravel().astype(np.float64)
    return SpikeTrain(_delays_from_intensity(values, time_frame), time_frame)


def encode_with(image: np.ndarray, enc: "EncoderConfig | PerPixelConfig") -> SpikeTrain:
    """Dispatch to the window encoder or the per-pixel baseline."""
    if isinstance(enc, EncoderConfig):
        return encode(image, enc)
    if isinstance(enc, PerPixelConfig):
        if image.shape != (enc.image_width, enc.image_width):
            raise EncodingError(
                f"image shape {image.shape} does not match config "
                f"({enc.image_width}, {enc.image_width})"
            )
        return encode_per_pixel(image, enc.time_frame)
    raise TypeError(f"unsupported encoder config: {type(enc).__name__}")


def write_spike_csv(train: SpikeTrain, fp) -> None:
    """Write `neuron,delay` rows; ABSENT becomes an empty delay field."""
    fp.write("neuron,delay\n")
    for m, d in enumerate(train.delays):
        fp.write(f"{m},{d}\n" if d != ABSENT else f"{m},\n")
