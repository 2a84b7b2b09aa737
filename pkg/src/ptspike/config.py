"""Run configuration: defaults, file parsing, and resolution into the
structures the pipeline consumes.

Config files are line-based `key = value` with `#` comments. Flags override
the file, the file overrides defaults. Unknown keys are rejected; duplicate
keys warn and keep the last value.
"""

from dataclasses import dataclass, replace
import sys
from typing import Optional, Union

from .codec import EncoderConfig, PerPixelConfig, derive_structure
from .kernels import KernelParams, dual_exp_kernel, linear_kernel, LINEAR, DUAL_EXP
from .network import IfcParams
from .plasticity import LearningParams, HUFFMAN, LITERAL

PER_PIXEL_TIME_FRAME = 256  # one tick per 8-bit intensity level

KERNEL_ENCODER = "kernel"
PER_PIXEL_ENCODER = "per_pixel"


class ConfigError(ValueError):
    """Bad config key, value, or invariant; message names the key."""


@dataclass(frozen=True)
class RunConfig:
    image_width: int = 28       # P
    kernel_pixels: int = 16     # R
    stride: int = 2             # S
    kernel: str = LINEAR
    tau: Optional[float] = None   # default 1/T once T is known
    tau1: Optional[float] = None  # default T: slow decay spanning the frame,
    tau2: Optional[float] = None  # default T/16: fast rise; shaped to track
    #                               the linear kernel it stands in for
    v_th: float = 1.0
    lam: float = 0.05           # key "lambda"
    epochs: int = 20
    seed: int = 42
    outputs: int = 10           # key "I"
    participation: str = HUFFMAN
    encoder: str = KERNEL_ENCODER
    train_n: int = 0            # 0 means the whole file
    test_n: int = 0
    alpha: float = 1.0
    multipliers: int = 4


# file key -> (field, parser)
_KEYS = {
    "P": ("image_width", int),
    "R": ("kernel_pixels", int),
    "S": ("stride", int),
    "kernel": ("kernel", str),
    "tau": ("tau", float),
    "tau1": ("tau1", float),
    "tau2": ("tau2", float),
    "v_th": ("v_th", float),
    "lambda": ("lam", float),
    "epochs": ("epochs", int),
    "seed": ("seed", int),
    "I": ("outputs", int),
    "participation": ("participation", str),
    "encoder": ("encoder", str),
    "train_n": ("train_n", int),
    "test_n": ("test_n", int),
    "alpha": ("alpha", float),
    "multipliers": ("multipliers", int),
}

_FIELD_TO_KEY = {field: key for key, (field, _) in _KEYS.items()}


def _check(cfg: RunConfig, where: str) -> None:
    def fail(key, msg):
        raise ConfigError(f"{where}: key '{key}': {msg}")

    if cfg.image_width < 1:
        fail("P", f"must be >= 1, got {cfg.image_width}")
    if cfg.kernel_pixels < 1:
        fail("R", f"must be >= 1, got {cfg.kernel_pixels}")
    if cfg.stride < 1:
        fail("S", f"must be >= 1, got {cfg.stride}")
    if cfg.kernel not in (LINEAR, DUAL_EXP):
        fail("kernel", f"must be '{LINEAR}' or '{DUAL_EXP}', got {cfg.kernel!r}")
    if cfg.tau is not None and cfg.tau <= 0:
        fail("tau", f"must be > 0, got {cfg.tau}")
    if cfg.tau1 is not None and cfg.tau1 <= 0:
        fail("tau1", f"must be > 0, got {cfg.tau1}")
    if cfg.tau2 is not None and cfg.tau2 <= 0:
        fail("tau2", f"must be > 0, got {cfg.tau2}")
    if cfg.v_th <= 0:
        fail("v_th", f"must be > 0, got {cfg.v_th}")
    if cfg.lam <= 0:
        fail("lambda", f"must be > 0, got {cfg.lam}")
    if cfg.epochs < 0:
        fail("epochs", f"must be >= 0, got {cfg.epochs}")
    if cfg.outputs < 1:
        fail("I", f"must be >= 1, got {cfg.outputs}")
    if cfg.participation not in (HUFFMAN, LITERAL):
        fail("participation", f"must be '{HUFFMAN}' or '{LITERAL}', got {cfg.participation!r}")
    if cfg.encoder not in (KERNEL_ENCODER, PER_PIXEL_ENCODER):
        fail("encoder", f"must be '{KERNEL_ENCODER}' or '{PER_PIXEL_ENCODER}', got {cfg.encoder!r}")
    if cfg.train_n < 0:
        fail("train_n", f"must be >= 0, got {cfg.train_n}")
    if cfg.test_n < 0:
        fail("test_n", f"must be >= 0, got {cfg.test_n}")
    if cfg.alpha <= 0:
        fail("alpha", f"must be > 0, got {cfg.alpha}")
    if cfg.multipliers < 1:
        fail("multipliers", f"must be >= 1, got {cfg.multipliers}")


def _apply(cfg: RunConfig, key: str, raw: str, where: str) -> RunConfig:
    if key not in _KEYS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    field, parser = _KEYS[key]
    try:
        value = parser(raw)
    except ValueError:
        raise ConfigError(f"{where}: key '{key}': unparsable value {raw!r}")
    return replace(cfg, **{field: value})


def parse_config(path=None, overrides=(), warn=None) -> RunConfig:
    """Build a RunConfig from defaults, an optional file, and `key=value`
    override strings (in that precedence order)."""
    if warn is None:
        warn = lambda msg: print(f"warning: {msg}", file=sys.stderr)
    cfg = RunConfig()
    seen = {}
    if path is not None:
        with open(path) as fp:
            for lineno, line in enumerate(fp, start=1):
                text = line.split("#", 1)[0].strip()
                if not text:
                    continue
                if "=" not in text:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line.strip()!r}")
                key, raw = (part.strip() for part in text.split("=", 1))
                where = f"{path}:{lineno}"
                if key in seen:
                    warn(f"{where}: duplicate key '{key}' overrides line {seen[key]}")
                seen[key] = lineno
                cfg = _apply(cfg, key, raw, where)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set {item!r}: expected key=value")
        key, raw = (part.strip() for part in item.split("=", 1))
        cfg = _apply(cfg, key, raw, f"--set {item}")
    _check(cfg, path if path is not None else "config")
    return cfg


@dataclass(frozen=True)
class ResolvedRun:
    """Everything a run needs, with frame-dependent defaults filled in."""

    cfg: RunConfig
    enc: Union[EncoderConfig, PerPixelConfig]
    kernel: KernelParams
    ifc: IfcParams
    learning: LearningParams

    @property
    def n_inputs(self) -> int:
        return self.enc.neuron_count

    @property
    def time_frame(self) -> int:
        return self.enc.time_frame


def resolve(cfg: RunConfig) -> ResolvedRun:
    if cfg.encoder == PER_PIXEL_ENCODER:
        enc = PerPixelConfig(image_width=cfg.image_width, time_frame=PER_PIXEL_TIME_FRAME)
    else:
        enc = derive_structure(cfg.image_width, cfg.kernel_pixels, cfg.stride)
    T = enc.time_frame
    if cfg.kernel == LINEAR:
        kern = linear_kernel(cfg.tau if cfg.tau is not None else 1.0 / T)
    else:
        tau1 = cfg.tau1 if cfg.tau1 is not None else float(T)
        tau2 = cfg.tau2 if cfg.tau2 is not None else T / 16.0
        kern = dual_exp_kernel(tau1, tau2, T)
    ifc = IfcParams(v_th=cfg.v_th)
    lp = LearningParams(
        lam=cfg.lam,
        epochs=cfg.epochs,
        seed=cfg.seed,
        init_scale=2.0 * cfg.v_th / enc.neuron_count,
    )
    return ResolvedRun(cfg=cfg, enc=enc, kernel=kern, ifc=ifc, learning=lp)


def render_config(run: ResolvedRun) -> str:
    """The fully resolved configuration, one `key = value` line per key."""
    cfg = run.cfg
    values = {
        "P": cfg.image_width,
        "R": cfg.kernel_pixels,
        "S": cfg.stride,
        "kernel": cfg.kernel,
        "tau": run.kernel.tau if run.kernel.kind == LINEAR else (cfg.tau if cfg.tau is not None else ""),
        "tau1": run.kernel.tau1 if run.kernel.kind == DUAL_EXP else (cfg.tau1 if cfg.tau1 is not None else ""),
        "tau2": run.kernel.tau2 if run.kernel.kind == DUAL_EXP else (cfg.tau2 if cfg.tau2 is not None else ""),
        "v_th": cfg.v_th,
        "lambda": cfg.lam,
        "epochs": cfg.epochs,
        "seed": cfg.seed,
        "I": cfg.outputs,
        "participation": cfg.participation,
        "encoder": cfg.encoder,
        "train_n": cfg.train_n,
        "test_n": cfg.test_n,
        "alpha": cfg.alpha,
        "multipliers": cfg.multipliers,
    }
    lines = [f"{key} = {values[key]}" for key in _KEYS]
    lines.append(f"# derived: M = {run.n_inputs}, T = {run.time_frame}")
    return "\n".join(lines)
