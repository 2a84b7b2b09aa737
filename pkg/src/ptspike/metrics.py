"""Event accounting: weighting ops, weight updates, spike counts, and the
derived efficiency and energy figures.

A weighting op is one multiply of a present spike's positive kernel value by
a weight; silent inputs and zero-kernel terms are free. The energy proxy is
linear in spike count only.
"""

from dataclasses import dataclass, fields
import math


@dataclass
class OpCounters:
    """Monotone event counters for one run. Merge per-worker copies by
    summation; never share a mutable instance across workers."""

    weighting_ops: int = 0
    weight_updates: int = 0
    input_spikes: int = 0
    output_spikes: int = 0
    errors_false_fire: int = 0
    errors_false_missing: int = 0
    images: int = 0

    def merge(self, other: "OpCounters") -> None:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    def copy(self) -> "OpCounters":
        return OpCounters(**{f.name: getattr(self, f.name) for f in fields(self)})

    @property
    def errors(self) -> int:
        return self.errors_false_fire + self.errors_false_missing


@dataclass(frozen=True)
class EnergyModel:
    """Energy proxy: alpha joules per spike."""

    alpha: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")


def energy(counters: OpCounters, model: EnergyModel) -> float:
    """Spike-count energy estimate: alpha * (input + output spikes)."""
    return model.alpha * (counters.input_spikes + counters.output_spikes)


def pe_cycles(weighting_ops: int, multipliers: int) -> int:
    """Idealized cycle count for a processing element with the given number
    of parallel multipliers: ceil(weighting_ops / multipliers)."""
    if multipliers < 1:
        raise ValueError(f"multipliers must be >= 1, got {multipliers}")
    return math.ceil(weighting_ops / multipliers)


def _report_rows(counters: OpCounters, model: EnergyModel, multipliers: int):
    n = counters.images
    errs = counters.errors
    return [
        ("images", counters.images),
        ("weighting_ops", counters.weighting_ops),
        ("weight_updates", counters.weight_updates),
        ("input_spikes", counters.input_spikes),
        ("output_spikes", counters.output_spikes),
        ("errors_false_fire", counters.errors_false_fire),
        ("errors_false_missing", counters.errors_false_missing),
        ("energy_joules", energy(counters, model)),
        ("pe_cycles", pe_cycles(counters.weighting_ops, multipliers)),
        ("weighting_ops_per_image", counters.weighting_ops / n if n else 0.0),
        ("updates_per_image", counters.weight_updates / n if n else 0.0),
        ("updates_per_error", counters.weight_updates / errs if errs else 0.0),
    ]


def report(
    counters: OpCounters,
    model: EnergyModel,
    fmt: str = "text",
    multipliers: int = 4,
) -> str:
    """Render the counters plus per-image averages as CSV or aligned text."""
    rows = _report_rows(counters, model, multipliers)
    if fmt == "csv":
        out = ["metric,value"]
        out += [f"{name},{value!r}" if isinstance(value, float) else f"{name},{value}"
                for name, value in rows]
        return "\n".join(out) + "\n"
    if fmt == "text":
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name:<{width}}  {value}" for name, value in rows) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
