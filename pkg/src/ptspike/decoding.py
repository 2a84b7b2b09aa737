"""Testing-mode readout: the first firing output in scan order decides.

The outputs form a prefix code (pattern p is p zeros followed by a one), so
the lowest-index neuron that fires identifies the pattern and every later
neuron is moot. When nothing fires within the frame, the decision falls
back to the largest membrane peak and is flagged so accuracy reports can
separate it out.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class Decision:
    label: Optional[int]
    decision_tick: Optional[int]
    fallback_used: bool


def decode(
    winner: Optional[int],
    decision_tick: Optional[int],
    vmax_fn: Callable[[], np.ndarray],
) -> Decision:
    """Map a winner-take-all outcome to a class decision.

    winner is the first firing output (or None); vmax_fn lazily supplies the
    per-output membrane peaks and is only called on the no-fire fallback.
    Fallback ties go to the lowest output index.
    """
    if winner is not None:
        return Decision(label=int(winner), decision_tick=decision_tick, fallback_used=False)
    v_max = np.asarray(vmax_fn(), dtype=np.float64)
    return Decision(label=int(np.argmax(v_max)), decision_tick=None, fallback_used=True)
