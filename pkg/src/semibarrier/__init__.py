"""Unitary semipermeable-barrier dynamics for discrete-time quantum walks."""

from semibarrier.hilbert import (
    Coin,
    DensityMatrix,
    SparseState,
    apply_creation,
    inner_product,
    mode_of,
    normalize,
    partial_trace_ancilla,
    position_coin,
    prune,
)
from semibarrier.dynamics import (
    BarrierSpec,
    StepReport,
    inverse_step,
    step,
    step_multi,
    step_single,
)

__version__ = "0.1.0"
