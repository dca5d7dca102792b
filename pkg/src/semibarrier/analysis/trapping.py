"""Trapping time of a single particle behind the barrier."""
from __future__ import annotations

from dataclasses import dataclass

from semibarrier.analysis.sectors import is_inside
from semibarrier.dynamics import ENTRY, EXIT, BarrierSpec, step_single
from semibarrier.hilbert import SparseState


def trapping_time(k: int, x0: int) -> int:
    """``(k + 1)(2 x0 - 1)`` steps of confinement bought by ``k`` qubits."""
    if k < 0 or x0 < 2:
        raise ValueError("need k >= 0 and x0 >= 2")
    return (k + 1) * (2 * x0 - 1)


@dataclass(frozen=True)
class Residence:
    start_mode: int
    entry_step: int | None
    exit_step: int | None
    in_region_steps: int  # time points spent on confined states
    words: tuple  # register word after every step, index t -> word at time t


def simulate_residence(M: int, x0: int, k: int, start_mode: int, word=None,
                       max_steps: int | None = None) -> Residence:
    """Follow one basis ket until it has entered and left the confined states.

    ``in_region_steps`` counts time points at which the particle occupies a
    confined state (``x < x0`` or ``(x0, →)``), between its first entry and
    its first exit.  Entry and exit steps come from the barrier's own branch
    report and serve as a cross-check.
    """
    spec = BarrierSpec(x0)
    state = SparseState.basis(M, x0, k, [start_mode], word)
    if max_steps is None:
        max_steps = 4 * M + (k + 2) * (2 * x0 - 1)
    entry = exit_ = None
    count = 0
    was_inside = is_inside(start_mode, x0)
    seen_inside = was_inside
    words = [next(iter(state.amps))[1]]
    for t in range(1, max_steps + 1):
        state, report = step_single(state, spec)
        ((config, word),) = state.amps
        words.append(word)
        if report.event == ENTRY and entry is None:
            entry = t
        if report.event == EXIT and exit_ is None and seen_inside:
            exit_ = t
        inside = is_inside(config[0], x0)
        if inside:
            count += 1
            seen_inside = True
        elif seen_inside:
            break
    return Residence(start_mode, entry, exit_, count, tuple(words))
