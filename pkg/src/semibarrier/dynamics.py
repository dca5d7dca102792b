"""One evolution step ``(U x 1) V`` with the barrier at ``x0``.

Every operator here maps composite basis kets to single basis kets up to a
sign, so each is written as a function on keys ``(config, word)`` and lifted
linearly onto :class:`~semibarrier.hilbert.SparseState`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from semibarrier.hilbert import (
    Coin,
    Config,
    Key,
    SparseState,
    Word,
    apply_annihilation,
    apply_creation,
    canonical_sign,
    enumerate_configs,
    enumerate_words,
    mode_of,
    position_coin,
)

ENTRY = "entry"
REFLECT = "reflect"
EXIT = "exit"
REJECT = "reject"  # particle from outside sent back out by a 1-qubit
SWAP = "swap"


@dataclass(frozen=True)
class BarrierSpec:
    """Barrier at site ``x0``.

    ``reflected`` is the coin that is turned back when the engaged qubit is
    ``0``; the default traps particles in ``1..x0``.  ``fire_on_swap``
    selects whether the register is cycled when both modes at ``x0`` are
    occupied (the literal projector form does; set ``False`` to leave such
    events out of the register).
    """

    x0: int
    reflected: Coin = Coin.RIGHT
    fire_on_swap: bool = True

    @property
    def passing(self) -> Coin:
        return Coin(1 - int(self.reflected))

    @property
    def reflect_mode(self) -> int:
        return mode_of(self.x0, self.reflected)

    @property
    def pass_mode(self) -> int:
        return mode_of(self.x0, self.passing)

    @property
    def period(self) -> int:
        return 2 * self.x0 - 1

    def validate(self, M: int) -> None:
        if not 2 <= self.x0 <= M - 1:
            raise ValueError(f"barrier position x0={self.x0} must satisfy 2 <= x0 <= M-1 (M={M})")


@dataclass(frozen=True)
class StepReport:
    """What the barrier did in one step.

    ``engaged`` and ``qubit_consumed_value`` are ``None`` when the state is a
    superposition whose components took different branches.
    """

    engaged: bool | None
    qubit_consumed_value: int | None = None
    event: str | None = None


def _check(state: SparseState, spec: BarrierSpec) -> None:
    spec.validate(state.M)
    if state.x0 != spec.x0:
        raise ValueError(f"state built for x0={state.x0}, barrier at x0={spec.x0}")


def _require_single(state: SparseState) -> None:
    if state.particle_numbers() - {1}:
        raise ValueError("state is not in the single-particle sector")


# -- free motion -----------------------------------------------------------

def free_mode(mode: int, M: int) -> int:
    x, c = position_coin(mode)
    if c is Coin.RIGHT:
        return mode_of(x + 1, Coin.RIGHT) if x < M else mode_of(M, Coin.LEFT)
    return mode_of(x - 1, Coin.LEFT) if x > 1 else mode_of(1, Coin.RIGHT)


def free_mode_inverse(mode: int, M: int) -> int:
    x, c = position_coin(mode)
    if c is Coin.RIGHT:
        return mode_of(x - 1, Coin.RIGHT) if x > 1 else mode_of(1, Coin.LEFT)
    return mode_of(x + 1, Coin.LEFT) if x < M else mode_of(M, Coin.RIGHT)


def _move_config(config: Config, mover: Callable[[int], int]) -> tuple[Config, int]:
    # a†_{m1}...a†_{mN} -> a†_{u(m1)}...a†_{u(mN)}, then reorder
    out = canonical_sign(mover(m) for m in config)
    assert out is not None, "mode map is not injective"
    return out


def free_key(key: Key, M: int) -> tuple[Key, int]:
    config, word = key
    new, sign = _move_config(config, lambda m: free_mode(m, M))
    return (new, word), sign


def free_key_inverse(key: Key, M: int) -> tuple[Key, int]:
    config, word = key
    new, sign = _move_config(config, lambda m: free_mode_inverse(m, M))
    return (new, word), sign


def free_step_multi(state: SparseState) -> SparseState:
    return state.remap(lambda key: free_key(key, state.M))


def free_step_single(state: SparseState) -> SparseState:
    _require_single(state)
    return free_step_multi(state)


# -- barrier ---------------------------------------------------------------

def _replace(config: Config, old: int, new: int) -> tuple[Config, int]:
    """``a†_new a_old`` on a configuration known to hold ``old`` but not ``new``."""
    removed, s1 = apply_annihilation(config, old)
    added, s2 = apply_creation(removed, new)
    return added, s1 * s2


def w_key(key: Key, spec: BarrierSpec) -> tuple[Key, int, str | None]:
    """Barrier scattering on one basis ket; returns ``(key', sign, event)``."""
    config, word = key
    if not word:
        raise ValueError("the barrier needs at least one ancilla qubit (k >= 1)")
    p, r = spec.pass_mode, spec.reflect_mode
    has_p, has_r = p in config, r in config
    if has_p and has_r:
        return key, 1, SWAP
    if not (has_p or has_r):
        return key, 1, None
    q = word[0]
    if has_p and q == 0:
        return key, 1, ENTRY
    if has_r and q == 1:
        return key, 1, EXIT
    if has_r:  # reflect, write 1
        new, sign = _replace(config, r, p)
        return (new, (1,) + word[1:]), sign, REFLECT
    new, sign = _replace(config, p, r)  # pass-coin with q=1 is sent back, qubit reset
    return (new, (0,) + word[1:]), sign, REJECT


def cycle_ancilla(word: Word) -> Word:
    """``(b1, ..., bk) -> (b2, ..., bk, b1)``."""
    return word[1:] + word[:1] if word else word


def uncycle_ancilla(word: Word) -> Word:
    return word[-1:] + word[:-1] if word else word


def _fires(config: Config, spec: BarrierSpec) -> bool:
    if spec.pass_mode not in config:
        return False
    return spec.fire_on_swap or spec.reflect_mode not in config


def v_key(key: Key, spec: BarrierSpec) -> tuple[Key, int, str | None, bool]:
    (config, word), sign, event = w_key(key, spec)
    fired = _fires(config, spec)
    if fired:
        word = cycle_ancilla(word)
    return (config, word), sign, event, fired


def step_key(key: Key, spec: BarrierSpec, M: int) -> tuple[Key, int, str | None, bool]:
    mid, s1, event, fired = v_key(key, spec)
    out, s2 = free_key(mid, M)
    return out, s1 * s2, event, fired


def inverse_step_key(key: Key, spec: BarrierSpec, M: int) -> tuple[Key, int]:
    (config, word), s1 = free_key_inverse(key, M)
    if _fires(config, spec):
        word = uncycle_ancilla(word)
    out, s2, _ = w_key((config, word), spec)  # W is an involution
    return out, s1 * s2


def _lift(state: SparseState, fn) -> tuple[SparseState, StepReport]:
    out: dict[Key, complex] = {}
    fired_set, bits, events = set(), set(), set()
    for key, a in state.amps.items():
        new, sign, event, fired = fn(key)
        out[new] = out.get(new, 0j) + sign * a
        fired_set.add(fired)
        events.add(event)
        if fired:
            bits.add(new[1][-1] if new[1] else None)
    engaged = fired_set.pop() if len(fired_set) == 1 else None
    consumed = None
    if engaged and len(bits) == 1:
        consumed = bits.pop()
    report = StepReport(engaged, consumed, events.pop() if len(events) == 1 else None)
    return state.with_amps({k: a for k, a in out.items() if a != 0}), report


def barrier_w_single(state: SparseState, spec: BarrierSpec) -> SparseState:
    _check(state, spec)
    _require_single(state)
    return w_multi(state, spec)


def w_multi(state: SparseState, spec: BarrierSpec) -> SparseState:
    _check(state, spec)
    if state.k < 1:
        raise ValueError("the barrier needs at least one ancilla qubit (k >= 1)")

    def fn(key):
        new, sign, _ = w_key(key, spec)
        return new, sign

    return state.remap(fn)


def v_multi(state: SparseState, spec: BarrierSpec) -> tuple[SparseState, StepReport]:
    _check(state, spec)
    if state.k < 1:
        raise ValueError("the barrier needs at least one ancilla qubit (k >= 1)")
    return _lift(state, lambda key: v_key(key, spec))


def v_single(state: SparseState, spec: BarrierSpec) -> tuple[SparseState, StepReport]:
    _require_single(state)
    return v_multi(state, spec)


def step_multi(state: SparseState, spec: BarrierSpec) -> tuple[SparseState, StepReport]:
    _check(state, spec)
    if state.k < 1:
        raise ValueError("the barrier needs at least one ancilla qubit (k >= 1)")
    return _lift(state, lambda key: step_key(key, spec, state.M))


def step_single(state: SparseState, spec: BarrierSpec) -> tuple[SparseState, StepReport]:
    _require_single(state)
    return step_multi(state, spec)


def step(state: SparseState, spec: BarrierSpec) -> SparseState:
    return step_multi(state, spec)[0]


def inverse_step(state: SparseState, spec: BarrierSpec) -> SparseState:
    _check(state, spec)
    return state.remap(lambda key: inverse_step_key(key, spec, state.M))


def evolve(state: SparseState, spec: BarrierSpec, steps: int,
           ) -> tuple[list[SparseState], list[StepReport]]:
    """States at ``t = 0..steps`` and the report of every step."""
    states, reports = [state], []
    for _ in range(steps):
        state, report = step_multi(state, spec)
        states.append(state)
        reports.append(report)
    return states, reports


def post_barrier_view(state: SparseState, spec: BarrierSpec) -> SparseState:
    """The state with the barrier of the next step already applied.

    This is the picture in which a particle arriving at ``(x0, →)`` is
    shown as already turned back to ``(x0, ←)``.
    """
    return v_multi(state, spec)[0]


def step_matrix(M: int, spec: BarrierSpec, k: int, particle_numbers=(1,),
                step_fn: Callable | None = None) -> tuple[list[Key], np.ndarray]:
    """Dense matrix of one step over all configurations and ancilla words."""
    spec.validate(M)
    basis = [(c, w) for n in particle_numbers for c in enumerate_configs(2 * M, n)
             for w in enumerate_words(k)]
    index = {key: i for i, key in enumerate(basis)}
    if step_fn is None:
        def step_fn(key):
            new, sign, _, _ = step_key(key, spec, M)
            return new, sign
    mat = np.zeros((len(basis), len(basis)), dtype=complex)
    for j, key in enumerate(basis):
        new, sign = step_fn(key)
        mat[index[new], j] += sign
    return basis, mat


def decode_history(word: Word, used: int) -> list[str]:
    """Barrier actions recorded in the last ``used`` qubits, oldest first.

    The most recent qubit sits at the right end of the word; ``1`` marks a
    reflection and ``0`` a pass.
    """
    if not 0 <= used <= len(word):
        raise ValueError(f"used={used} outside 0..{len(word)}")
    tail = word[len(word) - used:]
    return [REFLECT if b else "pass" for b in tail]
