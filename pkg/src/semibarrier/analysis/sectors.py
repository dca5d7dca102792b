"""Relabelling of single-particle modes by time-to-bounce, and the trapped mixture.

With a barrier at ``x0`` (reflecting ``→``) every mode reaches ``(x0, →)``
at a definite time.  Label ``t = 1`` is ``(x0, →)`` itself, ``t = 2`` is
``(x0-1, →)`` and so on around the box; labels ``1..T`` with ``T = 2x0 - 1``
are the states already confined, larger labels lie outside.  Sector ``n``
collects labels ``nT < t <= (n+1)T``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from semibarrier.hilbert import Coin, DensityMatrix, SparseState, Word, mode_of, position_coin


def label_of_mode(mode: int, M: int, x0: int) -> int:
    """Number of the step during which a particle in ``mode`` first bounces."""
    T = 2 * x0 - 1
    x, c = position_coin(mode)
    if x > M:
        raise ValueError(f"mode {mode} outside chain of length {M}")
    if c is Coin.RIGHT:
        if x <= x0:
            return x0 - x + 1
        return T + 2 + 2 * M - x0 - x
    if x < x0:
        return x0 + x
    return T + 1 + (x - x0)


def mode_of_label(t: int, M: int, x0: int) -> int:
    return labels_to_modes(M, x0)[t - 1]


def labels_to_modes(M: int, x0: int) -> list[int]:
    """``out[t - 1]`` is the mode carrying label ``t``."""
    out = [0] * (2 * M)
    for m in range(2 * M):
        out[label_of_mode(m, M, x0) - 1] = m
    return out


def n_sectors(M: int, x0: int) -> int:
    return math.ceil(2 * M / (2 * x0 - 1))


def is_inside(mode: int, x0: int) -> bool:
    """Confined states: ``x < x0`` with either coin, or ``(x0, →)``."""
    x, c = position_coin(mode)
    return x < x0 or (x == x0 and c is Coin.RIGHT)


@dataclass(frozen=True)
class SectorDecomposition:
    M: int
    x0: int
    word: Word
    components: tuple[tuple[int, np.ndarray], ...]  # (n, amplitudes over t = 1..T)

    @property
    def T_period(self) -> int:
        return 2 * self.x0 - 1

    @property
    def K_sectors(self) -> int:
        return n_sectors(self.M, self.x0)

    def amplitudes(self) -> np.ndarray:
        """All ``alpha_{t+nT}`` for ``t + nT = 1..KT``, zero beyond ``2M``."""
        return np.concatenate([vec for _, vec in self.components])

    def reassemble(self, k: int) -> SparseState:
        modes = labels_to_modes(self.M, self.x0)
        items = []
        for s, a in enumerate(self.amplitudes(), start=1):
            if a != 0:
                if s > 2 * self.M:
                    raise ValueError("non-zero amplitude on a padding label")
                items.append((((modes[s - 1],), self.word), complex(a)))
        return SparseState.from_items(self.M, self.x0, k, items)


def sector_decompose(state: SparseState) -> SectorDecomposition:
    if state.particle_numbers() != {1}:
        raise ValueError("sector decomposition needs a single-particle state")
    words = {w for _, w in state.amps}
    if len(words) != 1:
        raise ValueError("ancilla must be in a single basis word")
    M, x0 = state.M, state.x0
    T, K = 2 * x0 - 1, n_sectors(M, x0)
    alpha = np.zeros(K * T, dtype=complex)
    for (config, _), a in state.amps.items():
        alpha[label_of_mode(config[0], M, x0) - 1] += a
    comps = tuple((n, alpha[n * T:(n + 1) * T].copy()) for n in range(K))
    return SectorDecomposition(M, x0, words.pop(), comps)


def predict_trapped_mixture(state: SparseState) -> DensityMatrix:
    """Reduced particle state after ``KT`` steps, from the sector amplitudes alone.

    Each sector ``n`` folds onto the confined labels ``1..T`` keeping its
    amplitudes, and different sectors end with different register words, so
    they add incoherently.
    """
    K = n_sectors(state.M, state.x0)
    if state.k <= K:
        raise ValueError(f"register too small: need k > K = {K}, have k = {state.k}")
    dec = sector_decompose(state)
    if any(dec.word):
        raise ValueError("prediction assumes an all-zero initial register")
    modes = labels_to_modes(state.M, state.x0)
    d = 2 * state.M
    rho = np.zeros((d, d), dtype=complex)
    for _, vec in dec.components:
        phi = np.zeros(d, dtype=complex)
        for t, a in enumerate(vec, start=1):
            phi[modes[t - 1]] += a
        rho += np.outer(phi, phi.conj())
    return DensityMatrix(tuple((m,) for m in range(d)), rho)


def predict_two_fermion_word(s1: int, s2: int, M: int, x0: int, k: int) -> Word:
    """Register word after ``KT`` steps for two fermions starting on labels ``s1 < s2``.

    Writing ``s = t + nT`` with ``1 <= t <= T``, the word is
    ``0..0 1^j 0 1^j'``: ``j`` bounces with one particle confined, the
    second entry, then ``j'`` bounces with both confined.  For ``t1 < t2``
    this is ``j = n2 - n1``, ``j' = 2(K - n2)``; when ``t2 < t1`` the second
    particle arrives one period earlier relative to its sector and the
    counts become ``n2 - n1 - 1`` and ``2(K - n2) + 1``.  Equal ``t``
    (both particles at the barrier together) is excluded.
    """
    T, K = 2 * x0 - 1, n_sectors(M, x0)
    if not 1 <= s1 < s2 <= 2 * M:
        raise ValueError(f"need 1 <= s1 < s2 <= 2M, got {s1}, {s2}")
    n1, t1 = divmod(s1 - 1, T)
    n2, t2 = divmod(s2 - 1, T)
    if t1 == t2:
        raise ValueError("labels with equal t meet at the barrier; excluded")
    wrap = int(t2 < t1)
    j, jj = n2 - n1 - wrap, 2 * (K - n2) + wrap
    if k < j + jj + 1:
        raise ValueError(f"register too small: need k >= {j + jj + 1}, have k = {k}")
    return (0,) * (k - j - jj - 1) + (1,) * j + (0,) + (1,) * jj
