"""Reduced dynamics of the particles alone: Kraus channels and their dilations.

Single-particle density matrices live on the ``2M`` modes in linear-index
order.  Two-fermion density matrices are kept in first quantisation on the
full ``2M x 2M`` tensor product and are expected to stay inside its
antisymmetric subspace.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from semibarrier.dynamics import (
    BarrierSpec,
    cycle_ancilla,
    free_key,
    free_mode,
    w_key,
)
from semibarrier.hilbert import (
    Coin,
    DensityMatrix,
    Key,
    SparseState,
    mode_of,
    partial_trace_ancilla,
)


@dataclass(frozen=True)
class KrausSet:
    operators: tuple[np.ndarray, ...]

    def __iter__(self):
        return iter(self.operators)

    def __len__(self):
        return len(self.operators)

    def completeness(self) -> np.ndarray:
        return sum(K.conj().T @ K for K in self.operators)

    def completeness_defect(self, subspace: np.ndarray | None = None) -> float:
        """Largest entry of ``sum K†K - 1``, optionally inside a projector's range."""
        S = self.completeness()
        if subspace is None:
            return float(np.abs(S - np.eye(S.shape[0])).max())
        return float(np.abs(subspace @ S @ subspace - subspace).max())

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(K @ rho @ K.conj().T for K in self.operators)


def _validate(x0: int, M: int) -> None:
    BarrierSpec(x0).validate(M)


def free_unitary(M: int) -> np.ndarray:
    """Permutation matrix of the free step on the ``2M`` single-particle modes."""
    d = 2 * M
    U = np.zeros((d, d))
    for m in range(d):
        U[free_mode(m, M), m] = 1.0
    return U


def kraus_single(x0: int, M: int) -> KrausSet:
    """``K1 = (1 - |x0><x0|) x 1 + |x0,←><x0,→|`` and ``K2 = |x0,←><x0,←|``."""
    _validate(x0, M)
    d = 2 * M
    r, l = mode_of(x0, Coin.RIGHT), mode_of(x0, Coin.LEFT)
    K1 = np.eye(d)
    K1[r, r] = K1[l, l] = 0.0
    K1[l, r] = 1.0
    K2 = np.zeros((d, d))
    K2[l, l] = 1.0
    return KrausSet((K1, K2))


def kraus_fresh_qubit(x0: int, M: int) -> KrausSet:
    """Kraus set obtained by tracing out one fresh ``|0>`` qubit after ``W``.

    Outcome ``0`` keeps everything except ``(x0, →)``; outcome ``1`` is the
    reflection ``|x0,←><x0,→|``.
    """
    _validate(x0, M)
    d = 2 * M
    r, l = mode_of(x0, Coin.RIGHT), mode_of(x0, Coin.LEFT)
    A0 = np.eye(d)
    A0[r, r] = 0.0
    A1 = np.zeros((d, d))
    A1[l, r] = 1.0
    return KrausSet((A0, A1))


def channel_step(rho: np.ndarray, kraus: KrausSet, U: np.ndarray) -> np.ndarray:
    out = U @ kraus.apply(rho) @ U.conj().T
    return 0.5 * (out + out.conj().T)


def channel_step_single(rho, x0: int, M: int, kraus: KrausSet | None = None):
    """``rho -> sum_i U K_i rho K_i† U†``; accepts an array or a DensityMatrix."""
    kraus = kraus_single(x0, M) if kraus is None else kraus
    as_dm = isinstance(rho, DensityMatrix)
    mat = rho.matrix if as_dm else np.asarray(rho, dtype=complex)
    if mat.shape != (2 * M, 2 * M):
        raise ValueError(f"expected a {2 * M}x{2 * M} density matrix, got {mat.shape}")
    if abs(np.trace(mat) - 1) > 1e-8 or np.abs(mat - mat.conj().T).max() > 1e-8:
        raise ValueError("input is not a density matrix")
    out = channel_step(mat, kraus, free_unitary(M))
    return DensityMatrix(rho.basis, out) if as_dm else out


def channel_trajectory(rho0: np.ndarray, kraus: KrausSet, U: np.ndarray, steps: int) -> list[np.ndarray]:
    traj = [np.asarray(rho0, dtype=complex)]
    for _ in range(steps):
        traj.append(channel_step(traj[-1], kraus, U))
    return traj


def single_basis(M: int) -> tuple:
    return tuple((m,) for m in range(2 * M))


# -- two fermions in first quantisation -----------------------------------

def antisymmetric_projector(d: int) -> np.ndarray:
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            swap[j * d + i, i * d + j] = 1.0
    return 0.5 * (np.eye(d * d) - swap)


def antisymmetric_isometry(d: int) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Columns ``(|i>|j> - |j>|i>)/sqrt 2`` for ``i < j``."""
    pairs = list(combinations(range(d), 2))
    iso = np.zeros((d * d, len(pairs)))
    s = 1 / np.sqrt(2)
    for col, (i, j) in enumerate(pairs):
        iso[i * d + j, col] = s
        iso[j * d + i, col] = -s
    return pairs, iso


def antisym_vector(d: int, i: int, j: int) -> np.ndarray:
    v = np.zeros(d * d, dtype=complex)
    v[i * d + j] += 1 / np.sqrt(2)
    v[j * d + i] -= 1 / np.sqrt(2)
    return v


def kraus_two_fermion(x0: int, M: int, complete: bool = False) -> KrausSet:
    """Symmetrised set ``K1xK1, K2xK2, K1xK2 + K2xK1``.

    This set loses the antisymmetric state with both ``x0`` modes filled
    (every operator maps it to zero).  ``complete=True`` appends the
    projector onto that state, which is what leaving both particles
    untouched would contribute.
    """
    K1, K2 = kraus_single(x0, M)
    ops = [np.kron(K1, K1), np.kron(K2, K2), np.kron(K1, K2) + np.kron(K2, K1)]
    if complete:
        d = 2 * M
        v = antisym_vector(d, mode_of(x0, Coin.RIGHT), mode_of(x0, Coin.LEFT))
        ops.append(np.outer(v, v.conj()).real)
    return KrausSet(tuple(ops))


def two_fermion_unitary(M: int) -> np.ndarray:
    U = free_unitary(M)
    return np.kron(U, U)


# -- fresh-qubit dilation --------------------------------------------------

def fresh_qubit_key(key: Key, spec: BarrierSpec, M: int) -> tuple[Key, int]:
    (config, word), sign, _ = w_key(key, spec)
    out, s2 = free_key((config, cycle_ancilla(word)), M)
    return out, sign * s2


def fresh_qubit_step(state: SparseState, spec: BarrierSpec) -> SparseState:
    """``W``, then an unconditional register cycle, then free motion."""
    spec.validate(state.M)
    if state.k < 1:
        raise ValueError("ancilla exhausted: the fresh-qubit variant needs k >= 1")
    return state.remap(lambda key: fresh_qubit_key(key, spec, state.M))


def fresh_qubit_trajectory(state: SparseState, spec: BarrierSpec, steps: int) -> list[SparseState]:
    if steps > state.k:
        raise ValueError(f"ancilla exhausted: {steps} steps need k >= {steps}, have k={state.k}")
    out = [state]
    for _ in range(steps):
        out.append(fresh_qubit_step(out[-1], spec))
    return out


def reduced_trajectory(states: list[SparseState]) -> list[np.ndarray]:
    return [partial_trace_ancilla(s).matrix for s in states]


def trace_distance(rho, sigma) -> float:
    """``||rho - sigma||_1 / 2`` from the eigenvalues of the Hermitian difference."""
    a = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    b = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    diff = a - b
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.abs(np.linalg.eigvalsh(diff)).sum())


def compare_reduced_to_kraus(state: SparseState, spec: BarrierSpec, steps: int,
                             variant: str = "fresh", kraus: KrausSet | None = None,
                             ) -> list[float]:
    """Per-step trace distance between a unitary model's reduced state and a Kraus trajectory.

    ``variant`` is ``"fresh"`` (one qubit per step) or ``"main"`` (one qubit
    per barrier event).
    """
    from semibarrier.dynamics import step_multi

    if state.particle_numbers() != {1}:
        raise ValueError("Kraus comparison is single-particle only")
    kraus = kraus_single(spec.x0, state.M) if kraus is None else kraus
    if variant == "fresh":
        states = fresh_qubit_trajectory(state, spec, steps)
    elif variant == "main":
        states = [state]
        for _ in range(steps):
            states.append(step_multi(states[-1], spec)[0])
    else:
        raise ValueError(f"unknown variant {variant!r}")
    reduced = reduced_trajectory(states)
    kraus_traj = channel_trajectory(reduced[0], kraus, free_unitary(state.M), steps)
    return [trace_distance(a, b) for a, b in zip(reduced, kraus_traj)]
