"""Slater rank of two-fermion pure states."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from semibarrier.hilbert import SparseState


@dataclass(frozen=True)
class SlaterDecomposition:
    lambdas: np.ndarray  # descending, sums to one
    rank: int
    pair_basis: np.ndarray  # column pairs (2j, 2j+1) span the j-th pair's modes


def coefficient_matrix(amplitudes: dict[tuple[int, int], complex], d: int) -> np.ndarray:
    """Antisymmetric ``A`` with ``A[i, j] = c_ij / sqrt 2`` for the state ``sum_{i<j} c_ij a†_i a†_j |0>``."""
    A = np.zeros((d, d), dtype=complex)
    for (i, j), c in amplitudes.items():
        if i == j:
            raise ValueError("doubly occupied mode in a fermionic state")
        if i > j:
            i, j, c = j, i, -c
        A[i, j] += c / np.sqrt(2)
        A[j, i] -= c / np.sqrt(2)
    return A


def coefficient_matrix_from_state(state: SparseState) -> np.ndarray:
    """Coefficient matrix of a two-particle state whose register is a single word."""
    if state.particle_numbers() != {2}:
        raise ValueError("Slater rank needs a two-particle state")
    if len({w for _, w in state.amps}) != 1:
        raise ValueError("particles are entangled with the register; no pure particle state")
    return coefficient_matrix({config: a for (config, _), a in state.amps.items()}, state.n_modes)


def slater_rank(A: np.ndarray, tol: float = 1e-8) -> SlaterDecomposition:
    """Slater rank from the paired singular values of ``A = -A^T``.

    Singular values below ``tol * sigma_max`` are discarded.  ``lambdas``
    are the pair weights ``sigma_{2j}^2 + sigma_{2j+1}^2`` renormalised to
    sum to one.
    """
    A = np.asarray(A, dtype=complex)
    scale = np.abs(A).max(initial=0.0)
    if scale == 0:
        raise ValueError("zero coefficient matrix")
    if np.abs(A + A.T).max() > 1e-10 * scale:
        raise ValueError("coefficient matrix is not antisymmetric")
    U, s, _ = np.linalg.svd(A)
    kept = int(np.sum(s > tol * s[0]))
    n_pairs = (kept + 1) // 2
    sq = s**2
    pairs = sq[0:2 * n_pairs:2] + sq[1:2 * n_pairs:2]
    lambdas = pairs / pairs.sum()
    return SlaterDecomposition(lambdas, n_pairs, U[:, :2 * n_pairs])


@dataclass(frozen=True)
class PairedNeighbourResult:
    T: int
    K: int
    M: int
    x0: int
    initial_rank: int
    trapped_rank: int
    trapped_purity: float


def paired_neighbour_example(T: int, K: int, tol: float = 1e-8) -> PairedNeighbourResult:
    """Slater rank before and after trapping for neighbouring-label fermion pairs.

    The state is an even superposition of ``|2t-1+nT, 2t+nT>`` over
    ``t = 1..(T-1)/2`` and all sectors ``n``, on the box with ``2M`` closest
    to ``KT`` from below.
    """
    from semibarrier.analysis.coherence import coherence_metrics
    from semibarrier.analysis.sectors import labels_to_modes
    from semibarrier.dynamics import BarrierSpec, evolve
    from semibarrier.hilbert import partial_trace_ancilla

    if T < 3 or T % 2 == 0:
        raise ValueError(f"T={T} must be odd and >= 3")
    x0, M = (T + 1) // 2, (K * T) // 2
    if M < x0 + 1 or (K - 1) * T >= 2 * M:
        raise ValueError(f"no box with ceil(2M/T) = {K} for T={T}")
    k = 2 * K + 3
    modes = labels_to_modes(M, x0)
    c = (K * (T - 1) / 2) ** -0.5
    items = []
    for n in range(K):
        for t in range(1, (T - 1) // 2 + 1):
            # |s, s'> = a†_{s'} a†_s |0>
            pair = SparseState.basis(M, x0, k, [modes[2 * t + n * T - 1], modes[2 * t - 1 + n * T - 1]])
            ((key, a),) = pair.amps.items()
            items.append((key, a * c))
    psi = SparseState.from_items(M, x0, k, items)
    r0 = slater_rank(coefficient_matrix_from_state(psi), tol).rank
    states, _ = evolve(psi, BarrierSpec(x0), K * T)
    rho = partial_trace_ancilla(states[-1])
    _, vecs = np.linalg.eigh(rho.matrix)
    top = vecs[:, -1]
    amps = {cf: top[i] for i, cf in enumerate(rho.basis) if abs(top[i]) > 1e-14}
    r1 = slater_rank(coefficient_matrix(amps, 2 * M), tol).rank
    return PairedNeighbourResult(T, K, M, x0, r0, r1, coherence_metrics(rho).purity)
