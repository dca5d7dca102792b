"""The barrier as a beam splitter programmed by the register's superposition."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from semibarrier.channels import fresh_qubit_step
from semibarrier.dynamics import BarrierSpec, step_multi
from semibarrier.hilbert import Coin, SparseState, enumerate_configs, mode_of


@dataclass(frozen=True)
class ScatterResult:
    state: SparseState
    p_transmit: float  # weight on the branch inside (x0-1, ←)
    p_reflect: float  # weight on the branch outside (x0+1, →)
    schmidt_rank: int
    ancilla_words: dict


def schmidt_rank(state: SparseState, tol: float = 1e-10) -> int:
    """Schmidt rank across the particles | register cut."""
    configs = sorted({c for c, _ in state.amps})
    words = sorted({w for _, w in state.amps})
    ci = {c: i for i, c in enumerate(configs)}
    wi = {w: i for i, w in enumerate(words)}
    mat = np.zeros((len(configs), len(words)), dtype=complex)
    for (c, w), a in state.amps.items():
        mat[ci[c], wi[w]] = a
    s = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(s > tol))


def _check_qubit(alpha: complex, beta: complex) -> None:
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1) > 1e-12:
        raise ValueError("qubit amplitudes must satisfy |alpha|^2 + |beta|^2 = 1")


def beamsplit_scatter(side: str, alpha: complex, beta: complex, M: int = 6, x0: int = 3,
                      ) -> ScatterResult:
    """One particle arriving at ``x0`` meets a single qubit ``alpha|0> + beta|1>``.

    ``side="right"`` starts from ``(x0, ←)``, ``side="left"`` from ``(x0, →)``.
    """
    _check_qubit(alpha, beta)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    spec = BarrierSpec(x0)
    coin = Coin.LEFT if side == "right" else Coin.RIGHT
    m = mode_of(x0, coin)
    psi = (SparseState.basis(M, x0, 1, [m], (0,)) * alpha
           + SparseState.basis(M, x0, 1, [m], (1,)) * beta)
    out, _ = step_multi(psi, spec)
    t_mode, r_mode = mode_of(x0 - 1, Coin.LEFT), mode_of(x0 + 1, Coin.RIGHT)
    occ = out.occupation()
    return ScatterResult(out, float(occ[t_mode]), float(occ[r_mode]), schmidt_rank(out),
                         out.word_distribution())


@dataclass(frozen=True)
class CollectiveResult:
    state: SparseState
    p_all_transmit: float
    p_all_reflect: float
    schmidt_rank: int


def collective_beamsplit(alpha: complex, beta: complex, n_particles: int,
                         dynamics: str = "fresh") -> CollectiveResult:
    """``n`` particles arriving on consecutive steps meet ``alpha|0..0> + beta|1..1>``.

    With ``dynamics="fresh"`` the register advances one qubit per step, so
    particle ``i`` meets qubit ``i``.  With ``"main"`` the register only
    advances when ``(x0, ←)`` is occupied after scattering; a reflected
    particle leaves the reset qubit in front and the next particle is
    transmitted, so the branches do not stay collective.
    """
    _check_qubit(alpha, beta)
    n = n_particles
    if n < 1:
        raise ValueError("need at least one particle")
    x0, M = n + 1, 2 * n + 2
    spec = BarrierSpec(x0)
    modes = [mode_of(x0 + i, Coin.LEFT) for i in range(n)]
    psi = (SparseState.basis(M, x0, n, modes, (0,) * n) * alpha
           + SparseState.basis(M, x0, n, modes, (1,) * n) * beta)
    for _ in range(n):
        if dynamics == "fresh":
            psi = fresh_qubit_step(psi, spec)
        elif dynamics == "main":
            psi = step_multi(psi, spec)[0]
        else:
            raise ValueError(f"unknown dynamics {dynamics!r}")
    transmitted = tuple(sorted(mode_of(x0 - n + i, Coin.LEFT) for i in range(n)))
    reflected = tuple(sorted(mode_of(x0 + n - i, Coin.RIGHT) for i in range(n)))
    p_t = sum(abs(a) ** 2 for (c, _), a in psi.amps.items() if c == transmitted)
    p_r = sum(abs(a) ** 2 for (c, _), a in psi.amps.items() if c == reflected)
    return CollectiveResult(psi, float(p_t), float(p_r), schmidt_rank(psi))
