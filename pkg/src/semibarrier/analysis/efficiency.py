"""How many particles ``k`` qubits can admit: mean-density law and Monte Carlo."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from semibarrier.analysis.sectors import is_inside
from semibarrier.dynamics import ENTRY, BarrierSpec, step_multi
from semibarrier.hilbert import SparseState

EULER_GAMMA = 0.5772156649
RNG_NAME = "numpy PCG64, SeedSequence(seed, spawn_key=(trial,))"


@dataclass(frozen=True)
class EfficiencyModel:
    """Initial counts ``N0`` inside and ``N0_bar`` outside a region of ``V_R`` states out of ``V``."""

    N0: int
    N0_bar: int
    V_R: int
    V: int

    @classmethod
    def from_box(cls, N0: int, N0_bar: int, M: int, x0: int) -> "EfficiencyModel":
        return cls(N0, N0_bar, 2 * x0 - 1, 2 * M)

    @property
    def N(self) -> int:
        return self.N0 + self.N0_bar

    @property
    def V_R_bar(self) -> int:
        return self.V - self.V_R

    @property
    def r(self) -> float:
        return self.V_R_bar / self.V_R

    @property
    def R(self) -> float:
        return self.r / self.N

    def density_inside(self, n: int) -> float:
        return (self.N0 + n) / self.V_R

    def density_outside(self, n: int) -> float:
        return (self.N0_bar - n) / self.V_R_bar


def qubits_per_entry(model: EfficiencyModel, n: int) -> float:
    """Mean reflections between the n-th and (n+1)-th entry, plus that entry."""
    if not 0 <= n < model.N0_bar:
        raise ValueError(f"entry index {n} outside 0..{model.N0_bar - 1}")
    return model.r * (model.N0 + n) / (model.N0_bar - n) + 1


def efficiency_exact(model: EfficiencyModel, N_k: int) -> tuple[float, list[float]]:
    """Qubits needed to admit ``N_k`` particles, and the per-entry costs."""
    if N_k < 0 or N_k > model.N0_bar:
        raise ValueError(f"N_k={N_k} must lie in 0..N0_bar={model.N0_bar}")
    per_entry = [qubits_per_entry(model, n) for n in range(N_k)]
    k = N_k + model.r * sum((model.N0 + n) / (model.N0_bar - n) for n in range(N_k))
    return k, per_entry


def harmonic(n: int) -> float:
    return math.fsum(1.0 / x for x in range(1, n + 1))


@dataclass(frozen=True)
class EfficiencyApprox:
    k_general: float
    k_eq: float
    k_ll: float
    warnings: tuple[str, ...] = field(default=())


def efficiency_approx(model: EfficiencyModel, N_k: int, small_ratio: float = 0.1) -> EfficiencyApprox:
    """Closed forms: general log law, the equal-halves case and the tiny-region case.

    Out-of-regime use is reported in ``warnings`` and still evaluated.
    """
    if N_k < 0 or N_k > model.N0_bar:
        raise ValueError(f"N_k={N_k} must lie in 0..N0_bar={model.N0_bar}")
    r, N = model.r, model.N
    if N_k == model.N0_bar:
        # log(N0_bar / 0) is replaced by H(N0_bar) ~ log N0_bar + gamma
        log_term = math.log(model.N0_bar) + EULER_GAMMA if model.N0_bar else 0.0
    else:
        log_term = math.log(model.N0_bar / (model.N0_bar - N_k)) if N_k else 0.0
    k_general = (1 - r) * N_k + r * N * log_term
    k_eq = N * log_term
    R = model.R
    k_ll = (1 + R * model.N0) * N_k + R * N_k * (N_k - 1) / 2
    warns = []
    if not math.isclose(r, 1.0):
        warns.append(f"k_eq assumes r = 1, have r = {r:.4g}")
    if model.N0_bar == 0 or model.N0 / model.N0_bar >= small_ratio:
        warns.append(f"k_ll assumes N0 << N0_bar (ratio guard {small_ratio})")
    if N_k / N >= small_ratio:
        warns.append(f"k_ll assumes N_k << N (ratio guard {small_ratio})")
    return EfficiencyApprox(k_general, k_eq, k_ll, tuple(warns))


def predicted_entries(model: EfficiencyModel, k: float) -> int:
    """Largest integer ``N_k`` whose exact qubit cost does not exceed ``k`` (bisection)."""
    lo, hi = 0, model.N0_bar
    if efficiency_exact(model, hi)[0] <= k:
        return hi
    while hi - lo > 1:  # invariant: cost(lo) <= k < cost(hi)
        mid = (lo + hi) // 2
        if efficiency_exact(model, mid)[0] <= k:
            lo = mid
        else:
            hi = mid
    return lo


# -- Monte Carlo ----------------------------------------------------------

@dataclass(frozen=True)
class TrialResult:
    N0: int
    N0_bar: int
    entries: int
    predicted: int
    steps: int


@dataclass(frozen=True)
class UsageStats:
    M: int
    x0: int
    k: int
    N: int
    seed: int
    trials: tuple[TrialResult, ...]
    metadata: dict

    @property
    def simulated(self) -> np.ndarray:
        return np.array([t.entries for t in self.trials], dtype=float)

    @property
    def predicted(self) -> np.ndarray:
        return np.array([t.predicted for t in self.trials], dtype=float)

    @property
    def mean(self) -> float:
        return float(self.simulated.mean())

    @property
    def std(self) -> float:
        return float(self.simulated.std(ddof=1)) if len(self.trials) > 1 else 0.0

    @property
    def mean_predicted(self) -> float:
        return float(self.predicted.mean())

    @property
    def relative_deviation(self) -> float:
        return abs(self.mean - self.mean_predicted) / self.mean_predicted


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def count_entries(M: int, x0: int, k: int, modes, max_steps: int | None = None) -> tuple[int, int]:
    """Run from a basis ket with an all-zero register until ``k`` qubits are used.

    Returns ``(entries among the first k register cycles, steps taken)``.
    """
    spec = BarrierSpec(x0)
    state = SparseState.basis(M, x0, k, modes)
    if max_steps is None:
        max_steps = 2 * M * (k + 2)
    used = entries = 0
    for t in range(1, max_steps + 1):
        if used >= k:
            return entries, t - 1
        state, report = step_multi(state, spec)
        if report.engaged:
            used += 1
            if report.event == ENTRY:
                entries += 1
    return entries, max_steps


def _run_trial(M: int, x0: int, k: int, N: int, seed: int, trial: int) -> TrialResult:
    rng = trial_rng(seed, trial)
    modes = sorted(int(m) for m in rng.choice(2 * M, size=N, replace=False))
    N0 = sum(is_inside(m, x0) for m in modes)
    entries, steps = count_entries(M, x0, k, modes)
    model = EfficiencyModel.from_box(N0, N - N0, M, x0)
    return TrialResult(N0, N - N0, entries, predicted_entries(model, k), steps)


def monte_carlo_qubit_usage(M: int, x0: int, k: int, N: int, trials: int, seed: int,
                            threads: int = 1) -> UsageStats:
    """Particles admitted before ``k`` qubits are used, over random classical placements.

    Particles start on distinct modes drawn uniformly; each trial has its own
    generator derived from ``(seed, trial)`` so results do not depend on
    ``threads``.
    """
    BarrierSpec(x0).validate(M)
    if N > 2 * M:
        raise ValueError(f"cannot place {N} fermions on {2 * M} modes")
    args = [(M, x0, k, N, seed, t) for t in range(trials)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda a: _run_trial(*a), args))
    else:
        results = [_run_trial(*a) for a in args]
    meta = {"rng": RNG_NAME, "placement": "uniform over modes, no double occupancy",
            "inside": "x < x0 or (x0, right)"}
    return UsageStats(M, x0, k, N, seed, tuple(results), meta)
