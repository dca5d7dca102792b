import math
from collections import deque

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from semibarrier.analysis.efficiency import (
    EULER_GAMMA,
    EfficiencyModel,
    count_entries,
    efficiency_approx,
    efficiency_exact,
    harmonic,
    monte_carlo_qubit_usage,
    predicted_entries,
    qubits_per_entry,
    trial_rng,
)
from semibarrier.analysis.sectors import is_inside
from semibarrier.hilbert import Coin, mode_of, position_coin


def classical_entries(M, x0, k, modes):
    """Ballistic particles and a bit register, stepped by hand."""
    occ = {position_coin(m) for m in modes}
    word = deque([0] * k)
    R, L = Coin.RIGHT, Coin.LEFT
    used = entries = 0
    for _ in range(2 * M * (k + 2)):
        if used >= k:
            break
        at_r, at_l = (x0, R) in occ, (x0, L) in occ
        fired = False
        if at_r and at_l:
            fired = True
        elif at_l:
            if word[0] == 0:
                fired, entries = True, entries + 1
            else:
                occ.remove((x0, L))
                occ.add((x0, R))
                word[0] = 0
        elif at_r and word[0] == 0:
            occ.remove((x0, R))
            occ.add((x0, L))
            word[0] = 1
            fired = True
        if fired:
            word.rotate(-1)
            used += 1
        occ = {((x + 1, R) if x < M else (M, L)) if c is R else ((x - 1, L) if x > 1 else (1, R))
               for x, c in occ}
    return entries


def test_count_entries_matches_classical_oracle():
    M, x0, k, N = 40, 20, 14, 20
    for trial in range(40):
        rng = trial_rng(7, trial)
        modes = sorted(int(m) for m in rng.choice(2 * M, size=N, replace=False))
        assert count_entries(M, x0, k, modes)[0] == classical_entries(M, x0, k, modes)


def test_count_entries_small_boxes_against_oracle(rng):
    for _ in range(200):
        M = int(rng.integers(3, 9))
        x0 = int(rng.integers(2, M))
        N = int(rng.integers(1, min(6, 2 * M) + 1))
        k = int(rng.integers(1, 6))
        modes = sorted(int(m) for m in rng.choice(2 * M, size=N, replace=False))
        assert count_entries(M, x0, k, modes)[0] == classical_entries(M, x0, k, modes)


def test_single_inside_particle_uses_k_reflections():
    M, x0, k = 8, 3, 5
    m = mode_of(1, Coin.LEFT)
    entries, steps = count_entries(M, x0, k, [m])
    assert entries == 0
    # label of (1, ←) is x0 + 1; then one bounce per period
    assert steps == (x0 + 1) + (k - 1) * (2 * x0 - 1)


def test_no_outside_particles_never_enter():
    M, x0 = 10, 4
    inside = [m for m in range(2 * M) if is_inside(m, x0)][:4]
    assert count_entries(M, x0, 6, inside)[0] == 0


def test_exact_examples():
    assert efficiency_exact(EfficiencyModel(3, 5, 4, 12), 0)[0] == 0
    model = EfficiencyModel(0, 2, 5, 10)
    assert model.r == 1
    assert efficiency_exact(model, 1)[0] == 1
    with pytest.raises(ValueError):
        efficiency_exact(model, 3)
    with pytest.raises(ValueError):
        qubits_per_entry(model, 2)


@given(st.integers(0, 20), st.integers(1, 40), st.integers(1, 30), st.integers(1, 60), st.data())
def test_exact_is_sum_of_per_entry_costs(N0, N0_bar, V_R, extra, data):
    model = EfficiencyModel(N0, N0_bar, V_R, V_R + extra)
    N_k = data.draw(st.integers(0, N0_bar))
    k, per_entry = efficiency_exact(model, N_k)
    assert math.isclose(k, math.fsum(per_entry), rel_tol=1e-12, abs_tol=1e-12)


def test_densities_match_per_entry_cost():
    model = EfficiencyModel(4, 9, 5, 20)
    for n in range(9):
        K = model.density_inside(n) / model.density_outside(n) + 1
        assert math.isclose(qubits_per_entry(model, n), K)


@pytest.mark.parametrize("n", [50, 100, 500, 2000])
def test_harmonic_vs_log_gamma(n):
    assert abs(harmonic(n) - (math.log(n) + EULER_GAMMA)) < 1 / (2 * n)


def test_r1_general_reduces_to_equal_halves():
    model = EfficiencyModel(30, 70, 50, 100)
    ap = efficiency_approx(model, 40)
    assert ap.k_general == ap.k_eq
    assert not any("r = 1" in w for w in ap.warnings)


def test_full_admission_uses_harmonic_form():
    model = EfficiencyModel(10, 60, 20, 60)
    r, N = model.r, model.N
    ap = efficiency_approx(model, 60)
    assert math.isclose(ap.k_general, (1 - r) * 60 + r * N * EULER_GAMMA + r * N * math.log(60))


def test_r1_closed_form_within_five_percent():
    for N0_bar in (50, 80, 200, 1000):
        for N0 in (0, N0_bar // 2, N0_bar):
            model = EfficiencyModel(N0, N0_bar, 100, 200)
            for N_k in range(1, int(0.9 * N0_bar) + 1):
                exact = efficiency_exact(model, N_k)[0]
                assert abs(efficiency_approx(model, N_k).k_eq - exact) / exact < 0.05


def test_tiny_region_form_and_guards():
    model = EfficiencyModel(2, 98, 10, 1000)
    ap = efficiency_approx(model, 3)
    R = model.R
    assert math.isclose(ap.k_ll, (1 + R * 2) * 3 + R * 3)
    assert not any("k_ll" in w for w in ap.warnings)
    assert any("k_ll" in w for w in efficiency_approx(model, 20).warnings)


def test_predicted_entries_inverts_exact_cost():
    model = EfficiencyModel(7, 13, 39, 80)
    for k in np.linspace(0, 40, 33):
        n = predicted_entries(model, k)
        assert efficiency_exact(model, n)[0] <= k
        if n < model.N0_bar:
            assert efficiency_exact(model, n + 1)[0] > k


def test_monte_carlo_deterministic_and_thread_independent():
    a = monte_carlo_qubit_usage(12, 4, 5, 6, trials=20, seed=3, threads=1)
    b = monte_carlo_qubit_usage(12, 4, 5, 6, trials=20, seed=3, threads=4)
    assert a.trials == b.trials
    assert a.metadata["rng"].startswith("numpy PCG64")
    assert a.std >= 0 and a.mean_predicted > 0


def test_monte_carlo_rejects_overfull_box():
    with pytest.raises(ValueError):
        monte_carlo_qubit_usage(4, 2, 3, 9, trials=1, seed=0)
