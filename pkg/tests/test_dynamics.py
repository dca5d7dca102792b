import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import antisym_tensor
from semibarrier.analysis.sectors import is_inside
from semibarrier.dynamics import (
    ENTRY,
    EXIT,
    REFLECT,
    SWAP,
    BarrierSpec,
    barrier_w_single,
    cycle_ancilla,
    decode_history,
    evolve,
    free_step_multi,
    free_step_single,
    inverse_step,
    post_barrier_view,
    step,
    step_matrix,
    step_multi,
    v_single,
    w_key,
    w_multi,
)
from semibarrier.hilbert import (
    Coin,
    SparseState,
    enumerate_configs,
    enumerate_words,
    inner_product,
    mode_of,
    normalize,
    position_coin,
)

R, L = Coin.RIGHT, Coin.LEFT


def ket(M, x0, k, particles, word=None):
    return SparseState.basis(M, x0, k, [mode_of(x, c) for x, c in particles], word)


def only_key(state):
    ((key, amp),) = state.amps.items()
    return key, amp


def positions(state):
    (config, _), _ = only_key(state)
    return [position_coin(m) for m in config]


# -- free motion ------------------------------------------------------------

def test_free_step_examples():
    assert positions(free_step_single(ket(6, 2, 1, [(3, L)]))) == [(2, L)]
    assert positions(free_step_single(ket(6, 2, 1, [(1, L)]))) == [(1, R)]
    assert positions(free_step_single(ket(6, 2, 1, [(6, R)]))) == [(6, L)]
    assert positions(free_step_single(ket(6, 2, 1, [(4, R)]))) == [(5, R)]


def test_free_step_uniform_superposition():
    M = 5
    psi = SparseState.from_items(M, 2, 1, [(((m,), (0,)), 1 / np.sqrt(2 * M)) for m in range(2 * M)])
    out = free_step_single(psi)
    assert len(out.amps) == 2 * M
    assert np.isclose(out.norm(), 1)


def test_free_step_single_rejects_many():
    with pytest.raises(ValueError):
        free_step_single(ket(6, 2, 1, [(3, L), (4, L)]))


def test_two_fermion_first_step():
    out = free_step_multi(ket(7, 2, 1, [(3, L), (7, L)]))
    assert out.amps == ket(7, 2, 1, [(2, L), (6, L)]).amps


def test_multi_agrees_with_single():
    for m in range(12):
        psi = SparseState.basis(6, 2, 1, [m])
        assert free_step_multi(psi).amps == free_step_single(psi).amps


def single_u_oracle(M):
    """Free-step permutation written from the boundary rules directly."""
    d = 2 * M
    U = np.zeros((d, d))
    for x in range(1, M + 1):
        right, left = 2 * (x - 1), 2 * (x - 1) + 1
        U[2 * x if x < M else left, right] = 1
        U[2 * (x - 2) + 1 if x > 1 else right, left] = 1
    return U


def test_two_particle_free_step_against_first_quantised():
    M, d = 4, 8
    U2 = np.kron(single_u_oracle(M), single_u_oracle(M))
    for pair in itertools.combinations(range(d), 2):
        psi = SparseState.basis(M, 2, 1, pair)
        out = free_step_multi(psi)
        (config, _), amp = only_key(out)
        expected = U2 @ antisym_tensor(list(pair), d)
        got = amp * antisym_tensor(list(config), d)
        assert np.allclose(expected, got)
        assert np.isclose(out.norm(), 1)


def test_crossing_pair_sign():
    # (3, →), (4, ←) -> (4, →), (3, ←)
    M, d = 4, 8
    psi = ket(M, 2, 1, [(3, R), (4, L)])
    out = free_step_multi(psi)
    (config, _), amp = only_key(out)
    assert config == (mode_of(3, L), mode_of(4, R))
    U2 = np.kron(single_u_oracle(M), single_u_oracle(M))
    expected = U2 @ antisym_tensor([mode_of(3, R), mode_of(4, L)], d)
    assert np.allclose(expected, amp * antisym_tensor(list(config), d))


# -- barrier --------------------------------------------------------------

def test_w_reflection_consumes_zero():
    spec = BarrierSpec(3)
    out = barrier_w_single(ket(6, 3, 3, [(3, R)], (0, 0, 0)), spec)
    assert only_key(out) == (((mode_of(3, L),), (1, 0, 0)), 1)


def test_w_reversed_action():
    spec = BarrierSpec(3)
    out = barrier_w_single(ket(6, 3, 3, [(3, L)], (1, 1, 0)), spec)
    assert only_key(out) == (((mode_of(3, R),), (0, 1, 0)), 1)


def test_w_passes_zero_left_and_one_right():
    spec = BarrierSpec(3)
    assert only_key(barrier_w_single(ket(6, 3, 2, [(3, L)], (0, 1)), spec))[0][1] == (0, 1)
    assert only_key(barrier_w_single(ket(6, 3, 2, [(3, R)], (1, 0)), spec))[0][1] == (1, 0)


@pytest.mark.parametrize("x,c", [(2, R), (2, L), (4, R), (4, L), (1, L)])
def test_w_local(x, c):
    psi = ket(6, 3, 2, [(x, c)], (1, 0))
    assert barrier_w_single(psi, BarrierSpec(3)).amps == psi.amps


@given(st.integers(3, 7), st.data())
def test_w_involution(M, data):
    x0 = data.draw(st.integers(2, M - 1))
    n = data.draw(st.integers(1, 3))
    k = data.draw(st.integers(1, 3))
    config = tuple(sorted(data.draw(st.lists(st.integers(0, 2 * M - 1), min_size=n, max_size=n, unique=True))))
    word = tuple(data.draw(st.lists(st.integers(0, 1), min_size=k, max_size=k)))
    spec = BarrierSpec(x0)
    key1, s1, _ = w_key((config, word), spec)
    key2, s2, _ = w_key(key1, spec)
    assert key2 == (config, word) and s1 * s2 == 1


def test_w_requires_a_qubit():
    with pytest.raises(ValueError):
        w_multi(SparseState.basis(6, 2, 0, [2]), BarrierSpec(2))


def test_cycle_examples():
    assert cycle_ancilla((0, 0, 0)) == (0, 0, 0)
    assert cycle_ancilla((1, 0, 0)) == (0, 0, 1)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=16))
def test_cycle_order(word):
    w = tuple(word)
    for _ in range(len(w)):
        w = cycle_ancilla(w)
    assert w == tuple(word)


def test_v_single_examples():
    spec = BarrierSpec(3)
    out, rep = v_single(ket(6, 3, 2, [(3, R)], (0, 0)), spec)
    assert only_key(out)[0] == ((mode_of(3, L),), (0, 1))
    assert rep.engaged and rep.qubit_consumed_value == 1 and rep.event == REFLECT

    psi = ket(6, 3, 2, [(4, R)], (1, 0))
    out, rep = v_single(psi, spec)
    assert out.amps == psi.amps and rep.engaged is False

    out, rep = v_single(ket(6, 3, 2, [(3, L)], (1, 1)), spec)
    assert only_key(out)[0] == ((mode_of(3, R),), (0, 1))
    assert rep.engaged is False and rep.event == "reject"


def test_v_superposition_report():
    spec = BarrierSpec(3)
    psi = normalize(ket(6, 3, 1, [(3, R)]) + ket(6, 3, 1, [(5, R)]))
    _, rep = v_single(psi, spec)
    assert rep.engaged is None


def test_barrier_spec_validation():
    with pytest.raises(ValueError):
        step(ket(6, 6, 1, [(3, L)]), BarrierSpec(6))
    with pytest.raises(ValueError):
        step(ket(6, 2, 1, [(3, L)]), BarrierSpec(3))


# -- full single-particle step -----------------------------------------------

def test_single_trajectory_post_barrier_view():
    spec = BarrierSpec(2)
    states, _ = evolve(ket(6, 2, 4, [(3, L)]), spec, 4)
    seen = [only_key(post_barrier_view(s, spec))[0] for s in states]
    pos = [position_coin(c[0]) for c, _ in seen]
    assert pos == [(3, L), (2, L), (1, L), (1, R), (2, L)]
    assert [w for _, w in seen][-1] == (0, 0, 0, 1)


def test_single_trajectory_standard_frame():
    spec = BarrierSpec(2)
    states, reports = evolve(ket(6, 2, 4, [(3, L)]), spec, 5)
    pos = [positions(s)[0] for s in states]
    assert pos == [(3, L), (2, L), (1, L), (1, R), (2, R), (1, L)]
    assert reports[4].event == REFLECT
    assert only_key(states[5])[0][1] == (0, 0, 0, 1)


def test_trapped_never_at_pass_mode():
    x0, k = 3, 3
    spec = BarrierSpec(x0)
    states, reports = evolve(ket(8, x0, k, [(5, L)]), spec, (k + 3) * (2 * x0 - 1))
    entry = next(t for t, r in enumerate(reports, 1) if r.event == ENTRY)
    exit_ = next(t for t, r in enumerate(reports, 1) if r.event == EXIT)
    for s in states[entry:exit_]:
        assert positions(s) != [(x0, L)]


def test_exit_after_formula_steps():
    for x0, k in [(2, 1), (2, 3), (3, 2), (4, 4)]:
        M = x0 + 3
        spec = BarrierSpec(x0)
        states, reports = evolve(ket(M, x0, k, [(x0, L)]), spec, (k + 3) * (2 * x0 - 1))
        entry = next(t for t, r in enumerate(reports, 1) if r.event == ENTRY)
        exit_ = next(t for t, r in enumerate(reports, 1) if r.event == EXIT)
        assert exit_ - entry == (k + 1) * (2 * x0 - 1)


def test_string_pattern_after_each_bounce():
    x0, k, M = 3, 5, 7
    T = 2 * x0 - 1
    spec = BarrierSpec(x0)
    states, reports = evolve(ket(M, x0, k, [(x0, L)]), spec, k * T + 2)
    entry = next(t for t, r in enumerate(reports, 1) if r.event == ENTRY)
    for j in range(1, k + 1):
        word = only_key(states[entry + (j - 1) * T])[0][1]
        assert word == (0,) * (k - j) + (0,) + (1,) * (j - 1)
    assert only_key(states[entry + k * T])[0][1] == (1,) * k


def test_decode_history():
    word = (0, 0, 1, 1, 1, 0, 1)
    assert decode_history(word, 5) == [REFLECT, REFLECT, REFLECT, "pass", REFLECT]
    with pytest.raises(ValueError):
        decode_history(word, 8)


# -- many particles ---------------------------------------------------------

def test_swap_through_unchanged():
    spec = BarrierSpec(3)
    psi = ket(6, 3, 2, [(3, L), (3, R), (5, L)], (1, 0))
    assert w_multi(psi, spec).amps == psi.amps
    assert w_key(next(iter(psi.amps)), spec)[2] == SWAP


def test_single_occupant_matches_single_table():
    spec = BarrierSpec(3)
    for c, word in itertools.product((R, L), enumerate_words(2)):
        single = barrier_w_single(ket(6, 3, 2, [(3, c)], word), spec)
        multi = w_multi(ket(6, 3, 2, [(3, c)], word), spec)
        assert single.amps == multi.amps


def test_empty_barrier_identity_on_three_particles():
    spec = BarrierSpec(3)
    psi = ket(7, 3, 2, [(1, L), (5, R), (6, L)], (1, 1))
    assert w_multi(psi, spec).amps == psi.amps


@pytest.mark.parametrize("fire", [True, False])
def test_two_particles_meeting_at_barrier(fire):
    spec = BarrierSpec(3, fire_on_swap=fire)
    out, rep = step_multi(ket(6, 3, 2, [(3, L), (3, R)]), spec)
    assert sorted(positions(out)) == [(2, L), (4, R)]
    assert only_key(out)[0][1] == (0, 0)
    assert rep.event == SWAP


def test_swap_cycle_option():
    word = (1, 0)
    psi = ket(6, 3, 2, [(3, L), (3, R)], word)
    literal, _ = step_multi(psi, BarrierSpec(3, fire_on_swap=True))
    quiet, _ = step_multi(psi, BarrierSpec(3, fire_on_swap=False))
    assert only_key(literal)[0][1] == (0, 1)
    assert only_key(quiet)[0][1] == word


# -- unitarity and reversal ---------------------------------------------------

@pytest.mark.parametrize("fire", [True, False])
def test_dense_step_unitary(fire):
    for M, k, ns in [(3, 1, (1,)), (4, 2, (1, 2)), (5, 2, (2,))]:
        for x0 in range(2, M):
            _, U = step_matrix(M, BarrierSpec(x0, fire_on_swap=fire), k, ns)
            assert np.abs(U.conj().T @ U - np.eye(len(U))).max() < 1e-12


def random_state(rng, M, x0, k, n, terms):
    items = []
    for _ in range(terms):
        config = tuple(sorted(rng.choice(2 * M, size=n, replace=False)))
        word = tuple(int(b) for b in rng.integers(0, 2, size=k))
        items.append(((tuple(int(m) for m in config), word), complex(*rng.normal(size=2))))
    return normalize(SparseState.from_items(M, x0, k, items))


def test_inverse_step_roundtrip(rng):
    for _ in range(100):
        M = int(rng.integers(3, 7))
        x0 = int(rng.integers(2, M))
        k = int(rng.integers(1, 4))
        n = int(rng.integers(1, 4))
        psi = random_state(rng, M, x0, k, n, 6)
        spec = BarrierSpec(x0, fire_on_swap=bool(rng.integers(0, 2)))
        back = inverse_step(step(psi, spec), spec)
        assert abs(inner_product(psi, back)) ** 2 > 1 - 1e-12


def test_reverse_evolution_leaves_region_at_entry():
    x0, k, M = 3, 4, 8
    spec = BarrierSpec(x0)
    psi = ket(M, x0, k, [(6, L)])
    states, reports = evolve(psi, spec, 15)
    entry = next(t for t, r in enumerate(reports, 1) if r.event == ENTRY)
    word = only_key(states[-1])[0][1]
    bounces = sum(r.event == REFLECT for r in reports)
    assert word[-bounces - 1:] == (0,) + (1,) * bounces
    s = states[-1]
    for t in range(len(states) - 1, 0, -1):
        s = inverse_step(s, spec)
        assert s.amps == states[t - 1].amps
        (m,) = only_key(s)[0][0]
        assert is_inside(m, x0) == (t - 1 >= entry)
    assert s.amps == psi.amps


def test_reverse_full_period_recovers_initial_state():
    x0, M = 2, 6
    T, K = 3, 4
    spec = BarrierSpec(x0)
    psi = normalize(SparseState.from_items(M, x0, K + 1, [(((m,), (0,) * (K + 1)), 1.0) for m in range(2 * M)]))
    states, _ = evolve(psi, spec, K * T)
    s = states[-1]
    for _ in range(K * T):
        s = inverse_step(s, spec)
    assert abs(inner_product(psi, s)) ** 2 > 1 - 1e-12


def test_config_count_invariant():
    for config in enumerate_configs(8, 2):
        out = step(SparseState.basis(4, 2, 1, config), BarrierSpec(2))
        assert out.particle_numbers() == {2}
