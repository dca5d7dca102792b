"""Basis bookkeeping and sparse pure-state algebra.

A single-particle mode is a pair ``(x, c)`` with position ``1 <= x <= M`` and
coin ``c``.  Modes are linearised as ``2 * (x - 1) + c`` with ``RIGHT = 0`` and
``LEFT = 1``, so the two modes at one site are adjacent.

A composite basis ket is a pair ``(modes, word)``: ``modes`` is an ascending
tuple of occupied mode indices (the fermionic configuration) and ``word`` is a
tuple of ``k`` ancilla bits.  A configuration ``(m1, m2, ..., mN)`` stands for
``a†_{m1} a†_{m2} ... a†_{mN} |0>``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

EPS_NORM = 1e-10
EPS_EIG = 1e-10

Config = tuple[int, ...]
Word = tuple[int, ...]
Key = tuple[Config, Word]


class Coin(IntEnum):
    RIGHT = 0
    LEFT = 1

    @classmethod
    def parse(cls, value) -> "Coin":
        if isinstance(value, Coin):
            return value
        if isinstance(value, str):
            v = value.strip().lower()
            if v in ("r", "right", "->", "→"):
                return cls.RIGHT
            if v in ("l", "left", "<-", "←"):
                return cls.LEFT
        if value in (0, 1):
            return cls(value)
        raise ValueError(f"unrecognised coin value {value!r}")

    @property
    def arrow(self) -> str:
        return "→" if self is Coin.RIGHT else "←"


def mode_of(x: int, c, M: int | None = None) -> int:
    """Linear index of mode ``(x, c)``.

    >>> mode_of(3, Coin.LEFT)
    5
    """
    c = Coin.parse(c)
    if x < 1 or (M is not None and x > M):
        raise ValueError(f"position {x} outside 1..{M if M is not None else 'M'}")
    return 2 * (x - 1) + int(c)


def position_coin(mode: int) -> tuple[int, Coin]:
    """Inverse of :func:`mode_of`."""
    if mode < 0:
        raise ValueError(f"negative mode index {mode}")
    return mode // 2 + 1, Coin(mode % 2)


def mode_label(mode: int) -> str:
    x, c = position_coin(mode)
    return f"{x}{c.arrow}"


def canonical_sign(modes: Iterable[int]) -> tuple[Config, int] | None:
    """Sort a creation-operator string, returning ``(sorted, parity sign)``.

    ``None`` when a mode repeats (the product vanishes).
    """
    modes = list(modes)
    if len(set(modes)) != len(modes):
        return None
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(modes)):
        j = i
        while j > 0 and modes[j - 1] > modes[j]:
            modes[j - 1], modes[j] = modes[j], modes[j - 1]
            sign = -sign
            j -= 1
    return tuple(modes), sign


def apply_creation(config: Config, mode: int) -> tuple[Config, int] | None:
    """Left-multiply ``a†_mode`` onto the ordered product for ``config``.

    Returns the canonical configuration and the sign
    ``(-1)**(number of occupied modes below mode)``, or ``None`` if the mode
    is already occupied.
    """
    if mode in config:
        return None
    below = sum(1 for m in config if m < mode)
    new = tuple(sorted(config + (mode,)))
    return new, (-1) ** below


def apply_annihilation(config: Config, mode: int) -> tuple[Config, int] | None:
    """Apply ``a_mode``; ``None`` if the mode is empty."""
    if mode not in config:
        return None
    below = sum(1 for m in config if m < mode)
    return tuple(m for m in config if m != mode), (-1) ** below


def enumerate_configs(n_modes: int, n_particles: int) -> list[Config]:
    return list(combinations(range(n_modes), n_particles))


def enumerate_words(k: int) -> list[Word]:
    return [tuple((w >> (k - 1 - i)) & 1 for i in range(k)) for w in range(2**k)]


def word_from_str(bits: str) -> Word:
    if any(b not in "01" for b in bits):
        raise ValueError(f"ancilla word must be a bit string, got {bits!r}")
    return tuple(int(b) for b in bits)


def word_to_str(word: Word) -> str:
    return "".join(str(b) for b in word)


@dataclass(frozen=True)
class SparseState:
    """Pure state of particles plus ancilla as a sparse map ``Key -> amplitude``.

    ``M`` is the chain length, ``x0`` the barrier site and ``k`` the ancilla
    length.  Instances are treated as immutable; every operation returns a new
    state.
    """

    M: int
    x0: int
    k: int
    amps: Mapping[Key, complex] = field(default_factory=dict)

    @property
    def n_modes(self) -> int:
        return 2 * self.M

    @classmethod
    def basis(cls, M: int, x0: int, k: int, modes: Iterable[int], word: Iterable[int] | None = None,
              ) -> "SparseState":
        """Basis ket built by successive creations ``a†_{m1} ... a†_{mN}|0>``.

        ``modes`` need not be sorted; the parity of the reordering is
        absorbed in the amplitude.
        """
        modes = tuple(modes)
        for m in modes:
            if not 0 <= m < 2 * M:
                raise ValueError(f"mode {m} outside chain of length {M}")
        word = tuple(word) if word is not None else (0,) * k
        if len(word) != k:
            raise ValueError(f"ancilla word has length {len(word)}, expected {k}")
        canon = canonical_sign(modes)
        if canon is None:
            raise ValueError(f"repeated mode in {modes}")
        config, sign = canon
        return cls(M, x0, k, {(config, word): complex(sign)})

    @classmethod
    def from_items(cls, M: int, x0: int, k: int, items: Iterable[tuple[Key, complex]]) -> "SparseState":
        amps: dict[Key, complex] = {}
        for key, a in items:
            amps[key] = amps.get(key, 0j) + a
        return cls(M, x0, k, {key: a for key, a in amps.items() if a != 0})

    def same_space(self, other: "SparseState") -> bool:
        return (self.M, self.x0, self.k) == (other.M, other.x0, other.k)

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amps.values())))

    def particle_numbers(self) -> set[int]:
        return {len(config) for config, _ in self.amps}

    def __add__(self, other: "SparseState") -> "SparseState":
        if not self.same_space(other):
            raise ValueError("cannot add states on different spaces")
        return SparseState.from_items(self.M, self.x0, self.k,
                                      list(self.amps.items()) + list(other.amps.items()))

    def __mul__(self, scalar: complex) -> "SparseState":
        return SparseState(self.M, self.x0, self.k, {key: a * scalar for key, a in self.amps.items()})

    __rmul__ = __mul__

    def with_amps(self, amps: Mapping[Key, complex]) -> "SparseState":
        return SparseState(self.M, self.x0, self.k, dict(amps))

    def remap(self, fn) -> "SparseState":
        """Apply a signed basis permutation ``fn(key) -> (key', sign)``."""
        out: dict[Key, complex] = {}
        for key, a in self.amps.items():
            new_key, sign = fn(key)
            out[new_key] = out.get(new_key, 0j) + sign * a
        return SparseState(self.M, self.x0, self.k, {kk: a for kk, a in out.items() if a != 0})

    def to_vector(self, basis: list[Key]) -> np.ndarray:
        index = {key: i for i, key in enumerate(basis)}
        v = np.zeros(len(basis), dtype=complex)
        for key, a in self.amps.items():
            v[index[key]] = a
        return v

    def occupation(self) -> np.ndarray:
        """Expected occupation number of every mode."""
        occ = np.zeros(self.n_modes)
        for (config, _), a in self.amps.items():
            p = abs(a) ** 2
            for m in config:
                occ[m] += p
        return occ

    def word_distribution(self) -> dict[Word, float]:
        dist: dict[Word, float] = {}
        for (_, word), a in self.amps.items():
            dist[word] = dist.get(word, 0.0) + abs(a) ** 2
        return dist


def inner_product(a: SparseState, b: SparseState) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if not a.same_space(b):
        raise ValueError("inner product of states with different (M, x0, k)")
    small, large = (a.amps, b.amps) if len(a.amps) <= len(b.amps) else (b.amps, a.amps)
    total = 0j
    for key in small:
        if key in large:
            total += np.conj(a.amps[key]) * b.amps[key]
    return complex(total)


def normalize(state: SparseState) -> SparseState:
    n = state.norm()
    if n == 0:
        raise ValueError("cannot normalise a zero-norm state")
    return state * (1.0 / n)


def prune(state: SparseState, eps_prune: float = 0.0) -> SparseState:
    """Drop amplitudes with modulus below ``eps_prune`` and renormalise."""
    if eps_prune <= 0:
        return state
    kept = {key: a for key, a in state.amps.items() if abs(a) >= eps_prune}
    return normalize(state.with_amps(kept))


@dataclass(frozen=True)
class DensityMatrix:
    """Dense density matrix over an enumerated basis of configurations."""

    basis: tuple
    matrix: np.ndarray

    def __post_init__(self):
        n = len(self.basis)
        if self.matrix.shape != (n, n):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match basis of size {n}")

    @classmethod
    def pure(cls, basis, vector) -> "DensityMatrix":
        v = np.asarray(vector, dtype=complex)
        return cls(tuple(basis), np.outer(v, v.conj()))

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))

    def check(self, eps_norm: float = EPS_NORM, eps_eig: float = EPS_EIG) -> None:
        """Raise ``ValueError`` unless trace one, Hermitian and PSD."""
        if abs(self.trace() - 1) > eps_norm:
            raise ValueError(f"trace {self.trace()} differs from 1")
        if np.abs(self.matrix - self.matrix.conj().T).max(initial=0) > eps_norm:
            raise ValueError("matrix is not Hermitian")
        lo = self.eigenvalues().min(initial=0)
        if lo < -eps_eig:
            raise ValueError(f"negative eigenvalue {lo}")


def config_basis(state: SparseState) -> list[Config]:
    """Full configuration basis for the particle numbers present in ``state``."""
    basis: list[Config] = []
    for n in sorted(state.particle_numbers()):
        basis.extend(enumerate_configs(state.n_modes, n))
    return basis


def partial_trace_ancilla(state: SparseState, basis: list[Config] | None = None) -> DensityMatrix:
    """Reduced density matrix of the particles, ``sum_w <w|psi><psi|w>``."""
    if basis is None:
        basis = config_basis(state)
    index = {c: i for i, c in enumerate(basis)}
    by_word: dict[Word, list[tuple[int, complex]]] = {}
    for (config, word), a in state.amps.items():
        by_word.setdefault(word, []).append((index[config], a))
    rho = np.zeros((len(basis), len(basis)), dtype=complex)
    for entries in by_word.values():
        v = np.zeros(len(basis), dtype=complex)
        for i, a in entries:
            v[i] += a
        nz = np.flatnonzero(v)
        rho[np.ix_(nz, nz)] += np.outer(v[nz], v[nz].conj())
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(tuple(basis), rho)
