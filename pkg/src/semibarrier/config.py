"""Scenario descriptors read from YAML files and overridden from the command line."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np
import yaml

from semibarrier.analysis.sectors import labels_to_modes, n_sectors
from semibarrier.hilbert import Coin, SparseState, mode_of, normalize, word_from_str


class ConfigError(ValueError):
    pass


@dataclass
class Tolerances:
    eps_norm: float = 1e-10
    eps_eig: float = 1e-10
    tol_slater: float = 1e-8


@dataclass
class ScenarioConfig:
    M: int = 6
    x0: int = 2
    k: int = 4
    # list of [x, coin] pairs, or "random:N" for N particles on random distinct modes
    particles: list | str = field(default_factory=lambda: [[3, "left"]])
    # "basis" uses `particles`; "random" draws a random single-particle superposition;
    # "sector:n" is uniform over sector n; "label:t" sums label t over all sectors
    state: str = "basis"
    # bit string, "superposition:a,b" (first qubit), or "ghz:a,b"; empty means all zeros
    ancilla_init: str = ""
    steps: int = 12
    seed: int = 0
    threads: int = 1
    trials: int = 1000
    variant: str = "main"
    kraus: str = "stated"
    fire_on_swap: bool = True
    alpha: float = 2**-0.5
    beta: float = 2**-0.5
    side: str = "right"
    collective: int = 0
    M_values: list = field(default_factory=lambda: [6, 7, 8, 9, 10])
    x0_values: list = field(default_factory=lambda: [2, 3, 4])
    k_values: list = field(default_factory=lambda: [1, 2, 3, 4])
    T_K_cases: list = field(default_factory=lambda: [[3, 2], [5, 2], [5, 3]])
    out: str = "out"
    format: str = "csv"
    tolerances: Tolerances = field(default_factory=Tolerances)

    def validate(self, channel_only: bool = False) -> "ScenarioConfig":
        if not isinstance(self.M, int) or self.M < 3:
            raise ConfigError(f"M must be an integer >= 3, got {self.M!r}")
        if not 2 <= self.x0 <= self.M - 1:
            raise ConfigError(f"x0={self.x0} must satisfy 2 <= x0 <= M-1 (M={self.M})")
        if self.k < (0 if channel_only else 1):
            raise ConfigError(f"k={self.k} too small")
        if self.steps < 0:
            raise ConfigError("steps must be non-negative")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.variant not in ("main", "fresh"):
            raise ConfigError(f"variant must be main or fresh, got {self.variant!r}")
        if self.kraus not in ("stated", "dilation"):
            raise ConfigError(f"kraus must be stated or dilation, got {self.kraus!r}")
        if self.side not in ("left", "right"):
            raise ConfigError(f"side must be left or right, got {self.side!r}")
        for name, value in vars(self.tolerances).items():
            if not isinstance(value, (int, float)) or value < 0:
                raise ConfigError(f"tolerance {name} must be a non-negative number, got {value!r}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 unsigned bits")
        if isinstance(self.particles, str):
            if not self.particles.startswith("random:"):
                raise ConfigError(f"unrecognised particle spec {self.particles!r}")
            n = int(self.particles.split(":", 1)[1])
            if not 0 <= n <= 2 * self.M:
                raise ConfigError(f"cannot place {n} fermions on {2 * self.M} modes")
        else:
            modes = [self._mode(p) for p in self.particles]
            if len(set(modes)) != len(modes):
                raise ConfigError("particle modes must be distinct")
        self.ancilla_amplitudes()
        return self

    def _mode(self, p) -> int:
        try:
            x, c = p
            return mode_of(int(x), Coin.parse(c), self.M)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad particle entry {p!r}: {exc}") from None

    def particle_modes(self, rng: np.random.Generator | None = None) -> list[int]:
        if isinstance(self.particles, str):
            n = int(self.particles.split(":", 1)[1])
            rng = rng or np.random.default_rng(self.seed)
            return sorted(int(m) for m in rng.choice(2 * self.M, size=n, replace=False))
        return [self._mode(p) for p in self.particles]

    def ancilla_amplitudes(self) -> list[tuple[tuple[int, ...], complex]]:
        spec, k = self.ancilla_init.strip(), self.k
        if not spec:
            return [((0,) * k, 1.0)]
        if ":" in spec:
            kind, rest = spec.split(":", 1)
            try:
                a, b = (complex(v) for v in rest.split(","))
            except ValueError:
                raise ConfigError(f"bad amplitudes in {spec!r}") from None
            if not math.isclose(abs(a) ** 2 + abs(b) ** 2, 1.0, abs_tol=1e-12):
                raise ConfigError("ancilla amplitudes are not normalised")
            if kind == "superposition":
                return [((0,) * k, a), ((1,) + (0,) * (k - 1), b)]
            if kind == "ghz":
                return [((0,) * k, a), ((1,) * k, b)]
            raise ConfigError(f"unrecognised ancilla descriptor {kind!r}")
        try:
            word = word_from_str(spec)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if len(word) != k:
            raise ConfigError(f"ancilla word {spec!r} has length {len(word)}, k={k}")
        return [(word, 1.0)]

    def initial_state(self) -> SparseState:
        M, x0, k = self.M, self.x0, self.k
        rng = np.random.default_rng(self.seed)
        if self.state == "basis":
            parts = [SparseState.basis(M, x0, k, self.particle_modes(rng), w) * a
                     for w, a in self.ancilla_amplitudes()]
        else:
            T, K = 2 * x0 - 1, n_sectors(M, x0)
            modes = labels_to_modes(M, x0)
            if self.state == "random":
                amps = rng.normal(size=2 * M) + 1j * rng.normal(size=2 * M)
                labels = range(1, 2 * M + 1)
            elif self.state.startswith("sector:"):
                n = int(self.state.split(":")[1])
                labels = [t + n * T for t in range(1, T + 1) if t + n * T <= 2 * M]
                amps = np.ones(len(labels))
            elif self.state.startswith("label:"):
                t = int(self.state.split(":")[1])
                labels = [t + n * T for n in range(K) if t + n * T <= 2 * M]
                amps = np.ones(len(labels))
            else:
                raise ConfigError(f"unrecognised state {self.state!r}")
            word = self.ancilla_amplitudes()
            if len(word) != 1:
                raise ConfigError("superposed particle states need a basis-word register")
            items = [(((modes[s - 1],), word[0][0]), complex(a)) for s, a in zip(labels, amps)]
            parts = [SparseState.from_items(M, x0, k, items)]
        psi = parts[0]
        for p in parts[1:]:
            psi = psi + p
        return normalize(psi)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        data = dict(data or {})
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        tol = data.pop("tolerances", None) or {}
        try:
            tolerances = Tolerances(**tol)
        except TypeError as exc:
            raise ConfigError(f"bad tolerances: {exc}") from None
        return cls(**data, tolerances=tolerances)


def dump_config(cfg: ScenarioConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=True)


def parse_config(text: str) -> ScenarioConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    if data is not None and not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    return ScenarioConfig.from_dict(data)


def load_config(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
