"""Largest trace distance between reduced unitary dynamics and Kraus channels, per model and Kraus set."""
import argparse

import numpy as np

from semibarrier.channels import compare_reduced_to_kraus, kraus_fresh_qubit, kraus_single
from semibarrier.dynamics import BarrierSpec
from semibarrier.hilbert import SparseState, normalize


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--states", type=int, default=20)
    ap.add_argument("--steps", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    worst = {}
    for i in range(args.states):
        M = 4 + i % 5
        x0 = int(rng.integers(2, M))
        items = [(((m,), (0,) * args.steps), complex(*rng.normal(size=2))) for m in range(2 * M)]
        psi = normalize(SparseState.from_items(M, x0, args.steps, items))
        for variant in ("fresh", "main"):
            for name, kraus in (("K1/K2", kraus_single(x0, M)), ("dilation", kraus_fresh_qubit(x0, M))):
                d = max(compare_reduced_to_kraus(psi, BarrierSpec(x0), args.steps, variant, kraus))
                worst[variant, name] = max(worst.get((variant, name), 0.0), d)
    for (variant, name), d in sorted(worst.items()):
        print(f"{variant:>6} model vs {name:<9} max trace distance {d:.3e}")


if __name__ == "__main__":
    main()
