"""Monte Carlo particles admitted per k qubits against the mean-density law, over a range of k."""
import argparse

from semibarrier.analysis.efficiency import EfficiencyModel, efficiency_exact, monte_carlo_qubit_usage


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M", type=int, default=40)
    ap.add_argument("--x0", type=int, default=20)
    ap.add_argument("--N", type=int, default=20)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=20260101)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    N0 = round(args.N * (2 * args.x0 - 1) / (2 * args.M))
    model = EfficiencyModel.from_box(N0, args.N - N0, args.M, args.x0)
    ks = sorted({max(1, round(efficiency_exact(model, n)[0])) for n in range(1, model.N0_bar)})
    print(f"typical N0={N0}, N0_bar={model.N0_bar}, r={model.r:.4f}")
    print(f"{'k':>4} {'simulated':>10} {'std':>7} {'predicted':>10} {'rel.dev':>8}")
    for k in ks:
        s = monte_carlo_qubit_usage(args.M, args.x0, k, args.N, args.trials, args.seed, args.threads)
        print(f"{k:>4} {s.mean:>10.3f} {s.std:>7.3f} {s.mean_predicted:>10.3f} {s.relative_deviation:>8.1%}")


if __name__ == "__main__":
    main()
