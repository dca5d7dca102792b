"""Print the worked single- and two-particle trajectories step by step."""
import argparse

from semibarrier.dynamics import BarrierSpec, evolve, post_barrier_view
from semibarrier.hilbert import Coin, SparseState, mode_label, mode_of, word_to_str

L = Coin.LEFT


def show(states, spec, title):
    print(title)
    print(f"{'t':>3}  {'state':<14} {'register':<8}  {'after next barrier':<18}")
    for t, s in enumerate(states):
        ((config, word),) = s.amps
        ((pconf, pword),) = post_barrier_view(s, spec).amps
        fmt = lambda c: ",".join(mode_label(m) for m in c)
        print(f"{t:>3}  {fmt(config):<14} {word_to_str(word):<8}  {fmt(pconf)} {word_to_str(pword)}")
    print()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--steps", type=int, default=8)
    args = ap.parse_args()
    spec = BarrierSpec(2)
    for x in (3, 6):
        psi = SparseState.basis(6, 2, args.k, [mode_of(x, L)])
        show(evolve(psi, spec, args.steps)[0], spec, f"M=6, x0=2, start |{x},←>")
    psi = SparseState.basis(7, 2, args.k, [mode_of(3, L), mode_of(7, L)])
    show(evolve(psi, spec, args.steps)[0], spec, "M=7, x0=2, start a†(3,←) a†(7,←)|0>")


if __name__ == "__main__":
    main()
