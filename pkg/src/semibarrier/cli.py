"""Command-line scenario runner.

Every subcommand reads an optional YAML config, applies command-line
overrides, writes its tables (CSV or JSON) and a JSON summary into ``--out``
and prints the summary.  Exit codes: 0 success, 2 invalid configuration,
3 numerical violation.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from semibarrier.analysis.beamsplit import beamsplit_scatter, collective_beamsplit
from semibarrier.analysis.coherence import coherence_metrics
from semibarrier.analysis.efficiency import (
    RNG_NAME,
    EfficiencyModel,
    efficiency_approx,
    efficiency_exact,
    monte_carlo_qubit_usage,
)
from semibarrier.analysis.sectors import is_inside, n_sectors, predict_trapped_mixture
from semibarrier.analysis.slater import coefficient_matrix, paired_neighbour_example, slater_rank
from semibarrier.analysis.trapping import simulate_residence, trapping_time
from semibarrier.channels import (
    compare_reduced_to_kraus,
    kraus_fresh_qubit,
    kraus_single,
    trace_distance,
)
from semibarrier.config import ConfigError, ScenarioConfig, load_config
from semibarrier.dynamics import BarrierSpec, step_multi
from semibarrier.hilbert import mode_label, partial_trace_ancilla, word_to_str

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class NumericalViolation(RuntimeError):
    pass


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_table(rows: list[dict], path: Path, fmt: str) -> Path:
    path = path.with_suffix("." + fmt)
    if fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _fmt(v) for k, v in row.items()})
    else:
        path.write_text(json.dumps(rows, indent=1, sort_keys=False) + "\n", encoding="utf-8")
    return path


def write_summary(summary: dict, out: Path, name: str) -> Path:
    path = out / f"{name}_summary.json"
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


# -- subcommands -----------------------------------------------------------

def cmd_simulate(cfg: ScenarioConfig, out: Path) -> dict:
    spec = BarrierSpec(cfg.x0, fire_on_swap=cfg.fire_on_swap)
    psi = cfg.initial_state()
    n = max(psi.particle_numbers())
    rows, consumed, superposed = [], 0, False
    for t in range(cfg.steps + 1):
        if t:
            psi, report = step_multi(psi, spec)
            if report.engaged is None:
                superposed = True
            elif report.engaged:
                consumed += 1
        norm = psi.norm()
        if abs(norm - 1) > cfg.tolerances.eps_norm:
            raise NumericalViolation(f"norm {norm!r} at t={t}")
        row = {"t": t}
        occ = psi.occupation() / n if n else psi.occupation()
        row.update({f"p_{mode_label(m)}": float(p) for m, p in enumerate(occ)})
        dist = psi.word_distribution()
        row["ancilla"] = ";".join(f"{word_to_str(w)}:{p!r}" for w, p in sorted(dist.items()))
        row["norm"] = norm
        row["engaged"] = "" if t == 0 else ("mixed" if report.engaged is None else int(report.engaged))
        rows.append(row)
    table = write_table(rows, out / "simulate", cfg.format)
    rho = partial_trace_ancilla(psi)
    cm = coherence_metrics(rho, cfg.tolerances.eps_eig)
    summary = {"steps": cfg.steps, "particles": n,
               "qubits_consumed": None if superposed else consumed,
               "final_coherence": {"rank": cm.rank, "purity": cm.purity, "l1": cm.l1},
               "table": table.name}
    if n == 1 and len(psi.amps) == 1 and not isinstance(cfg.particles, str) and len(cfg.particles) == 1:
        start = cfg.particle_modes()[0]
        if not is_inside(start, cfg.x0):
            res = simulate_residence(cfg.M, cfg.x0, cfg.k, start)
            summary["exit_step"] = res.exit_step
            summary["in_region_steps"] = res.in_region_steps
    if n == 2 and cm.rank == 1:
        w, v = np.linalg.eigh(rho.matrix)
        vec = v[:, -1]
        amps = {c: vec[i] for i, c in enumerate(rho.basis) if abs(vec[i]) > 1e-14}
        summary["slater_rank"] = slater_rank(coefficient_matrix(amps, 2 * cfg.M),
                                             cfg.tolerances.tol_slater).rank
    return summary


def cmd_trap_time(cfg: ScenarioConfig, out: Path) -> dict:
    rows = []
    for M in cfg.M_values:
        for x0 in cfg.x0_values:
            if not 2 <= x0 <= M - 1:
                continue
            for k in cfg.k_values:
                for m in range(2 * M):
                    if is_inside(m, x0):
                        continue
                    res = simulate_residence(M, x0, k, m)
                    formula = trapping_time(k, x0)
                    rows.append({"M": M, "x0": x0, "k": k, "start": mode_label(m),
                                 "simulated": res.in_region_steps, "formula": formula,
                                 "match": int(res.in_region_steps == formula)})
    table = write_table(rows, out / "trap_time", cfg.format)
    return {"cases": len(rows), "all_match": all(r["match"] for r in rows), "table": table.name}


def cmd_efficiency(cfg: ScenarioConfig, out: Path) -> dict:
    if not (isinstance(cfg.particles, str) and cfg.particles.startswith("random:")):
        raise ConfigError("efficiency needs particles: random:N")
    N = int(cfg.particles.split(":")[1])
    stats = monte_carlo_qubit_usage(cfg.M, cfg.x0, cfg.k, N, cfg.trials, cfg.seed, cfg.threads)
    rows = [{"trial": i, "N0": t.N0, "N0_bar": t.N0_bar, "simulated_N_k": t.entries,
             "predicted_N_k": t.predicted, "steps": t.steps} for i, t in enumerate(stats.trials)]
    table = write_table(rows, out / "efficiency", cfg.format)
    N0 = round(N * (2 * cfg.x0 - 1) / (2 * cfg.M))
    model = EfficiencyModel.from_box(N0, N - N0, cfg.M, cfg.x0)
    curve = []
    for nk in range(model.N0_bar + 1):
        approx = efficiency_approx(model, nk)
        curve.append({"N_k": nk, "k_exact": efficiency_exact(model, nk)[0],
                      "k_general": approx.k_general, "k_eq": approx.k_eq, "k_ll": approx.k_ll})
    write_table(curve, out / "efficiency_law", cfg.format)
    return {"N": N, "k": cfg.k, "trials": cfg.trials, "mean_simulated": stats.mean,
            "std_simulated": stats.std, "mean_predicted": stats.mean_predicted,
            "relative_deviation": stats.relative_deviation, "rng": RNG_NAME,
            "metadata": stats.metadata, "table": table.name}


def cmd_coherence(cfg: ScenarioConfig, out: Path) -> dict:
    spec = BarrierSpec(cfg.x0, fire_on_swap=cfg.fire_on_swap)
    psi = cfg.initial_state()
    K, T = n_sectors(cfg.M, cfg.x0), 2 * cfg.x0 - 1
    rho0 = partial_trace_ancilla(psi)
    predicted = predict_trapped_mixture(psi)
    rows = []
    for t in range(K * T + 1):
        if t:
            psi = step_multi(psi, spec)[0]
        cm = coherence_metrics(partial_trace_ancilla(psi), cfg.tolerances.eps_eig)
        rows.append({"t": t, "rank": cm.rank, "purity": cm.purity, "l1": cm.l1})
    table = write_table(rows, out / "coherence", cfg.format)
    final = partial_trace_ancilla(psi)
    try:
        final.check(cfg.tolerances.eps_norm, cfg.tolerances.eps_eig)
    except ValueError as exc:
        raise NumericalViolation(str(exc)) from None
    m0, m1 = coherence_metrics(rho0, cfg.tolerances.eps_eig), coherence_metrics(final, cfg.tolerances.eps_eig)
    return {"K": K, "T": T, "initial": vars(m0), "trapped": vars(m1),
            "prediction_trace_distance": trace_distance(final, predicted), "table": table.name}


def cmd_slater(cfg: ScenarioConfig, out: Path) -> dict:
    rows = [vars(paired_neighbour_example(T, K, cfg.tolerances.tol_slater)) for T, K in cfg.T_K_cases]
    table = write_table(rows, out / "slater", cfg.format)
    return {"cases": rows, "table": table.name}


def cmd_beamsplit(cfg: ScenarioConfig, out: Path) -> dict:
    if cfg.collective:
        # one qubit per step, so particle i meets qubit i
        res = collective_beamsplit(cfg.alpha, cfg.beta, cfg.collective, "fresh")
        summary = {"particles": cfg.collective, "p_all_transmit": res.p_all_transmit,
                   "p_all_reflect": res.p_all_reflect, "schmidt_rank": res.schmidt_rank}
    else:
        res = beamsplit_scatter(cfg.side, cfg.alpha, cfg.beta, cfg.M, cfg.x0)
        summary = {"side": cfg.side, "p_transmit": res.p_transmit, "p_reflect": res.p_reflect,
                   "schmidt_rank": res.schmidt_rank}
        summary["ancilla"] = ";".join(f"{word_to_str(w)}:{p!r}" for w, p in sorted(res.ancilla_words.items()))
    table = write_table([summary], out / "beamsplit", cfg.format)
    return {**summary, "table": table.name}


def cmd_kraus_compare(cfg: ScenarioConfig, out: Path) -> dict:
    spec = BarrierSpec(cfg.x0)
    psi = cfg.initial_state()
    kraus = kraus_single(cfg.x0, cfg.M) if cfg.kraus == "stated" else kraus_fresh_qubit(cfg.x0, cfg.M)
    if cfg.variant == "fresh" and cfg.k < cfg.steps:
        raise ConfigError(f"fresh-qubit variant needs k >= steps ({cfg.k} < {cfg.steps})")
    dists = compare_reduced_to_kraus(psi, spec, cfg.steps, cfg.variant, kraus)
    rows = [{"t": t, "trace_distance": d} for t, d in enumerate(dists)]
    table = write_table(rows, out / "kraus_compare", cfg.format)
    return {"variant": cfg.variant, "kraus": cfg.kraus, "max_trace_distance": max(dists),
            "table": table.name}


COMMANDS = {
    "simulate": cmd_simulate,
    "trap-time": cmd_trap_time,
    "efficiency": cmd_efficiency,
    "coherence": cmd_coherence,
    "slater": cmd_slater,
    "beamsplit": cmd_beamsplit,
    "kraus-compare": cmd_kraus_compare,
}

# flag -> (config attribute, type)
OVERRIDES = {
    "M": int, "x0": int, "k": int, "steps": int, "seed": int, "threads": int, "trials": int,
    "particles": str, "state": str, "ancilla_init": str, "variant": str, "kraus": str,
    "alpha": float, "beta": float, "side": str, "collective": int, "out": str, "format": str,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML scenario file")
    for name, typ in OVERRIDES.items():
        flag = "--" + name.replace("_", "-")
        kwargs = {"type": typ, "default": None, "dest": name}
        if name == "format":
            kwargs["choices"] = ["csv", "json"]
        common.add_argument(flag, **kwargs)
    common.add_argument("--no-fire-on-swap", action="store_true", default=None,
                        help="do not cycle the register when both barrier modes are occupied")
    parser = argparse.ArgumentParser(prog="semibarrier", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def resolve_config(args: argparse.Namespace) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    for name in OVERRIDES:
        value = getattr(args, name)
        if value is None:
            continue
        if name == "particles" and not value.startswith("random:"):
            value = [[int(x), c] for x, c in (p.split(",") for p in value.split(";"))]
        setattr(cfg, name, value)
    if args.no_fire_on_swap:
        cfg.fire_on_swap = False
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        cfg.validate(channel_only=args.command == "kraus-compare")
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        summary = COMMANDS[args.command](cfg, out)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalViolation, np.linalg.LinAlgError) as exc:
        print(f"numerical violation: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # validation failures raised below the config layer
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    summary = {"command": args.command, **summary}
    write_summary(summary, out, args.command.replace("-", "_"))
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
