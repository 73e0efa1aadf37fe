"""Command-line entry point: run, compare, matrix, oracle, validate."""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .appendix_oracle import run_discrepancy_report
from .config import (PRESETS, ScenarioConfig, apply_env, describe, gamma_from_preset,
                     load_config)
from .diagnostics import compare_records, emit_plot, export_csv, run_scenario
from .dissipators import DissipatorMode
from .errors import ConfigError, IntegrityError, NumericalFailure
from .metrics import cnot_state_error
from .model import TWO_PI, BathParams

log = logging.getLogger("spinchain_cnot")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTEGRITY, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4, 5

# invariant thresholds reported by `validate` and the acceptance suite
VALIDATE_TRACE = 1e-8
VALIDATE_HERM = 1e-10
VALIDATE_MIN_EIG = -1e-6


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", type=Path, help="scenario file (INI sections)")
    sp.add_argument("--mode", choices=[m.value for m in DissipatorMode])
    sp.add_argument("--temperature", type=float, metavar="K")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--gamma", type=float, metavar="RATE",
                   help="target emission rate, units of 2pi MHz")
    g.add_argument("--preset", choices=sorted(PRESETS))
    sp.add_argument("--rabi", type=float, metavar="RATE", help="Rabi frequency, 2pi MHz")
    sp.add_argument("--dt", type=float, metavar="US")
    sp.add_argument("--horizon", type=float, metavar="US")
    sp.add_argument("--out", type=Path, metavar="DIR")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--plot", action="store_true", help="also write SVG plots")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spinchain-cnot",
                                 description="CNOT decoherence on a three-spin Ising chain")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, text in [("run", "integrate one scenario"),
                       ("compare", "run both dissipator modes and diff them"),
                       ("validate", "invariant checks on the default scenario")]:
        _common(sub.add_parser(name, help=text))
    mx = sub.add_parser("matrix", help="T in {0, T} x gamma in {lo, hi} x both modes")
    _common(mx)
    mx.add_argument("--gamma-low", type=float, metavar="RATE", default=PRESETS["lo"])
    mx.add_argument("--gamma-high", type=float, metavar="RATE", default=PRESETS["hi"])
    mx.add_argument("--jobs", type=int, default=1)
    orc = sub.add_parser("oracle", help="operator form vs transcribed appendix equations")
    _common(orc)
    orc.add_argument("--samples", type=int, default=100)
    return ap


def resolve_config(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    cfg = apply_env(cfg)
    try:
        if args.mode:
            cfg = cfg.with_(mode=DissipatorMode.parse(args.mode))
        bath = cfg.bath
        if args.temperature is not None:
            bath = replace(bath, temperature=args.temperature)
        if args.gamma is not None:
            bath = replace(bath, gamma_target=args.gamma * TWO_PI)
        if args.preset:
            bath = replace(bath, gamma_target=gamma_from_preset(args.preset))
        cfg = cfg.with_(bath=bath)
        if args.rabi is not None:
            cfg = cfg.with_(system=replace(cfg.system, rabi=args.rabi * TWO_PI))
        if args.dt is not None:
            cfg = cfg.with_(integrator=replace(cfg.integrator, dt=args.dt))
        if args.horizon is not None:
            cfg = cfg.with_(horizon=args.horizon)
        if args.out is not None:
            cfg = cfg.with_(out_dir=args.out)
        if args.seed is not None:
            cfg = cfg.with_(seed=args.seed)
        if args.plot:
            cfg = cfg.with_(plot=True)
        cfg.integrator.resolve_dt(cfg.system)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def scenario_stem(cfg: ScenarioConfig, mode: DissipatorMode | None = None) -> str:
    mode = mode or cfg.mode
    return f"T{cfg.bath.temperature:g}_g{cfg.bath.gamma_target / TWO_PI:g}_{mode.value}"


def _monitor_line(rec) -> str:
    return (f"peak trace dev {rec.peak_trace_dev:.3e}, peak herm dev {rec.peak_herm_dev:.3e}, "
            f"min eigenvalue {rec.min_min_eig:.3e}")


def _write_record(cfg, rec, stem) -> Path:
    path = cfg.out_dir / f"{stem}.csv"
    export_csv(rec, path)
    if cfg.plot:
        emit_plot(rec, cfg.out_dir / f"{stem}.svg", title=stem)
    return path


def cmd_run(cfg: ScenarioConfig, args) -> int:
    res = run_scenario(cfg)
    rec = res.record
    path = _write_record(cfg, rec, scenario_stem(cfg))
    print(describe(cfg))
    print(f"horizon {res.horizon:g} us, {rec.steps} steps, dt {rec.dt:.4g} us")
    print(f"final purity {rec.purity[-1]:.6f}, final rho_88 {rec.populations[-1][-1]:.6f}")
    print(_monitor_line(rec))
    print(f"wrote {path}")
    return EXIT_OK


def _compare_and_write(cfg: ScenarioConfig, stem_of, summary_stem: str, jobs: int = 1):
    modes = (DissipatorMode.MARKOVIAN, DissipatorMode.QUASI)
    recs = _run_many([(cfg, m) for m in modes], jobs)
    for m, rec in zip(modes, recs):
        _write_record(cfg, rec, stem_of(m))
    summary = compare_records(*recs)
    export_csv(summary, cfg.out_dir / f"{summary_stem}.csv")
    return summary, recs


def _run_one(job):
    cfg, mode = job
    return run_scenario(cfg, mode=mode).record


def _run_many(jobs_list, jobs: int):
    if jobs <= 1 or len(jobs_list) == 1:
        return [_run_one(j) for j in jobs_list]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, jobs_list))


def cmd_compare(cfg: ScenarioConfig, args) -> int:
    base = f"T{cfg.bath.temperature:g}_g{cfg.bath.gamma_target / TWO_PI:g}"
    summary, recs = _compare_and_write(cfg, lambda m: scenario_stem(cfg, m), f"{base}_compare")
    print(describe(cfg))
    print(f"max |diag diff| {summary.max_diag_diff:.3e}, max |coherence diff| "
          f"{summary.max_coh_diff:.3e}, max |purity diff| {summary.max_purity_diff:.3e}")
    print(f"wrote {cfg.out_dir}")
    return EXIT_OK


def matrix_configs(cfg: ScenarioConfig, warm: float, gamma_low: float, gamma_high: float):
    """(tag, config) for the four temperature x dissipation quadrants."""
    out = []
    for temp in (0.0, warm):
        for level, g in (("lo", gamma_low), ("hi", gamma_high)):
            bath = BathParams(temperature=temp, gamma_target=g * TWO_PI,
                              hbar_over_kb=cfg.bath.hbar_over_kb)
            out.append((f"T{temp:g}_{level}", cfg.with_(bath=bath)))
    return out


def cmd_matrix(cfg: ScenarioConfig, args) -> int:
    warm = 300.0 if args.temperature is None else args.temperature
    if args.gamma is not None or args.preset:
        raise ConfigError("matrix takes --gamma-low/--gamma-high, not --gamma/--preset")
    quads = matrix_configs(cfg, warm, args.gamma_low, args.gamma_high)
    modes = (DissipatorMode.MARKOVIAN, DissipatorMode.QUASI)
    jobs = [(c, m) for _, c in quads for m in modes]
    recs = _run_many(jobs, args.jobs)
    print(f"{'scenario':<18}{'max|ddiag|':>12}{'max|dcoh|':>12}{'max|dpur|':>12}")
    for qi, (tag, c) in enumerate(quads):
        pair = recs[2 * qi: 2 * qi + 2]
        for m, rec in zip(modes, pair):
            _write_record(cfg, rec, f"{tag}_{m.value}")
            log.info("%s_%s: %s", tag, m.value, _monitor_line(rec))
        summary = compare_records(*pair)
        export_csv(summary, cfg.out_dir / f"{tag}_compare.csv")
        print(f"{tag:<18}{summary.max_diag_diff:>12.3e}{summary.max_coh_diff:>12.3e}"
              f"{summary.max_purity_diff:>12.3e}")
    print(f"wrote {len(jobs)} scenario files and {len(quads)} summaries to {cfg.out_dir}")
    return EXIT_OK


def cmd_oracle(cfg: ScenarioConfig, args) -> int:
    report = run_discrepancy_report(n_samples=args.samples, seed=cfg.seed, p=cfg.system)
    txt, tab = report.write(cfg.out_dir)
    sys.stdout.write(report.to_text())
    print(f"wrote {txt} and {tab}")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_validate(cfg: ScenarioConfig, args) -> int:
    """Closed-system CNOT check plus one dissipative run per mode."""
    ok = True
    closed = cfg.with_(bath=BathParams(0.0, 0.0), horizon=None)
    p = closed.system
    from .pulses import cnot_sequence
    seq = cnot_sequence(p, closed.trailing_pulses)
    after2 = seq.pulses[1].end_time
    rec = run_scenario(closed.with_(horizon=after2)).record
    err = cnot_state_error(rec.final_state)
    line = f"closed-system CNOT after pulse 2: state error {err:.3e}"
    print(line + ("" if err <= 0.02 else "  FAIL"))
    ok &= err <= 0.02
    for mode in DissipatorMode:
        rec = run_scenario(cfg, mode=mode).record
        good = (rec.peak_trace_dev <= VALIDATE_TRACE and rec.peak_herm_dev <= VALIDATE_HERM
                and rec.min_min_eig >= VALIDATE_MIN_EIG)
        print(f"{describe(cfg.with_(mode=mode))}\n  {_monitor_line(rec)}"
              + ("" if good else "  FAIL"))
        ok &= good
    print("RESULT: " + ("PASS" if ok else "FAIL"))
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"run": cmd_run, "compare": cmd_compare, "matrix": cmd_matrix,
            "oracle": cmd_oracle, "validate": cmd_validate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except NumericalFailure as exc:
        print(f"numerical failure at t={exc.t:.6g} us: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
