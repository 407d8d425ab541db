"""Command-line surface: simulate / sweep / verify.

Configs are strict JSON (unknown keys rejected, every physical value
validated at load). All CSV output is locale-independent, 12 significant
digits, LF line endings, and byte-stable across repeated runs.

Exit codes: 0 success, 1 usage/config error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

import numpy as np

from .dynamics import IntegrationError, IntegratorConfig, LiouvillianCache, evolve
from .experiments import (
    PRESETS,
    SweepResult,
    SweepSpec,
    run_sweep,
    sample_disorder,
)
from .hilbert import SystemParams
from .states import dicke_state, product_state, to_density, vacuum_density
from .verify import run_verification

SIMULATE_HEADER = "tau,n_ph,n_q,rate_n_ph,rate_n_q"
SWEEP_HEADER = (
    "family,n_qubits,n_excited,kappa_over_g,omega_spread,gamma,gamma_phi,seed,"
    "max_n_ph,max_rate_n_ph,max_emission_rate,per_excitation_emission,"
    "argmax_tau_n_ph,status"
)


class ConfigError(ValueError):
    pass


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _reject_unknown(section: dict, allowed: set[str], where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}"
        ) from exc


def dump_config(config: dict) -> str:
    """Canonical serialization; load->dump->load is idempotent."""
    return json.dumps(config, sort_keys=True, indent=2) + "\n"


def parse_integrator(section: dict) -> IntegratorConfig:
    allowed = {
        "rel_tol", "abs_tol", "tau_max", "initial_step",
        "max_step", "early_stop_threshold", "sample_dtau",
    }
    _reject_unknown(section, allowed, "integrator")
    try:
        return IntegratorConfig(**section)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"integrator: {exc}") from exc


def parse_simulate_config(config: dict):
    _reject_unknown(config, {"system", "initial_state", "integrator"}, "config")
    sys_sec = dict(config.get("system", {}))
    _reject_unknown(
        sys_sec,
        {"n_qubits", "g", "omega", "kappa_over_g", "kappa", "gamma",
         "gamma_phi", "epsilons"},
        "system",
    )
    if "kappa_over_g" in sys_sec:
        if "kappa" in sys_sec:
            raise ConfigError("system: give kappa or kappa_over_g, not both")
        sys_sec["kappa"] = sys_sec.pop("kappa_over_g") * sys_sec.get("g", 0.012)
    if sys_sec.get("epsilons") is not None:
        sys_sec["epsilons"] = tuple(sys_sec["epsilons"])
    elif "epsilons" in sys_sec:
        del sys_sec["epsilons"]
    try:
        params = SystemParams(**sys_sec)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"system: {exc}") from exc

    st = dict(config.get("initial_state", {}))
    _reject_unknown(st, {"family", "n_excited", "mask"}, "initial_state")
    family = st.get("family", "product")
    n_excited = st.get("n_excited", 1)
    try:
        if family == "product":
            rho0 = to_density(
                product_state(params.n_qubits, n_excited, st.get("mask"))
            )
            n_ex = n_excited
        elif family == "dicke":
            rho0 = to_density(dicke_state(params.n_qubits, n_excited))
            n_ex = n_excited
        elif family == "vacuum":
            n_ex = max(n_excited, 0)
            rho0 = vacuum_density(params.n_qubits, n_ex)
        else:
            raise ConfigError(f"initial_state: unknown family {family!r}")
    except ValueError as exc:
        raise ConfigError(f"initial_state: {exc}") from exc

    integ = parse_integrator(dict(config.get("integrator", {})))
    return params, rho0, n_ex, integ


def parse_sweep_config(config: dict, seed_override: int | None = None) -> SweepSpec:
    _reject_unknown(config, {"sweep", "integrator"}, "config")
    sec = dict(config.get("sweep", {}))
    allowed = {
        "families", "n_qubits", "n_excited", "kappa_over_g", "omega_spread",
        "seeds", "g", "omega", "gamma", "gamma_phi",
    }
    _reject_unknown(sec, allowed, "sweep")
    for key in ("families", "n_qubits", "kappa_over_g", "omega_spread", "seeds"):
        if key in sec:
            sec[key] = tuple(sec[key])
    if isinstance(sec.get("n_excited"), list):
        sec["n_excited"] = tuple(sec["n_excited"])
    sec["integrator"] = parse_integrator(dict(config.get("integrator", {})))
    try:
        spec = SweepSpec(**sec)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"sweep: {exc}") from exc
    if seed_override is not None:
        from dataclasses import replace

        spec = replace(spec, seeds=(seed_override,))
    return spec


def write_simulate_csv(series, path: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(SIMULATE_HEADER + "\n")
        for row in zip(
            series.tau, series.n_ph, series.n_q, series.rate_n_ph, series.rate_n_q
        ):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def sweep_rows_to_csv(result: SweepResult) -> str:
    lines = [SWEEP_HEADER]
    for row in result.rows:
        p = row.point
        head = [
            p.family, str(p.n_qubits), str(p.n_excited), _fmt(p.kappa_over_g),
            _fmt(p.omega_spread), _fmt(row.gamma), _fmt(row.gamma_phi),
            str(p.seed),
        ]
        if row.status == "ok":
            m = row.metrics
            tail = [
                _fmt(m.max_n_ph), _fmt(m.max_rate_n_ph),
                _fmt(m.max_emission_rate), _fmt(m.per_excitation_emission),
                _fmt(m.argmax_tau_n_ph), "ok",
            ]
        else:
            tail = ["", "", "", "", "", "failed"]
        lines.append(",".join(head + tail))
    return "\n".join(lines) + "\n"


def write_sweep_csv(result: SweepResult, path: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(sweep_rows_to_csv(result))


def cmd_simulate(args) -> int:
    params, rho0, n_ex, integ = parse_simulate_config(load_config(args.config))
    cache = LiouvillianCache(params, n_ex)
    try:
        series = evolve(cache, rho0, integ)
    except IntegrationError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return 2
    write_simulate_csv(series, args.out)
    print(f"wrote {len(series.tau)} samples to {args.out}")
    return 0


def cmd_sweep(args) -> int:
    if args.preset:
        from .experiments import preset_spec

        spec = preset_spec(args.preset)
        if args.seed is not None:
            from dataclasses import replace

            spec = replace(spec, seeds=(args.seed,))
    elif args.config:
        spec = parse_sweep_config(load_config(args.config), args.seed)
    else:
        raise ConfigError("sweep needs --config or --preset")
    result = run_sweep(spec, jobs=args.jobs)
    write_sweep_csv(result, args.out)
    n_fail = sum(r.status == "failed" for r in result.rows)
    print(f"wrote {len(result.rows)} rows to {args.out} ({n_fail} failed)")
    if result.rows and n_fail == len(result.rows):
        return 2
    return 0


def cmd_verify(args) -> int:
    checks = run_verification(perturb=args.perturb)
    for c in checks:
        print(c.line())
    return 0 if all(c.passed for c in checks) else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dickesim",
        description="Dissipative qubit-ensemble/cavity dynamics simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="single trajectory -> CSV")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out", required=True)

    p_sweep = sub.add_parser("sweep", help="parameter sweep -> CSV")
    p_sweep.add_argument("--config")
    p_sweep.add_argument("--preset", choices=PRESETS)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--seed", type=int, default=None)

    p_ver = sub.add_parser("verify", help="run the oracle suite")
    p_ver.add_argument("--perturb", type=float, default=0.0,
                       help=argparse.SUPPRESS)  # negative-control test hook
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": cmd_simulate,
        "sweep": cmd_sweep,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
