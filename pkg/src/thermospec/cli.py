"""Command-line front end: experiment orchestration and CSV/JSON emission.

Subcommands: ``spectrum``, ``evolve``, ``resolvent``, ``decay``, ``verify``.
Configuration comes from built-in defaults, then an optional ``key = value``
config file, then command-line flags (later sources win).  Outputs are
deterministic: identical configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .basis import BoundaryKind
from .generator import (CoupledGenerator, CouplingSpec, StateVector, apply, assemble,
                        energy_norm_sq, energy_pairing, solve_shifted,
                        thermal_dissipation)
from .evolution import evolve, strong_stability_report
from .resolvent import growth_exponent, scan, witness
from .stability import (fit_polynomial_decay, modal_cubic, spectrum,
                        valid_fit_horizon, MIN_FIT_DECADES)

#: Residual-ratio factor above which one decay model is declared preferred.
MODEL_PREFERENCE_FACTOR = 10.0


class ConfigError(ValueError):
    """Invalid configuration key or value; reported with exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    bc_pair: str = "DD"
    gamma: float = 1.0
    alpha: float | None = None
    beta: float | None = None
    mode_count: int = 128
    length: float = math.pi
    t_min: float = 1.0
    t_max: float = 1000.0
    time_samples: int = 64
    time_spacing: str = "log"
    lambda_grid: str = "modes"
    lambda_min: float = 1.0
    lambda_max: float | None = None
    lambda_samples: int = 49
    initial_kind: str = "power_law"
    initial_mode: int = 1
    initial_block: str = "v"
    initial_exponent: float = 2.0
    output: str | None = None
    seed: int = 20240

    def coupling(self) -> CouplingSpec:
        if (self.alpha is None) != (self.beta is None):
            raise ConfigError("keys 'alpha' and 'beta' must be set together")
        if self.alpha is not None:
            return CouplingSpec(self.alpha, self.beta)
        return CouplingSpec.symmetric(self.gamma)

    def boundary_pair(self) -> tuple[BoundaryKind, BoundaryKind]:
        if len(self.bc_pair) != 2:
            raise ConfigError(f"key 'bc_pair' must be two letters from {{D,N}}, got {self.bc_pair!r}")
        try:
            return BoundaryKind.parse(self.bc_pair[0]), BoundaryKind.parse(self.bc_pair[1])
        except ValueError as exc:
            raise ConfigError(f"key 'bc_pair': {exc}") from None


_CONFIG_TYPES = {
    "bc_pair": str, "gamma": float, "alpha": float, "beta": float,
    "mode_count": int, "length": float,
    "t_min": float, "t_max": float, "time_samples": int, "time_spacing": str,
    "lambda_grid": str, "lambda_min": float, "lambda_max": float, "lambda_samples": int,
    "initial_kind": str, "initial_mode": int, "initial_block": str,
    "initial_exponent": float, "output": str, "seed": int,
}

_CHOICE_KEYS = {
    "time_spacing": ("linear", "log"),
    "lambda_grid": ("modes", "linear"),
    "initial_kind": ("zero", "single_mode", "power_law"),
    "initial_block": ("u", "v", "theta"),
}


def _parse_config_file(path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, text = (part.strip() for part in line.partition("="))
        values[key] = _convert(key, text, where=f"{path}:{lineno}")
    return values


def _convert(key: str, text: str, where: str = "command line"):
    if key not in _CONFIG_TYPES:
        raise ConfigError(f"{where}: unknown configuration key {key!r}")
    try:
        value = _CONFIG_TYPES[key](text)
    except ValueError:
        raise ConfigError(
            f"{where}: key {key!r} expects {_CONFIG_TYPES[key].__name__}, got {text!r}") from None
    if key in _CHOICE_KEYS and value not in _CHOICE_KEYS[key]:
        raise ConfigError(f"{where}: key {key!r} must be one of {_CHOICE_KEYS[key]}, got {value!r}")
    return value


def _load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if args.config is not None:
        config = replace(config, **_parse_config_file(args.config))
    overrides = {}
    for field in fields(RunConfig):
        value = getattr(args, field.name, None)
        if value is not None:
            if field.name in _CHOICE_KEYS and value not in _CHOICE_KEYS[field.name]:
                raise ConfigError(
                    f"key {field.name!r} must be one of {_CHOICE_KEYS[field.name]}, got {value!r}")
            overrides[field.name] = value
    config = replace(config, **overrides)
    if config.mode_count < 1:
        raise ConfigError(f"key 'mode_count' must be positive, got {config.mode_count}")
    if config.length <= 0:
        raise ConfigError(f"key 'length' must be positive, got {config.length}")
    return config


def _build_generator(config: RunConfig) -> CoupledGenerator:
    bc_u, bc_theta = config.boundary_pair()
    return assemble(bc_u, bc_theta, config.coupling(), config.mode_count, config.length)


def _time_grid(config: RunConfig) -> np.ndarray:
    if config.t_min >= config.t_max:
        raise ConfigError(f"key 't_min' must be below 't_max', got [{config.t_min}, {config.t_max}]")
    if config.time_samples < 2:
        raise ConfigError(f"key 'time_samples' must be at least 2, got {config.time_samples}")
    if config.time_spacing == "log":
        if config.t_min <= 0:
            raise ConfigError("key 't_min' must be positive for log spacing")
        return np.geomspace(config.t_min, config.t_max, config.time_samples)
    return np.linspace(config.t_min, config.t_max, config.time_samples)


def _initial_state(config: RunConfig, gen: CoupledGenerator) -> StateVector:
    n = gen.mode_count
    blocks = {name: np.zeros(n, dtype=complex) for name in ("u", "v", "theta")}
    if config.initial_kind == "single_mode":
        m = config.initial_mode
        if not 1 <= m <= n:
            raise ConfigError(f"key 'initial_mode' must lie in 1..{n}, got {m}")
        blocks[config.initial_block][m - 1] = 1.0
    elif config.initial_kind == "power_law":
        # velocity-block excitation with amplitudes m^(-s)
        blocks["v"] = np.arange(1, n + 1, dtype=float) ** (-config.initial_exponent)
    return StateVector(blocks["u"], blocks["v"], blocks["theta"])


def _format_float(x: float) -> str:
    return f"{x:.17g}"


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text)


def _write_json(path: str, payload: dict) -> None:
    _write_text(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _complex_list(values: np.ndarray) -> list[dict]:
    return [{"re": float(z.real), "im": float(z.imag)} for z in values]


def _coupling_payload(coupling: CouplingSpec) -> dict:
    if coupling.is_symmetric:
        return {"gamma": coupling.alpha}
    return {"gamma": None, "alpha": coupling.alpha, "beta": coupling.beta}


def _coupling_label(coupling: CouplingSpec) -> str:
    if coupling.is_symmetric:
        return f"gamma={coupling.alpha:g}"
    return f"alpha={coupling.alpha:g} beta={coupling.beta:g}"


def cmd_spectrum(config: RunConfig) -> int:
    gen = _build_generator(config)
    report = spectrum(gen)
    radius = float(np.abs(report.eigenvalues).max()) if report.eigenvalues.size else 1.0
    axis_tol = 1e-9 * max(radius, 1.0)
    on_axis = int(np.sum(np.abs(report.eigenvalues.real) <= axis_tol))
    payload = {
        "bc_pair": gen.bc_label,
        **_coupling_payload(gen.coupling),
        "mode_count": gen.mode_count,
        "length": gen.basis_u.length,
        "spectral_abscissa": report.spectral_abscissa,
        "min_distance_to_imaginary_axis": report.min_distance_to_imaginary_axis,
        "eigenvalues": _complex_list(report.eigenvalues),
        "on_axis_count": on_axis,
        "strong_stability_precondition": on_axis == 0,
    }
    path = config.output or "spectrum.json"
    _write_json(path, payload)
    print(f"spectrum: {gen.bc_label} {_coupling_label(gen.coupling)} N={gen.mode_count} "
          f"abscissa={report.spectral_abscissa:.6e} -> {path}")
    if on_axis:
        print(f"spectrum: {on_axis} eigenvalue(s) on the imaginary axis; "
              "strong-stability precondition fails")
    return 0


def cmd_evolve(config: RunConfig) -> int:
    gen = _build_generator(config)
    trace = evolve(gen, _initial_state(config, gen), _time_grid(config))
    report = strong_stability_report(trace)
    # contraction is an invariant of the symmetric coupling only; generalized
    # pairs are merely quasi-contractive and may gain energy transiently
    if gen.coupling.is_symmetric and not report["monotone"]:
        print("evolve: internal invariant violated, energy trace is not non-increasing",
              file=sys.stderr)
        return 1
    lines = ["t,energy,state_norm"]
    for t, e, s in zip(trace.times, trace.energy, trace.state_norms):
        lines.append(f"{_format_float(t)},{_format_float(e)},{_format_float(s)}")
    path = config.output or "trace.csv"
    _write_text(path, "\n".join(lines) + "\n")
    print(f"evolve: {gen.bc_label} {_coupling_label(gen.coupling)} N={gen.mode_count} "
          f"E({trace.times[0]:g})={trace.energy[0]:.6e} "
          f"E({trace.times[-1]:g})={trace.energy[-1]:.6e} "
          f"ratio={report['terminal_ratio']:.6e} -> {path}")
    return 0


def _lambda_grid(config: RunConfig, gen: CoupledGenerator) -> np.ndarray:
    if config.lambda_grid == "modes":
        top = config.lambda_max if config.lambda_max is not None else gen.mode_count // 2
        lo, hi = int(config.lambda_min), int(top)
        if not 1 <= lo <= hi <= gen.mode_count:
            raise ConfigError(
                f"mode-indexed lambda grid [{lo}, {hi}] must lie in 1..{gen.mode_count}")
        return np.sqrt(gen.lambda_u[lo - 1:hi])
    if config.lambda_max is None:
        raise ConfigError("key 'lambda_max' is required for a linear lambda grid")
    if config.lambda_samples < 2:
        raise ConfigError(f"key 'lambda_samples' must be at least 2, got {config.lambda_samples}")
    return np.linspace(config.lambda_min, config.lambda_max, config.lambda_samples)


def cmd_resolvent(config: RunConfig) -> int:
    if config.mode_count < 8:
        raise ConfigError("key 'mode_count' must be at least 8 for fitting subcommands")
    gen = _build_generator(config)
    result = scan(gen, _lambda_grid(config, gen))

    lines = ["lambda,resolvent_norm,flagged"]
    for lam, norm, flag in zip(result.lambdas, result.norms, result.flagged):
        lines.append(f"{_format_float(lam)},{_format_float(norm)},{str(bool(flag)).lower()}")
    csv_path = config.output or "resolvent.csv"
    _write_text(csv_path, "\n".join(lines) + "\n")

    # Truncation-edge policy: fit only below the square root of the middle
    # retained eigenvalue, where the spectrum is faithful.
    cutoff = math.sqrt(gen.lambda_u[gen.mode_count // 2 - 1])
    in_window = int(np.searchsorted(result.lambdas, cutoff, side="right"))
    if np.any(result.flagged[:in_window]):
        print("resolvent: eigenvalue hits inside the fit window; shift the grid",
              file=sys.stderr)
        return 1
    fit = growth_exponent(result, (0, in_window))
    json_path = str(Path(csv_path).with_suffix("")) + "_fit.json"
    _write_json(json_path, {
        "bc_pair": gen.bc_label,
        **_coupling_payload(gen.coupling),
        "mode_count": gen.mode_count,
        "lambda_cutoff": cutoff,
        "fit_points": in_window,
        "slope": fit["slope"],
        "intercept": fit["intercept"],
        "r_squared": fit["r_squared"],
    })
    print(f"resolvent: {gen.bc_label} {_coupling_label(gen.coupling)} N={gen.mode_count} "
          f"growth slope={fit['slope']:.4f} r2={fit['r_squared']:.6f} "
          f"-> {csv_path}, {json_path}")
    return 0


def cmd_decay(config: RunConfig) -> int:
    if config.mode_count < 8:
        raise ConfigError("key 'mode_count' must be at least 8 for fitting subcommands")
    gen = _build_generator(config)
    horizon = valid_fit_horizon(gen)
    window = (config.t_min, config.t_max)
    if window[1] > horizon:
        print(f"decay: window end {window[1]:g} lies beyond the trusted fit horizon; "
              f"suggested t_max: {horizon:.4g}", file=sys.stderr)
        return 2
    if config.t_min <= 0 or math.log10(window[1] / window[0]) < MIN_FIT_DECADES:
        print(f"decay: fit window must span at least {MIN_FIT_DECADES} decades "
              f"of positive time, got [{window[0]:g}, {window[1]:g}]", file=sys.stderr)
        return 2
    trace = evolve(gen, _initial_state(config, gen), _time_grid(config))
    fit = fit_polynomial_decay(trace, window, max_valid_time=horizon)
    if fit.exp_fit_residual >= MODEL_PREFERENCE_FACTOR * fit.power_fit_residual:
        preferred = "power_law"
    elif fit.power_fit_residual >= MODEL_PREFERENCE_FACTOR * fit.exp_fit_residual:
        preferred = "exponential"
    else:
        preferred = "ambiguous"
    payload = {
        "bc_pair": gen.bc_label,
        **_coupling_payload(gen.coupling),
        "mode_count": gen.mode_count,
        "initial_kind": config.initial_kind,
        "initial_exponent": config.initial_exponent,
        "window": [fit.window[0], fit.window[1]],
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "exp_fit_residual": fit.exp_fit_residual,
        "power_fit_residual": fit.power_fit_residual,
        "decay_order_alpha": fit.decay_order_alpha,
        "preferred_model": preferred,
        "initial_graph_norm": trace.initial_graph_norm,
    }
    path = config.output or "decay.json"
    _write_json(path, payload)
    print(f"decay: {gen.bc_label} {_coupling_label(gen.coupling)} N={gen.mode_count} "
          f"slope={fit.slope:.4f} implied alpha={fit.decay_order_alpha:.4f} -> {path}")
    if preferred == "exponential":
        print("decay: the pure-exponential model is preferred on this window; "
              "the data does not look like a power law")
    elif preferred == "power_law":
        print(f"decay: power-law model preferred "
              f"(exponential residual {fit.exp_fit_residual / fit.power_fit_residual:.1f}x larger)")
    return 0


def _random_state(rng: np.random.Generator, n: int, real: bool = False) -> StateVector:
    def block():
        z = rng.standard_normal(n)
        if not real:
            z = (z + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
        return z
    return StateVector(block(), block(), block())


def cmd_verify(config: RunConfig, corrupt_coupling_sign: bool = False) -> int:
    """One-shot invariant suite; exit 0 only when every check passes.

    Checks that presuppose the symmetric coupling pairing (dissipativity
    identity, witness forms, cubic identities, asymptotics, contraction)
    are skipped with a notice for generalized alpha/beta runs, where only
    the quasi-contraction bound and the solve round-trip apply.
    """
    rng = np.random.default_rng(config.seed)
    coupling = config.coupling()
    symmetric = coupling.is_symmetric
    gamma = coupling.alpha if symmetric else None
    n = config.mode_count
    checks = []

    def record(name, passed, measured, expected, tolerance, skipped=False, note=None):
        entry = {"name": name, "pass": bool(passed), "measured": measured,
                 "expected": expected, "tolerance": tolerance}
        if skipped:
            entry["skipped"] = True
        if note:
            entry["note"] = note
        checks.append(entry)

    def skip_symmetric_only(name, tolerance):
        record(name, True, None, 0.0, tolerance,
               skipped=True, note="requires symmetric coupling")

    pairs = [(a, b) for a in BoundaryKind for b in BoundaryKind]

    # Dissipativity identity: symmetric coupling cancels in the energy
    # pairing, the thermal seminorm is the only surviving term.  The
    # optional corruption hook flips one coupling sign, which must break
    # this check.
    if symmetric:
        checked_coupling = coupling
        if corrupt_coupling_sign:
            checked_coupling = CouplingSpec(coupling.alpha, -coupling.beta)
        worst = 0.0
        for bc_u, bc_theta in pairs:
            gen = assemble(bc_u, bc_theta, checked_coupling, n, config.length)
            for _ in range(25):
                state = _random_state(rng, n)
                lhs = energy_pairing(gen, apply(gen, state), state).real
                residual = abs(lhs + thermal_dissipation(gen, state))
                worst = max(worst, residual / energy_norm_sq(gen, state))
        record("dissipativity-identity", worst <= 1e-10, worst, 0.0, 1e-10)
    else:
        skip_symmetric_only("dissipativity-identity", 1e-10)

    # Generalized coupling bound for arbitrary real constant pairs.
    worst = -math.inf
    for alpha, beta in ((1.0, 2.0), (-1.0, -3.0), (0.5, 0.5)):
        bound_factor = max((alpha + beta) ** 2, 1.0) / 2.0
        for bc_u, bc_theta in pairs:
            gen = assemble(bc_u, bc_theta, CouplingSpec(alpha, beta), n, config.length)
            for _ in range(10):
                state = _random_state(rng, n, real=True)
                lhs = energy_pairing(gen, apply(gen, state), state).real
                bound = bound_factor * energy_norm_sq(gen, state) - thermal_dissipation(gen, state)
                worst = max(worst, lhs - bound)
    record("generalized-coupling-bound", worst <= 1e-10, worst, 0.0, 1e-10)

    if not symmetric:
        skip_symmetric_only("witness-closed-form", 1e-8)
        skip_symmetric_only("wave-branch-asymptote", 0.05)
    elif gamma == 0:
        record("witness-closed-form", True, None, 0.0, 1e-8,
               skipped=True, note="requires gamma != 0")
        record("wave-branch-asymptote", True, None, 0.0, 0.05,
               skipped=True, note="requires gamma != 0")
        print("verify: witness and asymptote checks skipped (requires gamma != 0)")
    else:
        worst = 0.0
        for kind in BoundaryKind:
            gen = assemble(kind, kind, gamma, n, config.length)
            for m in range(1, min(16, n // 2) + 1):
                expected = witness((kind, kind), m, gamma, config.length)
                forcing = np.zeros(n, dtype=complex)
                forcing[m - 1] = 1.0
                rhs = StateVector(np.zeros(n), forcing, np.zeros(n))
                solution = solve_shifted(gen, 1j * expected.lam, rhs)
                worst = max(worst,
                            abs(solution.u_hat[m - 1] - expected.a) / abs(expected.a),
                            abs(solution.theta_hat[m - 1] - expected.b) / abs(expected.b))
        record("witness-closed-form", worst <= 1e-8, worst, 0.0, 1e-8)

        worst = 0.0
        for lam in (400.0, 900.0, 1600.0, 4096.0):
            roots = modal_cubic(lam, gamma)
            wave = roots[np.argmax(np.abs(roots.imag))]
            worst = max(worst, abs(wave.real * 2.0 * lam / gamma**2 + 1.0))
        record("wave-branch-asymptote", worst <= 0.05, worst, 0.0, 0.05)

    if symmetric:
        worst = 0.0
        for m in range(1, min(64, n) + 1):
            lam = (m * math.pi / config.length) ** 2
            roots = modal_cubic(lam, gamma)
            scale = max(lam, lam + gamma**2, lam**2)
            worst = max(
                worst,
                abs(roots.sum() + lam) / lam,
                abs(roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2]
                    - (lam + gamma**2)) / scale,
                abs(roots.prod() + lam**2) / scale)
        record("modal-cubic-vieta", worst <= 1e-9, worst, 0.0, 1e-9)
    else:
        skip_symmetric_only("modal-cubic-vieta", 1e-9)

    gen = _build_generator(config)
    if symmetric:
        trace = evolve(gen, _initial_state(replace(config, initial_kind="power_law"), gen),
                       np.geomspace(0.5, 50.0, 30))
        report = strong_stability_report(trace)
        contraction_ok = report["monotone"] and (gamma == 0 or report["terminal_ratio"] < 1.0)
        record("energy-contraction", contraction_ok, report["terminal_ratio"], "< 1", 0.0)
    else:
        skip_symmetric_only("energy-contraction", 0.0)

    worst = 0.0
    for mu in (1.0, 1.0 + 0.7j):
        rhs = _random_state(rng, n)
        solution = solve_shifted(gen, mu, rhs)
        shifted = apply(gen, solution)
        residual = StateVector(mu * solution.u_hat - shifted.u_hat - rhs.u_hat,
                               mu * solution.v_hat - shifted.v_hat - rhs.v_hat,
                               mu * solution.theta_hat - shifted.theta_hat - rhs.theta_hat)
        worst = max(worst, math.sqrt(energy_norm_sq(gen, residual)
                                     / energy_norm_sq(gen, rhs)))
    record("shifted-solve-roundtrip", worst <= 1e-10, worst, 0.0, 1e-10)

    all_pass = all(c["pass"] for c in checks)
    payload = {
        "seed": config.seed,
        "bc_pair": config.bc_pair,
        **_coupling_payload(coupling),
        "mode_count": n,
        "coupling_sign_corrupted": corrupt_coupling_sign,
        "checks": checks,
        "all_pass": all_pass,
    }
    path = config.output or "verify.json"
    _write_json(path, payload)
    for c in checks:
        if c.get("skipped"):
            print(f"[SKIP] {c['name']}: {c['note']}")
        else:
            status = "PASS" if c["pass"] else "FAIL"
            print(f"[{status}] {c['name']}: measured={c['measured']} "
                  f"expected={c['expected']} tolerance={c['tolerance']}")
    print(f"verify: {'all checks passed' if all_pass else 'CHECKS FAILED'} "
          f"(seed={config.seed}) -> {path}")
    return 0 if all_pass else 1


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--bc", dest="bc_pair", metavar="PAIR",
                        help="boundary pair: DD, DN, ND or NN (default DD)")
    parser.add_argument("--gamma", type=float, help="symmetric coupling constant (default 1.0)")
    parser.add_argument("--alpha", type=float, help="generalized coupling in the wave equation")
    parser.add_argument("--beta", type=float, help="generalized coupling in the heat equation")
    parser.add_argument("--mode-count", dest="mode_count", type=int,
                        help="retained modes per field (default 128)")
    parser.add_argument("--length", type=float, help="interval length (default pi)")
    parser.add_argument("--output", help="output path (subcommand-specific default)")
    parser.add_argument("--seed", type=int, help="seed for randomized checks (default 20240)")


def _add_time_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t-min", dest="t_min", type=float, help="first sample time (default 1)")
    parser.add_argument("--t-max", dest="t_max", type=float, help="last sample time (default 1000)")
    parser.add_argument("--time-samples", dest="time_samples", type=int,
                        help="number of samples (default 64)")
    parser.add_argument("--time-spacing", dest="time_spacing", choices=("linear", "log"),
                        help="sample spacing (default log)")
    parser.add_argument("--initial-kind", dest="initial_kind",
                        choices=("zero", "single_mode", "power_law"),
                        help="initial data family (default power_law)")
    parser.add_argument("--initial-mode", dest="initial_mode", type=int,
                        help="mode index for single_mode data (default 1)")
    parser.add_argument("--initial-block", dest="initial_block", choices=("u", "v", "theta"),
                        help="excited block for single_mode data (default v)")
    parser.add_argument("--initial-exponent", dest="initial_exponent", type=float,
                        help="power-law amplitude exponent s (default 2.0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermospec",
        description="Spectral stability analysis of the weakly coupled thermoelastic "
                    "wave system on an interval.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues of the truncated generator (JSON)")
    _add_common_options(p)

    p = sub.add_parser("evolve", help="energy trace E(t) of one trajectory (CSV)")
    _add_common_options(p)
    _add_time_options(p)

    p = sub.add_parser("resolvent", help="imaginary-axis resolvent norms (CSV) plus "
                                         "growth-exponent fit (JSON)")
    _add_common_options(p)
    p.add_argument("--lambda-grid", dest="lambda_grid", choices=("modes", "linear"),
                   help="grid type: sqrt of modal eigenvalues, or linear (default modes)")
    p.add_argument("--lambda-min", dest="lambda_min", type=float,
                   help="first mode index or frequency (default 1)")
    p.add_argument("--lambda-max", dest="lambda_max", type=float,
                   help="last mode index or frequency (default N/2 for mode grids)")
    p.add_argument("--lambda-samples", dest="lambda_samples", type=int,
                   help="sample count for linear grids (default 49)")

    p = sub.add_parser("decay", help="polynomial-decay slope fit of the energy trace (JSON)")
    _add_common_options(p)
    _add_time_options(p)

    p = sub.add_parser("verify", help="run the invariant suite and report pass/fail")
    _add_common_options(p)
    p.add_argument("--corrupt-coupling-sign", action="store_true",
                   help="test hook: flip one coupling sign so dissipativity must fail")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        if args.command == "spectrum":
            return cmd_spectrum(config)
        if args.command == "evolve":
            return cmd_evolve(config)
        if args.command == "resolvent":
            return cmd_resolvent(config)
        if args.command == "decay":
            return cmd_decay(config)
        return cmd_verify(config, corrupt_coupling_sign=args.corrupt_coupling_sign)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
