"""Command-line front end: ``photmol <subcommand> [options]``."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import boundstate, gate, keldysh, tmatrix
from .config import RunConfig, parse_lines
from .errors import ConfigError, PhotmolError
from .io import csv_text, json_text


def _emit(args, name, text):
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, name)
        with open(path, "w", newline="") as fh:
            fh.write(text)
        return path
    sys.stdout.write(text)
    return None


def _fmt(args, cfg, default):
    return args.format or cfg.format or default


# ---- subcommands ----------------------------------------------------------

def cmd_tc(cfg, args):
    params = cfg.waveguide()
    asym = tmatrix.critical_temperature(params, "asymptotic", cfg.x_min)
    num = tmatrix.critical_temperature(params, "numeric", cfg.x_min)
    lo = cfg.t_scan_min_k if cfg.t_scan_min_k is not None else num.T_c_kelvin / 10.0
    hi = cfg.t_scan_max_k if cfg.t_scan_max_k is not None else num.T_c_kelvin * 10.0
    temps = np.geomspace(lo, hi, cfg.t_scan_points)
    scan = tmatrix.denominator_scan(temps, params, cfg.x_min)
    flips = set(scan.sign_changes().tolist())
    rows = []
    for i, (t, lam, integ, d) in enumerate(scan.rows()):
        value = params.signed_v / d if d != 0 else math.inf
        rows.append((t, lam, integ, d, value, 0.0, i in flips))
    echo = cfg.echo()
    record = {
        "asymptotic": asym.as_dict(),
        "numeric": num.as_dict(),
        "ratio_numeric_over_asymptotic": num.T_c_kelvin / asym.T_c_kelvin,
        "log_lambda_offset": math.log(num.lambda_c) - 1.0 / params.g,
        "sign_change_rows": sorted(flips),
    }
    columns = ["T_kelvin", "lambda", "integral", "denominator", "tmatrix_re", "tmatrix_im", "sign_change_next"]
    csv_body = csv_text(columns, rows, echo)
    json_body = json_text(record, echo)
    if args.out:
        _emit(args, "tc.json", json_body)
        _emit(args, "tc_scan.csv", csv_body)
    else:
        sys.stdout.write(json_body if _fmt(args, cfg, "json") == "json" else csv_body)


def cmd_tmatrix_scan(cfg, args):
    params = cfg.waveguide()
    thermal = cfg.thermal()
    delta = params.Delta
    offsets = np.linspace(cfg.omega_scan_min_over_delta, cfg.omega_scan_max_over_delta, cfg.omega_scan_points) * delta
    eta = cfg.eta_over_delta * delta
    rows = []
    for w in offsets:
        q = tmatrix.TMatrixQuery(2.0 * thermal.mu + w + 1j * eta, params, thermal, cfg.x_min)
        r = tmatrix.tmatrix_retarded_1d(q)
        rows.append((w, eta, r.value.real, r.value.imag, r.denominator.real, r.denominator.imag, r.near_pole))
    # i eta limit against the closed form -v / (1 - g I)
    q0 = tmatrix.TMatrixQuery(2.0 * thermal.mu + 1j * eta, params, thermal, cfg.x_min)
    lam = q0.lam
    closed, _ = tmatrix.denominator_value(lam, params, cfg.x_min)
    t0 = tmatrix.tmatrix_retarded_1d(q0).value
    closed_value = float(params.signed_v / closed) if params.v else 0.0
    limit = {
        "lambda": float(lam),
        "tmatrix": complex(t0),
        "closed_form": closed_value,
        "relative_difference": float(abs(t0 - closed_value) / abs(closed_value)) if params.v else 0.0,
    }
    echo = cfg.echo()
    columns = ["omega_rad_per_s", "eta_rad_per_s", "tmatrix_re", "tmatrix_im",
               "denominator_re", "denominator_im", "near_pole"]
    if _fmt(args, cfg, "csv") == "csv":
        comments = [f"pole_limit {k} = {v!r}" for k, v in sorted(limit.items())]
        _emit(args, "tmatrix_scan.csv", csv_text(columns, rows, echo, comments))
    else:
        _emit(args, "tmatrix_scan.json", json_text({"columns": columns, "rows": rows, "pole_limit": limit}, echo))


def cmd_phase(cfg, args):
    params = cfg.waveguide()
    res = boundstate.propagate_pair(params.v, params.v_e, cfg.sigma_m, omega0=params.omega0,
                                    courant=cfg.courant, n_cells=cfg.n_cells)
    record = res.as_dict()
    record["error_characteristics"] = abs(res.theta - abs(res.theta_analytic + 2 * params.omega0 * res.t_total))
    record["error_grid"] = abs(res.theta_grid - abs(res.theta_analytic + 2 * params.omega0 * res.t_total_grid))
    _emit(args, "phase.json", json_text(record, cfg.echo()))


def cmd_gate(cfg, args):
    params = cfg.waveguide()
    theta = cfg.gate_theta_rad if cfg.gate_theta_rad is not None else boundstate.nonlinear_phase(params.v, params.v_e)
    if math.isclose(theta, math.pi, rel_tol=0, abs_tol=1e-12):
        theta = math.pi
    cz = gate.cz_from_phase(theta)
    h2 = gate.tensor(gate.identity(), gate.hadamard())
    built = gate.compose([h2, cz, h2])
    record = {
        "basis": list(gate.BASIS_LABELS),
        "theta_rad": theta,
        "matrix": gate.gate_to_json(cz),
        "truth_table": {label: gate.describe_output(out) for label, out in gate.truth_table(cz)},
        "unitary": gate.is_unitary(cz),
        "cnot_from_hadamards": gate.gate_to_json(built),
        "cnot_max_deviation": float(np.max(np.abs(built - gate.cnot()))),
    }
    _emit(args, "gate.json", json_text(record, cfg.echo()))


def cmd_keldysh_check(cfg, args):
    params = cfg.waveguide()
    thermal = cfg.thermal()
    delta = params.Delta
    eps = cfg.keldysh_epsilon_over_delta * delta
    eta = cfg.keldysh_eta_over_delta * delta
    spec = keldysh.lorentzian_spectral(eps, eta, -delta, delta, cfg.keldysh_points)
    ret = keldysh.retarded_from_spectral(spec, 0.0)
    adv = keldysh.advanced_from_spectral(spec, 0.0)
    w = spec.omega
    exact = 1.0 / (w - eps + 1j * eta)
    away = np.abs(w - eps) > 5 * eta
    hilbert_err = float(np.max(np.abs(ret.values - exact)[away] / np.abs(exact)[away]))
    kk = float(np.max(np.abs(1j * (ret.values - adv.values) - spec.values)) / np.max(spec.values.real))
    lesser, greater = keldysh.fdt_components(spec, thermal, 1, mask_pole=True)
    y = thermal.beta * (w - thermal.mu)
    ok = np.isfinite(lesser.values) & (np.abs(y) < 500) & (spec.values.real > 0)
    ratio = greater.values[ok] / lesser.values[ok]
    fdt = float(np.max(np.abs(ratio / np.exp(y[ok]) - 1.0)))
    sum_rule = float(np.max(np.abs(1j * (greater.values[ok] - lesser.values[ok]) - spec.values[ok])
                            / spec.values.real[ok]))
    series = keldysh.time_domain_retarded(ret)
    checks = {
        "hilbert_max_relative_error": (hilbert_err, 1e-3),
        "kramers_kronig_residual": (kk, 1e-6),
        "fdt_ratio_residual": (fdt, 1e-12),
        "sum_rule_residual": (sum_rule, 1e-12),
        "causality_leakage": (series.leakage, 1e-4),
    }
    record = {name: {"value": v, "tolerance": tol, "passed": bool(v < tol)} for name, (v, tol) in checks.items()}
    record["all_passed"] = all(item["passed"] for item in record.values())
    _emit(args, "keldysh_check.json", json_text(record, cfg.echo()))


def cmd_molecule(cfg, args):
    n = cfg.molecule_cells
    dx = cfg.molecule_box_m / n
    x = (np.arange(n) - n // 2) * dx
    chi = boundstate.chi_delta_bound(cfg.kappa_per_m, x, K=cfg.molecule_k_per_m)
    if _fmt(args, cfg, "csv") == "csv":
        _emit(args, "molecule.csv", csv_text(["x", "re", "im"], chi.to_rows(), cfg.echo()))
        return
    k, chi_k = chi.momentum()
    direct = boundstate.molecule_wavefunction(chi, x, x, form="direct")
    mom = boundstate.molecule_wavefunction(chi, x, x, form="momentum")
    record = {
        "norm": chi.norm(),
        "parseval": float(np.sum(np.abs(chi_k) ** 2)),
        "pair_norm": float(np.sum(np.abs(direct) ** 2) * dx * dx),
        "direct_vs_momentum_max_difference": float(np.max(np.abs(direct - mom))),
        "box_length_m": chi.box_length,
    }
    _emit(args, "molecule.json", json_text(record, cfg.echo()))


COMMANDS = {
    "tc": cmd_tc,
    "tmatrix-scan": cmd_tmatrix_scan,
    "phase": cmd_phase,
    "gate": cmd_gate,
    "keldysh-check": cmd_keldysh_check,
    "molecule": cmd_molecule,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--x-min", type=float, help="infrared cutoff of the coth integral")
    common.add_argument("--v-over-ve", type=float, help="dimensionless coupling ratio v / v_e")
    common.add_argument("--omega-ghz", type=float, help="interaction half-bandwidth in GHz")
    conv = common.add_mutually_exclusive_group()
    conv.add_argument("--angular", dest="convention", action="store_const", const="angular",
                      help="read GHz/MHz inputs as rad/s (default)")
    conv.add_argument("--ordinary", dest="convention", action="store_const", const="ordinary",
                      help="read GHz/MHz inputs as cycles/s")
    common.add_argument("--out", help="directory for output files (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override any config key (repeatable)")

    parser = argparse.ArgumentParser(prog="photmol", description="Photon-molecule T-matrix, phase and gate tools")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "tc": "critical temperature (asymptotic and numeric) with a denominator scan",
        "tmatrix-scan": "retarded T-matrix along real frequency",
        "phase": "nonlinear pair phase by characteristics and grid advection",
        "gate": "controlled-Z gate, truth table and CNOT construction",
        "keldysh-check": "Hilbert, FDT and causality residuals on a Lorentzian",
        "molecule": "bound-state wavefunction dump and consistency checks",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def resolve_config(args):
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    flags = {}
    if args.x_min is not None:
        flags["x_min"] = args.x_min
    if args.v_over_ve is not None:
        flags["v_over_ve"] = args.v_over_ve
    if args.omega_ghz is not None:
        flags["omega_ghz"] = args.omega_ghz
    if args.convention:
        flags["frequency_convention"] = args.convention
    cfg.update(flags)
    cfg.update(parse_lines(args.set, source="--set"))
    return cfg.validate()


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        COMMANDS[args.command](cfg, args)
    except (PhotmolError, ValueError, OverflowError, OSError) as exc:
        kind = "config" if isinstance(exc, ConfigError) else type(exc).__name__
        report = {"error": kind, "message": str(exc), "command": args.command}
        achieved = getattr(exc, "achieved", None)
        if achieved is not None:
            report["achieved"] = achieved
        sys.stderr.write(json.dumps(report, sort_keys=True) + "\n")
        return 2 if isinstance(exc, ConfigError) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
