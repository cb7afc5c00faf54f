"""Scenario-driven command line front end.

    kerrcat <command> <scenario.(ini|preset-name)> [--set k=v]... [--jobs N] [--out DIR]
    kerrcat presets

Each run writes one CSV per series (fixed, documented headers; floats at 12
significant digits; deterministic row order) plus a JSON sidecar holding
the fully resolved parameters.  Exit codes: 0 ok, 2 config error, 3 more
than 10% of sweep points failed, 4 resource guard tripped.
"""

from __future__ import annotations

import argparse
import concurrent.futures as cf
import json
import math
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .circuit import (
    EffectiveParams,
    resolve_drive_frequency,
    sts_effective_params,
    validity_report,
)
from .config import COMMANDS, Scenario, load_scenario
from .dissipation import DissipatorTerm
from .errors import ConfigError, KerrcatError, ResourceGuardError
from .fock import FockSpace, ladder_ops, wigner
from .hamiltonian import DKC, STS_EFFECTIVE, HamiltonianSpec, build_static, classical_surface
from .lifetime import SweepConfig, SweepPoint, lifetime_point
from .liouvillian import MasterEquation, steady_state
from .spectra import RampSchedule, adiabatic_ramp, degeneracy_scan, floquet_quasienergies, paired_spectrum
from .units import TWO_PI

AXIS_COLUMN = {
    "eps2_ratio": "eps2_over_K",
    "detuning_ratio": "delta_over_K",
    "modulation_depth": "delta_phi",
    "gamma_phi": "gamma_phi_per_us",
}


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    x = float(v)
    if math.isnan(x):
        return "nan"
    return f"{x:.12g}"


def write_csv(path: str, header: list[str], rows) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    os.replace(tmp, path)


def write_sidecar(path: str, payload: dict) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")
    os.replace(tmp, path)


def _abstract_params(K: float, eps2_ratio: float, detuning_ratio: float, lambda_ratio: float) -> EffectiveParams:
    """Effective parameters specified directly as ratios of K."""
    return EffectiveParams(
        Delta=detuning_ratio * K,
        eps2=eps2_ratio * K,
        K=K,
        Lambda=lambda_ratio * K,
        Theta=0.0,
        eps_c=0.0,
        phi_zps=0.0,
        G1=0.0,
        G1t=0.0,
        G2=0.0,
        G3=0.0,
        G4=0.0,
        delta_ext=0.0,
        omega_d=TWO_PI * 12000.0,
    )


def _scenario_K(sc: Scenario) -> float:
    if "circuit" in sc.sections:
        c = sc.circuit()
        if c.topology == "SQUID":
            from .circuit import squid_effective_params

            return squid_effective_params(c).K
        return sts_effective_params(c).K
    return TWO_PI * 1.0  # abstract runs: K/h = 1 MHz


def _single_photon_terms(space: FockSpace, gamma: float, n_th: float):
    a, adag, _ = ladder_ops(space)
    return (
        DissipatorTerm(gamma * (1.0 + n_th), a, "loss"),
        DissipatorTerm(gamma * n_th, adag, "heat"),
    )


# ---------------------------------------------------------------- commands


def _lifetime_worker(args):
    cfg, axis, value = args
    try:
        return lifetime_point(cfg, axis, value)
    except Exception as exc:
        return SweepPoint(value, math.nan, math.nan, 0, 0, math.nan, math.nan, True, str(exc))


def run_lifetime(sc: Scenario, jobs: int):
    axis, values = sc.sweep_values("sweep")
    if values is None:
        raise ConfigError("lifetime needs a [sweep] section")
    axis2, values2 = sc.sweep_values("sweep2")
    circuit = sc.circuit()
    omega_d = circuit.omega_d
    if omega_d is None:
        omega_d = resolve_drive_frequency(circuit)
        circuit = replace(circuit, omega_d=omega_d)
    bath = sc.bath(omega_d)
    gamma_phi = sc.value("lifetime", "gamma_phi")
    gp_over_k = sc.value("lifetime", "gamma_phi_over_k")
    if gp_over_k is not None:
        gamma_phi = gp_over_k * _scenario_K(sc)
    cfg = SweepConfig(
        circuit=circuit,
        bath=bath,
        dissipators=sc.value("lifetime", "dissipators"),
        detuning_ratio=sc.value("lifetime", "detuning_ratio"),
        compensate_lambda=sc.value("lifetime", "compensation"),
        zero_lambda=sc.value("lifetime", "zero_lambda"),
        gamma_phi=gamma_phi,
        eps2_ratio=sc.value("lifetime", "eps2_ratio"),
        dim_max=sc.value("numerics", "dim_max"),
    )
    tasks = []
    if axis2 is None:
        tasks = [(cfg, axis, float(v)) for v in values]
    else:
        for v2 in values2:
            cfg2 = (
                replace(cfg, eps2_ratio=float(v2))
                if axis2 == "eps2_ratio"
                else replace(cfg, detuning_ratio=float(v2))
            )
            tasks.extend((cfg2, axis, float(v)) for v in values)
    if jobs > 1 and len(tasks) > 1:
        with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_lifetime_worker, tasks, chunksize=1))
    else:
        points = [_lifetime_worker(t) for t in tasks]
    header = [AXIS_COLUMN[axis], "T_alpha_us", "lambda_re", "M_lv", "dim"]
    rows = []
    if axis2 is None:
        for p in points:
            rows.append([p.axis_value, p.t_alpha_us, p.lambda_re, p.m_lv, p.dim])
    else:
        header = [AXIS_COLUMN[axis2]] + header
        k = 0
        for v2 in values2:
            for _v in values:
                p = points[k]
                rows.append([float(v2), p.axis_value, p.t_alpha_us, p.lambda_re, p.m_lv, p.dim])
                k += 1
    n_failed = sum(1 for p in points if p.failed)
    meta = {
        "failed_points": n_failed,
        "total_points": len(points),
        "K_over_h_MHz": _scenario_K(sc) / TWO_PI,
        "omega_d_over_2pi_GHz": omega_d / TWO_PI / 1000.0,
        "dissipators": cfg.dissipators,
    }
    return header, rows, meta


def run_steady(sc: Scenario, jobs: int):
    _, values = sc.sweep_values("sweep")
    if values is None:
        raise ConfigError("steady needs a [sweep] section (eps2_ratio axis)")
    K = _scenario_K(sc)
    gamma = sc.value("steady", "gamma_over_k") * K
    n_th = sc.value("steady", "n_th")
    detuning = sc.value("steady", "detuning_ratio")
    dim = sc.value("steady", "dim")
    space = FockSpace(dim)
    terms = _single_photon_terms(space, gamma, n_th)
    rows = []
    for e2k in values:
        p = _abstract_params(K, float(e2k), detuning, 0.0)
        H = build_static(HamiltonianSpec(DKC, p, space))
        sa = steady_state(MasterEquation(H, terms, space))
        rows.append([float(e2k), sa.probabilities[0], sa.probabilities[1], sa.p_leak])
    return ["eps2_over_K", "P1", "P2", "P_leak"], rows, {"dim": dim}


def run_wigner(sc: Scenario, jobs: int):
    K = _scenario_K(sc)
    e2k = sc.value("wigner", "eps2_ratio")
    detuning = sc.value("wigner", "detuning_ratio")
    gamma = sc.value("wigner", "gamma_over_k") * K
    n_th = sc.value("wigner", "n_th")
    dim = sc.value("wigner", "dim")
    extent = sc.value("wigner", "extent")
    n_pts = sc.value("wigner", "points")
    space = FockSpace(dim)
    p = _abstract_params(K, e2k, detuning, 0.0)
    H = build_static(HamiltonianSpec(DKC, p, space))
    sa = steady_state(MasterEquation(H, _single_photon_terms(space, gamma, n_th), space))
    xs = np.linspace(-extent, extent, n_pts)
    ps = np.linspace(-extent, extent, n_pts)
    w = wigner(sa.rho_ss, xs, ps)
    rows = [[xs[i], ps[j], w[i, j]] for i in range(n_pts) for j in range(n_pts)]
    return ["x", "p", "W"], rows, {"dim": dim, "eps2_over_K": e2k}


def run_surface(sc: Scenario, jobs: int):
    K = _scenario_K(sc)
    p = _abstract_params(
        K,
        sc.value("surface", "eps2_ratio"),
        sc.value("surface", "detuning_ratio"),
        sc.value("surface", "lambda_ratio"),
    )
    extent = sc.value("surface", "extent")
    n_pts = sc.value("surface", "points")
    xs = np.linspace(-extent, extent, n_pts)
    pps = np.linspace(-extent, extent, n_pts)
    field, extrema = classical_surface(p, xs, pps)
    rows = [[xs[i], pps[j], field[i, j] / K] for i in range(n_pts) for j in range(n_pts)]
    meta = {
        "extrema": [
            {"x": e.x, "p": e.p, "energy_over_K": e.energy / K, "kind": e.kind} for e in extrema
        ]
    }
    return ["x", "p", "E_cl_over_K"], rows, meta


def run_spectrum(sc: Scenario, jobs: int):
    axis, values = sc.sweep_values("sweep")
    if values is None:
        raise ConfigError("spectrum needs a [sweep] section")
    K = _scenario_K(sc)
    n_pairs = sc.value("spectrum", "n_pairs")
    dim = sc.value("spectrum", "dim")
    lam = sc.value("spectrum", "lambda_ratio")
    lam = 0.0 if lam is None else lam
    space = FockSpace(dim)
    rows = []
    for v in values:
        if axis == "detuning_ratio":
            p = _abstract_params(K, sc.value("spectrum", "eps2_ratio"), float(v), lam)
        elif axis == "eps2_ratio":
            p = _abstract_params(K, float(v), sc.value("spectrum", "detuning_ratio"), lam)
        else:
            raise ConfigError(f"spectrum axis must be detuning_ratio or eps2_ratio, got {axis}")
        H = build_static(HamiltonianSpec(STS_EFFECTIVE, p, space))
        ps = paired_spectrum(H, n_pairs)
        for m in range(n_pairs):
            rows.append(
                [
                    float(v),
                    m,
                    abs(ps.levels_even[m]) / K,
                    abs(ps.levels_odd[m]) / K,
                    ps.splittings[m] / K,
                ]
            )
    header = [
        AXIS_COLUMN[axis],
        "pair",
        "excitation_even_over_K",
        "excitation_odd_over_K",
        "splitting_over_K",
    ]
    return header, rows, {"dim": dim, "n_pairs": n_pairs}


def run_degeneracy(sc: Scenario, jobs: int):
    axis, values = sc.sweep_values("sweep")
    if values is None:
        raise ConfigError("degeneracy needs a [sweep] section over detuning_ratio")
    if axis != "detuning_ratio":
        raise ConfigError("degeneracy sweeps detuning_ratio")
    K = _scenario_K(sc)
    n_pairs = sc.value("degeneracy", "n_pairs")
    dim = sc.value("degeneracy", "dim")
    lam = sc.value("degeneracy", "lambda_ratio")
    lam = 0.0 if lam is None else lam
    e2k = sc.value("degeneracy", "eps2_ratio")
    space = FockSpace(dim)

    def h_of(delta_ratio):
        p = _abstract_params(K, e2k, float(delta_ratio), lam)
        return build_static(HamiltonianSpec(STS_EFFECTIVE, p, space))

    crossings = degeneracy_scan(h_of, values, n_pairs, tol_cross=1e-6 * K)
    rows = [[c.pair_index, c.axis_value, c.splitting / K] for c in crossings]
    return ["pair", "delta_over_K", "splitting_over_K"], rows, {"dim": dim}


def run_floquet(sc: Scenario, jobs: int):
    _, values = sc.sweep_values("sweep")
    if values is None:
        raise ConfigError("floquet needs a [sweep] section (eps2_ratio axis)")
    circuit = sc.circuit()
    n_levels = sc.value("floquet", "n_levels")
    dim = sc.value("floquet", "dim")
    target = sc.value("floquet", "target_delta_ratio")
    space = FockSpace(dim)
    pref = sts_effective_params(replace(circuit, delta_phi=0.01, omega_d=None))
    slope = pref.eps2 / 0.01
    rows = []
    for e2k in values:
        dphi = float(e2k) * pref.K / slope
        c = replace(circuit, delta_phi=dphi)
        res = floquet_quasienergies(c, space, n_levels, target_delta=target * pref.K)
        for n in range(n_levels):
            rows.append([float(e2k), n + 1, res.quasi[n] / pref.K, res.effective[n] / pref.K])
    header = ["eps2_over_K", "level", "quasi_over_K", "effective_over_K"]
    return header, rows, {"dim": dim, "n_levels": n_levels}


def run_ramp(sc: Scenario, jobs: int):
    circuit = sc.circuit()
    e2k = sc.value("ramp", "eps2_ratio")
    dim = sc.value("ramp", "dim")
    n_records = sc.value("ramp", "points")
    pref = sts_effective_params(replace(circuit, delta_phi=0.01, omega_d=None))
    slope = pref.eps2 / 0.01
    dur_raw = sc.value("ramp", "duration")
    duration = 64.0 / pref.K if str(dur_raw).strip().lower() == "auto" else float(dur_raw)
    dphi = e2k * pref.K / slope
    c = replace(circuit, delta_phi=dphi)
    res = adiabatic_ramp(c, RampSchedule(e2k, duration), FockSpace(dim), n_records=n_records)
    rows = [
        [res.times[i], res.overlap[i], res.photon_number[i]]
        for i in range(len(res.times))
    ]
    return ["t_us", "overlap", "photon_number"], rows, {"dim": dim, "duration_us": duration}


def run_validity(sc: Scenario, jobs: int):
    circuit = sc.circuit()
    rep = validity_report(circuit, sc.value("validity", "cat_n"))
    rows = [
        [
            rep.phi_zps,
            rep.delta_phi,
            rep.sixth_order_kerr_ratio,
            rep.squeeze_correction_2,
            rep.squeeze_correction_4,
            rep.sixth_harmonic_ratio,
            rep.all_ok,
        ]
    ]
    header = [
        "phi_zps",
        "delta_phi",
        "sixth_order_kerr_ratio",
        "squeeze_correction_2",
        "squeeze_correction_4",
        "sixth_harmonic_ratio",
        "all_ok",
    ]
    return header, rows, {}


RUNNERS = {
    "lifetime": run_lifetime,
    "steady": run_steady,
    "wigner": run_wigner,
    "surface": run_surface,
    "spectrum": run_spectrum,
    "degeneracy": run_degeneracy,
    "floquet": run_floquet,
    "ramp": run_ramp,
    "validity": run_validity,
}


def presets_dir() -> str:
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), "presets")


def list_presets() -> list[str]:
    d = presets_dir()
    return sorted(os.path.splitext(f)[0] for f in os.listdir(d) if f.endswith(".ini"))


def _resolve_scenario_path(token: str) -> str:
    if os.path.exists(token):
        return token
    candidate = os.path.join(presets_dir(), token + ".ini")
    if os.path.exists(candidate):
        return candidate
    raise ConfigError(f"scenario {token!r} is neither a file nor a preset name")


def run_command(command: str, sc: Scenario, out_dir: str, jobs: int) -> int:
    if sc.command != command:
        raise ConfigError(
            f"scenario declares command {sc.command!r} but {command!r} was requested"
        )
    os.makedirs(out_dir, exist_ok=True)
    series = sc.series or {"": {}}
    worst = 0
    for sname, overrides in sorted(series.items()):
        variant = sc.with_overrides(dict(overrides)) if overrides else sc
        start = time.time()
        header, rows, meta = RUNNERS[command](variant, jobs)
        stem = sc.name if not sname else f"{sc.name}__{sname}"
        csv_path = os.path.join(out_dir, stem + ".csv")
        write_csv(csv_path, header, rows)
        sidecar = {
            "command": command,
            "csv": os.path.basename(csv_path),
            "header": header,
            "series": sname or None,
            "scenario": {s: dict(kv) for s, kv in variant.raw.items()},
            "meta": meta,
            "tool_version": __version__,
            "wall_time_s": round(time.time() - start, 3),
        }
        write_sidecar(os.path.join(out_dir, stem + ".json"), sidecar)
        failed = meta.get("failed_points", 0)
        total = meta.get("total_points", len(rows) or 1)
        if failed / max(total, 1) > 0.10:
            worst = max(worst, 3)
    return worst


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="kerrcat",
        description="Kerr-cat qubit simulator: STS / single-SQUID circuits, "
        "order-by-order master equations, lifetimes, spectra, steady states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("presets", help="list committed scenario presets")
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd, help=f"run a {cmd} scenario")
        sp.add_argument("scenario", help="scenario file path or preset name")
        sp.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE")
        sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
        sp.add_argument("--out", default="out", help="output directory (default ./out)")
    args = parser.parse_args(argv)

    if args.command == "presets":
        for name in list_presets():
            print(name)
        return 0

    try:
        sc = load_scenario(_resolve_scenario_path(args.scenario))
        overrides = {}
        for item in args.set:
            if "=" not in item:
                raise ConfigError(f"--set needs SECTION.KEY=VALUE, got {item!r}")
            key, value = item.split("=", 1)
            overrides[key.strip()] = value.strip()
        if overrides:
            sc = sc.with_overrides(overrides)
        return run_command(args.command, sc, args.out, args.jobs)
    except ConfigError as exc:
        print(f"kerrcat: config error: {exc}", file=sys.stderr)
        return 2
    except ResourceGuardError as exc:
        print(f"kerrcat: resource guard: {exc}", file=sys.stderr)
        return 4
    except KerrcatError as exc:
        print(f"kerrcat: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
