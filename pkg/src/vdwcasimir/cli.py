"""Batch front end: ``vdwcasimir run --config exp.json --output out.csv``.

Exit status: 0 on success, 2 on a configuration error, 3 when a grid point
failed to converge (the table is still written, with per-row ``status``).
"""

import argparse
import itertools
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .config import ExperimentConfig, load_config
from .constants import UNIT_SYSTEM
from .dielectric import TabulatedImagAxis, kk_consistency_residual
from .dipoles import DipoleSystem, pairwise_vdw_energy, vdw_energy
from .errors import CasimirError, ConfigError, ConvergenceError, UnsupportedAxisError
from .lifshitz import (ThermalState, absorption_rate_spectral_density,
                       bulk_spectral_energy_density, energy_density_profile,
                       force_per_area, force_per_area_real_axis, free_energy_per_area,
                       local_dos, noise_energy_spectral_density)
from .results import ResultTable, emit

log = logging.getLogger("vdwcasimir")

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGED = 0, 2, 3
THREADS_ENV = "VDWCASIMIR_THREADS"

COLUMNS = {
    "force-curve": [("d", "m"), ("T", "K"), ("pressure", "Pa"), ("abs_force_per_area", "Pa"),
                    ("te", "Pa"), ("tm", "Pa"), ("n0_term", "Pa"), ("err_estimate", "Pa"),
                    ("status", "-")],
    "free-energy": [("d", "m"), ("T", "K"), ("free_energy", "J/m^2"),
                    ("err_estimate", "J/m^2"), ("status", "-")],
    "energy-profile": [("d", "m"), ("T", "K"), ("z", "m"), ("energy_density", "J/m^3"),
                       ("err_estimate", "J/m^3"), ("status", "-")],
    "ldos": [("omega", "rad/s"), ("T", "K"), ("local_dos", "s/m^3"),
             ("spectral_energy_density", "J s/m^3"),
             ("spectral_energy_density_green", "J s/m^3"),
             ("noise_spectral_density", "J s/m^3"), ("absorption_spectral_density", "J/m^3"),
             ("err_estimate", "J s/m^3"), ("status", "-")],
    "dipoles": [("scale", "1"), ("min_separation", "m"), ("energy", "J"),
                ("pairwise_energy", "J"), ("err_estimate", "J"), ("status", "-")],
    "validate": [("check", "-"), ("subject", "-"), ("value", "1"), ("tolerance", "1"),
                 ("status", "-")],
}


def _guard(fn, base):
    """Run ``fn`` for one grid point; failures become tagged rows."""
    try:
        row = dict(base)
        row.update(fn())
        row.setdefault("status", "ok")
        return row, EXIT_OK
    except ConvergenceError as exc:
        row = dict(base)
        row["status"] = f"nonconverged: {exc}"
        return row, EXIT_NONCONVERGED
    except CasimirError as exc:
        row = dict(base)
        row["status"] = f"error: {exc}"
        return row, EXIT_CONFIG


# ---------------------------------------------------------------- per-mode tasks

def _force_task(cfg, d, T):
    def fn():
        r = force_per_area(cfg.stack.with_d(d), ThermalState(T), cfg.spec)
        return {"pressure": float(r.pressure), "abs_force_per_area": abs(float(r.pressure)),
                "te": float(r.te), "tm": float(r.tm), "n0_term": float(r.n0_term),
                "err_estimate": float(r.err_estimate)}
    return fn, {"d": d, "T": T}


def _free_task(cfg, d, T):
    def fn():
        value, err = free_energy_per_area(cfg.stack.with_d(d), ThermalState(T), cfg.spec,
                                          return_error=True)
        return {"free_energy": float(value), "err_estimate": float(err)}
    return fn, {"d": d, "T": T}


def _profile_task(cfg, d, T, z):
    def fn():
        value, err = energy_density_profile(cfg.stack.with_d(d), z, ThermalState(T), cfg.spec,
                                            return_error=True)
        return {"energy_density": float(value), "err_estimate": float(err)}
    return fn, {"d": d, "T": T, "z": z}


def _ldos_task(cfg, omega, T):
    model = cfg.material

    def fn():
        row = {"local_dos": float(local_dos(model, omega))}
        try:
            closed = bulk_spectral_energy_density(model, omega)
            green = bulk_spectral_energy_density(model, omega, method="green")
            row.update(spectral_energy_density=closed, spectral_energy_density_green=green,
                       noise_spectral_density=noise_energy_spectral_density(
                           model, omega, ThermalState(T)),
                       absorption_spectral_density=absorption_rate_spectral_density(model, omega),
                       err_estimate=abs(closed - green))
        except UnsupportedAxisError:
            row["status"] = "ok: real-axis quantities unavailable for this model"
        return row
    return fn, {"omega": omega, "T": T}


def _dipole_task(cfg, scale):
    base = cfg.dipole_system

    def fn():
        system = DipoleSystem(base.positions * scale, base.oscillators)
        energy, err = vdw_energy(system, cfg.spec, return_error=True)
        return {"min_separation": system.min_separation() if system.n > 1 else math.nan,
                "energy": float(energy), "pairwise_energy": float(pairwise_vdw_energy(system,
                                                                                    cfg.spec)),
                "err_estimate": float(err)}
    return fn, {"scale": scale}


KK_TOL = 1e-6
WICK_TOL = 1e-2


def _validate_tasks(cfg):
    tasks = []
    for name in sorted(cfg.materials):
        model = cfg.materials[name]
        if isinstance(model, TabulatedImagAxis) or model.lossless:
            continue
        w = [o.omega_0 for o in model.oscillators] + [o.gamma for o in model.oscillators]
        scale = max(v for v in w if v > 0)
        grid = scale * np.logspace(-2, 2, 9)

        def kk(model=model, grid=grid):
            value = float(kk_consistency_residual(model, grid, cfg.spec))
            return {"value": value, "status": "pass" if value < KK_TOL else "fail"}
        tasks.append((kk, {"check": "kk_residual", "subject": name, "tolerance": KK_TOL}))
    if cfg.geometry["type"] == "planar":
        stack = cfg.stack.with_d(cfg.grid["gap_d"][0])
        media = (stack.eps1, stack.eps2, stack.eps3)
        real_ok = not any(isinstance(m, TabulatedImagAxis) for m in media)
        if real_ok and not all(m.lossless for m in media) and stack.eps3.lossless:
            def wick():
                a = force_per_area(stack, ThermalState(), cfg.spec).pressure
                b = force_per_area_real_axis(stack, ThermalState(), cfg.spec).pressure
                value = abs(b - a) / abs(a) if a != 0 else abs(b)
                return {"value": float(value), "status": "pass" if value < WICK_TOL else "fail"}
            tasks.append((wick, {"check": "wick_rotation", "subject": f"d={stack.d!r} m",
                                 "tolerance": WICK_TOL}))
    return tasks


def build_tasks(cfg):
    g = cfg.grid
    if cfg.mode == "force-curve":
        return [_force_task(cfg, d, T) for d, T in itertools.product(g["gap_d"], g["temperature"])]
    if cfg.mode == "free-energy":
        return [_free_task(cfg, d, T) for d, T in itertools.product(g["gap_d"], g["temperature"])]
    if cfg.mode == "energy-profile":
        return [_profile_task(cfg, d, T, z)
                for d, T, z in itertools.product(g["gap_d"], g["temperature"], g["z"])]
    if cfg.mode == "ldos":
        return [_ldos_task(cfg, w, T) for w, T in itertools.product(g["omega"], g["temperature"])]
    if cfg.mode == "dipoles":
        return [_dipole_task(cfg, s) for s in g["scale"]]
    return _validate_tasks(cfg)


def run(cfg, threads=1):
    """Evaluate every grid point of ``cfg``.

    Returns ``(ResultTable, exit_status)``. Points are dispatched to a
    thread pool; rows are assembled in grid order whatever the completion
    order, so the table does not depend on ``threads``.
    """
    if not isinstance(cfg, ExperimentConfig):
        raise ConfigError("run() needs an ExperimentConfig")
    tasks = build_tasks(cfg)
    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        results = list(pool.map(lambda t: _guard(*t), tasks))
    table = ResultTable(COLUMNS[cfg.mode])
    table.metadata = {
        "config_hash": cfg.config_hash(),
        "version": __version__,
        "unit_system": UNIT_SYSTEM,
        "mode": cfg.mode,
    }
    if cfg.mode == "force-curve":
        table.metadata["sign_convention"] = "pressure < 0 means the plates attract"
    codes = []
    for row, code in results:
        for name in table.names:
            row.setdefault(name, math.nan if name != "status" else "ok")
        table.rows.append(row)
        codes.append(code)
        if code:
            log.warning("row %s: %s", {k: row[k] for k in row if k != "status"}, row["status"])
    status = EXIT_NONCONVERGED if EXIT_NONCONVERGED in codes else (
        EXIT_CONFIG if EXIT_CONFIG in codes else EXIT_OK)
    return table, status


def _threads(arg):
    if arg is not None:
        return arg
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got '{env}'")
    return 1


def _format(arg, cfg, path):
    if arg:
        return arg
    if cfg.output.get("format"):
        return cfg.output["format"]
    if path and path.endswith(".json"):
        return "json"
    return "csv"


def build_parser():
    parser = argparse.ArgumentParser(prog="vdwcasimir",
                                     description="Casimir and van der Waals calculations")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run an experiment configuration")
    p.add_argument("--config", required=True, help="JSON experiment configuration")
    p.add_argument("--output", help="output file (default: config output.path or stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="output format")
    p.add_argument("--threads", type=int, help=f"worker threads (fallback: ${THREADS_ENV})")
    p.add_argument("--verbose", action="store_true", help="log progress to stderr")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config)
        threads = _threads(args.threads)
        if threads < 1:
            raise ConfigError("--threads must be >= 1")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    path = args.output or cfg.output.get("path")
    fmt = _format(args.format, cfg, path)
    log.info("mode %s, %d thread(s), hash %s", cfg.mode, threads, cfg.config_hash()[:12])
    table, status = run(cfg, threads)
    data = emit(table, fmt)
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
        log.info("wrote %d rows to %s", len(table.rows), path)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
