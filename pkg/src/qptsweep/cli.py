"""Experiment orchestration and the ``qptsweep`` command-line interface.

Subcommands ``spectrum``, ``ed``, ``sweep``, ``response``, ``grover`` and
``scaling`` each read a JSON config, run a deterministic parameter sweep and
emit CSV (17-significant-digit floats), a JSON mirror and a manifest
recording the config hash.  Exit codes: 0 full success, 2 partial
(nonconverged rows present), 1 config/I-O error.
"""

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, bath, exact, grover, ising, response, schedules
from .fitting import fit_exponential, fit_power_law

EXPERIMENTS = ("spectrum", "ed", "sweep", "response", "grover", "scaling")


class ConfigError(ValueError):
    """Invalid or incomplete experiment configuration."""


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict
    seed: int = 0
    threads: int = 1

    @classmethod
    def load(cls, path, experiment):
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        declared = raw.pop("experiment", experiment)
        if declared != experiment:
            raise ConfigError(f"config is for {declared!r}, invoked as {experiment!r}")
        return cls(experiment=experiment, params=raw)

    def canonical(self):
        doc = {"experiment": self.experiment, "seed": self.seed, **self.params}
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    def sha256(self):
        return hashlib.sha256(self.canonical().encode()).hexdigest()


@dataclass
class ResultBundle:
    name: str
    columns: list
    rows: list
    fits: dict = field(default_factory=dict)
    nonconverged: int = 0


def _grid(spec, name):
    """Accept an explicit list or a {start, stop, num} linspace description."""
    if isinstance(spec, dict):
        try:
            return np.linspace(spec["start"], spec["stop"], int(spec["num"]))
        except KeyError as exc:
            raise ConfigError(f"{name} needs start/stop/num, got {spec}") from exc
    arr = np.asarray(spec, dtype=float)
    if arr.ndim != 1 or len(arr) == 0:
        raise ConfigError(f"{name} must be a nonempty list")
    if np.any(np.diff(arr) < 0):
        raise ConfigError(f"{name} must be sorted ascending")
    return arr


def _require(params, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise ConfigError(f"missing config keys: {missing}")
    for k in keys:
        if isinstance(params[k], (list, tuple)) and len(params[k]) == 0:
            raise ConfigError(f"config key {k!r} must be a nonempty list")


def _make_schedule(params, n_spins=None):
    kind = params.get("schedule", "linear")
    if kind not in schedules.KINDS:
        raise ConfigError(f"unknown schedule kind {kind!r}")
    _require(params, "T")
    return schedules.make_schedule(
        kind, float(params["T"]), n_spins=n_spins, g_frozen=params.get("g_frozen")
    )


def _pmap(fn, items, threads):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _run_spectrum(cfg):
    p = cfg.params
    _require(p, "n_spins")
    n = int(p["n_spins"])
    g_grid = _grid(p.get("g_grid", {"start": 0.0, "stop": 1.0, "num": 101}), "g_grid")
    chain = ising.ChainParams(n)
    momenta = ising.momentum_grid(chain)
    rows = []
    for g in g_grid:
        energies = ising.dispersion(momenta, float(g))
        for ka, e in zip(momenta, energies):
            rows.append([n, float(ka), float(g), float(e)])
    return ResultBundle(name="spectrum", columns=["n_spins", "ka", "g", "energy"], rows=rows)


def _run_ed(cfg):
    p = cfg.params
    _require(p, "model", "n_list")
    model = p["model"]
    g_grid = _grid(p.get("g_grid", {"start": 0.0, "stop": 1.0, "num": 21}), "g_grid")
    m = int(p.get("m", 4))
    parity = model in ("ising_ring", "mixed_grover_ising") and p.get("resolve_parity", True)
    rows, bad = [], 0
    for n in p["n_list"]:
        for g in g_grid:
            try:
                ham = exact.build_hamiltonian(model, int(n), float(g), p.get("marked_state"))
                spec = exact.low_spectrum(ham, m, resolve_parity=parity)
            except exact.NonConvergenceError:
                bad += 1
                rows.append([model, int(n), float(g), -1, np.nan, 0.0, np.nan])
                continue
            for lvl, e in enumerate(spec.eigenvalues):
                par = spec.parity_labels[lvl] if spec.parity_labels is not None else 0.0
                rows.append(
                    [model, int(n), float(g), lvl, float(e), float(par), float(spec.residuals[lvl])]
                )
    return ResultBundle(
        name="ed",
        columns=["model", "n_spins", "g", "level", "energy", "parity", "residual"],
        rows=rows,
        nonconverged=bad,
    )


def _run_sweep(cfg):
    p = cfg.params
    _require(p, "n_spins", "T_list")
    n = int(p["n_spins"])
    ka_list = p.get("ka_list")
    if ka_list is None:
        ka_list = [np.pi / n]
    rows = []
    for T in p["T_list"]:
        sched = schedules.make_schedule(p.get("schedule", "linear"), float(T), n_spins=n)

        def one(ka, sched=sched, T=T):
            traj = ising.integrate_bogoliubov(float(ka), sched)
            pexc = ising.excitation_probability_mode(float(ka), sched)
            mis = ising.adiabatic_mismatch(float(ka), sched)
            return [
                n, float(ka), float(T), sched.kind, pexc,
                traj.norm_defect, traj.endpoint_error, mis,
            ]

        rows.extend(_pmap(one, ka_list, cfg.threads))
    return ResultBundle(
        name="sweep",
        columns=[
            "n_spins", "ka", "T", "schedule", "excitation_probability",
            "norm_defect", "endpoint_error", "adiabatic_mismatch",
        ],
        rows=rows,
    )


def _run_response(cfg):
    p = cfg.params
    _require(p, "n_spins", "T", "omega_grid", "channel")
    n = int(p["n_spins"])
    channel = response.Channel(kind=p["channel"], coupling=float(p.get("coupling", 1.0)))
    sched = _make_schedule(p, n_spins=n)
    omega_grid = _grid(p["omega_grid"], "omega_grid")
    ka_list = p.get("ka_list") or [np.pi / n]
    rows, bad = [], 0

    def one(item):
        ka, w = item
        if channel.kind == "single_site_z":
            b = response.amplitude_bitflip(float(ka), float(w), sched)
            val = b.a1 + b.a2
            return [
                channel.kind, n, float(ka), float(ka), float(w),
                response.classify_regime(float(w), float(ka)), "quadrature",
                val.real, val.imag, abs(val), b.quad_error, 1,
            ]
        if channel.kind == "nonuniform_x":
            kpa = float(p.get("kpa", ka))
            r = response.amplitude_direct_nonuniform(float(ka), kpa, float(w), n, sched)
        else:
            r = response.amplitude_direct_uniform(
                float(ka), float(w), sched, endpoint_order=int(p.get("endpoint_order", 0))
            )
        kpa = r.modes[1] if len(r.modes) > 1 else r.modes[0]
        return [
            channel.kind, n, float(r.modes[0]), float(kpa), float(w), r.regime,
            r.method, r.value.real, r.value.imag, r.modulus, r.quad_error, int(r.converged),
        ]

    items = [(ka, w) for ka in ka_list for w in omega_grid]
    for row in _pmap(one, items, cfg.threads):
        rows.append(row)
        if not row[-1]:
            bad += 1
    return ResultBundle(
        name="response",
        columns=[
            "channel", "n_spins", "ka", "kpa", "omega", "regime", "method",
            "re", "im", "modulus", "quad_error", "converged",
        ],
        rows=rows,
        nonconverged=bad,
    )


def _bath_from_config(p):
    spec = p.get("bath")
    if spec is None:
        return None
    kind = spec.get("kind", "thermal_bosonic")
    if kind == "thermal_bosonic":
        return bath.SpectralFunction(
            kind=kind,
            theta=float(spec.get("theta", 0.5)),
            omega_ph=float(spec.get("omega_ph", 1.0)),
            epsilon=float(spec.get("epsilon", 1.0)),
            omega_c=float(spec.get("omega_c", np.inf)),
            beta=float(spec.get("beta", np.inf)),
        )
    if kind == "tabulated":
        _require(spec, "path")
        return bath.load_tabulated(spec["path"])
    if kind == "dirac_comb":
        _require(spec, "omega0", "weight")
        return bath.dirac_probe(spec["omega0"], spec["weight"])
    raise ConfigError(f"unknown bath kind {kind!r}")


def _run_grover(cfg):
    p = cfg.params
    _require(p, "n_list", "T")
    sf = _bath_from_config(p)
    coupling = float(p.get("coupling", 0.01))
    sched = _make_schedule(p)
    rows, bad = [], 0
    for n in p["n_list"]:
        params = grover.GroverParams(
            n_qubits=int(n), coupling=coupling, schedule=sched, spectral_function=sf,
            marked_state=p.get("marked_state"),
        )
        est = grover.error_estimate(params, float(p.get("gap_multiplier", 1.0))) if sf else np.nan
        err = np.nan
        if sf is not None and sf.kind == "dirac_comb":
            try:
                err = grover.error_probability(params)
            except grover.QuadratureError:
                bad += 1
        rows.append([int(n), params.dim, params.min_gap, err, est])
    return ResultBundle(
        name="grover",
        columns=["n_qubits", "dim", "min_gap", "error_probability", "error_estimate"],
        rows=rows,
        nonconverged=bad,
    )


def _run_scaling(cfg):
    p = cfg.params
    study = p.get("study", "gap_law")
    rows, fits = [], {}
    if study == "gap_law":
        n_list = [int(n) for n in p.get("n_list", [8, 16, 32, 64, 128, 256, 512, 1024])]
        gaps = [ising.global_min_gap(ising.ChainParams(n)) for n in n_list]
        rows = [[n, g] for n, g in zip(n_list, gaps)]
        fit = fit_power_law(np.asarray(n_list, float), np.asarray(gaps))
        fits["gap_law"] = {"exponent": fit.exponent, "prefactor": fit.prefactor, "r_squared": fit.r_squared}
        columns = ["n_spins", "min_gap"]
    elif study == "near_gap_table":
        n_list = [int(n) for n in p.get("n_list", [32, 64, 128, 256])]
        columns = ["schedule", "n_spins", "T", "bound"]
        for kind in ("linear", "gap_adapted", "gap_squared_adapted"):
            vals = []
            for n in n_list:
                gap_min = ising.global_min_gap(ising.ChainParams(n))
                if kind == "linear":
                    T = gap_min**-2.0
                elif kind == "gap_adapted":
                    T = n * np.log(n)
                else:
                    T = float(n)
                sched = schedules.make_schedule(kind, float(T), n_spins=n)
                b = response.amplitude_bound_near_gap(np.pi / n, sched).modulus
                vals.append(b)
                rows.append([kind, n, float(T), b])
            ns = np.asarray(n_list, float)
            vals = np.asarray(vals)
            if kind == "linear":
                fit = fit_power_law(ns, vals / ((2 * np.pi / ns) * np.log(ns)))
            else:
                fit = fit_power_law(ns, vals)
            fits[kind] = {"exponent": fit.exponent, "r_squared": fit.r_squared}
    elif study == "mixed_gap":
        n_list = [int(n) for n in p.get("n_list", [4, 6, 8, 10])]
        fit, gaps = exact.mixed_gap_scaling(n_list, coarse_points=int(p.get("coarse_points", 41)))
        rows = [[n, g] for n, g in gaps.items()]
        fits["mixed_gap"] = {"rate": fit.exponent, "r_squared": fit.r_squared}
        columns = ["n_spins", "min_even_gap"]
    else:
        raise ConfigError(f"unknown scaling study {study!r}")
    return ResultBundle(name=f"scaling_{study}", columns=columns, rows=rows, fits=fits)


_RUNNERS = {
    "spectrum": _run_spectrum,
    "ed": _run_ed,
    "sweep": _run_sweep,
    "response": _run_response,
    "grover": _run_grover,
    "scaling": _run_scaling,
}


def _fmt(x):
    if isinstance(x, float):
        return "%.17g" % x
    if isinstance(x, (np.floating,)):
        return "%.17g" % float(x)
    return str(x)


def emit(bundle, out_dir, config, walltime):
    """Write CSV + JSON mirror + manifest; returns the CSV path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{bundle.name}.csv"
    lines = [",".join(bundle.columns)]
    for row in bundle.rows:
        lines.append(",".join(_fmt(x) for x in row))
    csv_path.write_text("\n".join(lines) + "\n")

    json_doc = {
        "columns": bundle.columns,
        "rows": [[x if isinstance(x, str) else float(x) if not isinstance(x, (int, np.integer)) else int(x) for x in row] for row in bundle.rows],
        "fits": bundle.fits,
        "nonconverged": bundle.nonconverged,
    }
    (out / f"{bundle.name}.json").write_text(json.dumps(json_doc, indent=1, sort_keys=True))
    manifest = {
        "config_sha256": config.sha256(),
        "experiment": config.experiment,
        "seed": config.seed,
        "threads": config.threads,
        "qptsweep_version": __version__,
        "numpy_version": np.__version__,
        "walltime_s": walltime,
    }
    (out / f"{bundle.name}.manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True))
    return csv_path


def run(config, out_dir):
    """Execute one experiment; returns (bundle, exit_code)."""
    t0 = time.monotonic()
    bundle = _RUNNERS[config.experiment](config)
    emit(bundle, out_dir, config, walltime=time.monotonic() - t0)
    return bundle, (2 if bundle.nonconverged else 0)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="qptsweep", description=__doc__)
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True)
        sp.add_argument("--out", required=True)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    try:
        config = ExperimentConfig.load(args.config, args.experiment)
        config.seed = args.seed
        config.threads = max(1, args.threads)
        _, code = run(config, args.out)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
