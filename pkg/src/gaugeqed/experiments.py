"""Experiment configs, runners and deterministic CSV/manifest output."""

from __future__ import annotations

import copy
import csv
import hashlib
import io
import json
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .asymptotics import zeta_asymptote
from .circuit import (DM, EDM, EDM_BARE, bare_coupling, build_flux_gauge, ground_observables, reduce,
                      spec_for_coupling)
from .dipole import solve_dipole
from .errors import ConfigError, CurvatureUndefined
from .gauge import PhotonMode, full_pair, resonant_setup
from .multidipole import (CollectiveConfig, dicke_branches, dispersion_residuals, edm_branches,
                          exact_dispersion)
from .potentials import Grid, PotentialSpec
from .rabi import project_rabi, rabi_excitations

OUTPUT_ENV = "GAUGEQED_OUTPUT_DIR"
DEFAULT_OUTPUT = "gaugeqed-out"

EXPERIMENTS = ("dipole", "zeta", "rabi-sweep", "matrix-table", "polariton", "circuit")

DEFAULTS: dict[str, dict[str, Any]] = {
    "dipole": {"potential": {"shape": "double_well", "beta": 2.4}, "n_levels": 50},
    "zeta": {"potential": {"shape": "double_well", "beta": 2.4}, "n_levels": 20,
             "sweep": {"start": 0.0, "stop": 10.0, "num": 101}},
    "rabi-sweep": {"potential": {"shape": "double_well", "beta": 3.7}, "n_levels": 20, "n_fock": 60, "k": 5,
                   "sweep": {"start": 0.0, "stop": 2.0, "num": 21}},
    "matrix-table": {"potential": {"shape": "double_well", "beta": 3.7}, "n_levels": 20, "g0_over_wc": 1.0},
    "polariton": {"potential": {"shape": "double_well", "beta": 2.3}, "n_levels": 60,
                  "sweep": {"start": 0.0, "stop": 10.0, "num": 51}},
    "circuit": {"circuit": {"e_j": 50.0, "e_cq": 12.0, "e_lq": 7.0, "n_qubits": 2}, "levels": 6, "n_fock": 40,
                "reduced_fock": 60, "k": 6, "sweep": {"start": 0.0, "stop": 6.0, "num": 25}},
}

SHAPE_ALIASES = {"square-well": "square_well", "double-well": "double_well", "flux-cosine": "flux_cosine"}


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return repr(float(x))


def write_csv(path: Path, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    text = buf.getvalue()
    path.write_text(text)
    return hashlib.sha256(text.encode()).hexdigest()


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict) and k not in ("potential", "circuit"):
            out[k] = _merge(out[k], v)
        elif isinstance(v, dict) and isinstance(out.get(k), dict):
            # a different potential shape replaces the default wholesale
            same = v.get("shape", out[k].get("shape")) == out[k].get("shape")
            out[k] = _merge(out[k], v) if same else copy.deepcopy(v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def sweep_values(sweep: dict[str, Any]) -> list[float]:
    if "values" in sweep:
        vals = [float(v) for v in sweep["values"]]
    else:
        try:
            start, stop, num = float(sweep["start"]), float(sweep["stop"]), int(sweep["num"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"sweep needs start/stop/num or values: {exc}") from None
        if num < 1:
            raise ConfigError("sweep num must be >= 1")
        vals = [float(v) for v in np.linspace(start, stop, num)]
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ConfigError("sweep grid must be strictly increasing")
    if any(v < 0 for v in vals):
        raise ConfigError("sweep values must be >= 0")
    return vals


def parse_potential(d: dict[str, Any]) -> PotentialSpec:
    d = dict(d)
    shape = SHAPE_ALIASES.get(d.get("shape", ""), d.get("shape"))
    d["shape"] = shape
    if shape == "double_well" and "beta" not in d:
        raise ConfigError("double_well potential needs beta")
    if shape == "harmonic" and "omega" not in d:
        d["omega"] = 1.0
    if shape == "flux_cosine" and ("e_j" not in d or "e_l" not in d):
        raise ConfigError("flux_cosine potential needs e_j and e_l")
    try:
        return PotentialSpec.from_dict(d)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad potential: {exc}") from None


def _positive_int(cfg, key, minimum=1):
    v = cfg.get(key)
    if v is None:
        return
    if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
        raise ConfigError(f"{key} must be an integer >= {minimum}, got {v!r}")


def resolve_config(raw: dict[str, Any]) -> dict[str, Any]:
    """Validate a config and fill in the defaults of its experiment."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    if isinstance(raw.get("config"), dict):
        raw = raw["config"]  # a run manifest replays its own config
    exp = raw.get("experiment")
    if exp not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {exp!r}; expected one of {', '.join(EXPERIMENTS)}")
    cfg = _merge(DEFAULTS[exp], {k: v for k, v in raw.items() if k != "experiment"})
    cfg["experiment"] = exp
    for key in ("n_levels", "k", "levels"):
        _positive_int(cfg, key)
    for key in ("n_fock", "reduced_fock"):
        _positive_int(cfg, key, 2)
    if "potential" in cfg:
        cfg["potential"] = parse_potential(cfg["potential"]).to_dict()
    if "grid" in cfg:
        try:
            Grid.from_dict(cfg["grid"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad grid: {exc}") from None
    if "sweep" in cfg:
        sweep_values(cfg["sweep"])
    if exp == "circuit":
        c = cfg["circuit"]
        for key in ("e_j", "e_cq", "e_lq"):
            if not isinstance(c.get(key), (int, float)) or c[key] <= 0:
                raise ConfigError(f"circuit.{key} must be a positive number")
        if c.get("n_qubits", 1) not in (1, 2, 3):
            raise ConfigError("circuit.n_qubits must be 1, 2 or 3")
    if "g0_over_wc" in cfg and not cfg["g0_over_wc"] >= 0:
        raise ConfigError("g0_over_wc must be >= 0")
    return cfg


@dataclass
class RunResult:
    outputs: dict[str, str] = field(default_factory=dict)  # file name -> sha256
    truncations: dict[str, Any] = field(default_factory=dict)
    residuals: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


def _grid(cfg):
    return Grid.from_dict(cfg["grid"]) if "grid" in cfg else None


def run_dipole(cfg, out: Path, res: RunResult):
    pot = PotentialSpec.from_dict(cfg["potential"])
    sys = solve_dipole(pot, _grid(cfg), cfg["n_levels"])
    text = sys.to_csv()
    (out / "dipole_levels.csv").write_text(text)
    res.outputs["dipole_levels.csv"] = hashlib.sha256(text.encode()).hexdigest()
    scal = {"f": sys.f, "delta_nl": sys.delta_nl, "trk_partial": sys.trk_partial, "omega_sq": sys.omega_sq()}
    res.truncations.update(grid=sys.grid.to_dict(), n_levels=sys.n_levels)
    res.residuals["edge_amplitude"] = sys.leak
    res.residuals.update({k: v for k, v in scal.items() if v is not None})
    rows = [[k, "undefined" if v is None else v] for k, v in scal.items()]
    res.outputs["dipole_scalars.csv"] = write_csv(out / "dipole_scalars.csv", ["quantity", "value"], rows)


def run_zeta(cfg, out: Path, res: RunResult):
    pot = PotentialSpec.from_dict(cfg["potential"])
    bare = solve_dipole(pot, _grid(cfg), cfg["n_levels"])
    try:
        omega_sq = pot.curvature()
    except CurvatureUndefined:
        omega_sq = None
    rows = []
    for g in sweep_values(cfg["sweep"]):
        s = resonant_setup(pot, g, bare=bare)
        ph = PhotonMode(s.omega_c, 2)
        d = s.coupling.d
        zc = project_rabi(s.bare, ph, d, "coulomb").zeta
        zd = project_rabi(s.tilde, ph, d, "dipole").zeta
        bound = d * d / (s.omega_c**2 + d * d) * bare.f
        if omega_sq is None or d * d + omega_sq <= 0:
            asym = "undefined"
        else:
            asym = zeta_asymptote(omega_sq, d)
        rows.append([g, zc, zd, bound, asym])
    res.truncations.update(grid=bare.grid.to_dict(), n_levels=bare.n_levels)
    res.outputs["zeta.csv"] = write_csv(out / "zeta.csv",
                                        ["g0_over_wc", "zeta_C", "zeta_D", "zeta_C_closed_form", "zeta_D_asymptote"],
                                        rows)


def run_rabi_sweep(cfg, out: Path, res: RunResult):
    pot = PotentialSpec.from_dict(cfg["potential"])
    bare = solve_dipole(pot, _grid(cfg), cfg["n_levels"])
    k, nf = cfg["k"], cfg["n_fock"]
    rows = []
    worst = 0.0
    for g in sweep_values(cfg["sweep"]):
        s = resonant_setup(pot, g, bare=bare)
        wc, d = s.omega_c, s.coupling.d
        mc, md = full_pair(s, nf)
        ec, ed = mc.excitations(k), md.excitations(k)
        worst = max(worst, float(np.max(np.abs(ec - ed) / ed)))
        rows.append([g, "coulomb", "full", *(ec / wc)])
        rows.append([g, "dipole", "full", *(ed / wc)])
        ph = PhotonMode(wc, nf)
        for gauge, sys in (("coulomb", s.bare), ("dipole", s.tilde)):
            er = rabi_excitations(project_rabi(sys, ph, d, gauge), nf, k)
            rows.append([g, gauge, "rabi", *(er / wc)])
    res.truncations.update(grid=bare.grid.to_dict(), n_levels=bare.n_levels, n_fock=nf)
    res.residuals["max_full_gauge_deviation"] = worst
    res.outputs["rabi_sweep.csv"] = write_csv(out / "rabi_sweep.csv",
                                              ["g0_over_wc", "gauge", "model", *[f"E_{i}" for i in range(1, k + 1)]],
                                              rows)


def run_matrix_table(cfg, out: Path, res: RunResult):
    pot = PotentialSpec.from_dict(cfg["potential"])
    s = resonant_setup(pot, cfg["g0_over_wc"], n_levels=cfg["n_levels"], grid=_grid(cfg))
    b, t = s.bare, s.tilde
    rows = []
    for n in range(b.n_levels):
        rows.append([n, b.energies[n] - b.energies[0], abs(b.x_mat[0, n]), abs(b.p_mat[0, n]),
                     t.energies[n] - t.energies[0], abs(t.x_mat[0, n])])
    res.truncations.update(grid=b.grid.to_dict(), n_levels=b.n_levels, D=s.coupling.d)
    res.outputs["matrix_table.csv"] = write_csv(out / "matrix_table.csv",
                                                ["n", "omega_n0", "abs_x_0n", "abs_p_0n", "omega_tilde_n0",
                                                 "abs_x_tilde_0n"], rows)


def run_polariton(cfg, out: Path, res: RunResult):
    pot = PotentialSpec.from_dict(cfg["potential"])
    sys = solve_dipole(pot, _grid(cfg), cfg["n_levels"])
    wc = sys.omega10
    rows = []
    worst = 0.0
    for g in sweep_values(cfg["sweep"]):
        c = CollectiveConfig.from_system(sys, g * wc)
        dc, de, ex = dicke_branches(c), edm_branches(c), exact_dispersion(sys, c)
        worst = max(worst, float(np.max(dispersion_residuals(sys, c, ex.roots))))
        rows.append([g, dc.omega_minus / wc, dc.omega_plus / wc, de.omega_minus / wc, de.omega_plus / wc,
                     ex.omega_minus / wc, ex.omega_plus / wc])
    res.truncations.update(grid=sys.grid.to_dict(), n_levels=sys.n_levels)
    res.residuals["max_dispersion_residual"] = worst
    res.outputs["polariton.csv"] = write_csv(out / "polariton.csv",
                                             ["G0_over_wc", "omega_C_minus", "omega_C_plus", "omega_D_minus",
                                              "omega_D_plus", "omega_exact_minus", "omega_exact_plus"], rows)


def run_circuit(cfg, out: Path, res: RunResult):
    c = cfg["circuit"]
    n = int(c.get("n_qubits", 2))
    k, levels, nf, nfr = cfg["k"], cfg["levels"], cfg["n_fock"], cfg["reduced_fock"]
    spec_rows, obs_rows, grid_rows = [], [], []
    for g in sweep_values(cfg["sweep"]):
        gg = max(g, 1e-6)  # E_Lr -> 0 is the decoupled limit; keep the circuit well defined
        spec = spec_for_coupling(c["e_j"], c["e_cq"], c["e_lq"], gg, n)
        grid_rows.append([g, spec.e_cr, spec.e_lr, spec.omega_c, bare_coupling(spec)])
        models = {"full": build_flux_gauge(spec, nf, levels)}
        models.update({kind: reduce(spec, kind, nfr) for kind in (DM, EDM, EDM_BARE)})
        for name, m in models.items():
            spec_rows.append([g, name, *m.excitations(k)])
            o = ground_observables(m)
            obs_rows.append([g, name, o["photon_number"], o["entropy_bits"]])
    res.truncations.update(levels=levels, n_fock=nf, reduced_fock=nfr, n_qubits=n)
    res.outputs["circuit_spectra.csv"] = write_csv(out / "circuit_spectra.csv",
                                                   ["g0_over_wc", "model", *[f"E_{i}" for i in range(1, k + 1)]],
                                                   spec_rows)
    res.outputs["circuit_observables.csv"] = write_csv(out / "circuit_observables.csv",
                                                       ["g0_over_wc", "model", "photon_number", "S1_bits"], obs_rows)
    res.outputs["circuit_sweep_grid.csv"] = write_csv(out / "circuit_sweep_grid.csv",
                                                      ["g0_over_wc", "E_Cr", "E_Lr", "omega_c", "g0"], grid_rows)


RUNNERS: dict[str, Callable] = {
    "dipole": run_dipole,
    "zeta": run_zeta,
    "rabi-sweep": run_rabi_sweep,
    "matrix-table": run_matrix_table,
    "polariton": run_polariton,
    "circuit": run_circuit,
}


def output_dir(cfg: dict[str, Any]) -> Path:
    return Path(cfg.get("output_dir") or os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT)


def run(raw: dict[str, Any]) -> tuple[Path, dict[str, Any]]:
    """Run one experiment; returns the output directory and the manifest written there."""
    cfg = resolve_config(raw)
    out = output_dir(cfg)
    out.mkdir(parents=True, exist_ok=True)
    res = RunResult()
    t0 = time.perf_counter()
    RUNNERS[cfg["experiment"]](cfg, out, res)
    replay = {k: v for k, v in cfg.items() if k != "output_dir"}
    manifest = {
        "artifact_version": __version__,
        "experiment": cfg["experiment"],
        "config": replay,
        "truncations": res.truncations,
        "convergence_residuals": res.residuals,
        "outputs": res.outputs,
        "wall_time_s": time.perf_counter() - t0,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=_json_default))
    return out, manifest


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(f"cannot serialize {type(o).__name__}")
