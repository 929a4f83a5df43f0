"""Scenario orchestration: configs, traces, CSV and plot-script emission.

A ScenarioConfig describes one run of either closed-form regime (or a
comparison/sweep across both), carrying the quench schedule, the grid, the
RNG seed, and the guard overrides.  Results come back as small column
tables that serialize to deterministic CSV: same config and seed, same
bytes.

Magnetization lookup: the sampler's exact-diagonalization oracle acts on
the spin-1/2 ring, whose true critical field sits at 1/2, while the quench
schedule measures distance from criticality against hc (default 1).  The
preparation and freeze-out fields are therefore rescaled by
mz_field_scale (default 1/2) before the lookup so that "how far from
critical" means the same thing in both places; set it to 1.0 to probe the
unscaled ring instead.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import dia as dia_mod
from . import para as para_mod
from .concurrence import closed_form_check
from .errors import ConfigError
from .exact import scs_cross_check
from .sampler import (
    DomainEnsemble,
    ensemble_mean_magnetization,
    equilibrium_magnetization,
    sample_initial_directions,
)
from .scaling import QuenchSchedule, domain_partition, field_at, freeze_out_time
from .scs import ScsDirection, overlap_exact, overlap_magnitude

__all__ = [
    "MODES",
    "PRESET_NAMES",
    "ScenarioConfig",
    "DataTable",
    "ScenarioResult",
    "run_scenario",
    "preset_config",
    "run_preset",
    "reference_dia_config",
    "oracle_report",
    "emit_csv",
    "parse_csv",
    "emit_plot_script",
    "write_outputs",
]

MODES = ("para", "dia", "compare", "sweep-g", "oracle-check")
PRESET_NAMES = ("fig3", "fig4", "fig5")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one scenario run depends on; JSON round-trippable."""

    mode: str = "compare"
    label: str = ""
    n: int = 120
    g: float = 1.0 / 6.0
    h_para: float = 2.0
    h0: float = 1.01
    v: float = 6e-4
    hc: float = 1.0
    nu: float = 1.0
    z: float = 1.0
    xi0: float = 1.0
    tau0: float = 0.5
    t0_offset: float = 12.0
    t_start: float = 0.0
    t_stop: float = 1.0
    t_points: int = 201
    seed: int = 1
    realizations: int = 1
    n_ref: int = 14
    mz_field_scale: float = 0.5
    g_max: float = 0.25
    g_to_h_max: float = 0.25
    g_sweep_min: float = 0.02
    g_sweep_max: float = 0.25
    g_sweep_points: int = 50
    ensemble_json: str | None = None
    out: str | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.t_points < 2:
            raise ConfigError("a trace needs at least 2 grid points")
        if self.t_stop < self.t_start:
            raise ConfigError("grid must have t_stop >= t_start")
        if self.realizations < 1:
            raise ConfigError("realizations must be >= 1")
        if self.ensemble_json is not None and self.realizations > 1:
            raise ConfigError(
                "a replayed ensemble fixes the domain directions, so "
                "realizations > 1 would repeat one realization; drop "
                "ensemble_json or set realizations to 1"
            )
        if self.g_sweep_points < 2 or self.g_sweep_max < self.g_sweep_min:
            raise ConfigError("sweep grid must be ordered with >= 2 points")
        if self.mode == "sweep-g" and self.g_sweep_max > self.g_max:
            raise ConfigError(
                f"sweep reaches g={self.g_sweep_max} above the weak-coupling "
                f"guard g_max={self.g_max}; raise g_max (and g_to_h_max) "
                "deliberately if the stronger couplings are wanted"
            )

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str, mode: str | None = None) -> "ScenarioConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config JSON must be an object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        if mode is not None:
            stated = data.get("mode")
            if stated is not None and stated != mode:
                raise ConfigError(
                    f"config says mode={stated!r} but the command requested {mode!r}"
                )
            data["mode"] = mode
        return cls(**data)

    def schedule(self) -> QuenchSchedule:
        return QuenchSchedule(
            h0=self.h0, v=self.v, hc=self.hc, nu=self.nu, z=self.z,
            xi0=self.xi0, tau0=self.tau0,
        )


class DataTable:
    """Named columns over rows of floats/strings, with opaque metadata."""

    def __init__(self, columns, rows, metadata=None):
        self.columns = tuple(str(c) for c in columns)
        self.rows = [tuple(r) for r in rows]
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError("row width does not match the column count")
        self.metadata = dict(metadata or {})

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([float(r[i]) for r in self.rows])

    def isclose(self, other: "DataTable", rtol: float = 1e-11, atol: float = 1e-13) -> bool:
        if self.columns != other.columns or len(self.rows) != len(other.rows):
            return False
        if self.metadata != other.metadata:
            return False
        for ra, rb in zip(self.rows, other.rows):
            for a, b in zip(ra, rb):
                if isinstance(a, str) or isinstance(b, str):
                    if str(a) != str(b):
                        return False
                elif not math.isclose(float(a), float(b), rel_tol=rtol, abs_tol=atol):
                    return False
        return True


def _validate_trace(table: DataTable) -> DataTable:
    t = table.column("t_elapsed")
    if np.any(np.diff(t) <= 0):
        raise ValueError("trace times must be strictly increasing")
    for name in table.columns:
        if name.startswith("concurrence"):
            c = table.column(name)
            if np.any(c < -1e-12) or np.any(c > 1.0 + 1e-12):
                raise ValueError(f"column {name} leaves [0, 1]")
    return table


@dataclass
class ScenarioResult:
    """Tables keyed by trace name, plus any sampled ensembles for replay."""

    tables: dict[str, DataTable]
    ensembles: dict[str, DomainEnsemble] = field(default_factory=dict)


def _base_metadata(cfg: ScenarioConfig) -> dict[str, str]:
    return {
        "generator": f"kzring {__version__}",
        "mode": cfg.mode,
        "seed": str(cfg.seed),
        "realizations": str(cfg.realizations),
        "config": cfg.to_json(),
    }


def _para_config(cfg: ScenarioConfig, g: float | None = None) -> para_mod.ParaConfig:
    return para_mod.ParaConfig(
        n=cfg.n, g=cfg.g if g is None else g, h=cfg.h_para,
        g_max=cfg.g_max, g_to_h_max=cfg.g_to_h_max,
    )


def _load_ensemble(path: str, n_d: int) -> DomainEnsemble:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            ensemble = DomainEnsemble.from_json(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read ensemble file {path}: {exc}") from exc
    if len(ensemble.directions) != n_d:
        raise ConfigError(
            f"replayed ensemble has {len(ensemble.directions)} domains, "
            f"the partition needs {n_d}"
        )
    return ensemble


def _dia_config(
    cfg: ScenarioConfig, realization: int = 0, g: float | None = None
) -> dia_mod.DiaConfig:
    schedule = cfg.schedule()
    partition = domain_partition(cfg.n, schedule)
    t_bar = freeze_out_time(schedule)
    t0 = t_bar + cfg.t0_offset
    if cfg.ensemble_json is not None:
        ensemble = _load_ensemble(cfg.ensemble_json, partition.n_d)
    else:
        scale = cfg.mz_field_scale
        m0 = equilibrium_magnetization(field_at(schedule, t0) * scale, cfg.n_ref)
        md = equilibrium_magnetization(field_at(schedule, t_bar) * scale, cfg.n_ref)
        ensemble = sample_initial_directions(
            partition.n_d, m0, md, seed=cfg.seed, realization=realization
        )
    dia_cfg = dia_mod.DiaConfig(
        n=cfg.n, g=cfg.g if g is None else g, schedule=schedule, t0=t0,
        partition=partition, ensemble=ensemble,
        g_max=cfg.g_max, g_to_h_max=cfg.g_to_h_max,
    )
    dia_mod.validate_trace_span(dia_cfg, cfg.t_stop - cfg.t_start)
    return dia_cfg


def _time_grid(cfg: ScenarioConfig) -> np.ndarray:
    return np.linspace(cfg.t_start, cfg.t_stop, cfg.t_points)


def _run_para(cfg: ScenarioConfig) -> DataTable:
    pc = _para_config(cfg)
    rows = []
    for t in _time_grid(cfg):
        rows.append(
            (float(t), para_mod.concurrence(pc, t), para_mod.branch_overlap(pc, t),
             cfg.h_para)
        )
    meta = _base_metadata(cfg)
    meta["regime"] = "paramagnetic closed form"
    return _validate_trace(
        DataTable(("t_elapsed", "concurrence", "branch_overlap_modulus", "h_t"),
                  rows, meta)
    )


def _dia_metadata(cfg: ScenarioConfig, dc: dia_mod.DiaConfig) -> dict[str, str]:
    meta = _base_metadata(cfg)
    meta.update(
        regime="frozen-domain closed form",
        t_bar=f"{freeze_out_time(dc.schedule):.12g}",
        t0=f"{dc.t0:.12g}",
        xi_d=str(dc.partition.xi_d),
        n_d=str(dc.partition.n_d),
        s_d=f"{dc.partition.s_d:.12g}",
        m0z_target=f"{dc.ensemble.m0z_target:.12g}",
        mdz_target=f"{dc.ensemble.mdz_target:.12g}",
        ensemble_mean_mz=f"{ensemble_mean_magnetization(dc.ensemble):.12g}",
    )
    return meta


def _run_dia(cfg: ScenarioConfig) -> tuple[DataTable, dict[str, DomainEnsemble]]:
    grid = _time_grid(cfg)
    per_real = []
    ensembles: dict[str, DomainEnsemble] = {}
    first_cfg: dia_mod.DiaConfig | None = None
    for r in range(cfg.realizations):
        dc = _dia_config(cfg, realization=r)
        if first_cfg is None:
            first_cfg = dc
        ensembles["dia" if r == 0 else f"dia_r{r}"] = dc.ensemble
        conc = np.array([dia_mod.concurrence(dc, t) for t in grid])
        over = np.array([dia_mod.branch_overlap(dc, t) for t in grid])
        per_real.append((conc, over))
    assert first_cfg is not None
    h_vals = np.array([field_at(first_cfg.schedule, first_cfg.t0 + t) for t in grid])
    conc_all = np.stack([c for c, _ in per_real])
    over_all = np.stack([o for _, o in per_real])
    meta = _dia_metadata(cfg, first_cfg)
    if cfg.realizations == 1:
        columns = ("t_elapsed", "concurrence", "branch_overlap_modulus", "h_t")
        rows = [
            (float(t), float(conc_all[0, i]), float(over_all[0, i]), float(h_vals[i]))
            for i, t in enumerate(grid)
        ]
    else:
        columns = (
            "t_elapsed", "concurrence", "concurrence_min", "concurrence_max",
            "branch_overlap_modulus", "h_t",
        )
        rows = [
            (
                float(t),
                float(conc_all[:, i].mean()),
                float(conc_all[:, i].min()),
                float(conc_all[:, i].max()),
                float(over_all[:, i].mean()),
                float(h_vals[i]),
            )
            for i, t in enumerate(grid)
        ]
    return _validate_trace(DataTable(columns, rows, meta)), ensembles


def _run_compare(cfg: ScenarioConfig) -> ScenarioResult:
    para_table = _run_para(cfg)
    dia_table, ensembles = _run_dia(cfg)
    t = para_table.column("t_elapsed")
    diff = dia_table.column("concurrence") - para_table.column("concurrence")
    meta = _base_metadata(cfg)
    meta["regime"] = "difference (frozen-domain minus paramagnetic)"
    diff_table = DataTable(
        ("t_elapsed", "difference"),
        [(float(ti), float(di)) for ti, di in zip(t, diff)],
        meta,
    )
    return ScenarioResult(
        tables={"para": para_table, "dia": dia_table, "difference": diff_table},
        ensembles=ensembles,
    )


def _run_sweep(cfg: ScenarioConfig) -> ScenarioResult:
    grid_t = _time_grid(cfg)
    grid_g = np.linspace(cfg.g_sweep_min, cfg.g_sweep_max, cfg.g_sweep_points)
    rows = []
    ensemble: DomainEnsemble | None = None
    for g in grid_g:
        pc = _para_config(cfg, g=float(g))
        dc = _dia_config(cfg, g=float(g))
        if ensemble is None:
            ensemble = dc.ensemble
        for t in grid_t:
            c_d = dia_mod.concurrence(dc, float(t))
            c_p = para_mod.concurrence(pc, float(t))
            rows.append((float(g), float(t), c_d, c_p, c_d - c_p))
    meta = _base_metadata(cfg)
    meta["regime"] = "coupling sweep (frozen-domain minus paramagnetic)"
    table = DataTable(
        ("g", "t_elapsed", "concurrence_dia", "concurrence_para", "difference"),
        rows, meta,
    )
    assert ensemble is not None
    return ScenarioResult(tables={"sweep": table}, ensembles={"sweep": ensemble})


def reference_dia_config(seed: int = 7) -> dia_mod.DiaConfig:
    """Small deterministic frozen-domain scenario for oracle work.

    20 spins partitioned into two domains of collective spin 5, with
    synthetic magnetization targets so no diagonalization is involved.
    """
    schedule = QuenchSchedule(h0=1.09, v=0.02)
    partition = domain_partition(20, schedule)
    ensemble = sample_initial_directions(
        partition.n_d, m0z=0.32, mdz=0.33, seed=seed
    )
    return dia_mod.DiaConfig(
        n=20, g=1.0 / 6.0, schedule=schedule, t0=0.0,
        partition=partition, ensemble=ensemble,
    )


def oracle_report(cfg: ScenarioConfig | None = None) -> DataTable:
    """Cross-validate the closed forms against dense-matrix oracles.

    Returns one row per check: name, worst deviation, tolerance, verdict.
    """
    times_para = np.linspace(0.0, math.pi, 200)
    dev_para = closed_form_check(
        "para", para_mod.ParaConfig(n=8, g=0.05, h=2.0), times_para
    )
    dev_dia = closed_form_check(
        "dia", reference_dia_config(), np.linspace(0.0, 1.0, 200)
    )
    rng = np.random.default_rng(2024)
    dev_scs = 0.0
    for s in (0.5, 2.0, 5.0, 10.0):
        for _ in range(10):
            d1 = ScsDirection(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            d2 = ScsDirection(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            dev_scs = max(dev_scs, scs_cross_check(d1, s, d2).max_deviation)
    dev_overlap = 0.0
    for s in (0.5, 5.0, 30.0):
        for _ in range(50):
            d1 = ScsDirection(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            d2 = ScsDirection(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
            dev_overlap = max(
                dev_overlap,
                abs(abs(overlap_exact(d1, d2, s)) ** 2 - overlap_magnitude(d1, d2, s)),
            )
    checks = [
        ("closed_form_para", dev_para, 1e-10),
        ("closed_form_dia", dev_dia, 1e-10),
        ("scs_cross_check", dev_scs, 1e-10),
        ("overlap_dicke_vs_half_angle", dev_overlap, 1e-10),
    ]
    meta = _base_metadata(cfg) if cfg is not None else {
        "generator": f"kzring {__version__}", "mode": "oracle-check",
    }
    rows = [
        (name, float(dev), tol, "pass" if dev < tol else "FAIL")
        for name, dev, tol in checks
    ]
    return DataTable(("check", "max_deviation", "tolerance", "verdict"), rows, meta)


def run_scenario(cfg: ScenarioConfig) -> ScenarioResult:
    """Run one scenario and return its tables (plus sampled ensembles)."""
    if cfg.mode == "para":
        return ScenarioResult(tables={"para": _run_para(cfg)})
    if cfg.mode == "dia":
        table, ensembles = _run_dia(cfg)
        return ScenarioResult(tables={"dia": table}, ensembles=ensembles)
    if cfg.mode == "compare":
        return _run_compare(cfg)
    if cfg.mode == "sweep-g":
        return _run_sweep(cfg)
    if cfg.mode == "oracle-check":
        return ScenarioResult(tables={"oracle": oracle_report(cfg)})
    raise ConfigError(f"unknown mode {cfg.mode!r}")


def preset_config(name: str) -> tuple[ScenarioConfig, ...]:
    """Bundled scenarios, each pinned to seed 1 and a single realization."""
    if name == "fig3":
        return (ScenarioConfig(mode="compare", label="fig3"),)
    if name == "fig4":
        cases = ((6e-4, 12.0, 1.01), (2.2e-3, 1.5, 1.03), (2e-2, 0.5, 1.09))
        return tuple(
            ScenarioConfig(mode="dia", label=f"v{v:g}", v=v, t0_offset=off, h0=h0)
            for v, off, h0 in cases
        )
    if name == "fig5":
        return (
            ScenarioConfig(
                mode="sweep-g", label="fig5", n=1000, h_para=5.0, h0=1.001,
                v=5e-5, t0_offset=0.0, t_points=50,
                g_sweep_max=0.3, g_max=0.3, g_to_h_max=0.3,
            ),
        )
    raise ConfigError(f"unknown preset {name!r}, expected one of {PRESET_NAMES}")


def run_preset(name: str, **overrides) -> ScenarioResult:
    """Run a preset; keyword overrides are applied to every member config."""
    merged = ScenarioResult(tables={}, ensembles={})
    configs = preset_config(name)
    for cfg in configs:
        if overrides:
            cfg = dataclasses.replace(cfg, **overrides)
        result = run_scenario(cfg)
        prefix = cfg.label if len(configs) > 1 else ""
        for key, table in result.tables.items():
            merged.tables[f"{prefix}_{key}" if prefix else key] = table
        for key, ens in result.ensembles.items():
            merged.ensembles[f"{prefix}_{key}" if prefix else key] = ens
    return merged


def _format_cell(value) -> str:
    if isinstance(value, str):
        if "," in value or "\n" in value:
            raise ValueError("table strings must not contain commas or newlines")
        return value
    return f"{float(value):.12g}"


def emit_csv(table: DataTable, path: str) -> None:
    """Write metadata (# key = value), a header row, then 12-digit data rows.

    Output is UTF-8 with LF endings and is byte-deterministic for a given
    table.
    """
    lines = [f"# {k} = {v}" for k, v in table.metadata.items()]
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_format_cell(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_csv(path: str) -> DataTable:
    """Read a table written by emit_csv (floats where cells parse as float)."""
    metadata: dict[str, str] = {}
    columns: tuple[str, ...] | None = None
    rows: list[tuple] = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                key, _, value = body.partition(" = ")
                metadata[key] = value
                continue
            cells = line.split(",")
            if columns is None:
                columns = tuple(cells)
                continue
            parsed = []
            for cell in cells:
                try:
                    parsed.append(float(cell))
                except ValueError:
                    parsed.append(cell)
            rows.append(tuple(parsed))
    if columns is None:
        raise ValueError(f"no header row found in {path}")
    return DataTable(columns, rows, metadata)


def emit_plot_script(keys, label: str, mode: str, path: str) -> None:
    """Write a gnuplot script rendering the emitted CSVs (relative paths only)."""
    lines = [
        f"# gnuplot script for the '{label}' run (mode: {mode})",
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set grid",
    ]
    files = {key: f"{label}_{key}.csv" for key in keys}
    if mode == "compare":
        lines += [
            "set xlabel 't - t0'",
            "set ylabel 'concurrence'",
            "set multiplot",
            "set size 1, 1",
            "set origin 0, 0",
            f"plot '{files['dia']}' using 1:2 with lines lw 2 title 'frozen domains', \\",
            f"     '{files['para']}' using 1:2 with lines lw 2 title 'paramagnet'",
            "set size 0.42, 0.38",
            "set origin 0.5, 0.52",
            "set xlabel ''",
            "set ylabel 'difference'",
            f"plot '{files['difference']}' using 1:2 with lines notitle",
            "unset multiplot",
        ]
    elif mode == "sweep-g":
        name = files.get("sweep", next(iter(files.values())))
        lines += [
            "set xlabel 'g'",
            "set ylabel 't - t0'",
            "set cblabel 'concurrence difference'",
            "set view map",
            f"plot '{name}' using 1:2:5 with image",
        ]
    else:
        lines += ["set xlabel 't - t0'", "set ylabel 'concurrence'"]
        plot_parts = [
            f"'{fname}' using 1:2 with lines lw 2 title '{key}'"
            for key, fname in files.items()
        ]
        lines.append("plot " + ", \\\n     ".join(plot_parts))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_outputs(result: ScenarioResult, label: str, mode: str, out_dir: str) -> list[str]:
    """Write every table, sampled ensemble, and one plot script; return paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for key, table in result.tables.items():
        path = os.path.join(out_dir, f"{label}_{key}.csv")
        emit_csv(table, path)
        written.append(path)
    for key, ensemble in result.ensembles.items():
        path = os.path.join(out_dir, f"{label}_{key}_ensemble.json")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(ensemble.to_json() + "\n")
        written.append(path)
    if mode != "oracle-check":
        path = os.path.join(out_dir, f"{label}.gp")
        emit_plot_script(sorted(result.tables), label, mode, path)
        written.append(path)
    return written
