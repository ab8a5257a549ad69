"""Detuning sweeps and population dynamics, with deterministic file output."""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bloch_oracle import oracle_chi
from .config import SweepConfig
from .lindblad import POPULATIONS, Comparison, compare_full_vs_effective
from .semiclassical import (
    Route, chi1_eff, chi1_eff_resonant, chi1_full, steady_state, SteadyMode,
)

log = logging.getLogger(__name__)

THREADS_ENV = "EITSIM_THREADS"
ROUTE_ORDER = (Route.FULL, Route.EFFECTIVE, Route.RESONANT, Route.ODE_ORACLE)


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "")))
    except ValueError:
        return min(4, os.cpu_count() or 1)


@dataclass
class SpectrumTable:
    deltas: np.ndarray
    routes: tuple
    chi: dict          # route -> complex array, NaN where not evaluated
    errors: list       # per-row error message, "" if none

    def columns(self) -> list[str]:
        cols = ["delta_sig"]
        for r in self.routes:
            cols += [f"re_{r.value}", f"im_{r.value}"]
        return cols + ["error"]

    def rows(self):
        for i, d in enumerate(self.deltas):
            row = [d]
            for r in self.routes:
                c = self.chi[r][i]
                row += [None, None] if np.isnan(c.real) else [c.real, c.imag]
            yield row + [self.errors[i]]


def _analytic_chunk(config: SweepConfig, route: Route, deltas, strict: bool):
    params = config.params
    out = np.full(len(deltas), np.nan + 0j)
    errs = [""] * len(deltas)
    st = None
    if route is Route.FULL and config.steady_mode is SteadyMode.CORRECTED_OMEGA:
        st = steady_state(params, 0.0, config.steady_mode)
    for i, d in enumerate(deltas):
        try:
            if route is Route.FULL:
                out[i] = chi1_full(params, d, config.steady_mode, steady=st).chi
            elif route is Route.EFFECTIVE:
                out[i] = chi1_eff(params, d, config.numerator).chi
            else:
                out[i] = chi1_eff_resonant(params, d).chi
        except (ArithmeticError, ValueError) as exc:
            errs[i] = f"{route.value}: {exc}"
    return out, errs


def _oracle_chunk(config: SweepConfig, deltas):
    o = config.oracle
    results = oracle_chi(config.params, deltas, t_end=o.t_end, dt=o.dt,
                         window=o.window, sample_every=o.sample_every)
    return np.array([r.chi_numeric for r in results]), results


def run_spectrum(config: SweepConfig, threads: int | None = None, strict: bool = False) -> SpectrumTable:
    """Evaluate every selected route on the detuning grid.

    Grid points are split into chunks and run on a bounded thread pool; the
    table is assembled in grid order so the result is independent of
    ``threads``. The ODE route is evaluated on every ``oracle_stride``-th
    point only.
    """
    if not config.routes:
        raise ValueError("no routes selected")
    if Route.FULL in config.routes or Route.ODE_ORACLE in config.routes:
        config.params.check_weak_probe(strict)
    threads = threads or default_threads()
    deltas = config.grid()
    n = len(deltas)
    routes = tuple(r for r in ROUTE_ORDER if r in config.routes)
    chi = {r: np.full(n, np.nan + 0j) for r in routes}
    errors = [[] for _ in range(n)]

    chunk = max(1, -(-n // (4 * threads)))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        jobs = []
        for r in routes:
            if r is Route.ODE_ORACLE:
                idx = np.arange(0, n, config.oracle_stride)
                for k in range(0, len(idx), 8):
                    sel = idx[k:k + 8]
                    jobs.append((r, sel, pool.submit(_oracle_chunk, config, deltas[sel])))
            else:
                for k in range(0, n, chunk):
                    sel = np.arange(k, min(n, k + chunk))
                    jobs.append((r, sel, pool.submit(_analytic_chunk, config, r, deltas[sel], strict)))
        for r, sel, fut in jobs:
            try:
                values, extra = fut.result()
            except (ArithmeticError, ValueError, RuntimeError) as exc:
                for i in sel:
                    errors[i].append(f"{r.value}: {exc}")
                continue
            chi[r][sel] = values
            if r is not Route.ODE_ORACLE:
                for i, e in zip(sel, extra):
                    if e:
                        errors[i].append(e)
    return SpectrumTable(deltas, routes, chi, ["; ".join(e) for e in errors])


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v.replace(",", ";")
    return repr(float(v))


def _header(meta: dict) -> list[str]:
    return [f"# {k} = {'' if v is None else v}" for k, v in meta.items()]


def write_table(path, columns, rows, meta: dict, fmt: str = "csv", sidecar: dict | None = None) -> list[Path]:
    """Write a self-describing CSV (and/or JSON mirror) plus ``<path>.meta.json``.

    Data files contain no timestamps so repeated runs are byte-identical;
    run metadata goes to the sidecar.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = [list(r) for r in rows]
    written = []
    if fmt in ("csv", "both"):
        csv_path = path if path.suffix != ".json" else path.with_suffix(".csv")
        lines = _header(meta) + [",".join(columns)] + [",".join(_fmt(v) for v in r) for r in rows]
        csv_path.write_text("\n".join(lines) + "\n")
        written.append(csv_path)
    if fmt in ("json", "both"):
        json_path = path.with_suffix(".json")
        doc = {"meta": meta, "columns": columns,
               "rows": [[v if isinstance(v, str) or v is None else float(v) for v in r] for r in rows]}
        json_path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        written.append(json_path)
    side = {"meta": meta, "tool": "eitsim", "version": __version__,
            "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "files": [p.name for p in written]}
    side.update(sidecar or {})
    meta_path = path.with_name(path.name + ".meta.json")
    meta_path.write_text(json.dumps(side, indent=1, sort_keys=True) + "\n")
    return written


def write_spectrum(table: SpectrumTable, config: SweepConfig, path=None, fmt: str | None = None) -> list[Path]:
    path = path or config.output_path or "spectrum.csv"
    meta = config.describe()
    meta["energy_shift"] = config.params.energy_shift
    meta["effective_coupling"] = config.params.effective_coupling
    return write_table(path, table.columns(), table.rows(), meta, fmt or config.output_format,
                       sidecar={"grid": {"start": config.start, "stop": config.stop, "points": config.points}})


def run_dynamics(config: SweepConfig, strict: bool = False, threads: int | None = None) -> dict:
    """Paired pumped/effective population runs from |g,1>; returns ``{label: Comparison}``.

    ``dynamics.damped = both`` runs the undamped and damped cases concurrently.
    """
    d = config.dynamics
    cases = {"both": ("undamped", "damped"), "true": ("damped",), "false": ("undamped",)}[d.damped]

    def one(label):
        return compare_full_vs_effective(
            config.params, damped=(label == "damped"), t_end=d.t_end, dt=d.dt,
            n_cutoff=d.fock_cutoff, stride=d.stride, dephasing_rate=d.dephasing,
            check_truncation=d.check_truncation, strict=strict,
        )

    with ThreadPoolExecutor(max_workers=min(len(cases), threads or default_threads())) as pool:
        futures = {label: pool.submit(one, label) for label in cases}
        return {label: f.result() for label, f in futures.items()}


def dynamics_columns() -> list[str]:
    return ["t"] + [f"{p}_full" for p in POPULATIONS] + [f"{p}_eff" for p in POPULATIONS]


def write_dynamics(results: dict, config: SweepConfig, path=None, fmt: str | None = None) -> list[Path]:
    path = Path(path or config.output_path or "dynamics.csv")
    written = []
    for label, comp in results.items():
        out = path if len(results) == 1 else path.with_name(f"{path.stem}_{label}{path.suffix or '.csv'}")
        meta = config.describe()
        d = config.dynamics
        meta.update({"case": label, "t_end": d.t_end, "dt": d.dt, "stride": d.stride,
                     "fock_cutoff": d.fock_cutoff, "dephasing": d.dephasing})
        meta.update({f"max_dev_{k}": v for k, v in comp.max_deviation.items()})
        meta["truncation_change"] = comp.truncation_change
        meta["trace_drift_full"] = comp.full.trace_drift
        meta["trace_drift_eff"] = comp.effective.trace_drift
        rows = _dynamics_rows(comp)
        written += write_table(out, dynamics_columns(), rows, meta, fmt or config.output_format)
    return written


def _dynamics_rows(comp: Comparison):
    f, e = comp.full, comp.effective
    for i, t in enumerate(f.times):
        yield [t] + [f.populations[p][i] for p in POPULATIONS] + [e.populations[p][i] for p in POPULATIONS]
