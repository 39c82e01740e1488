"""Desk-scale reproductions of the reference experiments.

Each experiment produces plot-ready CSV tables plus a JSON metadata
sidecar recording the full configuration, the seed scheme and the
runtime.  Ensemble members are seeded ``base + 1_000_003 * process_index
+ realization_index``, so runs are reproducible and parallelizable; with
``jobs > 1`` members are computed in a process pool and assembled in
index order, making the output independent of completion order.

Experiments
-----------
fig1    ensemble <Z_fac,alpha / L> versus L for the seven factorial-
        class processes, orders 3..7, alpha in {0.5, 1, 1.5}.
fig2    ensemble <g(6, T)> versus T up to 7000 for the same processes.
fig3    ensemble <g(6, T)> versus T up to 50 for the noisy-periodic
        processes of periods 2..6, plus their visible-support counts.
fig4    ensemble <Z_sub,alpha / L> versus L for the noisy-periodic
        order subsequences (p, mu) in {2,3} x residues, 2 <= L <= 14.
table1  missing-pattern decay exponents for the fig2 processes at
        L = 4, 5, 6.
table2  exact allowed-pattern counts of the noisy-periodic family for
        periods 2..6 and widths up to 14, checked cell by cell against
        the reference values embedded below.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import fit_decay, stabilized_census, xp_allowed_count, xp_class_constant
from .entropy import ComplexityClass, z_entropy
from .errors import DataError, ValidationError
from .ordinal import visible_curve
from .processes import ProcessSpec, generate, with_seed

__all__ = ["EXPERIMENTS", "ExperimentConfig", "ExperimentResult", "run_experiment",
           "FACTORIAL_PROCESSES", "TABLE2_REFERENCE"]

EXPERIMENTS = ("fig1", "fig2", "fig3", "fig4", "table1", "table2")

FACTORIAL_PROCESSES: tuple[tuple[str, ProcessSpec], ...] = (
    ("white-noise", ProcessSpec("white-noise", length=1)),
    ("fgn-0.20", ProcessSpec("fgn", length=1, hurst=0.20)),
    ("fbm-0.20", ProcessSpec("fbm", length=1, hurst=0.20)),
    ("fbm-0.40", ProcessSpec("fbm", length=1, hurst=0.40)),
    ("fbm-0.60", ProcessSpec("fbm", length=1, hurst=0.60)),
    ("noisy-logistic", ProcessSpec("noisy-logistic", length=1)),
    ("noisy-schuster", ProcessSpec("noisy-schuster", length=1)),
)

# Reference allowed-pattern counts for periods 2..6, widths p..14.
TABLE2_REFERENCE: dict[int, dict[int, int]] = {
    2: {2: 2, 3: 3, 4: 4, 5: 8, 6: 12, 7: 30, 8: 48, 9: 144, 10: 240,
        11: 840, 12: 1440, 13: 5760, 14: 10080},
    3: {3: 3, 4: 5, 5: 8, 6: 12, 7: 28, 8: 60, 9: 108, 10: 324,
        11: 864, 12: 1728, 13: 6336, 14: 20160},
    4: {4: 4, 5: 7, 6: 12, 7: 20, 8: 32, 9: 80, 10: 192, 11: 432,
        12: 864, 13: 2808, 14: 8640},
    5: {5: 5, 6: 9, 7: 16, 8: 28, 9: 48, 10: 80, 11: 208, 12: 528,
        13: 1296, 14: 3024},
    6: {6: 6, 7: 11, 8: 20, 9: 36, 10: 64, 11: 112, 12: 192, 13: 512,
        14: 1344},
}

_FIG4_SUBSEQUENCES = ((2, 0), (2, 1), (3, 0), (3, 1), (3, 2))
_PROC_SEED_STRIDE = 1_000_003


@dataclass(frozen=True)
class ExperimentConfig:
    """Knobs shared by all experiments; ``t_max=None`` picks each
    experiment's default series length."""

    realizations: int = 35
    seed: int = 2024
    t_max: int | None = None
    alphas: tuple[float, ...] = (0.5, 1.0, 1.5)
    orders: tuple[int, ...] = (3, 4, 5, 6, 7)
    jobs: int = 1

    def __post_init__(self):
        if self.realizations < 1:
            raise ValidationError("realizations must be at least 1")
        if self.jobs < 1:
            raise ValidationError("jobs must be at least 1")
        if any(a <= 0 for a in self.alphas):
            raise ValidationError("alphas must be positive (0 is topological)")


@dataclass
class ExperimentResult:
    name: str
    tables: dict[str, tuple[list[str], list[list]]]
    summary: dict
    metadata: dict
    files: list[str] = field(default_factory=list)


def member_seed(base: int, process_index: int, realization: int) -> int:
    return (int(base) + _PROC_SEED_STRIDE * process_index + realization) & (
        0xFFFFFFFFFFFFFFFF
    )


def _pmap(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=1))


def _member_series(spec: ProcessSpec, length: int, seed: int) -> np.ndarray:
    from dataclasses import replace

    return generate(replace(spec, length=length, seed=seed))


# -- fig1 -------------------------------------------------------------------

def _fig1_member(args):
    spec, length, seed, orders, alphas = args
    fac = ComplexityClass.factorial()
    x = _member_series(spec, length, seed)
    out = {}
    for L in orders:
        dist = stabilized_census(x, L)
        for alpha in alphas:
            out[(L, alpha)] = z_entropy(dist, fac, alpha) / L
    return out


def _experiment_fig1(config: ExperimentConfig):
    length = config.t_max or 50_000
    curves: dict[tuple[str, int, float], tuple[float, float]] = {}
    for j, (name, spec) in enumerate(FACTORIAL_PROCESSES):
        args = [
            (spec, length, member_seed(config.seed, j, i), config.orders,
             config.alphas)
            for i in range(config.realizations)
        ]
        try:
            members = _pmap(_fig1_member, args, config.jobs)
        except Exception as exc:
            raise DataError(f"process {name!r} failed: {exc}") from exc
        for L in config.orders:
            for alpha in config.alphas:
                vals = np.array([m[(L, alpha)] for m in members])
                curves[(name, L, alpha)] = (float(vals.mean()), float(vals.std()))

    tables = {}
    for alpha in config.alphas:
        header = ["L"]
        for name, _ in FACTORIAL_PROCESSES:
            header += [name, f"{name}_sd"]
        rows = []
        for L in config.orders:
            row: list = [L]
            for name, _ in FACTORIAL_PROCESSES:
                mean, sd = curves[(name, L, alpha)]
                row += [f"{mean:.6f}", f"{sd:.6f}"]
            rows.append(row)
        tables[f"fig1_alpha{alpha:g}"] = (header, rows)
    summary = {
        "curves": {f"{n}|L{L}|a{a:g}": v[0] for (n, L, a), v in curves.items()}
    }
    return tables, summary


# -- fig2 / fig3 (finite-length complexity function) ------------------------

def _gcurve_member(args):
    spec, length, seed, L = args
    x = _member_series(spec, length, seed)
    return np.log(visible_curve(x, L))


def _mean_g_curves(process_list, config, length, L):
    curves = {}
    for j, (name, spec) in enumerate(process_list):
        args = [
            (spec, length, member_seed(config.seed, j, i), L)
            for i in range(config.realizations)
        ]
        try:
            members = _pmap(_gcurve_member, args, config.jobs)
        except Exception as exc:
            raise DataError(f"process {name!r} failed: {exc}") from exc
        curves[name] = np.mean(np.vstack(members), axis=0)
    return curves


def _experiment_fig2(config: ExperimentConfig):
    length = config.t_max or 7_000
    L = 6
    curves = _mean_g_curves(FACTORIAL_PROCESSES, config, length, L)
    ts = np.arange(L, length + 1)
    emit = (ts % 50 == 0) | (ts == L)
    header = ["T"] + [name for name, _ in FACTORIAL_PROCESSES]
    rows = [
        [int(t)] + [f"{curves[name][k]:.6f}" for name, _ in FACTORIAL_PROCESSES]
        for k, t in enumerate(ts)
        if emit[k]
    ]
    summary = {
        "final_g": {name: float(curve[-1]) for name, curve in curves.items()},
        "target": math.log(math.factorial(L)),
    }
    return {"fig2_g6": (header, rows)}, summary


def _xp_union_member(args):
    spec, length, seed, L = args
    from .ordinal import window_codes

    x = _member_series(spec, length, seed)
    return set(np.unique(window_codes(x, L)).tolist())


def _experiment_fig3(config: ExperimentConfig):
    length = config.t_max or 50
    L = 6
    if length < L:
        raise ValidationError("fig3 needs t_max >= 6")
    periods = (2, 3, 4, 5, 6)
    process_list = [
        (f"xp-p{p}", ProcessSpec("xp", length=1, period=p)) for p in periods
    ]
    curves = _mean_g_curves(process_list, config, length, L)
    supports = {}
    for j, (name, spec) in enumerate(process_list):
        args = [
            (spec, length, member_seed(config.seed, j, i), L)
            for i in range(config.realizations)
        ]
        seen: set[int] = set()
        for member in _pmap(_xp_union_member, args, config.jobs):
            seen |= member
        supports[name] = len(seen)
    ts = np.arange(L, length + 1)
    header = ["T"] + [name for name, _ in process_list]
    rows = [
        [int(t)] + [f"{curves[name][k]:.6f}" for name, _ in process_list]
        for k, t in enumerate(ts)
    ]
    support_rows = [
        [p, supports[f"xp-p{p}"], xp_allowed_count(p, L)] for p in periods
    ]
    summary = {
        "final_g": {name: float(curves[name][-1]) for name, _ in process_list},
        "union_support": {name: supports[name] for name, _ in process_list},
        "analytic_allowed": {f"xp-p{p}": xp_allowed_count(p, L) for p in periods},
    }
    return {
        "fig3_g6": (header, rows),
        "fig3_support": (["period", "visible_union", "allowed_analytic"],
                         support_rows),
    }, summary


# -- fig4 -------------------------------------------------------------------

def _fig4_member(args):
    spec, length, seed, orders, alphas, c = args
    sub = ComplexityClass.sub_factorial(c)
    x = _member_series(spec, length, seed)
    out = {}
    for L in orders:
        dist = stabilized_census(x, L)
        for alpha in alphas:
            out[(L, alpha)] = z_entropy(dist, sub, alpha) / L
    return out


def _experiment_fig4(config: ExperimentConfig):
    length = config.t_max or 50_000
    curves: dict[tuple[str, int, float], tuple[float, float]] = {}
    labels = []
    orders_by_label = {}
    for j, (p, mu) in enumerate(_FIG4_SUBSEQUENCES):
        label = f"xp-{p}-{mu}"
        labels.append(label)
        orders = tuple(
            L for L in range(2, 15) if L % p == mu and L >= p
        )
        orders_by_label[label] = orders
        c = xp_class_constant(p, mu)
        spec = ProcessSpec("xp", length=1, period=p)
        args = [
            (spec, length, member_seed(config.seed, j, i), orders,
             config.alphas, c)
            for i in range(config.realizations)
        ]
        try:
            members = _pmap(_fig4_member, args, config.jobs)
        except Exception as exc:
            raise DataError(f"process {label!r} failed: {exc}") from exc
        for L in orders:
            for alpha in config.alphas:
                vals = np.array([m[(L, alpha)] for m in members])
                curves[(label, L, alpha)] = (float(vals.mean()), float(vals.std()))

    tables = {}
    all_orders = sorted({L for orders in orders_by_label.values() for L in orders})
    for alpha in config.alphas:
        header = ["L"]
        for label in labels:
            header += [label, f"{label}_sd"]
        rows = []
        for L in all_orders:
            row: list = [L]
            for label in labels:
                if (label, L, alpha) in curves:
                    mean, sd = curves[(label, L, alpha)]
                    row += [f"{mean:.6f}", f"{sd:.6f}"]
                else:
                    row += ["", ""]
            rows.append(row)
        tables[f"fig4_alpha{alpha:g}"] = (header, rows)
    summary = {
        "curves": {f"{n}|L{L}|a{a:g}": v[0] for (n, L, a), v in curves.items()},
        "orders": {k: list(v) for k, v in orders_by_label.items()},
    }
    return tables, summary


# -- table1 -----------------------------------------------------------------

def _missing_curve_member(args):
    spec, length, seed, L = args
    x = _member_series(spec, length, seed)
    return math.factorial(L) - visible_curve(x, L)


def _experiment_table1(config: ExperimentConfig):
    length = config.t_max or 7_000
    orders = (4, 5, 6)
    fits: dict[tuple[str, int], object] = {}
    for j, (name, spec) in enumerate(FACTORIAL_PROCESSES):
        for L in orders:
            args = [
                (spec, length, member_seed(config.seed, j, i), L)
                for i in range(config.realizations)
            ]
            try:
                members = _pmap(_missing_curve_member, args, config.jobs)
            except Exception as exc:
                raise DataError(f"process {name!r} failed: {exc}") from exc
            mean_m = np.mean(np.vstack(members), axis=0)
            ts = np.arange(L, length + 1)
            fits[(name, L)] = fit_decay(list(zip(ts, mean_m)), L)
    header = ["process"] + [f"R_L{L}" for L in orders] + [
        f"residual_L{L}" for L in orders
    ]
    rows = []
    for name, _ in FACTORIAL_PROCESSES:
        row: list = [name]
        row += [f"{fits[(name, L)].R:.6e}" for L in orders]
        row += [f"{fits[(name, L)].residual:.4f}" for L in orders]
        rows.append(row)
    summary = {
        "R": {f"{name}|L{L}": fits[(name, L)].R for name, _ in FACTORIAL_PROCESSES
              for L in orders}
    }
    return {"table1_decay": (header, rows)}, summary


# -- table2 -----------------------------------------------------------------

def _experiment_table2(config: ExperimentConfig):
    header = ["period"] + [str(L) for L in range(2, 15)]
    rows = []
    mismatches = []
    cells = 0
    for p in sorted(TABLE2_REFERENCE):
        row: list = [p]
        for L in range(2, 15):
            if L < p:
                row.append("")
                continue
            value = xp_allowed_count(p, L)
            cells += 1
            ref = TABLE2_REFERENCE[p].get(L)
            if ref is not None and ref != value:
                mismatches.append((p, L, value, ref))
            row.append(value)
        rows.append(row)
    summary = {
        "cells": cells,
        "mismatches": mismatches,
        "all_match": not mismatches,
    }
    return {"table2_allowed": (header, rows)}, summary


_RUNNERS = {
    "fig1": _experiment_fig1,
    "fig2": _experiment_fig2,
    "fig3": _experiment_fig3,
    "fig4": _experiment_fig4,
    "table1": _experiment_table1,
    "table2": _experiment_table2,
}


def run_experiment(
    name: str, config: ExperimentConfig | None = None,
    output_dir: str | Path | None = None,
) -> ExperimentResult:
    """Run one named experiment; optionally write its CSV tables and a
    JSON metadata sidecar into ``output_dir``."""
    if name not in _RUNNERS:
        raise ValidationError(
            f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}"
        )
    config = config or ExperimentConfig()
    started = time.time()
    tables, summary = _RUNNERS[name](config)
    metadata = {
        "experiment": name,
        "version": __version__,
        "config": asdict(config),
        "seed_scheme": (
            f"member = seed + {_PROC_SEED_STRIDE} * process_index + realization"
        ),
        "runtime_seconds": round(time.time() - started, 3),
    }
    result = ExperimentResult(
        name=name, tables=tables, summary=summary, metadata=metadata
    )
    if output_dir is not None:
        outdir = Path(output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        import csv

        for stem, (header, rows) in tables.items():
            path = outdir / f"{stem}.csv"
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(header)
                writer.writerows(rows)
            result.files.append(str(path))
        meta_path = outdir / f"{name}_metadata.json"
        with open(meta_path, "w") as fh:
            json.dump(metadata, fh, indent=2, default=str)
        result.files.append(str(meta_path))
    return result
