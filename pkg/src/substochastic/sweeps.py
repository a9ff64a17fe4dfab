"""Experiment sweeps over truncation ladders, and decay-exponent fitting."""

from __future__ import annotations

import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .cycles import min_cycle_transversal, sup_cycle_gain
from .families import TruncationFamily, truncate
from .spectral import perron_root

CSV_VERSION = "substochastic-sweep-v1"
COLUMNS = (
    "n",
    "lambda_n",
    "omega_n",
    "one_minus_omega",
    "one_minus_lambda",
    "n_one_minus_lambda",
    "gap_to_limit",
    "fvs_size",
)


@dataclass(frozen=True)
class SweepSpec:
    family: str
    params: Mapping = field(default_factory=dict)
    n_grid: tuple[int, ...] = ()
    seed: int = 0
    mode: str = "float"
    out_format: str = "csv"
    fvs_budget: int = 20_000
    compute_fvs: bool = True

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ValueError("n_grid must be strictly increasing")


def _family(spec: SweepSpec) -> TruncationFamily:
    from .constructions import family_from_config
    from .families import family_to_float

    fam = family_from_config(spec.family, spec.params)
    return family_to_float(fam) if spec.mode == "float" else fam


def run_sweep(spec: SweepSpec, progress=None) -> list[dict]:
    """Per-n ladder rows; deterministic for a fixed spec, errors recorded inline."""
    fam = _family(spec)
    progress = progress if progress is not None else sys.stderr
    rows = []
    for n in spec.n_grid:
        row: dict = {"n": n}
        try:
            d = truncate(fam, n)
            lam = perron_root(d)
            window = fam.omega_window(n) if fam.omega_window is not None else n
            host = d if window <= n else truncate(fam, window)
            # every cycle of a truncation is a proper cycle of the infinite digraph
            omega = sup_cycle_gain(host, max_length=n, proper_only=False).value
            row["lambda_n"] = lam
            row["omega_n"] = omega
            row["one_minus_omega"] = 1 - omega
            row["one_minus_lambda"] = 1 - lam
            row["n_one_minus_lambda"] = n * (1 - lam)
            limit = fam.facts.spectral_limit
            row["gap_to_limit"] = (float(limit) - lam) if limit is not None else ""
            if spec.compute_fvs:
                row["fvs_size"] = min_cycle_transversal(d, budget=spec.fvs_budget).size
            else:
                row["fvs_size"] = ""
        except Exception as exc:  # keep sweeping, record the cell error
            row.setdefault("lambda_n", f"error:{exc}")
            for col in COLUMNS:
                row.setdefault(col, "")
        rows.append(row)
        print(f"sweep {spec.family}: n={n} done", file=progress)
    return rows


def _format_cell(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def sweep_csv(rows: Sequence[Mapping]) -> str:
    out = io.StringIO()
    out.write(f"# {CSV_VERSION} columns: {','.join(COLUMNS)}\n")
    out.write(",".join(COLUMNS) + "\n")
    for row in rows:
        out.write(",".join(_format_cell(row.get(c, "")) for c in COLUMNS) + "\n")
    return out.getvalue()


def sweep_json(rows: Sequence[Mapping]) -> str:
    return json.dumps({"version": CSV_VERSION, "columns": list(COLUMNS), "rows": list(rows)},
                      indent=2, default=str)


# ---------------------------------------------------------------------------
# Decay fitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    stderr: float
    ci_low: float
    ci_high: float
    points: int
    log_coefficient: float | None = None


def fit_decay(
    series: Sequence[tuple[float, float]],
    window: tuple[int, int] | None = None,
    log_correction: bool = False,
) -> DecayFit:
    """Least-squares slope of log(gap) against log(n).

    ``window`` selects an index range [lo, hi).  With ``log_correction`` the
    model gains a log(log n) term whose coefficient is reported, which
    separates gaps like (log n)/n from pure power laws.
    """
    pts = list(series)
    if window is not None:
        pts = pts[window[0]: window[1]]
    if len(pts) < 3:
        raise ValueError("need at least 3 points to fit")
    if any(g <= 0 for _, g in pts):
        raise ValueError("gaps must be positive in the fitted window")
    x = np.log([float(n) for n, _ in pts])
    y = np.log([float(g) for _, g in pts])
    cols = [x, np.ones_like(x)]
    if log_correction:
        if any(v <= 1 for v, _ in pts):
            raise ValueError("log correction needs n > 1 throughout")
        cols.insert(1, np.log(np.log([float(n) for n, _ in pts])))
    design = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    dof = max(1, len(pts) - design.shape[1])
    sigma2 = float(resid @ resid) / dof
    cov = sigma2 * np.linalg.inv(design.T @ design)
    se = math.sqrt(max(cov[0, 0], 0.0))
    slope = float(coef[0])
    return DecayFit(
        slope=slope,
        intercept=float(coef[-1]),
        stderr=se,
        ci_low=slope - 1.96 * se,
        ci_high=slope + 1.96 * se,
        points=len(pts),
        log_coefficient=float(coef[1]) if log_correction else None,
    )
