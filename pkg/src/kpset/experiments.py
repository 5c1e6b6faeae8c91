"""Seeded Monte Carlo runs of the two union constructions.

Every trial draws its own recipe from the ``(seed, trial)`` Philox stream,
builds the ``2^{2m}``-point union, evaluates the dyadic-grid discrepancy and
compares ``grid_max + s/2^m`` with the theorem bound.  Records come back in
trial order whatever the worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import gf2poly as gf
from .bounds import theorem_bound
from .discrepancy import grid_discrepancy, per_lattice_contributions
from .lattice import build_union, draw_recipe, normalize_mode
from .rng import derive_trial_rng

N_SAMPLED_BOXES = 64


@dataclass
class ExperimentConfig:
    m: int
    s: int
    delta: float = 0.5
    mode: str = "theorem1"
    trials: int = 100
    seed: int = 0
    p: int | str = "auto"
    zero_shifts: bool = False

    def __post_init__(self):
        self.mode = normalize_mode(self.mode)
        gf.check_m(self.m)
        if self.s < 1:
            raise ValueError("s must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if isinstance(self.p, str):
            self.p = gf.smallest_irreducible(self.m) if self.p == "auto" else gf.from_hex(self.p)
        if gf.degree(self.p) != self.m or not gf.is_irreducible(self.p):
            raise ValueError(f"modulus {gf.to_hex(self.p)} is not irreducible of degree {self.m}")

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def probe_box(self) -> tuple[int, ...]:
        """Fixed box used for the statistical sanity checks."""
        return (min((1 << (self.m - 1)) + 1, 1 << self.m),) * self.s


@dataclass
class TrialRecord:
    trial: int
    recipe_digest: str
    grid_max: float
    upper_bound: float
    theorem_bound: float
    satisfied: bool
    max_abs_contribution: float
    probe_sum: float


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord]
    summary: dict = field(default_factory=dict)

    @property
    def flagged(self) -> bool:
        return bool(self.summary.get("flags"))

    @property
    def violated(self) -> bool:
        return self.summary.get("invariant_violations", 0) > 0


def run_trial(cfg: ExperimentConfig, trial: int) -> TrialRecord:
    stream = derive_trial_rng(cfg.seed, trial)
    recipe = draw_recipe(cfg.mode, cfg.m, cfg.s, cfg.p, cfg.seed, trial,
                         zero_shifts=cfg.zero_shifts, stream=stream)
    union = build_union(recipe)
    rep = grid_discrepancy(union)
    bound = theorem_bound(union.N, cfg.s, cfg.delta)
    # sampled bounds in 1..2^m (the empty box contributes nothing)
    boxes = stream.bits(cfg.m, N_SAMPLED_BOXES * cfg.s).reshape(N_SAMPLED_BOXES, cfg.s) + 1
    boxes = np.vstack([np.asarray(cfg.probe_box(), dtype=np.int64)[None, :], boxes])
    contrib = per_lattice_contributions(union, boxes)
    return TrialRecord(
        trial=trial,
        recipe_digest=recipe.digest(),
        grid_max=rep.grid_max,
        upper_bound=rep.upper_bound,
        theorem_bound=bound,
        satisfied=rep.upper_bound <= bound,
        max_abs_contribution=float(np.abs(contrib).max()),
        probe_sum=float(contrib[:, 0].sum()),
    )


def summarize(cfg: ExperimentConfig, records: list[TrialRecord]) -> dict:
    ratios = np.array([r.upper_bound / r.theorem_bound for r in records])
    probe = np.array([r.probe_sum for r in records])
    size = 1 << cfg.m
    flags = []

    # each lattice contribution has mean zero and variance <= s/2^m
    mean_contrib = float(probe.mean()) / size
    mean_tol = 4.0 * math.sqrt(cfg.s / size) / math.sqrt(len(records) * size)
    if abs(mean_contrib) > mean_tol:
        flags.append(f"probe mean {mean_contrib:.3g} exceeds {mean_tol:.3g}")
    var_sum = float(probe.var(ddof=1)) if len(records) > 1 else 0.0
    var_tol = cfg.s + 5.0 * var_sum * math.sqrt(2.0 / max(1, len(records) - 1))
    if var_sum > var_tol:
        flags.append(f"probe variance {var_sum:.3g} exceeds {var_tol:.3g}")

    success = sum(r.satisfied for r in records) / len(records)
    if success < cfg.delta:
        flags.append(f"success fraction {success:.3g} below delta {cfg.delta}")
    violations = sum(r.max_abs_contribution > 1.0 for r in records)
    q = np.quantile(ratios, [0.0, 0.1, 0.5, 0.9, 1.0])
    return {
        "m": cfg.m,
        "s": cfg.s,
        "mode": cfg.mode,
        "p": gf.to_hex(cfg.p),
        "delta": cfg.delta,
        "seed": cfg.seed,
        "trials": len(records),
        "N": 1 << (2 * cfg.m),
        "theorem_bound": records[0].theorem_bound,
        "success_fraction": success,
        "ratio_min": float(q[0]),
        "ratio_q10": float(q[1]),
        "ratio_median": float(q[2]),
        "ratio_q90": float(q[3]),
        "ratio_max": float(q[4]),
        "mean_grid_max": float(np.mean([r.grid_max for r in records])),
        "probe_box": list(cfg.probe_box()),
        "probe_mean_contribution": mean_contrib,
        "probe_sum_variance": var_sum,
        "invariant_violations": int(violations),
        "flags": flags,
    }


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda t: run_trial(cfg, t), range(cfg.trials)))
    else:
        records = [run_trial(cfg, t) for t in range(cfg.trials)]
    return ExperimentResult(cfg, records, summarize(cfg, records))


CSV_COLUMNS = [f.name for f in fields(TrialRecord)]


def _fmt(value):
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def records_to_csv(records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        row = asdict(rec)
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def summary_to_json(summary: dict) -> str:
    def conv(v):
        return float(format(v, ".17g")) if isinstance(v, float) else v
    return json.dumps({k: conv(v) for k, v in summary.items()}, indent=2, sort_keys=True) + "\n"
