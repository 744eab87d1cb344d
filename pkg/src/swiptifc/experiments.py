"""Monte-Carlo experiment harness: presets, sweeps, CSV artifacts.

A run is described by an `ExperimentConfig`: channel dimensions, gain
profile, power budget, the transmitter-1 strategies to sweep, and the seed
list.  Per seed it draws one channel realization, traces the requested
tradeoff curves, and writes one CSV per curve plus one aggregate CSV of
per-grid-index means across seeds (curves are averaged at matched indices
of their own normalized energy grids, since the reachable energy range
varies per realization).  A JSON summary records the config, channel
digests, artifact list, and timing.

Exit codes: 0 full success, 1 hard error, 2 completed with gap-marked
sweep points.
"""

import dataclasses
import json
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .beamformers import STRATEGIES, eh_eh_optimal, iterative_waterfilling
from .boundary import re_sweep, time_sharing_curve
from .channel import channel_digest, draw_channel_set, swap_roles
from .exceptions import InvalidInputError
from .scheduling import MODES, scheduled_sweep

__all__ = [
    "CSV_COLUMNS",
    "ExperimentConfig",
    "PRESETS",
    "preset_variants",
    "apply_overrides",
    "emit_plot_data",
    "read_plot_data",
    "run_experiment",
]

CSV_COLUMNS = (
    "strategy",
    "seed",
    "e_bar",
    "rate_bits",
    "energy",
    "p1",
    "branch",
    "iterations",
    "lambda",
    "mu",
)

_AGG_COLUMNS = ("strategy", "grid_index", "e_norm", "n_seeds", "e_bar", "rate_bits", "energy")


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one experiment; serializable to flat JSON."""

    m_t: int
    m_r: int
    alpha: tuple
    p: float = 50.0
    strategies: tuple = ("meb", "mlb")
    e_grid_points: int = 64
    seeds: tuple = (1,)
    modes: tuple = ("eh1_id2",)
    time_sharing: bool = False
    scheduling: bool = False
    ts_points: int = 33
    output_dir: str | None = None
    figure_preset: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(tuple(float(a) for a in row) for row in self.alpha))
        object.__setattr__(self, "strategies", tuple(self.strategies))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "modes", tuple(self.modes))
        if self.m_t < 1 or self.m_r < 1:
            raise InvalidInputError("antenna counts must be positive")
        if len(self.alpha) != 2 or any(len(r) != 2 for r in self.alpha):
            raise InvalidInputError("alpha must be a 2x2 gain table")
        if any(a <= 0 or not np.isfinite(a) for r in self.alpha for a in r):
            raise InvalidInputError("alpha entries must be positive finite")
        if not np.isfinite(self.p) or self.p <= 0:
            raise InvalidInputError(f"power budget must be positive, got {self.p!r}")
        if self.e_grid_points < 2:
            raise InvalidInputError("e_grid_points must be >= 2")
        if not self.seeds:
            raise InvalidInputError("seed list must be nonempty")
        for s in self.strategies:
            if s not in STRATEGIES:
                raise InvalidInputError(f"unknown strategy {s!r}")
        for m in self.modes:
            if m not in MODES:
                raise InvalidInputError(f"unknown mode {m!r}")
        if self.ts_points < 2:
            raise InvalidInputError("ts_points must be >= 2")

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["alpha"] = [list(r) for r in self.alpha]
        d["strategies"] = list(self.strategies)
        d["seeds"] = list(self.seeds)
        d["modes"] = list(self.modes)
        return d

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(d) - known
        if extra:
            raise InvalidInputError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)


def _alpha(off_diag):
    return ((1.0, off_diag), (off_diag, 1.0))


def _preset(name, **kw):
    base = dict(m_t=4, m_r=4, alpha=_alpha(0.8), p=50.0, figure_preset=name)
    base.update(kw)
    return base


PRESETS = {
    # two rank-one strategies plus their time-sharing baselines
    "fig2": [("main", _preset("fig2", strategies=("meb", "mlb"), time_sharing=True))],
    # rank-one against the fixed rank-two split
    "fig3": [("main", _preset("fig3", strategies=("meb", "meb_rank2", "mlb")))],
    # low-power regime
    "fig4": [("main", _preset("fig4", p=0.1, strategies=("meb", "mlb")))],
    # large arrays
    "fig5": [("main", _preset("fig5", m_t=15, m_r=15, strategies=("meb", "mlb")))],
    # all four strategies, censused over 50 draws
    "fig6": [
        (
            "main",
            _preset(
                "fig6",
                strategies=("meb", "mlb", "slnr", "sler"),
                seeds=tuple(range(1, 51)),
            ),
        )
    ],
    # asymmetric arrays
    "fig7": [
        ("main", _preset("fig7", m_t=3, m_r=4, strategies=("meb", "mlb", "slnr", "sler")))
    ],
    # scheduling on/off at two interference levels
    "fig8": [
        (
            "alpha07",
            _preset(
                "fig8",
                m_t=2,
                m_r=2,
                alpha=_alpha(0.7),
                strategies=("sler",),
                scheduling=True,
                seeds=tuple(range(1, 101)),
            ),
        ),
        (
            "alpha10",
            _preset(
                "fig8",
                m_t=2,
                m_r=2,
                alpha=_alpha(1.0),
                strategies=("sler",),
                scheduling=True,
                seeds=tuple(range(1, 101)),
            ),
        ),
    ],
    # single-mode operating points at two array sizes, paired seeds
    "table1": [
        (
            "m2",
            _preset(
                "table1",
                m_t=2,
                m_r=2,
                strategies=(),
                modes=("id_id", "eh_eh"),
                seeds=tuple(range(1, 201)),
            ),
        ),
        (
            "m4",
            _preset(
                "table1",
                strategies=(),
                modes=("id_id", "eh_eh"),
                seeds=tuple(range(1, 201)),
            ),
        ),
    ],
}


def preset_variants(name):
    """(label, config dict) pairs of a preset; dicts are deep copies."""
    if name not in PRESETS:
        raise InvalidInputError(
            f"unknown preset {name!r}; available: {sorted(PRESETS)}"
        )
    return [(label, json.loads(json.dumps(d))) for label, d in PRESETS[name]]


def apply_overrides(cfg_dict, overrides):
    """Apply `key=value` strings onto a config dict; values parse as JSON
    first, bare strings second."""
    out = dict(cfg_dict)
    for item in overrides:
        if "=" not in item:
            raise InvalidInputError(f"override {item!r} is not of the form key=value")
        key, _, raw = item.partition("=")
        key = key.strip()
        try:
            val = json.loads(raw)
        except json.JSONDecodeError:
            val = raw
        out[key] = val
    return out


# ---------------------------------------------------------------------------
# CSV plumbing


def _write_rows(path, label, seed, points):
    try:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(CSV_COLUMNS) + "\n")
            for pt in sorted(points, key=lambda q: q.e_bar):
                fh.write(
                    ",".join(
                        (
                            str(label),
                            "" if seed is None else str(int(seed)),
                            _fmt(pt.e_bar),
                            _fmt(pt.rate_bits),
                            _fmt(pt.energy),
                            _fmt(pt.p1),
                            pt.branch,
                            str(int(pt.iterations)),
                            _fmt(pt.lam),
                            _fmt(pt.mu),
                        )
                    )
                    + "\n"
                )
    except OSError as exc:
        raise InvalidInputError(f"cannot write curve file {path}: {exc}") from exc
    return Path(path)


def emit_plot_data(boundary, path, label=None, seed=None):
    """Write one tradeoff curve as CSV with the fixed column schema.

    Floats carry 12 significant digits; rows are sorted by energy target;
    multiplier columns stay empty where no dual pair was resolved.
    """
    label = boundary.strategy if label is None else label
    seed = boundary.seed if seed is None else seed
    return _write_rows(path, label, seed, boundary.points)


def read_plot_data(path):
    """Parse an emitted curve CSV back into a list of row dicts."""
    rows = []
    with open(path, "r", newline="") as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != CSV_COLUMNS:
            raise InvalidInputError(f"unexpected CSV header in {path}: {header}")
        for line in fh:
            parts = line.rstrip("\n").split(",")
            row = dict(zip(CSV_COLUMNS, parts))
            for key in ("e_bar", "rate_bits", "energy", "p1", "lambda", "mu"):
                row[key] = float(row[key]) if row[key] != "" else None
            row["seed"] = int(row["seed"]) if row["seed"] != "" else None
            row["iterations"] = int(row["iterations"])
            rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# per-seed work unit (top level so a process pool can ship it)


def _curve_slots(boundary, n_grid):
    """Grid-aligned point list with None at gap indices."""
    gap_idx = {g[0] for g in boundary.gaps}
    slots = [None] * n_grid
    it = iter(boundary.points)
    for k in range(n_grid):
        if k in gap_idx:
            continue
        try:
            slots[k] = next(it)
        except StopIteration:
            break
    return slots


def _seed_task(cfg_dict, seed):
    cfg = ExperimentConfig.from_dict(cfg_dict)
    t0 = time.perf_counter()
    cs = draw_channel_set(cfg.m_t, cfg.m_r, np.asarray(cfg.alpha), seed)
    curves = {}
    gaps = {}
    for strategy in cfg.strategies:
        b = re_sweep(cs, strategy, cfg.p, n_points=cfg.e_grid_points)
        curves[strategy] = _curve_slots(b, cfg.e_grid_points)
        if b.gaps:
            gaps[strategy] = [(k, e, msg) for k, e, msg in b.gaps]
        if cfg.time_sharing and strategy in ("meb", "mlb"):
            ts = time_sharing_curve(
                cs, strategy, cfg.p, weights=np.linspace(0.0, 1.0, cfg.ts_points)
            )
            curves[f"{strategy}_ts"] = list(ts.points)
    if cfg.scheduling:
        swapped = re_sweep(swap_roles(cs), "sler", cfg.p, n_points=cfg.e_grid_points)
        curves["sler_swap"] = _curve_slots(swapped, cfg.e_grid_points)
        if swapped.gaps:
            gaps["sler_swap"] = [(k, e, msg) for k, e, msg in swapped.gaps]
        sched, _tags = scheduled_sweep(cs, cfg.p, n_points=cfg.e_grid_points)
        curves["sler_sched"] = list(sched.points)
    mode_rows = []
    if "id_id" in cfg.modes:
        iwf = iterative_waterfilling(cs, cfg.p)
        mode_rows.append(("id_id", float(sum(iwf.rates)), 0.0))
    if "eh_eh" in cfg.modes:
        _, _, e_total = eh_eh_optimal(cs, cfg.p)
        mode_rows.append(("eh_eh", 0.0, float(e_total)))
    return {
        "seed": seed,
        "digest": channel_digest(cs),
        "curves": curves,
        "gaps": gaps,
        "modes": mode_rows,
        "elapsed": time.perf_counter() - t0,
    }


def _write_aggregate(path, labels, by_seed):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(_AGG_COLUMNS) + "\n")
        for label in labels:
            slot_lists = [by_seed[s]["curves"][label] for s in sorted(by_seed)
                          if label in by_seed[s]["curves"]]
            if not slot_lists:
                continue
            n = max(len(sl) for sl in slot_lists)
            for k in range(n):
                pts = [sl[k] for sl in slot_lists if k < len(sl) and sl[k] is not None]
                if not pts:
                    continue
                e_norm = k / (n - 1) if n > 1 else 0.0
                fh.write(
                    ",".join(
                        (
                            label,
                            str(k),
                            _fmt(e_norm),
                            str(len(pts)),
                            _fmt(float(np.mean([p.e_bar for p in pts]))),
                            _fmt(float(np.mean([p.rate_bits for p in pts]))),
                            _fmt(float(np.mean([p.energy for p in pts]))),
                        )
                    )
                    + "\n"
                )
    return path


def run_experiment(cfg, workers=1):
    """Run one experiment config end to end; returns the artifact manifest.

    Fans seeds out to a process pool when `workers` > 1 (results are
    collected in seed order either way, so the artifacts are identical).
    """
    if isinstance(cfg, dict):
        cfg = ExperimentConfig.from_dict(cfg)
    if cfg.output_dir is None:
        raise InvalidInputError("config has no output_dir")
    t0 = time.perf_counter()
    outdir = Path(cfg.output_dir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        probe = outdir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise InvalidInputError(f"output dir {outdir} is not writable: {exc}") from exc

    cfg_dict = cfg.to_dict()
    seeds = list(cfg.seeds)
    if workers > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_seed_task, [cfg_dict] * len(seeds), seeds))
    else:
        results = [_seed_task(cfg_dict, s) for s in seeds]
    by_seed = {r["seed"]: r for r in results}

    artifacts = []
    labels = []
    for r in results:
        for label in r["curves"]:
            if label not in labels:
                labels.append(label)
    for label in labels:
        for seed in seeds:
            r = by_seed[seed]
            if label not in r["curves"]:
                continue
            pts = [p for p in r["curves"][label] if p is not None]
            path = _write_rows(outdir / f"curve_{label}_seed{seed}.csv", label, seed, pts)
            artifacts.append(str(path))
    if labels:
        artifacts.append(str(_write_aggregate(outdir / "aggregate.csv", labels, by_seed)))

    if any(r["modes"] for r in results):
        path = outdir / "modes.csv"
        with open(path, "w", newline="") as fh:
            fh.write("mode,seed,m_t,m_r,rate_bits,energy\n")
            for seed in seeds:
                for tag, rate, energy in by_seed[seed]["modes"]:
                    fh.write(
                        f"{tag},{seed},{cfg.m_t},{cfg.m_r},{_fmt(rate)},{_fmt(energy)}\n"
                    )
        artifacts.append(str(path))

    gap_total = sum(len(g) for r in results for g in r["gaps"].values())
    manifest = {
        "config": cfg_dict,
        "version": __version__,
        "channels": {str(r["seed"]): r["digest"] for r in results},
        "artifacts": sorted(artifacts),
        "gaps": {
            str(r["seed"]): r["gaps"] for r in results if r["gaps"]
        },
        "seconds_per_seed": {str(r["seed"]): round(r["elapsed"], 3) for r in results},
        "seconds_total": round(time.perf_counter() - t0, 3),
        "exit_code": 2 if gap_total else 0,
    }
    with open(outdir / "summary.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
