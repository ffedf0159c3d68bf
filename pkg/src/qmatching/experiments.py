"""Graph generation, batch runs and power-law fits over run metrics."""

from __future__ import annotations

import csv
import io
import json
import math
import random
import statistics
from collections import defaultdict
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .graph import Graph, validate_matching
from .guessing import ALL_CASES
from .matcher import maximum_matching
from .oracle import LIST, MATRIX, build_oracle
from .reference import MAX_BRUTE_N, brute_force_max_matching

FAMILIES = ("gnp", "gnm", "bipartite", "path", "cycle", "complete")
METRICS = ("I", "bound", "T", "phases")

CASE_COLUMNS = tuple("I_" + c.replace("-", "_") for c in ALL_CASES)
COLUMNS = (
    "model", "family", "n", "m", "seed", "match_size", "brute_size", "phases", "T", "I", "bound",
) + CASE_COLUMNS


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def generate_graph(family: str, params: dict, seed: int) -> Graph:
    """Deterministic instance of ``family`` for ``params`` and ``seed``.

    ``params`` always carries ``n``; ``gnp`` and ``bipartite`` need ``p``,
    ``gnm`` needs ``m``.  Vertex labels of the fixed families are shuffled
    by the seed so that label order carries no structure.
    """
    try:
        n = int(params["n"])
    except (KeyError, TypeError, ValueError):
        raise ValueError(f"params for {family!r} need an integer 'n', got {params!r}") from None
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    rng = random.Random(f"{family}:{n}:{seed}")
    if family in ("gnp", "bipartite"):
        p = float(params.get("p", -1))
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{family} needs 0 <= p <= 1, got {params.get('p')!r}")
        if family == "gnp":
            pool = _pairs(n)
        else:
            half = n // 2
            pool = [(u, v) for u in range(half) for v in range(half, n)]
        return Graph.from_edges(n, [e for e in pool if rng.random() < p])
    if family == "gnm":
        m = int(params.get("m", -1))
        pool = _pairs(n)
        if not 0 <= m <= len(pool):
            raise ValueError(f"gnm on n={n} needs 0 <= m <= {len(pool)}, got {params.get('m')!r}")
        return Graph.from_edges(n, rng.sample(pool, m))
    if family in ("path", "cycle", "complete"):
        if family == "complete":
            return Graph.from_edges(n, _pairs(n))
        label = list(range(n))
        rng.shuffle(label)
        edges = [(label[i], label[i + 1]) for i in range(n - 1)]
        if family == "cycle":
            if n < 3:
                raise ValueError(f"a cycle needs at least 3 vertices, got {n}")
            edges.append((label[-1], label[0]))
        return Graph.from_edges(n, edges)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


@dataclass
class ExperimentConfig:
    """A sweep: every (size, param set, seed) point for each model.

    ``params`` is a list of extra parameter dicts (for example ``{"p": 0.5}``)
    crossed with ``sizes``.  ``brute`` requests the exhaustive reference
    answer wherever it is under the size guard.
    """

    models: list[str] = field(default_factory=lambda: [MATRIX])
    family: str = "gnp"
    sizes: list[int] = field(default_factory=lambda: [8])
    params: list[dict] = field(default_factory=lambda: [{}])
    seeds: list[int] = field(default_factory=lambda: [0])
    brute: bool = True
    workers: int = 1
    csv_path: str | None = None
    json_path: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        for m in self.models:
            if m not in (MATRIX, LIST):
                raise ValueError(f"unknown model {m!r}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        d = dict(d)
        if isinstance(d.get("seeds"), int):
            d["seeds"] = list(range(d["seeds"]))
        if isinstance(d.get("models"), str):
            d["models"] = [d["models"]]
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise OSError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValueError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def points(self) -> list[tuple[str, dict, int]]:
        """(model, params, seed) in output order."""
        out = []
        for model in self.models:
            for n in sorted(self.sizes):
                for extra in self.params:
                    for seed in sorted(self.seeds):
                        out.append((model, {"n": n, **extra}, seed))
        return out


def run_one(model: str, family: str, params: dict, seed: int, brute: bool = True) -> dict:
    g = generate_graph(family, params, seed)
    res = maximum_matching(build_oracle(g, model, ordering_seed=seed))
    if not validate_matching(g, res.matching):
        raise RuntimeError(f"{family} {params} seed {seed}: result is not a matching of the instance")
    rep = res.report
    row = {
        "model": model,
        "family": family,
        "n": g.n,
        "m": g.m,
        "seed": seed,
        "match_size": res.size,
        "brute_size": "",
        "phases": res.phase_count,
        "T": rep.T,
        "I": rep.I,
        "bound": round(rep.bound, 6),
    }
    if brute and g.n <= MAX_BRUTE_N:
        row["brute_size"] = brute_force_max_matching(g).size
    for case, col in zip(ALL_CASES, CASE_COLUMNS):
        row[col] = rep.cases[case]
    return row


def _run_point(args) -> dict:
    return run_one(*args)


def run_experiment(cfg: ExperimentConfig) -> list[dict]:
    """One row per (model, instance, seed), in config order whatever the worker count."""
    jobs = [(model, cfg.family, params, seed, cfg.brute) for model, params, seed in cfg.points()]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_run_point, jobs, chunksize=4))
    else:
        rows = [_run_point(j) for j in jobs]
    if cfg.csv_path:
        write_csv(rows, cfg.csv_path)
    if cfg.json_path:
        _write(cfg.json_path, json.dumps({"config": asdict(cfg), "rows": rows}, indent=1, sort_keys=True) + "\n")
    return rows


def rows_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _write(path: str | Path, text: str) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def write_csv(rows: Iterable[dict], path: str | Path) -> None:
    _write(path, rows_to_csv(rows))


def read_csv(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@dataclass(frozen=True)
class ScalingFit:
    """``metric ~ constant * n ** exponent`` through per-n medians."""

    metric: str
    exponent: float
    constant: float
    residual: float
    sizes: tuple[int, ...]
    medians: tuple[float, ...]

    def predict(self, n: float) -> float:
        return self.constant * n**self.exponent


def medians_by_n(rows: Iterable[dict], metric: str) -> dict[int, float]:
    groups: dict[int, list[float]] = defaultdict(list)
    for r in rows:
        groups[int(r["n"])].append(float(r[metric]))
    return {n: statistics.median(v) for n, v in sorted(groups.items())}


def fit_scaling(rows: Sequence[dict], metric: str) -> ScalingFit | None:
    """Least-squares power law on log-log medians; None when a median is zero."""
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    med = medians_by_n(rows, metric)
    if len(med) < 4:
        raise ValueError(f"need at least 4 distinct n values, got {len(med)}")
    if any(v <= 0 for v in med.values()):
        return None
    x = np.log(np.array(list(med), dtype=float))
    y = np.log(np.array(list(med.values()), dtype=float))
    slope, icept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + icept)) ** 2)))
    if not math.isfinite(slope):
        return None
    return ScalingFit(metric, float(slope), float(math.exp(icept)), resid, tuple(med), tuple(med.values()))
