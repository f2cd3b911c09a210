"""Monte Carlo experiment runner and result emission.

One *replicate* draws a correlated pair, picks seeds uniformly at random,
hides the planted alignment by privately relabeling the second graph's
nonseeds, runs one matcher, and scores nonseed accuracy against the planted
alignment. A full experiment sweeps a (correlation x seed-count x method)
grid; every replicate's randomness is a pure function of its grid
coordinates, so results do not depend on execution order or thread count
and identical configs reproduce byte-identical CSV output.
"""

from __future__ import annotations

import hashlib
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import FormatError, ParameterError
from .graphs import (
    PRNG_ALGORITHM,
    CorrelatedPairSpec,
    Seeding,
    accuracy,
    generate_correlated_pair,
    invert_permutation,
    permute_vertices,
)
from .matchers import MatchResult, SgmConfig, rgm_match, sgm_match

METHODS = ("sgm", "rgm", "faq")
_METHOD_IDS = {"sgm": 1, "rgm": 2, "faq": 3}

HASH_ALGORITHM = "blake2b-64"

CSV_COLUMNS = (
    "method",
    "n",
    "p",
    "rho",
    "s",
    "replicates",
    "mean_accuracy",
    "stderr",
    "mean_iterations",
    "wall_ms_total",
)

MATCH_CSV_COLUMNS = ("replicate", "vertex", "matched_to", "correct")


def hash64(*fields) -> int:
    """Stable 64-bit hash of a field tuple (ints/floats/strings)."""
    h = hashlib.blake2b(digest_size=8)
    for f in fields:
        h.update(repr(f).encode())
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid definition for one simulation sweep."""

    n: int
    p: float
    rho_grid: tuple[float, ...]
    seed_grid: tuple[int, ...]
    replicates: int
    methods: tuple[str, ...]
    master_seed: int
    sgm: SgmConfig = field(default_factory=SgmConfig)

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError("need at least two vertices")
        if not 0.0 < self.p < 1.0:
            raise ParameterError(f"p={self.p} must lie in (0, 1)")
        if not self.rho_grid:
            raise ParameterError("rho_grid is empty")
        for rho in self.rho_grid:
            if not 0.0 <= rho <= 1.0:
                raise ParameterError(f"rho={rho} outside [0, 1]")
        if not self.seed_grid:
            raise ParameterError("seed_grid is empty")
        for s in self.seed_grid:
            if not 0 <= s <= self.n - 1:
                raise ParameterError(f"seed count {s} outside [0, {self.n - 1}]")
        if self.replicates < 1:
            raise ParameterError("replicates must be positive")
        if not self.methods:
            raise ParameterError("methods is empty")
        for m in self.methods:
            if m not in METHODS:
                raise ParameterError(f"unknown method {m!r} (choose from {METHODS})")


@dataclass(frozen=True)
class CellResult:
    """Aggregated accuracy for one (method, rho, s) grid cell."""

    method: str
    n: int
    p: float
    rho: float
    s: int
    replicates: int
    mean_accuracy: float
    stderr: float
    mean_iterations: float
    wall_ms_total: int


@dataclass(frozen=True)
class MatchRecord:
    """Nonseed matches of one run, in original vertex ids.

    ``pairs[k] = (v, w)`` records that unseeded vertex ``v`` of the first
    graph was matched to vertex ``w`` of the second; a match is correct
    exactly when ``v == w`` (the planted alignment is the identity).
    """

    n: int
    pairs: np.ndarray

    @property
    def correct(self) -> np.ndarray:
        return self.pairs[:, 0] == self.pairs[:, 1]


@dataclass(frozen=True)
class ReplicateResult:
    accuracy: float
    iterations: int
    objective: float
    record: MatchRecord


@dataclass(frozen=True)
class MatchFrequencyMap:
    """How often vertex i was matched to vertex j across runs (seeds excluded)."""

    n: int
    counts: np.ndarray
    runs: int


def aggregate_match_frequency(match_records) -> MatchFrequencyMap:
    records = list(match_records)
    if not records:
        raise ParameterError("no match records to aggregate")
    n = records[0].n
    counts = np.zeros((n, n), dtype=np.int64)
    for rec in records:
        if rec.n != n:
            raise ParameterError("match records disagree on vertex count")
        counts[rec.pairs[:, 0], rec.pairs[:, 1]] += 1
    return MatchFrequencyMap(n, counts, len(records))


def _skip_cell(method: str, s: int) -> bool:
    # restricted matching needs a seed; the seedless method only makes
    # sense on s=0 rows
    return (method == "rgm" and s == 0) or (method == "faq" and s != 0)


def run_replicate(
    cfg: ExperimentConfig, rho: float, s: int, method: str, replicate_index: int
) -> ReplicateResult:
    """Run one grid-cell sample; fully determined by its coordinates."""
    if method not in METHODS:
        raise ParameterError(f"unknown method {method!r}")
    if method == "rgm" and s == 0:
        raise ParameterError("rgm cells with s=0 are skipped (needs a seed)")
    if method == "faq" and s != 0:
        raise ParameterError("faq runs only on s=0 cells")
    try:
        rho_index = cfg.rho_grid.index(rho)
    except ValueError:
        raise ParameterError(f"rho={rho} is not on the configured grid") from None

    n, m = cfg.n, cfg.n - s
    base = hash64(cfg.master_seed, rho_index, s, _METHOD_IDS[method], replicate_index)
    g1, g2 = generate_correlated_pair(
        CorrelatedPairSpec(n, cfg.p, rho, hash64(base, "pair"))
    )

    # seeds chosen uniformly at random, then canonicalized to the prefix
    pick_rng = np.random.Generator(np.random.Philox(key=hash64(base, "seed-pick")))
    if s:
        seed_vertices = np.sort(pick_rng.choice(n, size=s, replace=False))
    else:
        seed_vertices = np.empty(0, dtype=np.int64)
    nonseed_vertices = np.setdiff1d(np.arange(n), seed_vertices)

    to_prefix = np.empty(n, dtype=np.int64)  # original id -> canonical slot
    to_prefix[seed_vertices] = np.arange(s)
    to_prefix[nonseed_vertices] = s + np.arange(m)

    # hide the planted alignment on the second graph's nonseeds
    hide_rng = np.random.Generator(np.random.Philox(key=hash64(base, "relabel")))
    hidden = hide_rng.permutation(m).astype(np.int64)
    to_prefix_g2 = to_prefix.copy()
    to_prefix_g2[nonseed_vertices] = s + hidden

    g1c = permute_vertices(g1, to_prefix)
    g2c = permute_vertices(g2, to_prefix_g2)
    seeding = Seeding(s, m)

    result = _dispatch(method, g1c, g2c, seeding, cfg.sgm)
    psi = result.permutation

    # canonical slot s+i of the first graph holds original nonseed_vertices[i];
    # its true partner sits at canonical slot s+hidden[i] of the second graph
    acc = accuracy(invert_permutation(hidden)[psi])
    matched_originals = nonseed_vertices[invert_permutation(hidden)[psi]]
    pairs = np.column_stack([nonseed_vertices, matched_originals])
    return ReplicateResult(acc, result.iterations, result.objective, MatchRecord(n, pairs))


def _dispatch(method, g1, g2, seeding, sgm_cfg) -> MatchResult:
    if method == "rgm":
        return rgm_match(g1, g2, seeding)
    return sgm_match(g1, g2, seeding, sgm_cfg)


def run_experiment(
    cfg: ExperimentConfig,
    threads: int = 1,
    timing: bool = False,
    keep_records: bool = False,
):
    """Execute the full grid; returns the cell list (and records if asked).

    With ``timing=False`` (the default) ``wall_ms_total`` is reported as 0
    so output files are bit-reproducible across runs and thread counts;
    pass ``timing=True`` to record measured wall time per cell.
    """
    cells = [
        (method, rho, s)
        for method in cfg.methods
        for rho in cfg.rho_grid
        for s in cfg.seed_grid
        if not _skip_cell(method, s)
    ]
    shape = (len(cells), cfg.replicates)
    acc = np.zeros(shape)
    iters = np.zeros(shape)
    wall = np.zeros(shape)
    records: list[list[MatchRecord | None]] = [
        [None] * cfg.replicates for _ in range(len(cells))
    ]

    def one(task):
        ci, rep = task
        method, rho, s = cells[ci]
        t0 = time.perf_counter()
        rr = run_replicate(cfg, rho, s, method, rep)
        dt = time.perf_counter() - t0
        acc[ci, rep] = rr.accuracy
        iters[ci, rep] = rr.iterations
        wall[ci, rep] = dt
        if keep_records:
            records[ci][rep] = rr.record

    tasks = [(ci, rep) for ci in range(len(cells)) for rep in range(cfg.replicates)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(one, tasks))
    else:
        for task in tasks:
            one(task)

    out = []
    for ci, (method, rho, s) in enumerate(cells):
        a = acc[ci]
        stderr = float(a.std(ddof=1) / np.sqrt(len(a))) if len(a) > 1 else 0.0
        out.append(
            CellResult(
                method=method,
                n=cfg.n,
                p=cfg.p,
                rho=rho,
                s=s,
                replicates=cfg.replicates,
                mean_accuracy=float(a.mean()),
                stderr=stderr,
                mean_iterations=float(iters[ci].mean()),
                wall_ms_total=int(round(wall[ci].sum() * 1000)) if timing else 0,
            )
        )
    if keep_records:
        rec_map = {cells[ci]: records[ci] for ci in range(len(cells))}
        return out, rec_map
    return out


# ---------------------------------------------------------------------------
# emission


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def results_csv_text(results) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in results:
        lines.append(",".join(_fmt(getattr(r, col)) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def emit_results(results, path: str, fmt: str = "csv", config=None, skipped=None) -> None:
    """Write cell results as CSV, or JSON with full provenance metadata."""
    if fmt == "csv":
        text = results_csv_text(results)
    elif fmt == "json":
        import json

        payload = {
            "prng": PRNG_ALGORITHM,
            "seed_derivation": HASH_ALGORITHM,
            "results": [{col: getattr(r, col) for col in CSV_COLUMNS} for r in results],
        }
        if config is not None:
            payload["config"] = {
                "n": config.n,
                "p": config.p,
                "rho_grid": list(config.rho_grid),
                "seed_grid": list(config.seed_grid),
                "seed_grid_note": "explicit list as configured",
                "replicates": config.replicates,
                "methods": list(config.methods),
                "master_seed": config.master_seed,
                "max_iters": config.sgm.max_iters,
                "tol": config.sgm.tol,
            }
        if skipped:
            payload["skipped_cells"] = [
                {"method": m, "rho": rho, "s": s} for (m, rho, s) in skipped
            ]
        text = json.dumps(payload, indent=2) + "\n"
    else:
        raise ParameterError(f"unknown results format {fmt!r}")
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise FormatError(f"cannot write results to {path}: {exc}") from None


def match_records_csv_text(records: list[MatchRecord]) -> str:
    lines = [",".join(MATCH_CSV_COLUMNS)]
    for rep, rec in enumerate(records):
        for (v, w), ok in zip(rec.pairs, rec.correct):
            lines.append(f"{rep},{v},{w},{int(ok)}")
    return "\n".join(lines) + "\n"


def skipped_cells(cfg: ExperimentConfig):
    return [
        (method, rho, s)
        for method in cfg.methods
        for rho in cfg.rho_grid
        for s in cfg.seed_grid
        if _skip_cell(method, s)
    ]


# ---------------------------------------------------------------------------
# config files


_CONFIG_KEYS = {
    "n",
    "p",
    "rho_grid",
    "seed_grid",
    "replicates",
    "methods",
    "master_seed",
    "max_iters",
    "tol",
}


def parse_config_text(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse ``key=value`` lines into an :class:`ExperimentConfig`."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(f"{source}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise FormatError(f"{source}:{lineno}: unknown key {key!r}")
        if key in raw:
            raise FormatError(f"{source}:{lineno}: duplicate key {key!r}")
        raw[key] = value

    missing = {"n", "p", "rho_grid", "seed_grid", "replicates", "methods", "master_seed"} - set(raw)
    if missing:
        raise FormatError(f"{source}: missing required keys {sorted(missing)}")
    try:
        sgm = SgmConfig(
            max_iters=int(raw.get("max_iters", 20)),
            tol=float(raw.get("tol", 1e-6)),
        )
        return ExperimentConfig(
            n=int(raw["n"]),
            p=float(raw["p"]),
            rho_grid=tuple(float(x) for x in raw["rho_grid"].split(",")),
            seed_grid=tuple(int(x) for x in raw["seed_grid"].split(",")),
            replicates=int(raw["replicates"]),
            methods=tuple(m.strip() for m in raw["methods"].split(",")),
            master_seed=int(raw["master_seed"]),
            sgm=sgm,
        )
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from None


def parse_config_file(path: str) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config_text(fh.read(), source=path)


def with_overrides(cfg: ExperimentConfig, **kwargs) -> ExperimentConfig:
    return replace(cfg, **kwargs)
