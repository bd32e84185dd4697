"""Statistical experiments comparing distributions of matrix powers.

Two experiments are provided:

* ``ddh``: with one invertible M fixed for the whole run, tally M^(ab) against
  M^c for fresh a, b (small range) and c (large range) per trial.
* ``masking``: per trial draw a fresh invertible M, exponent a and uniform
  random N, and tally M^a against N.

A tally records, for every matrix entry and every permutation, whether that
permutation's coefficient is nonzero (``support`` mode) or which value it
takes (``coefficient`` mode).  Sorted tallies are paired into QQ series and
summarised by the largest normalised gap.
"""

import csv
import io
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gmatrix, sampler
from ._random import system_rng, uniform_residues
from .gmatrix import GRMatrix, mat_pow
from .gring import MODULUS, SIZE

SUPPORT = "support"
COEFFICIENT = "coefficient"
CSV_HEADER = ["entry_row", "entry_col", "rank", "count_a", "count_b"]


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str = "ddh"
    trials: int = 500
    range_small: tuple = (10 ** 22, 10 ** 27)
    range_large: tuple = (10 ** 44, 10 ** 54)
    seed: int = None
    count_mode: str = SUPPORT
    factors: int = sampler.DEFAULT_FACTORS
    workers: int = 1

    def __post_init__(self):
        if self.mode not in ("ddh", "masking"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        for lo, hi in (self.range_small, self.range_large):
            if not 0 <= lo < hi:
                raise ValueError(f"empty exponent range [{lo}, {hi})")
        if self.count_mode not in (SUPPORT, COEFFICIENT):
            raise ValueError(f"unknown count mode {self.count_mode!r}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


def _cells(count_mode: str) -> int:
    return SIZE if count_mode == SUPPORT else SIZE * MODULUS


@dataclass
class FrequencyTable:
    """Per-entry counters; ``counts`` has shape (3, 3, cells)."""

    counts: np.ndarray
    trials: int = 0

    @classmethod
    def empty(cls, count_mode: str = SUPPORT) -> "FrequencyTable":
        return cls(np.zeros((3, 3, _cells(count_mode)), dtype=np.int64), 0)

    def tally(self, m: GRMatrix):
        self.counts += _indicator(m.entries, self.counts.shape[2])
        self.trials += 1

    def merge(self, other: "FrequencyTable"):
        self.counts += other.counts
        self.trials += other.trials


def _indicator(entries: np.ndarray, cells: int) -> np.ndarray:
    """One trial's contribution for a (3, 3, 120) coefficient array."""
    if cells == SIZE:
        return (entries != 0).astype(np.int64)
    onehot = np.zeros((3, 3, SIZE, MODULUS), dtype=np.int64)
    np.put_along_axis(onehot, entries[..., None].astype(np.intp), 1, axis=3)
    return onehot.reshape(3, 3, cells)


@dataclass(frozen=True)
class QQSeries:
    """``pairs[i, j, r] = (r-th smallest count of A, r-th smallest count of B)`` for entry (i, j)."""

    pairs: np.ndarray
    trials: int


def _trial_rng(seed, label: str, index: int) -> random.Random:
    if seed is None:
        return system_rng()
    return random.Random(f"grcs-lab:{seed}:{label}:{index}")


def _ddh_chunk(m_bytes: bytes, indices, cfg: ExperimentConfig):
    m = GRMatrix.from_bytes(m_bytes)
    ab, c = FrequencyTable.empty(cfg.count_mode), FrequencyTable.empty(cfg.count_mode)
    for t in indices:
        rng = _trial_rng(cfg.seed, "ddh", t)
        a = sampler.sample_exponent_range(rng, *cfg.range_small)
        b = sampler.sample_exponent_range(rng, *cfg.range_small)
        cexp = sampler.sample_exponent_range(rng, *cfg.range_large)
        ab.tally(mat_pow(mat_pow(m, a), b))
        c.tally(mat_pow(m, cexp))
    return ab, c


def _masking_chunk(indices, cfg: ExperimentConfig):
    ma, nn = FrequencyTable.empty(cfg.count_mode), FrequencyTable.empty(cfg.count_mode)
    for t in indices:
        rng = _trial_rng(cfg.seed, "masking", t)
        m = sampler.sample_invertible(rng, cfg.factors).M
        a = sampler.sample_exponent_range(rng, *cfg.range_small)
        ma.tally(mat_pow(m, a))
        nn.tally(gmatrix.random_matrix(rng))
    return ma, nn


def _run(chunk_fn, args, cfg: ExperimentConfig):
    trials = range(cfg.trials)
    if cfg.workers == 1:
        return chunk_fn(*args, trials, cfg)
    # fixed per-trial generators make the merged result independent of scheduling
    chunks = [trials[w::cfg.workers] for w in range(cfg.workers)]
    first, second = FrequencyTable.empty(cfg.count_mode), FrequencyTable.empty(cfg.count_mode)
    with ProcessPoolExecutor(cfg.workers) as pool:
        for x, y in pool.map(chunk_fn, *([a] * len(chunks) for a in args), chunks, [cfg] * len(chunks)):
            first.merge(x)
            second.merge(y)
    return first, second


def run_ddh_experiment(rng: random.Random, cfg: ExperimentConfig):
    """Return ``(table_ab, table_c)``.

    When ``cfg.seed`` is set, the fixed matrix and every trial are drawn from
    generators derived from it and ``rng`` is ignored; otherwise the fixed
    matrix comes from ``rng`` and each trial from OS entropy.
    """
    if cfg.mode != "ddh":
        raise ValueError("config mode must be 'ddh'")
    if cfg.seed is not None:
        rng = _trial_rng(cfg.seed, "ddh-base", 0)
    elif rng is None:
        rng = system_rng()
    m = sampler.sample_invertible(rng, cfg.factors).M
    return _run(_ddh_chunk, (m.to_bytes(),), cfg)


def run_masking_experiment(rng: random.Random, cfg: ExperimentConfig):
    """Return ``(table_Ma, table_N)``; all parameters are redrawn every trial."""
    if cfg.mode != "masking":
        raise ValueError("config mode must be 'masking'")
    return _run(_masking_chunk, (), cfg)


def qq_series(a: FrequencyTable, b: FrequencyTable) -> QQSeries:
    if a.trials != b.trials:
        raise ValueError(f"trial counts differ: {a.trials} vs {b.trials}")
    if a.counts.shape != b.counts.shape:
        raise ValueError("tables were built with different count modes")
    pairs = np.stack([np.sort(a.counts, axis=2), np.sort(b.counts, axis=2)], axis=3)
    return QQSeries(pairs, a.trials)


def max_qq_deviation(q: QQSeries) -> Fraction:
    if q.trials == 0:
        return Fraction(0)
    gap = int(np.abs(q.pairs[..., 0] - q.pairs[..., 1]).max())
    return Fraction(gap, q.trials)


def uniform_table(rng: random.Random, trials: int, count_mode: str = SUPPORT) -> FrequencyTable:
    """Tally ``trials`` uniform random matrices (the same law as ``gmatrix.random_matrix``)."""
    table = FrequencyTable.empty(count_mode)
    draws = uniform_residues(rng, trials * gmatrix.NBYTES).reshape(trials, 3, 3, SIZE)
    for entries in draws:
        table.counts += _indicator(entries, table.counts.shape[2])
    table.trials = trials
    return table


def calibrate_threshold(rng: random.Random, trials: int, runs: int = 100, quantile: float = 0.99,
                        count_mode: str = SUPPORT) -> Fraction:
    """Empirical ``quantile`` of the QQ deviation between two same-law control tables."""
    devs = sorted(
        max_qq_deviation(qq_series(uniform_table(rng, trials, count_mode), uniform_table(rng, trials, count_mode)))
        for _ in range(runs)
    )
    return devs[max(0, math.ceil(quantile * runs) - 1)]


def _fmt_exp(x: int) -> str:
    if x > 0 and 10 ** (len(str(x)) - 1) == x:
        return f"1e{len(str(x)) - 1}"
    return str(x)


def summary_line(cfg: ExperimentConfig, deviation: Fraction, threshold: Fraction = None) -> str:
    fields = [
        f"mode={cfg.mode}",
        f"trials={cfg.trials}",
        f"count_mode={cfg.count_mode}",
        f"range_small=[{_fmt_exp(cfg.range_small[0])},{_fmt_exp(cfg.range_small[1])})",
    ]
    if cfg.mode == "ddh":
        fields.append(f"range_large=[{_fmt_exp(cfg.range_large[0])},{_fmt_exp(cfg.range_large[1])})")
    fields += [f"seed={cfg.seed if cfg.seed is not None else 'none'}", f"max_qq_deviation={float(deviation):.6f}"]
    if threshold is not None:
        fields.append(f"threshold={float(threshold):.6f}")
    return "# summary: " + " ".join(fields)


def write_csv(series: QQSeries, destination, summary: str = None):
    """Write one row per (entry, rank); ``destination`` is a path or a text stream."""
    if isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__"):
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            return write_csv(series, fh, summary)
    w = csv.writer(destination, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for i in range(3):
        for j in range(3):
            for r, (ca, cb) in enumerate(series.pairs[i, j]):
                w.writerow([i, j, r, int(ca), int(cb)])
    if summary is not None:
        destination.write(summary + "\n")


def read_csv(source, trials: int) -> QQSeries:
    if isinstance(source, str) and "\n" in source:
        source = io.StringIO(source)
    elif not hasattr(source, "read"):
        with open(source, encoding="utf-8", newline="") as fh:
            return read_csv(fh, trials)
    rows = [row for row in csv.reader(source) if row and not row[0].startswith("#")]
    if rows[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    body = np.array(rows[1:], dtype=np.int64)
    cells = int(body[:, 2].max()) + 1
    pairs = np.zeros((3, 3, cells, 2), dtype=np.int64)
    pairs[body[:, 0], body[:, 1], body[:, 2]] = body[:, 3:5]
    return QQSeries(pairs, trials)


def write_svg(series: QQSeries, destination, title: str = ""):
    """Minimal QQ scatter of all nine entries with the diagonal for reference."""
    size, pad = 400, 30
    pts = series.pairs.reshape(-1, 2)
    lo, hi = int(pts.min()), int(pts.max())
    span = max(hi - lo, 1)

    def sx(v):
        return pad + (v - lo) / span * (size - 2 * pad)

    def sy(v):
        return size - pad - (v - lo) / span * (size - 2 * pad)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
        f'<text x="{pad}" y="{pad - 10}" font-size="12">{title}</text>',
        f'<line x1="{sx(lo):.1f}" y1="{sy(lo):.1f}" x2="{sx(hi):.1f}" y2="{sy(hi):.1f}" stroke="gray"/>',
    ]
    out += [f'<circle cx="{sx(a):.1f}" cy="{sy(b):.1f}" r="1.5"/>' for a, b in pts]
    out.append("</svg>")
    with open(destination, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
