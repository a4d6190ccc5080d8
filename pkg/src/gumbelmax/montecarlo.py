"""Reproducible Monte Carlo simulation of normalized maxima.

Random numbers
--------------
Repetition ``r`` of a run with seed ``s`` reads its own counter-based stream:
the Philox-4x64-10 bit generator keyed with ``(s, r)`` and counter starting
at zero.  Each 64-bit output ``w`` becomes a uniform
``u = ((w >> 11) + 0.5) * 2**-53`` in the open interval (0, 1) and a standard
normal ``z = normal_ppf(u)``.  Outputs are consumed in the order
``x_1, y_1, x_2, y_2, ...``.  Because no state is shared between
repetitions, any split of the repetitions across worker processes gives the
same values bit for bit.
"""

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from gumbelmax.distributions import Case, gumbel_cdf, gumbel_quantile
from gumbelmax.exceptions import AlreadyNormalized, DomainError, EmptySample, SampleFileError
from gumbelmax.numerics import normal_ppf

__all__ = [
    "SimConfig",
    "SampleSet",
    "HistogramBin",
    "GofReport",
    "PairStream",
    "draw_pair_stream",
    "case_maximum",
    "sample_statistic",
    "run",
    "run_cases",
    "normalize",
    "ks_statistic",
    "histogram",
    "quantile_pairs",
    "total_variation",
    "gof_report",
    "write_samples",
    "read_samples",
]

QUANTILE_LEVELS = (0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99)
HIST_BIN_WIDTH = 0.25
HIST_LO = -4.0
HIST_HI = 10.0

_UNIFORM_SCALE = 2.0 ** -53


@dataclass(frozen=True)
class SimConfig:
    case: Case
    n: int
    reps: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "case", Case.parse(self.case))
        for name in ("n", "reps", "workers", "seed"):
            value = getattr(self, name)
            if isinstance(value, bool) or not float(value).is_integer():
                raise DomainError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.n < 1 or self.reps < 1 or self.workers < 1:
            raise DomainError("n, reps and workers must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")


@dataclass
class SampleSet:
    config: SimConfig
    values: np.ndarray
    normalized: bool = False
    seq: object = None

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class HistogramBin:
    lo: float
    hi: float
    count: int


@dataclass
class GofReport:
    ks: float
    quantile_pairs: list
    histogram: list = field(default_factory=list)

    def as_dict(self):
        return {
            "ks": self.ks,
            "quantile_pairs": [
                {"level": lv, "empirical": e, "gumbel": g}
                for lv, (e, g) in zip(QUANTILE_LEVELS, self.quantile_pairs)
            ],
            "histogram": [
                {"lo": _json_float(b.lo), "hi": _json_float(b.hi), "count": b.count}
                for b in self.histogram
            ],
            "total_variation": total_variation(self.histogram),
        }


def _json_float(v):
    if math.isinf(v):
        return "-inf" if v < 0 else "inf"
    return v


# ---------------------------------------------------------------------------
# random streams
# ---------------------------------------------------------------------------

class PairStream:
    """Standard-normal pairs for one ``(seed, rep_index)``."""

    def __init__(self, seed, rep_index):
        self.seed = int(seed)
        self.rep_index = int(rep_index)
        key = np.array([self.seed, self.rep_index], dtype=np.uint64)
        self._bits = np.random.Philox(key=key)

    def uniforms(self, count):
        raw = self._bits.random_raw(count)
        return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _UNIFORM_SCALE

    def normals(self, count):
        return normal_ppf(self.uniforms(count))

    def pairs(self, n):
        """Next ``n`` pairs as two arrays ``(x, y)``."""
        z = self.normals(2 * n)
        return z[0::2], z[1::2]

    def __iter__(self):
        while True:
            x, y = self.pairs(1)
            yield float(x[0]), float(y[0])


def draw_pair_stream(seed, rep_index):
    return PairStream(seed, rep_index)


def case_maximum(case, x, y):
    """Maximum of the case statistic over pairs ``(x_i, y_i)``."""
    case = Case.parse(case)
    if case is Case.NORMAL:
        return float(np.max(x))
    if case is Case.ABS_NORMAL:
        return float(np.max(np.abs(x)))
    # the difference realises the sum law (Y and -Y agree in law)
    if case is Case.SUM_NORMAL:
        return float(np.max(x - y))
    ax = np.abs(x)
    ay = np.abs(y)
    if case is Case.SUM_ABS:
        return float(np.max(ax + ay))
    if case is Case.DIFF_ABS:
        return float(np.max(ax - ay))
    return float(np.max(np.abs(ax - ay)))


def sample_statistic(case, n, stream):
    """Consume ``n`` pairs from ``stream`` and return the case maximum."""
    x, y = stream.pairs(n)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return case_maximum(case, x, y)


# ---------------------------------------------------------------------------
# runs
# ---------------------------------------------------------------------------

def _simulate_block(cases, n, seed, start, stop):
    out = np.empty((len(cases), stop - start))
    for j, rep in enumerate(range(start, stop)):
        x, y = PairStream(seed, rep).pairs(n)
        for i, case in enumerate(cases):
            out[i, j] = case_maximum(case, x, y)
    return out


def _blocks(reps, workers):
    pieces = min(reps, workers * 4)
    edges = [reps * k // pieces for k in range(pieces + 1)]
    return [(lo, hi) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]


def run_cases(cases, n, reps, seed, workers=1):
    """Simulate several statistics from the same pair streams.

    Returns ``{case: SampleSet}``; each entry equals ``run`` for that case.
    """
    cases = [Case.parse(c) for c in cases]
    configs = {c: SimConfig(c, n, reps, seed, workers) for c in cases}
    blocks = _blocks(reps, workers)
    if workers == 1:
        parts = [_simulate_block(cases, n, seed, lo, hi) for lo, hi in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_simulate_block, cases, n, seed, lo, hi) for lo, hi in blocks]
            parts = [f.result() for f in futures]
    values = np.concatenate(parts, axis=1)
    return {c: SampleSet(configs[c], values[i].copy()) for i, c in enumerate(cases)}


def run(config):
    """``config.reps`` maxima; repetition ``r`` uses stream ``(seed, r)``."""
    return run_cases([config.case], config.n, config.reps, config.seed, config.workers)[config.case]


def normalize(s, seq, allow_mismatch=False):
    """Map each value ``v`` to ``(v - b) / a``.

    ``seq`` must belong to the sample's case and ``n`` unless
    ``allow_mismatch`` is set (used for the wrong-sequence control).
    """
    if s.normalized:
        raise AlreadyNormalized("sample set is already normalized")
    if not allow_mismatch and (seq.case is not s.config.case or seq.n != s.config.n):
        raise DomainError(
            f"sequences for ({seq.case.value}, {seq.n}) do not match "
            f"sample ({s.config.case.value}, {s.config.n})"
        )
    values = (np.asarray(s.values, dtype=float) - seq.b) / seq.a
    return SampleSet(s.config, values, normalized=True, seq=seq)


# ---------------------------------------------------------------------------
# goodness of fit
# ---------------------------------------------------------------------------

def _values(s):
    values = np.asarray(s.values if isinstance(s, SampleSet) else s, dtype=float)
    if values.size == 0:
        raise EmptySample("sample is empty")
    return values


def ks_statistic(s, cdf=None):
    """One-sample Kolmogorov-Smirnov distance to the standard Gumbel law.

    ``cdf`` replaces the reference distribution (it must accept arrays).
    """
    if isinstance(s, SampleSet) and not s.normalized and cdf is None:
        raise DomainError("KS against the Gumbel law needs a normalized sample")
    v = np.sort(_values(s))
    n = v.size
    ref = np.asarray(gumbel_cdf(v) if cdf is None else cdf(v), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(i / n - ref)), np.max(np.abs((i - 1) / n - ref))))


def histogram(s, bin_width=HIST_BIN_WIDTH, lo=HIST_LO, hi=HIST_HI):
    """Counts on ``[lo, hi)`` in bins of ``bin_width`` plus two overflow bins."""
    v = _values(s)
    if bin_width <= 0 or not lo < hi:
        raise DomainError("histogram needs bin_width > 0 and lo < hi")
    m = int(round((hi - lo) / bin_width))
    edges = lo + bin_width * np.arange(m + 1)
    idx = np.searchsorted(edges, v, side="right")  # 0 = underflow, m + 1 = overflow
    counts = np.bincount(idx, minlength=m + 2)
    bins = [HistogramBin(-math.inf, float(edges[0]), int(counts[0]))]
    bins += [HistogramBin(float(edges[k]), float(edges[k + 1]), int(counts[k + 1])) for k in range(m)]
    bins.append(HistogramBin(float(edges[-1]), math.inf, int(counts[m + 1])))
    return bins


def quantile_pairs(s, levels=QUANTILE_LEVELS):
    v = _values(s)
    return [(float(np.quantile(v, lv)), float(gumbel_quantile(lv))) for lv in levels]


def total_variation(bins):
    """Half the L1 distance between bin frequencies and Gumbel bin masses."""
    total = sum(b.count for b in bins)
    if total == 0:
        raise EmptySample("histogram is empty")
    tv = 0.0
    for b in bins:
        mass = (1.0 if b.hi == math.inf else gumbel_cdf(b.hi)) - (
            0.0 if b.lo == -math.inf else gumbel_cdf(b.lo)
        )
        tv += abs(b.count / total - mass)
    return 0.5 * tv


def gof_report(s, bin_width=HIST_BIN_WIDTH, lo=HIST_LO, hi=HIST_HI):
    return GofReport(ks_statistic(s), quantile_pairs(s), histogram(s, bin_width, lo, hi))


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

SAMPLE_HEADER = ("rep", "value", "normalized")


def write_samples(path, s):
    flag = "1" if s.normalized else "0"
    with open(path, "w", newline="") as fh:
        fh.write(",".join(SAMPLE_HEADER) + "\n")
        for i, v in enumerate(s.values):
            fh.write(f"{i},{float(v):.17g},{flag}\n")


def read_samples(path):
    """Return ``(values, normalized)`` from a sample CSV.

    Raises :class:`SampleFileError` with the offending line number.
    """
    values = []
    flags = set()
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != SAMPLE_HEADER:
            raise SampleFileError(1, f"expected header {','.join(SAMPLE_HEADER)}")
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != 3:
                raise SampleFileError(line, f"expected 3 fields, got {len(row)}")
            try:
                rep = int(row[0])
                value = float(row[1])
            except ValueError as exc:
                raise SampleFileError(line, str(exc)) from None
            if rep != len(values):
                raise SampleFileError(line, f"expected rep {len(values)}, got {rep}")
            if not math.isfinite(value):
                raise SampleFileError(line, f"non-finite value {row[1]!r}")
            if row[2].strip() not in ("0", "1"):
                raise SampleFileError(line, f"normalized flag must be 0 or 1, got {row[2]!r}")
            values.append(value)
            flags.add(row[2].strip())
    if not values:
        raise SampleFileError(2, "no samples")
    if len(flags) > 1:
        raise SampleFileError(2, "mixed normalized flags")
    return np.array(values), flags == {"1"}


def default_workers():
    """Worker count from ``EVT_WORKERS``, else 1."""
    text = os.environ.get("EVT_WORKERS")
    if not text:
        return 1
    try:
        value = int(text)
    except ValueError:
        raise DomainError(f"EVT_WORKERS must be a positive integer, got {text!r}") from None
    if value < 1:
        raise DomainError(f"EVT_WORKERS must be a positive integer, got {text!r}")
    return value
