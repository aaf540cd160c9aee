"""Vector-ternary-matrix products through a preprocessed row-segment index.

    >>> import numpy as np, rsr
    >>> a = np.array([[1, -1], [0, 1]], dtype=np.int8)
    >>> h = rsr.preprocess(a)
    >>> rsr.multiply(h, np.array([2.0, 3.0]))
    array([2., 1.])
"""

import csv
import statistics
import time

import numpy as np

from . import _core
from ._core import FormatError, Index, InvalidIndexError

__all__ = ["preprocess", "multiply", "save", "load", "bench"]

CSV_FIELDS = ["method", "n", "m", "k", "workers", "reps", "mean_ns", "stddev_ns", "min_ns", "speedup_vs_naive"]


def preprocess(array, k="auto"):
    """Build an index handle from a 2-D ternary array (int8, or floats holding -1/0/1)."""
    if not isinstance(array, np.ndarray):
        array = np.asarray(array)
    return _core.preprocess(array, k)


def multiply(handle, vector, variant="rsrpp"):
    """Return vector @ A as float64. An ndarray input must be 1-D contiguous float64."""
    if not isinstance(vector, np.ndarray):
        vector = np.asarray(vector, dtype=np.float64)
    return _core.multiply(handle, vector, variant)


def save(handle, path):
    """Write the handle's index to an .rsx file."""
    _core.save(handle, str(path))


def load(path):
    """Read an .rsx file into a handle."""
    return _core.load(str(path))


def _time(fn, reps, warmup):
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - t0)
    stddev = statistics.stdev(samples) if len(samples) > 1 else 0.0
    return statistics.fmean(samples), stddev, float(min(samples))


def _record(method, n, k, reps, timing, speedup):
    mean, stddev, low = timing
    return {"method": method, "n": n, "m": n, "k": k, "workers": 1, "reps": reps,
            "mean_ns": mean, "stddev_ns": stddev, "min_ns": low, "speedup_vs_naive": speedup}


def bench(sizes, reps, *, warmup=3, seed=1, csv_path=None):
    """Time multiply against numpy's dense v @ A on random n x n ternary matrices.

    `sizes` are matrix dimensions. Returns one record per method and size, in
    the column layout of the command-line bench; the numpy product takes the
    baseline role. Writes CSV to `csv_path` when given.
    """
    if reps < 1:
        raise ValueError("reps must be at least 1")
    records = []
    for n in sizes:
        n = int(n)
        if n < 1:
            raise ValueError("sizes must be positive")
        rng = np.random.default_rng([seed, n])
        a = rng.integers(-1, 2, size=(n, n), dtype=np.int8)
        v = rng.integers(-100, 101, size=n).astype(np.float64)
        dense = a.astype(np.float64)

        t0 = time.perf_counter_ns()
        handle = preprocess(a)
        built = float(time.perf_counter_ns() - t0)

        expected = v @ dense
        got = multiply(handle, v)
        if not np.allclose(got, expected, rtol=1e-9, atol=0.0):
            raise RuntimeError(f"multiply disagrees with the dense product at n={n}")

        base = _time(lambda: v @ dense, reps, warmup)
        fast = _time(lambda: multiply(handle, v), reps, warmup)
        records.append(_record("preprocess", n, handle.k, 1, (built, 0.0, built), None))
        records.append(_record("numpy", n, 0, reps, base, 1.0))
        records.append(_record("rsrpp", n, handle.k, reps, fast, base[0] / fast[0]))

    if csv_path is not None:
        with open(csv_path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=CSV_FIELDS)
            writer.writeheader()
            for r in records:
                writer.writerow({key: ("" if r[key] is None else r[key]) for key in CSV_FIELDS})
    return records
