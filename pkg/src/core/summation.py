"""
Compensated, order-deterministic summation of quadrature sums

Double sums Σ_i Σ_j w_i w'_j K(x_i, y_j) are split into row blocks evaluated
on a thread pool. Every block is reduced with a compensated pairwise lane sum
and the block partials are combined in block order, so the result does not
depend on the worker count.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Callable, Optional

import numpy as np

from ..utils.config_loader import env_workers
from ..utils.errors import ConfigError

logger = logging.getLogger(__name__)

BLOCK_SIZE = 256

# lanes of the vectorized compensated sum
LANES = 512


class PairSelection(Enum):
    """Which (i, j) pairs of a double sum are included"""
    ALL = "all"
    SAME_LABEL = "same"
    DIFFERENT_LABEL = "different"


class NeumaierAccumulator:
    """
    Running Kahan–Babuška (Neumaier) sum, real or complex

    Example:
        >>> acc = NeumaierAccumulator()
        >>> for x in (1.0, 1e100, 1.0, -1e100):
        ...     acc.add(x)
        >>> acc.value
        2.0
    """

    def __init__(self):
        self._sum = np.zeros(2)
        self._carry = np.zeros(2)

    def add(self, value) -> "NeumaierAccumulator":
        z = complex(value)
        for part, x in enumerate((z.real, z.imag)):
            s = self._sum[part]
            t = s + x
            if abs(s) >= abs(x):
                self._carry[part] += (s - t) + x
            else:
                self._carry[part] += (x - t) + s
            self._sum[part] = t
        return self

    def __iadd__(self, value):
        return self.add(value)

    @property
    def value(self) -> complex:
        total = self._sum + self._carry
        return complex(total[0], total[1])


def _lane_sum_real(values: np.ndarray) -> float:
    flat = np.ravel(values).astype(float)
    if flat.size == 0:
        return 0.0
    pad = (-flat.size) % LANES
    if pad:
        flat = np.concatenate([flat, np.zeros(pad)])
    s = flat.reshape(-1, LANES)
    c = np.zeros(LANES)
    # pairwise tree over rows; TwoSum keeps each rounding error exactly
    while s.shape[0] > 1:
        if s.shape[0] % 2:
            s = np.vstack([s, np.zeros((1, LANES))])
        a, b = s[0::2], s[1::2]
        t = a + b
        bp = t - a
        c += ((a - (t - bp)) + (b - bp)).sum(axis=0)
        s = t
    s = s[0]
    acc = NeumaierAccumulator()
    for value in s:
        acc.add(value)
    for value in c:
        acc.add(value)
    return acc.value.real


def lane_sum(values) -> complex:
    """Vectorized compensated sum of an array; lanes are reduced in fixed order"""
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        return complex(_lane_sum_real(arr.real), _lane_sum_real(arr.imag))
    return complex(_lane_sum_real(arr), 0.0)


def compensated_sum(values) -> complex:
    """Neumaier sum of an iterable (small inputs) or array (lane sum)"""
    if isinstance(values, np.ndarray):
        return lane_sum(values)
    acc = NeumaierAccumulator()
    for value in values:
        acc.add(value)
    return acc.value


def resolve_workers(workers: Optional[int] = None) -> int:
    """
    Thread count: explicit value, else FRACTALQUAD_WORKERS, else os.cpu_count()

    Raises:
        ConfigError: workers < 1
    """
    if workers is None:
        workers = env_workers() or os.cpu_count() or 1
    workers = int(workers)
    if workers < 1:
        raise ConfigError(f"workers must be ≥ 1, got {workers}")
    return workers


def block_reduce(n_rows: int, evaluate_block: Callable[[int, int], complex],
                 workers: Optional[int] = None) -> complex:
    """
    Σ over row blocks [start, stop) of evaluate_block(start, stop)

    Blocks have BLOCK_SIZE rows. Their partials are combined in block order.
    """
    starts = list(range(0, n_rows, BLOCK_SIZE))
    bounds = [(start, min(start + BLOCK_SIZE, n_rows)) for start in starts]
    workers = resolve_workers(workers)
    if workers == 1 or len(bounds) <= 1:
        partials = [evaluate_block(a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            partials = list(ex.map(lambda ab: evaluate_block(*ab), bounds))
    acc = NeumaierAccumulator()
    for partial in partials:
        acc.add(partial)
    return acc.value


def double_sum(
    x: np.ndarray,
    wx: np.ndarray,
    y: np.ndarray,
    wy: np.ndarray,
    kernel: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
    symmetric: bool = False,
    labels: Optional[np.ndarray] = None,
    pairs: PairSelection = PairSelection.ALL,
    workers: Optional[int] = None,
) -> complex:
    """
    Σ_i Σ_j wx_i wy_j K(x_i, y_j) over selected pairs

    Args:
        x, y: (N, n) and (N', n) nodes
        wx, wy: weights
        kernel: kernel(x_block, y, mask) → (B, N') values; masked-out
            entries may hold anything finite, the mask says which pairs count
        symmetric: x is y and K is symmetric; only j ≥ i is evaluated,
            off-diagonal pairs weighted twice
        labels: per-node labels (shared by x and y) for pair selection
        pairs: ALL, SAME_LABEL or DIFFERENT_LABEL
        workers: thread count (see resolve_workers)
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    wx = np.asarray(wx, dtype=float)
    wy = np.asarray(wy, dtype=float)
    if pairs is not PairSelection.ALL:
        if labels is None or len(labels) != len(x) or len(x) != len(y):
            raise ValueError("pair selection needs one label per node of a shared node set")
        labels = np.asarray(labels)
    if symmetric and len(x) != len(y):
        raise ValueError("symmetric summation needs a shared node set")
    columns = np.arange(len(y))

    def evaluate_block(start: int, stop: int) -> complex:
        rows = np.arange(start, stop)
        mask = np.ones((rows.size, columns.size), dtype=bool)
        factor = np.ones(mask.shape)
        if symmetric:
            mask &= columns[None, :] >= rows[:, None]
            factor = np.where(columns[None, :] > rows[:, None], 2.0, 1.0)
        if pairs is PairSelection.SAME_LABEL:
            mask &= labels[rows][:, None] == labels[None, :]
        elif pairs is PairSelection.DIFFERENT_LABEL:
            mask &= labels[rows][:, None] != labels[None, :]
        if not mask.any():
            return 0j
        values = np.asarray(kernel(x[rows], y, mask))
        terms = np.where(mask, factor * wx[rows][:, None] * wy[None, :] * values, 0.0)
        return lane_sum(terms)

    return block_reduce(len(x), evaluate_block, workers)
