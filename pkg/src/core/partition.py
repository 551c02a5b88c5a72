"""
Partitions L_h(Γ) and composite barycentre rules

L_h(Γ) is the set of addressed sub-components Γ_𝐦 with diam(Γ_𝐦) ≤ h whose
parent has diam > h. Leaves are produced breadth first with np.repeat, which
keeps them in lexicographic order of their vector indices.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np

from ..utils.errors import NumericPreconditionError
from .ifs import Attractor, VecIndex, compose, validate_index

logger = logging.getLogger(__name__)

# relative slack of the split test: diam > h·(1 + SPLIT_SLACK)
SPLIT_SLACK = 1e-12

# refuse partitions larger than this
MAX_NODES = 5_000_000


@dataclass(frozen=True, eq=False)
class Partition:
    """
    Leaves of L_h(Γ_root) or of the fixed-level partition I_ℓ(Γ_root)

    Attributes:
        attractor: Γ
        h: partition parameter (None for a fixed-level partition)
        level: fixed level relative to root (None for L_h)
        root: prefix 𝐦 shared by all leaves, () for Γ itself
        digits: (N, W) 0-based digits after the root, -1 padded
        lengths: (N,) number of digits after the root
        linear: (N, n, n) linear parts of s_{root,𝐦}
        translation: (N, n) translations of s_{root,𝐦}
        log_ratio: (N,) log of the contraction ratio of s_{root,𝐦}
    """
    attractor: Attractor
    h: Optional[float]
    level: Optional[int]
    root: VecIndex
    digits: np.ndarray
    lengths: np.ndarray
    linear: np.ndarray
    translation: np.ndarray
    log_ratio: np.ndarray

    @property
    def N(self) -> int:
        return int(self.lengths.shape[0])

    @property
    def indices(self) -> Tuple[VecIndex, ...]:
        """Full 1-based vector indices (root prefix included)"""
        return tuple(
            self.root + tuple(int(x) + 1 for x in row[:length])
            for row, length in zip(self.digits, self.lengths)
        )

    @property
    def diameters(self) -> np.ndarray:
        return np.exp(self.log_ratio) * self.attractor.diam

    @property
    def measures(self) -> np.ndarray:
        return np.exp(self.attractor.dim * self.log_ratio) * self.attractor.measure

    def labels(self, depth: int = 1) -> np.ndarray:
        """
        0-based digit at position ``depth`` after the root, per leaf

        Leaves with fewer digits get -1. depth=1 labels each leaf with the
        child Γ_{root,m} it lies in.
        """
        if depth < 1:
            raise NumericPreconditionError(f"label depth must be ≥ 1, got {depth}")
        if self.digits.shape[1] < depth:
            return np.full(self.N, -1, dtype=np.int64)
        return self.digits[:, depth - 1].copy()

    def ancestor_labels(self, coarse: "Partition") -> np.ndarray:
        """
        Index into ``coarse`` of the member containing each leaf

        Raises:
            NumericPreconditionError: coarse does not coarsen this partition
        """
        if coarse.attractor is not self.attractor or coarse.root != self.root:
            raise NumericPreconditionError("partitions belong to different sets")
        refined = _descend(
            self.attractor,
            _start_from(coarse),
            _split_rule(self.attractor, self.h, self.level),
        )
        if refined["lengths"].shape[0] != self.N or not np.array_equal(refined["lengths"], self.lengths):
            raise NumericPreconditionError("coarse partition is not coarser than this one")
        return refined["origin"]

    def __repr__(self) -> str:
        crit = f"h={self.h:.6g}" if self.h is not None else f"level={self.level}"
        return f"<Partition({self.attractor.name or 'Γ'}{list(self.root) or ''}, {crit}, N={self.N})>"


@dataclass(frozen=True)
class QuadratureRule:
    """
    Composite barycentre rule Q_h: nodes x_𝐦 = s_𝐦(x_Γ), weights μ(Γ_𝐦)
    """
    nodes: np.ndarray
    weights: np.ndarray
    h: Optional[float]
    N: int
    partition: Optional[Partition] = None


def _start_from(partition: Partition) -> dict:
    return {
        "digits": partition.digits,
        "lengths": partition.lengths,
        "linear": partition.linear,
        "translation": partition.translation,
        "log_ratio": partition.log_ratio,
        "origin": np.arange(partition.N),
    }


def _root_start(attractor: Attractor, root: VecIndex) -> dict:
    s = compose(attractor, root)
    log_ratio = float(sum(attractor.log_ratios[i - 1] for i in root))
    return {
        "digits": np.empty((1, 0), dtype=np.int64),
        "lengths": np.zeros(1, dtype=np.int64),
        "linear": s.linear[None].copy(),
        "translation": s.translation[None].copy(),
        "log_ratio": np.array([log_ratio]),
        "origin": np.zeros(1, dtype=np.int64),
    }


def _split_rule(attractor: Attractor, h: Optional[float], level: Optional[int]) -> Callable:
    if h is not None:
        threshold = math.log(h / attractor.diam) + SPLIT_SLACK
        return lambda state: state["log_ratio"] > threshold
    return lambda state: state["lengths"] < level


def _descend(attractor: Attractor, state: dict, should_split: Callable) -> dict:
    """Split leaves until should_split(state) is False everywhere"""
    M = attractor.M
    while True:
        split = should_split(state)
        if not split.any():
            return state
        counts = np.where(split, M, 1)
        total = int(counts.sum())
        if total > MAX_NODES:
            raise NumericPreconditionError(
                f"partition would exceed {MAX_NODES} members; use a larger h"
            )
        parent = np.repeat(np.arange(split.size), counts)
        starts = np.cumsum(counts) - counts
        within = np.arange(total) - np.repeat(starts, counts)
        is_child = split[parent]
        digit = np.where(is_child, within, 0)

        lengths = state["lengths"][parent] + is_child
        width = max(state["digits"].shape[1], int(lengths.max()))
        digits = np.full((total, width), -1, dtype=np.int64)
        digits[:, :state["digits"].shape[1]] = state["digits"][parent]
        rows = np.nonzero(is_child)[0]
        digits[rows, state["lengths"][parent][rows]] = digit[rows]

        lin_parent = state["linear"][parent]
        tr_parent = state["translation"][parent]
        linear = lin_parent.copy()
        translation = tr_parent.copy()
        linear[rows] = lin_parent[rows] @ attractor.linears[digit[rows]]
        translation[rows] = (np.einsum("nij,nj->ni", lin_parent[rows], attractor.translations[digit[rows]])
                             + tr_parent[rows])
        log_ratio = state["log_ratio"][parent] + np.where(is_child, attractor.log_ratios[digit], 0.0)

        state = {
            "digits": digits,
            "lengths": lengths,
            "linear": linear,
            "translation": translation,
            "log_ratio": log_ratio,
            "origin": state["origin"][parent],
        }


def _freeze(attractor, h, level, root, state) -> Partition:
    arrays = {key: np.ascontiguousarray(state[key])
              for key in ("digits", "lengths", "linear", "translation", "log_ratio")}
    for arr in arrays.values():
        arr.flags.writeable = False
    partition = Partition(attractor=attractor, h=h, level=level, root=root, **arrays)
    logger.debug("%r", partition)
    return partition


@lru_cache(maxsize=64)
def _cached_lh(attractor: Attractor, h: float, root: VecIndex) -> Partition:
    state = _descend(attractor, _root_start(attractor, root), _split_rule(attractor, h, None))
    return _freeze(attractor, h, None, root, state)


def partition_lh(attractor: Attractor, h: float, root=()) -> Partition:
    """
    L_h(Γ_root): maximal sub-components with diameter at most h

    A member is split while diam > h·(1+1e-12), so diameters equal to h
    within rounding stop the descent.

    Args:
        attractor: Γ
        h: partition parameter, h > 0
        root: vector index of the sub-component to partition

    Returns:
        Partition with N ≥ 1 leaves in lexicographic order

    Raises:
        NumericPreconditionError: h ≤ 0 or the partition is too large
        IndexRangeError: invalid root

    Example:
        >>> partition_lh(preset("cantor", rho=1/3), 0.4).indices
        ((1,), (2,))
    """
    if not h > 0:
        raise NumericPreconditionError(f"h must be positive, got {h}")
    return _cached_lh(attractor, float(h), validate_index(attractor, root))


def partition_level(attractor: Attractor, level: int, root=()) -> Partition:
    """Fixed-level partition I_ℓ(Γ_root) = {Γ_{root,𝐦} : |𝐦| = ℓ}"""
    if level < 0:
        raise NumericPreconditionError(f"level must be non-negative, got {level}")
    if attractor.M ** level > MAX_NODES:
        raise NumericPreconditionError(f"I_{level} has more than {MAX_NODES} members")
    root = validate_index(attractor, root)
    state = _descend(attractor, _root_start(attractor, root), _split_rule(attractor, None, level))
    return _freeze(attractor, None, level, root, state)


def barycentre(attractor: Attractor) -> np.ndarray:
    """
    Barycentre x_Γ = ∫ x dH^d / μ(Γ)

    x_Γ = Σ ρ_m^d s_m(x_Γ), so (I − Σ ρ_m^d ρ_m A_m) x_Γ = Σ ρ_m^d δ_m.

    Example:
        >>> barycentre(preset("cantor", rho=1/3))
        array([0.5])
    """
    weights = attractor.ratios ** attractor.dim
    lhs = np.eye(attractor.ambient_dim) - np.einsum("m,mij->ij", weights, attractor.linears)
    rhs = weights @ attractor.translations
    return np.linalg.solve(lhs, rhs)


def rule_from_partition(partition: Partition) -> QuadratureRule:
    """Barycentre rule on a partition: nodes s_𝐦(x_Γ), weights μ(Γ_𝐦)"""
    attractor = partition.attractor
    xb = barycentre(attractor)
    nodes = np.einsum("nij,j->ni", partition.linear, xb) + partition.translation
    return QuadratureRule(
        nodes=nodes,
        weights=partition.measures,
        h=partition.h,
        N=partition.N,
        partition=partition,
    )


def barycentre_rule(attractor: Attractor, h: float, root=()) -> QuadratureRule:
    return rule_from_partition(partition_lh(attractor, h, root))
