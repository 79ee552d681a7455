"""Nested dyadic partition of a bounded interval, truncated at a fixed depth.

Observation routing follows half-open intervals [a, b): a point landing
exactly on an interior split boundary belongs to the right child, and the
rightmost interval at each level is closed above so the upper domain
endpoint belongs to the last leaf.  Node (k, m) is the m-th of the 2**k
intervals at resolution level k; its children are (k+1, 2m) and
(k+1, 2m+1).
"""

from __future__ import annotations

from typing import Iterable, Mapping

from typing import NamedTuple

import numpy as np

__all__ = [
    "Domain",
    "NodeId",
    "ROOT",
    "CountedTree",
    "build_tree",
    "locate",
    "node_interval",
]


class Domain(NamedTuple):
    """Bounded sample-space interval [lo, hi]."""

    lo: float
    hi: float

    def validate(self) -> "Domain":
        lo, hi = float(self.lo), float(self.hi)
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise ValueError(f"domain endpoints must be finite, got [{lo}, {hi}]")
        if not lo < hi:
            raise ValueError(f"domain must satisfy lo < hi, got [{lo}, {hi}]")
        return Domain(lo, hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo


class NodeId(NamedTuple):
    """Dyadic node (level, index) with 0 <= index < 2**level."""

    level: int
    index: int

    def parent(self) -> "NodeId":
        if self.level == 0:
            raise ValueError("root node has no parent")
        return NodeId(self.level - 1, self.index >> 1)

    def left_child(self) -> "NodeId":
        return NodeId(self.level + 1, 2 * self.index)

    def right_child(self) -> "NodeId":
        return NodeId(self.level + 1, 2 * self.index + 1)

    def sibling(self) -> "NodeId":
        if self.level == 0:
            raise ValueError("root node has no sibling")
        return NodeId(self.level, self.index ^ 1)

    def is_ancestor_of(self, other: "NodeId") -> bool:
        if other.level < self.level:
            return False
        return (other.index >> (other.level - self.level)) == self.index


ROOT = NodeId(0, 0)


def _check_node(node: NodeId) -> None:
    if node.level < 0 or not 0 <= node.index < (1 << node.level):
        raise ValueError(f"invalid node {node!r}")


def node_interval(node: NodeId, domain: Domain) -> tuple[float, float]:
    """Endpoints (a, b) of the node's interval: a = lo + m*w, b = a + w, w = width/2**k."""
    _check_node(node)
    w = domain.width / (1 << node.level)
    return (domain.lo + node.index * w, domain.lo + (node.index + 1) * w)


def locate(x: float, level: int, domain: Domain) -> NodeId:
    """Node at `level` containing x, by repeated midpoint bisection.

    Bisection uses the exact midpoint (lo + hi)/2 at each step, so the
    level-k result is always the ancestor of the level-k' result for
    k < k'.  Raises ValueError when x lies outside the domain.
    """
    domain = Domain(*domain).validate()
    if level < 0:
        raise ValueError(f"level must be >= 0, got {level}")
    x = float(x)
    if not domain.lo <= x <= domain.hi:
        raise ValueError(f"point {x!r} lies outside domain [{domain.lo}, {domain.hi}]")
    lo, hi = domain.lo, domain.hi
    index = 0
    for _ in range(level):
        mid = 0.5 * (lo + hi)
        if x >= mid:
            index = 2 * index + 1
            lo = mid
        else:
            index = 2 * index
            hi = mid
    return NodeId(level, index)


def _locate_many(xs: np.ndarray, level: int, domain: Domain) -> np.ndarray:
    """Vectorized `locate`: level-`level` index for each point (assumed in-domain)."""
    lo = np.full(xs.shape, domain.lo)
    hi = np.full(xs.shape, domain.hi)
    index = np.zeros(xs.shape, dtype=np.int64)
    for _ in range(level):
        mid = 0.5 * (lo + hi)
        right = xs >= mid
        index = 2 * index + right
        lo = np.where(right, mid, lo)
        hi = np.where(right, hi, mid)
    return index


class CountedTree:
    """Counts n(A) of a data set on the truncated dyadic partition.

    Only nodes containing data (plus their empty siblings) are stored
    explicitly; `count` returns 0 for any other valid node.  Instances are
    immutable after construction and safe to share across threads.
    """

    def __init__(
        self,
        domain: Domain,
        max_depth: int,
        level_ms: list[np.ndarray],
        level_ns: list[np.ndarray],
        level_starts: list[np.ndarray] | None,
        sorted_data: np.ndarray | None,
    ):
        self.domain = domain
        self.max_depth = max_depth
        self._level_ms = level_ms
        self._level_ns = level_ns
        self._level_starts = level_starts
        self._sorted_data = sorted_data
        self.n_total = int(level_ns[0][0]) if len(level_ns[0]) else 0
        self.counts = self._materialized_counts()

    def _materialized_counts(self) -> dict[NodeId, int]:
        out: dict[NodeId, int] = {}
        for k in range(self.max_depth + 1):
            for m, n in zip(self._level_ms[k].tolist(), self._level_ns[k].tolist()):
                out[NodeId(k, m)] = int(n)
                if k > 0:
                    out.setdefault(NodeId(k, m ^ 1), 0)
        return out

    def count(self, node: NodeId) -> int:
        _check_node(node)
        if node.level > self.max_depth:
            raise ValueError(
                f"node level {node.level} exceeds tree depth {self.max_depth}"
            )
        ms = self._level_ms[node.level]
        pos = int(np.searchsorted(ms, node.index))
        if pos < len(ms) and ms[pos] == node.index:
            return int(self._level_ns[node.level][pos])
        return 0

    def split_counts(self, node: NodeId) -> tuple[int, int]:
        """(n(left child), n(right child)) of an internal node."""
        if node.level >= self.max_depth:
            raise ValueError(f"node {node!r} has no children at depth {self.max_depth}")
        return self.count(node.left_child()), self.count(node.right_child())

    def level_nodes(self, level: int) -> np.ndarray:
        """Indices of data-containing nodes at `level`, ascending."""
        return self._level_ms[level].copy()

    @classmethod
    def _from_counts(
        cls, domain: Domain, max_depth: int, counts: Mapping[NodeId, int]
    ) -> "CountedTree":
        """Rebuild the count structure from a sparse {node: n > 0} mapping."""
        level_ms = []
        level_ns = []
        for k in range(max_depth + 1):
            at_k = sorted(
                (node.index, n) for node, n in counts.items() if node.level == k and n > 0
            )
            level_ms.append(np.array([m for m, _ in at_k], dtype=np.int64))
            level_ns.append(np.array([n for _, n in at_k], dtype=np.int64))
        for k in range(max_depth):
            here = dict(zip(level_ms[k].tolist(), level_ns[k].tolist()))
            child_sum = {m: 0 for m in here}
            for m, n in zip(level_ms[k + 1].tolist(), level_ns[k + 1].tolist()):
                if m >> 1 not in here:
                    raise ValueError("inconsistent counts: child node without stored parent")
                child_sum[m >> 1] += n
            if child_sum != here:
                raise ValueError("inconsistent counts: children do not sum to their parent")
        return cls(domain, max_depth, level_ms, level_ns, None, None)


def build_tree(
    data: Iterable[float] | np.ndarray, domain: Domain, max_depth: int
) -> CountedTree:
    """Route every observation to depth `max_depth` and tally per-node counts.

    The result satisfies n(A) = n(left child) + n(right child) for every
    stored internal node, and count queries for untouched nodes return 0.
    Raises ValueError for points outside the domain or max_depth < 1.
    """
    domain = Domain(*domain).validate()
    if max_depth < 1:
        raise ValueError(f"max_depth must be >= 1, got {max_depth}")
    xs = np.asarray(list(data) if not isinstance(data, np.ndarray) else data, dtype=float)
    xs = xs.reshape(-1)
    if xs.size and (np.any(~np.isfinite(xs)) or np.any(xs < domain.lo) or np.any(xs > domain.hi)):
        bad = xs[~np.isfinite(xs) | (xs < domain.lo) | (xs > domain.hi)][0]
        raise ValueError(f"datum {bad!r} lies outside domain [{domain.lo}, {domain.hi}]")
    xs = np.sort(xs)

    level_ms: list[np.ndarray] = []
    level_ns: list[np.ndarray] = []
    level_starts: list[np.ndarray] = []
    if xs.size == 0:
        for _ in range(max_depth + 1):
            level_ms.append(np.empty(0, dtype=np.int64))
            level_ns.append(np.empty(0, dtype=np.int64))
            level_starts.append(np.zeros(1, dtype=np.int64))
        return CountedTree(domain, max_depth, level_ms, level_ns, level_starts, xs)

    lo = np.full(xs.shape, domain.lo)
    hi = np.full(xs.shape, domain.hi)
    index = np.zeros(xs.shape, dtype=np.int64)
    for k in range(max_depth + 1):
        # xs is sorted, hence index is non-decreasing within each level
        ms, starts, ns = np.unique(index, return_index=True, return_counts=True)
        level_ms.append(ms.astype(np.int64))
        level_ns.append(ns.astype(np.int64))
        level_starts.append(np.append(starts, xs.size).astype(np.int64))
        if k == max_depth:
            break
        mid = 0.5 * (lo + hi)
        right = xs >= mid
        index = 2 * index + right
        lo = np.where(right, mid, lo)
        hi = np.where(right, hi, mid)
    return CountedTree(domain, max_depth, level_ms, level_ns, level_starts, xs)
