"""Baseline: the classical conjugate tree prior with fixed per-level precision.

Every node's left-mass fraction gets an independent Beta prior whose
precision is a deterministic function of depth (by default 2 * depth^2, so
the Beta is symmetric (depth^2, depth^2) under a uniform base).  The
posterior is conjugate node by node; the predictive density is the
product of posterior-mean split fractions along the branch, divided by the
base mass of the leaf.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .partition import CountedTree, Domain, NodeId, _locate_many, build_tree
from .priors import BaseMeasure, DEFAULT_DEPTH

__all__ = ["PTSpec", "PTPosterior", "pt_fit", "pt_ppd", "default_alpha"]


def default_alpha(depth: int) -> float:
    """Standard depth-squared concentration for the split at `depth` (1-based)."""
    return float(depth * depth)


@dataclass(frozen=True)
class PTSpec:
    """Baseline configuration.

    `alpha_fn(depth)` gives the Beta concentration of splits at 1-based
    depth; the prior there is Beta(theta0 * nu, (1-theta0) * nu) with
    nu = 2 * alpha_fn(depth).
    """

    max_depth: int = DEFAULT_DEPTH
    alpha_fn: Callable[[int], float] = default_alpha
    base: BaseMeasure = field(default_factory=BaseMeasure.uniform)

    def nu_at(self, level: int) -> float:
        """Prior precision for splits of level-`level` nodes (0-based level)."""
        nu = 2.0 * float(self.alpha_fn(level + 1))
        if not nu > 0:
            raise ValueError(f"alpha_fn must be positive, got nu={nu} at level {level}")
        return nu


class PTPosterior:
    """Conjugate posterior of the baseline prior on one data set."""

    def __init__(self, tree: CountedTree, spec: PTSpec, domain: Domain):
        self.tree = tree
        self.spec = spec
        self.domain = domain
        K = tree.max_depth
        base = spec.base
        # posterior mean fraction and precision per data-containing node
        self._theta_tilde: list[np.ndarray] = []
        self._nu_tilde: list[np.ndarray] = []
        for k in range(K):
            ms = tree._level_ms[k]
            nl = self._child_counts(k, 2 * ms)
            nr = self._child_counts(k, 2 * ms + 1)
            theta0 = base.theta0_of(k, ms, domain)
            nu = spec.nu_at(k)
            self._theta_tilde.append((theta0 * nu + nl) / (nu + nl + nr))
            self._nu_tilde.append(nu + nl + nr)

    def _child_counts(self, level: int, child_ms: np.ndarray) -> np.ndarray:
        ms, ns = self.tree._level_ms[level + 1], self.tree._level_ns[level + 1]
        if ms.size == 0:
            return np.zeros(child_ms.shape)
        pos = np.minimum(np.searchsorted(ms, child_ms), ms.size - 1)
        return np.where(ms[pos] == child_ms, ns[pos], 0).astype(float)

    def posterior_params(self, node: NodeId) -> tuple[float, float]:
        """(posterior mean fraction, posterior precision) of one node's split."""
        node = NodeId(*node)
        if not 0 <= node.level < self.tree.max_depth:
            raise ValueError(f"node {node!r} has no split above depth {self.tree.max_depth}")
        ms = self.tree._level_ms[node.level]
        pos = int(np.searchsorted(ms, node.index))
        if pos < ms.size and ms[pos] == node.index:
            return float(self._theta_tilde[node.level][pos]), float(self._nu_tilde[node.level][pos])
        theta0 = self.spec.base.theta0_of(node.level, np.array([node.index]), self.domain)[0]
        return float(theta0), self.spec.nu_at(node.level)

    def ppd_many(self, xs) -> np.ndarray:
        """Posterior predictive density (posterior mean density) at many points."""
        xs = np.asarray(xs, dtype=float).reshape(-1)
        dom = self.domain
        if xs.size and (np.any(~np.isfinite(xs)) or np.any(xs < dom.lo) or np.any(xs > dom.hi)):
            bad = xs[~np.isfinite(xs) | (xs < dom.lo) | (xs > dom.hi)][0]
            raise ValueError(f"point {bad!r} lies outside domain [{dom.lo}, {dom.hi}]")
        if xs.size == 0:
            return np.empty(0)
        K = self.tree.max_depth
        base = self.spec.base
        leaves = _locate_many(xs, K, dom)
        uniq, inv = np.unique(leaves, return_inverse=True)
        log_mass = np.zeros(uniq.size)
        for k in range(K):
            mk = uniq >> (K - k)
            ms = self.tree._level_ms[k]
            if ms.size:
                pos = np.minimum(np.searchsorted(ms, mk), ms.size - 1)
                found = ms[pos] == mk
                theta = np.where(
                    found,
                    self._theta_tilde[k][pos],
                    base.theta0_of(k, mk, dom),
                )
            else:
                theta = base.theta0_of(k, mk, dom)
            went_left = ((uniq >> (K - k - 1)) & 1) == 0
            log_mass += np.log(np.where(went_left, theta, 1.0 - theta))
        log_leaf_q0 = base.log_node_mass(K, uniq, dom)
        coef = log_mass - log_leaf_q0
        return np.exp(coef[inv] + base.log_density(xs, dom))

    def ppd(self, x: float) -> float:
        return float(self.ppd_many(np.array([float(x)]))[0])


def pt_fit(data, spec: PTSpec, domain) -> PTPosterior:
    """Conjugate update of the baseline prior on the data."""
    domain = Domain(*domain).validate()
    spec.base.check_domain(domain)
    tree = build_tree(data, domain, spec.max_depth)
    return PTPosterior(tree, spec, domain)


def pt_ppd(fitted: PTPosterior, x: float) -> float:
    """Baseline posterior predictive density at one point."""
    return fitted.ppd(x)
