"""Local conjugate evidence: Beta-binomial marginal likelihoods in log space.

Each internal node of the partition carries a binomial experiment (how many
of its points fall in the left child) with a Beta(theta0*nu, (1-theta0)*nu)
prior on the left-mass fraction.  The precision nu is either a fixed finite
value, the degenerate value infinity (the fraction is pinned to theta0), or
averaged over a quadrature grid representing one shrinkage state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import gammaln as _gammaln

__all__ = [
    "INFINITY",
    "SplitCounts",
    "StateComponent",
    "log_gamma_fn",
    "log_M",
    "log_M_component",
    "posterior_nu_weights",
]

INFINITY = math.inf


class SplitCounts(NamedTuple):
    """Counts of points routed to the left and right child of one node."""

    n_left: int
    n_right: int

    @property
    def total(self) -> int:
        return self.n_left + self.n_right


def log_gamma_fn(x: float) -> float:
    """log Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0:
        raise ValueError(f"log_gamma_fn requires x > 0, got {x!r}")
    return math.lgamma(x)


def _check_theta0(theta0: float) -> float:
    theta0 = float(theta0)
    if not 0.0 < theta0 < 1.0:
        raise ValueError(f"theta0 must lie strictly inside (0, 1), got {theta0!r}")
    return theta0


def log_M(theta0: float, nu: float, counts: SplitCounts) -> float:
    """Log marginal likelihood of one node's split counts.

    Integrates the binomial likelihood over theta ~ Beta(theta0*nu,
    (1-theta0)*nu).  nu = INFINITY gives the point-mass limit
    n_left*log(theta0) + n_right*log(1-theta0).  Empty counts give 0
    exactly for every nu.
    """
    theta0 = _check_theta0(theta0)
    nl, nr = int(counts[0]), int(counts[1])
    if nl < 0 or nr < 0:
        raise ValueError(f"counts must be non-negative, got {counts!r}")
    if nl == 0 and nr == 0:
        return 0.0
    if math.isinf(nu):
        return nl * math.log(theta0) + nr * math.log(1.0 - theta0)
    nu = float(nu)
    if not nu > 0:
        raise ValueError(f"nu must be positive or infinite, got {nu!r}")
    a = theta0 * nu
    b = (1.0 - theta0) * nu
    return (
        math.lgamma(a + nl)
        + math.lgamma(b + nr)
        + math.lgamma(nu)
        - math.lgamma(nu + nl + nr)
        - math.lgamma(a)
        - math.lgamma(b)
    )


@dataclass(frozen=True, eq=False)
class StateComponent:
    """One shrinkage state: a quadrature cell on log10(nu), or {infinity}.

    A finite component covers [log10_lo, log10_hi) and is represented by
    midpoint quadrature values `quad_points` (nu scale, increasing).  The
    infinite component pins the split fraction to theta0 exactly.
    """

    log10_lo: float
    log10_hi: float
    quad_points: np.ndarray
    is_point_mass_at_infinity: bool = False

    @classmethod
    def interval(cls, log10_lo: float, log10_hi: float, n_quad: int) -> "StateComponent":
        """Finite component on [log10_lo, log10_hi) with n_quad midpoints."""
        if not log10_lo < log10_hi:
            raise ValueError(f"component needs log10_lo < log10_hi, got ({log10_lo}, {log10_hi})")
        if n_quad < 1:
            raise ValueError(f"need at least one quadrature point, got {n_quad}")
        step = (log10_hi - log10_lo) / n_quad
        grid = log10_lo + step * (np.arange(n_quad) + 0.5)
        return cls(float(log10_lo), float(log10_hi), 10.0 ** grid, False)

    @classmethod
    def point(cls, nu: float) -> "StateComponent":
        """Degenerate one-point component at a fixed finite nu."""
        nu = float(nu)
        if not (nu > 0 and math.isfinite(nu)):
            raise ValueError(f"point component needs finite nu > 0, got {nu!r}")
        lg = math.log10(nu)
        return cls(lg, lg, np.array([nu]), False)

    @classmethod
    def point_mass_infinity(cls) -> "StateComponent":
        return cls(INFINITY, INFINITY, np.empty(0), True)

    def __post_init__(self):
        object.__setattr__(self, "quad_points", np.asarray(self.quad_points, dtype=float))
        if not self.is_point_mass_at_infinity:
            q = self.quad_points
            if q.size == 0:
                raise ValueError("finite component requires quadrature points")
            if np.any(~np.isfinite(q)) or np.any(q <= 0) or np.any(np.diff(q) < 0):
                raise ValueError("quadrature points must be positive, finite, increasing")


def log_M_component(theta0: float, comp: StateComponent, counts: SplitCounts) -> float:
    """Log of the quadrature-averaged marginal likelihood for one state.

    Finite states average M over the component's nu values with equal
    weights; the infinite state evaluates the point-mass limit.
    """
    if comp.is_point_mass_at_infinity:
        return log_M(theta0, INFINITY, counts)
    vals = [log_M(theta0, nu, counts) for nu in comp.quad_points]
    hi = max(vals)
    return hi + math.log(sum(math.exp(v - hi) for v in vals)) - math.log(len(vals))


def posterior_nu_weights(
    theta0: float, comps: Sequence[StateComponent], counts: SplitCounts
) -> list[np.ndarray]:
    """Posterior weights over each component's quadrature points.

    Given the node's state, the posterior over the component's nu grid is
    proportional to the per-point marginal likelihoods.  Returns one
    normalized weight vector per component (the infinite state yields the
    single weight [1.0]).  With empty counts every finite component's
    weights are uniform.
    """
    out = []
    for comp in comps:
        if comp.is_point_mass_at_infinity:
            out.append(np.array([1.0]))
            continue
        logs = np.array([log_M(theta0, nu, counts) for nu in comp.quad_points])
        w = np.exp(logs - logs.max())
        out.append(w / w.sum())
    return out


def log_m_points(
    theta0: np.ndarray, nl: np.ndarray, nr: np.ndarray, nu: np.ndarray
) -> np.ndarray:
    """Matrix of log M(theta0_j, nu_h, counts_j) over nodes j and finite nu_h."""
    theta0 = np.asarray(theta0, dtype=float)[:, None]
    nl = np.asarray(nl, dtype=float)[:, None]
    nr = np.asarray(nr, dtype=float)[:, None]
    nu = np.asarray(nu, dtype=float)[None, :]
    a = theta0 * nu
    b = (1.0 - theta0) * nu
    out = (
        _gammaln(a + nl)
        + _gammaln(b + nr)
        + _gammaln(nu)
        - _gammaln(nu + nl + nr)
        - _gammaln(a)
        - _gammaln(b)
    )
    out[(nl + nr)[:, 0] == 0] = 0.0
    return out
