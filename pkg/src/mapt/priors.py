"""Prior configuration: base measure, shrinkage states, and state transitions.

The shrinkage-state chain has I ordered states.  States 1..I-1 partition
[L, U] on the log10 precision scale into equal intervals (each represented
by midpoint quadrature); state I is the point mass at infinite precision,
under which the density follows the base measure exactly on that subtree.
Transitions run down the tree and never decrease the state, so precision
(smoothness) only ever increases with depth.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .likelihood import StateComponent
from .partition import Domain, NodeId, node_interval

__all__ = [
    "BaseMeasure",
    "TransitionSpec",
    "HyperParams",
    "make_components",
    "make_transition",
    "theta0_for",
    "config_from_dict",
    "load_config",
    "DEFAULT_DEPTH",
    "DEFAULT_I",
    "DEFAULT_BETA",
    "DEFAULT_LOG10_NU_LO",
    "DEFAULT_LOG10_NU_HI",
    "DEFAULT_QUAD_POINTS",
]

DEFAULT_DEPTH = 12
DEFAULT_I = 6
DEFAULT_BETA = 0.7
DEFAULT_LOG10_NU_LO = -1.0
DEFAULT_LOG10_NU_HI = 4.0
DEFAULT_QUAD_POINTS = 10

_LN2 = math.log(2.0)


@dataclass(frozen=True, eq=False)
class BaseMeasure:
    """Centering distribution on the domain: uniform, or piecewise constant.

    A piecewise base is given by cell breakpoints spanning the domain and
    strictly positive cell masses (normalized internally).  Densities are
    constant within cells, so all node masses follow from the piecewise
    linear CDF.
    """

    kind: str = "uniform"
    breakpoints: np.ndarray | None = None
    masses: np.ndarray | None = None

    @classmethod
    def uniform(cls) -> "BaseMeasure":
        return cls("uniform", None, None)

    @classmethod
    def piecewise(cls, breakpoints: Sequence[float], masses: Sequence[float]) -> "BaseMeasure":
        bp = np.asarray(breakpoints, dtype=float)
        ms = np.asarray(masses, dtype=float)
        if bp.ndim != 1 or bp.size < 2 or np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be a strictly increasing 1-d sequence")
        if ms.shape != (bp.size - 1,):
            raise ValueError("need exactly one mass per cell")
        if np.any(ms <= 0) or not np.all(np.isfinite(ms)):
            raise ValueError("cell masses must be strictly positive and finite")
        return cls("piecewise", bp, ms / ms.sum())

    def check_domain(self, domain: Domain) -> None:
        if self.kind == "piecewise":
            if self.breakpoints[0] != domain.lo or self.breakpoints[-1] != domain.hi:
                raise ValueError(
                    "piecewise base must span the domain exactly: "
                    f"breakpoints cover [{self.breakpoints[0]}, {self.breakpoints[-1]}], "
                    f"domain is [{domain.lo}, {domain.hi}]"
                )

    def _cdf(self, x: np.ndarray) -> np.ndarray:
        cum = np.concatenate(([0.0], np.cumsum(self.masses)))
        cum /= cum[-1]
        return np.interp(x, self.breakpoints, cum)

    def log_density(self, xs, domain: Domain) -> np.ndarray:
        """log q0(x) for in-domain points."""
        xs = np.asarray(xs, dtype=float)
        if self.kind == "uniform":
            return np.full(xs.shape, -math.log(domain.width))
        cell = np.clip(
            np.searchsorted(self.breakpoints, xs, side="right") - 1,
            0,
            self.masses.size - 1,
        )
        dens = self.masses / np.diff(self.breakpoints)
        return np.log(dens[cell])

    def log_node_mass(self, level: int, ms, domain: Domain) -> np.ndarray:
        """log Q0(A) for the level-`level` nodes with indices `ms`."""
        ms = np.asarray(ms, dtype=np.int64)
        if self.kind == "uniform":
            return np.full(ms.shape, -level * _LN2)
        w = domain.width / (1 << level)
        lo = domain.lo + ms * w
        return np.log(self._cdf(lo + w) - self._cdf(lo))

    def theta0_of(self, level: int, ms, domain: Domain) -> np.ndarray:
        """Base-measure fraction of each node's mass in its left child."""
        ms = np.asarray(ms, dtype=np.int64)
        if self.kind == "uniform":
            return np.full(ms.shape, 0.5)
        w = domain.width / (1 << (level + 1))
        lo = domain.lo + ms * (2.0 * w)
        c0 = self._cdf(lo)
        c1 = self._cdf(lo + w)
        c2 = self._cdf(lo + 2.0 * w)
        left = c1 - c0
        right = c2 - c1
        tot = left + right
        if np.any(tot <= 0):
            raise ValueError(f"node with non-positive base mass at level {level}")
        return left / tot

    def to_dict(self) -> dict:
        if self.kind == "uniform":
            return {"kind": "uniform"}
        return {
            "kind": "piecewise",
            "breakpoints": self.breakpoints.tolist(),
            "masses": self.masses.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BaseMeasure":
        kind = d.get("kind", "uniform")
        if kind == "uniform":
            return cls.uniform()
        if kind == "piecewise":
            return cls.piecewise(d["breakpoints"], d["masses"])
        raise ValueError(f"unknown base measure kind {kind!r}")


def theta0_for(node: NodeId, base: BaseMeasure, domain: Domain) -> float:
    """Left-child mass fraction theta0(A) = Q0(A_left)/Q0(A) for one node."""
    return float(base.theta0_of(node.level, np.array([node.index]), domain)[0])


def make_components(
    n_states: int,
    log10_lo: float = DEFAULT_LOG10_NU_LO,
    log10_hi: float = DEFAULT_LOG10_NU_HI,
    n_quad: int = DEFAULT_QUAD_POINTS,
) -> list[StateComponent]:
    """Standard state layout: n_states - 1 equal log10-precision intervals plus {infinity}.

    Requires n_states >= 2 (the last state is always the infinite-precision
    point mass).
    """
    if n_states < 2:
        raise ValueError(f"standard layout needs at least 2 states, got {n_states}")
    if not log10_lo < log10_hi:
        raise ValueError(f"need log10_lo < log10_hi, got ({log10_lo}, {log10_hi})")
    edges = np.linspace(log10_lo, log10_hi, n_states)
    comps = [
        StateComponent.interval(edges[i], edges[i + 1], n_quad)
        for i in range(n_states - 1)
    ]
    comps.append(StateComponent.point_mass_infinity())
    return comps


@dataclass(frozen=True)
class TransitionSpec:
    """Downward state-transition law: uniform or exponential-decay kernel.

    The exponential kernel weights a move from state i to i' >= i by
    exp(-beta * (i' - i)); beta = 0 recovers the uniform kernel.
    """

    n_states: int
    beta: float = 0.0
    kernel: str = "exponential"

    def __post_init__(self):
        if self.n_states < 1:
            raise ValueError(f"need at least one state, got {self.n_states}")
        if self.kernel not in ("uniform", "exponential"):
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if self.kernel == "exponential" and (self.beta < 0 or not np.isfinite(self.beta)):
            raise ValueError(f"beta must be finite and non-negative, got {self.beta}")


def make_transition(spec: TransitionSpec) -> tuple[np.ndarray, np.ndarray]:
    """Initial state probabilities and the upper-triangular transition matrix.

    Row i holds P(child state = i' | parent state = i): zero for i' < i,
    proportional to exp(-beta*(i'-i)) otherwise, each row normalized.  The
    last state is absorbing.  Initial probabilities are uniform over all
    states.
    """
    n = spec.n_states
    beta = 0.0 if spec.kernel == "uniform" else float(spec.beta)
    init = np.full(n, 1.0 / n)
    trans = np.zeros((n, n))
    for i in range(n):
        w = np.exp(-beta * np.arange(n - i))
        trans[i, i:] = w / w.sum()
    return init, trans


def _as_level_components(
    components, max_depth: int
) -> tuple[tuple[StateComponent, ...], ...]:
    if components and isinstance(components[0], StateComponent):
        return tuple((tuple(components),) * max_depth)
    per_level = tuple(tuple(level) for level in components)
    if len(per_level) != max_depth:
        raise ValueError(
            f"need one component list per split level (0..{max_depth - 1}), "
            f"got {len(per_level)}"
        )
    return per_level


@dataclass(eq=False)
class HyperParams:
    """Full model configuration for one fit.

    `components_by_level[k]` lists the shrinkage states available to nodes
    at level k (every level must have the same number of states, matching
    the transition matrix).  Instances are immutable by convention; all
    derived arrays are cached.
    """

    domain: Domain
    max_depth: int
    components_by_level: tuple[tuple[StateComponent, ...], ...]
    init_probs: np.ndarray
    transition: np.ndarray
    base: BaseMeasure
    beta: float | None = None
    kernel: str = "exponential"
    log10_lo: float | None = None
    log10_hi: float | None = None
    n_quad: int | None = None
    _quad_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.domain = Domain(*self.domain).validate()
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")
        self.components_by_level = _as_level_components(
            self.components_by_level, self.max_depth
        )
        self.init_probs = np.asarray(self.init_probs, dtype=float)
        self.transition = np.asarray(self.transition, dtype=float)
        n = self.init_probs.size
        if self.transition.shape != (n, n):
            raise ValueError("transition matrix shape must match init_probs")
        for level, comps in enumerate(self.components_by_level):
            if len(comps) != n:
                raise ValueError(
                    f"level {level} has {len(comps)} components, expected {n}"
                )
        self.base.check_domain(self.domain)

    @property
    def n_states(self) -> int:
        return self.init_probs.size

    @classmethod
    def default(
        cls,
        domain,
        max_depth: int = DEFAULT_DEPTH,
        n_states: int = DEFAULT_I,
        beta: float = DEFAULT_BETA,
        log10_lo: float = DEFAULT_LOG10_NU_LO,
        log10_hi: float = DEFAULT_LOG10_NU_HI,
        n_quad: int = DEFAULT_QUAD_POINTS,
        base: BaseMeasure | None = None,
        kernel: str = "exponential",
    ) -> "HyperParams":
        """Standard configuration: shared state layout at every level."""
        comps = make_components(n_states, log10_lo, log10_hi, n_quad)
        init, trans = make_transition(TransitionSpec(n_states, beta, kernel))
        return cls(
            domain=Domain(*domain).validate(),
            max_depth=max_depth,
            components_by_level=comps,
            init_probs=init,
            transition=trans,
            base=base if base is not None else BaseMeasure.uniform(),
            beta=float(beta),
            kernel=kernel,
            log10_lo=float(log10_lo),
            log10_hi=float(log10_hi),
            n_quad=int(n_quad),
        )

    @classmethod
    def single_state(
        cls,
        domain,
        max_depth: int,
        nu_by_level: Callable[[int], float] | Sequence[float] | float,
        base: BaseMeasure | None = None,
    ) -> "HyperParams":
        """Degenerate one-state chain with a fixed finite precision per level.

        `nu_by_level` may be a constant, one value per split level, or a
        callable mapping split level (0-based) to a precision.  Intended
        for testing against models with non-random precision.
        """
        if callable(nu_by_level):
            nus = [float(nu_by_level(k)) for k in range(max_depth)]
        elif np.isscalar(nu_by_level):
            nus = [float(nu_by_level)] * max_depth
        else:
            nus = [float(v) for v in nu_by_level]
            if len(nus) != max_depth:
                raise ValueError(f"need one nu per split level, got {len(nus)}")
        comps = [(StateComponent.point(nu),) for nu in nus]
        return cls(
            domain=Domain(*domain).validate(),
            max_depth=max_depth,
            components_by_level=comps,
            init_probs=np.array([1.0]),
            transition=np.array([[1.0]]),
            base=base if base is not None else BaseMeasure.uniform(),
            beta=None,
        )

    def components_for(self, level: int) -> tuple[StateComponent, ...]:
        if not 0 <= level < self.max_depth:
            raise ValueError(f"split level must be in [0, {self.max_depth - 1}], got {level}")
        return self.components_by_level[level]

    def quad_for(self, level: int) -> tuple[np.ndarray, np.ndarray]:
        """(nu_flat, offsets) kernel layout for the level's components."""
        if level not in self._quad_cache:
            comps = self.components_for(level)
            offsets = [0]
            chunks = []
            for comp in comps:
                if comp.is_point_mass_at_infinity:
                    offsets.append(offsets[-1])
                else:
                    chunks.append(comp.quad_points)
                    offsets.append(offsets[-1] + comp.quad_points.size)
            nu_flat = np.concatenate(chunks) if chunks else np.empty(0)
            self._quad_cache[level] = (nu_flat, np.asarray(offsets, dtype=np.int64))
        return self._quad_cache[level]

    @property
    def log_init(self) -> np.ndarray:
        if "log_init" not in self._quad_cache:
            with np.errstate(divide="ignore"):
                self._quad_cache["log_init"] = np.log(self.init_probs)
        return self._quad_cache["log_init"]

    @property
    def log_trans(self) -> np.ndarray:
        if "log_trans" not in self._quad_cache:
            with np.errstate(divide="ignore"):
                self._quad_cache["log_trans"] = np.log(self.transition)
        return self._quad_cache["log_trans"]

    def theta0(self, node: NodeId) -> float:
        return theta0_for(node, self.base, self.domain)

    @property
    def is_standard_layout(self) -> bool:
        """True when built by `default` (hence serializable)."""
        return self.log10_lo is not None

    def config_dict(self) -> dict:
        if not self.is_standard_layout:
            raise ValueError("only standard-layout configurations can be serialized")
        return {
            "domain": {"lo": self.domain.lo, "hi": self.domain.hi},
            "depth": self.max_depth,
            "n_states": self.n_states,
            "beta": self.beta,
            "kernel": self.kernel,
            "log10_nu_lo": self.log10_lo,
            "log10_nu_hi": self.log10_hi,
            "n_quad": self.n_quad,
            "base": self.base.to_dict(),
        }


def config_from_dict(d: dict) -> HyperParams:
    """Build a standard configuration from config-file keys (see load_config)."""
    dom = d.get("domain")
    if dom is None:
        raise ValueError("config requires a 'domain' entry")
    if isinstance(dom, dict):
        domain = Domain(float(dom["lo"]), float(dom["hi"]))
    else:
        domain = Domain(float(dom[0]), float(dom[1]))
    return HyperParams.default(
        domain,
        max_depth=int(d.get("depth", DEFAULT_DEPTH)),
        n_states=int(d.get("n_states", DEFAULT_I)),
        beta=float(d.get("beta", DEFAULT_BETA)),
        log10_lo=float(d.get("log10_nu_lo", DEFAULT_LOG10_NU_LO)),
        log10_hi=float(d.get("log10_nu_hi", DEFAULT_LOG10_NU_HI)),
        n_quad=int(d.get("n_quad", DEFAULT_QUAD_POINTS)),
        base=BaseMeasure.from_dict(d.get("base", {"kind": "uniform"})),
        kernel=str(d.get("kernel", "exponential")),
    )


def load_config(path) -> tuple[HyperParams, int | None]:
    """Read a JSON config file; returns (hyperparams, seed or None)."""
    with open(path) as fh:
        d = json.load(fh)
    seed = d.get("seed")
    return config_from_dict(d), None if seed is None else int(seed)
