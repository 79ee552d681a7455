"""Simulation scenarios on [0, 1] used by the benchmark harness.

Five true densities exercising different estimation difficulties:

1. narrow spikes on a flat background
2. disjoint features at two very different scales
3. like 2, with the narrow feature inside the wide one
4. piecewise smooth with sharp jumps
5. globally smooth and unimodal

Each scenario is a finite mixture of uniform and (possibly rescaled) Beta
components; `scenario_pdf` evaluates the true density and
`scenario_sample` draws an i.i.d. sample deterministically from a seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betaln as _betaln

from .partition import Domain

__all__ = ["DOMAIN", "SCENARIOS", "Scenario", "scenario_pdf", "scenario_sample"]

DOMAIN = Domain(0.0, 1.0)


@dataclass(frozen=True)
class _Uniform:
    lo: float
    hi: float

    def pdf(self, xs: np.ndarray) -> np.ndarray:
        inside = (xs >= self.lo) & ((xs < self.hi) | ((self.hi == 1.0) & (xs == 1.0)))
        return np.where(inside, 1.0 / (self.hi - self.lo), 0.0)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.lo + (self.hi - self.lo) * rng.random(n)


@dataclass(frozen=True)
class _Beta:
    a: float
    b: float
    lo: float = 0.0
    hi: float = 1.0

    def pdf(self, xs: np.ndarray) -> np.ndarray:
        u = (xs - self.lo) / (self.hi - self.lo)
        inside = (u > 0.0) & (u < 1.0)
        u_safe = np.where(inside, u, 0.5)
        log_pdf = (
            (self.a - 1.0) * np.log(u_safe)
            + (self.b - 1.0) * np.log(1.0 - u_safe)
            - _betaln(self.a, self.b)
        )
        return np.where(inside, np.exp(log_pdf) / (self.hi - self.lo), 0.0)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        g1 = rng.standard_gamma(self.a, n)
        g2 = rng.standard_gamma(self.b, n)
        return self.lo + (self.hi - self.lo) * g1 / (g1 + g2)


@dataclass(frozen=True)
class Scenario:
    """Mixture density: components with matching weights."""

    scenario_id: int
    name: str
    weights: tuple[float, ...]
    components: tuple

    def pdf(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        out = np.zeros(xs.shape)
        for w, comp in zip(self.weights, self.components):
            out += w * comp.pdf(xs)
        return out

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        cum = np.cumsum(self.weights)
        picks = np.searchsorted(cum, rng.random(n) * cum[-1], side="right")
        picks = np.minimum(picks, len(self.weights) - 1)
        out = np.empty(n)
        for j, comp in enumerate(self.components):
            mask = picks == j
            cnt = int(mask.sum())
            if cnt:
                out[mask] = comp.sample(rng, cnt)
        return out


SCENARIOS: dict[int, Scenario] = {
    1: Scenario(
        1,
        "spikes on a flat background",
        (0.2, 0.2, 0.2, 0.2, 0.2),
        (
            _Uniform(0.0, 1.0),
            _Uniform(0.2, 0.205),
            _Uniform(0.4, 0.405),
            _Uniform(0.6, 0.605),
            _Uniform(0.8, 0.805),
        ),
    ),
    2: Scenario(
        2,
        "disjoint features at two scales",
        (0.1, 0.3, 0.4, 0.2),
        (
            _Uniform(0.0, 1.0),
            _Uniform(0.25, 0.5),
            _Beta(2.0, 2.0, 0.25, 0.5),
            _Beta(6000.0, 4000.0),
        ),
    ),
    3: Scenario(
        3,
        "nested features at two scales",
        (0.1, 0.3, 0.4, 0.2),
        (
            _Uniform(0.0, 1.0),
            _Uniform(0.25, 0.5),
            _Beta(2.0, 2.0, 0.25, 0.5),
            _Beta(4000.0, 6000.0),
        ),
    ),
    4: Scenario(
        4,
        "smooth pieces with sharp jumps",
        (0.1, 0.25, 0.05, 0.55, 0.05),
        (
            _Beta(2.0, 2.0),
            _Uniform(0.3, 0.55),
            _Beta(2.0, 2.0, 0.3, 0.55),
            _Uniform(0.55, 0.8),
            _Beta(2.0, 2.0, 0.55, 0.8),
        ),
    ),
    5: Scenario(
        5,
        "smooth unimodal",
        (1.0,),
        (_Beta(10.0, 20.0),),
    ),
}


def _get(scenario_id: int) -> Scenario:
    sc = SCENARIOS.get(int(scenario_id))
    if sc is None:
        raise ValueError(
            f"unknown scenario {scenario_id!r}; choose one of {sorted(SCENARIOS)}"
        )
    return sc


def scenario_pdf(scenario_id: int, xs) -> np.ndarray:
    """True density of the scenario at the given points."""
    return _get(scenario_id).pdf(xs)


def scenario_sample(scenario_id: int, n: int, seed: int) -> np.ndarray:
    """Deterministic i.i.d. sample of size n from the scenario."""
    if n < 0:
        raise ValueError(f"sample size must be >= 0, got {n}")
    rng = np.random.default_rng(seed)
    return _get(scenario_id).sample(rng, n)
