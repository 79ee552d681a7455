"""Exact posterior inference on the partition tree.

Groups every node's split fraction with a latent shrinkage state; states
follow a Markov chain down the tree with non-decreasing (upper-triangular)
transitions.  Because the likelihood factorizes over nodes given the
states, a single bottom-up summation yields the exact marginal likelihood,
a matching top-down normalization gives exact posterior transition
matrices, and the predictive density at a point is a ratio of two marginal
likelihoods differing in one root-to-leaf branch.

No Monte Carlo steps are involved anywhere; all randomness is confined to
`sample_posterior`, which draws independent exact posterior samples.

The recursion bottoms out at nodes holding at most one observation (below
which the posterior reverts to the prior and all quantities are available
in closed form) and at the truncation depth, below which the predictive
follows the base measure within each leaf.
"""

from __future__ import annotations

import json
import math
from typing import NamedTuple

import numpy as np

from . import _kernels as kernels
from .likelihood import log_m_points
from .partition import ROOT, CountedTree, Domain, NodeId, _locate_many, build_tree
from .priors import BaseMeasure, HyperParams, config_from_dict

__all__ = [
    "ForwardTable",
    "PosteriorTree",
    "PosteriorDraw",
    "DensityEstimate",
    "fit",
    "forward",
    "backward",
    "sample_posterior",
    "ppd",
    "log_marginal",
]

FORMAT_NAME = "mapt-density-estimate"
FORMAT_VERSION = 1


class _LevelQuery(NamedTuple):
    """Vectorized per-node lookup results at one level."""

    n: np.ndarray          # counts (0 where absent)
    log_q0_sum: np.ndarray  # sum of log q0 over the node's points (0 where absent)
    scalar: np.ndarray     # closed-form log xi where the node is not core (0 where absent)
    is_core: np.ndarray    # bool
    core_pos: np.ndarray   # position within the level's core arrays (valid where is_core)


class _NodeArrays:
    """Flat per-level views of a counted tree plus base-measure constants.

    Depends only on (tree, base), so one instance serves every choice of
    state layout and transition law over the same data.
    """

    def __init__(
        self,
        tree: CountedTree,
        base: BaseMeasure,
        log_q0_sums: list[np.ndarray] | None = None,
    ):
        self.tree = tree
        self.base = base
        K = tree.max_depth
        domain = tree.domain
        self.K = K
        self.ms = tree._level_ms
        self.ns = tree._level_ns

        self.log_mass = [
            base.log_node_mass(k, self.ms[k], domain) for k in range(K + 1)
        ]
        if log_q0_sums is not None:
            self.S = log_q0_sums
        elif base.kind == "uniform":
            # canonical closed form; matches what reloading a model computes
            c = -math.log(domain.width)
            self.S = [self.ns[k] * c for k in range(K + 1)]
        else:
            if tree._sorted_data is None:
                raise ValueError(
                    "tree holds no raw data; per-node log-density sums are required"
                )
            pts = base.log_density(tree._sorted_data, domain)
            self.S = []
            for k in range(K + 1):
                if self.ms[k].size:
                    self.S.append(np.add.reduceat(pts, tree._level_starts[k][:-1]))
                else:
                    self.S.append(np.empty(0))

        # closed-form log xi for non-core nodes: n = 1 at any level, or the
        # truncation depth (both reduce to S - n * log Q0)
        self.scalar = [self.S[k] - self.ns[k] * self.log_mass[k] for k in range(K + 1)]

        self.core_ms: list[np.ndarray] = [
            self.ms[k][self.ns[k] >= 2] for k in range(K)
        ]
        self.core_nl: list[np.ndarray] = []
        self.core_nr: list[np.ndarray] = []
        self.core_theta0: list[np.ndarray] = []
        self._core_side: list[tuple] = []
        for k in range(K):
            cm = self.core_ms[k]
            ql = self.query(k + 1, 2 * cm)
            qr = self.query(k + 1, 2 * cm + 1)
            self.core_nl.append(ql.n.astype(float))
            self.core_nr.append(qr.n.astype(float))
            self.core_theta0.append(base.theta0_of(k, cm, domain))
            self._core_side.append((ql, qr))

    def query(self, level: int, q: np.ndarray) -> _LevelQuery:
        q = np.asarray(q, dtype=np.int64)
        ms, ns = self.ms[level], self.ns[level]
        pos = np.searchsorted(ms, q)
        safe = np.minimum(pos, max(len(ms) - 1, 0))
        found = (pos < len(ms)) & (ms[safe] == q) if len(ms) else np.zeros(q.shape, bool)
        n = np.where(found, ns[safe], 0) if len(ms) else np.zeros(q.shape, np.int64)
        S = np.where(found, self.S[level][safe], 0.0) if len(ms) else np.zeros(q.shape)
        sc = np.where(found, self.scalar[level][safe], 0.0) if len(ms) else np.zeros(q.shape)
        is_core = found & (n >= 2) & (level < self.K)
        if level < self.K and len(self.core_ms[level]):
            cpos = np.searchsorted(self.core_ms[level], q)
            cpos = np.minimum(cpos, len(self.core_ms[level]) - 1)
        else:
            cpos = np.zeros(q.shape, dtype=np.int64)
        return _LevelQuery(n, S, sc, is_core, cpos)

    @property
    def root_scalar(self) -> float:
        if self.ns[0].size == 0:
            return 0.0
        return float(self.scalar[0][0])


def _assemble_child(
    q: _LevelQuery, logxi_next: np.ndarray, n_states: int
) -> np.ndarray:
    """Per-state log xi of one child per core node: core row or scalar."""
    out = np.empty((q.n.size, n_states))
    out[:] = q.scalar[:, None]
    idx = np.flatnonzero(q.is_core)
    if idx.size:
        out[idx] = logxi_next[q.core_pos[idx]]
    return out


def _m_tables(na: _NodeArrays, hp: HyperParams) -> list[np.ndarray]:
    """Per-level log marginal-likelihood tables for all core nodes."""
    tabs = []
    for k in range(na.K):
        nu_flat, offsets = hp.quad_for(k)
        tabs.append(
            kernels.log_m_table(
                na.core_theta0[k], na.core_nl[k], na.core_nr[k], nu_flat, offsets
            )
        )
    return tabs


def _forward_given(
    na: _NodeArrays, hp: HyperParams, mtabs: list[np.ndarray] | None = None
) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
    """Bottom-up summation; returns (log marginal, per-level log xi, payloads)."""
    K, I = na.K, hp.n_states
    if mtabs is None:
        mtabs = _m_tables(na, hp)
    logxi: list[np.ndarray] = [np.empty((0, I))] * K
    payload: list[np.ndarray] = [np.empty((0, I))] * K
    log_marg = na.root_scalar
    for k in range(K - 1, -1, -1):
        if na.core_ms[k].size == 0:
            continue
        ql, qr = na._core_side[k]
        nxt = logxi[k + 1] if k + 1 < K else np.empty((0, I))
        pay = mtabs[k] + _assemble_child(ql, nxt, I) + _assemble_child(qr, nxt, I)
        payload[k] = pay
        if k == 0:
            log_marg = float(
                kernels.forward_combine(hp.log_init[None, :], pay)[0, 0]
            )
            logxi[0] = np.full((1, I), log_marg)
        else:
            logxi[k] = kernels.forward_combine(hp.log_trans, pay)
    return log_marg, logxi, payload


class ForwardTable:
    """Result of the bottom-up sweep: log xi values and the overall evidence.

    `log_xi(node)` returns the per-parent-state vector for any node at or
    above the truncation depth (closed-form values for nodes where the
    recursion bottomed out).  `frontier` is the set of nodes where that
    happened.
    """

    def __init__(self, tree, hp, na, log_marginal, logxi_levels, payload_levels):
        self.tree = tree
        self.hp = hp
        self._na = na
        self.log_marginal = log_marginal
        self._logxi = logxi_levels
        self._payload = payload_levels

    def log_xi(self, node: NodeId) -> np.ndarray:
        node = NodeId(*node)
        na = self._na
        if not 0 <= node.level <= na.K:
            raise ValueError(f"node {node!r} outside tree depth {na.K}")
        q = na.query(node.level, np.array([node.index]))
        if q.is_core[0]:
            return self._logxi[node.level][q.core_pos[0]].copy()
        return np.full(self.hp.n_states, q.scalar[0])

    @property
    def frontier(self) -> set[NodeId]:
        if not hasattr(self, "_frontier"):
            na = self._na
            out: set[NodeId] = set()
            if na.core_ms[0].size == 0:
                out.add(ROOT)
            for k in range(na.K):
                cm = na.core_ms[k]
                if cm.size == 0:
                    continue
                ql, qr = na._core_side[k]
                for child_ms, q in ((2 * cm, ql), (2 * cm + 1, qr)):
                    for m in child_ms[~q.is_core].tolist():
                        out.add(NodeId(k + 1, m))
            self._frontier = out
        return self._frontier

    def _ensure_payload(self) -> list[np.ndarray]:
        """Recompute per-node payload vectors when absent (reloaded models)."""
        if self._payload is None:
            na, hp, I = self._na, self.hp, self.hp.n_states
            mtabs = _m_tables(na, hp)
            payload = []
            for k in range(na.K):
                if na.core_ms[k].size == 0:
                    payload.append(np.empty((0, I)))
                    continue
                ql, qr = na._core_side[k]
                nxt = self._logxi[k + 1] if k + 1 < na.K else np.empty((0, I))
                payload.append(
                    mtabs[k] + _assemble_child(ql, nxt, I) + _assemble_child(qr, nxt, I)
                )
            self._payload = payload
        return self._payload


def forward(tree: CountedTree, hp: HyperParams) -> ForwardTable:
    """Run the bottom-up summation over shrinkage states.

    The returned table's root value is the log marginal likelihood of the
    data under the full model.
    """
    if Domain(*tree.domain) != Domain(*hp.domain):
        raise ValueError(
            f"tree domain {tuple(tree.domain)} != configured domain {tuple(hp.domain)}"
        )
    if tree.max_depth != hp.max_depth:
        raise ValueError(
            f"tree depth {tree.max_depth} != configured depth {hp.max_depth}"
        )
    na = _NodeArrays(tree, hp.base)
    log_marg, logxi, payload = _forward_given(na, hp)
    return ForwardTable(tree, hp, na, log_marg, logxi, payload)


class PosteriorTree:
    """Exact posterior law of the shrinkage states.

    `init` gives the root state probabilities; `trans` maps each node with
    a data-informed state (at least two observations, above the truncation
    depth) to its posterior transition matrix.  Every other node keeps the
    prior transitions, which `transition` returns for it.
    """

    def __init__(self, init: np.ndarray, trans: dict[NodeId, np.ndarray], hp: HyperParams):
        self.init = init
        self.trans = trans
        self.hp = hp

    def transition(self, node: NodeId) -> np.ndarray:
        node = NodeId(*node)
        if node.level == 0:
            raise ValueError("the root state is drawn from init, not a transition")
        got = self.trans.get(node)
        return got.copy() if got is not None else self.hp.transition.copy()


def backward(tree: CountedTree, hp: HyperParams, fwd: ForwardTable) -> PosteriorTree:
    """Convert a forward table into exact posterior transition matrices."""
    if fwd.tree is not tree or fwd.hp is not hp:
        raise ValueError("forward table was built from a different tree or config")
    na = fwd._na
    if na.core_ms[0].size == 0:
        return PosteriorTree(hp.init_probs.copy(), {}, hp)
    payload = fwd._ensure_payload()
    init_t = np.exp(hp.log_init + payload[0][0] - fwd.log_marginal)
    init_t /= init_t.sum()
    trans: dict[NodeId, np.ndarray] = {}
    log_trans = hp.log_trans
    for k in range(1, na.K):
        cm = na.core_ms[k]
        if cm.size == 0:
            break
        g = np.exp(
            log_trans[None, :, :]
            + payload[k][:, None, :]
            - fwd._logxi[k][:, :, None]
        )
        g /= g.sum(axis=2, keepdims=True)
        for j, m in enumerate(cm.tolist()):
            trans[NodeId(k, m)] = g[j]
    return PosteriorTree(init_t, trans, hp)


class PosteriorDraw(NamedTuple):
    """One exact joint posterior sample over the recursion's support.

    `states` maps each sampled node to its shrinkage state (0-based),
    `precisions` to the drawn precision (inf under the point-mass state or
    at the truncation depth), and `pacs` to the drawn left-mass fraction.
    """

    states: dict[NodeId, int]
    precisions: dict[NodeId, float]
    pacs: dict[NodeId, float]


class _DrawLevel(NamedTuple):
    level: int
    ids: np.ndarray
    parent_pos: np.ndarray
    trans_stack: np.ndarray   # (n, I, I) rows: posterior or prior transitions
    theta0: np.ndarray
    nl: np.ndarray
    nr: np.ndarray
    nu_table: np.ndarray | None   # (I, Hmax) per-state precisions, inf-padded
    weights: np.ndarray | None    # (n, I, Hmax) posterior quadrature weights


def _draw_levels(
    post: PosteriorTree, hp: HyperParams, tree: CountedTree, na: _NodeArrays
) -> list[_DrawLevel]:
    K, I = na.K, hp.n_states
    levels = []
    prev_ids = np.array([0], dtype=np.int64)
    for k in range(K + 1):
        if k == 0:
            ids = np.array([0], dtype=np.int64)
            parent_pos = np.zeros(1, dtype=np.int64)
            stack = np.broadcast_to(post.init, (1, I, I)).copy()  # row-independent
        else:
            parents = na.core_ms[k - 1]
            if parents.size == 0:
                break
            ids = np.sort(np.concatenate([2 * parents, 2 * parents + 1]))
            parent_pos = np.searchsorted(prev_ids, ids >> 1)
            stack = np.empty((ids.size, I, I))
            for j, m in enumerate(ids.tolist()):
                node = NodeId(k, m)
                got = post.trans.get(node)
                stack[j] = got if got is not None else hp.transition
        theta0 = na.base.theta0_of(k, ids, tree.domain)
        if k < K:
            ql = na.query(k + 1, 2 * ids)
            qr = na.query(k + 1, 2 * ids + 1)
            nl, nr = ql.n.astype(float), qr.n.astype(float)
            comps = hp.components_for(k)
            h_max = max(
                1 if c.is_point_mass_at_infinity else c.quad_points.size for c in comps
            )
            nu_table = np.full((I, h_max), np.inf)
            weights = np.zeros((ids.size, I, h_max))
            for i, comp in enumerate(comps):
                if comp.is_point_mass_at_infinity:
                    weights[:, i, 0] = 1.0
                    continue
                h = comp.quad_points.size
                nu_table[i, :h] = comp.quad_points
                lm = log_m_points(theta0, nl, nr, comp.quad_points)
                w = np.exp(lm - lm.max(axis=1, keepdims=True))
                weights[:, i, :h] = w / w.sum(axis=1, keepdims=True)
        else:
            nl = nr = np.zeros(ids.size)
            nu_table = None
            weights = None
        levels.append(_DrawLevel(k, ids, parent_pos, stack, theta0, nl, nr, nu_table, weights))
        prev_ids = ids
    return levels


def sample_posterior(
    post: PosteriorTree,
    hp: HyperParams,
    tree: CountedTree,
    seed: int,
    n_draws: int,
) -> list[PosteriorDraw]:
    """Draw independent joint posterior samples of (state, precision, fraction).

    Sampling covers the root and every child of a data-informed node; below
    that support the posterior equals the prior with the split fraction
    pinned to the base measure's, so no further randomness is needed.
    Deterministic given (model, seed, n_draws).
    """
    if n_draws < 0:
        raise ValueError(f"n_draws must be >= 0, got {n_draws}")
    na = _NodeArrays(tree, hp.base)
    levels = _draw_levels(post, hp, tree, na)
    rng = np.random.default_rng(seed)
    I = hp.n_states
    K = na.K
    draws = []
    for _ in range(n_draws):
        states: dict[NodeId, int] = {}
        precisions: dict[NodeId, float] = {}
        pacs: dict[NodeId, float] = {}
        prev_state = np.zeros(1, dtype=np.int64)
        for lv in levels:
            nk = lv.ids.size
            if lv.level == 0:
                probs = np.broadcast_to(post.init, (1, I))
            else:
                probs = lv.trans_stack[np.arange(nk), prev_state[lv.parent_pos]]
            cum = np.cumsum(probs, axis=1)
            u = rng.random(nk)
            state = np.minimum((cum <= u[:, None]).sum(axis=1), I - 1)
            if lv.level < K:
                wrows = lv.weights[np.arange(nk), state]
                cw = np.cumsum(wrows, axis=1)
                u2 = rng.random(nk)
                h = np.minimum((cw <= u2[:, None]).sum(axis=1), cw.shape[1] - 1)
                nus = lv.nu_table[state, h]
                finite = np.isfinite(nus)
                a = np.where(finite, lv.theta0 * nus + lv.nl, 1.0)
                b = np.where(finite, (1.0 - lv.theta0) * nus + lv.nr, 1.0)
                th = rng.beta(a, b)
                th = np.where(finite, th, lv.theta0)
            else:
                nus = np.full(nk, np.inf)
                th = lv.theta0
            for j in range(nk):
                node = NodeId(lv.level, int(lv.ids[j]))
                states[node] = int(state[j])
                precisions[node] = float(nus[j])
                pacs[node] = float(th[j])
            prev_state = state
        draws.append(PosteriorDraw(states, precisions, pacs))
    return draws


class DensityEstimate:
    """A fitted model: data counts, configuration, and the forward table.

    Provides the posterior predictive density (`ppd`, `ppd_many`), exact
    posterior access (`posterior`, `sample`), and JSON persistence
    (`save`/`load`) that reproduces predictive values exactly without the
    raw data.
    """

    def __init__(self, tree: CountedTree, hp: HyperParams, fwd: ForwardTable):
        self.tree = tree
        self.hp = hp
        self.fwd = fwd
        self._posterior: PosteriorTree | None = None

    @property
    def log_marginal(self) -> float:
        """Log marginal likelihood of the fitted data."""
        return self.fwd.log_marginal

    def posterior(self) -> PosteriorTree:
        if self._posterior is None:
            self._posterior = backward(self.tree, self.hp, self.fwd)
        return self._posterior

    def sample(self, seed: int, n_draws: int) -> list[PosteriorDraw]:
        return sample_posterior(self.posterior(), self.hp, self.tree, seed, n_draws)

    def ppd(self, x: float) -> float:
        """Posterior predictive density at one point."""
        return float(self.ppd_many(np.array([float(x)]))[0])

    def ppd_many(self, xs) -> np.ndarray:
        """Posterior predictive density at many points (vectorized).

        Points sharing a truncation-depth leaf share one branch update, so
        dense grids cost at most one update per leaf.
        """
        xs = np.asarray(xs, dtype=float).reshape(-1)
        dom = self.hp.domain
        if xs.size and (np.any(~np.isfinite(xs)) or np.any(xs < dom.lo) or np.any(xs > dom.hi)):
            bad = xs[~np.isfinite(xs) | (xs < dom.lo) | (xs > dom.hi)][0]
            raise ValueError(f"point {bad!r} lies outside domain [{dom.lo}, {dom.hi}]")
        if xs.size == 0:
            return np.empty(0)
        leaves = _locate_many(xs, self.tree.max_depth, dom)
        uniq, inv = np.unique(leaves, return_inverse=True)
        log_coef = self._ppd_coeff(uniq)
        log_q0 = self.hp.base.log_density(xs, dom)
        return np.exp(log_coef[inv] + log_q0 - self.log_marginal)

    def _ppd_coeff(self, leaves: np.ndarray) -> np.ndarray:
        """log of ppd(x) / (q0(x) * exp(log_marginal)) per unique leaf.

        Reruns the forward recursion along each leaf's branch with that
        leaf's count incremented, reusing the stored off-branch values.
        """
        hp, na = self.hp, self.fwd._na
        K, I = na.K, hp.n_states
        dom = hp.domain
        anc = [leaves >> (K - k) for k in range(K + 1)]
        q_leaf = na.query(K, leaves)
        cur = np.tile(
            (q_leaf.log_q0_sum - (q_leaf.n + 1) * na.base.log_node_mass(K, leaves, dom))[:, None],
            (1, I),
        )
        for k in range(K - 1, -1, -1):
            mk = anc[k]
            qk = na.query(k, mk)
            new = np.empty((leaves.size, I))
            new[:] = -na.base.log_node_mass(k, mk, dom)[:, None]
            act = np.flatnonzero(qk.n >= 1)
            if act.size == 0:
                cur = new
                continue
            ql = na.query(k + 1, 2 * mk)
            qr = na.query(k + 1, 2 * mk + 1)
            went_left = (anc[k + 1] & 1) == 0
            nl_u = (ql.n + went_left).astype(float)
            nr_u = (qr.n + ~went_left).astype(float)
            theta = na.base.theta0_of(k, mk[act], dom)
            nu_flat, offsets = hp.quad_for(k)
            m_up = kernels.log_m_table(theta, nl_u[act], nr_u[act], nu_flat, offsets)
            off_scalar = np.where(went_left, qr.scalar, ql.scalar)[act]
            off_is_core = np.where(went_left, qr.is_core, ql.is_core)[act]
            off_core_pos = np.where(went_left, qr.core_pos, ql.core_pos)[act]
            off = np.empty((act.size, I))
            off[:] = off_scalar[:, None]
            idx = np.flatnonzero(off_is_core)
            if idx.size:
                off[idx] = self.fwd._logxi[k + 1][off_core_pos[idx]]
            pay = m_up + cur[act] + off
            if k == 0:
                new[act] = kernels.forward_combine(hp.log_init[None, :], pay)
            else:
                new[act] = kernels.forward_combine(hp.log_trans, pay)
            cur = new
        return cur[:, 0]

    def to_dict(self) -> dict:
        """JSON-ready snapshot: config, counts, and the forward table."""
        cfg = self.hp.config_dict()
        counts = {
            f"{node.level},{node.index}": n
            for node, n in sorted(self.tree.counts.items())
            if n > 0
        }
        na = self.fwd._na
        log_xi = {}
        for k in range(na.K):
            for j, m in enumerate(na.core_ms[k].tolist()):
                log_xi[f"{k},{m}"] = self.fwd._logxi[k][j].tolist()
        out = {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "config": cfg,
            "n_total": self.tree.n_total,
            "counts": counts,
            "log_xi": log_xi,
            "log_marginal": self.log_marginal,
        }
        if self.hp.base.kind != "uniform":
            sums = {}
            for k in range(na.K + 1):
                for j, m in enumerate(na.ms[k].tolist()):
                    sums[f"{k},{m}"] = float(na.S[k][j])
            out["log_point_density_sums"] = sums
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "DensityEstimate":
        if d.get("format") != FORMAT_NAME:
            raise ValueError(f"not a {FORMAT_NAME} file")
        if d.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported format version {d.get('version')!r}")
        hp = config_from_dict(d["config"])
        counts = {}
        for key, n in d["counts"].items():
            k_str, m_str = key.split(",")
            counts[NodeId(int(k_str), int(m_str))] = int(n)
        tree = CountedTree._from_counts(hp.domain, hp.max_depth, counts)
        if tree.n_total != int(d["n_total"]):
            raise ValueError("stored n_total disagrees with stored counts")
        sums = None
        if "log_point_density_sums" in d:
            stored = d["log_point_density_sums"]
            sums = []
            for k in range(hp.max_depth + 1):
                sums.append(
                    np.array([stored[f"{k},{m}"] for m in tree._level_ms[k].tolist()])
                )
        na = _NodeArrays(tree, hp.base, sums)
        I = hp.n_states
        logxi = []
        for k in range(na.K):
            rows = np.empty((na.core_ms[k].size, I))
            for j, m in enumerate(na.core_ms[k].tolist()):
                key = f"{k},{m}"
                if key not in d["log_xi"]:
                    raise ValueError(f"stored table is missing node ({k},{m})")
                rows[j] = d["log_xi"][key]
            logxi.append(rows)
        fwd = ForwardTable(tree, hp, na, float(d["log_marginal"]), logxi, None)
        return cls(tree, hp, fwd)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path) -> "DensityEstimate":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def fit(data, hp: HyperParams) -> DensityEstimate:
    """Count the data on the partition and run the forward sweep."""
    tree = build_tree(data, hp.domain, hp.max_depth)
    return DensityEstimate(tree, hp, forward(tree, hp))


def ppd(est: DensityEstimate, x_star: float) -> float:
    """Posterior predictive density of a fitted model at one point."""
    return est.ppd(x_star)


def log_marginal(tree: CountedTree, hp: HyperParams) -> float:
    """Log marginal likelihood of counted data under a configuration."""
    return forward(tree, hp).log_marginal
