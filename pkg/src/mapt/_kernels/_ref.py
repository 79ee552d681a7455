"""Numpy reference implementation of the hot kernels."""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln as _gammaln


def log_m_table(theta0, nl, nr, nu_flat, offsets):
    theta0 = np.ascontiguousarray(theta0, dtype=float)
    nl = np.ascontiguousarray(nl, dtype=float)
    nr = np.ascontiguousarray(nr, dtype=float)
    nu_flat = np.ascontiguousarray(nu_flat, dtype=float)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    n = theta0.shape[0]
    n_comp = offsets.shape[0] - 1
    tot = nl + nr
    out = np.empty((n, n_comp))
    for c in range(n_comp):
        s, e = int(offsets[c]), int(offsets[c + 1])
        if s == e:
            out[:, c] = nl * np.log(theta0) + nr * np.log(1.0 - theta0)
            continue
        nu = nu_flat[s:e][None, :]
        a = theta0[:, None] * nu
        b = (1.0 - theta0[:, None]) * nu
        lm = (
            _gammaln(a + nl[:, None])
            + _gammaln(b + nr[:, None])
            + _gammaln(nu)
            - _gammaln(nu + tot[:, None])
            - _gammaln(a)
            - _gammaln(b)
        )
        hi = lm.max(axis=1)
        out[:, c] = hi + np.log(np.exp(lm - hi[:, None]).sum(axis=1)) - np.log(e - s)
    out[tot == 0] = 0.0
    return out


def forward_combine(log_rows, payload):
    log_rows = np.ascontiguousarray(log_rows, dtype=float)
    payload = np.ascontiguousarray(payload, dtype=float)
    # (n, R, I) intermediate; R and I are small (number of shrinkage states)
    x = payload[:, None, :] + log_rows[None, :, :]
    hi = x.max(axis=2)
    safe = np.where(np.isfinite(hi), hi, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = safe + np.log(np.exp(x - safe[:, :, None]).sum(axis=2))
    return np.where(np.isfinite(hi), out, -np.inf)
