"""Hot numeric kernels with two interchangeable backends.

The compiled extension (`mapt._kernels._core`, built from Cython) is used
when it imported successfully; otherwise the numpy reference
implementation in `_ref` takes over.  Setting the environment variable
MAPT_PURE_PYTHON to a non-empty value forces the numpy backend.

Both backends implement:

    log_m_table(theta0, nl, nr, nu_flat, offsets) -> (n, C) array
        Per-node, per-state log marginal likelihoods.  Component c owns
        the slice nu_flat[offsets[c]:offsets[c+1]] of finite precision
        values (equal-weight log-average); an empty slice denotes the
        point mass at infinite precision.

    forward_combine(log_rows, payload) -> (n, R) array
        out[j, r] = logsumexp_i(log_rows[r, i] + payload[j, i]).
"""

import os

from . import _ref

_impl = _ref
if not os.environ.get("MAPT_PURE_PYTHON"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        pass

BACKEND = "compiled" if _impl is not _ref else "python"

log_m_table = _impl.log_m_table
forward_combine = _impl.forward_combine

__all__ = ["BACKEND", "log_m_table", "forward_combine"]
