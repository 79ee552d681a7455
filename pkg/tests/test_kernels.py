"""Numeric kernels: both backends agree with each other and with references."""

import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.special import logsumexp

import mapt._kernels as kernels
from mapt._kernels import _ref
from mapt.likelihood import INFINITY, SplitCounts, StateComponent, log_M, log_M_component

try:
    from mapt._kernels import _core
except ImportError:
    _core = None

needs_compiled = pytest.mark.skipif(_core is None, reason="compiled backend missing")


def random_table_case(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 40))
    theta0 = rng.uniform(0.05, 0.95, n)
    nl = rng.integers(0, 30, n).astype(float)
    nr = rng.integers(0, 30, n).astype(float)
    sizes = [int(rng.integers(0, 5)) for _ in range(int(rng.integers(1, 6)))]
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.intp)
    nu_flat = 10.0 ** rng.uniform(-1, 4, int(offsets[-1]))
    return theta0, nl, nr, nu_flat, offsets


class TestBackendSelection:
    def test_backend_is_reported(self):
        assert kernels.BACKEND in ("compiled", "python")

    @needs_compiled
    def test_compiled_backend_active_by_default(self):
        if os.environ.get("MAPT_PURE_PYTHON"):
            pytest.skip("pure-python override active in this environment")
        assert kernels.BACKEND == "compiled"

    def test_env_var_forces_python_backend(self):
        code = "import mapt._kernels as k; print(k.BACKEND)"
        env = dict(os.environ, MAPT_PURE_PYTHON="1")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.stdout.strip() == "python"


class TestLogMTable:
    @pytest.mark.parametrize("seed", range(500, 512))
    def test_backends_agree(self, seed):
        if _core is None:
            pytest.skip("compiled backend missing")
        case = random_table_case(seed)
        a = _ref.log_m_table(*case)
        b = _core.log_m_table(*case)
        # the two lgamma implementations differ in their final ulps
        np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-10)

    def test_quadrature_column_matches_slow_reference(self):
        comp = StateComponent.interval(0.0, 2.0, 4)
        nu_flat = comp.quad_points
        offsets = np.array([0, 4], dtype=np.intp)
        theta0 = np.array([0.3, 0.5, 0.7])
        nl = np.array([5.0, 2.0, 0.0])
        nr = np.array([1.0, 2.0, 4.0])
        table = kernels.log_m_table(theta0, nl, nr, nu_flat, offsets)
        for i in range(3):
            want = log_M_component(
                theta0[i], comp, SplitCounts(int(nl[i]), int(nr[i]))
            )
            assert table[i, 0] == pytest.approx(want, rel=1e-13)

    def test_empty_slice_is_point_mass_at_infinity(self):
        offsets = np.array([0, 0], dtype=np.intp)
        theta0 = np.array([0.25, 0.6])
        nl = np.array([3.0, 0.0])
        nr = np.array([1.0, 0.0])
        table = kernels.log_m_table(theta0, nl, nr, np.empty(0), offsets)
        want0 = log_M(0.25, INFINITY, SplitCounts(3, 1))
        assert table[0, 0] == pytest.approx(want0, rel=1e-14)
        assert table[1, 0] == 0.0

    def test_empty_counts_give_log_one_everywhere(self):
        theta0 = np.array([0.4])
        z = np.array([0.0])
        nu_flat = np.array([1.0, 10.0])
        offsets = np.array([0, 2, 2], dtype=np.intp)
        table = kernels.log_m_table(theta0, z, z, nu_flat, offsets)
        np.testing.assert_array_equal(table, np.zeros((1, 2)))


class TestForwardCombine:
    @pytest.mark.parametrize("seed", range(600, 612))
    def test_backends_agree(self, seed):
        if _core is None:
            pytest.skip("compiled backend missing")
        rng = np.random.default_rng(seed)
        n, I = int(rng.integers(1, 30)), int(rng.integers(1, 8))
        log_rows = rng.normal(size=(I, I))
        log_rows[np.tril_indices(I, -1)] = -np.inf
        payload = rng.normal(size=(n, I))
        a = _ref.forward_combine(log_rows, payload)
        b = _core.forward_combine(log_rows, payload)
        np.testing.assert_allclose(a, b, rtol=1e-14, atol=1e-14)

    def test_matches_logsumexp(self):
        rng = np.random.default_rng(71)
        log_rows = rng.normal(size=(4, 4))
        payload = rng.normal(size=(6, 4))
        got = kernels.forward_combine(log_rows, payload)
        want = logsumexp(log_rows[None, :, :] + payload[:, None, :], axis=2)
        np.testing.assert_allclose(got, want, rtol=1e-14)

    def test_minus_infinity_rows_stay_clean(self):
        log_rows = np.array([[-np.inf, 0.0], [-np.inf, -np.inf]])
        payload = np.array([[0.5, -np.inf]])
        got = kernels.forward_combine(log_rows, payload)
        # row 0 reaches only state 1, which carries -inf payload
        assert got[0, 0] == -np.inf
        assert got[0, 1] == -np.inf
        assert not np.any(np.isnan(got))

    def test_single_state_reduces_to_addition(self):
        log_rows = np.array([[0.0]])
        payload = np.array([[1.5], [-2.0], [0.0]])
        np.testing.assert_array_equal(
            kernels.forward_combine(log_rows, payload), payload
        )
