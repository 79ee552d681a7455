"""Benchmark harness: loss metric, experiment grid, result tables."""

import numpy as np
import pytest

from mapt.benchmark import (
    BenchResult,
    LossRecord,
    l1_loss,
    run_benchmark,
)
from mapt.scenarios import scenario_pdf


class TestL1Loss:
    def test_perfect_estimate_has_zero_loss(self):
        loss = l1_loss(lambda xs: scenario_pdf(5, xs), 5, n_cells=4096)
        assert loss == 0.0

    def test_uniform_estimate_of_smooth_truth(self):
        """Against Beta(10, 20), the flat density pays a known L1 price."""
        loss = l1_loss(lambda xs: np.ones_like(xs), 5, n_cells=1 << 16)
        direct = np.abs(scenario_pdf(5, (np.arange(1 << 16) + 0.5) / (1 << 16)) - 1.0)
        assert loss == pytest.approx(direct.mean(), rel=1e-12)
        # a concentrated Beta against the flat density: most mass misses,
        # so the distance sits well above 1 but below the ceiling of 2
        assert 1.0 < loss < 1.6

    def test_loss_scales_with_error(self):
        base = l1_loss(lambda xs: np.zeros_like(xs), 5, n_cells=8192)
        assert base == pytest.approx(1.0, rel=1e-3)

    def test_bad_cells_rejected(self):
        with pytest.raises(ValueError):
            l1_loss(lambda xs: xs, 1, n_cells=0)


def tiny_run(**kw):
    args = dict(
        scenario_ids=(5,),
        sizes=(60,),
        replicates=3,
        seed=7,
        workers=1,
        depth=6,
        n_cells=1 << 10,
        n_states_grid=(2, 3),
        beta_grid=(0.0, 1.0),
    )
    args.update(kw)
    return run_benchmark(**args)


class TestRunBenchmark:
    def test_grid_shape_and_record_count(self):
        res = tiny_run()
        assert len(res.records) == 3 * len(res.methods)
        assert res.scenario_ids == (5,)
        assert res.sizes == (60,)
        for r in res.records:
            assert r.l1_loss > 0.0
            assert np.isfinite(r.l1_loss)

    def test_deterministic_and_worker_independent(self):
        a = tiny_run(workers=1)
        b = tiny_run(workers=2)
        assert a.losses_csv() == b.losses_csv()
        assert a.summary_csv() == b.summary_csv()

    def test_seed_changes_results(self):
        a = tiny_run(seed=7)
        b = tiny_run(seed=8)
        assert a.losses_csv() != b.losses_csv()

    def test_method_subsets(self):
        only_pt = tiny_run(methods=("pt",))
        assert {r.method for r in only_pt.records} == {"pt"}
        with pytest.raises(ValueError):
            tiny_run(methods=("nonsense",))

    def test_bad_replicates_rejected(self):
        with pytest.raises(ValueError):
            tiny_run(replicates=0)

    def test_fit_quality_improves_with_sample_size(self):
        res = tiny_run(sizes=(40, 400), replicates=4)
        small = res.risk(5, 40, "markov_apt")
        large = res.risk(5, 400, "markov_apt")
        assert large < small


class TestResultTables:
    def _canned(self):
        records = [
            LossRecord(5, 60, 0, "markov_apt", 0.25),
            LossRecord(5, 60, 0, "pt", 0.30),
            LossRecord(5, 60, 1, "markov_apt", 0.20),
            LossRecord(5, 60, 1, "pt", 0.28),
        ]
        return BenchResult(records, (5,), (60,), 2, ("markov_apt", "pt"))

    def test_losses_and_risk(self):
        res = self._canned()
        np.testing.assert_array_equal(res.losses(5, 60, "pt"), [0.30, 0.28])
        assert res.risk(5, 60, "markov_apt") == pytest.approx(0.225)

    def test_pct_increase(self):
        res = self._canned()
        np.testing.assert_allclose(res.pct_increase(5, 60, "pt"), [20.0, 40.0])

    def test_losses_csv_layout(self):
        text = self._canned().losses_csv()
        lines = text.strip().split("\n")
        assert lines[0] == "scenario,n,replicate,method,l1_loss"
        assert lines[1] == "5,60,0,markov_apt,0.25"
        assert len(lines) == 5

    def test_summary_csv_layout(self):
        text = self._canned().summary_csv()
        lines = text.strip().split("\n")
        assert lines[0] == "scenario,n,method,mean_l1_risk,pct_increase_mean,pct_increase_sd"
        # reference method carries no percent columns
        assert lines[1].startswith("5,60,markov_apt,0.225")
        assert lines[1].endswith(",,")
        pt_cols = lines[2].split(",")
        assert pt_cols[2] == "pt"
        assert float(pt_cols[4]) == pytest.approx(30.0)
        assert float(pt_cols[5]) == pytest.approx(np.std([20.0, 40.0], ddof=1))
