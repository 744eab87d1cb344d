"""Tests for experiment configs, presets, CSV artifacts and the runner."""

import json

import numpy as np
import pytest

from swiptifc import (
    CSV_COLUMNS,
    ExperimentConfig,
    InvalidInputError,
    PRESETS,
    REBoundary,
    REPoint,
    apply_overrides,
    draw_channel_set,
    emit_plot_data,
    preset_variants,
    re_sweep,
    read_plot_data,
    run_experiment,
)


def _tiny_cfg(tmp_path, **kw):
    base = dict(
        m_t=2,
        m_r=2,
        alpha=((1.0, 0.8), (0.8, 1.0)),
        p=2.0,
        strategies=("meb",),
        e_grid_points=4,
        seeds=(1,),
        output_dir=str(tmp_path / "out"),
    )
    base.update(kw)
    return ExperimentConfig(**base)


class TestExperimentConfig:
    def test_roundtrip(self, tmp_path):
        cfg = _tiny_cfg(tmp_path, strategies=("meb", "mlb"), seeds=(1, 2, 3))
        clone = ExperimentConfig.from_dict(cfg.to_dict())
        assert clone == cfg
        assert json.loads(json.dumps(cfg.to_dict())) == cfg.to_dict()

    def test_rejects_unknown_strategy(self, tmp_path):
        with pytest.raises(InvalidInputError):
            _tiny_cfg(tmp_path, strategies=("mrt",))

    def test_rejects_bad_grid(self, tmp_path):
        with pytest.raises(InvalidInputError):
            _tiny_cfg(tmp_path, e_grid_points=1)

    def test_rejects_bad_power(self, tmp_path):
        with pytest.raises(InvalidInputError):
            _tiny_cfg(tmp_path, p=-1.0)

    def test_rejects_unknown_keys(self, tmp_path):
        d = _tiny_cfg(tmp_path).to_dict()
        d["snr"] = 10.0
        with pytest.raises(InvalidInputError):
            ExperimentConfig.from_dict(d)

    def test_rejects_empty_seeds(self, tmp_path):
        with pytest.raises(InvalidInputError):
            _tiny_cfg(tmp_path, seeds=())


class TestPresets:
    def test_all_variants_parse(self):
        for name in PRESETS:
            for label, cfg_dict in preset_variants(name):
                assert isinstance(label, str) and label
                cfg = ExperimentConfig.from_dict(cfg_dict)
                assert cfg.figure_preset == name

    def test_variants_are_copies(self):
        a = preset_variants("fig2")
        a[0][1]["p"] = -99.0
        b = preset_variants("fig2")
        assert b[0][1]["p"] != -99.0

    def test_unknown_preset(self):
        with pytest.raises(InvalidInputError):
            preset_variants("fig99")

    def test_expected_shapes(self):
        names = set(PRESETS)
        assert {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "table1"} == names
        fig8 = dict(preset_variants("fig8"))
        assert set(fig8) == {"alpha07", "alpha10"}
        assert fig8["alpha07"]["scheduling"] is True
        table1 = dict(preset_variants("table1"))
        assert set(table1) == {"m2", "m4"}
        assert tuple(table1["m2"]["modes"]) == ("id_id", "eh_eh")

    def test_apply_overrides(self):
        _, d = preset_variants("fig2")[0]
        out = apply_overrides(d, ["e_grid_points=6", 'seeds=[1]', 'output_dir="x"'])
        assert out["e_grid_points"] == 6
        assert out["seeds"] == [1]
        assert out["output_dir"] == "x"
        # unknown keys surface when the config is built
        with pytest.raises(InvalidInputError):
            ExperimentConfig.from_dict(apply_overrides(d, ["snr=3"]))


class TestPlotData:
    def _boundary(self):
        cs = draw_channel_set(2, 2, np.array([[1.0, 0.8], [0.8, 1.0]]), seed=1)
        return re_sweep(cs, "meb", 2.0, n_points=4)

    def test_emit_and_read_roundtrip(self, tmp_path):
        bd = self._boundary()
        path = tmp_path / "curve.csv"
        emit_plot_data(bd, path, label="meb", seed=1)
        text = path.read_text().splitlines()
        assert text[0] == ",".join(CSV_COLUMNS)
        assert len(text) == 1 + len(bd.points)
        rows = read_plot_data(path)
        assert len(rows) == len(bd.points)
        for row, pt in zip(rows, bd.points):
            assert row["strategy"] == "meb"
            assert row["seed"] == 1
            assert row["e_bar"] == pytest.approx(pt.e_bar, rel=1e-10)
            assert row["rate_bits"] == pytest.approx(pt.rate_bits, rel=1e-10)
            assert row["energy"] == pytest.approx(pt.energy, rel=1e-10)

    def test_empty_dual_fields(self, tmp_path):
        pts = [
            REPoint(e_bar=0.0, rate_bits=1.0, energy=0.5, p1=0.0, branch="NO_TX", iterations=2),
            REPoint(
                e_bar=1.0,
                rate_bits=0.5,
                energy=1.0,
                p1=2.0,
                branch="DUAL",
                iterations=4,
                lam=0.25,
                mu=1.5,
            ),
        ]
        bd = REBoundary(points=pts, strategy="meb", channel_digest="d", e_max=1.0)
        path = tmp_path / "c.csv"
        emit_plot_data(bd, path, label="meb", seed=3)
        lines = path.read_text().splitlines()
        first = lines[1].split(",")
        assert first[CSV_COLUMNS.index("lambda")] == ""
        assert first[CSV_COLUMNS.index("mu")] == ""
        assert first[CSV_COLUMNS.index("p1")] == "0"
        rows = read_plot_data(path)
        assert rows[0]["lambda"] is None
        assert rows[1]["lambda"] == pytest.approx(0.25)
        assert rows[1]["mu"] == pytest.approx(1.5)
        assert rows[0]["iterations"] == 2

    def test_read_rejects_wrong_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(InvalidInputError):
            read_plot_data(path)


class TestRunExperiment:
    def test_artifacts_and_manifest(self, tmp_path):
        cfg = _tiny_cfg(tmp_path, strategies=("meb", "mlb"), seeds=(1, 2))
        manifest = run_experiment(cfg)
        out = tmp_path / "out"
        for label in ("meb", "mlb"):
            for seed in (1, 2):
                assert (out / f"curve_{label}_seed{seed}.csv").exists()
        assert (out / "aggregate.csv").exists()
        assert (out / "summary.json").exists()
        assert manifest["exit_code"] == 0
        assert set(manifest["channels"]) == {"1", "2"}
        with open(out / "summary.json") as fh:
            on_disk = json.load(fh)
        assert on_disk["config"] == cfg.to_dict()
        assert sorted(on_disk["artifacts"]) == on_disk["artifacts"]

    def test_reruns_are_byte_identical(self, tmp_path):
        cfg_a = _tiny_cfg(tmp_path, output_dir=str(tmp_path / "a"))
        cfg_b = _tiny_cfg(tmp_path, output_dir=str(tmp_path / "b"))
        run_experiment(cfg_a)
        run_experiment(cfg_b)
        a = (tmp_path / "a" / "curve_meb_seed1.csv").read_bytes()
        b = (tmp_path / "b" / "curve_meb_seed1.csv").read_bytes()
        assert a == b
        agg_a = (tmp_path / "a" / "aggregate.csv").read_bytes()
        agg_b = (tmp_path / "b" / "aggregate.csv").read_bytes()
        assert agg_a == agg_b

    def test_worker_count_does_not_change_output(self, tmp_path):
        cfg_a = _tiny_cfg(tmp_path, seeds=(1, 2), output_dir=str(tmp_path / "w1"))
        cfg_b = _tiny_cfg(tmp_path, seeds=(1, 2), output_dir=str(tmp_path / "w2"))
        run_experiment(cfg_a, workers=1)
        run_experiment(cfg_b, workers=2)
        for name in (
            "curve_meb_seed1.csv",
            "curve_meb_seed2.csv",
            "aggregate.csv",
        ):
            assert (tmp_path / "w1" / name).read_bytes() == (
                tmp_path / "w2" / name
            ).read_bytes()

    def test_time_sharing_curves(self, tmp_path):
        cfg = _tiny_cfg(tmp_path, time_sharing=True, ts_points=5)
        run_experiment(cfg)
        out = tmp_path / "out"
        assert (out / "curve_meb_ts_seed1.csv").exists()

    def test_scheduling_artifacts(self, tmp_path):
        cfg = _tiny_cfg(
            tmp_path,
            strategies=("sler",),
            scheduling=True,
            modes=("id_id", "eh_eh", "eh1_id2", "id1_eh2"),
        )
        run_experiment(cfg)
        out = tmp_path / "out"
        assert (out / "curve_sler_sched_seed1.csv").exists()
        assert (out / "curve_sler_swap_seed1.csv").exists()
        lines = (out / "modes.csv").read_text().splitlines()
        assert lines[0] == "mode,seed,m_t,m_r,rate_bits,energy"
        tags = {ln.split(",")[0] for ln in lines[1:]}
        assert {"id_id", "eh_eh"} <= tags

    def test_aggregate_matches_on_common_grid(self, tmp_path):
        # single seed: aggregate rows are just that seed's curve again
        cfg = _tiny_cfg(tmp_path)
        run_experiment(cfg)
        out = tmp_path / "out"
        rows = read_plot_data(out / "curve_meb_seed1.csv")
        agg = (out / "aggregate.csv").read_text().splitlines()
        assert agg[0] == "strategy,grid_index,e_norm,n_seeds,e_bar,rate_bits,energy"
        assert len(agg) == 1 + len(rows)
        first = agg[1].split(",")
        assert first[0] == "meb"
        assert int(first[3]) == 1
        assert float(first[5]) == pytest.approx(rows[0]["rate_bits"], rel=1e-10)

    def test_requires_output_dir(self, tmp_path):
        cfg = _tiny_cfg(tmp_path)
        d = cfg.to_dict()
        d["output_dir"] = None
        with pytest.raises(InvalidInputError):
            run_experiment(ExperimentConfig.from_dict(d))

    def test_accepts_plain_dict(self, tmp_path):
        manifest = run_experiment(_tiny_cfg(tmp_path).to_dict())
        assert manifest["exit_code"] == 0
