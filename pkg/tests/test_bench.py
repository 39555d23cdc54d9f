import numpy as np
import pytest

from siglearn.bench import (
    BenchResult,
    UcrParseError,
    discover_ucr_dir,
    load_ucr_tsv,
    results_table,
    run_variant,
    save_ucr_tsv,
    scalability_sweep,
    sweep_table,
)
from siglearn.core import RunConfig
from siglearn.model import meta_from_config
from siglearn.synthetic import motif_dataset


class TestLoadUcr:
    def test_single_row_parse(self, tmp_path):
        path = tmp_path / "toy_TRAIN.tsv"
        path.write_text("1\t0.1\t0.2\t0.3\n2\t0.3\t0.2\t0.1\n")
        data, meta = load_ucr_tsv(path)
        assert data.n == 2 and data.length == 3
        assert data.labels.tolist() == [0, 1]
        assert meta["raw_to_mapped"] == {"1": 0, "2": 1}
        # per-sample normalization applied
        assert data.values.min() == 0.0 and data.values.max() == 1.0

    def test_comma_separated(self, tmp_path):
        path = tmp_path / "toy.csv"
        path.write_text("-1,0.5,0.7,0.9\n1,0.9,0.7,0.5\n")
        data, _ = load_ucr_tsv(path)
        assert data.labels.tolist() == [0, 1]

    def test_mixed_separators_rejected_with_line(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("1\t0.1\t0.2\t0.3\n2,0.3,0.2,0.1\n")
        with pytest.raises(UcrParseError, match="line 2"):
            load_ucr_tsv(path)

    def test_ragged_rows_rejected_naming_both_lengths(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("1\t0.1\t0.2\t0.3\n2\t0.3\t0.2\t0.1\t0.5\n")
        with pytest.raises(UcrParseError, match="3"):
            load_ucr_tsv(path)

    def test_non_numeric_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("1\t0.1\tx\t0.3\n")
        with pytest.raises(UcrParseError, match="line 1"):
            load_ucr_tsv(path)

    def test_nonfinite_value_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("1\t0.1\tnan\t0.3\n2\t0.1\t0.2\t0.3\n")
        with pytest.raises(UcrParseError, match="line 1"):
            load_ucr_tsv(path)

    def test_three_classes_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("1\t0.1\t0.2\t0.3\n2\t0.1\t0.2\t0.3\n3\t0.1\t0.2\t0.3\n")
        with pytest.raises(UcrParseError):
            load_ucr_tsv(path)

    def test_roundtrip(self, tmp_path):
        data, _ = motif_dataset(8, 20, seed=4)
        path = tmp_path / "rt_TRAIN.tsv"
        save_ucr_tsv(data, path)
        # written values are already normalized; a second load must reproduce
        # them after its own (idempotent) normalization
        reloaded, _ = load_ucr_tsv(path)
        norm = np.stack([(v - v.min()) / (v.max() - v.min()) for v in data.values])
        np.testing.assert_array_equal(reloaded.values, norm)
        assert reloaded.labels.tolist() == data.labels.tolist()

    def test_discover_pairs(self, tmp_path):
        for name in ("A_TRAIN.tsv", "A_TEST.tsv", "B_TRAIN.tsv"):
            (tmp_path / name).write_text("1\t0.1\t0.2\t0.3\n2\t0.3\t0.2\t0.1\n")
        found = discover_ucr_dir(tmp_path)
        assert list(found) == ["A"]


class TestRunVariant:
    def _config(self):
        return RunConfig(k=6, batch_size=16, learning_rate=0.008, epochs=15,
                         patience=15, softmin_alpha=20.0, window_step=5,
                         d_model=16, n_heads=2, n_layers=1, ffn_dim=32)

    def test_feature_channel_shapes(self):
        cfg = self._config().resolve(60)
        assert meta_from_config(cfg, 60, k=6).n_features == 6 + cfg.r
        for variant, expected in (("VT", cfg.window_len), ("S-FE", cfg.r), ("SP-T", 6)):
            import dataclasses
            vcfg = dataclasses.replace(cfg, variant=variant)
            assert meta_from_config(vcfg, 60, k=6).n_features == expected

    def test_jt_separates_motif(self):
        train_set, _ = motif_dataset(40, 40, seed=11)
        test_set, _ = motif_dataset(30, 40, seed=12)
        res = run_variant(train_set, test_set, "JT", self._config(), seeds=[0])
        assert res.variant == "JT"
        assert res.mean_accuracy >= 0.9

    def test_unknown_variant_rejected(self):
        train_set, _ = motif_dataset(10, 30, seed=0)
        with pytest.raises(ValueError):
            run_variant(train_set, train_set, "JTX", self._config(), seeds=[0])

    def test_result_validates_accuracy_range(self):
        with pytest.raises(ValueError):
            BenchResult(dataset="x", variant="JT", seed_accuracies=(1.2,), seconds=0.0)

    def test_results_table_format(self):
        res = BenchResult(dataset="toy", variant="JT", seed_accuracies=(0.5, 1.0),
                          seconds=1.25)
        table = results_table([res])
        assert "dataset,variant,mean_accuracy" in table.splitlines()[0]
        assert "toy,JT,0.7500,0.5000;1.0000,1.25" in table


class TestSweep:
    def test_rows_and_table(self):
        cfg = RunConfig(k=3, batch_size=32, epochs=1, patience=1, window_step=10,
                        d_model=8, n_heads=2, n_layers=1, ffn_dim=16)
        rows = scalability_sweep([20, 40], [50], cfg, log=lambda *_: None)
        assert len(rows) == 2
        assert [r["n"] for r in rows] == [20, 40]
        table = sweep_table(rows)
        assert table.splitlines()[0] == "n,m,epochs,init_seconds,train_seconds"
        assert len(table.strip().splitlines()) == 3
