import json

import numpy as np
import pytest

from siglearn import rundir
from siglearn.bench import save_ucr_tsv
from siglearn.cli import main
from siglearn.core import RunConfig
from siglearn.initialize import init_signatures
from siglearn.model import train
from siglearn.synthetic import motif_dataset


SMALL_FLAGS = ["--k", "4", "--batch-size", "16", "--learning-rate", "0.008",
               "--epochs", "6", "--patience", "6", "--window-step", "5",
               "--d-model", "16", "--n-heads", "2", "--n-layers", "1",
               "--ffn-dim", "32", "--softmin-alpha", "20"]


@pytest.fixture()
def train_file(tmp_path):
    data, _ = motif_dataset(30, 40, seed=11)
    path = tmp_path / "toy_TRAIN.tsv"
    save_ucr_tsv(data, path)
    return path


class TestPreprocessCommand:
    def test_filter_segment_normalize(self, tmp_path, capsys):
        raw = tmp_path / "raw.txt"
        lines = ["0 " + " ".join(str(0.1 * i + j * 0.01) for i in range(30))
                 for j in range(4)]
        lines.append("1 " + " ".join(["5.0"] * 30))       # flat: dropped
        lines.append("1 1.0 2.0")                          # short: dropped
        lines += ["1 " + " ".join(str(np.sin(i / 3) + j) for i in range(30))
                  for j in range(4)]
        raw.write_text("\n".join(lines) + "\n")
        out = tmp_path / "processed.tsv"
        report = tmp_path / "report.json"
        rc = main(["preprocess", "--input", str(raw), "--output", str(out),
                   "--min-len", "10", "--seg-len", "20", "--seg-step", "10",
                   "--report", str(report)])
        assert rc == 0
        rep = json.loads(report.read_text())
        assert rep["dropped_flat"] == 1 and rep["dropped_short"] == 1
        assert rep["kept"] == 8
        rows = out.read_text().strip().splitlines()
        assert rep["output_samples"] == len(rows) == 8 * 2  # two segments each
        values = [list(map(float, r.split("\t")[1:])) for r in rows]
        assert all(len(v) == 20 for v in values)
        assert all(min(v) == 0.0 and max(v) == 1.0 for v in values)

    def test_mixed_lengths_without_segmentation_fails(self, tmp_path):
        raw = tmp_path / "raw.txt"
        raw.write_text("0 " + " ".join(["0.1", "0.5", "0.9"] * 4) + "\n"
                       "1 0.2 0.4 0.6 0.8\n")
        rc = main(["preprocess", "--input", str(raw), "--output",
                   str(tmp_path / "x.tsv"), "--min-len", "3"])
        assert rc == 1


class TestInitTrainExportCommands:
    def test_init_writes_signatures(self, train_file, tmp_path):
        out = tmp_path / "run"
        rc = main(["init", "--input", str(train_file), "--out", str(out)] + SMALL_FLAGS)
        assert rc == 0
        entries = json.loads((out / "init_signatures.json").read_text())
        assert len(entries) == 4
        cfg = RunConfig.from_file(out / "config.json")
        assert cfg.k == 4

    def test_train_export_pipeline(self, train_file, tmp_path):
        out = tmp_path / "run"
        rc = main(["train", "--input", str(train_file), "--out", str(out)] + SMALL_FLAGS)
        assert rc == 0
        for name in ("config.json", "meta.json", "params.npz", "signatures.json",
                     "history.json", "dataset.npz", "split.json"):
            assert (out / name).exists(), name
        bundle_path = tmp_path / "bundle.json"
        rc = main(["export", "--run", str(out), "--out", str(bundle_path),
                   "--name", "toy"])
        assert rc == 0
        bundle = json.loads(bundle_path.read_text())
        assert bundle["meta"]["name"] == "toy"
        assert bundle["meta"]["n_signatures"] == 4

    def test_flags_override_config_file(self, train_file, tmp_path):
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text(json.dumps({"k": 2, "epochs": 3, "patience": 3,
                                        "batch_size": 16, "window_step": 5,
                                        "d_model": 16, "n_heads": 2,
                                        "n_layers": 1, "ffn_dim": 32}))
        out = tmp_path / "run"
        rc = main(["init", "--input", str(train_file), "--out", str(out),
                   "--config", str(cfg_file), "--k", "3"])
        assert rc == 0
        assert RunConfig.from_file(out / "config.json").k == 3

    def test_unknown_config_key_fails_loudly(self, train_file, tmp_path, capsys):
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text('{"depht": 3}')
        rc = main(["init", "--input", str(train_file), "--out",
                   str(tmp_path / "run"), "--config", str(cfg_file)])
        assert rc == 2
        assert "unknown config keys" in capsys.readouterr().err


class TestRunDir:
    def test_save_load_roundtrip(self, tmp_path):
        data, _ = motif_dataset(20, 40, seed=11)
        cfg = RunConfig(k=3, batch_size=16, epochs=3, patience=3, window_step=5,
                        d_model=16, n_heads=2, n_layers=1, ffn_dim=32,
                        learning_rate=0.008).resolve(40)
        sigs = init_signatures(data, cfg)
        model = train(data, None, sigs, cfg)
        rundir.save_run(tmp_path / "run", model, dataset=data,
                        train_indices=list(range(data.n)))
        loaded = rundir.load_run(tmp_path / "run")
        assert loaded.config == model.config
        assert loaded.meta == model.meta
        assert loaded.best_epoch == model.best_epoch
        for name in model.params:
            np.testing.assert_array_equal(loaded.params[name], model.params[name])
        for a, b in zip(loaded.signatures, model.signatures):
            assert a.id == b.id and a.source == b.source
            np.testing.assert_array_equal(a.values, b.values)
        dataset, train_idx = rundir.load_dataset(tmp_path / "run")
        np.testing.assert_array_equal(dataset.values, data.values)
        assert train_idx == list(range(data.n))

    def test_version_mismatch_rejected(self, tmp_path):
        data, _ = motif_dataset(12, 40, seed=11)
        cfg = RunConfig(k=2, batch_size=8, epochs=1, patience=1, window_step=5,
                        d_model=8, n_heads=2, n_layers=1, ffn_dim=16).resolve(40)
        model = train(data, None, init_signatures(data, cfg), cfg)
        run = rundir.save_run(tmp_path / "run", model)
        meta = json.loads((run / "meta.json").read_text())
        meta["format_version"] = "0"
        (run / "meta.json").write_text(json.dumps(meta))
        with pytest.raises(ValueError, match="format"):
            rundir.load_run(run)
