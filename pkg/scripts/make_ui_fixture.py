#!/usr/bin/env python3
"""Generate the small deterministic bundle the frontend tests run against.

Usage: python scripts/make_ui_fixture.py [frontend/test/fixture/bundle.json]
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from siglearn.bundle import export_bundle
from siglearn.core import RunConfig
from siglearn.initialize import init_signatures
from siglearn.model import train
from siglearn.synthetic import motif_dataset


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixture"
        / "bundle.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    train_set, _ = motif_dataset(24, 40, seed=11)
    cfg = RunConfig(k=5, batch_size=16, learning_rate=0.008, epochs=12, patience=12,
                    softmin_alpha=20.0, window_step=5, d_model=16, n_heads=2,
                    n_layers=1, ffn_dim=32, seed=0, default_threshold=0.6)
    sigs = init_signatures(train_set, cfg.resolve(train_set.length))
    model = train(train_set, None, sigs, cfg)
    bundle = export_bundle(model, train_set, out, name="ui-fixture")
    print(f"wrote fixture bundle ({bundle['meta']['n_samples']} samples, "
          f"{bundle['meta']['n_signatures']} signatures) to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
