"""Command-line entry points.

Every RunConfig key is exposed 1:1 as a ``--key`` flag on the subcommands
that take a config; flags override values from ``--config <file>`` (a JSON
object with the same keys; unknown keys are rejected).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from . import bundle as bundle_mod
from . import rundir
from .core import ConfigError, RunConfig, config_schema
from .initialize import init_signatures
from .model import train
from .preprocess import filter_series, normalize, segment_series


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    doc = config_schema()
    for f in dataclasses.fields(RunConfig):
        arg = "--" + f.name.replace("_", "-")
        if f.type in ("int", "int | None"):
            parser.add_argument(arg, type=int, default=None, help=doc[f.name])
        elif f.type == "float":
            parser.add_argument(arg, type=float, default=None, help=doc[f.name])
        elif f.type == "bool":
            parser.add_argument(arg, type=lambda s: s.lower() in ("1", "true", "yes"),
                                default=None, metavar="BOOL", help=doc[f.name])
        else:
            parser.add_argument(arg, type=str, default=None, help=doc[f.name])


def _config_from_args(args) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(json.loads(Path(args.config).read_text()))
    for f in dataclasses.fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    return RunConfig.from_dict(values)


def _read_raw_series(path) -> tuple[list[float], list[np.ndarray]]:
    """Lenient reader for raw (possibly ragged) label+values lines."""
    labels, rows = [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            tokens = line.replace(",", " ").replace("\t", " ").split()
            labels.append(float(tokens[0]))
            rows.append(np.asarray([float(t) for t in tokens[1:]], dtype=np.float64))
    return labels, rows


def cmd_preprocess(args) -> int:
    labels, rows = _read_raw_series(args.input)
    kept, report = filter_series(rows, args.min_len)
    # filter_series hands back the surviving arrays unchanged and in order,
    # so identity re-pairs them with their labels
    kept_ids = {id(a) for a in kept}
    pairs = [(label, row) for label, row in zip(labels, rows) if id(row) in kept_ids]
    out_rows = []
    for label, row in pairs:
        if args.seg_len:
            segments = segment_series(row, args.seg_len, args.seg_step or args.seg_len)
        else:
            segments = [row]
        for seg in segments:
            out_rows.append((label, normalize(seg)))
    if not out_rows:
        print("preprocess: no series survived filtering/segmentation", file=sys.stderr)
        return 1
    lengths = {len(r) for _, r in out_rows}
    if len(lengths) != 1:
        print(f"preprocess: mixed output lengths {sorted(lengths)}; "
              "pass --seg-len to segment to a uniform length", file=sys.stderr)
        return 1
    with open(args.output, "w") as fh:
        for label, row in out_rows:
            fh.write("\t".join([_fmt_num(label)] + [repr(float(v)) for v in row]) + "\n")
    report_payload = {"kept": report.kept, "dropped_short": report.dropped_short,
                      "dropped_flat": report.dropped_flat,
                      "dropped_nonfinite": report.dropped_nonfinite,
                      "output_samples": len(out_rows)}
    text = json.dumps(report_payload, indent=2)
    if args.report:
        Path(args.report).write_text(text + "\n")
    print(text)
    return 0


def _fmt_num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(x)


def cmd_init(args) -> int:
    config = _config_from_args(args)
    dataset, _ = bench_mod.load_ucr_tsv(args.input)
    sigs = init_signatures(dataset, config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "init_signatures.json").write_text(
        json.dumps(rundir.signatures_to_json(sigs), indent=2) + "\n")
    (out / "config.json").write_text(
        json.dumps(config.resolve(dataset.length).to_dict(), indent=2) + "\n")
    print(f"wrote {len(sigs)} initial signatures to {out}/init_signatures.json")
    return 0


def cmd_train(args) -> int:
    config = _config_from_args(args)
    dataset, label_meta = bench_mod.load_ucr_tsv(args.input)
    config = config.resolve(dataset.length)
    fit, holdout = bench_mod._carve_validation(dataset, config)
    sigs = init_signatures(fit, config) if config.variant in ("SP-T", "JT") else []
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "init_signatures.json").write_text(
        json.dumps(rundir.signatures_to_json(sigs), indent=2) + "\n")
    model = train(fit, holdout, sigs, config)
    id_to_pos = {s.id: pos for pos, s in enumerate(dataset.samples)}
    train_indices = [id_to_pos[s.id] for s in fit.samples]
    rundir.save_run(out, model, dataset=dataset, train_indices=train_indices)
    (out / "labels.json").write_text(json.dumps(label_meta, indent=2) + "\n")
    epochs_run = len(model.history["train_loss"])
    print(f"trained {config.variant} for {epochs_run} epochs "
          f"(best epoch {model.best_epoch}); run saved to {out}")
    return 0


def cmd_bench(args) -> int:
    config = _config_from_args(args)
    seeds = [int(s) for s in args.seeds.split(",")]
    variants = [v.strip() for v in args.variants.split(",")]
    results = bench_mod.bench_datasets(args.datasets, variants, config, seeds)
    table = bench_mod.results_table(results)
    if args.out:
        Path(args.out).write_text(table)
    print(table, end="")
    return 0


def cmd_sweep(args) -> int:
    config = _config_from_args(args)
    if args.epochs is None:
        config = dataclasses.replace(config, epochs=3)  # small fixed budget
    n_list = [int(v) for v in args.n.split(",")]
    m_list = [int(v) for v in args.m.split(",")]
    rows = bench_mod.scalability_sweep(n_list, m_list, config)
    table = bench_mod.sweep_table(rows)
    if args.out:
        Path(args.out).write_text(table)
    print(table, end="")
    return 0


def cmd_export(args) -> int:
    run_path = Path(args.run)
    model = rundir.load_run(run_path)
    dataset, train_indices = rundir.load_dataset(run_path)
    train_dataset = dataset.subset(train_indices) if train_indices else None
    class_names = ("0", "1")
    labels_path = run_path / "labels.json"
    if labels_path.exists():
        mapping = json.loads(labels_path.read_text()).get("raw_to_mapped", {})
        inverse = {v: k for k, v in mapping.items()}
        class_names = (inverse.get(0, "0"), inverse.get(1, "1"))
    bundle_mod.export_bundle(model, dataset, args.out, train_dataset=train_dataset,
                             name=args.name, class_names=class_names)
    print(f"wrote bundle to {args.out}")
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    bundle = bundle_mod.load_bundle(args.bundle)
    serve(bundle, port=args.port, host=args.host, ui_dir=args.ui)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="siglearn",
        description="Learnable time-series signatures: preprocess, initialize, "
                    "train, benchmark, export, serve.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="filter, segment, and normalize raw series")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--min-len", type=int, required=True)
    p.add_argument("--seg-len", type=int, default=None)
    p.add_argument("--seg-step", type=int, default=None)
    p.add_argument("--report", default=None, help="write the filter report JSON here")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("init", help="extract and rank initial signatures")
    p.add_argument("--input", required=True, help="processed TRAIN file (UCR format)")
    p.add_argument("--out", required=True, help="run directory")
    p.add_argument("--config", default=None)
    _add_config_flags(p)
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("train", help="jointly train signatures and the classifier")
    p.add_argument("--input", required=True, help="processed TRAIN file (UCR format)")
    p.add_argument("--out", required=True, help="run directory")
    p.add_argument("--config", default=None)
    _add_config_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("bench", help="accuracy table over UCR-format datasets")
    p.add_argument("--datasets", required=True, help="directory of *_TRAIN/*_TEST files")
    p.add_argument("--variants", default="JT", help="comma list from VT,S-FE,SP-T,JT")
    p.add_argument("--seeds", default="0,1,2,3,4")
    p.add_argument("--out", default=None, help="write the CSV table here")
    p.add_argument("--config", default=None)
    _add_config_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep", help="fixed-epoch runtime sweep on synthetic data")
    p.add_argument("--n", default="200,400,800")
    p.add_argument("--m", default="100")
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    _add_config_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export", help="build the exploration bundle from a run")
    p.add_argument("--run", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--name", default="dataset")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="serve a bundle (and optionally the UI) over HTTP")
    p.add_argument("--bundle", required=True)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", default=None, help="directory of built UI assets")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, bench_mod.UcrParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
