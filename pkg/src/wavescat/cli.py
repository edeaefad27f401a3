"""Batch command line: synth | features | chambers | joint | report.

Exit codes: 0 success, 2 usage or configuration error, 3 data error,
4 numerical failure. Every option can also come from a ``key=value``
config file (``--config``); explicit flags win. All outputs embed the
resolved configuration in a ``# wavescat-config:`` header line and are
written atomically (temp file + rename), so re-running a command with
the same configuration reproduces every output byte for byte.
"""

from __future__ import annotations

import argparse
import glob
import os
import sys

import numpy as np

from .classify import (Dataset, TrainerConfig, confusion_from_counts_csv,
                       confusion_stats, confusion_to_csv, run_kfold,
                       train_tree, tree_complexity)
from .coherence import SmoothingSpec, coherence, phase_overlay, overlay_to_csv
from .cwt import cwt, next_pow2, scalogram_magnitude, scalogram_to_csv
from .errors import DataError, NumericalError
from .model import Channel, Group, Phase
from .netpbm import to_gray, write_pgm
from .pipeline import (BankConfig, chamber_dataset, cwt_table,
                       joint_dataset, load_sessions, scatter_table,
                       table_to_csv, wcoh_table)
from .scattering import ScatteringParams
from .synth import SynthSpec, generate_cohort

BUILTIN = {
    "delta": 0.8, "session_len": 60.0, "fs": 1000.0,
    "rats_saline": 7, "rats_morphine": 6, "rats_food": 6,
    "window": 1.0, "hop": 0.5,
    "fmin": 1.0, "fmax": 100.0, "voices": 10, "gamma": 3.0, "tb": 60.0,
    "c_t": 2.0, "c_s": 0.6,
    "t": 0.5, "q1": 8, "q2": 1,
    "k": 10, "model": "dt", "source": "all", "group": "all", "phase": "post",
    "max_depth": 12, "min_leaf": 1, "hidden": "64", "epochs": 300,
    "learning_rate": 0.1,
    "c": 1.0, "tol": 1e-3, "max_iter": 300,
    "threshold": 0.5, "channel": "hip",
}


class Config:
    """Flag > config-file > built-in resolution with a reproducible dump."""

    def __init__(self, args, file_values, command):
        self.args = args
        self.file_values = file_values
        self.command = command
        self.resolved = {}

    def get(self, key, cast=str):
        flag = getattr(self.args, key, None)
        if flag is not None:
            value = flag
        elif key in self.file_values:
            value = cast(self.file_values[key])
        else:
            value = BUILTIN[key]
        self.resolved[key] = value
        return value

    def line(self) -> str:
        pairs = [f"cmd={self.command}"]
        pairs += [f"{k}={v}" for k, v in sorted(self.resolved.items())]
        return " ".join(pairs)


def _load_config_file(path):
    values = {}
    try:
        with open(path) as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValueError(f"bad config line {line!r}")
                key, val = line.split("=", 1)
                values[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise SystemExit(f"cannot read config file: {exc}") from exc
    return values


def _atomic(path, writer):
    tmp = str(path) + ".tmp"
    writer(tmp)
    os.replace(tmp, path)


def _bundle_paths(data_dir):
    paths = sorted(glob.glob(os.path.join(data_dir, "*.wscat")))
    if not paths:
        raise DataError(f"no .wscat bundles under {data_dir}")
    return paths


def _bank_config(cfg: Config) -> BankConfig:
    return BankConfig(gamma=cfg.get("gamma", float),
                      time_bandwidth=cfg.get("tb", float),
                      voices_per_octave=cfg.get("voices", int),
                      fmin=cfg.get("fmin", float),
                      fmax=cfg.get("fmax", float))


def _scatter_params(cfg: Config, fs: float) -> ScatteringParams:
    return ScatteringParams(t=cfg.get("t", float), q1=cfg.get("q1", int),
                            q2=cfg.get("q2", int), fs=fs,
                            fmax=cfg.get("fmax", float),
                            gamma=cfg.get("gamma", float))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_synth(cfg: Config):
    spec = SynthSpec(
        rats_saline=cfg.get("rats_saline", int),
        rats_morphine=cfg.get("rats_morphine", int),
        rats_food=cfg.get("rats_food", int),
        session_len=cfg.get("session_len", float),
        fs=cfg.get("fs", float),
        delta=cfg.get("delta", float),
        seed=cfg.get("seed", int),
    )
    out = cfg.args.out
    paths = generate_cohort(spec, out)
    print(f"wrote {len(paths)} bundles to {out}")
    return 0


def cmd_features(cfg: Config):
    kind = cfg.args.kind
    sessions = load_sessions(_bundle_paths(cfg.args.data))
    window, hop = cfg.get("window", float), cfg.get("hop", float)
    os.makedirs(cfg.args.out, exist_ok=True)
    if kind == "cwt":
        channel = Channel.HIP if cfg.get("channel") == "hip" else Channel.NAC
        table = cwt_table(sessions, channel, window, hop, _bank_config(cfg))
        name = f"features_cwt_{cfg.resolved['channel']}.csv"
    elif kind == "wcoh":
        spec = SmoothingSpec(c_t=cfg.get("c_t", float),
                             c_s=cfg.get("c_s", float))
        table = wcoh_table(sessions, window, hop, _bank_config(cfg), spec)
        name = "features_wcoh.csv"
    else:
        params = _scatter_params(cfg, sessions[0].fs)
        table = scatter_table(sessions, window, hop, params)
        name = "features_scatter.csv"
    path = os.path.join(cfg.args.out, name)
    _atomic(path, lambda p: table_to_csv(table, p, cfg.line()))
    print(f"wrote {table.matrix.shape[0]} feature rows to {path}")
    return 0


def _chambers_trainer(cfg: Config) -> TrainerConfig:
    model = cfg.get("model")
    if model == "dt":
        return TrainerConfig(kind="dt", max_depth=cfg.get("max_depth", int),
                             min_leaf=cfg.get("min_leaf", int))
    hidden = tuple(int(h) for h in str(cfg.get("hidden")).split(",") if h)
    return TrainerConfig(kind="mlp", hidden=hidden,
                         epochs=cfg.get("epochs", int),
                         learning_rate=cfg.get("learning_rate", float))


def cmd_chambers(cfg: Config):
    sessions = load_sessions(_bundle_paths(cfg.args.data))
    window, hop = cfg.get("window", float), cfg.get("hop", float)
    bank_cfg = _bank_config(cfg)
    seed, k = cfg.get("seed", int), cfg.get("k", int)
    trainer = _chambers_trainer(cfg)
    phase_tok = cfg.get("phase")
    phases = {"pre": (Phase.PRE,), "post": (Phase.POST,),
              "both": (Phase.PRE, Phase.POST)}[phase_tok]
    source_tok = cfg.get("source")
    sources = ["hip", "nac", "wcoh"] if source_tok == "all" else [source_tok]
    group_tok = cfg.get("group")
    groups = ([Group.FOOD, Group.MORPHINE, Group.SALINE]
              if group_tok == "all" else [Group(group_tok)])
    per_rat = bool(cfg.args.per_rat)
    cfg.resolved["per_rat"] = per_rat

    os.makedirs(cfg.args.out, exist_ok=True)
    accuracy = {}
    complexity = {}
    for source in sources:
        if source == "hip":
            table = cwt_table(sessions, Channel.HIP, window, hop, bank_cfg)
        elif source == "nac":
            table = cwt_table(sessions, Channel.NAC, window, hop, bank_cfg)
        else:
            table = wcoh_table(sessions, window, hop, bank_cfg,
                               SmoothingSpec(c_t=cfg.get("c_t", float),
                                             c_s=cfg.get("c_s", float)))
        for group in groups:
            data = chamber_dataset(table, group, phases)
            rats = None
            if per_rat:
                keep = [i for i, s in enumerate(table.segments)
                        if s.group is group and s.phase in phases]
                rats = [table.segments[i].rat_id for i in keep]
            matrix = run_kfold(data, k, trainer, seed, groups=rats)
            stats = confusion_stats(matrix)
            accuracy[(source, group.value)] = stats["micro"]
            out = os.path.join(cfg.args.out,
                               f"confusion_{source}_{group.value}.csv")
            _atomic(out, lambda p, m=matrix: confusion_to_csv(m, p, cfg.line()))
            if trainer.kind == "dt":
                grade = tree_complexity(train_tree(data, trainer.max_depth,
                                                   trainer.min_leaf, seed))
                complexity[(source, group.value)] = grade
            print(f"chambers {source}/{group.value}: "
                  f"micro={stats['micro']:.2f}% macro={stats['macro']:.2f}%")

    table_path = os.path.join(cfg.args.out, "chambers_accuracy.csv")

    def _write_table(p):
        with open(p, "w", newline="\n") as fh:
            fh.write(f"# wavescat-config: {cfg.line()}\n")
            fh.write(",".join(["source"] + [g.value for g in groups]) + "\n")
            for source in sources:
                row = [source] + [repr(accuracy[(source, g.value)])
                                  for g in groups]
                fh.write(",".join(row) + "\n")

    _atomic(table_path, _write_table)
    if complexity:
        cpath = os.path.join(cfg.args.out, "chambers_complexity.csv")

        def _write_complexity(p):
            with open(p, "w", newline="\n") as fh:
                fh.write(f"# wavescat-config: {cfg.line()}\n")
                fh.write("source,group,nodes,leaves,depth,grade\n")
                for (source, group), c in sorted(complexity.items()):
                    fh.write(f"{source},{group},{c['nodes']},{c['leaves']},"
                             f"{c['depth']},{c['grade']}\n")

        _atomic(cpath, _write_complexity)
    return 0


def cmd_joint(cfg: Config):
    os.makedirs(cfg.args.out, exist_ok=True)
    if cfg.args.stats_from:
        matrix = confusion_from_counts_csv(cfg.args.stats_from)
        stats = confusion_stats(matrix)
        out = os.path.join(cfg.args.out, "joint_stats.csv")
        _atomic(out, lambda p: confusion_to_csv(matrix, p, cfg.line()))
        print(f"macro_accuracy={stats['macro']!r} "
              f"micro_accuracy={stats['micro']!r}")
        return 0
    sessions = load_sessions(_bundle_paths(cfg.args.data))
    window, hop = cfg.get("window", float), cfg.get("hop", float)
    params = _scatter_params(cfg, sessions[0].fs)
    seed, k = cfg.get("seed", int), cfg.get("k", int)
    table = scatter_table(sessions, window, hop, params)
    data = joint_dataset(table)
    if cfg.args.shuffle_labels:
        cfg.resolved["shuffle_labels"] = True
        rng = np.random.default_rng(seed)
        data = Dataset(data.features, rng.permutation(data.labels),
                       data.class_names)
    trainer = TrainerConfig(kind="svm", c=cfg.get("c", float),
                            tol=cfg.get("tol", float),
                            max_iter=cfg.get("max_iter", int))
    matrix = run_kfold(data, k, trainer, seed)
    stats = confusion_stats(matrix)
    out = os.path.join(cfg.args.out, "joint_confusion.csv")
    _atomic(out, lambda p: confusion_to_csv(matrix, p, cfg.line()))
    print(f"joint 12-way: macro={stats['macro']:.4f}% "
          f"micro={stats['micro']:.4f}% ({data.n_samples} segments)")
    return 0


def cmd_report(cfg: Config):
    sessions = load_sessions(_bundle_paths(cfg.args.data))
    if cfg.args.rat:
        sessions = [s for s in sessions if s.rat_id == cfg.args.rat]
    phase_tok = cfg.get("phase")
    if phase_tok in ("pre", "post"):
        sessions = [s for s in sessions if s.phase is Phase(phase_tok)]
    if not sessions:
        raise DataError("no session matches the rat/phase selection")
    session = sessions[0]
    bank = _bank_config(cfg).build(next_pow2(session.hip.samples.size),
                                   session.fs)
    os.makedirs(cfg.args.out, exist_ok=True)
    stem = f"{session.rat_id}_{session.phase.value}"
    scal = {}
    for chan in (Channel.HIP, Channel.NAC):
        scal[chan] = cwt(session.channel(chan), bank)
        mag = scalogram_magnitude(scal[chan])
        base = os.path.join(cfg.args.out, f"{stem}_{chan.value}_scalogram")
        _atomic(base + ".csv",
                lambda p, m=mag, s=scal[chan]: scalogram_to_csv(
                    m, s.scale_axis, s.time_axis, p, cfg.line()))
        _atomic(base + ".pgm",
                lambda p, m=mag: write_pgm(p, to_gray(m),
                                           f"wavescat-config: {cfg.line()}"))
    spec = SmoothingSpec(c_t=cfg.get("c_t", float), c_s=cfg.get("c_s", float))
    cmap = coherence(scal[Channel.HIP], scal[Channel.NAC], spec)
    base = os.path.join(cfg.args.out, f"{stem}_wcoh")
    _atomic(base + ".csv",
            lambda p: scalogram_to_csv(cmap.coherence, cmap.scale_axis,
                                       cmap.time_axis, p, cfg.line()))
    phase_mat = np.where(np.isfinite(cmap.phase), cmap.phase, 0.0)
    _atomic(base + "_phase.csv",
            lambda p: scalogram_to_csv(phase_mat, cmap.scale_axis,
                                       cmap.time_axis, p, cfg.line()))
    _atomic(base + ".pgm",
            lambda p: write_pgm(p, to_gray(cmap.coherence, 0.0, 1.0),
                                f"wavescat-config: {cfg.line()}"))
    records = phase_overlay(cmap, cfg.get("threshold", float))
    _atomic(base + "_overlay.csv",
            lambda p: overlay_to_csv(records, p, cfg.line()))
    print(f"report for {stem}: {len(records)} overlay records")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(p, *, seed_required):
    p.add_argument("--config", help="key=value config file; flags override")
    p.add_argument("--seed", type=int, required=seed_required,
                   help="random seed (mandatory for randomized commands)")


def _add_bank_flags(p):
    p.add_argument("--fmin", type=float, help="lowest center frequency [1 Hz]")
    p.add_argument("--fmax", type=float, help="highest center frequency [100 Hz]")
    p.add_argument("--voices", type=int, help="voices per octave [10]")
    p.add_argument("--gamma", type=float, help="Morse symmetry [3]")
    p.add_argument("--tb", type=float, help="Morse time-bandwidth product [60]")


def _add_window_flags(p):
    p.add_argument("--window", type=float, help="segment length, s [1.0]")
    p.add_argument("--hop", type=float, help="segment hop, s [0.5]")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wavescat",
        description="Two-channel LFP wavelet features and classification. "
                    "Bracketed values in the help are the built-in defaults.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic cohort")
    _add_common(p, seed_required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--delta", type=float, help="separability in [0,1] [0.8]")
    p.add_argument("--session-len", dest="session_len", type=float,
                   help="session length, s [60]")
    p.add_argument("--fs", type=float, help="sampling rate, Hz [1000]")
    p.add_argument("--rats-saline", dest="rats_saline", type=int,
                   help="saline cohort size [7]")
    p.add_argument("--rats-morphine", dest="rats_morphine", type=int,
                   help="morphine cohort size [6]")
    p.add_argument("--rats-food", dest="rats_food", type=int,
                   help="food cohort size [6]")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("features", help="export per-segment features")
    p.add_argument("kind", choices=["cwt", "wcoh", "scatter"])
    _add_common(p, seed_required=False)
    p.add_argument("--data", required=True, help="directory of .wscat bundles")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--channel", choices=["hip", "nac"],
                   help="channel for kind=cwt [hip]")
    _add_window_flags(p)
    _add_bank_flags(p)
    p.add_argument("--c-t", dest="c_t", type=float,
                   help="time smoothing, cycles [2.0]")
    p.add_argument("--c-s", dest="c_s", type=float,
                   help="scale smoothing, octaves [0.6]")
    p.add_argument("--t", type=float, help="scattering invariance, s [0.5]")
    p.add_argument("--q1", type=int, help="layer-1 voices per octave [8]")
    p.add_argument("--q2", type=int, help="layer-2 voices per octave [1]")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("chambers",
                       help="3-way chamber classification per group")
    _add_common(p, seed_required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--model", choices=["dt", "mlp"], help="classifier [dt]")
    p.add_argument("--source", choices=["hip", "nac", "wcoh", "all"],
                   help="feature source [all]")
    p.add_argument("--group", choices=["food", "morphine", "saline", "all"],
                   help="treatment group [all]")
    p.add_argument("--phase", choices=["pre", "post", "both"],
                   help="test phase used [post]")
    p.add_argument("--k", type=int, help="folds [10]")
    p.add_argument("--per-rat", action="store_true",
                   help="hold out whole rats instead of stratifying")
    _add_window_flags(p)
    _add_bank_flags(p)
    p.add_argument("--c-t", dest="c_t", type=float,
                   help="time smoothing, cycles [2.0]")
    p.add_argument("--c-s", dest="c_s", type=float,
                   help="scale smoothing, octaves [0.6]")
    p.add_argument("--max-depth", dest="max_depth", type=int,
                   help="DT depth limit [12]")
    p.add_argument("--min-leaf", dest="min_leaf", type=int,
                   help="DT minimum leaf size [1]")
    p.add_argument("--hidden", help="MLP hidden sizes, comma separated [64]")
    p.add_argument("--epochs", type=int, help="MLP epochs [300]")
    p.add_argument("--learning-rate", dest="learning_rate", type=float,
                   help="MLP learning rate [0.1]")
    p.set_defaults(func=cmd_chambers)

    p = sub.add_parser("joint",
                       help="12-way scattering + one-vs-all SVM pipeline")
    _add_common(p, seed_required=True)
    p.add_argument("--data", help="directory of .wscat bundles")
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int, help="folds [10]")
    p.add_argument("--shuffle-labels", action="store_true",
                   help="seeded label permutation (chance-level control)")
    p.add_argument("--stats-from", dest="stats_from",
                   help="skip the pipeline; recompute stats from a counts CSV")
    _add_window_flags(p)
    p.add_argument("--t", type=float, help="scattering invariance, s [0.5]")
    p.add_argument("--q1", type=int, help="layer-1 voices per octave [8]")
    p.add_argument("--q2", type=int, help="layer-2 voices per octave [1]")
    p.add_argument("--fmax", type=float, help="scattering band top [100 Hz]")
    p.add_argument("--gamma", type=float, help="Morse symmetry [3]")
    p.add_argument("--c", type=float, help="SVM penalty C [1.0]")
    p.add_argument("--tol", type=float, help="SVM duality-gap tolerance [1e-4]")
    p.add_argument("--max-iter", dest="max_iter", type=int,
                   help="SVM epoch limit [1000]")
    p.set_defaults(func=cmd_joint)

    p = sub.add_parser("report", help="plot-ready scalogram/coherence exports")
    _add_common(p, seed_required=False)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--rat", help="rat id, e.g. rat14 [first in sort order]")
    p.add_argument("--phase", choices=["pre", "post"],
                   help="session phase [post]")
    p.add_argument("--threshold", type=float,
                   help="coherence threshold for the phase overlay [0.5]")
    _add_bank_flags(p)
    p.add_argument("--c-t", dest="c_t", type=float,
                   help="time smoothing, cycles [2.0]")
    p.add_argument("--c-s", dest="c_s", type=float,
                   help="scale smoothing, octaves [0.6]")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    file_values = _load_config_file(args.config) if args.config else {}
    cfg = Config(args, file_values, args.command)
    if getattr(args, "seed", None) is not None:
        cfg.resolved["seed"] = args.seed
    try:
        return args.func(cfg)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
