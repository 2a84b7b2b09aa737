"""Command-line front end.

Subcommands: train, eval, encode, info. Exit codes: 0 success, 1 usage or
configuration error, 2 data error (unreadable or malformed inputs).
"""

import argparse
import os
import sys

from .codec import EncodingError, encode_with, write_spike_csv
from .config import ConfigError, parse_config, render_config, resolve
from .dataset import IdxFormatError, load_idx_images, load_idx_labels, pair
from .experiment import (
    FIRE_AND_CUT,
    epoch_csv,
    eval_csv,
    run_eval,
    run_train,
)
from .kernels import KernelError
from .metrics import EnergyModel, report
from .network import WeightFormatError, load_weights, save_weights

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="ptspike", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, images=False, labels=False, weights=False, out=False):
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override one config key (repeatable)")
        if images:
            p.add_argument("--images", required=True, help="IDX image file")
        if labels:
            p.add_argument("--labels", required=True, help="IDX label file")
        if weights:
            p.add_argument("--weights", required=True, help="weight file")
        if out:
            p.add_argument("--out", required=True, help=out)

    p_train = sub.add_parser("train", help="train a model and write weights plus run CSVs")
    common(p_train, images=True, labels=True, weights=True,
           out="directory for epochs.csv and metrics.csv")

    p_eval = sub.add_parser("eval", help="evaluate weights with the first-spike readout")
    common(p_eval, images=True, labels=True, weights=True,
           out="directory for eval.csv and metrics.csv")

    p_encode = sub.add_parser("encode", help="dump one image's spike train as CSV")
    common(p_encode, images=True, out="path of the spike CSV")
    p_encode.add_argument("index", nargs="?", type=int, default=0,
                          help="image index within the IDX file (default 0)")

    p_info = sub.add_parser("info", help="print derived structural parameters")
    common(p_info)
    return parser


def cmd_info(run) -> int:
    enc = run.enc
    print(render_config(run))
    print(
        f"{enc.neuron_count} inputs, {run.cfg.outputs} outputs, "
        f"{enc.neuron_count * run.cfg.outputs} synapses, T={enc.time_frame}ms"
    )
    return EXIT_OK


def cmd_encode(run, args) -> int:
    images = load_idx_images(args.images)
    if not 0 <= args.index < len(images):
        raise IdxFormatError(
            f"{args.images}: image index {args.index} outside [0, {len(images) - 1}]"
        )
    train = encode_with(images[args.index], run.enc)
    with open(args.out, "w", newline="\n") as fp:
        write_spike_csv(train, fp)
    print(f"wrote {train.n_spikes} spikes over {len(train)} neurons to {args.out}")
    return EXIT_OK


def cmd_train(run, args) -> int:
    data = pair(load_idx_images(args.images), load_idx_labels(args.labels))
    print(render_config(run))
    result = run_train(run.cfg, data)
    save_weights(result.weights, args.weights)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "epochs.csv"), "w", newline="\n") as fp:
        fp.write(epoch_csv(result.epoch_stats))
    model = EnergyModel(alpha=run.cfg.alpha)
    with open(os.path.join(args.out, "metrics.csv"), "w", newline="\n") as fp:
        fp.write(report(result.counters, model, fmt="csv", multipliers=run.cfg.multipliers))
    last = result.epoch_stats[-1] if result.epoch_stats else None
    if last is not None:
        print(f"trained {run.cfg.epochs} epochs on {last.images} images, "
              f"final train accuracy {last.train_acc:.4f}")
    print(f"weights written to {args.weights}")
    return EXIT_OK


def cmd_eval(run, args) -> int:
    weights = load_weights(args.weights)
    data = pair(load_idx_images(args.images), load_idx_labels(args.labels))
    print(render_config(run))
    result = run_eval(run.cfg, weights, data, mode=FIRE_AND_CUT)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "eval.csv"), "w", newline="\n") as fp:
        fp.write(eval_csv(result.rows))
    model = EnergyModel(alpha=run.cfg.alpha)
    with open(os.path.join(args.out, "metrics.csv"), "w", newline="\n") as fp:
        fp.write(report(result.counters, model, fmt="csv", multipliers=run.cfg.multipliers))
    print(f"accuracy {result.accuracy:.4f} on {len(result.rows)} images "
          f"(fallback rate {result.fallback_rate:.4f})")
    print(report(result.counters, model, fmt="text", multipliers=run.cfg.multipliers), end="")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config, overrides=args.set)
        run = resolve(cfg)
    except (ConfigError, EncodingError, KernelError, ValueError) as exc:
        print(f"ptspike: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "info":
            return cmd_info(run)
        if args.command == "encode":
            return cmd_encode(run, args)
        if args.command == "train":
            return cmd_train(run, args)
        if args.command == "eval":
            return cmd_eval(run, args)
    except (IdxFormatError, WeightFormatError, EncodingError, ValueError, OSError) as exc:
        print(f"ptspike: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
