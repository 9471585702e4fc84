"""``dskm generate``: write a synthetic stream file."""
import argparse
import sys

from dskm.cli_instance import EXIT_OK, cli
from dskm.utils.generators import GENERATOR_KINDS, churn_stream, clustered_stream, uniform_stream
from dskm.utils.stream_io import format_stream, save_stream


def configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("kind", choices=GENERATOR_KINDS, help="stream family")
    parser.add_argument("--d", type=int, default=2, help="dimension")
    parser.add_argument("--L", dest="delta_exp", type=int, default=6, help="grid exponent, side 2^L")
    parser.add_argument("--n", type=int, default=300, help="inserted points (clustered, uniform)")
    parser.add_argument("--blobs", type=int, default=3, help="Gaussian blobs (clustered)")
    parser.add_argument("--spread", type=float, default=None, help="blob standard deviation (clustered)")
    parser.add_argument("--deletions", type=float, default=0.0, help="fraction of inserted points deleted")
    parser.add_argument("--residual", type=int, default=0, help="planted net points (churn)")
    parser.add_argument("--waves", type=int, default=3, help="insert-then-delete waves (churn)")
    parser.add_argument("--wave-size", type=int, default=50, help="transient points per wave (churn)")
    parser.add_argument("--seed", type=int, default=0, help="generator seed")
    parser.add_argument("--out", default=None, help="stream file to write (default: stdout)")


@cli.command(name="generate", description="generate a synthetic dynamic stream", configure=configure)
def generate(args: argparse.Namespace) -> int:
    if args.kind == "clustered":
        stream = clustered_stream(
            args.d, args.delta_exp, args.n, blobs=args.blobs, deletion_fraction=args.deletions,
            spread=args.spread, seed=args.seed,
        )
    elif args.kind == "uniform":
        stream = uniform_stream(args.d, args.delta_exp, args.n, deletion_fraction=args.deletions, seed=args.seed)
    else:
        stream = churn_stream(
            args.d, args.delta_exp, args.residual, waves=args.waves, wave_size=args.wave_size, seed=args.seed
        )

    if args.out is None:
        sys.stdout.write(format_stream(stream))
    else:
        save_stream(args.out, stream)
        print(f"Wrote {len(stream.operations)} operations ({stream.inserts} +, {stream.deletes} -) to {args.out}")
    return EXIT_OK
