"""``dskm verify``: compare a coreset file against the stream it summarizes."""
import argparse

from dskm.cli_instance import EXIT_OK, cli
from dskm.core.errors import DomainError
from dskm.core.offline import verify_coreset
from dskm.utils.cli_options import add_run_options, run_config_from_args
from dskm.utils.stream_io import load_coreset, load_stream, replay


def configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--stream", required=True, help="stream file the coreset was built from")
    parser.add_argument("--coreset", required=True, help="coreset file")
    add_run_options(parser, families=True)


@cli.command(name="verify", description="measure the coreset's worst relative cost error", configure=configure)
def verify(args: argparse.Namespace) -> int:
    cfg = run_config_from_args(args)
    stream = load_stream(args.stream)
    d, _, coreset = load_coreset(args.coreset)
    if d != stream.d:
        raise DomainError(f"dimension mismatch: stream d={stream.d}, coreset d={d}")
    points = replay(stream.operations)
    report = verify_coreset(points, coreset, cfg.k, cfg.epsilon, cfg.families, seed=cfg.seed)

    print(report.model_dump_json())
    for family in report.families:
        print(f"{family.family:>14}  n={family.count:<4d} max={family.max_error:.6g}")
    print(f"{'overall':>14}  n={report.evaluated:<4d} max={report.max_error:.6g}  "
          f"{'PASS' if report.passed else 'EXCEEDS'} eps={report.epsilon}")
    return EXIT_OK
