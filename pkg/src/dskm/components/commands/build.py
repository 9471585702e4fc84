"""``dskm build``: one pass over a stream file, then write the coreset."""
import argparse
import sys

from dskm.cli_instance import EXIT_FAIL, EXIT_OK, cli
from dskm.core.driver import DynamicCoreset
from dskm.models.instance_models import ClusteringInstance
from dskm.models.outcome_models import Fail
from dskm.models.report_models import QueryReport
from dskm.utils.cli_options import add_run_options, run_config_from_args
from dskm.utils.stream_io import format_coreset, load_stream, save_coreset


def configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--stream", required=True, help="input stream file")
    parser.add_argument("--out", default=None, help="coreset file to write (default: stdout)")
    add_run_options(parser)


def fail_report(report: QueryReport) -> str:
    fail: Fail = report.result
    lines = [fail.describe()]
    lines.extend(f"  u={u}: {cause}" for u, cause in sorted(fail.guess_causes.items()))
    return "\n".join(lines)


@cli.command(name="build", description="build a coreset from a dynamic stream", configure=configure)
def build(args: argparse.Namespace) -> int:
    cfg = run_config_from_args(args)
    stream = load_stream(args.stream)
    instance = ClusteringInstance(d=stream.d, delta_exp=stream.delta_exp, k=cfg.k, epsilon=cfg.epsilon)
    driver = DynamicCoreset(instance, seed=cfg.seed, scale=cfg.scale, workers=cfg.workers)
    driver.extend(stream.operations)
    report = driver.query_report()

    if isinstance(report.result, Fail):
        print(fail_report(report), file=sys.stderr)
        return EXIT_FAIL

    coreset = report.result
    if cfg.out is None:
        sys.stdout.write(format_coreset(coreset, stream.d, stream.delta_exp))
    else:
        save_coreset(cfg.out, coreset, stream.d, stream.delta_exp)
        path = "shortcut" if report.shortcut else f"guess u={report.selected}"
        print(f"Wrote {len(coreset)} weighted points to {cfg.out} ({path}, {len(stream.operations)} operations)")
    return EXIT_OK
