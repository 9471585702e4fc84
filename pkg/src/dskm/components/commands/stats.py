"""``dskm stats``: per-guess outcomes and bucket accounting for one stream."""
import argparse
import json

from dskm.cli_instance import EXIT_OK, cli
from dskm.core.driver import DynamicCoreset
from dskm.models.instance_models import ClusteringInstance
from dskm.models.outcome_models import Fail
from dskm.utils.cli_options import add_run_options, run_config_from_args
from dskm.utils.stream_io import load_stream


def configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--stream", required=True, help="input stream file")
    add_run_options(parser)


def stats_rows(driver: DynamicCoreset) -> list[dict]:
    """Rows for the shortcut and the shared storings, then one per guess in increasing u."""
    report = driver.query_report(all_guesses=True)
    space = driver.space_report()
    if isinstance(report.result, Fail):
        selected = None
    else:
        selected = "shortcut" if report.shortcut else report.selected
    rows = [
        {
            "component": "shortcut",
            "status": "ok" if report.shortcut else "fail",
            "size": len(report.result) if report.shortcut else 0,
            "nominal_buckets": space.shortcut_nominal,
            "allocated_buckets": space.shortcut_allocated,
            "selected": selected == "shortcut",
        },
        {
            "component": "shared",
            "status": "ok",
            "size": len(driver.shared),
            "nominal_buckets": space.shared_nominal,
            "allocated_buckets": space.shared_allocated,
            "selected": False,
        },
    ]
    for outcome in report.outcomes:
        rows.append(
            {
                "component": f"guess u={outcome.u}",
                "guess": outcome.guess,
                "status": outcome.status.value,
                "cause": outcome.cause,
                "size": outcome.size or 0,
                "nominal_buckets": space.per_guess_nominal[outcome.u],
                "allocated_buckets": space.per_guess_allocated[outcome.u],
                "selected": selected == outcome.u,
            }
        )
    return rows


def format_table(rows: list[dict]) -> str:
    header = f"{'component':<14} {'status':<10} {'cause':<22} {'size':>8} {'nominal':>16} {'allocated':>10}"
    lines = [header, "-" * len(header)]
    for row in rows:
        mark = " *" if row["selected"] else ""
        lines.append(
            f"{row['component']:<14} {row['status']:<10} {row.get('cause') or '-':<22} {row['size']:>8d} "
            f"{row['nominal_buckets']:>16d} {row['allocated_buckets']:>10d}{mark}"
        )
    return "\n".join(lines)


@cli.command(name="stats", description="report per-guess outcomes and sketch memory", configure=configure)
def stats(args: argparse.Namespace) -> int:
    cfg = run_config_from_args(args)
    stream = load_stream(args.stream)
    instance = ClusteringInstance(d=stream.d, delta_exp=stream.delta_exp, k=cfg.k, epsilon=cfg.epsilon)
    driver = DynamicCoreset(instance, seed=cfg.seed, scale=cfg.scale, workers=cfg.workers)
    driver.extend(stream.operations)

    rows = stats_rows(driver)
    for row in rows:
        print(json.dumps(row, sort_keys=True))
    print()
    print(format_table(rows))
    return EXIT_OK
