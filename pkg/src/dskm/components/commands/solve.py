"""``dskm solve``: k-means++ / Lloyd on a weighted coreset file."""
import argparse

from dskm.cli_instance import EXIT_OK, cli
from dskm.core.errors import DomainError
from dskm.core.offline import kmeanspp_lloyd
from dskm.utils.stream_io import load_coreset


def configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--coreset", required=True, help="coreset file")
    parser.add_argument("--k", type=int, default=3, help="number of centers")
    parser.add_argument("--restarts", type=int, default=5, help="seeded k-means++ restarts")
    parser.add_argument("--seed", type=int, default=0, help="solver seed")


@cli.command(name="solve", description="solve k-means on a coreset", configure=configure)
def solve(args: argparse.Namespace) -> int:
    if args.k < 1:
        raise DomainError("k must be >= 1")
    _, _, coreset = load_coreset(args.coreset)
    if not len(coreset):
        raise DomainError("the coreset is empty")
    solution = kmeanspp_lloyd(
        coreset.points_array(), args.k, restarts=args.restarts, seed=args.seed, weights=coreset.weights_array()
    )
    print(solution.model_dump_json())
    return EXIT_OK
