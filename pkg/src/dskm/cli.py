"""Command-line entry point for dskm."""
import sys
from pathlib import Path

from dskm.cli_instance import EXIT_ERROR, cli
from dskm.core.errors import DomainError
from dskm.utils.register_cli_components import register_cli_components


def main(argv: list[str] | None = None) -> int:
    """Run one dskm command and return its exit code."""
    # Auto-register all CLI components (commands)
    register_cli_components(Path(__file__).parent)
    parser = cli.build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (DomainError, OSError) as e:
        print(f"dskm {args.command}: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
