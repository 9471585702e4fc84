"""The command registry every ``dskm`` subcommand registers itself with."""
import argparse
from dataclasses import dataclass
from typing import Callable

from dskm import __version__

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAIL = 3


@dataclass(frozen=True)
class Command:
    name: str
    description: str
    handler: Callable[[argparse.Namespace], int]
    configure: Callable[[argparse.ArgumentParser], None] | None = None


class CommandRegistry:
    """Collects decorated command handlers and builds the argparse front end."""

    def __init__(self, name: str):
        self.name = name
        self.commands: dict[str, Command] = {}

    def command(self, name: str, description: str, configure=None):
        def decorator(handler):
            if name in self.commands:
                raise ValueError(f"command {name!r} registered twice")
            self.commands[name] = Command(name, description, handler, configure)
            return handler

        return decorator

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog=self.name, description="Coresets for k-means over dynamic point streams."
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        subparsers = parser.add_subparsers(dest="command", required=True)
        for command in sorted(self.commands.values(), key=lambda c: c.name):
            sub = subparsers.add_parser(command.name, help=command.description, description=command.description)
            if command.configure is not None:
                command.configure(sub)
            sub.set_defaults(handler=command.handler)
        return parser


cli = CommandRegistry("dskm")
