"""Shared argparse flags and their conversion into a validated ``RunConfig``."""
import argparse

from pydantic import ValidationError

from dskm.config.settings import get_default_kappa, get_default_workers
from dskm.core.errors import DomainError
from dskm.models.config_models import VERIFY_FAMILIES, RunConfig, ScaleConfig

SCALE_GROUPS = ("shortcut", "capacity", "rate", "independence", "sample", "size")


def add_run_options(parser: argparse.ArgumentParser, families: bool = False) -> None:
    parser.add_argument("--k", type=int, default=3, help="number of centers")
    parser.add_argument("--epsilon", type=float, default=0.25, help="coreset accuracy in (0, 0.5)")
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument(
        "--kappa", type=float, default=None, help="constant-scale knob in (0, 1] (default: DSKM_KAPPA or 1)"
    )
    parser.add_argument(
        "--scale",
        action="append",
        default=[],
        metavar="GROUP=VALUE",
        help=f"override kappa for one constant group ({', '.join(SCALE_GROUPS)})",
    )
    parser.add_argument(
        "--workers", type=int, default=None, help="worker pool size for guess queries (default: DSKM_WORKERS or 1)"
    )
    if families:
        parser.add_argument(
            "--families",
            default=None,
            metavar="NAME=COUNT,...",
            help=f"center-set families to evaluate ({', '.join(VERIFY_FAMILIES)}); default 40 each",
        )


def parse_assignments(text_items: list[str], what: str) -> dict[str, str]:
    result: dict[str, str] = {}
    for item in text_items:
        for part in filter(None, (p.strip() for p in item.split(","))):
            name, sep, value = part.partition("=")
            if not sep or not name or not value:
                raise DomainError(f"malformed {what} {part!r}, expected NAME=VALUE")
            result[name.strip()] = value.strip()
    return result


def parse_families(text: str | None) -> dict[str, int] | None:
    if text is None:
        return None
    try:
        return {name: int(value) for name, value in parse_assignments([text], "family").items()}
    except ValueError as e:
        raise DomainError(f"family counts must be integers: {e}") from None


def parse_scale(kappa: float | None, overrides: list[str]) -> ScaleConfig:
    fields: dict[str, float] = {"kappa": get_default_kappa() if kappa is None else kappa}
    for group, value in parse_assignments(overrides, "scale override").items():
        if group not in SCALE_GROUPS:
            raise DomainError(f"unknown scale group {group!r}; choose from {', '.join(SCALE_GROUPS)}")
        try:
            fields[f"{group}_scale"] = float(value)
        except ValueError:
            raise DomainError(f"scale for {group} must be a number, got {value!r}") from None
    return ScaleConfig(**fields)


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    """Validate the shared flags; pydantic errors surface as ``DomainError``."""
    try:
        values = {
            "k": args.k,
            "epsilon": args.epsilon,
            "seed": args.seed,
            "scale": parse_scale(args.kappa, args.scale),
            "workers": get_default_workers() if args.workers is None else args.workers,
            "out": getattr(args, "out", None),
        }
        families = parse_families(getattr(args, "families", None))
        if families is not None:
            values["families"] = families
        return RunConfig(**values)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise DomainError(f"invalid option {location}: {first['msg']}") from None
