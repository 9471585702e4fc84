"""Environment-backed defaults (read after loading an optional .env file)."""
import os

from dotenv import load_dotenv

from dskm.core.errors import DomainError

load_dotenv()


def _read(name: str, convert, default):
    raw = os.environ.get(name)
    if not raw:
        return default
    try:
        return convert(raw)
    except ValueError as exc:
        raise DomainError(f"{name}={raw!r} is not a valid {convert.__name__}") from exc


def get_default_workers() -> int:
    """Worker pool size for per-guess sampler queries (``DSKM_WORKERS``)."""
    return max(1, _read("DSKM_WORKERS", int, 1))


def get_default_kappa() -> float:
    """Constant-scale knob used when ``--kappa`` is not given (``DSKM_KAPPA``)."""
    return _read("DSKM_KAPPA", float, 1.0)


def get_log_level() -> str:
    return (os.environ.get("DSKM_LOG_LEVEL") or "WARNING").upper()
