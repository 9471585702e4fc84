"""Logger factory shared by the library modules."""
import logging

from dskm.config.settings import get_log_level

LOG_FORMAT = "%(asctime)s [%(levelname)8s] %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_configured = False


def get_logger(name: str) -> logging.Logger:
    """Return a named logger under the ``dskm`` root, configuring the root once."""
    global _configured
    if not _configured:
        root = logging.getLogger("dskm")
        if not root.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter(LOG_FORMAT, LOG_DATE_FORMAT))
            root.addHandler(handler)
        root.setLevel(get_log_level())
        _configured = True
    return logging.getLogger(name)
