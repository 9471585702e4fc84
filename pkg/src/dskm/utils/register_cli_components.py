"""
Dynamic CLI Component Registration Utility.

Automatically discovers and imports every command module under the
components directory.
"""
import importlib
from pathlib import Path

from dskm.utils.logger import get_logger

logger = get_logger(__name__)

COMPONENT_TYPES = ["commands"]


def register_cli_components(base_dir: Path) -> dict[str, int]:
    """
    Dynamically import all CLI components.

    Importing a command module triggers its ``@cli.command()`` decorator.

    Args:
        base_dir: Package directory holding ``components/`` (usually Path(__file__).parent from cli.py)

    Returns:
        Number of modules registered per component type
    """
    components_dir = base_dir / "components"
    registered_count = {component_type: 0 for component_type in COMPONENT_TYPES}

    for component_type in COMPONENT_TYPES:
        component_path = components_dir / component_type

        if not component_path.exists():
            logger.warning("%s directory not found at %s", component_type, component_path)
            continue

        python_files = sorted(
            f for f in component_path.glob("*.py")
            if f.name != "__init__.py" and not f.name.startswith("_")
        )

        for py_file in python_files:
            module_name = f"dskm.components.{component_type}.{py_file.stem}"
            try:
                importlib.import_module(module_name)
                registered_count[component_type] += 1
                logger.debug("Registered %s: %s", component_type[:-1], py_file.stem)
            except Exception as e:
                logger.error("Error importing %s: %s", module_name, e)
                continue

    logger.debug(
        "Registration summary: %s; total %d components registered",
        ", ".join(f"{name}={count}" for name, count in registered_count.items()),
        sum(registered_count.values()),
    )
    return registered_count
