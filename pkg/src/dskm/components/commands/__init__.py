"""dskm subcommands; each module registers itself with ``dskm.cli_instance.cli``."""
