"""Entry point for running the CLI as a module."""

import sys

from .cli import main as cli_main


def main() -> None:
    """Sync console entrypoint; the CLI's return value is the exit status."""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
