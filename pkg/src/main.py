"""
Command line entry point: ``python -m src.main <subcommand> ...``
"""
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

import click  # noqa: E402

from src.config import configure_logging  # noqa: E402
from src.routes.codes import codes_cli  # noqa: E402
from src.routes.faults import faults_cli  # noqa: E402
from src.routes.protocols import protocols_cli  # noqa: E402

cli = click.CommandCollection(
    sources=[codes_cli, protocols_cli, faults_cli],
    help='Triorthogonal code switching toolkit. Every command prints a JSON report.',
)


def main():
    configure_logging()
    cli()


if __name__ == '__main__':
    main()
