from .harness import cli

cli()
