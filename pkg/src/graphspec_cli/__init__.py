from graphspec_cli.main import cli, main

__all__ = ["cli", "main"]
