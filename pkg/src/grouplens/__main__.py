from grouplens.cli import cli

cli()
