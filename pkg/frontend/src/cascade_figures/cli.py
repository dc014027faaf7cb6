"""Command-line entry point: render one figure from an input directory."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import __version__
from .render import FIGURES, FigureRecipe, RecipeError, render


@click.command()
@click.version_option(version=__version__)
@click.option("--figure", "figure_id", required=True,
              type=click.Choice(sorted(FIGURES)), help="figure to render")
@click.option("--input", "input_dir", required=True,
              type=click.Path(exists=True, file_okay=False),
              help="directory holding the figure's input CSVs")
@click.option("--out", "output", required=True,
              type=click.Path(dir_okay=False), help="output image path")
def cli(figure_id, input_dir, output):
    """Render a simulation figure from CSV exports."""
    path = render(FigureRecipe(figure=figure_id, input_dir=Path(input_dir),
                               output=Path(output)))
    click.echo(f"wrote {path}")


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except (RecipeError, click.UsageError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    return 0


if __name__ == "__main__":
    main()
