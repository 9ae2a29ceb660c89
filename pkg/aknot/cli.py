import typer

from aknot.commands import config, knot

app = typer.Typer(help="aknot: A-polynomials, boundary slopes and SU(2) scans of knots")
app.add_typer(config.app, name="config")
knot.register(app)


def main():
    app()
