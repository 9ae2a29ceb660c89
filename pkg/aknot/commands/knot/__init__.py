from . import ajcheck, apoly, batch, cache_clear, slopes, su2scan


def register(app):
    """Add the per-knot pipeline commands to the root app."""
    app.command()(apoly.apoly)
    app.command()(slopes.slopes)
    app.command()(su2scan.su2scan)
    app.command()(ajcheck.ajcheck)
    app.command()(batch.batch)
    app.command(name="cache-clear")(cache_clear.cache_clear)
