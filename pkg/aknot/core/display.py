from tabulate import tabulate

from aknot.core.elim import NONTRIVIAL
from aknot.core.formatter import colorize, get_coloured


def _grid(rows, headers):
    print(
        tabulate(
            get_coloured(rows),
            headers=get_coloured(header=headers),
            tablefmt="grid",
            stralign="left",
        )
    )


def _verdict(verdict):
    return colorize(verdict, "pos" if verdict in (NONTRIVIAL, "Match") else "neu")


def _complex(pair):
    real, imag = (float(x) for x in pair)
    return f"{real:.6f}{imag:+.6f}i"


def display_apoly(report):
    """
    Display an A-polynomial report as a summary table and a certificate table.

    Args:
        report (dict): Output of the apoly command.
    """
    rows = [
        ["A-polynomial", report["text"]],
        ["Nontrivial part", report["nontrivial_text"]],
        ["Power of L - 1", report["l1_power"]],
        ["Verdict", _verdict(report["verdict"])],
        ["Strategy", report["strategy"]],
        ["Flags", ", ".join(report["flags"]) or "-"],
    ]
    _grid(rows, ["Field", "Value"])
    certs = [
        [
            c["factor"],
            colorize(c["status"], "pos" if c["status"] == "certified" else "neg"),
            c["residual"],
            c["branch"] or "-",
        ]
        for c in report["certificates"]
    ]
    if certs:
        _grid(certs, ["Factor", "Status", "Residual", "Branch"])


def display_slopes(report):
    """Sides and slopes of both Newton polygons."""
    rows = []
    for label in ("nontrivial", "full"):
        polygon = report[label]
        for side in polygon["sides"]:
            rows.append([label, tuple(side["direction"]), side["length"]])
        if not polygon["sides"]:
            rows.append([label, "-", 0])
    _grid(rows, ["Polynomial", "Side direction", "Lattice length"])
    _grid(
        [[label, ", ".join(report[label]["slopes"]) or "-"] for label in ("nontrivial", "full")],
        ["Polynomial", "Boundary slopes"],
    )


def display_su2scan(report):
    """One row per filling, then the distinctness and lattice summary."""
    rows = []
    for entry in report["fillings"]:
        point = entry["boundary_points"][0] if entry["boundary_points"] else None
        rows.append(
            [
                entry["filling"],
                colorize(entry["status"], "pos" if entry["status"] == "found" else "neu"),
                len(entry["non_cyclic"]),
                _complex(point["m"]) if point else "-",
                _complex(point["l"]) if point else "-",
                point.get("filling_defect", "-") if point else "-",
            ]
        )
    _grid(rows, ["Filling", "Status", "Non-cyclic", "m", "l", "Defect"])
    summary = [
        ["Distinct boundary points", report["distinct"]],
        ["Closest pair", report["min_distance"] or "-"],
    ]
    lattice = report["lattice"]
    if lattice:
        summary += [
            ["Uncovered points", f"{lattice['uncovered_count']} of {2 * lattice['window'] + 1}"],
            ["Uncovered grows", lattice["grows"]],
            ["Lattice check consistent", lattice["consistent"]],
        ]
    _grid(summary, ["Check", "Result"])


def display_ajcheck(report):
    """Factor-by-factor comparison table."""
    rows = [[f["factor"], f["kind"], f["specialized"], f["apoly"]] for f in report["factors"]]
    _grid(rows, ["Factor", "Kind", "Specialized", "A-polynomial"])
    print(f"Verdict: {_verdict(report['verdict'])}")


def display_batch(report):
    """Per-knot status and the table-wide theorem check."""
    rows = []
    for job in report["jobs"]:
        status = job["status"]
        rows.append(
            [
                job["name"],
                colorize(status, "pos" if status == "ok" else "neg" if status == "error" else "neu"),
                job.get("verdict") or "-",
                job.get("l1_divides", "-"),
                job.get("symmetric", "-"),
                job["elapsed"],
            ]
        )
    _grid(rows, ["Knot", "Status", "Verdict", "L - 1 divides", "Symmetric", "Seconds"])
    summary = report["summary"]
    _grid(
        [[key.replace("_", " ").capitalize(), value] for key, value in summary.items()],
        ["Summary", "Value"],
    )
