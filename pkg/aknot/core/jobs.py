"""Per-knot jobs behind the CLI commands, and the batch runner."""

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from aknot.core.ajspec import QDiffOperator, aj_compare, parse_operator, specialize_q1_tracked
from aknot.core.charvar import build_rep_system, dump_system, is_involution_symmetric
from aknot.core.config_utils import STRATEGY_CHOICES
from aknot.core.elim import NONTRIVIAL, apoly_to_json, compute_apoly
from aknot.core.errors import AknotError, EliminationTimeout, InputError, MalformedCode
from aknot.core.formatter import format_float, format_rational, say
from aknot.core.knotio import parse_code, wirtinger
from aknot.core.mpoly import SparsePoly, divides
from aknot.core.newton import newton_polygon, polygon_to_json
from aknot.core.su2 import scan_fillings

FORMATS = ("dt", "pd", "braid")


@dataclass(frozen=True)
class KnotJob:
    """A knot given by a diagram code plus the options of one computation."""

    name: str
    fmt: str
    code: str
    strategy: str = "auto"
    budget_seconds: float = 300.0
    seed: int = 0
    tol: float = 1e-10
    cert_tol: float = 1e-8
    cert_samples: int = 4

    def __post_init__(self):
        if self.fmt not in FORMATS:
            raise MalformedCode(f"Unknown code format '{self.fmt}'. Use one of {', '.join(FORMATS)}")
        if self.strategy not in STRATEGY_CHOICES:
            raise InputError(f"Unknown strategy '{self.strategy}'. Use one of {', '.join(STRATEGY_CHOICES)}")
        if not self.budget_seconds > 0:
            raise InputError("The time budget must be positive")

    def options(self):
        """Options that change the result; the cache keys on these."""
        out = asdict(self)
        for key in ("name", "fmt", "code"):
            out.pop(key)
        return out

    def input_json(self):
        return {"name": self.name, "format": self.fmt, "code": self.code}

    def knot(self):
        return wirtinger(parse_code(self.fmt, self.code))

    def compute(self, verbose=False):
        pres, periph = self.knot()
        say(f"Parsed {self.name}: {pres.generator_count} generators", verbose)
        return compute_apoly(
            pres,
            periph,
            strategy=self.strategy,
            budget_seconds=self.budget_seconds,
            seed=self.seed,
            tol=self.cert_tol,
            samples=self.cert_samples,
            verbose=verbose,
        )


def run_apoly(job, verbose=False, with_system=False):
    """A-polynomial report; ``with_system`` adds the polynomial system."""
    try:
        result = job.compute(verbose)
    except EliminationTimeout as err:
        err.partial = {"input": job.input_json(), **err.partial}
        raise
    report = {"input": job.input_json(), **apoly_to_json(result)}
    if with_system:
        report["system"] = dump_system(build_rep_system(*job.knot()))
    return report


def run_slopes(job, verbose=False):
    """Newton polygons and boundary slopes of the nontrivial part and the full polynomial."""
    result = job.compute(verbose)
    return {
        "input": job.input_json(),
        "nontrivial": polygon_to_json(newton_polygon(result.nontrivial_part)),
        "full": polygon_to_json(newton_polygon(result.full)),
    }


def run_su2scan(job, fillings, attempts=200, with_apoly=False, verbose=False):
    """SU(2) scan over the fillings, optionally scored against the A-polynomial."""
    pres, periph = job.knot()
    apoly = job.compute(verbose).full if with_apoly else None
    report = scan_fillings(
        pres,
        periph,
        fillings,
        attempts=attempts,
        tol=job.tol,
        seed=job.seed,
        apoly=apoly,
        verbose=verbose,
    )
    return {"input": job.input_json(), **report}


def load_operator(text):
    """An operator from its text form, or from JSON when the text is an object."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise InputError(f"Operator file is not valid JSON: {err}") from err
        return QDiffOperator.from_json(data)
    return parse_operator(text)


def run_ajcheck(job, operator_text, verbose=False):
    """Specialize the operator at q = 1 and compare it with the knot's A-polynomial."""
    op = load_operator(operator_text)
    poly, (m_shift, l_shift), content = specialize_q1_tracked(op)
    say(f"Specialized operator: {poly}", verbose)
    report = aj_compare(poly, job.compute(verbose))
    return {
        "input": job.input_json(),
        "operator": str(op),
        "cleared_monomial": {"M": m_shift, "L": l_shift},
        "content": format_rational(content),
        **report,
    }


def _batch_one(job, verbose=False):
    start = time.monotonic()
    entry = {"name": job.name, "code": job.code}
    try:
        result = job.compute(verbose)
    except EliminationTimeout as err:
        entry.update(status="timeout", stage=err.stage)
    except AknotError as err:
        entry.update(status="error", error=f"{type(err).__name__}: {err}")
    else:
        entry.update(
            status="ok",
            verdict=result.verdict,
            text=str(result.full),
            l1_divides=divides(SparsePoly.parse("L - 1"), result.full),
            symmetric=is_involution_symmetric(result.full),
        )
    entry["elapsed"] = format_float(round(time.monotonic() - start, 3))
    return entry


def summarize(entries):
    """Counts plus the table-wide check: finished knots are NonTrivial, divisible, symmetric."""
    ok = [e for e in entries if e["status"] == "ok"]
    failing = [
        e["name"]
        for e in ok
        if not (e["verdict"] == NONTRIVIAL and e["l1_divides"] and e["symmetric"])
    ]
    return {
        "total": len(entries),
        "finished": len(ok),
        "timeouts": sum(e["status"] == "timeout" for e in entries),
        "errors": sum(e["status"] == "error" for e in entries),
        "theorem_check": not failing,
        "failing": failing,
    }


def run_batch(jobs, workers=1, verbose=False):
    """Run every job, in worker processes when ``workers > 1``.

    Returns:
        dict: ``jobs`` entries in input order and a ``summary``.
    """
    if workers < 1:
        raise InputError("At least one worker is required")
    if workers == 1:
        entries = []
        for job in jobs:
            say(f"Running {job.name}", verbose)
            entries.append(_batch_one(job, verbose))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_batch_one, jobs))
    for entry in entries:
        say(
            f"{entry['name']}: {entry['status']} in {entry['elapsed']}s",
            verbose,
            "pos" if entry["status"] == "ok" else "neu",
        )
    return {"jobs": entries, "summary": summarize(entries)}
