"""Elimination of the matrix unknowns and certification of the eliminant.

Two strategies produce a polynomial in ``M, L`` per branch of the reduced
representation system:

    - ``resultant_tower`` eliminates one unknown at a time by resultants
      against the lowest-degree equation, splitting the system whenever two
      equations share a factor in the eliminated unknown;
    - ``groebner`` computes a basis in a block order with the matrix
      unknowns (and ``u`` with ``u*M - 1``) before ``M, L``.

Resultants over-produce, so every factor of the candidate is checked by
solving the branch systems numerically at sampled points of its zero set.
"""

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from aknot.core.charvar import (
    BOUNDARY,
    build_rep_system,
    reduce_rep_system,
    strip_boundary_monomials,
)
from aknot.core.errors import EliminationTimeout, EmptyEliminant, ZeroPolynomial
from aknot.core.formatter import format_complex, format_float, say
from aknot.core.mpoly import (
    SparsePoly,
    block_order,
    buchberger,
    divides,
    exact_div,
    gcd,
    primitive,
    resultant,
    squarefree_part,
)

STRATEGIES = ("auto", "resultant_tower", "groebner")

TRIVIAL = "TrivialUnknotLike"
NONTRIVIAL = "NonTrivial"

ISOLATED = "isolated-points-discarded"
EXTRANEOUS = "extraneous-factors-removed"
FALLBACK = "groebner-fallback"
UNCERTIFIED = "uncertified"

PARABOLIC_M = (1.0, -1.0)
# Solver points this far out approximate solutions at infinity.
ESCAPE = 1e6


def _boundary(poly):
    return poly.with_names(BOUNDARY) if set(poly.variables_used()) <= set(BOUNDARY) else None


def _normalize(poly):
    """Primitive, squarefree, with boundary monomial factors removed."""
    poly = strip_boundary_monomials(poly, BOUNDARY)
    if poly.is_constant():
        return primitive(poly)
    return squarefree_part(poly)


class _Deadline:
    def __init__(self, budget_seconds, partial):
        self.limit = None if budget_seconds is None else time.monotonic() + budget_seconds
        self.partial = partial

    def check(self, stage="eliminate"):
        if self.limit is not None and time.monotonic() > self.limit:
            raise EliminationTimeout(
                "Elimination exceeded its time budget", stage=stage, partial=self.partial
            )


# resultant tower


def _prepare(equations):
    """Normalize and deduplicate; None when a nonzero constant appears."""
    out = []
    for eq in equations:
        if eq.is_zero():
            continue
        eq = _normalize(eq)
        if eq.is_constant():
            return None
        if all(eq != other for other in out):
            out.append(eq)
    return out


def resultant_tower(branch, deadline=None, verbose=False):
    """Eliminate the branch unknowns by iterated resultants.

    Returns:
        tuple: (list of (M, L) curve polynomials, flags). A curve is
        reported once per surviving sub-branch.

    Raises:
        EmptyEliminant: A sub-branch leaves no constraint on ``(M, L)``.
    """
    deadline = deadline or _Deadline(None, {})
    curves, flags = [], set()
    stack = [(list(branch.equations), list(branch.unknowns))]
    while stack:
        deadline.check()
        eqs, unknowns = stack.pop()
        eqs = _prepare(eqs)
        if eqs is None:
            continue
        live = [x for x in unknowns if any(e.degree(x) > 0 for e in eqs)]
        if not live:
            boundary = [e.with_names(BOUNDARY) for e in eqs]
            if not boundary:
                raise EmptyEliminant(
                    f"Branch {branch.label} leaves (M, L) unconstrained"
                )
            g = boundary[0]
            for e in boundary[1:]:
                g = gcd(g, e)
            if g.is_constant():
                flags.add(ISOLATED)
                continue
            curves.append(g)
            continue

        x = min(live, key=lambda v: (max(e.degree(v) for e in eqs), live.index(v)))
        with_x = [e for e in eqs if e.degree(x) > 0]
        without = [e for e in eqs if e.degree(x) <= 0]
        if len(with_x) == 1:
            stack.append((without, [u for u in live if u != x]))
            continue

        with_x.sort(key=lambda e: (e.degree(x), len(e.terms()), e.degree()))
        pivot = with_x[0]
        split = None
        for other in with_x[1:]:
            h = gcd(pivot, other)
            if h.degree(x) > 0:
                split = (other, h)
                break
        if split is not None:
            other, h = split
            rest = [e for e in with_x if e is not pivot and e is not other] + without
            stack.append((rest + [exact_div(pivot, h), exact_div(other, h)], live))
            stack.append((rest + [h], live))
            continue
        say(
            f"  {branch.label}: eliminating {x} from {len(with_x)} equations "
            f"(pivot degree {pivot.degree(x)})",
            verbose,
        )
        reduced = [resultant(pivot, e, x) for e in with_x[1:]]
        stack.append((without + reduced, [u for u in live if u != x]))
    return curves, flags


# groebner


def groebner_eliminant(branch, deadline=None, verbose=False):
    """Eliminate the branch unknowns with a block-order Groebner basis.

    The eliminant is the gcd of the basis elements in ``M, L`` alone.

    Returns:
        tuple: (list of curve polynomials, flags).
    """
    deadline = deadline or _Deadline(None, {})
    names = branch.unknowns + ("u",) + BOUNDARY
    order = block_order(len(branch.unknowns) + 1)
    u, M = SparsePoly.var("u", names, order), SparsePoly.var("M", names, order)
    gens = [eq.with_names(names, order) for eq in branch.equations]
    gens.append(u * M - 1)
    say(f"  {branch.label}: Groebner basis of {len(gens)} generators", verbose)
    basis = buchberger(gens, order, deadline=deadline.limit)
    if any(b.is_constant() for b in basis):
        return [], set()
    boundary = [b.with_names(BOUNDARY) for b in basis if _boundary(b) is not None]
    if not boundary:
        raise EmptyEliminant(f"Branch {branch.label} leaves (M, L) unconstrained")
    g = boundary[0]
    for b in boundary[1:]:
        g = gcd(g, b)
    if g.is_constant():
        return [], {ISOLATED}
    return [_normalize(g)], set()


_ENGINES = {"resultant_tower": resultant_tower, "groebner": groebner_eliminant}


def eliminate_branches(branches, strategy, budget_seconds=None, verbose=False):
    """Per-branch eliminants.

    Returns:
        tuple: (list of (branch label, [curves]), flags, strategy used).
    """
    partial = {"stage": "eliminate", "branches": []}
    deadline = _Deadline(budget_seconds, partial)
    engines = ["resultant_tower", "groebner"] if strategy == "auto" else [strategy]
    for position, name in enumerate(engines):
        partial["branches"] = []
        try:
            found, flags = [], set()
            for branch in branches:
                say(
                    f"Branch {branch.label}: {len(branch.unknowns)} unknowns, "
                    f"{len(branch.equations)} equations ({name})",
                    verbose,
                )
                curves, branch_flags = _ENGINES[name](branch, deadline, verbose)
                flags |= branch_flags
                found.append((branch.label, curves))
                partial["branches"].append(
                    {"label": branch.label, "eliminants": [c.to_json() for c in curves]}
                )
                say(
                    f"Branch {branch.label}: eliminant degrees "
                    f"{[(c.degree('M'), c.degree('L')) for c in curves]}",
                    verbose,
                )
            if position:
                flags.add(FALLBACK)
            return found, flags, name
        except EliminationTimeout as err:
            err.partial = partial
            raise
        except EmptyEliminant:
            if position == len(engines) - 1:
                raise
            say("Resultant tower degenerated; falling back to Groebner", verbose, "neu")


def _product(polys, names=BOUNDARY):
    out = SparsePoly.constant(1, names)
    for p in polys:
        out = out * p
    return out


def eliminate(sys, strategy="auto", budget_seconds=None, verbose=False):
    """Squarefree eliminant in ``M, L`` of a representation system.

    Raises:
        EliminationTimeout: The budget ran out.
        EmptyEliminant: No ``(M, L)`` polynomial was found.
    """
    found, _, _ = eliminate_branches(
        reduce_rep_system(sys), strategy, budget_seconds, verbose
    )
    curves = [c for _, cs in found for c in cs]
    result = _product(curves)
    if result.is_constant():
        raise EmptyEliminant("No (M, L) polynomial survives elimination")
    return _normalize(result)


# factors


def coprime_factors(polys):
    """Refine polynomials into pairwise coprime, squarefree, non-constant pieces."""
    pieces = [_normalize(p.with_names(BOUNDARY)) for p in polys if not p.is_zero()]
    pieces = [p for p in pieces if not p.is_constant()]
    changed = True
    while changed:
        changed = False
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                g = gcd(pieces[i], pieces[j])
                if g.is_constant():
                    continue
                a, b = exact_div(pieces[i], g), exact_div(pieces[j], g)
                rest = [p for k, p in enumerate(pieces) if k not in (i, j)]
                pieces = rest + [q for q in (g, a, b) if not q.is_constant()]
                changed = True
                break
            if changed:
                break
    return pieces


def _small_candidates():
    """Binomials with small support, tried as exact divisors."""
    monomials = [(a, b) for b in range(2) for a in range(3)]
    seen, out = set(), []
    for x, y in ((x, y) for x in monomials for y in monomials if x < y):
        for sign in (1, -1):
            p = SparsePoly.from_terms(BOUNDARY, {y: 1, x: sign})
            _, rest = p.strip_monomial_factor()
            rest = primitive(rest)
            if not rest.is_constant() and rest not in seen:
                seen.add(rest)
                out.append(rest)
    return out


def split_factors(polys):
    """Candidate irreducible factors by coprime refinement and trial division."""
    out = []
    for piece in coprime_factors(polys):
        for cand in _small_candidates():
            if piece.is_constant():
                break
            if piece != cand and divides(cand, piece):
                out.append(cand)
                piece = exact_div(piece, cand)
        if not piece.is_constant():
            out.append(primitive(piece))
    unique = []
    for f in out:
        if all(f != g for g in unique):
            unique.append(f)
    return sorted(unique, key=lambda f: (f.degree("L"), f.degree("M"), str(f)))


# numerics


def normalized_residual(equations, point):
    """Largest ``|f| / (1 + sum |terms|)`` over the equations."""
    worst = 0.0
    for eq in equations:
        value = abs(eq.evaluate(point))
        worst = max(worst, value / (1.0 + eq.magnitude(point)))
    return worst


class _Solver:
    """Least-squares solver for a branch system with some variables fixed."""

    def __init__(self, equations, free):
        self.equations = equations
        self.free = tuple(free)
        self.derivatives = [[eq.diff(x) for x in self.free] for eq in equations]

    def _point(self, v, fixed):
        n = len(self.free)
        point = dict(fixed)
        for j, x in enumerate(self.free):
            point[x] = complex(v[j], v[n + j])
        return point

    def residuals(self, v, fixed):
        point = self._point(v, fixed)
        values = np.array([eq.evaluate(point) for eq in self.equations])
        return np.concatenate([values.real, values.imag])

    def jacobian(self, v, fixed):
        point = self._point(v, fixed)
        n = len(self.free)
        d = np.array(
            [[p.evaluate(point) for p in row] for row in self.derivatives], dtype=complex
        ).reshape(len(self.equations), n)
        top = np.hstack([d.real, -d.imag])
        bottom = np.hstack([d.imag, d.real])
        return np.vstack([top, bottom])

    def solve(self, fixed, rng, starts):
        """Best (residual, point) over ``starts`` random starting points."""
        if not self.free:
            return normalized_residual(self.equations, fixed), dict(fixed)
        best = (np.inf, None)
        n = len(self.free)
        for _ in range(starts):
            v0 = rng.normal(size=2 * n)
            try:
                sol = least_squares(
                    self.residuals,
                    v0,
                    jac=self.jacobian,
                    args=(fixed,),
                    xtol=1e-15,
                    ftol=1e-15,
                    gtol=1e-15,
                    max_nfev=200,
                )
            except (ValueError, np.linalg.LinAlgError, OverflowError):
                continue
            if np.max(np.abs(sol.x)) > ESCAPE:
                continue
            point = self._point(sol.x, fixed)
            res = normalized_residual(self.equations, point)
            if res < best[0]:
                best = (res, point)
            if res < 1e-13:
                break
        return best


def _random_unit_scale(rng):
    return rng.uniform(0.6, 1.6) * np.exp(1j * rng.uniform(0, 2 * np.pi))


def _l_roots(factor, m):
    coeffs = [factor.coeff_in("L", k).evaluate({"M": m, "L": 0}) for k in range(factor.degree("L") + 1)]
    coeffs = coeffs[::-1]
    if abs(coeffs[0]) < 1e-12:
        return []
    return [z for z in np.roots(coeffs) if abs(z) > 1e-9]


def _m_roots(factor):
    coeffs = [factor.coeff_in("M", k).evaluate({"M": 0, "L": 0}) for k in range(factor.degree("M") + 1)]
    return [z for z in np.roots(coeffs[::-1]) if abs(z) > 1e-9]


@dataclass
class FactorCertificate:
    factor: SparsePoly
    certified: bool
    witness: dict = None
    residual: float = float("inf")
    branch: str = None
    parabolic_witnesses: int = 0

    def to_json(self):
        out = {
            "factor": str(self.factor),
            "poly": self.factor.to_json(),
            "status": "certified" if self.certified else "rejected",
            "residual": format_float(self.residual) if np.isfinite(self.residual) else "inf",
            "branch": self.branch,
            "parabolic_witnesses": self.parabolic_witnesses,
        }
        if self.witness is not None:
            out["M"] = format_complex(self.witness["M"])
            out["L"] = format_complex(self.witness["L"])
        return out


def _sample_points(factor, rng, samples):
    """Generic sample points on the factor's zero set, then parabolic ones."""
    generic, parabolic = [], []
    if factor.degree("L") > 0:
        for _ in range(samples):
            m = _random_unit_scale(rng)
            generic.extend({"M": m, "L": root} for root in _l_roots(factor, m))
        for m in PARABOLIC_M:
            parabolic.extend({"M": complex(m), "L": root} for root in _l_roots(factor, m))
    else:
        for m in _m_roots(factor):
            for _ in range(samples):
                point = {"M": complex(m), "L": _random_unit_scale(rng)}
                (parabolic if min(abs(m - 1), abs(m + 1)) < 1e-9 else generic).append(point)
    return generic, parabolic


def certify_factors(p, branches, samples=4, tol=1e-8, seed=0, starts=12):
    """Check each candidate factor of ``p`` against the representation branches.

    A factor is certified when some branch system has a solution with
    normalized residual below ``tol`` at a generic sample of its zero set.
    Points with ``M = +-1`` are reported but never certify on their own.

    Returns:
        list: FactorCertificate per candidate factor.
    """
    rng = np.random.default_rng(seed)
    solvers = [(b.label, _Solver(b.equations, b.unknowns)) for b in branches]
    report = []
    for factor in split_factors([p]):
        generic, parabolic = _sample_points(factor, rng, samples)
        cert = FactorCertificate(factor, False)
        for point in generic:
            for label, solver in solvers:
                res, _ = solver.solve(point, rng, starts)
                if res < cert.residual:
                    cert.residual, cert.branch = res, label
                    cert.witness = {"M": point["M"], "L": point["L"]}
                if res < tol:
                    cert.certified = True
                    break
            if cert.certified:
                break
        for point in parabolic:
            if any(solver.solve(point, rng, starts)[0] < tol for _, solver in solvers):
                cert.parabolic_witnesses += 1
        report.append(cert)
    return report


def sample_representations(branch, count, seed=0, tol=1e-8, starts=12, max_tries=None):
    """Numerical points of a branch with random ``M`` and ``L`` solved for.

    Returns:
        list: dicts mapping every branch variable and ``M``, ``L`` to complex values.
    """
    rng = np.random.default_rng(seed)
    solver = _Solver(branch.equations, branch.unknowns + ("L",))
    found = []
    tries = 0
    max_tries = max_tries or 20 * count
    while len(found) < count and tries < max_tries:
        tries += 1
        res, point = solver.solve({"M": _random_unit_scale(rng)}, rng, starts)
        if point is not None and res < tol:
            found.append(point)
    return found


# results


@dataclass
class APolyResult:
    """Integer-normalized A-polynomial with its L-1 bookkeeping.

    ``full = (L-1)**l_minus_one_power * nontrivial_part`` up to a unit.
    """

    full: SparsePoly
    l_minus_one_power: int
    nontrivial_part: SparsePoly
    verdict: str
    certificates: list = field(default_factory=list)
    multiplicities: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    strategy: str = None


def strip_reducible(p):
    """Divide out ``L - 1`` as often as possible.

    Raises:
        ZeroPolynomial: If ``p`` is zero.
    """
    if p.is_zero():
        raise ZeroPolynomial("Cannot strip L-1 from the zero polynomial")
    p = p.with_names(BOUNDARY)
    l_minus_one = SparsePoly.parse("L - 1")
    full = primitive(p)
    rest, power = full, 0
    while not rest.is_constant() and divides(l_minus_one, rest):
        rest = exact_div(rest, l_minus_one)
        power += 1
    rest = primitive(rest)
    verdict = TRIVIAL if rest.is_constant() else NONTRIVIAL
    return APolyResult(full, power, rest, verdict)


def _multiplicity(factor, raw):
    k = 0
    while not raw.is_constant() and divides(factor, raw):
        raw = exact_div(raw, factor)
        k += 1
    return k


def compute_apoly(
    pres,
    periph,
    strategy="auto",
    budget_seconds=300,
    seed=0,
    tol=1e-8,
    samples=4,
    verbose=False,
):
    """Full pipeline: build, reduce, eliminate per branch, certify, strip.

    Raises:
        EliminationTimeout: The budget ran out; ``partial`` holds what was found.
        EmptyEliminant: A dimension anomaly.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"Unknown strategy '{strategy}'")
    start = time.monotonic()
    sys = build_rep_system(pres, periph)
    say(f"System: {len(sys.unknowns)} unknowns, {len(sys.equations)} equations", verbose)
    branches = reduce_rep_system(sys)
    say(f"Reduced to {len(branches)} branches", verbose)

    found, flags, used = eliminate_branches(branches, strategy, budget_seconds, verbose)
    curves = [c for _, cs in found for c in cs]
    raw = _product(curves)
    if raw.is_constant():
        raise EmptyEliminant("No (M, L) polynomial survives elimination")

    say("Certifying factors", verbose)
    certs = certify_factors(raw, branches, samples=samples, tol=tol, seed=seed)
    kept = [c.factor for c in certs if c.certified]
    if not kept and strategy == "auto" and used != "groebner":
        remaining = None
        if budget_seconds is not None:
            remaining = max(0.0, budget_seconds - (time.monotonic() - start))
        found, more, used = eliminate_branches(branches, "groebner", remaining, verbose)
        flags |= more | {FALLBACK}
        raw = _product([c for _, cs in found for c in cs])
        certs = certify_factors(raw, branches, samples=samples, tol=tol, seed=seed)
        kept = [c.factor for c in certs if c.certified]
    if any(not c.certified for c in certs):
        flags.add(EXTRANEOUS)
    if not kept:
        flags.add(UNCERTIFIED)
        kept = [c.factor for c in certs]

    result = strip_reducible(_product(kept))
    result.certificates = certs
    result.multiplicities = [
        {"factor": str(f), "multiplicity": _multiplicity(f, raw)} for f in kept
    ]
    result.flags = sorted(flags)
    result.strategy = used
    say(f"Verdict: {result.verdict}", verbose, "pos" if result.verdict == NONTRIVIAL else "neu")
    return result


def apoly_to_json(result):
    out = dict(result.full.to_json())
    out.update(
        {
            "text": str(result.full),
            "l1_power": result.l_minus_one_power,
            "nontrivial_part": result.nontrivial_part.to_json(),
            "nontrivial_text": str(result.nontrivial_part),
            "verdict": result.verdict,
            "multiplicities": result.multiplicities,
            "flags": result.flags,
            "strategy": result.strategy,
            "certificates": [c.to_json() for c in result.certificates],
        }
    )
    return out
