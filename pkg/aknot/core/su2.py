"""SU(2) representations of knot groups and of their Dehn fillings.

Group elements are unit quaternions ``a + bi + cj + dk``, acting as the
matrices ``[[a + bi, c + di], [-c + di, a - bi]]``. The search is a
multi-start least-squares refinement of the relator defects; an empty
result means nothing was found within the attempts, not that no
representation exists.

The lattice checker works on subgroups of Z^2 with exact integer
arithmetic: each subgroup is brought to Hermite form ``(a, b), (0, d)``
and membership is read off the triangular system.
"""

from dataclasses import dataclass
from math import gcd, lcm

import numpy as np
from scipy.optimize import least_squares

from aknot.core.errors import LineThroughOrigin, NonCommutingBoundary
from aknot.core.formatter import format_complex, format_float, say
from aknot.core.knotio import FillingSpec, filled_presentation

NON_CYCLIC_TOL = 1e-6
COMMUTE_TOL = 1e-6
DEDUP_TOL = 1e-6
DISTINCT_TOL = 1e-6
KERNEL_TOL = 1e-8

# Conjugation invariants beyond the generator traces; letters past the
# generator count are skipped.
SHORT_WORDS = (
    (1, 2),
    (1, -2),
    (1, 1, 2),
    (1, 2, 2),
    (1, 3),
    (2, 3),
    (1, 2, 3),
    (1, -2, 3),
    (1, 2, -1, -2),
    (1, 3, 2),
)

_I2 = np.eye(2, dtype=complex)


def quaternion_matrix(q):
    a, b, c, d = q
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])


def _word(word, mats):
    out = _I2
    for letter in word:
        m = mats[abs(letter)]
        out = out @ (m if letter > 0 else m.conj().T)
    return out


def _commutator_defect(x, y):
    return np.linalg.norm(x @ y @ x.conj().T @ y.conj().T - _I2, 2)


def default_fillings():
    """Slopes ±1, ±2, ±1/2, 1/3 and 1/4."""
    return tuple(
        FillingSpec(p, q)
        for p, q in ((1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (1, 3), (1, 4))
    )


@dataclass(frozen=True)
class SU2Rep:
    """Images of the generators as unit quaternions, generator 1 first."""

    quaternions: tuple
    residual: float
    non_cyclic: bool

    def matrices(self):
        return {k: quaternion_matrix(q) for k, q in enumerate(self.quaternions, start=1)}

    def signature(self):
        """Traces of the generators (sorted) and of the short words."""
        mats = self.matrices()
        g = len(self.quaternions)
        traces = sorted(2 * q[0] for q in self.quaternions)
        for word in SHORT_WORDS:
            if max(abs(x) for x in word) <= g:
                traces.append(float(np.trace(_word(word, mats)).real))
        return np.array(traces)

    def to_json(self):
        return {
            "quaternions": [[format_float(x) for x in q] for q in self.quaternions],
            "residual": format_float(self.residual),
            "non_cyclic": self.non_cyclic,
        }


class _RelatorSystem:
    def __init__(self, pres):
        self.generators = pres.generator_count
        self.relators = pres.relators

    def _matrices(self, x):
        qs = x.reshape(self.generators, 4)
        norms = np.linalg.norm(qs, axis=1)
        return {k: quaternion_matrix(q / n) for k, (q, n) in enumerate(zip(qs, norms), 1)}, norms

    def residuals(self, x):
        mats, norms = self._matrices(x)
        parts = [norms**2 - 1]
        for r in self.relators:
            diff = _word(r, mats) - _I2
            parts.append(diff.real.ravel())
            parts.append(diff.imag.ravel())
        return np.concatenate(parts)

    def defect(self, mats):
        """Largest relator defect in operator norm."""
        if not self.relators:
            return 0.0
        return max(np.linalg.norm(_word(r, mats) - _I2, 2) for r in self.relators)


def _non_cyclic(mats):
    keys = sorted(mats)
    return any(
        _commutator_defect(mats[i], mats[j]) > NON_CYCLIC_TOL
        for n, i in enumerate(keys)
        for j in keys[n + 1 :]
    )


def find_su2(pres, attempts=200, tol=1e-10, seed=0):
    """Multi-start search for SU(2) representations of a presentation.

    Args:
        pres (GroupPresentation): Any finite presentation.
        attempts (int): Random starting points.
        tol (float): Largest accepted relator defect.
        seed (int): Seed for the starting points.

    Returns:
        list: SU2Rep objects up to conjugation, sorted by residual then
        quaternion data. Deterministic for a given seed.
    """
    if attempts < 1 or tol <= 0:
        raise ValueError("attempts must be positive and tol > 0")
    system = _RelatorSystem(pres)
    rng = np.random.default_rng(seed)
    found, signatures = [], []
    for _ in range(attempts):
        x0 = rng.normal(size=4 * system.generators)
        try:
            sol = least_squares(
                system.residuals, x0, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400
            )
        except (ValueError, np.linalg.LinAlgError):
            continue
        qs = sol.x.reshape(system.generators, 4)
        qs = qs / np.linalg.norm(qs, axis=1)[:, None]
        rep = SU2Rep(tuple(tuple(float(v) for v in q) for q in qs), 0.0, False)
        mats = rep.matrices()
        residual = float(system.defect(mats))
        if residual >= tol:
            continue
        rep = SU2Rep(rep.quaternions, residual, _non_cyclic(mats))
        sig = rep.signature()
        if any(np.max(np.abs(sig - other)) < DEDUP_TOL for other in signatures):
            continue
        found.append(rep)
        signatures.append(sig)
    return sorted(found, key=lambda r: (r.residual, r.quaternions))


# boundary


@dataclass(frozen=True)
class BoundaryPoint:
    """Eigenvalue pair of the meridian and longitude images, on the unit torus."""

    m_eigenvalue: complex
    l_eigenvalue: complex
    filling: FillingSpec = None

    def distance(self, other):
        return float(
            np.hypot(
                abs(self.m_eigenvalue - other.m_eigenvalue),
                abs(self.l_eigenvalue - other.l_eigenvalue),
            )
        )

    def filling_defect(self):
        """``|m^p l^q - 1|``, zero for a representation of the filled group."""
        if self.filling is None:
            return None
        p, q = self.filling.p, self.filling.q
        return abs(self.m_eigenvalue**p * self.l_eigenvalue**q - 1)

    def to_json(self):
        out = {
            "m": format_complex(self.m_eigenvalue),
            "l": format_complex(self.l_eigenvalue),
            "filling": None if self.filling is None else str(self.filling),
            "l_trivial": l_is_trivial(self),
        }
        if self.filling is not None:
            out["filling_defect"] = format_float(self.filling_defect())
        return out


def _distance_from_center(x):
    return min(np.linalg.norm(x - _I2, 2), np.linalg.norm(x + _I2, 2))


def _unit(z):
    z = complex(z)
    return z / abs(z) if abs(z) else z


def boundary_point(rep, periph, filling=None):
    """Simultaneous eigenvalues ``(m, l)`` of the peripheral images.

    The matrix farther from ±I is diagonalized and the other is read in
    that frame. Of the two pairs ``(m, l)`` and ``(1/m, 1/l)`` the one with
    ``Im(m) >= 0`` is returned (ties: ``Im(l) >= 0``).

    Raises:
        NonCommutingBoundary: The meridian and longitude images do not commute.
    """
    mats = rep.matrices()
    mu, lam = _word(periph.meridian, mats), _word(periph.longitude, mats)
    if np.linalg.norm(mu @ lam - lam @ mu, 2) > COMMUTE_TOL:
        raise NonCommutingBoundary("Meridian and longitude images do not commute")
    base = mu if _distance_from_center(mu) >= _distance_from_center(lam) else lam
    if _distance_from_center(base) < 1e-12:
        pairs = [(mu[0, 0], lam[0, 0]), (mu[1, 1], lam[1, 1])]
    else:
        _, vecs = np.linalg.eig(base)
        inv = np.linalg.inv(vecs)
        dm, dl = inv @ mu @ vecs, inv @ lam @ vecs
        pairs = [(dm[0, 0], dl[0, 0]), (dm[1, 1], dl[1, 1])]
    pairs = [(_unit(a), _unit(b)) for a, b in pairs]

    def key(pair):
        m, lv = pair
        return (m.imag if abs(m.imag) > 1e-12 else 0.0, lv.imag)

    m, lv = max(pairs, key=key)
    return BoundaryPoint(m, lv, filling)


def l_is_trivial(point, tol=1e-8):
    return abs(point.l_eigenvalue - 1) < tol


def apoly_residual(point, apoly):
    """``|A(m, l)| / (1 + |A|_1)``."""
    value = apoly.evaluate({"M": point.m_eigenvalue, "L": point.l_eigenvalue})
    return abs(value) / (1.0 + float(apoly.l1_norm()))


def pairwise_distinct(points, tol=DISTINCT_TOL):
    """Whether all points are farther apart than ``tol``, and the closest distance."""
    closest = None
    for i, a in enumerate(points):
        for b in points[i + 1 :]:
            d = a.distance(b)
            closest = d if closest is None else min(closest, d)
    return (closest is None or closest > tol), closest


# lattices


def lattice_basis(vectors):
    """Hermite basis ``[(a, b), (0, d)]`` of the subgroup of Z^2 generated.

    Either vector is omitted when absent; ``a > 0``, ``d > 0`` and
    ``0 <= b < d`` when both are present.
    """
    h1, d = None, 0
    for x, y in vectors:
        x, y = int(x), int(y)
        if x == 0:
            d = gcd(d, y)
            continue
        if h1 is None:
            h1 = (x, y) if x > 0 else (-x, -y)
            continue
        a, b = h1
        g, s, t = _xgcd(a, x)
        h1 = (g, s * b + t * y)
        d = gcd(d, (x // g) * b - (a // g) * y)
    basis = []
    if h1 is not None:
        a, b = h1
        basis.append((a, b % d if d else b))
    if d:
        basis.append((0, d))
    return basis


def _xgcd(a, b):
    """``(g, s, t)`` with ``g = s*a + t*b = gcd(a, b) > 0``."""
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def in_subgroup(v, basis):
    """Exact membership of ``v`` in the subgroup with the given Hermite basis."""
    x, y = v
    if not basis:
        return x == 0 and y == 0
    first = basis[0]
    if first[0] == 0:
        return x == 0 and y % first[1] == 0
    a, b = first
    if x % a:
        return False
    rest = y - (x // a) * b
    if len(basis) == 1:
        return rest == 0
    return rest % basis[1][1] == 0


def subgroup_index(basis):
    """Index in Z^2, or None for rank below 2."""
    if len(basis) == 2:
        return basis[0][0] * basis[1][1]
    return None


@dataclass(frozen=True)
class LatticeFamily:
    """Subgroups of Z^2 and a line ``base + k*direction`` missing the origin."""

    base: tuple
    direction: tuple
    subgroups: tuple
    excluded_point: tuple = None


def lattice_lemma_check(family, window):
    """Exact report on how the subgroups cover the lattice points of the line.

    Points ``base + k*direction`` with ``|k| <= window`` are tested against
    every subgroup. When all subgroups have rank 2 and miss the excluded
    point, which must lie on the line, some multiple of the direction lies
    in all of them, and the uncovered count must grow between ``window`` and ``2*window``.

    Raises:
        LineThroughOrigin: The line passes through the origin.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    (bx, by), (dx, dy) = family.base, family.direction
    if dx == 0 and dy == 0:
        raise LineThroughOrigin("The direction vector is zero")
    if bx * dy - by * dx == 0:
        raise LineThroughOrigin(f"The line through {list(family.base)} meets the origin")
    g = gcd(dx, dy)
    dx, dy = dx // g, dy // g

    bases = [lattice_basis(s) for s in family.subgroups]

    def point(k):
        return (bx + k * dx, by + k * dy)

    def covering(k):
        p = point(k)
        return [i for i, b in enumerate(bases) if in_subgroup(p, b)]

    def uncovered(w):
        return sum(1 for k in range(-w, w + 1) if not covering(k))

    covered = []
    for k in range(-window, window + 1):
        hits = covering(k)
        if hits:
            covered.append({"k": k, "point": list(point(k)), "subgroups": hits})

    excluded_ok, on_line = None, None
    if family.excluded_point is not None:
        ex, ey = family.excluded_point
        on_line = (ex - bx) * dy - (ey - by) * dx == 0
        excluded_ok = not any(in_subgroup(family.excluded_point, b) for b in bases)

    ranks = [len(b) for b in bases]
    all_rank_two = bool(bases) and all(r == 2 for r in ranks)
    period, h_infinite = None, False
    if all_rank_two:
        period = lcm(*(subgroup_index(b) for b in bases))
        h_infinite = all(in_subgroup((period * dx, period * dy), b) for b in bases)

    small, large = uncovered(window), uncovered(2 * window)
    hypotheses = all_rank_two and on_line is True and excluded_ok is True and h_infinite
    return {
        "line": {"base": [bx, by], "direction": [dx, dy]},
        "window": window,
        "covered": covered,
        "uncovered_count": small,
        "uncovered_count_double": large,
        "grows": large > small,
        "excluded_point": None if family.excluded_point is None else list(family.excluded_point),
        "excluded_on_line": on_line,
        "excluded_ok": excluded_ok,
        "ranks": ranks,
        "all_rank_two": all_rank_two,
        "h_period": period,
        "h_infinite": h_infinite,
        "hypotheses_hold": hypotheses,
        "consistent": (not hypotheses) or large > small,
    }


def boundary_kernel(point, bound=12, tol=KERNEL_TOL):
    """Hermite generators of ``{(a, b) : m^a l^b = 1}`` found with ``|a|, |b| <= bound``."""
    hits = []
    for a in range(-bound, bound + 1):
        ma = point.m_eigenvalue**a
        for b in range(-bound, bound + 1):
            if (a or b) and abs(ma * point.l_eigenvalue**b - 1) < tol:
                hits.append((a, b))
    return lattice_basis(hits)


def scan_family(points, bound=12):
    """Boundary kernels of the points on the line ``x = 1``, excluding ``(1, 0)``."""
    return LatticeFamily(
        base=(1, 0),
        direction=(0, 1),
        subgroups=tuple(tuple(boundary_kernel(p, bound)) for p in points),
        excluded_point=(1, 0),
    )


def scan_fillings(
    pres, periph, fillings, attempts=200, tol=1e-10, seed=0, apoly=None, window=50, verbose=False
):
    """Search every filling, collect boundary points, compare them.

    Returns:
        dict: JSON-ready report with one entry per filling, pairwise
        distinctness of the first non-cyclic boundary point of each filling
        and the lattice check of their kernels.
    """
    entries, firsts = [], []
    for slope in fillings:
        filled = filled_presentation(pres, periph, slope)
        say(f"Filling {slope}: searching {attempts} starts", verbose)
        reps = find_su2(filled, attempts=attempts, tol=tol, seed=seed)
        non_cyclic = [r for r in reps if r.non_cyclic]
        points, errors = [], []
        for rep in non_cyclic:
            try:
                points.append(boundary_point(rep, periph, slope))
            except NonCommutingBoundary as err:
                errors.append(str(err))
        entry = {
            "filling": str(slope),
            "status": "found" if non_cyclic else "not found within budget",
            "representations": len(reps),
            "non_cyclic": [r.to_json() for r in non_cyclic],
            "boundary_points": [p.to_json() for p in points],
            "errors": errors,
        }
        if apoly is not None:
            entry["apoly_residuals"] = [format_float(apoly_residual(p, apoly)) for p in points]
        say(
            f"Filling {slope}: {len(reps)} representations, {len(non_cyclic)} non-cyclic",
            verbose,
            "pos" if non_cyclic else "neu",
        )
        entries.append(entry)
        if points:
            firsts.append(points[0])

    distinct, closest = pairwise_distinct(firsts)
    report = {
        "fillings": entries,
        "distinct": distinct,
        "min_distance": None if closest is None else format_float(closest),
        "lattice": None,
    }
    if firsts:
        report["lattice"] = lattice_lemma_check(scan_family(firsts), window)
    return report
