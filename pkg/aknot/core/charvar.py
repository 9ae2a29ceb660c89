"""SL(2,C) representation systems of knot groups.

The meridian is sent to ``[[M, 1], [0, 1/M]]``. Matrices carry a common
``1/M**shift`` factor so entries stay polynomial; every equation built here
has its powers of ``M`` cleared, and the power multiplied in is recorded.
"""

from dataclasses import dataclass, field

import numpy as np

from aknot.core.errors import MeridianNotGenerator
from aknot.core.knotio import word_inverse
from aknot.core.mpoly import SparsePoly, content_primitive, primitive

BOUNDARY = ("M", "L")


class LaurentMatrix:
    """A 2x2 matrix of polynomials divided by ``M**shift``."""

    __slots__ = ("entries", "shift")

    def __init__(self, entries, shift=0):
        self.entries = tuple(entries)
        self.shift = shift

    @classmethod
    def identity(cls, names):
        one = SparsePoly.constant(1, names)
        zero = SparsePoly.zero(names)
        return cls((one, zero, zero, one))

    def __matmul__(self, other):
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        product = LaurentMatrix(
            (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h),
            self.shift + other.shift,
        )
        return product.reduced()

    def adjugate(self):
        """Inverse of a determinant-one matrix."""
        a, b, c, d = self.entries
        return LaurentMatrix((d, -b, -c, a), self.shift)

    def reduced(self):
        nonzero = [e for e in self.entries if not e.is_zero()]
        if not nonzero:
            return self
        low = min(e.min_degree("M") for e in nonzero)
        if not low:
            return self
        return LaurentMatrix(
            tuple(_shift_m(e, -low) for e in self.entries), self.shift - low
        )

    def evaluate(self, point):
        values = [e.evaluate(point) for e in self.entries]
        return np.array(values, dtype=complex).reshape(2, 2) / point["M"] ** self.shift


def _shift_m(poly, k):
    """Multiply by ``M**k``; ``k`` may be negative when ``M**-k`` divides."""
    if k == 0 or poly.is_zero():
        return poly
    if "M" not in poly.names:
        poly = poly.with_names(poly.names + ("M",))
    i = poly.names.index("M")
    terms = {}
    for monom, coeff in poly.terms():
        exps = list(monom)
        exps[i] += k
        terms[tuple(exps)] = coeff
    return SparsePoly.from_terms(poly.names, terms, poly.order)


def strip_boundary_monomials(poly, variables=("M",)):
    """Divide out the largest power of each (invertible) boundary variable."""
    for var in variables:
        if var in poly.names and not poly.is_zero():
            low = poly.min_degree(var)
            if low:
                if var == "M":
                    poly = _shift_m(poly, -low)
                else:
                    shift = [0] * len(poly.names)
                    shift[poly.names.index(var)] = low
                    poly = SparsePoly.from_terms(
                        poly.names,
                        {
                            tuple(e - s for e, s in zip(m, shift)): c
                            for m, c in poly.terms()
                        },
                        poly.order,
                    )
    return poly


def _clean(poly):
    if poly.is_zero():
        return None
    return primitive(strip_boundary_monomials(poly))


def _entry_equations(left, right):
    """Equations ``left == right`` entrywise, with the cleared power of M."""
    top = max(left.shift, right.shift)
    out = []
    for x, y in zip(left.entries, right.entries):
        out.append((_shift_m(x, top - left.shift) - _shift_m(y, top - right.shift), top))
    return out


def word_matrix(word, matrices, names):
    result = LaurentMatrix.identity(names)
    for letter in word:
        m = matrices[abs(letter)]
        result = result @ (m if letter > 0 else m.adjugate())
    return result


def meridian_matrix(names):
    M = SparsePoly.var("M", names)
    one = SparsePoly.constant(1, names)
    return LaurentMatrix((M**2, M, SparsePoly.zero(names), one), 1)


def _longitude_equations(lam, names):
    L = SparsePoly.var("L", names)
    a, _, c, _ = lam.entries
    if lam.shift >= 0:
        diag = a - L * SparsePoly.var("M", names) ** lam.shift
        cleared = lam.shift
    else:
        diag = _shift_m(a, -lam.shift) - L
        cleared = 0
    return [(c, cleared, "longitude (2,1)"), (diag, cleared, "longitude (1,1)")]


@dataclass(frozen=True)
class RepSystem:
    """Polynomial system for representations with boundary eigenvalues M, L.

    ``unknowns`` lists every ring variable, the matrix entries first and
    ``M``, ``L`` last; ``cleared_denominators[i]`` is the power of ``M``
    multiplied into ``equations[i]``.
    """

    unknowns: tuple
    equations: tuple
    labels: tuple
    cleared_denominators: tuple
    meridian_generator: int
    generic: tuple
    presentation: object = None
    peripheral: object = None
    distinguished: tuple = BOUNDARY


def _check_meridian(periph):
    if len(periph.meridian) != 1 or periph.meridian[0] <= 0:
        raise MeridianNotGenerator(
            f"Meridian word {list(periph.meridian)} is not a single generator"
        )
    return periph.meridian[0]


def _collect(raw):
    equations, labels, cleared = [], [], []
    for poly, power, label in raw:
        poly = _clean(poly)
        if poly is not None:
            equations.append(poly)
            labels.append(label)
            cleared.append(power)
    return tuple(equations), tuple(labels), tuple(cleared)


def build_rep_system(pres, periph):
    """Generic system: one 2x2 unknown matrix per non-meridian generator.

    Raises:
        MeridianNotGenerator: If the meridian word is not one generator.
    """
    mer = _check_meridian(periph)
    generic = tuple(k for k in range(1, pres.generator_count + 1) if k != mer)
    names = tuple(f"{x}{k}" for k in generic for x in "abcd") + BOUNDARY
    matrices = {mer: meridian_matrix(names)}
    raw = []
    for k in generic:
        a, b, c, d = (SparsePoly.var(f"{x}{k}", names) for x in "abcd")
        matrices[k] = LaurentMatrix((a, b, c, d))
        raw.append((a * d - b * c - 1, 0, f"det x{k}"))
    for i, r in enumerate(pres.relators, start=1):
        raw.extend(_relator_equations(r, matrices, names, f"relator {i}"))
    lam = word_matrix(periph.longitude, matrices, names)
    raw.extend(_longitude_equations(lam, names))
    equations, labels, cleared = _collect(raw)
    return RepSystem(
        unknowns=names,
        equations=equations,
        labels=labels,
        cleared_denominators=cleared,
        meridian_generator=mer,
        generic=generic,
        presentation=pres,
        peripheral=periph,
    )


def _relator_equations(relator, matrices, names, label):
    half = len(relator) // 2
    left = word_matrix(relator[:half], matrices, names)
    right = word_matrix(word_inverse(relator[half:]), matrices, names)
    out = []
    for (poly, power), entry in zip(_entry_equations(left, right), ("1,1", "1,2", "2,1", "2,2")):
        out.append((poly, power, f"{label} ({entry})"))
    return out


def _abelian_value(poly, generic):
    values = {"L": 1}
    for k in generic:
        values[f"b{k}"] = 1
        values[f"c{k}"] = 0
    p = poly.substitute(values)
    M = SparsePoly.var("M", p.names)
    p = p.substitute({f"a{k}": M for k in generic})
    for k in generic:
        parts = p.coefficients_in(f"d{k}")
        if not parts:
            continue
        top = max(parts)
        acc = SparsePoly.zero(p.names)
        for j, c in parts.items():
            acc = acc + c * M ** (top - j)
        p = acc
    return p


def reducible_locus_check(sys):
    """True iff the abelian representation (every generator sent to the
    meridian matrix) satisfies every equation with ``L = 1``."""
    return all(_abelian_value(eq, sys.generic).is_zero() for eq in sys.equations)


def involution_image(p):
    """Image under ``(M, L) -> (1/M, 1/L)``, cleared and content-normalized."""
    p = p.with_names(BOUNDARY)
    if p.is_zero():
        return p
    terms = p.terms()
    top = [max(m[i] for m, _ in terms) for i in range(2)]
    flipped = {(top[0] - m[0], top[1] - m[1]): c for m, c in terms}
    return primitive(SparsePoly.from_terms(BOUNDARY, flipped))


def equal_up_to_unit(p, q):
    """Equality up to a monomial and a rational scalar."""
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    _, a = p.strip_monomial_factor()
    _, b = q.strip_monomial_factor()
    return content_primitive(a)[1] == content_primitive(b)[1]


def is_involution_symmetric(p):
    return equal_up_to_unit(involution_image(p), p)


def dump_system(sys):
    """JSON manifest of a system for ``--dump-system``."""
    return {
        "unknowns": list(sys.unknowns),
        "distinguished": list(sys.distinguished),
        "equations": [
            {"label": label, "cleared_m_power": power, "poly": eq.to_json()}
            for eq, label, power in zip(sys.equations, sys.labels, sys.cleared_denominators)
        ],
    }


# branch reduction


@dataclass(frozen=True)
class RepBranch:
    """One piece of the reduced system after pinning the first seed.

    ``matrices`` maps every generator to its matrix in the branch unknowns.
    """

    label: str
    unknowns: tuple
    equations: tuple
    labels: tuple
    matrices: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def names(self):
        return self.unknowns + BOUNDARY


def _wirtinger_triples(pres):
    triples = []
    for r in pres.relators:
        if len(r) != 4 or r[0] != -r[2]:
            return None
        e = 1 if r[2] > 0 else -1
        triples.append((abs(r[0]), r[1], -r[3], e))
    return triples


def _closure(known, triples):
    """Generators determined by ``known``; returns (known, derivation steps)."""
    known = set(known)
    steps = []
    used = set()
    changed = True
    while changed:
        changed = False
        for i, (o, a, b, e) in enumerate(triples):
            if i in used or o not in known:
                continue
            if a in known and b not in known:
                steps.append((i, b, "out"))
            elif b in known and a not in known:
                steps.append((i, a, "in"))
            else:
                continue
            known.add(steps[-1][1])
            used.add(i)
            changed = True
    return known, steps


def choose_seeds(pres, meridian):
    """Greedy seed arcs whose conjugation closure covers every generator.

    Returns:
        tuple: (seed generators, derivation steps ``(relator, generator, side)``).
    """
    triples = _wirtinger_triples(pres)
    everything = set(range(1, pres.generator_count + 1))
    if triples is None:
        return sorted(everything - {meridian}), []
    seeds = []
    known, steps = _closure({meridian}, triples)
    while known != everything:
        best = None
        for g in sorted(everything - known):
            size = len(_closure(known | {g}, triples)[0])
            if best is None or size > best[0]:
                best = (size, g)
        seeds.append(best[1])
        known, steps = _closure({meridian, *seeds}, triples)
    return seeds, steps


def _seed_matrix(index, pin, names):
    """Seed matrices with trace ``M + 1/M``, all divided by ``M``."""
    M = SparsePoly.var("M", names)
    T = M**2 + 1
    p = SparsePoly.var(f"p{index}", names)
    zero = SparsePoly.zero(names)
    if pin == 1:
        return (
            LaurentMatrix((M * p, p * T - M * p**2 - M, M, T - M * p), 1),
            [],
        )
    q = SparsePoly.var(f"q{index}", names)
    if pin == 0:
        det = (M * p - 1) * (p - M)
        return LaurentMatrix((M * p, M * q, zero, T - M * p), 1), [det]
    s = SparsePoly.var(f"s{index}", names)
    det = p * T - M * p**2 - M * q * s - M
    return LaurentMatrix((M * p, M * q, M * s, T - M * p), 1), [det]


def _seed_unknowns(index, pin):
    if pin == 1:
        return (f"p{index}",)
    if pin == 0:
        return (f"p{index}", f"q{index}")
    return (f"p{index}", f"q{index}", f"s{index}")


def reduce_rep_system(sys):
    """Split the system into pinned branches over a few seed generators.

    The first seed's (2,1) entry is pinned to 1 (branch ``c21=1``) or 0
    (branch ``c21=0``); generators reachable by conjugation are derived
    from the seeds, and only the relators not used for that derivation
    contribute equations.

    Returns:
        list: RepBranch objects, the pinned-to-1 branch first.
    """
    pres, periph = sys.presentation, sys.peripheral
    mer = sys.meridian_generator
    seeds, steps = choose_seeds(pres, mer)
    triples = _wirtinger_triples(pres)
    used = {i for i, _, _ in steps}
    pins = (1, 0) if seeds else (None,)
    branches = []
    for pin in pins:
        unknowns = []
        for j, _ in enumerate(seeds, start=1):
            unknowns.extend(_seed_unknowns(j, pin if j == 1 else None))
        unknowns = tuple(unknowns)
        names = unknowns + BOUNDARY
        matrices = {mer: meridian_matrix(names)}
        raw = []
        for j, g in enumerate(seeds, start=1):
            matrix, dets = _seed_matrix(j, pin if j == 1 else None, names)
            matrices[g] = matrix
            raw.extend((det, 1, f"det seed {j}") for det in dets)
        for i, g, side in steps:
            o, a, b, e = triples[i]
            xo = matrices[o] if e > 0 else matrices[o].adjugate()
            xo_inv = xo.adjugate()
            if side == "out":
                matrices[g] = xo_inv @ matrices[a] @ xo
            else:
                matrices[g] = xo @ matrices[b] @ xo_inv
        for i, r in enumerate(pres.relators, start=1):
            if i - 1 not in used:
                raw.extend(_relator_equations(r, matrices, names, f"relator {i}"))
        lam = word_matrix(periph.longitude, matrices, names)
        raw.extend(_longitude_equations(lam, names))
        equations, labels, _ = _collect(raw)
        label = "meridian" if pin is None else f"c21={pin}"
        branches.append(RepBranch(label, unknowns, equations, labels, matrices))
    return branches
