"""Knot diagram codes, Wirtinger presentations and peripheral systems.

A diagram is stored as the sequence of crossing visits met while walking the
knot once. Edge ``t`` runs from visit ``t`` to visit ``t + 1`` (edge ``2n``
closes back to visit 1), so every crossing record names its incoming and
outgoing under-edge and over-edge.

Chirality conventions:
    - Positive crossings are right-handed.
    - DT codes fix no chirality; the mirror is chosen so that the crossing
      carrying DT label 1 is positive. A positive DT entry means the even
      visit passes under.
    - PD codes follow the ``X[i,j,k,l]`` format: ``i`` is the incoming
      under-edge and labels run counterclockwise. The crossing is positive
      when the over-strand runs from ``l`` to ``j``.
    - Braid letter ``i`` is a positive crossing where the strand at position
      ``i`` passes over the strand at position ``i + 1``.
"""

import itertools
import re
from dataclasses import dataclass
from importlib import resources
from math import gcd

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form
from sympy.ntheory import isprime
from sympy.polys.domains import FF
from sympy.polys.matrices import DomainMatrix

from aknot.core.errors import (
    InconsistentArcs,
    LinkNotKnot,
    MalformedCode,
    NonCoprime,
    Unrealizable,
)

KNOT_TABLE = "knots_8.txt"

_INT_TOKEN = re.compile(r"^[+-]?\d+$")
_PD_TUPLE = re.compile(r"X\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")


@dataclass(frozen=True)
class Crossing:
    """One crossing: the four incident edges and the sign."""

    under_in: int
    under_out: int
    over_in: int
    over_out: int
    sign: int


@dataclass(frozen=True)
class KnotDiagram:
    crossings: tuple = ()

    @property
    def size(self):
        return len(self.crossings)

    @property
    def arcs(self):
        """Number of edge labels, ``2n`` for ``n`` crossings."""
        return 2 * len(self.crossings)

    def visit(self, t):
        """Crossing index and over/under flag of visit ``t`` (1-based)."""
        for index, c in enumerate(self.crossings):
            if c.under_out == t:
                return index, False
            if c.over_out == t:
                return index, True
        raise IndexError(f"No visit {t} in a diagram with {self.arcs} edges")


@dataclass(frozen=True)
class GroupPresentation:
    """Generators are ``1..generator_count``; a word is a tuple of signed indices."""

    generator_count: int
    relators: tuple = ()


@dataclass(frozen=True)
class PeripheralSystem:
    meridian: tuple
    longitude: tuple
    writhe_correction: int = 0


@dataclass(frozen=True)
class FillingSpec:
    """Dehn filling slope ``p/q``, realized by the relator ``mu^p lambda^q``."""

    p: int
    q: int

    @classmethod
    def parse(cls, text):
        """Parse ``"p/q"`` or ``"p"``; raises NonCoprime for non-coprime pairs."""
        parts = text.strip().split("/")
        if len(parts) > 2 or not all(_INT_TOKEN.match(x.strip()) for x in parts):
            raise MalformedCode(f"Invalid filling slope '{text}'")
        p = int(parts[0])
        q = int(parts[1]) if len(parts) == 2 else 1
        spec = cls(p, q)
        spec.check()
        return spec

    def check(self):
        if gcd(self.p, self.q) != 1:
            raise NonCoprime(f"Filling slope {self.p}/{self.q} is not coprime")

    def __str__(self):
        return f"{self.p}/{self.q}"


# words


def free_reduce(word):
    out = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def word_inverse(word):
    return tuple(-x for x in reversed(word))


def word_power(word, n):
    base = word if n >= 0 else word_inverse(word)
    return free_reduce(tuple(base) * abs(n))


def exponent_sum(word, generator=None):
    if generator is None:
        return sum(1 if x > 0 else -1 for x in word)
    return sum((1 if x > 0 else -1) for x in word if abs(x) == generator)


# parsing


def _tokens(code):
    return [t for t in re.split(r"[\s,]+", code.strip()) if t]


def _from_visits(visits, signs):
    """Build a diagram from the visit sequence ``[(crossing, is_over), ...]``."""
    edges = len(visits)
    slots = {}
    for t, (index, is_over) in enumerate(visits, start=1):
        incoming = t - 1 if t > 1 else edges
        role = "over" if is_over else "under"
        if (index, role) in slots:
            raise InconsistentArcs(f"Crossing {index + 1} is passed {role} twice")
        slots[(index, role)] = (incoming, t)
    crossings = []
    for index, sign in enumerate(signs):
        if (index, "over") not in slots or (index, "under") not in slots:
            raise InconsistentArcs(f"Crossing {index + 1} is not visited twice")
        ui, uo = slots[(index, "under")]
        oi, oo = slots[(index, "over")]
        crossings.append(Crossing(ui, uo, oi, oo, sign))
    return KnotDiagram(tuple(crossings))


def _face_count(pairs, flips):
    """Faces of the rotation system chosen by ``flips`` (one +-1 per crossing)."""
    edges = 2 * len(pairs)
    rotation = {}
    for (odd, even), t in zip(pairs, flips):
        if t > 0:
            cycle = [(odd, 0), (even, 0), (odd, 1), (even, 1)]
        else:
            cycle = [(odd, 0), (even, 1), (odd, 1), (even, 0)]
        for k in range(4):
            rotation[cycle[k]] = cycle[(k + 1) % 4]

    def across(dart):
        visit, out = dart
        if out:
            return (visit % edges + 1, 0)
        return ((visit - 2) % edges + 1, 1)

    seen = set()
    faces = 0
    for dart in rotation:
        if dart in seen:
            continue
        faces += 1
        while dart not in seen:
            seen.add(dart)
            dart = rotation[across(dart)]
    return faces


def parse_dt(code):
    """Parse a Dowker-Thistlethwaite code such as ``"4 6 2"``.

    Args:
        code (str): Even integers separated by whitespace or commas. The empty
            string is the unknot.

    Returns:
        KnotDiagram: A diagram realizing the code.

    Raises:
        MalformedCode: If the text is not a valid DT sequence.
        Unrealizable: If no planar diagram realizes the sequence.
    """
    tokens = _tokens(code)
    if not tokens:
        return KnotDiagram()
    if not all(_INT_TOKEN.match(t) for t in tokens):
        raise MalformedCode(f"DT code '{code}' must contain only integers")
    values = [int(t) for t in tokens]
    n = len(values)
    if sorted(abs(v) for v in values) != list(range(2, 2 * n + 1, 2)):
        raise MalformedCode(
            f"DT code '{code}' must use each of 2, 4, ..., {2 * n} exactly once"
        )
    if n == 1:
        raise MalformedCode("A one-crossing DT code describes a reducible kink")

    pairs = [(2 * i + 1, abs(v)) for i, v in enumerate(values)]
    target = n + 2
    for rest in itertools.product((1, -1), repeat=n - 1):
        flips = (1,) + rest
        if _face_count(pairs, flips) == target:
            break
    else:
        raise Unrealizable(f"DT code '{code}' has no planar realization")

    odd_over = [v > 0 for v in values]
    signs = [t if over else -t for t, over in zip(flips, odd_over)]
    if signs[0] < 0:
        signs = [-s for s in signs]

    visits = [None] * (2 * n)
    for index, ((odd, even), over) in enumerate(zip(pairs, odd_over)):
        visits[odd - 1] = (index, over)
        visits[even - 1] = (index, not over)
    return _from_visits(visits, signs)


def parse_pd(code):
    """Parse a planar diagram code such as ``"X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]"``.

    Raises:
        MalformedCode: If the text is not a list of ``X[a,b,c,d]`` tuples.
        InconsistentArcs: If a label does not occur exactly twice or the
            strands cannot be oriented consistently.
        LinkNotKnot: If the diagram has more than one component.
    """
    text = code.strip()
    if text.startswith("PD[") and text.endswith("]"):
        text = text[3:-1]
    tuples = [tuple(int(x) for x in m.groups()) for m in _PD_TUPLE.finditer(text)]
    leftover = _PD_TUPLE.sub("", text)
    if re.sub(r"[\s,]+", "", leftover):
        raise MalformedCode(f"PD code '{code}' contains text outside X[a,b,c,d] tuples")
    if not tuples:
        return KnotDiagram()
    if any(x <= 0 for tup in tuples for x in tup):
        raise MalformedCode("PD labels must be positive integers")

    occurrences = {}
    for c, tup in enumerate(tuples):
        for i, label in enumerate(tup):
            occurrences.setdefault(label, []).append((c, i))
    bad = sorted(label for label, occ in occurrences.items() if len(occ) != 2)
    if bad:
        raise InconsistentArcs(f"PD labels {bad} do not appear exactly twice")

    # Walk the knot from the incoming under-edge of the first crossing.
    start = (0, 0)
    entry = start
    visits = []
    signs = {}
    entered = set()
    while True:
        c, i = entry
        if i == 2:
            raise InconsistentArcs(f"Crossing X{list(tuples[c])} is entered along its outgoing under-edge")
        if entry in entered:
            raise InconsistentArcs("PD strands cannot be oriented consistently")
        entered.add(entry)
        is_over = i in (1, 3)
        visits.append((c, is_over))
        if is_over:
            signs[c] = 1 if i == 3 else -1
        exit_ = (c, (i + 2) % 4)
        label = tuples[c][exit_[1]]
        a, b = occurrences[label]
        entry = b if a == exit_ else a
        if entry == start:
            break
    if len(visits) != 2 * len(tuples):
        raise LinkNotKnot("PD code describes a link with more than one component")
    if len(signs) != len(tuples):
        raise InconsistentArcs("Some crossing is never passed over")

    # Renumber crossings in order of first visit.
    order = {}
    for c, _ in visits:
        order.setdefault(c, len(order))
    renumbered = [(order[c], over) for c, over in visits]
    ordered_signs = [signs[c] for c in sorted(order, key=order.get)]
    return _from_visits(renumbered, ordered_signs)


def parse_braid(code):
    """Parse a braid word such as ``"1 -2 1 -2"`` and take its closure.

    Raises:
        MalformedCode: If a letter is zero or not an integer.
        LinkNotKnot: If the closure has more than one component.
    """
    tokens = _tokens(code)
    if not tokens:
        return KnotDiagram()
    if not all(_INT_TOKEN.match(t) for t in tokens):
        raise MalformedCode(f"Braid word '{code}' must contain only integers")
    word = [int(t) for t in tokens]
    if 0 in word:
        raise MalformedCode("Braid generators are numbered from 1")
    strands = max(abs(x) for x in word) + 1

    visits = []
    started = set()
    position = 1
    while position not in started:
        started.add(position)
        for k, letter in enumerate(word):
            i = abs(letter)
            if position == i:
                visits.append((k, letter > 0))
                position = i + 1
            elif position == i + 1:
                visits.append((k, letter < 0))
                position = i
    if len(started) != strands or position != 1:
        raise LinkNotKnot(f"Closure of braid '{code}' is not a knot")

    order = {}
    for k, _ in visits:
        order.setdefault(k, len(order))
    renumbered = [(order[k], over) for k, over in visits]
    signs = [1 if word[k] > 0 else -1 for k in sorted(order, key=order.get)]
    return _from_visits(renumbered, signs)


_PARSERS = {"dt": parse_dt, "pd": parse_pd, "braid": parse_braid}


def parse_code(fmt, code):
    if fmt not in _PARSERS:
        raise MalformedCode(f"Unknown code format '{fmt}'. Use one of {sorted(_PARSERS)}")
    return _PARSERS[fmt](code)


def canonical_code(fmt, code):
    """Code text with separators normalized: ``"4,6, 2"`` becomes ``"4 6 2"``.

    Text that does not tokenize cleanly only has its whitespace collapsed.
    """
    if fmt == "pd":
        text = code.strip()
        if text.startswith("PD[") and text.endswith("]"):
            text = text[3:-1]
        tuples = [tuple(int(x) for x in m.groups()) for m in _PD_TUPLE.finditer(text)]
        if tuples and not re.sub(r"[\s,]+", "", _PD_TUPLE.sub("", text)):
            return ", ".join("X[" + ",".join(str(x) for x in t) + "]" for t in tuples)
    else:
        tokens = _tokens(code)
        if all(_INT_TOKEN.match(t) for t in tokens):
            return " ".join(str(int(t)) for t in tokens)
    return " ".join(code.split())


def to_pd(diagram):
    """Render a diagram as KnotTheory-style ``X[...]`` tuples."""
    parts = []
    for c in diagram.crossings:
        if c.sign > 0:
            labels = (c.under_in, c.over_out, c.under_out, c.over_in)
        else:
            labels = (c.under_in, c.over_in, c.under_out, c.over_out)
        parts.append("X[" + ",".join(str(x) for x in labels) + "]")
    return ", ".join(parts)


def writhe(diagram):
    return sum(c.sign for c in diagram.crossings)


def load_knot_table():
    """Bundled DT codes of the prime knots up to eight crossings.

    Returns:
        list: ``(name, dt_code)`` pairs in table order.
    """
    return parse_knot_table(resources.files("aknot.data").joinpath(KNOT_TABLE).read_text())


def parse_knot_table(text):
    """``name code`` lines; blank lines and ``#`` comments are skipped."""
    table = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, _, code = line.partition(" ")
        table.append((name, code.strip()))
    return table


# presentations


def _arc_labels(diagram):
    """Map each edge to its Wirtinger arc; arcs break at under-visits."""
    edges = diagram.arcs
    under_visits = {c.under_out for c in diagram.crossings}
    arc = {1: 1}
    current = 1
    for t in range(2, edges + 1):
        if t in under_visits:
            current += 1
        arc[t] = current
    if 1 not in under_visits:
        arc = {e: 1 if a == current else a for e, a in arc.items()}
    return arc


def wirtinger(diagram):
    """Wirtinger presentation and peripheral system of a diagram.

    Each crossing gives the relator ``x_o^-e x_in x_o^e x_out^-1``. The
    meridian is the generator of the arc holding edge 1, and the longitude
    follows the knot from edge 1, picking up ``x_o^e`` at every
    undercrossing, then ``mu^-writhe``.

    Returns:
        tuple: (GroupPresentation, PeripheralSystem).
    """
    if not diagram.crossings:
        return GroupPresentation(1, ()), PeripheralSystem((1,), (), 0)

    arc = _arc_labels(diagram)
    by_under = {c.under_out: c for c in diagram.crossings}
    relators = []
    for t in sorted(by_under):
        c = by_under[t]
        o, e = arc[c.over_in], c.sign
        relators.append((-e * o, arc[c.under_in], e * o, -arc[c.under_out]))

    edges = diagram.arcs
    longitude = []
    for t in list(range(2, edges + 1)) + [1]:
        c = by_under.get(t)
        if c is not None:
            longitude.append(c.sign * arc[c.over_in])
    w = writhe(diagram)
    longitude.extend([-1 if w > 0 else 1] * abs(w))

    pres = GroupPresentation(diagram.size, tuple(relators))
    if abelian_invariants(pres) != [0]:
        raise InconsistentArcs("Diagram does not present a knot group")
    return pres, PeripheralSystem((1,), free_reduce(longitude), -w)


def filled_presentation(pres, periph, slope):
    """Append the filling relator ``mu^p lambda^q``.

    Raises:
        NonCoprime: If ``gcd(p, q) != 1``.
    """
    slope.check()
    relator = free_reduce(
        word_power(periph.meridian, slope.p) + word_power(periph.longitude, slope.q)
    )
    return GroupPresentation(pres.generator_count, pres.relators + (relator,))


def exponent_matrix(pres):
    return [
        [exponent_sum(r, g) for g in range(1, pres.generator_count + 1)]
        for r in pres.relators
    ]


def abelian_invariants(pres):
    """Invariant factors of the abelianization.

    Returns:
        list: Torsion orders followed by one ``0`` per free summand, so the
        trivial group is ``[]`` and the integers are ``[0]``.
    """
    g = pres.generator_count
    rows = exponent_matrix(pres)
    if not rows:
        return [0] * g
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    diagonal = [abs(int(snf[i, i])) for i in range(min(len(rows), g))]
    torsion = sorted(d for d in diagonal if d > 1)
    free = diagonal.count(0) + g - len(diagonal)
    return torsion + [0] * free


def fox_colorings(pres, p):
    """Count homomorphisms to the dihedral group of order ``2p`` sending
    every Wirtinger generator to a reflection (Fox ``p``-colorings).

    Args:
        pres (GroupPresentation): A Wirtinger presentation.
        p (int): An odd prime.
    """
    if p < 3 or not isprime(p):
        raise ValueError("Colorings are counted for odd primes only")
    g = pres.generator_count
    rows = []
    for r in pres.relators:
        if len(r) != 4 or abs(r[0]) != abs(r[2]) or r[0] != -r[2]:
            raise ValueError(f"Relator {r} is not a Wirtinger relator")
        row = [0] * g
        row[abs(r[0]) - 1] += 2
        row[r[1] - 1] -= 1
        row[-r[3] - 1] -= 1
        rows.append(row)
    rank = DomainMatrix.from_list(rows, FF(p)).rank() if rows else 0
    return p ** (g - rank)
