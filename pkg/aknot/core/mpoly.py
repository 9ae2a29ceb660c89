"""Exact sparse multivariate polynomials over the rationals.

``SparsePoly`` is an immutable wrapper around a sympy ``PolyElement`` over
``QQ``. Polynomials in different variable lists are aligned on the union of
their names before any arithmetic, so callers never manage rings by hand.
The resultant and the Buchberger completion are implemented here; gcd and
squarefree decomposition come from the sympy ring.
"""

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd as igcd
from math import lcm as ilcm

from sympy import Symbol
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.domains import QQ
from sympy.polys.orderings import ProductOrder, grevlex, lex
from sympy.polys.rings import PolyRing

from aknot.core.errors import (
    BothConstant,
    EliminationTimeout,
    NotDivisible,
    ZeroPolynomial,
)


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: ``lex``, ``degrevlex`` or ``block``.

    For ``block`` the first ``block_size`` variables form the elimination
    block; both blocks are compared by degrevlex.
    """

    kind: str = "degrevlex"
    block_size: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "degrevlex", "block"):
            raise ValueError(f"Unknown monomial order '{self.kind}'")
        if self.kind == "block" and self.block_size < 0:
            raise ValueError("block_size must be non-negative")

    def to_sympy(self):
        if self.kind == "lex":
            return lex
        if self.kind == "degrevlex":
            return grevlex
        k = self.block_size
        return ProductOrder((grevlex, lambda m: m[:k]), (grevlex, lambda m: m[k:]))


LEX = MonomialOrder("lex")
DEGREVLEX = MonomialOrder("degrevlex")


def block_order(block_size):
    return MonomialOrder("block", block_size)


@lru_cache(maxsize=512)
def _ring(names, order):
    return PolyRing([Symbol(n) for n in names], QQ, order.to_sympy())


def _to_qq(value):
    if isinstance(value, str):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    return QQ.convert(value)


def _to_fraction(c):
    return Fraction(int(c.numerator), int(c.denominator))


def _convert(element, names, ring):
    """Re-express ``element`` (whose ring has variable ``names``) in ``ring``."""
    target = [s.name for s in ring.symbols]
    if tuple(target) == tuple(names):
        if element.ring is ring:
            return element
        return ring.from_dict(dict(element))
    index = {n: i for i, n in enumerate(target)}
    width = len(target)
    out = {}
    for monom, coeff in element.items():
        exps = [0] * width
        for name, e in zip(names, monom):
            if e:
                if name not in index:
                    raise ValueError(f"Variable '{name}' is not in the target ring")
                exps[index[name]] = e
        out[tuple(exps)] = coeff
    return ring.from_dict(out)


class SparsePoly:
    """Immutable exact polynomial with named variables."""

    __slots__ = ("_p", "_names", "_order")

    def __init__(self, element, names, order=DEGREVLEX):
        self._p = element
        self._names = tuple(names)
        self._order = order

    # construction

    @classmethod
    def ring_for(cls, names, order=DEGREVLEX):
        return _ring(tuple(names), order)

    @classmethod
    def zero(cls, names=(), order=DEGREVLEX):
        return cls(_ring(tuple(names), order).zero, names, order)

    @classmethod
    def constant(cls, value, names=(), order=DEGREVLEX):
        ring = _ring(tuple(names), order)
        return cls(ring.ground_new(_to_qq(value)), names, order)

    @classmethod
    def var(cls, name, names=None, order=DEGREVLEX):
        names = tuple(names) if names is not None else (name,)
        ring = _ring(names, order)
        return cls(ring.gens[names.index(name)], names, order)

    @classmethod
    def gens(cls, names, order=DEGREVLEX):
        names = tuple(names)
        ring = _ring(names, order)
        return tuple(cls(g, names, order) for g in ring.gens)

    @classmethod
    def from_terms(cls, names, terms, order=DEGREVLEX):
        """Build from a mapping of exponent tuples to coefficients."""
        names = tuple(names)
        ring = _ring(names, order)
        data = {}
        for exps, coeff in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(names):
                raise ValueError("Exponent vector length does not match variables")
            if any(e < 0 for e in exps):
                raise ValueError("Negative exponents are not polynomial")
            c = _to_qq(coeff)
            if c:
                data[exps] = data.get(exps, QQ.zero) + c
        return cls(ring.from_dict({k: v for k, v in data.items() if v}), names, order)

    @classmethod
    def parse(cls, text, names=("M", "L"), order=DEGREVLEX):
        """Parse an expression such as ``"L*M^6 + 1"`` in the given variables."""
        names = tuple(names)
        local = {n: Symbol(n) for n in names}
        expr = parse_expr(text.replace("^", "**"), local_dict=local)
        stray = {s.name for s in expr.free_symbols} - set(names)
        if stray:
            raise ValueError(f"Unknown variables {sorted(stray)} in '{text}'")
        ring = _ring(names, order)
        return cls(ring.from_expr(expr), names, order)

    @classmethod
    def from_json(cls, data, order=DEGREVLEX):
        names = tuple(data["vars"])
        return cls.from_terms(
            names, {tuple(t["e"]): Fraction(t["c"]) for t in data["terms"]}, order
        )

    # accessors

    @property
    def names(self):
        return self._names

    @property
    def order(self):
        return self._order

    @property
    def element(self):
        return self._p

    @property
    def ring(self):
        return self._p.ring

    def is_zero(self):
        return not self._p

    def __bool__(self):
        return bool(self._p)

    def is_constant(self):
        return self._p.is_ground

    def is_monomial(self):
        return len(self._p) == 1

    def terms(self):
        """Terms ``(exponents, Fraction)`` in descending monomial order."""
        return [(m, _to_fraction(c)) for m, c in self._p.terms()]

    def coefficients(self):
        return [c for _, c in self.terms()]

    def leading_coefficient(self):
        if not self._p:
            return Fraction(0)
        return _to_fraction(self._p.LC)

    def leading_monomial(self):
        return self._p.LM

    def variables_used(self):
        used = set()
        for monom in self._p.itermonoms():
            used.update(n for n, e in zip(self._names, monom) if e)
        return tuple(n for n in self._names if n in used)

    def degree(self, var=None):
        """Degree in ``var``; total degree when ``var`` is None. Zero has degree -1."""
        if not self._p:
            return -1
        if var is None:
            return max(sum(m) for m in self._p.itermonoms())
        if var not in self._names:
            return 0
        i = self._names.index(var)
        return max(m[i] for m in self._p.itermonoms())

    def min_degree(self, var):
        if not self._p or var not in self._names:
            return 0
        i = self._names.index(var)
        return min(m[i] for m in self._p.itermonoms())

    def l1_norm(self):
        return sum(abs(c) for c in self.coefficients())

    # ring plumbing

    def with_names(self, names, order=None):
        """The same polynomial in a (super)set of variable names."""
        names = tuple(names)
        order = order or self._order
        if names == self._names and order == self._order:
            return self
        ring = _ring(names, order)
        return SparsePoly(_convert(self._p, self._names, ring), names, order)

    def drop_unused(self):
        return self.with_names(self.variables_used())

    def _lift(self, other):
        if isinstance(other, SparsePoly):
            return _align(self, other)
        return self, SparsePoly(
            self.ring.ground_new(_to_qq(other)), self._names, self._order
        )

    def _wrap(self, element):
        return SparsePoly(element, self._names, self._order)

    # arithmetic

    def __add__(self, other):
        a, b = self._lift(other)
        return a._wrap(a._p + b._p)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._lift(other)
        return a._wrap(a._p - b._p)

    def __rsub__(self, other):
        a, b = self._lift(other)
        return a._wrap(b._p - a._p)

    def __mul__(self, other):
        a, b = self._lift(other)
        return a._wrap(a._p * b._p)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self._p)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("Exponent must be a non-negative integer")
        return self._wrap(self._p**n)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            if isinstance(other, (int, Fraction)):
                return self._p == self.ring.ground_new(_to_qq(other))
            return NotImplemented
        a, b = _align(self, other)
        return dict(a._p) == dict(b._p)

    def __hash__(self):
        return hash(
            frozenset(
                (tuple((n, e) for n, e in zip(self._names, m) if e), c)
                for m, c in self.terms()
            )
        )

    def __repr__(self):
        return f"SparsePoly({self}, vars={list(self._names)})"

    def __str__(self):
        return str(self._p.as_expr()) if self._names else str(self.leading_coefficient())

    # calculus and evaluation

    def diff(self, var):
        if var not in self._names:
            return SparsePoly.zero(self._names, self._order)
        return self._wrap(self._p.diff(self.ring.gens[self._names.index(var)]))

    def coeff_in(self, var, k):
        """Coefficient of ``var**k`` as a polynomial in the remaining variables."""
        if var not in self._names:
            return self if k == 0 else SparsePoly.zero(self._names, self._order)
        return self._wrap(self._p.coeff_wrt(self._names.index(var), k))

    def coefficients_in(self, var):
        return {k: self.coeff_in(var, k) for k in range(self.degree(var) + 1)
                if self.coeff_in(var, k)}

    def substitute(self, values):
        """Substitute exact values or polynomials for variables."""
        result = self
        for name, value in values.items():
            if name not in result._names:
                continue
            pieces = result.coefficients_in(name)
            if isinstance(value, SparsePoly):
                acc = SparsePoly.zero(result._names, result._order)
                for k, c in pieces.items():
                    acc = acc + c * value**k
                result = acc
            else:
                v = _to_qq(value)
                acc = result.ring.zero
                for k, c in pieces.items():
                    acc += c._p * v**k
                result = result._wrap(acc)
        return result

    def evaluate(self, point):
        """Numerically evaluate at ``point`` (name -> complex)."""
        total = 0j
        for monom, coeff in self._p.items():
            term = complex(float(coeff))
            for name, e in zip(self._names, monom):
                if e:
                    term *= point[name] ** e
            total += term
        return total

    def magnitude(self, point):
        """Sum of absolute term values at ``point``; scales numeric residuals."""
        total = 0.0
        for monom, coeff in self._p.items():
            term = abs(float(coeff))
            for name, e in zip(self._names, monom):
                if e:
                    term *= abs(point[name]) ** e
            total += term
        return total

    def strip_monomial_factor(self):
        """Split off the largest monomial dividing the polynomial.

        Returns:
            tuple: (exponent tuple of the monomial, the remaining polynomial).
        """
        if not self._p:
            return tuple(0 for _ in self._names), self
        low = [min(m[i] for m in self._p.itermonoms()) for i in range(len(self._names))]
        if not any(low):
            return tuple(low), self
        shifted = {
            tuple(e - s for e, s in zip(m, low)): c for m, c in self._p.items()
        }
        return tuple(low), self._wrap(self.ring.from_dict(shifted))

    # serialization

    def to_json(self):
        ordered = sorted(self._p.items(), key=lambda t: self.ring.order(t[0]))
        return {
            "vars": list(self._names),
            "terms": [
                {"c": str(_to_fraction(c)), "e": list(m)} for m, c in ordered
            ],
        }


def _align(a, b):
    if a._names == b._names and a._order == b._order:
        return a, b
    names = list(a._names)
    names.extend(n for n in b._names if n not in a._names)
    return a.with_names(names, a._order), b.with_names(names, a._order)


def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def neg(a):
    return -a


def pow(a, n):
    return a**n


def exact_div(a, b):
    """Exact quotient ``a / b``; raises NotDivisible when there is a remainder."""
    if b.is_zero():
        raise ZeroPolynomial("Division by the zero polynomial")
    pa, pb = _align(a, b)
    if pa.is_zero():
        return pa
    q, r = pa.element.div([pb.element])
    if r:
        raise NotDivisible(f"{b} does not divide {a}")
    return pa._wrap(q[0])


def divides(b, a):
    try:
        exact_div(a, b)
    except NotDivisible:
        return False
    return True


def content_primitive(a):
    """Split ``a`` as ``c * p`` with ``p`` integral, primitive and positively led.

    Returns:
        tuple: (Fraction content, SparsePoly primitive part)
    """
    if a.is_zero():
        raise ZeroPolynomial("The zero polynomial has no primitive part")
    coeffs = a.coefficients()
    den = 1
    for c in coeffs:
        den = ilcm(den, c.denominator)
    num = 0
    for c in coeffs:
        num = igcd(num, int(c * den))
    content = Fraction(num, den)
    if a.leading_coefficient() < 0:
        content = -content
    p = a._wrap(a.element.quo_ground(_to_qq(content)))
    return content, p


def primitive(a):
    if a.is_zero():
        return a
    return content_primitive(a)[1]


def gcd(a, b):
    """Primitive gcd of ``a`` and ``b``; gcd(0, 0) is 0."""
    pa, pb = _align(a, b)
    if pa.is_zero() and pb.is_zero():
        return pa
    return primitive(pa._wrap(pa.element.gcd(pb.element)))


def _subresultant_prs(f, g, x):
    """Subresultant PRS of ``f``, ``g`` in ``x`` with deg(f) >= deg(g) > 0.

    Returns the remainder sequence and the scalar subresultants; the last
    scalar is the resultant when the sequence ends in degree 0.
    """
    ring = f.ring
    n, m = f.degree(x), g.degree(x)
    prs = [f, g]
    d = n - m
    b = (-ring.one) ** (d + 1)
    h = f.prem(g, x) * b
    lc = g.coeff_wrt(x, m)
    c = lc**d
    sres = [ring.one, c]
    c = -c
    while h:
        k = h.degree(x)
        prs.append(h)
        f, g, m, d = g, h, k, m - k
        b = -lc * c**d
        h = f.prem(g, x).exquo(b)
        lc = g.coeff_wrt(x, m)
        if d > 1:
            c = ((-lc) ** d).exquo(c ** (d - 1))
        else:
            c = -lc
        sres.append(-c)
    return prs, sres


def resultant(a, b, var):
    """Resultant of ``a`` and ``b`` with respect to ``var``.

    Raises:
        BothConstant: neither polynomial involves ``var``.
    """
    pa, pb = _align(a, b)
    if var not in pa.names:
        raise BothConstant(f"Neither polynomial involves {var}")
    if pa.is_zero() or pb.is_zero():
        return SparsePoly.zero(pa.names, pa.order)
    x = pa.ring.gens[pa.names.index(var)]
    n, m = pa.degree(var), pb.degree(var)
    if n == 0 and m == 0:
        raise BothConstant(f"Neither polynomial involves {var}")
    if m == 0:
        return pb**n
    if n == 0:
        return pa**m
    f, g, sign = pa.element, pb.element, 1
    if n < m:
        f, g = g, f
        sign = -1 if (n * m) % 2 else 1
    prs, sres = _subresultant_prs(f, g, x)
    if prs[-1].degree(x) > 0:
        return SparsePoly.zero(pa.names, pa.order)
    return pa._wrap(sres[-1] * sign)


def squarefree_part(a, var=None):
    """Squarefree part of ``a`` made primitive.

    With ``var`` this is ``a / gcd(a, da/dvar)``, which also removes every
    factor free of ``var``. Without ``var`` all variables are considered.
    """
    if a.is_zero():
        raise ZeroPolynomial("The zero polynomial has no squarefree part")
    if a.is_constant():
        return SparsePoly.constant(1, a.names, a.order)
    if var is None:
        return primitive(a._wrap(a.element.sqf_part()))
    return primitive(exact_div(a, gcd(a, a.diff(var))))


def factor_list(a):
    """Irreducible factors over Q, each primitive, with multiplicities.

    Returns:
        list: (SparsePoly factor, multiplicity) pairs; empty for constants.
    """
    if a.is_zero():
        raise ZeroPolynomial("The zero polynomial has no factorization")
    _, factors = a.element.factor_list()
    return [(primitive(a._wrap(f)), k) for f, k in factors]


def _spoly(p1, p2, ring):
    lcm = ring.monomial_lcm(p1.LM, p2.LM)
    m1 = ring.monomial_div(lcm, p1.LM)
    m2 = ring.monomial_div(lcm, p2.LM)
    return p1.mul_monom(m1) - p2.mul_monom(m2)


def buchberger(gens, order=DEGREVLEX, deadline=None):
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Pairs are processed in sugar order and filtered by the Gebauer-Moeller
    criteria; every remainder is made monic.

    Args:
        gens (list): SparsePoly generators, aligned on the union of names.
        order (MonomialOrder): The monomial order of the basis.
        deadline (float): Optional ``time.monotonic()`` limit.

    Returns:
        list: Monic SparsePoly basis elements in descending leading-monomial order.

    Raises:
        EliminationTimeout: the deadline passed.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    names = []
    for g in gens:
        names.extend(n for n in g.names if n not in names)
    ring = _ring(tuple(names), order)
    key = ring.order
    monomial_mul = ring.monomial_mul
    monomial_div = ring.monomial_div
    monomial_lcm = ring.monomial_lcm

    def check_budget():
        if deadline is not None and time.monotonic() > deadline:
            raise EliminationTimeout("Groebner basis computation exceeded its budget")

    # interreduce the input
    f1 = [_convert(g.element, g.names, ring) for g in gens]
    while True:
        f = f1[:]
        f1 = []
        for i, p in enumerate(f):
            r = p.rem(f[:i])
            if r:
                f1.append(r.monic())
        if f == f1:
            break

    f = []
    sugar = []
    index = {}

    def add(h, s):
        index[h] = len(f)
        f.append(h)
        sugar.append(s)
        return len(f) - 1

    def pair_sugar(i, j):
        lcm = monomial_lcm(f[i].LM, f[j].LM)
        deg = sum(lcm)
        return max(sugar[i] + deg - sum(f[i].LM), sugar[j] + deg - sum(f[j].LM))

    def update(G, B, ih):
        h = f[ih]
        mh = h.LM
        C = set(G)
        D = set()
        while C:
            ig = C.pop()
            mg = f[ig].LM
            lcm_hg = monomial_lcm(mh, mg)

            def lcm_divides(ip):
                return monomial_div(lcm_hg, monomial_lcm(mh, f[ip].LM))

            if monomial_mul(mh, mg) == lcm_hg or (
                not any(lcm_divides(ipx) for ipx in C)
                and not any(lcm_divides(pr[1]) for pr in D)
            ):
                D.add((ih, ig))
        E = set()
        while D:
            ih_, ig = D.pop()
            mg = f[ig].LM
            if monomial_mul(mh, mg) != monomial_lcm(mh, mg):
                E.add((ih_, ig))
        B_new = set()
        while B:
            ig1, ig2 = B.pop()
            mg1, mg2 = f[ig1].LM, f[ig2].LM
            lcm12 = monomial_lcm(mg1, mg2)
            if (
                not monomial_div(lcm12, mh)
                or monomial_lcm(mg1, mh) == lcm12
                or monomial_lcm(mg2, mh) == lcm12
            ):
                B_new.add((ig1, ig2))
        B_new |= E
        G_new = {ig for ig in G if not monomial_div(f[ig].LM, mh)}
        G_new.add(ih)
        return G_new, B_new

    F = [add(p, max(sum(m) for m in p.itermonoms())) for p in f1]
    G, pairs = set(), set()
    for ih in sorted(F, key=lambda i: key(f[i].LM)):
        G, pairs = update(G, pairs, ih)

    while pairs:
        check_budget()
        ig1, ig2 = min(
            pairs,
            key=lambda pr: (
                pair_sugar(*pr),
                key(monomial_lcm(f[pr[0]].LM, f[pr[1]].LM)),
            ),
        )
        pairs.remove((ig1, ig2))
        s = pair_sugar(ig1, ig2)
        h = _spoly(f[ig1], f[ig2], ring)
        h = h.rem([f[g] for g in sorted(G, key=lambda g: key(f[g].LM))])
        if h:
            h = h.monic()
            ih = index.get(h)
            if ih is None:
                ih = add(h, s)
            G, pairs = update(G, pairs, ih)

    reduced = []
    for ig in G:
        check_budget()
        h = f[ig].rem([f[j] for j in G if j != ig])
        if h:
            reduced.append(h.monic())
    reduced.sort(key=lambda p: key(p.LM), reverse=True)
    return [SparsePoly(p, names, order) for p in reduced]


def is_groebner_basis(basis, order=DEGREVLEX):
    """True when every S-polynomial of ``basis`` reduces to zero."""
    if not basis:
        return True
    names = []
    for g in basis:
        names.extend(n for n in g.names if n not in names)
    ring = _ring(tuple(names), order)
    polys = [_convert(g.element, g.names, ring) for g in basis]
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            if _spoly(polys[i].monic(), polys[j].monic(), ring).rem(polys):
                return False
    return True
