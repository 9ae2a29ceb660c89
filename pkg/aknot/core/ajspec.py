"""Operators in the ring Z[q^±1]<Q^±1, E^±1> / (EQ - qQE).

A term ``(j, k) -> c`` stands for ``c(q) * Q^k * E^j``: Q-powers sit to the
left of E-powers. The coefficient ``c`` is a Laurent polynomial in ``q``
kept as a dict ``{exponent: integer}``. Moving ``E^j`` past ``Q^k`` costs
``q^(j*k)``.

Text form is a sum of terms such as ``(q^2 - 1)*Q^-1*E^2 + 3``; factors
are multiplied in the order written, so ``E*Q`` reads as ``q*Q*E``.
"""

import re
from fractions import Fraction

from aknot.core.errors import OperatorParseError, ZeroOperator
from aknot.core.mpoly import SparsePoly, content_primitive, factor_list, primitive

MATCH = "Match"
MATCH_UP_TO_ALLOWANCES = "MatchUpToAllowances"
MISMATCH = "Mismatch"

BOUNDARY = ("M", "L")


def _qclean(c):
    return {e: v for e, v in c.items() if v}


def _qadd(a, b, sign=1):
    out = dict(a)
    for e, v in b.items():
        out[e] = out.get(e, 0) + sign * v
    return _qclean(out)


def _qmul(a, b, shift=0):
    out = {}
    for e1, v1 in a.items():
        for e2, v2 in b.items():
            e = e1 + e2 + shift
            out[e] = out.get(e, 0) + v1 * v2
    return _qclean(out)


def _format_q(c):
    pieces = []
    for e in sorted(c, reverse=True):
        v = c[e]
        mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
        if not mono:
            body = str(abs(v))
        else:
            body = mono if abs(v) == 1 else f"{abs(v)}*{mono}"
        pieces.append(("-" if v < 0 else "+", body))
    return _join(pieces)


def _join(pieces):
    if not pieces:
        return "0"
    sign, body = pieces[0]
    text = f"-{body}" if sign == "-" else body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


class QDiffOperator:
    """Element of the quantum torus in Q-left normal form."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        cleaned = {}
        for key, c in (terms or {}).items():
            c = _qclean(dict(c))
            if c:
                cleaned[(int(key[0]), int(key[1]))] = c
        self._terms = cleaned

    @classmethod
    def constant(cls, value):
        return cls({(0, 0): {0: int(value)}})

    @classmethod
    def monomial(cls, e=0, q_exp=0, coeff=1, q=0):
        """``coeff * q^q * Q^q_exp * E^e``."""
        return cls({(e, q_exp): {q: coeff}})

    @property
    def terms(self):
        return {key: dict(c) for key, c in self._terms.items()}

    def is_zero(self):
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = QDiffOperator.constant(other)
        if not isinstance(other, QDiffOperator):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def _lift(self, other):
        return QDiffOperator.constant(other) if isinstance(other, int) else other

    def __add__(self, other):
        other = self._lift(other)
        out = {key: dict(c) for key, c in self._terms.items()}
        for key, c in other._terms.items():
            out[key] = _qadd(out.get(key, {}), c)
        return QDiffOperator(out)

    __radd__ = __add__

    def __neg__(self):
        return QDiffOperator({key: {e: -v for e, v in c.items()} for key, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        return op_mul(self, self._lift(other))

    def __rmul__(self, other):
        return op_mul(self._lift(other), self)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("Exponent must be a non-negative integer")
        out = QDiffOperator.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        return f"QDiffOperator({self})"

    def __str__(self):
        pieces = []
        for j, k in sorted(self._terms):
            c = self._terms[(j, k)]
            ops = []
            if k:
                ops.append("Q" if k == 1 else f"Q^{k}")
            if j:
                ops.append("E" if j == 1 else f"E^{j}")
            if len(c) == 1:
                (e, v), = c.items()
                factors = []
                if abs(v) != 1 or (e == 0 and not ops):
                    factors.append(str(abs(v)))
                if e:
                    factors.append("q" if e == 1 else f"q^{e}")
                pieces.append(("-" if v < 0 else "+", "*".join(factors + ops)))
            else:
                pieces.append(("+", "*".join([f"({_format_q(c)})"] + ops)))
        return _join(pieces)

    def to_json(self):
        return {
            "terms": [
                {
                    "E": j,
                    "Q": k,
                    "c": [{"e": e, "c": str(v)} for e, v in sorted(self._terms[(j, k)].items())],
                }
                for j, k in sorted(self._terms)
            ]
        }

    @classmethod
    def from_json(cls, data):
        try:
            terms = {}
            for t in data["terms"]:
                key = (int(t["E"]), int(t["Q"]))
                terms[key] = _qadd(terms.get(key, {}), {int(c["e"]): int(c["c"]) for c in t["c"]})
        except (KeyError, TypeError, ValueError) as err:
            raise OperatorParseError(f"Invalid operator JSON: {err}") from err
        return cls(terms)


def op_mul(a, b):
    """Product in normal form: ``Q^k1 E^j1 * Q^k2 E^j2 = q^(j1*k2) Q^(k1+k2) E^(j1+j2)``."""
    out = {}
    for (j1, k1), c1 in a._terms.items():
        for (j2, k2), c2 in b._terms.items():
            key = (j1 + j2, k1 + k2)
            out[key] = _qadd(out.get(key, {}), _qmul(c1, c2, j1 * k2))
    return QDiffOperator(out)


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([qQE])|([-+*^()]))")


def _tokenize(text):
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise OperatorParseError(f"Unexpected character {text[pos:].strip()[:1]!r} in operator")
        number, name, symbol = m.groups()
        tokens.append(("num", int(number)) if number else ("name", name) if name else ("sym", symbol))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "a token"
            raise OperatorParseError(f"Expected {want} in operator, got {tok[1]!r}")
        self.pos += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise OperatorParseError("Empty operator")
        op = self.expr()
        if self.peek()[0] is not None:
            raise OperatorParseError(f"Trailing input in operator at {self.peek()[1]!r}")
        return op

    def expr(self):
        sign = 1
        if self.peek() in (("sym", "-"), ("sym", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        total = self.term() * sign
        while self.peek() in (("sym", "-"), ("sym", "+")):
            sign = -1 if self.take()[1] == "-" else 1
            total = total + self.term() * sign
        return total

    def term(self):
        op = self.factor()
        while True:
            tok = self.peek()
            if tok == ("sym", "*"):
                self.take()
            elif not (tok[0] in ("num", "name") or tok == ("sym", "(")):
                return op
            op = op * self.factor()

    def exponent(self):
        paren = self.peek() == ("sym", "(")
        if paren:
            self.take()
        sign = 1
        if self.peek() in (("sym", "-"), ("sym", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        value = sign * self.take("num")[1]
        if paren:
            self.take("sym", ")")
        return value

    def factor(self):
        kind, value = self.peek()
        if kind == "name":
            self.take()
            n = 1
            if self.peek() == ("sym", "^"):
                self.take()
                n = self.exponent()
            if value == "q":
                return QDiffOperator.monomial(q=n)
            if value == "Q":
                return QDiffOperator.monomial(q_exp=n)
            return QDiffOperator.monomial(e=n)
        if kind == "num":
            self.take()
            base = QDiffOperator.constant(value)
        elif (kind, value) == ("sym", "("):
            self.take()
            base = self.expr()
            self.take("sym", ")")
        else:
            raise OperatorParseError(f"Unexpected {value!r} in operator")
        if self.peek() == ("sym", "^"):
            self.take()
            n = self.exponent()
            if n < 0:
                raise OperatorParseError("Only q, Q and E take negative exponents")
            base = base**n
        return base


def parse_operator(text):
    """Parse the text form.

    Raises:
        OperatorParseError: On any syntax error.
    """
    return _Parser(text).parse()


# specialization


def specialize_q1_tracked(op):
    """Specialize at q = 1 with ``(E, Q) = (L, M^2)``, keeping the bookkeeping.

    Returns:
        tuple: (primitive SparsePoly, (m_shift, l_shift), content) with the
        raw Laurent image equal to ``content * M^m_shift * L^l_shift * poly``.

    Raises:
        ZeroOperator: The image at q = 1 is zero.
    """
    image = {}
    for (j, k), c in op._terms.items():
        value = sum(c.values())
        if value:
            key = (2 * k, j)
            image[key] = image.get(key, 0) + value
    image = {key: v for key, v in image.items() if v}
    if not image:
        raise ZeroOperator("Operator vanishes at q = 1")
    m_shift = min(key[0] for key in image)
    l_shift = min(key[1] for key in image)
    poly = SparsePoly.from_terms(
        BOUNDARY, {(a - m_shift, b - l_shift): v for (a, b), v in image.items()}
    )
    content, poly = content_primitive(poly)
    return poly, (m_shift, l_shift), content


def specialize_q1(op):
    """Integer-normalized q = 1 image in ``M, L``."""
    return specialize_q1_tracked(op)[0]


def operator_from_apoly(p):
    """The q-free operator whose specialization is ``p``.

    Raises:
        OperatorParseError: ``p`` has an odd power of ``M``.
    """
    p = primitive(p.with_names(BOUNDARY))
    terms = {}
    for (m_exp, l_exp), c in p.terms():
        if m_exp % 2:
            raise OperatorParseError(f"{p} has odd powers of M; Q = M^2 cannot produce it")
        c = Fraction(c)
        terms[(l_exp, m_exp // 2)] = {0: int(c)}
    return QDiffOperator(terms)


# comparison


def _kind(f):
    if f.is_monomial():
        return "monomial"
    if "L" not in f.variables_used():
        return "M-only"
    if f == SparsePoly.parse("L - 1"):
        return "reducible"
    return "nontrivial"


_KIND_ORDER = {"reducible": 0, "nontrivial": 1, "M-only": 2, "monomial": 3}


def aj_compare(specialized, apoly):
    """Compare a specialized operator with an A-polynomial, factor by factor.

    Factors involving only ``M`` and monomials are discarded; differing
    powers of ``L - 1`` and multiplicities are reported without failing.

    Returns:
        dict: ``verdict`` (Match, MatchUpToAllowances or Mismatch) and a
        ``factors`` table.
    """
    left = factor_list(specialized.with_names(BOUNDARY))
    right = factor_list(apoly.full.with_names(BOUNDARY))
    rows = []
    for f, k in left:
        rows.append({"poly": f, "specialized": k, "apoly": 0})
    for f, k in right:
        for row in rows:
            if row["poly"] == f:
                row["apoly"] = k
                break
        else:
            rows.append({"poly": f, "specialized": 0, "apoly": k})
    for row in rows:
        row["kind"] = _kind(row["poly"])
    rows.sort(key=lambda r: (_KIND_ORDER[r["kind"]], str(r["poly"])))

    def power(side):
        return sum(r[side] for r in rows if r["kind"] == "reducible")

    nontrivial = [r for r in rows if r["kind"] == "nontrivial"]
    discarded = [r for r in rows if r["kind"] in ("M-only", "monomial")]
    if any(not r["specialized"] or not r["apoly"] for r in nontrivial):
        verdict = MISMATCH
    elif (
        not discarded
        and power("specialized") == power("apoly")
        and all(r["specialized"] == r["apoly"] for r in nontrivial)
    ):
        verdict = MATCH
    else:
        verdict = MATCH_UP_TO_ALLOWANCES
    return {
        "verdict": verdict,
        "specialized": str(specialized),
        "apoly": str(apoly.full),
        "l1_power": {"specialized": power("specialized"), "apoly": power("apoly")},
        "factors": [
            {
                "factor": str(r["poly"]),
                "kind": r["kind"],
                "specialized": r["specialized"],
                "apoly": r["apoly"],
            }
            for r in rows
        ],
        "discarded": [str(r["poly"]) for r in discarded],
    }
