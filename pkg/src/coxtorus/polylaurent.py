"""Sparse multivariate Laurent polynomials over Q(zeta_12)."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactmath import NAMED_CONSTANTS, ONE, ZERO, CycNum, rank_exact

Monomial = tuple  # sorted tuple of (variable, nonzero exponent)

X_VARS = ("x1", "y1", "x2", "y2")
T_VARS = ("t1", "t2")
_ORDER = {v: k for k, v in enumerate(X_VARS + T_VARS)}


def var_key(v: str):
    return (_ORDER.get(v, len(_ORDER)), v)


def make_monomial(exps: Mapping[str, int] | Iterable[tuple[str, int]]) -> Monomial:
    items = exps.items() if isinstance(exps, Mapping) else exps
    acc: dict[str, int] = {}
    for v, e in items:
        acc[v] = acc.get(v, 0) + e
    return tuple(sorted(((v, e) for v, e in acc.items() if e), key=lambda t: var_key(t[0])))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for v, e in b:
        s = acc.get(v, 0) + e
        if s:
            acc[v] = s
        else:
            del acc[v]
    return tuple(sorted(acc.items(), key=lambda t: var_key(t[0])))


def mono_pow(a: Monomial, k: int) -> Monomial:
    if k == 0:
        return ()
    return tuple((v, e * k) for v, e in a)


def mono_degree(a: Monomial) -> int:
    return sum(e for _, e in a)


class PolyError(ValueError):
    pass


class LaurentPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, CycNum] | None = None):
        self.terms: dict[Monomial, CycNum] = {}
        if terms:
            for m, c in terms.items():
                if not isinstance(c, CycNum):
                    c = CycNum.from_rational(c)
                if c:
                    self.terms[m] = c

    # construction helpers
    @classmethod
    def const(cls, c) -> "LaurentPoly":
        c = c if isinstance(c, CycNum) else CycNum.from_rational(c)
        return cls({(): c})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "LaurentPoly":
        return cls({make_monomial({name: exp}): ONE})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff=ONE) -> "LaurentPoly":
        return cls({make_monomial(exps): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # arithmetic
    @staticmethod
    def _coerce(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, (int, Fraction, CycNum)):
            return LaurentPoly.const(x)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for m, c in o.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        r = LaurentPoly()
        r.terms = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = LaurentPoly()
        r.terms = {m: -c for m, c in self.terms.items()}
        return r

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out: dict[Monomial, CycNum] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                s = out.get(m)
                out[m] = c if s is None else s + c
        r = LaurentPoly()
        r.terms = {m: c for m, c in out.items() if c}
        return r

    __rmul__ = __mul__

    def scale(self, c: CycNum) -> "LaurentPoly":
        if not c:
            return LaurentPoly()
        r = LaurentPoly()
        r.terms = {m: x * c for m, x in self.terms.items()}
        return r

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise PolyError("negative power of a non-monomial")
            (m, c), = self.terms.items()
            return LaurentPoly({mono_pow(m, k): c ** k})
        result = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.is_monomial():
            raise PolyError("division by a non-monomial")
        return self * (o ** -1)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> list[tuple[Monomial, CycNum]]:
        def key(item):
            m = item[0]
            d = dict(m)
            vars_ = sorted(d, key=var_key)
            return (-mono_degree(m), [(var_key(v), -d[v]) for v in vars_])
        return sorted(self.terms.items(), key=key)

    def to_text(self) -> str:
        return format_poly(self)

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)})"

    __str__ = to_text

    # calculus and evaluation
    def derivative(self, v: str) -> "LaurentPoly":
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(v, 0)
            if e:
                d[v] = e - 1
                out[make_monomial(d)] = c * e
        return LaurentPoly(out)

    def evaluate(self, point: Mapping[str, object]) -> CycNum:
        vals = {v: (x if isinstance(x, CycNum) else CycNum.from_rational(x)) for v, x in point.items()}
        total = ZERO
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                if v not in vals:
                    raise PolyError(f"no value for variable {v}")
                x = vals[v]
                if e < 0 and not x:
                    raise PolyError(f"pole: {v} = 0 with negative exponent")
                t = t * x ** e
            total = total + t
        return total

    def substitute(self, images: Mapping[str, "LaurentPoly"]) -> "LaurentPoly":
        """Replace variables by polynomials; negative powers need monomial images."""
        cache: dict[tuple[str, int], LaurentPoly] = {}
        out = LaurentPoly()
        for m, c in self.terms.items():
            acc = LaurentPoly.const(c)
            rest = []
            for v, e in m:
                if v in images:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = images[v] ** e
                    acc = acc * cache[key]
                else:
                    rest.append((v, e))
            if rest:
                acc = acc * LaurentPoly({make_monomial(rest): ONE})
            out = out + acc
        return out


def poly_arith(f: LaurentPoly, g: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def apply_linear_substitution(f: LaurentPoly, g: Sequence[Sequence[CycNum]]) -> LaurentPoly:
    """f o g: each x-variable x_k becomes sum_j g[k][j] x_j (g acting on the coordinate column)."""
    images = {}
    for k, v in enumerate(X_VARS):
        images[v] = LaurentPoly({make_monomial({X_VARS[j]: 1}): g[k][j] for j in range(4) if g[k][j]})
    for m in f.terms:
        for v, e in m:
            if v in images and e < 0:
                raise PolyError("negative exponent on a substituted variable")
    return f.substitute(images)


@dataclass(frozen=True)
class WeightAssignment:
    name: str
    weights: Mapping[str, tuple[int, int]] = field(default_factory=dict)

    def of_monomial(self, m: Monomial) -> tuple[int, int]:
        a = b = 0
        for v, e in m:
            if v not in self.weights:
                raise PolyError(f"{self.name}: no weight for variable {v}")
            wa, wb = self.weights[v]
            a += e * wa
            b += e * wb
        return (a, b)


T_WEIGHTS = WeightAssignment("T", {"x1": (1, 0), "y1": (1, 0), "x2": (0, 1), "y2": (0, 1),
                                   "t1": (0, 0), "t2": (0, 0)})
PICARD_WEIGHTS = WeightAssignment("Picard", {"x1": (0, 0), "y1": (0, 0), "x2": (0, 0), "y2": (0, 0),
                                             "t1": (1, 0), "t2": (0, 1)})


class InhomogeneousError(PolyError):
    pass


def weight_of(f: LaurentPoly, assignment: WeightAssignment) -> tuple[int, int]:
    if f.is_zero():
        raise InhomogeneousError("the zero polynomial has no weight")
    first = None
    for m, c in f.sorted_terms():
        w = assignment.of_monomial(m)
        if first is None:
            first = (m, w)
        elif w != first[1]:
            t1 = format_poly(LaurentPoly({first[0]: f.terms[first[0]]}))
            t2 = format_poly(LaurentPoly({m: c}))
            raise InhomogeneousError(
                f"inhomogeneous under {assignment.name}: {t1} has {first[1]}, {t2} has {w}")
    return first[1]


# ---------------------------------------------------------------- Jacobian

def _as_fraction(f):
    if isinstance(f, LaurentPoly):
        return f, LaurentPoly.const(1)
    num, den = f
    return num, den


def jacobian_rank_at_point(fs: Sequence, point: Mapping[str, object]) -> int:
    """Rank over Q(zeta_12) of the Jacobian of fs at point.

    Entries of fs are LaurentPoly or (numerator, denominator) pairs.
    """
    pairs = [_as_fraction(f) for f in fs]
    variables = sorted(set().union(*[n.variables() | d.variables() for n, d in pairs]) if pairs else set(),
                       key=var_key)
    rows = []
    for num, den in pairs:
        dv = den.evaluate(point)
        if not dv:
            raise PolyError("pole: denominator vanishes at the point")
        nv = num.evaluate(point)
        row = []
        for v in variables:
            dn = num.derivative(v).evaluate(point)
            dd = den.derivative(v).evaluate(point)
            row.append((dn * dv - nv * dd) / (dv * dv))
        rows.append(row)
    if not rows or not variables:
        return 0
    return rank_exact(rows)


# ---------------------------------------------------------- text format

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|/|\+|-|\(|\)))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyError(f"cannot parse at {text[pos:pos + 10]!r}")
        if m.group(1):
            out.append(("num", m.group(1)))
        elif m.group(2):
            out.append(("name", m.group(2)))
        else:
            out.append(("op", m.group(3)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, text: str, constants: Mapping[str, CycNum]):
        self.toks = _tokenize(text)
        self.i = 0
        self.constants = constants

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (val and tok[1] != val):
            raise PolyError(f"unexpected token {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self) -> LaurentPoly:
        e = self.expr()
        if self.i != len(self.toks):
            raise PolyError(f"trailing input at token {self.peek()[1]!r}")
        return e

    def expr(self):
        if self.peek() == ("op", "-"):
            self.take()
            acc = -self.term()
        else:
            acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            u = self.unary()
            if op == "*":
                acc = acc * u
            else:
                if len(u.terms) == 1 and () in u.terms:
                    acc = acc.scale(u.terms[()].inverse())
                else:
                    acc = acc / u
        return acc

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            exp = int(self.take("num")[1]) * sign
            if len(base.terms) == 1 and () in base.terms:
                return LaurentPoly.const(base.terms[()] ** exp)
            return base ** exp
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return LaurentPoly.const(int(val))
        if kind == "name":
            self.take()
            if val in self.constants:
                return LaurentPoly.const(self.constants[val])
            return LaurentPoly.var(val)
        if (kind, val) == ("op", "("):
            self.take()
            e = self.expr()
            self.take("op", ")")
            return e
        raise PolyError(f"unexpected token {val!r}")


def parse_poly(text: str, constants: Mapping[str, CycNum] | None = None) -> LaurentPoly:
    """Parse the seed-data polynomial format.

    `z` denotes the primitive 12th root; further named constants may be
    supplied (they shadow variables of the same name).
    """
    consts = {"z": NAMED_CONSTANTS["z"]}
    if constants:
        consts.update(constants)
    return _Parser(text, consts).parse()


def parse_cycnum(text: str, constants: Mapping[str, CycNum] | None = None) -> CycNum:
    f = parse_poly(text, constants)
    if f.is_zero():
        return ZERO
    if set(f.terms) != {()}:
        raise PolyError(f"{text!r} is not a constant")
    return f.terms[()]


def _format_mono(m: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


def format_poly(f: LaurentPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for m, c in f.sorted_terms():
        ms = _format_mono(m)
        if c.is_rational():
            q = c.coeffs[0]
            neg = q < 0
            mag = -q if neg else q
            if not ms:
                body = str(mag)
            elif mag == 1:
                body = ms
            else:
                body = f"{mag}*{ms}"
        else:
            neg = False
            cs = f"({c.to_text()})"
            body = cs if not ms else f"{cs}*{ms}"
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sgn, body in parts[1:]:
        out += f" {sgn} {body}"
    return out
