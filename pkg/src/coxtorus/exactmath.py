"""Exact arithmetic: rationals, the cyclotomic field Q(zeta_12), integer
normal forms and linear algebra over Q(zeta_12) and prime fields.

Elements of Q(zeta_12) are stored as four integer numerators over one
positive common denominator, reduced modulo zeta^4 = zeta^2 - 1.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

Rational = Fraction

IntMatrix = list  # list of rows of Python ints


class DivisionByZero(ZeroDivisionError):
    pass


class BadReduction(ArithmeticError):
    """A denominator vanishes modulo the chosen prime."""


def _reduce_poly(p: list[int]) -> list[int]:
    # zeta^k = zeta^(k-2) - zeta^(k-4) for k >= 4
    p = list(p)
    for k in range(len(p) - 1, 3, -1):
        c = p[k]
        if c:
            p[k - 2] += c
            p[k - 4] -= c
    return (p + [0, 0, 0, 0])[:4]


class CycNum:
    """Element c0 + c1 z + c2 z^2 + c3 z^3 of Q(z), z a primitive 12th root."""

    __slots__ = ("_n", "_d", "_hash")

    def __init__(self, coeffs: Sequence = (0, 0, 0, 0)):
        fr = [Fraction(c) for c in coeffs]
        d = 1
        for c in fr:
            d = d * c.denominator // math.gcd(d, c.denominator)
        nums = [int(c * d) for c in fr]
        self._set(tuple(_reduce_poly(nums)), d)

    def _set(self, n: tuple, d: int) -> None:
        g = math.gcd(d, *n)
        if g > 1:
            n = tuple(x // g for x in n)
            d //= g
        self._n = n
        self._d = d
        self._hash = None

    @classmethod
    def _raw(cls, n: Sequence[int], d: int = 1) -> "CycNum":
        obj = cls.__new__(cls)
        if d < 0:
            n, d = tuple(-x for x in n), -d
        obj._set(tuple(n), d)
        return obj

    @classmethod
    def from_int(cls, k: int) -> "CycNum":
        return cls._raw((k, 0, 0, 0), 1)

    @classmethod
    def from_rational(cls, q) -> "CycNum":
        q = Fraction(q)
        return cls._raw((q.numerator, 0, 0, 0), q.denominator)

    @classmethod
    def zeta_power(cls, k: int) -> "CycNum":
        k %= 12
        p = [0] * (k + 1)
        p[k] = 1
        return cls._raw(_reduce_poly(p), 1)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._d) for x in self._n)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._n

    @property
    def denominator(self) -> int:
        return self._d

    def is_zero(self) -> bool:
        return not any(self._n)

    def is_rational(self) -> bool:
        return not any(self._n[1:])

    def __bool__(self) -> bool:
        return any(self._n)

    @staticmethod
    def _coerce(x) -> "CycNum":
        if isinstance(x, CycNum):
            return x
        if isinstance(x, (int, Fraction)):
            return CycNum.from_rational(x)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d1, d2 = self._d, o._d
        if d1 == d2:
            return CycNum._raw(tuple(a + b for a, b in zip(self._n, o._n)), d1)
        return CycNum._raw(tuple(a * d2 + b * d1 for a, b in zip(self._n, o._n)), d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return CycNum._raw(tuple(-a for a in self._n), self._d)

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
        a, b = self._n, o._n
        p = [0] * 7
        for i in range(4):
            ai = a[i]
            if ai:
                for j in range(4):
                    if b[j]:
                        p[i + j] += ai * b[j]
        return CycNum._raw(_reduce_poly(p), self._d * o._d)

    __rmul__ = __mul__

    def galois(self, k: int) -> "CycNum":
        """Image under zeta -> zeta^k, gcd(k, 12) = 1."""
        if math.gcd(k, 12) != 1:
            raise ValueError("k must be a unit mod 12")
        out = [0, 0, 0, 0]
        for j, c in enumerate(self._n):
            if c:
                for idx, v in enumerate(_ZPOW[(k * j) % 12]):
                    out[idx] += c * v
        return CycNum._raw(out, self._d)

    def norm(self) -> Fraction:
        prod = self * self.galois(5) * self.galois(7) * self.galois(11)
        if not prod.is_rational():
            raise ArithmeticError("norm is not rational")
        return prod.coeffs[0]

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in Q(zeta_12)")
        conj = self.galois(5) * self.galois(7) * self.galois(11)
        nrm = (self * conj).coeffs[0]
        return conj * CycNum.from_rational(1 / nrm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self._n == o._n and self._d == o._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._n, self._d))
        return self._hash

    def to_text(self) -> str:
        """Render as c0+c1*z+c2*z^2+c3*z^3 with zero terms dropped."""
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = str(c)
            if k == 0:
                term = cs
            else:
                zs = "z" if k == 1 else f"z^{k}"
                if c == 1:
                    term = zs
                elif c == -1:
                    term = "-" + zs
                else:
                    term = f"{cs}*{zs}"
            parts.append(term)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"CycNum({self.to_text()})"

    __str__ = to_text

    def to_mod_p(self, p: int, root: int) -> int:
        return mod_p_embed(self, p, root)


_ZPOW = []
for _k in range(12):
    _p = [0] * (_k + 1)
    _p[_k] = 1
    _ZPOW.append(tuple(_reduce_poly(_p)))

ZERO = CycNum._raw((0, 0, 0, 0))
ONE = CycNum._raw((1, 0, 0, 0))
ZETA = CycNum.zeta_power(1)
I = CycNum.zeta_power(3)
B = CycNum.zeta_power(2)
ZETA3 = CycNum.zeta_power(4)
ZETA6 = CycNum.zeta_power(2)
SQRT3 = ZETA + CycNum.zeta_power(11)

NAMED_CONSTANTS = {
    "z": ZETA,
    "i": I,
    "b": B,
    "zeta3": ZETA3,
    "zeta6": ZETA6,
    "zeta12": ZETA,
    "sqrt3": SQRT3,
    "eps": ZETA3,
}


def cyc_arith(a: CycNum, b: CycNum, op: str) -> CycNum:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------- primes

def phi12(x: int, p: int) -> int:
    x2 = x * x % p
    return (x2 * x2 - x2 + 1) % p


def is_valid_root(p: int, root: int) -> bool:
    return p % 12 == 1 and phi12(root, p) == 0


def primitive_12th_root(p: int) -> int:
    """Smallest r in [2, p) with Phi_12(r) = 0 mod p."""
    if p % 12 != 1 or not sympy.isprime(p):
        raise ValueError(f"{p} is not a prime congruent to 1 mod 12")
    if p < 10 ** 5:
        for r in range(2, p):
            if phi12(r, p) == 0:
                return r
    e = (p - 1) // 12
    roots = []
    for g in range(2, 200):
        r = pow(g, e, p)
        if phi12(r, p) == 0:
            # all four roots are r^k, k in {1,5,7,11}
            roots = [pow(r, k, p) for k in (1, 5, 7, 11)]
            return min(roots)
    raise ArithmeticError(f"no primitive 12th root found mod {p}")


def default_primes(k: int, below: int = 2 ** 31) -> list[int]:
    """The k largest primes p = 1 mod 12 below `below`."""
    out = []
    n = below - 1
    n -= (n - 1) % 12
    while len(out) < k:
        if sympy.isprime(n):
            out.append(n)
        n -= 12
    return out


def mod_p_embed(x: CycNum, p: int, root: int) -> int:
    if not is_valid_root(p, root):
        raise ValueError(f"{root} is not a primitive 12th root of unity mod {p}")
    d = x.denominator % p
    if d == 0:
        raise BadReduction(f"denominator {x.denominator} vanishes mod {p}")
    acc = 0
    for c in reversed(x.numerators):
        acc = (acc * root + c) % p
    return acc * pow(d, -1, p) % p


# ------------------------------------------------------ integer matrices

def mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    Bt = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def transpose(A: IntMatrix) -> IntMatrix:
    return [list(r) for r in zip(*A)]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det_int(A: IntMatrix) -> int:
    """Bareiss determinant of a square integer matrix."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k]:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_normal_form(A: IntMatrix):
    """Return (U, D, V) with U*A*V = D, D diagonal, d_i | d_(i+1), U and V unimodular."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(r) for r in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row dst += c * row src
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in D:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        # smallest nonzero entry in the remaining block as pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(i, t, -q)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(j, t, -q)
                    if D[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i][j] % D[t][t]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest entry of row/col t to the pivot
            best = (t, t)
            for i in range(t, m):
                if D[i][t] and abs(D[i][t]) < abs(D[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t, n):
                if D[t][j] and abs(D[t][j]) < abs(D[best[0]][best[1]]):
                    best = (t, j)
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def invariant_factors(A: IntMatrix) -> list[int]:
    _, D, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Rows spanning the integer right kernel {x : A x = 0} (a saturated lattice)."""
    n = len(A[0])
    _, D, V = smith_normal_form(A)
    r = sum(1 for i in range(min(len(D), n)) if D[i][i])
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


def hermite_rows(A: IntMatrix) -> IntMatrix:
    """Row-style Hermite normal form (nonzero rows only)."""
    M = [list(r) for r in A if any(r)]
    if not M:
        return []
    n = len(M[0])
    row = 0
    for col in range(n):
        if row >= len(M):
            break
        while True:
            nz = [i for i in range(row, len(M)) if M[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(M[i][col]))
            M[row], M[piv] = M[piv], M[row]
            done = True
            for i in range(row + 1, len(M)):
                if M[i][col]:
                    q = M[i][col] // M[row][col]
                    M[i] = [a - q * b for a, b in zip(M[i], M[row])]
                    if M[i][col]:
                        done = False
            if done:
                break
        if row < len(M) and M[row][col]:
            if M[row][col] < 0:
                M[row] = [-a for a in M[row]]
            for i in range(row):
                q = M[i][col] // M[row][col]
                M[i] = [a - q * b for a, b in zip(M[i], M[row])]
            row += 1
    return [r for r in M if any(r)]


def same_row_lattice(A: IntMatrix, B: IntMatrix) -> bool:
    return hermite_rows(A) == hermite_rows(B)


def solve_rational(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Unique solution of a square-or-tall consistent rational system, else None."""
    res = solve_linear([[CycNum.from_rational(x) for x in row] for row in A],
                       [CycNum.from_rational(x) for x in b])
    if res.solution is None or res.rank < len(A[0]):
        return None
    return [x.coeffs[0] for x in res.solution]


def inverse_rational(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    cols = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        x = solve_rational(A, e)
        if x is None:
            raise ArithmeticError("singular matrix")
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


# ------------------------------------------------- linear algebra over Q(z)

@dataclass(frozen=True)
class LinearSolveResult:
    solution: list | None
    rank: int
    pivots: tuple
    inconsistent_row: int | None = None

    @property
    def consistent(self) -> bool:
        return self.inconsistent_row is None


def solve_linear(A: Sequence[Sequence[CycNum]], b: Sequence[CycNum]) -> LinearSolveResult:
    """Solve A x = b over Q(zeta_12).

    Pivot columns are scanned left to right, pivot rows are the first
    nonzero in each column. Free variables are set to zero. On an
    inconsistent system the returned witness is the index of an original
    row whose reduced form reads 0 = nonzero.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    rows = [list(A[i]) + [b[i]] for i in range(m)]
    origin = list(range(m))
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        origin[r], origin[piv] = origin[piv], origin[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv if x else x for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ri = rows[i]
                rr = rows[r]
                rows[i] = [ri[k] - f * rr[k] if rr[k] else ri[k] for k in range(n + 1)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if rows[i][n]:
            return LinearSolveResult(None, r, tuple(pivots), origin[i])
    x = [ZERO] * n
    for i, c in enumerate(pivots):
        x[c] = rows[i][n]
    return LinearSolveResult(x, r, tuple(pivots))


def rank_exact(A: Sequence[Sequence[CycNum]]) -> int:
    """Fraction-free (Bareiss) rank over Q(zeta_12)."""
    M = [list(r) for r in A]
    m = len(M)
    if not m:
        return 0
    n = len(M[0])
    prev = ONE
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if M[i][c]:
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pr = M[r][c]
        prev_inv = prev.inverse()
        for i in range(r + 1, m):
            a = M[i][c]
            for j in range(c + 1, n):
                M[i][j] = (pr * M[i][j] - a * M[r][j]) * prev_inv
            M[i][c] = ZERO
        prev = pr
        r += 1
        if r == m:
            break
    return r


def matrix_mod_p(A: Sequence[Sequence[CycNum]], p: int, root: int) -> list[list[int]]:
    return [[mod_p_embed(x, p, root) for x in row] for row in A]


def random_cycnum(rng: random.Random, size: int = 5, den: int = 4) -> CycNum:
    return CycNum([Fraction(rng.randint(-size, size), rng.randint(1, den)) for _ in range(4)])
