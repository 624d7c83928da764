"""Candidate-ring side of the Cox ring comparison.

The 20 generators span a subring of the Cox ring, so for every bundle L
and torus weight w the rank of the span of degree-(L, w) monomials is at
most h0(L)_w. Showing rank >= h0(L)_w cell by cell proves equality.

Ranks are computed modulo primes p = 1 (mod 12), where zeta_12 has an
image. Reduction mod p can only lose rank, so every modular rank is a
rigorous lower bound.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .exactmath import ONE, CycNum, default_primes, mod_p_embed, primitive_12th_root, rank_exact
from .fingroup import MatGroup, commutator_and_abelianization
from .polylaurent import (PICARD_WEIGHTS, T_WEIGHTS, X_VARS, LaurentPoly, PolyError,
                          apply_linear_substitution, weight_of)
from .seeds import GENERATOR_NAMES

log = logging.getLogger(__name__)

Vec = tuple[int, int]
INVARIANT_GENS = tuple(g for g in GENERATOR_NAMES if g.startswith("w0"))
FREE_GENS = tuple(g for g in GENERATOR_NAMES if g not in INVARIANT_GENS and g not in ("s", "t"))


class OracleError(RuntimeError):
    pass


# ------------------------------------------------------------ generators

@dataclass
class GeneratorTable:
    polys: dict[str, LaurentPoly]
    picard: dict[str, Vec]
    tweight: dict[str, Vec]

    @classmethod
    def from_seeds(cls, gens: Mapping[str, LaurentPoly], degree_matrix: Mapping[str, tuple]):
        return cls(dict(gens), {g: tuple(degree_matrix[g][0]) for g in gens},
                   {g: tuple(degree_matrix[g][1]) for g in gens})


def verify_degree_matrix(table: GeneratorTable) -> dict:
    rows, bad = [], []
    for g in GENERATOR_NAMES:
        f = table.polys[g]
        try:
            pic, tw = weight_of(f, PICARD_WEIGHTS), weight_of(f, T_WEIGHTS)
        except PolyError as exc:
            pic = tw = None
            bad.append(f"{g}: {exc}")
        ok = pic == table.picard[g] and tw == table.tweight[g]
        if not ok and pic is not None:
            bad.append(f"{g}: computed Picard {pic} T-weight {tw}, "
                       f"table Picard {table.picard[g]} T-weight {table.tweight[g]}")
        rows.append({"generator": g, "picard": pic, "tweight": tw, "ok": ok})
    return {"rows": rows, "mismatches": bad, "passed": not bad and len(rows) == 20}


def _x_part(f: LaurentPoly) -> LaurentPoly:
    return LaurentPoly({tuple((v, e) for v, e in m if v in X_VARS): c for m, c in f.terms.items()})


def scalar_ratio(f: LaurentPoly, g: LaurentPoly) -> CycNum | None:
    """c with g == c*f, or None."""
    if f.is_zero() or set(f.terms) != set(g.terms):
        return None
    m0 = next(iter(f.terms))
    c = g.terms[m0] / f.terms[m0]
    return c if all(g.terms[m] == c * f.terms[m] for m in f.terms) else None


def act(f: LaurentPoly, g) -> LaurentPoly:
    """f(x) -> f(x g) for x a row vector: the action on coordinate functions."""
    return apply_linear_substitution(f, tuple(zip(*g)))


def verify_semiinvariance(table: GeneratorTable, G: MatGroup) -> dict:
    """Each generator is a [G,G]-invariant, scaled by each group generator,
    with a scalar depending only on its Picard class mod (s, t)."""
    K, _ = commutator_and_abelianization(G)
    failures, chars = [], {}
    by_class: dict[tuple, set] = {}
    for name in GENERATOR_NAMES:
        f = _x_part(table.polys[name])
        for k in K:
            if act(f, G.elements[k]) != f:
                failures.append(f"{name} not invariant under commutator element {k}")
                break
        scal = []
        for gi, gm in enumerate(G.generators):
            c = scalar_ratio(f, act(f, gm))
            if c is None:
                failures.append(f"{name}: non-scalar transformation under generator {gi}")
            scal.append(c)
        chars[name] = scal
        by_class.setdefault(picard_class(table.picard[name]), set()).add(tuple(scal))
    inconsistent = {k: v for k, v in by_class.items() if len(v) > 1}
    for k in inconsistent:
        failures.append(f"class {k}: characters differ across generators")
    return {"characters": chars,
            "classes": {k: sorted(tuple(c.to_text() for c in t) for t in v) for k, v in by_class.items()},
            "failures": failures, "passed": not failures}


def picard_class(pic: Vec) -> int:
    """Class of a Picard degree modulo the lattice spanned by deg s and deg t."""
    # (-2,1) and (1,-2) span {(m, n): m + 2n = 0 mod 3}
    return (pic[0] + 2 * pic[1]) % 3


# ---------------------------------------------------- graded monomials

def solve_st(P: Vec, L: Vec) -> tuple[int, int] | None:
    A, B = P[0] - L[0], P[1] - L[1]
    if (2 * A + B) % 3 or (A + 2 * B) % 3:
        return None
    sig, tau = (2 * A + B) // 3, (A + 2 * B) // 3
    return (sig, tau) if sig >= 0 and tau >= 0 else None


class WeightCompositions:
    """Exponent vectors over a fixed generator list with a prescribed total
    T-weight. Reachability tables prune every branch that cannot close."""

    def __init__(self, names: Sequence[str], tw: Mapping[str, Vec]):
        self.names = tuple(names)
        self.w = [tuple(tw[g]) for g in self.names]
        self.shape = (0, 0)
        self.reach: list[np.ndarray] = []

    def _grow(self, target: Vec) -> None:
        if target[0] < self.shape[0] and target[1] < self.shape[1]:
            return
        A = max(target[0] + 1, 2 * self.shape[0], 16)
        B = max(target[1] + 1, 2 * self.shape[1], 16)
        n = len(self.names)
        reach = [None] * (n + 1)
        r = np.zeros((A, B), dtype=bool)
        r[0, 0] = True
        reach[n] = r
        for k in range(n - 1, -1, -1):
            u, v = self.w[k]
            cur = reach[k + 1].copy()
            prev = cur
            while True:
                sh = np.zeros_like(prev)
                sh[u:, v:] = prev[:A - u, :B - v]
                new = cur | sh
                if (new == cur).all():
                    break
                cur, prev = new, sh
            reach[k] = cur
        self.reach, self.shape = reach, (A, B)

    def __call__(self, target: Vec):
        if target[0] < 0 or target[1] < 0:
            return
        self._grow(target)
        if not self.reach[0][target]:
            return
        n, w, reach = len(self.names), self.w, self.reach
        acc = [0] * n

        def rec(k, a, b):
            if k == n:
                yield tuple(acc)
                return
            u, v = w[k]
            nxt = reach[k + 1]
            e = 0
            while a >= 0 and b >= 0:
                if nxt[a, b]:
                    acc[k] = e
                    yield from rec(k + 1, a, b)
                a -= u
                b -= v
                e += 1
            acc[k] = 0
        yield from rec(0, target[0], target[1])


def _dfs(names: Sequence[str], tw: Mapping[str, Vec], target: Vec):
    """Exponent vectors over names with total T-weight exactly target."""
    return list(WeightCompositions(names, tw)(tuple(target)))


def enumerate_graded_monomials(L: Vec, weight: Vec, table: GeneratorTable,
                               names: Sequence[str] | None = None) -> list[dict[str, int]]:
    """All monomials of Picard degree L and T-weight weight, as exponent maps."""
    if weight[0] < 0 or weight[1] < 0:
        return []
    names = tuple(g for g in GENERATOR_NAMES if g not in ("s", "t")) if names is None else tuple(names)
    out = []
    for alpha in _dfs(names, table.tweight, tuple(weight)):
        P = (sum(a * table.picard[g][0] for g, a in zip(names, alpha)),
             sum(a * table.picard[g][1] for g, a in zip(names, alpha)))
        st = solve_st(P, L)
        if st is None:
            continue
        mono = {g: a for g, a in zip(names, alpha) if a}
        if st[0]:
            mono["s"] = st[0]
        if st[1]:
            mono["t"] = st[1]
        out.append(mono)
    return out


def monomial_degree(mono: Mapping[str, int], table: GeneratorTable) -> tuple[Vec, Vec]:
    pic = [0, 0]
    tw = [0, 0]
    for g, e in mono.items():
        for i in range(2):
            pic[i] += e * table.picard[g][i]
            tw[i] += e * table.tweight[g][i]
    return tuple(pic), tuple(tw)


# ------------------------------------------------------- modular pieces

def x_array(f: LaurentPoly, p: int, root: int) -> np.ndarray:
    """Bihomogeneous x-part as a coefficient array indexed by (deg x1, deg x2)."""
    f = _x_part(f)
    u, v = weight_of(f, T_WEIGHTS)
    A = np.zeros((u + 1, v + 1), dtype=np.int64)
    for m, c in f.terms.items():
        d = dict(m)
        A[d.get("x1", 0), d.get("x2", 0)] = mod_p_embed(c, p, root)
    return A


@dataclass
class CellResult:
    L: Vec
    weight: Vec
    rank: int
    candidates: int
    target: int | None = None


class ModularPieceOracle:
    """Spans of graded pieces modulo one prime, built by peeling invariant
    generators: V(L, w) = sum_i w0i * V(L, w - wt(w0i)) + span(w0-free monomials)."""

    def __init__(self, table: GeneratorTable, p: int):
        self.table = table
        self.p = p
        self.root = primitive_12th_root(p)
        self.arrays = {g: x_array(table.polys[g], p, self.root) for g in GENERATOR_NAMES}
        self._bases: dict[tuple[Vec, Vec], list[np.ndarray]] = {}
        self._complete: dict[tuple[Vec, Vec], bool] = {}
        self.targets: dict[tuple[Vec, Vec], int] = {}
        self._counts: dict[tuple[Vec, Vec], int] = {}
        self._compositions = WeightCompositions(FREE_GENS, table.tweight)

    def _free_products(self, L: Vec, w: Vec):
        names = FREE_GENS
        for alpha in self._compositions(w):
            P = (sum(a * self.table.picard[g][0] for g, a in zip(names, alpha)),
                 sum(a * self.table.picard[g][1] for g, a in zip(names, alpha)))
            if solve_st(P, L) is None:
                continue
            acc = None
            for g, a in zip(names, alpha):
                for _ in range(a):
                    acc = self.arrays[g] if acc is None else kernels.poly_mul_mod(acc, self.arrays[g], self.p)
            if acc is None:
                acc = np.ones((1, 1), dtype=np.int64)
            yield acc

    def _candidates(self, L: Vec, w: Vec):
        for g in INVARIANT_GENS:
            u, v = self.table.tweight[g]
            prev = (w[0] - u, w[1] - v)
            if prev[0] < 0 or prev[1] < 0:
                continue
            for b in self.basis(L, prev):
                yield kernels.poly_mul_mod(b, self.arrays[g], self.p)
        yield from self._free_products(L, w)

    def basis(self, L: Vec, w: Vec) -> list[np.ndarray]:
        key = (tuple(L), tuple(w))
        if key in self._bases:
            return self._bases[key]
        # fill predecessors first to keep the recursion shallow
        order = sorted({(w[0] - a, w[1] - b) for a in range(w[0] + 1) for b in range(w[1] + 1)},
                       key=lambda x: x[0] + x[1])
        for prev in order:
            if (key[0], prev) not in self._bases:
                self._build(key[0], prev)
        return self._bases[key]

    def _build(self, L: Vec, w: Vec) -> None:
        key = (L, w)
        target = self.targets.get(key)
        shape = (w[0] + 1, w[1] + 1)
        ech, piv, kept = [], [], []
        count = 0
        for arr in self._candidates(L, w):
            count += 1
            if arr.shape != shape:
                raise OracleError(f"product of shape {arr.shape} in cell {w}")
            if kernels.echelon_insert(ech, piv, np.ascontiguousarray(arr.ravel()), self.p):
                kept.append(arr)
                if target is not None and len(kept) >= target:
                    break
        self._bases[key] = kept
        self._complete[key] = target is None or len(kept) < target
        self._counts[key] = count

    def drop(self, L: Vec) -> None:
        for k in [k for k in self._bases if k[0] == tuple(L)]:
            del self._bases[k]
            self._complete.pop(k, None)

    def rank(self, L: Vec, w: Vec) -> CellResult:
        b = self.basis(L, w)
        return CellResult(tuple(L), tuple(w), len(b), self._counts.get((tuple(L), tuple(w)), 0),
                          self.targets.get((tuple(L), tuple(w))))


def graded_piece_rank(L: Vec, weight: Vec, table: GeneratorTable, primes: Sequence[int] | None = None,
                      target: int | None = None) -> dict:
    """Rank of the degree-(L, weight) piece modulo each prime.

    With target set, each prime stops once the rank reaches it.
    """
    primes = list(primes or default_primes(2))
    ranks = {}
    for p in primes:
        o = ModularPieceOracle(table, p)
        if target is not None:
            o.targets[(tuple(L), tuple(weight))] = target
        ranks[p] = o.rank(L, weight).rank
    vals = set(ranks.values())
    out = {"L": tuple(L), "weight": tuple(weight), "ranks": ranks, "rank": max(vals),
           "agree": len(vals) == 1}
    return out


def exact_piece_rank(L: Vec, weight: Vec, table: GeneratorTable, max_rows: int = 400) -> int:
    """Exact rank over Q(zeta_12); used to settle prime disagreements."""
    monos = enumerate_graded_monomials(L, weight, table)
    if len(monos) > max_rows:
        raise OracleError(f"{len(monos)} monomials exceed the exact-rank budget")
    cols: dict = {}
    rows = []
    for m in monos:
        f = LaurentPoly.const(1)
        for g, e in m.items():
            if g not in ("s", "t"):
                f = f * _x_part(table.polys[g]) ** e
        rows.append(f)
        for mono in f.terms:
            cols.setdefault(mono, len(cols))
    if not rows:
        return 0
    M = [[ZERO_C] * len(cols) for _ in rows]
    for i, f in enumerate(rows):
        for mono, c in f.terms.items():
            M[i][cols[mono]] = c
    return rank_exact(M)


ZERO_C = CycNum()


# ----------------------------------------------------- invariant oracle

def invariant_dimension(G: MatGroup, a: int, b: int) -> int:
    """dim C[x]^G in bidegree (a, b) by averaging traces of symmetric powers.

    The group preserves the two coordinate planes, so the trace on
    Sym^a(V1) (x) Sym^b(V2) factors; complete homogeneous sums follow the
    recurrence h_k = tr*h_{k-1} - det*h_{k-2}.
    """
    total = CycNum()
    for g in G.elements:
        total = total + _sym_trace(g, 0, a) * _sym_trace(g, 2, b)
    val = total / CycNum.from_int(G.order)
    if not val.is_rational() or val.coeffs[0].denominator != 1:
        raise OracleError(f"non-integral invariant count at {(a, b)}")
    return int(val.coeffs[0])


def _sym_trace(g, off: int, k: int) -> CycNum:
    tr = g[off][off] + g[off + 1][off + 1]
    det = g[off][off] * g[off + 1][off + 1] - g[off][off + 1] * g[off + 1][off]
    h0, h1 = ONE, tr
    if k == 0:
        return h0
    for _ in range(k - 1):
        h0, h1 = h1, tr * h1 - det * h0
    return h1


# ----------------------------------------------------- regularity closure

@dataclass(frozen=True)
class RegularityRule:
    name: str
    region: Callable[[int, int], bool]
    family: tuple[Vec, ...]

    def mirrored(self) -> "RegularityRule":
        reg = self.region
        return RegularityRule(self.name + "'", lambda m, n: reg(n, m),
                              tuple((b, a) for a, b in self.family))


def default_rules() -> list[RegularityRule]:
    base = [
        RegularityRule("low", lambda m, n: m >= n + 2 and n in (0, 1), ((1, 0),)),
        RegularityRule("diagonal", lambda m, n: n >= 2 and m in (n, n + 1), ((1, 1),)),
        RegularityRule("wedge", lambda m, n: m >= n + 2 and n >= 2, ((1, 0), (1, 1))),
    ]
    return base + [r.mirrored() for r in base]


@dataclass
class ClosureResult:
    covered: set
    uncovered: list
    witness: dict = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return not self.uncovered

    def chain(self, cell: Vec) -> list:
        out = [cell]
        while cell in self.witness and self.witness[cell] is not None:
            cell = self.witness[cell][0]
            out.append(cell)
        return out[::-1]


def regularity_closure(seeds: Iterable[Vec], rules: Sequence[RegularityRule] | None = None,
                       N: int = 50) -> ClosureResult:
    """Cells (m, n) whose sections are products of seed sections.

    L + B is reached when L is reached, L lies in a rule's region, B is in
    that rule's family and B itself is reached.
    """
    rules = default_rules() if rules is None else list(rules)
    marked = {tuple(s): None for s in seeds if 0 <= s[0] <= N and 0 <= s[1] <= N}
    queue = deque(marked)
    while queue:
        L = queue.popleft()
        for r in rules:
            if not r.region(*L):
                continue
            for B in r.family:
                if B not in marked:
                    continue
                nxt = (L[0] + B[0], L[1] + B[1])
                if nxt[0] > N or nxt[1] > N or nxt in marked:
                    continue
                marked[nxt] = (L, B, r.name)
                queue.append(nxt)
        # a late seed can unlock families of earlier cells
        if not queue:
            grew = False
            for L in list(marked):
                for r in rules:
                    if r.region(*L):
                        for B in r.family:
                            nxt = (L[0] + B[0], L[1] + B[1])
                            if B in marked and nxt not in marked and nxt[0] <= N and nxt[1] <= N:
                                marked[nxt] = (L, B, r.name)
                                queue.append(nxt)
                                grew = True
            if not grew:
                break
    grid = [(m, n) for m in range(N + 1) for n in range(N + 1)]
    uncovered = [c for c in grid if c not in marked]
    return ClosureResult(set(marked), uncovered, marked)


def seed_necessity(seeds: Sequence[Vec], rules=None, N: int = 50) -> dict[Vec, list]:
    """For each seed, the cells left uncovered when it is removed."""
    out = {}
    for s in seeds:
        rest = [x for x in seeds if tuple(x) != tuple(s)]
        out[tuple(s)] = regularity_closure(rest, rules, N).uncovered
    return out


# -------------------------------------------------------------- verdict

@dataclass
class CellVerdict:
    L: Vec
    weight: Vec
    expected: int
    ranks: dict
    status: str  # "equal", "short", "inconclusive", "exceeds"


def cox_equality_verdict(bundles: Sequence[Vec], tables: Mapping[Vec, Mapping[Vec, int]],
                         table: GeneratorTable, primes: Sequence[int] | None = None,
                         ell: Vec = (3, 2), D: int = 130, audit: bool = False,
                         progress: Callable[[str], None] | None = None) -> dict:
    """Compare modular ranks against the weight tables cell by cell.

    tables[L] maps weights to h0(L)_w. With audit on, ranks are computed
    without early stopping so the containment inequality is also tested.
    """
    primes = list(primes or default_primes(2))
    if len(primes) < 2:
        raise OracleError("at least two primes are required")
    cells: list[CellVerdict] = []
    for L in bundles:
        L = tuple(L)
        tab = {w: v for w, v in tables[L].items() if ell[0] * w[0] + ell[1] * w[1] <= D and v > 0}
        per_prime = {}
        for p in primes:
            o = ModularPieceOracle(table, p)
            if not audit:
                for w, v in tab.items():
                    o.targets[(L, w)] = v
            per_prime[p] = {w: o.rank(L, w).rank for w in sorted(tab, key=lambda x: (x[0] + x[1], x))}
            o.drop(L)
        for w in sorted(tab):
            ranks = {p: per_prime[p][w] for p in primes}
            exp = tab[w]
            lo = min(ranks.values())
            if max(ranks.values()) > exp:
                status = "exceeds"
            elif lo >= exp:
                status = "equal"
            elif max(ranks.values()) >= exp:
                status = "inconclusive"
            else:
                status = "short"
            cells.append(CellVerdict(L, w, exp, ranks, status))
        if progress:
            progress(f"bundle {L}: {len(tab)} cells")
    bad = [c for c in cells if c.status != "equal"]
    return {"cells": cells, "failures": bad, "passed": not bad,
            "bundles": [tuple(L) for L in bundles], "primes": primes}
