"""Picard-torus GIT for the candidate Cox ring.

Covers Hilbert-Mumford semistability, the toric quotient pipeline for the
central-fibre components, the hypersurface component checks, chart
invariants with expressibility certificates and base-locus checks.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactmath import (ONE, ZERO, CycNum, I, SQRT3, kernel_basis, mat_mul, same_row_lattice,
                        smith_normal_form, solve_linear, solve_rational, transpose)
from .latgeom import (AffineSemigroup, Cone, Fan, LatticeError, apply_matrix, cone_from_constraints,
                      dual_cone, face_duality, faces, hilbert_basis, orbit_face_of_vanishing,
                      orbit_is_normal, primitive, vanishing_labels)
from .polylaurent import LaurentPoly, PolyError, jacobian_rank_at_point, parse_poly
from .seeds import GENERATOR_NAMES, ChartSeed, ComponentSeed


class QuotientError(RuntimeError):
    pass


# --------------------------------------------------------------- weights

@dataclass(frozen=True)
class PicWeightTable:
    picard: Mapping[str, tuple[int, int]]
    torus: Mapping[str, tuple[int, int]]

    @classmethod
    def from_degree_matrix(cls, dm: Mapping[str, tuple]) -> "PicWeightTable":
        return cls({k: v[0] for k, v in dm.items()}, {k: v[1] for k, v in dm.items()})

    def pic_of(self, mono: Mapping[str, int]) -> tuple[int, int]:
        return _wsum(self.picard, mono)

    def t_of(self, mono: Mapping[str, int]) -> tuple[int, int]:
        return _wsum(self.torus, mono)


def _wsum(table, mono) -> tuple[int, int]:
    a = b = 0
    for g, e in (mono.items() if isinstance(mono, Mapping) else mono):
        a += e * table[g][0]
        b += e * table[g][1]
    return (a, b)


def is_semistable_support(support: Iterable[str], chi: Sequence[int], weights: PicWeightTable) -> bool:
    ws = [weights.picard[g] for g in support]
    chi = tuple(chi)
    if not any(chi):
        return bool(ws)
    if not ws:
        return False
    return Cone(ws, 2).contains(chi)


def is_stable_support(support: Iterable[str], chi: Sequence[int], weights: PicWeightTable) -> bool:
    """chi in the interior of a full-dimensional weight cone, trivial isotropy."""
    ws = [weights.picard[g] for g in support]
    if not ws:
        return False
    c = Cone(ws, 2)
    if c.rank != 2 or not c.relative_interior_contains(tuple(chi)):
        return False
    _, D, _ = smith_normal_form([list(w) for w in ws])
    return [D[i][i] for i in range(2)] == [1, 1]


def on_wall(chi: Sequence[int], weights: PicWeightTable) -> bool:
    """chi spans the same ray as some generator weight."""
    chi = tuple(chi)
    for w in set(weights.picard.values()):
        if any(w) and chi[0] * w[1] - chi[1] * w[0] == 0 and chi[0] * w[0] + chi[1] * w[1] > 0:
            return True
    return False


# ------------------------------------------------------ Laurent monomials

GMono = tuple  # sorted tuple of (generator name, exponent)


def gmono(d: Mapping[str, int] | Iterable) -> GMono:
    items = d.items() if isinstance(d, Mapping) else d
    acc: dict[str, int] = {}
    for g, e in items:
        acc[g] = acc.get(g, 0) + e
    return tuple(sorted(((g, e) for g, e in acc.items() if e), key=lambda t: GENERATOR_NAMES.index(t[0])))


def gmono_from_text(text: str) -> GMono:
    f = parse_poly(text)
    if not f.is_monomial():
        raise PolyError(f"{text!r} is not a monomial")
    (m, c), = f.terms.items()
    if c != ONE:
        raise PolyError(f"{text!r} has a coefficient")
    return gmono(m)


def format_gmono(m: GMono) -> str:
    def part(items):
        return "*".join(g if e == 1 else f"{g}^{e}" for g, e in items)
    num = [(g, e) for g, e in m if e > 0]
    den = [(g, -e) for g, e in m if e < 0]
    top = part(num) or "1"
    if not den:
        return top
    bottom = part(den)
    return f"{top}/({bottom})" if len(den) > 1 or den[0][1] > 1 else f"{top}/{bottom}"


def gmono_mul(a: GMono, b: GMono) -> GMono:
    return gmono(list(a) + list(b))


# ----------------------------------------------------------- Lemma-3.3 side

@dataclass
class SupportVerdict:
    name: str
    support: tuple[str, ...]
    semistable: bool
    minimal: bool


def minimal_semistable(support: Sequence[str], chi, weights) -> bool:
    if not is_semistable_support(support, chi, weights):
        return False
    return all(not is_semistable_support(sub, chi, weights)
               for r in range(len(support)) for sub in itertools.combinations(support, r))


def unstable_cover_check(charts: Sequence["ChartData"], chi, weights: PicWeightTable) -> dict:
    rows = []
    for ch in charts:
        sup = tuple(g for g, e in ch.localize if e > 0)
        rows.append(SupportVerdict(ch.name, sup, is_semistable_support(sup, chi, weights),
                                   minimal_semistable(sup, chi, weights)))
    return {"chi": tuple(chi), "on_wall": on_wall(chi, weights), "rows": rows,
            "passed": all(r.semistable for r in rows)}


# --------------------------------------------------------------- charts

@dataclass
class ChartData:
    name: str
    localize: GMono
    coordinates: list[GMono]
    printed_coordinates: list[GMono]
    corrections: list[tuple[str, str]]
    listed: list[GMono]


def degree_zero_correction(m: GMono, localize: GMono, weights: PicWeightTable) -> GMono:
    """Replace the denominator of m by the unique product of localizing
    generators making the Picard weight zero."""
    num = [(g, e) for g, e in m if e > 0]
    w = weights.pic_of(num)
    sup = [g for g, e in localize if e > 0]
    A = [[weights.picard[g][i] for g in sup] for i in range(2)]
    sol = solve_rational(A, list(w))
    if sol is None or any(x.denominator != 1 or x < 0 for x in sol):
        raise QuotientError(f"no degree-zero denominator for {format_gmono(m)}")
    if len(sup) == 2:
        det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
        if det == 0:
            raise QuotientError("denominator exponents not unique")
    return gmono(num + [(g, -int(x)) for g, x in zip(sup, sol)])


def build_chart(seed: ChartSeed, weights: PicWeightTable, compass=None) -> ChartData:
    """Chart from seed data.

    Printed coordinates of nonzero Picard weight get their denominator fixed.
    When the tangent weights at the chart's fixed point are supplied, a
    coordinate whose T-weight is not among them is replaced by the unique
    ambient invariant carrying the missing weight.
    """
    loc = gmono_from_text(seed.localize)
    printed = [gmono_from_text(c) for c in seed.coordinates]
    coords, corr = [], []
    for c in printed:
        if weights.pic_of(c) == (0, 0):
            coords.append(c)
        else:
            fixed = degree_zero_correction(c, loc, weights)
            corr.append((format_gmono(c), format_gmono(fixed)))
            coords.append(fixed)
    if compass is not None:
        coords = _tangent_weight_correction(coords, loc, compass, weights, corr)
    listed = []
    for text in seed.listed:
        m = gmono_from_text(text)
        if m:
            listed.append(m)
    return ChartData(seed.name, loc, coords, printed, corr, listed)


def _overlap(a: GMono, b: GMono) -> int:
    return len({(g, e > 0) for g, e in a} & {(g, e > 0) for g, e in b})


def _tangent_weight_correction(coords, loc, compass, weights, corr) -> list[GMono]:
    missing = [tuple(v) for v in compass]
    bad = []
    for k, c in enumerate(coords):
        w = weights.t_of(c)
        if w in missing:
            missing.remove(w)
        else:
            bad.append(k)
    if not bad:
        return list(coords)
    pool = chart_ambient_invariants(loc, weights)
    cands = {w: [m for m in pool if weights.t_of(m) == w] for w in missing}
    # pick the replacement closest to the printed monomial; ties are errors
    best, score = None, -1
    for perm in itertools.permutations(missing):
        for choice in itertools.product(*(cands[w] for w in perm)):
            sc = sum(_overlap(coords[k], m) for k, m in zip(bad, choice))
            if sc > score:
                best, score, tie = choice, sc, False
            elif sc == score:
                tie = True
    if best is None or tie:
        raise QuotientError(f"tangent weights {missing} do not single out replacement coordinates")
    out = list(coords)
    for k, m in zip(bad, best):
        corr.append((format_gmono(coords[k]), format_gmono(m)))
        out[k] = m
    return out


def chart_ambient_invariants(f: GMono | str, weights: PicWeightTable) -> list[GMono]:
    """Hilbert basis of degree-zero Laurent monomials, negative exponents
    allowed only on the support of f."""
    if isinstance(f, str):
        f = gmono_from_text(f) if f.strip() != "1" else ()
    sup = [g for g, e in f if e > 0]
    others = [g for g in GENERATOR_NAMES if g not in sup]
    if not sup:
        return _invariants_without_localization(weights)
    A = [[weights.picard[g][i] for g in sup] for i in range(2)]
    if len(sup) != 2 or abs(A[0][0] * A[1][1] - A[0][1] * A[1][0]) != 1:
        raise QuotientError("ambient invariants implemented for unimodular two-element supports")
    out = []
    for g in others:
        sol = solve_rational(A, list(weights.picard[g]))
        out.append(gmono([(g, 1)] + [(h, -int(x)) for h, x in zip(sup, sol)]))
    return out


def _invariants_without_localization(weights: PicWeightTable) -> list[GMono]:
    by_type: dict[tuple[int, int], list[str]] = {}
    for g in GENERATOR_NAMES:
        by_type.setdefault(weights.picard[g], []).append(g)
    out = [gmono([(g, 1)]) for g in by_type.get((0, 0), [])]
    types = sorted(t for t in by_type if t != (0, 0))
    n = len(types)
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    eqs = [[t[k] for t in types] for k in range(2)]
    cone = cone_from_constraints(eye, eqs, n)
    for h in hilbert_basis(cone):
        pools = [itertools.combinations_with_replacement(by_type[t], c) for t, c in zip(types, h) if c]
        for choice in itertools.product(*pools):
            out.append(gmono([(g, 1) for grp in choice for g in grp]))
    return out


def compare_invariant_lists(computed: Sequence[GMono], listed: Sequence[GMono]) -> dict:
    cs, ls = set(computed), set(listed)
    return {"missing": sorted(cs - ls, key=format_gmono), "extra": sorted(ls - cs, key=format_gmono)}


def monoid_contains(gens: Sequence[GMono], target: GMono, max_terms: int = 6) -> bool:
    """Is target a product of at most max_terms elements of gens?"""
    gset = set(gens)
    if not target:
        return True
    frontier = {(): None}
    for _ in range(max_terms):
        nxt = {}
        for m in frontier:
            for g in gset:
                p = gmono_mul(m, g)
                if p == target:
                    return True
                nxt[p] = None
        frontier = nxt
    return False


# ---------------------------------------------------- expressibility

class GeneratorRing:
    """Evaluation of generator monomials as Laurent polynomials in x, t."""

    def __init__(self, gens: Mapping[str, LaurentPoly]):
        self.gens = dict(gens)
        self._pow: dict[tuple[str, int], LaurentPoly] = {}

    def power(self, g: str, e: int) -> LaurentPoly:
        key = (g, e)
        if key not in self._pow:
            f = self.gens[g]
            if e < 0:
                if not f.is_monomial():
                    raise PolyError(f"{g} is not invertible in the polynomial ring")
                self._pow[key] = f ** e
            elif e == 0:
                self._pow[key] = LaurentPoly.const(1)
            elif e == 1:
                self._pow[key] = f
            else:
                self._pow[key] = self.power(g, e - 1) * f
        return self._pow[key]

    def evaluate(self, m: GMono) -> LaurentPoly:
        acc = LaurentPoly.const(1)
        for g, e in m:
            acc = acc * self.power(g, e)
        return acc

    def split(self, m: GMono) -> tuple[GMono, GMono]:
        """Numerator and denominator, keeping Laurent-monomial generators on top."""
        num, den = [], []
        for g, e in m:
            if e > 0 or self.gens[g].is_monomial():
                num.append((g, e))
            else:
                den.append((g, -e))
        return gmono(num), gmono(den)


@dataclass
class Expression:
    target: GMono
    terms: list[tuple[tuple[int, ...], CycNum]]
    ok: bool
    message: str = ""

    def to_text(self, names: Sequence[str]) -> str:
        if not self.ok:
            return f"not expressible: {self.message}"
        parts = []
        for alpha, c in self.terms:
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(names, alpha) if a) or "1"
            parts.append(f"({c.to_text()})*{mono}" if c != ONE else mono)
        return " + ".join(parts) or "0"


def _positive_functional_2d(ws: Sequence[tuple[int, int]]):
    c = Cone(ws, 2)
    if any(not any(w) for w in ws) or not c.is_pointed() or c.rank == 0:
        return None
    f = [0, 0]
    for a in c.facets:
        f[0] += a[0]
        f[1] += a[1]
    if c.rank == 1:
        f = list(c.generators[0])
    if any(f[0] * w[0] + f[1] * w[1] <= 0 for w in ws):
        return None
    return tuple(f)


def enumerate_exponents(ws: Sequence[tuple[int, int]], target: tuple[int, int],
                        max_degree: int | None = None) -> list[tuple[int, ...]]:
    """Exponent vectors alpha with sum(alpha_k * ws[k]) == target.

    Finite when the weights admit a positive functional. Otherwise the
    total degree must be capped by max_degree.
    """
    f = _positive_functional_2d(ws)
    if f is None and max_degree is None:
        raise QuotientError("unbounded ansatz: coordinate T-weights admit no positive functional")
    out = []
    n = len(ws)
    if f is None:
        for alpha in _compositions(n, max_degree):
            if tuple(sum(a * w[i] for a, w in zip(alpha, ws)) for i in range(2)) == tuple(target):
                out.append(alpha)
        return out
    fv = [f[0] * w[0] + f[1] * w[1] for w in ws]
    budget = f[0] * target[0] + f[1] * target[1]

    def rec(k, rem_w, rem_b, acc):
        if k == n:
            if rem_w == (0, 0):
                out.append(tuple(acc))
            return
        e = 0
        while e * fv[k] <= rem_b:
            rec(k + 1, (rem_w[0] - e * ws[k][0], rem_w[1] - e * ws[k][1]), rem_b - e * fv[k], acc + [e])
            e += 1
    if budget >= 0:
        rec(0, tuple(target), budget, [])
    return out


def _compositions(n: int, max_degree: int):
    for d in range(max_degree + 1):
        for cut in itertools.combinations(range(d + n - 1), n - 1):
            prev, alpha = -1, []
            for c in cut + (d + n - 1,):
                alpha.append(c - prev - 1)
                prev = c
            yield tuple(alpha)


def express_in_chart_coordinates(target: GMono, coords: Sequence[GMono], ring: GeneratorRing,
                                 weights: PicWeightTable, max_degree: int | None = None) -> Expression:
    """Solve target = sum c_alpha coords^alpha exactly.

    Without a positive functional on the coordinate T-weights the ansatz is
    searched by increasing total degree up to max_degree.
    """
    if weights.pic_of(target) != (0, 0) or any(weights.pic_of(c) != (0, 0) for c in coords):
        raise QuotientError("target and coordinates must have Picard weight zero")
    tw = [weights.t_of(c) for c in coords]
    if _positive_functional_2d(tw) is None and max_degree is not None:
        last = Expression(target, [], False, "no exponent vector has the target T-weight")
        for cap in range(max_degree + 1):
            alphas = enumerate_exponents(tw, weights.t_of(target), cap)
            if alphas:
                last = _solve_ansatz(target, coords, alphas, ring)
                if last.ok:
                    return last
        last.message += f" (degree cap {max_degree})"
        return last
    alphas = enumerate_exponents(tw, weights.t_of(target))
    if not alphas:
        return Expression(target, [], False, "no exponent vector has the target T-weight")
    return _solve_ansatz(target, coords, alphas, ring)


def _solve_ansatz(target, coords, alphas, ring) -> Expression:
    terms = [gmono([(g, a * e) for c, a in zip(coords, alpha) for g, e in c]) for alpha in alphas]
    # clear denominators by a common product of non-invertible generators
    den: dict[str, int] = {}
    for m in terms + [target]:
        _, d = ring.split(m)
        for g, e in d:
            den[g] = max(den.get(g, 0), e)
    clear = gmono(den)
    polys = [ring.evaluate(gmono_mul(m, clear)) for m in terms]
    rhs = ring.evaluate(gmono_mul(target, clear))
    cols = sorted({mono for p in polys + [rhs] for mono in p.terms})
    A = [[p.terms.get(mono, ZERO) for p in polys] for mono in cols]
    b = [rhs.terms.get(mono, ZERO) for mono in cols]
    res = solve_linear(A, b)
    if not res.consistent:
        return Expression(target, [], False, "inconsistent linear system for the enumerated ansatz")
    sol = res.solution
    check = LaurentPoly()
    for p, c in zip(polys, sol):
        if not c.is_zero():
            check = check + p.scale(c)
    if check != rhs:
        return Expression(target, [], False, "verification of the identity failed")
    return Expression(target, [(a, c) for a, c in zip(alphas, sol) if not c.is_zero()], True)


def chart_jacobian_rank(coords: Sequence[GMono], ring: GeneratorRing, rng: random.Random) -> int:
    pairs = []
    for c in coords:
        num, den = ring.split(c)
        pairs.append((ring.evaluate(num), ring.evaluate(den)))
    for _ in range(20):
        point = {v: Fraction(rng.randint(1, 97), rng.randint(1, 13)) for v in ("x1", "y1", "x2", "y2", "t1", "t2")}
        try:
            return jacobian_rank_at_point(pairs, point)
        except PolyError:
            continue
    raise QuotientError("no non-degenerate evaluation point found")


# ------------------------------------------------------ toric components

@dataclass
class ComponentData:
    name: str
    variables: tuple[str, ...]
    points: dict[str, tuple[int, ...]]
    P: list[list[int]]
    J: list[list[int]]
    torus_point: dict[str, CycNum]
    seed: ComponentSeed
    sigma_dual: Cone = None
    sigma: Cone = None

    def __post_init__(self):
        self.sigma_dual = Cone([self.points[v] for v in self.variables])
        self.sigma = dual_cone(self.sigma_dual)

    @property
    def semigroup(self) -> AffineSemigroup:
        return AffineSemigroup([self.points[v] for v in self.variables])

    def vanishing(self, tau: Cone) -> set[str]:
        return vanishing_labels(self.points, tau)

    def nonvanishing(self, tau: Cone) -> list[str]:
        van = self.vanishing(tau)
        return [v for v in self.variables if v not in van]


def _binomial(eq: LaurentPoly, variables) -> tuple[tuple[int, ...], tuple[int, ...], CycNum]:
    """Exponent vectors m1, m2 and c with c*x^m1 + x^m2 ... normalized as x^(m1-m2) = c."""
    if len(eq.terms) != 2:
        raise QuotientError(f"not a binomial: {eq.to_text()}")
    (m1, c1), (m2, c2) = eq.sorted_terms()
    e1 = tuple(dict(m1).get(v, 0) for v in variables)
    e2 = tuple(dict(m2).get(v, 0) for v in variables)
    return e1, e2, -c2 / c1


def toric_data_from_equations(seed: ComponentSeed, weights: PicWeightTable) -> ComponentData:
    """Lattice points and a torus point for a binomial component."""
    variables = seed.nonvanishing
    bins = [_binomial(eq, variables) for eq in seed.equations]
    L = [[a - b for a, b in zip(e1, e2)] for e1, e2, _ in bins]
    consts = [c for _, _, c in bins]
    n = len(variables)
    U, D, V = smith_normal_form(L)
    r = sum(1 for i in range(min(len(D), n)) if D[i][i])
    if any(abs(D[i][i]) != 1 for i in range(r)):
        raise QuotientError(f"{seed.name}: binomial lattice is not saturated")
    # points: images of unit vectors in Z^n / L
    points = {v: tuple(V[k][j] for j in range(r, n)) for k, v in enumerate(variables)}
    # torus point: a^row = c for every row; with a_k = prod_j y_j^V[k][j]
    # the conditions become y_j^d_j = prod_i c_i^U[j][i]
    y = []
    for j in range(len(U)):
        val = ONE
        for i, c in enumerate(consts):
            val = val * c ** U[j][i]
        if j < r:
            y.append(val if D[j][j] == 1 else val.inverse())
        elif val != ONE:
            raise QuotientError(f"{seed.name}: inconsistent binomial coefficients")
    a = {}
    for k, v in enumerate(variables):
        val = ONE
        for j in range(r):
            val = val * y[j] ** V[k][j]
        a[v] = val
    for eq in seed.equations:
        if not eq.evaluate(a).is_zero():
            raise QuotientError(f"{seed.name}: torus point does not satisfy {eq.to_text()}")
    return _finish_component(seed, variables, points, a, weights)


def _solve_embedding(points, table, variables) -> list[list[int]]:
    """Integer 2 x d matrix X with X . point(v) = table[v] for every v."""
    A = [list(points[v]) for v in variables]
    rows = []
    for i in range(2):
        sol = solve_rational(A, [table[v][i] for v in variables])
        if sol is None or any(s.denominator != 1 for s in sol):
            raise QuotientError("weights are not induced by the lattice points")
        rows.append([int(s) for s in sol])
    return rows


def _finish_component(seed, variables, points, a, weights) -> ComponentData:
    P = _solve_embedding(points, weights.picard, variables)
    J = _solve_embedding(points, weights.torus, variables)
    return ComponentData(seed.name, tuple(variables), points, P, J, a, seed)


def toric_data_from_points(seed: ComponentSeed, weights: PicWeightTable) -> ComponentData:
    variables = tuple(v for v in seed.nonvanishing if v in seed.points)
    if set(variables) != set(seed.nonvanishing):
        raise QuotientError(f"{seed.name}: lattice points do not cover the coordinates")
    # equations must be binomials whose exponent differences map to zero
    a = None
    for eq in seed.equations:
        e1, e2, _ = _binomial(eq, variables)
        diff = [x - y for x, y in zip(e1, e2)]
        img = [sum(diff[k] * seed.points[v][j] for k, v in enumerate(variables)) for j in range(4)]
        if any(img):
            raise QuotientError(f"{seed.name}: {eq.to_text()} is not homogeneous for the lattice points")
    derived = toric_data_from_equations(seed, weights)
    a = derived.torus_point
    return _finish_component(seed, variables, dict(seed.points), a, weights)


def component_data(seed: ComponentSeed, weights: PicWeightTable) -> ComponentData:
    if seed.points:
        return toric_data_from_points(seed, weights)
    return toric_data_from_equations(seed, weights)


@dataclass
class FaceInfo:
    tau: Cone
    vanishing: frozenset
    semistable: bool
    stable: bool


@dataclass
class QuotientResult:
    component: str
    Q: list[list[int]]
    align: tuple
    faces: list[FaceInfo]
    fan: Fan
    images: dict
    tmatrix: list[list[int]]

    def image(self, tau: Cone) -> tuple:
        return self.images[tau.key()]


def _image_cone(Q, A, tau: Cone) -> tuple:
    rays = set()
    for r in tau.generators:
        v = apply_matrix(Q, r)
        if A is not None:
            v = apply_matrix(A, v)
        if any(v):
            rays.add(primitive(v))
    c = Cone(sorted(rays), 2) if rays else Cone([], 2)
    if not c.is_pointed():
        return None
    return tuple(sorted(c.extreme_rays())) if c.rank else ()


def toric_quotient_pipeline(c: ComponentData, weights: PicWeightTable, chi=(2, 1),
                            kernel: Sequence[Sequence[int]] | None = None,
                            reference_tmatrix: Sequence[Sequence[int]] | None = None) -> QuotientResult:
    Q = kernel_basis(c.P)
    if len(Q) != 2:
        raise QuotientError(f"{c.name}: kernel of P has rank {len(Q)}")
    if kernel is not None:
        if not same_row_lattice(Q, [list(r) for r in kernel]):
            raise QuotientError(f"{c.name}: supplied kernel basis differs from ker P")
        Q = [list(r) for r in kernel]
    _, D, _ = smith_normal_form(Q)
    if [abs(D[0][0]), abs(D[1][1])] != [1, 1]:
        raise QuotientError(f"{c.name}: Q is not surjective")
    if any(any(x for x in row) for row in mat_mul(c.P, transpose(Q))):
        raise QuotientError(f"{c.name}: P Q^T is not zero")
    W = mat_mul(c.J, transpose(Q))
    align = None
    if reference_tmatrix is not None:
        # the reference lists T-weights of the quotient characters row-wise,
        # i.e. it equals (J Q'^T)^T for Q' = A Q; solve A = R (W^T)^-1
        Winv_t = _rational_inverse2(transpose(W))
        A = [[sum(Fraction(reference_tmatrix[i][k]) * Winv_t[k][j] for k in range(2)) for j in range(2)]
             for i in range(2)]
        if any(x.denominator != 1 for row in A for x in row):
            raise QuotientError(f"{c.name}: T-matrices differ by a non-integral change of basis")
        A = tuple(tuple(int(x) for x in row) for row in A)
        if abs(A[0][0] * A[1][1] - A[0][1] * A[1][0]) != 1:
            raise QuotientError(f"{c.name}: alignment is not unimodular")
        align = A
        Q = mat_mul([list(r) for r in A], Q)
        W = mat_mul(c.J, transpose(Q))
    infos = []
    images = {}
    for tau in faces(c.sigma):
        van = frozenset(c.vanishing(tau))
        sup = [v for v in c.variables if v not in van]
        infos.append(FaceInfo(tau, van, is_semistable_support(sup, chi, weights),
                              is_stable_support(sup, chi, weights)))
        images[tau.key()] = _image_cone(Q, None, tau)
    cones = []
    for fi in infos:
        if fi.semistable:
            im = images[fi.tau.key()]
            if im is None or len(im) != fi.tau.rank:
                raise QuotientError(f"{c.name}: face {fi.tau} collapses under Q")
            if im:
                cones.append(Cone(im, 2))
    try:
        fan = Fan(cones)
    except LatticeError as exc:
        raise QuotientError(f"{c.name}: surviving cones do not form a fan: {exc}") from exc
    return QuotientResult(c.name, Q, align, infos, fan, images, [list(r) for r in W])


def _rational_inverse2(W):
    det = W[0][0] * W[1][1] - W[0][1] * W[1][0]
    if det == 0:
        raise QuotientError("T-matrix is singular")
    return [[Fraction(W[1][1], det), Fraction(-W[0][1], det)],
            [Fraction(-W[1][0], det), Fraction(W[0][0], det)]]


@dataclass
class NormalityReport:
    nonnormal_images: set
    nonnormal_rays: set
    omega_consistent: bool | None
    per_face: list


def nonnormal_locus(c: ComponentData, q: QuotientResult, omegas: Sequence[Cone] = ()) -> NormalityReport:
    per_face = []
    bad = set()
    omega_ok = True if omegas else None
    S = c.semigroup
    for fi in q.faces:
        if not fi.semistable:
            continue
        F = face_duality(c.sigma, fi.tau)
        normal = orbit_is_normal(S, F)
        in_omega = any(fi.tau <= w for w in omegas)
        if in_omega and not normal:
            omega_ok = False
        img = q.image(fi.tau)
        per_face.append((fi.tau, img, normal, in_omega))
        if not normal:
            bad.add(img)
    rays = {im[0] for im in bad if len(im) == 1}
    return NormalityReport(bad, rays, omega_ok, per_face)


def _face_point(c: ComponentData, tau: Cone, other_vars=()) -> dict[str, CycNum]:
    van = c.vanishing(tau)
    pt = {v: (ZERO if v in van else c.torus_point[v]) for v in c.variables}
    for v in GENERATOR_NAMES:
        pt.setdefault(v, ZERO)
    return pt


def component_intersection_orbit(c: ComponentData, q: QuotientResult, vanishing: Iterable[str]) -> tuple:
    tau = orbit_face_of_vanishing(c.points, vanishing, c.sigma)
    return q.image(tau)


def intersection_with(c: ComponentData, q: QuotientResult, other: ComponentSeed) -> list[tuple]:
    """Quotient cones of the generic orbits of (this component) cap (other)."""
    forced = set(other.vanishing) & set(c.variables)
    cand = []
    for fi in q.faces:
        if not fi.semistable or not forced <= fi.vanishing:
            continue
        pt = _face_point(c, fi.tau)
        if all(eq.evaluate(pt).is_zero() for eq in other.equations):
            cand.append(fi)
    minimal = [fi for fi in cand if not any(g is not fi and g.tau <= fi.tau and not fi.tau <= g.tau for g in cand)]
    return sorted({q.image(fi.tau) for fi in minimal})


# ----------------------------------------------------- weight tables

def enumerate_picard_monomials(variables: Sequence[str], L: Sequence[int], weights: PicWeightTable):
    """Exponent vectors over variables with total Picard weight L."""
    ws = [weights.picard[v] for v in variables]
    zero = [k for k, w in enumerate(ws) if not any(w)]
    if zero:
        raise QuotientError("weight-zero variables make the graded piece infinite")
    f = _positive_functional_2d(ws)
    if f is None:
        raise QuotientError("Picard weights are not in an open half-plane")
    fv = [f[0] * w[0] + f[1] * w[1] for w in ws]
    budget = f[0] * L[0] + f[1] * L[1]
    out = []
    n = len(variables)

    def rec(k, rem, b, acc):
        if k == n:
            if rem == (0, 0):
                out.append(tuple(acc))
            return
        e = 0
        while e * fv[k] <= b:
            rec(k + 1, (rem[0] - e * ws[k][0], rem[1] - e * ws[k][1]), b - e * fv[k], acc + [e])
            e += 1
    if budget >= 0:
        rec(0, tuple(L), budget, [])
    return out


def component_weight_table(L, c: ComponentData, weights: PicWeightTable) -> dict[tuple[int, int], int]:
    pts = set()
    for e in enumerate_picard_monomials(c.variables, L, weights):
        pts.add(tuple(sum(a * c.points[v][j] for a, v in zip(e, c.variables)) for j in range(len(c.P[0]))))
    table: dict[tuple[int, int], int] = {}
    for m in pts:
        w = tuple(apply_matrix(c.J, m))
        table[w] = table.get(w, 0) + 1
    return table


def hypersurface_weight_table(L, seed: ComponentSeed, weights: PicWeightTable) -> dict[tuple[int, int], int]:
    """Monomials of degree L minus monomials shifted by the relation degree."""
    if len(seed.equations) != 1:
        raise QuotientError("hypersurface component needs exactly one equation")
    eq = seed.equations[0]
    variables = [v for v in seed.nonvanishing]
    rel_mono = gmono(next(iter(eq.terms)))
    rel_p, rel_t = weights.pic_of(rel_mono), weights.t_of(rel_mono)

    def count(Lp):
        tab: dict[tuple[int, int], int] = {}
        for e in enumerate_picard_monomials(variables, Lp, weights):
            w = weights.t_of(list(zip(variables, e)))
            tab[w] = tab.get(w, 0) + 1
        return tab
    table = count(L)
    L2 = (L[0] - rel_p[0], L[1] - rel_p[1])
    try:
        shifted = count(L2)
    except QuotientError:
        shifted = {}
    for w, k in shifted.items():
        key = (w[0] + rel_t[0], w[1] + rel_t[1])
        table[key] = table.get(key, 0) - k
    return {w: k for w, k in table.items() if k}


# ------------------------------------------------------ base locus

def base_locus_on_component(L, c: ComponentData, chi, weights: PicWeightTable) -> dict:
    monos = enumerate_picard_monomials(c.variables, L, weights)
    supports = [{v for a, v in zip(e, c.variables) if a} for e in monos]
    base_faces = []
    for tau in faces(c.sigma):
        van = c.vanishing(tau)
        if all(s & van for s in supports):
            sup = [v for v in c.variables if v not in van]
            base_faces.append((tau, is_semistable_support(sup, chi, weights)))
    return {"L": tuple(L), "component": c.name, "monomials": len(monos),
            "base_faces": [(tau.generators, ss) for tau, ss in base_faces],
            "passed": all(not ss for _, ss in base_faces)}


# ------------------------------------------------------ hypersurface P

def zp_checks(seed: ComponentSeed, weights: PicWeightTable, expected_weights=None) -> dict:
    """The P-component: normal form of the equation, weights, restriction to
    t = 0, and the flex and cusp incidences of the resulting cubic."""
    X, Y, Zv, W, T = (LaurentPoly.var(n) for n in ("X", "Y", "Z", "W", "T"))
    scale = (I * SQRT3) / CycNum.from_int(3)
    images = {"w11": X, "w12": Y.scale(CycNum.from_rational(Fraction(1, 27))), "w13": Zv, "w3": W,
              "t": T.scale(scale)}
    eq = seed.equations[0].substitute(images)
    normal = X ** 3 - Y * Zv ** 2 + W ** 2 * T
    res = {"rescaling": {"w11": "X", "w12": "Y/27", "w13": "Z", "w3": "W", "t": f"({scale.to_text()})*T"},
           "normal_form": eq.to_text(), "normal_form_ok": eq == normal}
    tw = [list(weights.torus[g]) for g in ("w11", "w12", "w13")]
    tmat = [[tw[j][i] for j in range(3)] for i in range(2)]
    res["t_weights"] = tmat
    res["t_weights_ok"] = expected_weights is None or tmat == [list(r) for r in expected_weights]
    cubic = eq.substitute({"T": LaurentPoly()})
    res["cubic"] = cubic.to_text()
    res["cubic_ok"] = cubic == X ** 3 - Y * Zv ** 2
    # y = 0 restricts the cubic to x^3: a triple root at x = 0, i.e. (0:0:1)
    on_line = cubic.substitute({"Y": LaurentPoly()})
    res["flex_ok"] = on_line == X ** 3
    grad_flex = [cubic.derivative(v).evaluate({"X": 0, "Y": 0, "Z": 1}) for v in ("X", "Y", "Z")]
    res["flex_tangent"] = [g.to_text() for g in grad_flex]
    res["flex_tangent_ok"] = grad_flex[0].is_zero() and grad_flex[2].is_zero() and not grad_flex[1].is_zero()
    cusp = {"X": 0, "Y": 1, "Z": 0}
    res["cusp_point"] = "(0:1:0)"
    res["cusp_ok"] = all(cubic.derivative(v).evaluate(cusp).is_zero() for v in ("X", "Y", "Z")) \
        and cubic.evaluate(cusp).is_zero()
    res["point_001_singular"] = all(cubic.derivative(v).evaluate({"X": 0, "Y": 0, "Z": 1}).is_zero()
                                    for v in ("X", "Y", "Z"))
    res["passed"] = all(res[k] for k in ("normal_form_ok", "t_weights_ok", "cubic_ok", "flex_ok",
                                         "flex_tangent_ok", "cusp_ok"))
    return res
