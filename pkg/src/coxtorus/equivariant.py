"""Fixed-point data and the localization series engine.

A fixed point contributes t^mu / prod(1 - t^nu) to the equivariant Euler
characteristic of a line bundle. Expanding every term in the half-plane of
a functional ell and summing gives the weight table of the section space.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Mapping, Sequence

import numpy as np

from . import kernels

Vec = tuple[int, int]


class SeriesError(ValueError):
    pass


class CompassError(ValueError):
    def __init__(self, msg, candidates=()):
        super().__init__(msg)
        self.candidates = list(candidates)


def _homothety(v: Vec) -> int:
    return v[0] + v[1]


# ----------------------------------------------------------- fixed points

@dataclass
class FixedPointDatum:
    id: str
    vertex: Vec
    mu_L1: Vec
    mu_L1L2: Vec
    compass: list[Vec] = field(default_factory=list)

    @property
    def mu_L2(self) -> Vec:
        return (self.mu_L1L2[0] - self.mu_L1[0], self.mu_L1L2[1] - self.mu_L1[1])

    def mu(self, L: Sequence[int]) -> Vec:
        p, q = L
        return (p * self.mu_L1[0] + q * self.mu_L2[0], p * self.mu_L1[1] + q * self.mu_L2[1])

    def invariants(self) -> dict[str, bool]:
        return {
            "vertex": self.mu((2, 1)) == tuple(self.vertex),
            "pairing": pairs_to_two(self.compass),
            "sign_balance": sign_balanced(self.compass),
        }


def fixed_point_data(compasses: Mapping[str, dict], mu_table: Mapping[str, tuple]) -> list[FixedPointDatum]:
    out = []
    for pid in sorted(compasses, key=lambda s: int(s[1:])):
        row = compasses[pid]
        m1, m12 = mu_table[pid]
        out.append(FixedPointDatum(pid, tuple(row["vertex"]), tuple(m1), tuple(m12),
                                   [tuple(v) for v in row["compass"]]))
    return out


def pairs_to_two(vs: Sequence[Vec]) -> bool:
    """The homothety weights split into pairs each summing to 2."""
    hs = [_homothety(v) for v in vs]
    if len(hs) % 2:
        return False

    def match(rest):
        if not rest:
            return True
        a, tail = rest[0], rest[1:]
        return any(a + b == 2 and match(tail[:k] + tail[k + 1:]) for k, b in enumerate(tail))
    return match(hs)


def sign_balanced(vs: Sequence[Vec], ell0: Vec = (1, -1)) -> bool:
    vals = [ell0[0] * v[0] + ell0[1] * v[1] for v in vs]
    return sum(x > 0 for x in vals) == len(vs) // 2 and sum(x < 0 for x in vals) == len(vs) // 2


def _on_axis(v: Vec) -> bool:
    return (v[0] == 0) != (v[1] == 0)


# -------------------------------------------------------- weight polygons

def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list[Vec]:
    """Strict vertices in counter-clockwise order (monotone chain)."""
    pts = sorted(set(map(tuple, points)))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _on_segment(p, a, b) -> bool:
    return (_cross(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def boundary_neighbours(vertex: Vec, points) -> list[Vec]:
    """Steps from vertex to the adjacent table points along the hull boundary."""
    pts = set(map(tuple, points))
    vertex = tuple(vertex)
    if vertex not in pts or len(pts) == 1:
        return []
    hull = convex_hull(pts)
    if len(hull) == 2:
        edges = [(hull[0], hull[1])]
    else:
        edges = [(hull[k], hull[(k + 1) % len(hull)]) for k in range(len(hull))]
    steps = set()
    for a, b in edges:
        if not _on_segment(vertex, a, b):
            continue
        on_edge = [p for p in pts if p != vertex and _on_segment(p, a, b)]
        for end in (a, b):
            if end == vertex:
                continue
            d = (end[0] - vertex[0], end[1] - vertex[1])
            ahead = [p for p in on_edge
                     if (p[0] - vertex[0]) * d[0] + (p[1] - vertex[1]) * d[1] > 0]
            near = min(ahead, key=lambda p: abs(p[0] - vertex[0]) + abs(p[1] - vertex[1]))
            steps.add((near[0] - vertex[0], near[1] - vertex[1]))
    return sorted(steps)


def component_tangent_weights(vertex: Vec, tables: Mapping[str, Mapping[Vec, int]],
                              planes: Sequence[str] = ("ZP",)) -> list[Vec]:
    """Known compass entries at vertex.

    Toric components contribute the boundary steps of their weight polygon.
    A projective-plane component, whose table for this bundle is its three
    fixed points, contributes the differences to the other two.
    """
    known = set()
    for name, t in tables.items():
        support = sorted(p for p, v in t.items() if v > 0)
        if name in planes:
            if tuple(vertex) not in support:
                continue
            if len(support) != 3:
                raise CompassError(f"plane component {name} has {len(support)} weights, expected 3")
            known.update((p[0] - vertex[0], p[1] - vertex[1]) for p in support if p != tuple(vertex))
        else:
            known.update(boundary_neighbours(vertex, support))
    return sorted(known)


def assemble_compass(point_id: str, known: Sequence[Vec], size: int = 4) -> list[Vec]:
    """Complete known tangent weights to a full compass.

    Unknown entries are axis-aligned, the homothety weights pair to 2 and
    the entries are balanced in sign under (1, -1). The completion must be
    unique.
    """
    known = [tuple(v) for v in known]
    missing = size - len(known)
    if missing < 0:
        raise CompassError(f"{point_id}: {len(known)} known weights exceed {size}")
    if missing == 0:
        if not (pairs_to_two(known) and sign_balanced(known)):
            raise CompassError(f"{point_id}: known weights violate the compass constraints")
        return known
    hs = [abs(_homothety(v)) for v in known] or [0]
    B = 2 * max(hs) + 4
    axis = [v for a in range(-B, B + 1) if a for v in ((a, 0), (0, a))]
    sols = set()
    for extra in itertools.combinations_with_replacement(axis, missing):
        full = known + list(extra)
        if pairs_to_two(full) and sign_balanced(full):
            sols.add(tuple(sorted(extra)))
    if len(sols) != 1:
        raise CompassError(f"{point_id}: {len(sols)} completions", sorted(sols))
    return known + list(next(iter(sols)))


def weight_hull_vertices(tables: Mapping[str, Mapping[Vec, int]]) -> list[Vec]:
    """Corners of conv(union of supports) + positive quadrant.

    A boundary point counts when it is a strict corner of the union or of
    one component polygon; the second clause keeps fixed points that sit on
    a straight stretch of the union's boundary.
    """
    supports = {k: [p for p, v in t.items() if v > 0] for k, t in tables.items()}
    union = sorted({p for s in supports.values() for p in s})
    if not union:
        return []
    if len(union) == 1:
        return union
    chain = _lower_left_chain(union)
    corners = set(chain)
    for s in supports.values():
        corners.update(convex_hull(s) if len(set(s)) > 2 else s)
    segs = list(zip(chain, chain[1:])) or [(chain[0], chain[0])]
    boundary = [p for p in union if any(_on_segment(p, a, b) for a, b in segs)]
    return sorted(p for p in boundary if p in corners)


def _lower_left_chain(points) -> list[Vec]:
    """Strict corners of conv(points) + R_{>=0}^2 from top-left to bottom-right."""
    pts = sorted(set(points))
    start = min(pts, key=lambda p: (p[0], p[1]))
    end = min(pts, key=lambda p: (p[1], p[0]))
    cand = [p for p in pts if start[0] <= p[0] <= end[0]]
    chain = []
    for p in cand:
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) <= 0:
            chain.pop()
        chain.append(p)
    out = [chain[0]]
    for p in chain[1:]:
        if p[1] < out[-1][1]:
            out.append(p)
    return out


# ------------------------------------------------------------- series

@dataclass
class LaurentSeries:
    ell: Vec
    bound: int
    terms: dict[Vec, int] = field(default_factory=dict)

    def coefficient(self, e: Vec) -> int:
        return self.terms.get(tuple(e), 0)

    def off_quadrant(self) -> dict[Vec, int]:
        return {e: c for e, c in self.terms.items() if c and (e[0] < 0 or e[1] < 0)}


def admissible(ell: Vec, data: Sequence[FixedPointDatum]) -> bool:
    return ell[0] > 0 and ell[1] > 0 and all(ell[0] * v[0] + ell[1] * v[1] != 0
                                             for d in data for v in d.compass)


def choose_functional(data: Sequence[FixedPointDatum], preferred: Vec = (3, 2), search: int = 12) -> Vec:
    if admissible(preferred, data):
        return preferred
    for s in range(2, 2 * search):
        for a in range(1, s):
            ell = (a, s - a)
            if gcd(*ell) == 1 and admissible(ell, data):
                return ell
    raise SeriesError("no admissible functional found")


def _normalized_term(mu: Vec, compass: Sequence[Vec], ell: Vec):
    """Sign, shifted exponent and compass with ell > 0 on every entry."""
    sign, shift, nus = 1, list(mu), []
    for v in compass:
        lv = ell[0] * v[0] + ell[1] * v[1]
        if lv == 0:
            raise SeriesError(f"functional {ell} vanishes on compass vector {v}")
        if lv < 0:
            sign = -sign
            shift[0] -= v[0]
            shift[1] -= v[1]
            nus.append((-v[0], -v[1]))
        else:
            nus.append(tuple(v))
    return sign, tuple(shift), nus


def lrr_character_series(L: Sequence[int], data: Sequence[FixedPointDatum], ell: Vec = (3, 2),
                         D: int = 130) -> LaurentSeries:
    for d in data:
        for v in d.compass:
            if ell[0] * v[0] + ell[1] * v[1] == 0:
                raise SeriesError(f"functional {ell} vanishes on compass vector {v} of {d.id}")
    terms = [_normalized_term(d.mu(L), d.compass, ell) for d in data]
    # bounding box of every reachable exponent with ell <= D
    xs, ys = [], []
    for _, mu, nus in terms:
        lm = ell[0] * mu[0] + ell[1] * mu[1]
        xs.append(mu[0])
        ys.append(mu[1])
        room = max(D - lm, 0)
        for v in nus:
            k = room // (ell[0] * v[0] + ell[1] * v[1]) + 1
            xs.append(mu[0] + k * v[0])
            ys.append(mu[1] + k * v[1])
    # reachable exponents lie in the simplex spanned by these corners
    ox, oy = min(xs), min(ys)
    n, m = max(xs) - ox + 1, max(ys) - oy + 1
    I, J = np.meshgrid(np.arange(n) + ox, np.arange(m) + oy, indexing="ij")
    ellgrid = np.ascontiguousarray(ell[0] * I + ell[1] * J, dtype=np.int64)
    total = np.zeros((n, m), dtype=np.int64)
    for sign, mu, nus in terms:
        if ell[0] * mu[0] + ell[1] * mu[1] > D:
            continue
        a = np.zeros((n, m), dtype=np.int64)
        a[mu[0] - ox, mu[1] - oy] = sign
        for v in nus:
            kernels.geometric_divide(a, int(v[0]), int(v[1]), ellgrid, int(D))
        total += a
    nz = np.argwhere(total)
    return LaurentSeries(tuple(ell), D, {(int(i) + ox, int(j) + oy): int(total[i, j]) for i, j in nz})


def hilbert_weight_table(L: Sequence[int], data: Sequence[FixedPointDatum], ell: Vec = (3, 2),
                         D: int = 130) -> dict[Vec, int]:
    s = lrr_character_series(L, data, ell, D)
    off = s.off_quadrant()
    if off:
        raise SeriesError(f"surviving off-quadrant exponents: {sorted(off)[:5]}")
    neg = {e: c for e, c in s.terms.items() if c < 0}
    if neg:
        raise SeriesError(f"negative coefficients: {sorted(neg.items())[:5]}")
    return dict(s.terms)


def restrict(table: Mapping[Vec, int], ell: Vec, D: int) -> dict[Vec, int]:
    return {e: c for e, c in table.items() if ell[0] * e[0] + ell[1] * e[1] <= D}


def double_generating_series(pmax: int, qmax: int, D: int, data: Sequence[FixedPointDatum],
                             ell: Vec = (3, 2)) -> dict[tuple[int, int], dict[Vec, int]]:
    return {(p, q): hilbert_weight_table((p, q), data, ell, D)
            for p in range(pmax + 1) for q in range(qmax + 1)}


# ------------------------------------------------------------------ walls

def movable_walls(data: Sequence[FixedPointDatum]) -> list[Vec]:
    """Rays of cone(L1, L1+L2) on which two fixed points share their weight."""
    rays = set()
    for a, b in itertools.combinations(data, 2):
        d1 = (a.mu_L1[0] - b.mu_L1[0], a.mu_L1[1] - b.mu_L1[1])
        d2 = (a.mu_L2[0] - b.mu_L2[0], a.mu_L2[1] - b.mu_L2[1])
        # (p, q) in the kernel of the matrix with columns d1, d2
        if d1[0] * d2[1] - d1[1] * d2[0] != 0 or (d1 == (0, 0) and d2 == (0, 0)):
            continue
        row = (d1[0], d2[0]) if (d1[0], d2[0]) != (0, 0) else (d1[1], d2[1])
        v = (row[1], -row[0])
        g = gcd(*v)
        v = (v[0] // g, v[1] // g)
        for w in (v, (-v[0], -v[1])):
            if w[0] >= w[1] >= 0 and w != (0, 0):
                rays.add(w)
    return sorted(rays)


# -------------------------------------------------------------- rendering

def render_grid(table: Mapping[Vec, int], amax: int | None = None, bmax: int | None = None) -> str:
    """Aligned text grid, b decreasing downwards, '.' for zero."""
    if not table:
        return ""
    amax = max(a for a, _ in table) if amax is None else amax
    bmax = max(b for _, b in table) if bmax is None else bmax
    width = max(len(str(v)) for v in table.values())
    width = max(width, len(str(amax)))
    lines = []
    for b in range(bmax, -1, -1):
        cells = [str(table.get((a, b), 0) or ".").rjust(width) for a in range(amax + 1)]
        lines.append(f"{b:>3} | " + " ".join(cells))
    lines.append("    + " + " ".join("-" * width for _ in range(amax + 1)))
    lines.append("      " + " ".join(str(a).rjust(width) for a in range(amax + 1)))
    return "\n".join(lines)


def table_to_csv(table: Mapping[Vec, int]) -> str:
    rows = ["a,b,dim"] + [f"{a},{b},{v}" for (a, b), v in sorted(table.items()) if v]
    return "\n".join(rows) + "\n"
