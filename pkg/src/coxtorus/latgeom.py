"""Rational polyhedral cones in lattices of rank at most 4, affine
semigroups, two-dimensional fans and the orbit-face dictionary."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactmath import kernel_basis, smith_normal_form

Vec = tuple


class LatticeError(ValueError):
    pass


class InconclusiveError(RuntimeError):
    pass


def primitive(v: Sequence[int]) -> Vec:
    g = math.gcd(*v)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _rank(vectors: Sequence[Sequence]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    n = len(rows[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def _independent_subset(vectors: Sequence[Vec]) -> list[Vec]:
    out: list[Vec] = []
    for v in vectors:
        if _rank(out + [v]) > len(out):
            out.append(v)
    return out


def _solve_nullvector(rows: Sequence[Sequence[int]], n: int) -> Vec | None:
    """A primitive integer generator of a one-dimensional rational kernel."""
    K = kernel_basis([list(r) for r in rows]) if rows else [[int(i == j) for j in range(n)] for i in range(n)]
    if len(K) != 1:
        return None
    return primitive(K[0])


class Cone:
    """cone(generators) in Z^dim; facets and equations are computed once."""

    def __init__(self, generators: Iterable[Sequence[int]], dim: int | None = None):
        gens: list[Vec] = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if dim is None:
                dim = len(g)
            if any(g):
                p = primitive(g)
                if p not in gens:
                    gens.append(p)
        if dim is None:
            raise LatticeError("ambient dimension unknown for an empty cone")
        self.dim = dim
        self.generators: tuple[Vec, ...] = tuple(gens)
        self.rank = _rank(gens)
        self.equations: tuple[Vec, ...] = tuple(
            primitive(e) for e in (kernel_basis([list(g) for g in gens]) if gens else
                                   [[int(i == j) for j in range(dim)] for i in range(dim)]))
        self.facets: tuple[Vec, ...] = self._compute_facets()

    def _compute_facets(self) -> tuple[Vec, ...]:
        k = self.rank
        if k == 0:
            return ()
        basis = _independent_subset(list(self.generators))
        normals: list[Vec] = []
        for sub in itertools.combinations(self.generators, k - 1):
            if _rank(list(sub)) != k - 1:
                continue
            # a in span(basis) with a.g = 0 for g in sub: solve for coefficients
            rows = [[dot(b, g) for b in basis] for g in sub]
            lam = _solve_nullvector(rows, k)
            if lam is None:
                continue
            a = [sum(l * b[i] for l, b in zip(lam, basis)) for i in range(self.dim)]
            a = primitive(a)
            vals = [dot(a, g) for g in self.generators]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                a = tuple(-x for x in a)
            else:
                continue
            if a not in normals:
                normals.append(a)
        return tuple(normals)

    # predicates
    def contains(self, x: Sequence) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(a, x) >= 0 for a in self.facets)

    def relative_interior_contains(self, x: Sequence) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(a, x) > 0 for a in self.facets)

    def is_pointed(self) -> bool:
        return _rank(list(self.facets)) == self.rank

    def is_full_dimensional(self) -> bool:
        return self.rank == self.dim

    def extreme_rays(self) -> tuple[Vec, ...]:
        if not self.is_pointed():
            raise LatticeError("extreme rays of a non-pointed cone")
        if self.rank == 1:
            return self.generators[:1]
        out = []
        for g in self.generators:
            tight = [a for a in self.facets if dot(a, g) == 0]
            if _rank(tight) >= self.rank - 1:
                out.append(g)
        return tuple(out)

    def key(self) -> frozenset:
        return frozenset(self.extreme_rays()) if self.is_pointed() else frozenset(self.generators)

    def __eq__(self, other):
        if not isinstance(other, Cone) or other.dim != self.dim:
            return False
        return all(other.contains(g) for g in self.generators) and all(self.contains(g) for g in other.generators)

    def __hash__(self):
        return hash((self.dim, self.key()))

    def __le__(self, other: "Cone") -> bool:
        return all(other.contains(g) for g in self.generators)

    def __repr__(self):
        return f"Cone({list(self.generators)})"

    def to_text(self) -> str:
        return "\n".join(" ".join(str(x) for x in r) for r in self.generators)


def cone_from_text(text: str) -> Cone:
    rows = [tuple(int(x) for x in line.split()) for line in text.splitlines()
            if line.strip() and not line.startswith("#")]
    return Cone(rows)


def dual_cone(c: Cone) -> Cone:
    gens = list(c.facets)
    for e in c.equations:
        gens.append(e)
        gens.append(tuple(-x for x in e))
    return Cone(gens, c.dim)


def faces(c: Cone) -> list[Cone]:
    """All faces, from {0} to c, ordered by dimension then generators."""
    seen: dict[frozenset, Cone] = {}
    facets = list(c.facets)
    for r in range(len(facets) + 1):
        for T in itertools.combinations(facets, r):
            gens = [g for g in c.generators if all(dot(a, g) == 0 for a in T)]
            f = Cone(gens, c.dim)
            k = frozenset(f.generators)
            if k not in seen:
                seen[k] = f
    return sorted(seen.values(), key=lambda f: (f.rank, sorted(f.generators)))


def face_duality(sigma: Cone, tau: Cone) -> Cone:
    """sigma^dual intersected with tau^perp."""
    if not tau <= sigma:
        raise LatticeError("tau is not contained in sigma")
    d = dual_cone(sigma)
    return Cone([g for g in d.generators if all(dot(g, t) == 0 for t in tau.generators)], sigma.dim)


def cone_from_constraints(ineqs: Sequence[Sequence[int]], eqs: Sequence[Sequence[int]], dim: int) -> Cone:
    """The pointed cone {x : A x >= 0, E x = 0} by its extreme rays."""
    if eqs:
        basis = [tuple(r) for r in kernel_basis([list(e) for e in eqs])]
    else:
        basis = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    k = len(basis)
    if k == 0:
        return Cone([], dim)
    A = [[dot(a, b) for b in basis] for a in ineqs]
    rays: list[Vec] = []
    if k == 1:
        cand = [(1,), (-1,)]
    else:
        cand = []
        for sub in itertools.combinations(A, k - 1):
            if _rank(list(sub)) != k - 1:
                continue
            r = _solve_nullvector([list(x) for x in sub], k)
            if r is not None:
                cand.extend([r, tuple(-x for x in r)])
    for r in cand:
        if all(dot(a, r) >= 0 for a in A):
            x = primitive([sum(r[j] * basis[j][i] for j in range(k)) for i in range(dim)])
            if any(x) and x not in rays:
                rays.append(x)
    c = Cone(rays, dim)
    if not c.is_pointed():
        raise LatticeError("constraint cone is not pointed")
    return c


# ------------------------------------------------------------ Hilbert bases

def _lattice_basis_of_span(c: Cone) -> list[Vec]:
    """A basis of the saturated lattice Z^d intersected with span(c)."""
    if c.rank == c.dim:
        return [tuple(int(i == j) for j in range(c.dim)) for i in range(c.dim)]
    if c.rank == 0:
        return []
    return [tuple(r) for r in kernel_basis([list(e) for e in c.equations])]


def _coords(basis: Sequence[Vec], x: Sequence[int]) -> Vec:
    from .exactmath import solve_rational
    A = [[b[i] for b in basis] for i in range(len(x))]
    sol = solve_rational(A, list(x))
    if sol is None or any(s.denominator != 1 for s in sol):
        raise LatticeError(f"{x} is not in the lattice spanned by {basis}")
    return tuple(int(s) for s in sol)


def _triangulate(rays: Sequence[Vec], dim: int) -> list[list[Vec]]:
    """Simplicial subdivision of a pointed cone using only its rays."""
    c = Cone(rays, dim)
    ext = list(c.extreme_rays())
    k = c.rank
    if len(ext) == k:
        return [ext]
    r0 = ext[0]
    out = []
    for a in c.facets:
        if dot(a, r0) == 0:
            continue
        sub = [r for r in ext if dot(a, r) == 0]
        for simplex in _triangulate(sub, dim):
            out.append([r0] + simplex)
    return out


def _parallelepiped_points(simplex: Sequence[Vec]) -> list[Vec]:
    k = len(simplex)
    R = [[simplex[j][i] for j in range(k)] for i in range(k)]  # columns are rays
    U, D, _ = smith_normal_form(R)
    diag = [D[i][i] for i in range(k)]
    from .exactmath import inverse_rational
    Uinv = inverse_rational(U)
    Rinv = inverse_rational(R)
    pts = set()
    for c in itertools.product(*[range(d) for d in diag]):
        y = [sum(Uinv[i][j] * c[j] for j in range(k)) for i in range(k)]
        lam = [sum(Rinv[i][j] * y[j] for j in range(k)) for i in range(k)]
        lam = [l - math.floor(l) for l in lam]
        x = tuple(int(sum(R[i][j] * lam[j] for j in range(k))) for i in range(k))
        pts.add(x)
    return sorted(pts)


def hilbert_basis(c: Cone) -> list[Vec]:
    if not c.is_pointed():
        raise LatticeError("Hilbert basis requested for a non-pointed cone")
    if c.rank == 0:
        return []
    basis = _lattice_basis_of_span(c)
    rays = [_coords(basis, r) for r in c.extreme_rays()]
    k = len(basis)
    cc = Cone(rays, k)
    cand: set[Vec] = set(rays)
    for simplex in _triangulate(rays, k):
        cand.update(p for p in _parallelepiped_points(simplex) if any(p))
    cand_list = sorted(cand)
    hb = []
    for h in cand_list:
        reducible = False
        for g in cand_list:
            if g == h:
                continue
            diff = tuple(a - b for a, b in zip(h, g))
            if any(diff) and cc.contains(diff):
                reducible = True
                break
        if not reducible:
            hb.append(h)
    out = [tuple(sum(h[j] * basis[j][i] for j in range(k)) for i in range(c.dim)) for h in hb]
    return sorted(out)


# ------------------------------------------------------------ semigroups

class AffineSemigroup:
    def __init__(self, generators: Iterable[Sequence[int]], dim: int | None = None):
        gens = [tuple(int(x) for x in g) for g in generators]
        if dim is None:
            dim = len(gens[0])
        self.dim = dim
        self.generators = tuple(g for g in dict.fromkeys(gens) if any(g))

    def cone(self) -> Cone:
        return Cone(self.generators, self.dim)

    def __repr__(self):
        return f"AffineSemigroup({list(self.generators)})"


def _positive_functional(c: Cone) -> Vec:
    f = [0] * c.dim
    for a in c.facets:
        f = [x + y for x, y in zip(f, a)]
    return tuple(f)


def semigroup_member(S: AffineSemigroup, m: Sequence[int], budget: int = 2_000_000) -> bool:
    m = tuple(m)
    if not any(m):
        return True
    c = S.cone()
    if not c.contains(m):
        return False
    if not c.is_pointed():
        raise LatticeError("membership test needs a pointed cone")
    f = _positive_functional(c)
    gens = sorted(S.generators, key=lambda g: -dot(f, g))
    if any(dot(f, g) <= 0 for g in gens):
        raise LatticeError("functional not positive on generators")
    seen: set[Vec] = set()
    stack = [m]
    count = 0
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        count += 1
        if count > budget:
            raise InconclusiveError(f"semigroup membership search exceeded {budget} nodes")
        for g in gens:
            y = tuple(a - b for a, b in zip(x, g))
            if not any(y):
                return True
            if y not in seen and dot(f, y) > 0 and c.contains(y):
                stack.append(y)
    return False


def _quotient_map(sub_basis: Sequence[Vec], dim: int):
    """Projection Z^dim -> Z^dim / L for a saturated sublattice L."""
    if not sub_basis:
        return lambda x: tuple(x)
    U, D, V = smith_normal_form([list(r) for r in sub_basis])
    r = len(sub_basis)
    if any(D[i][i] != 1 for i in range(r)):
        raise LatticeError("sublattice is not saturated")

    def proj(x):
        y = [sum(x[i] * V[i][j] for i in range(dim)) for j in range(dim)]
        return tuple(y[r:])
    return proj


def orbit_is_normal(S: AffineSemigroup, F: Cone) -> bool:
    """Decide M.<F> + S = M.<F> + M.cone(S) for a face F of cone(S).

    Projecting along the span of F turns the question into membership of
    each Hilbert basis element in the image semigroup, which is pointed.
    """
    c = S.cone()
    if not F <= c:
        raise LatticeError("F is not contained in cone(S)")
    hb = hilbert_basis(c)
    span_basis = _lattice_basis_of_span(F)
    proj = _quotient_map(span_basis, c.dim)
    image = AffineSemigroup([proj(g) for g in S.generators], c.dim - len(span_basis)) \
        if c.dim > len(span_basis) else None
    for h in hb:
        ph = proj(h)
        if not any(ph):
            continue
        if image is None or not image.generators or not semigroup_member(image, ph):
            return False
    return True


def orbit_face_of_vanishing(dual_gens: Mapping[str, Sequence[int]], vanishing: Iterable[str],
                            sigma: Cone) -> Cone:
    target = set(vanishing)
    unknown = target - set(dual_gens)
    if unknown:
        raise LatticeError(f"unknown labels {sorted(unknown)}")
    for tau in faces(sigma):
        vanish = {lab for lab, v in dual_gens.items() if any(dot(v, r) != 0 for r in tau.generators)}
        if vanish == target:
            return tau
    raise LatticeError(f"no face of sigma has vanishing set {sorted(target)}")


def vanishing_labels(dual_gens: Mapping[str, Sequence[int]], tau: Cone) -> set[str]:
    return {lab for lab, v in dual_gens.items() if any(dot(v, r) != 0 for r in tau.generators)}


# ------------------------------------------------------------------ fans

def _det2(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _half(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def angle_key(v):
    """Sort key for counterclockwise order starting at the positive x-axis."""
    class K:
        __slots__ = ("v",)

        def __init__(self, v):
            self.v = v

        def __lt__(self, other):
            h1, h2 = _half(self.v), _half(other.v)
            if h1 != h2:
                return h1 < h2
            return _det2(self.v, other.v) > 0
    return K(v)


class Fan:
    """A fan in Z^2 given by its maximal cones."""

    def __init__(self, cones: Iterable[Cone | Sequence[Sequence[int]]]):
        cs = []
        for c in cones:
            if not isinstance(c, Cone):
                c = Cone(c, 2)
            if c.dim != 2:
                raise LatticeError("only fans in Z^2 are supported")
            if not c.is_pointed():
                raise LatticeError("fan cones must be pointed")
            if c.key() not in [d.key() for d in cs]:
                cs.append(c)
        # keep maximal cones only
        self.cones = tuple(c for c in cs if not any(c is not d and c <= d and not d <= c for d in cs))
        for a, b in itertools.combinations(self.cones, 2):
            if not _proper_pair(a, b):
                raise LatticeError(f"cones {a} and {b} overlap")

    def rays(self) -> set[Vec]:
        return {r for c in self.cones for r in c.extreme_rays()}

    def cone_keys(self) -> set[frozenset]:
        return {c.key() for c in self.cones}

    def faces(self) -> set[frozenset]:
        out = set()
        for c in self.cones:
            ext = c.extreme_rays()
            for r in range(len(ext) + 1):
                for sub in itertools.combinations(ext, r):
                    out.add(frozenset(sub))
        return out

    def is_complete(self) -> bool:
        two = [c for c in self.cones if c.rank == 2]
        if not two:
            return False
        arcs = []
        for c in two:
            r1, r2 = c.extreme_rays()
            if _det2(r1, r2) < 0:
                r1, r2 = r2, r1
            arcs.append((r1, r2))
        starts = {a for a, _ in arcs}
        ends = {b for _, b in arcs}
        return starts == ends and len(starts) == len(arcs)

    def __repr__(self):
        return f"Fan({[sorted(c.extreme_rays()) for c in self.cones]})"


def _strictly_inside(u, c: Cone) -> bool:
    return c.rank == 2 and c.relative_interior_contains(u)


def _proper_pair(a: Cone, b: Cone) -> bool:
    if a.key() == b.key():
        return True
    if a.rank < 2 and b.rank < 2:
        return True
    for r in a.extreme_rays():
        if _strictly_inside(r, b):
            return False
    for r in b.extreme_rays():
        if _strictly_inside(r, a):
            return False
    # in the plane, overlapping distinct cones put a ray strictly inside the other
    return True


def complete_fan_from_rays(rays: Iterable[Sequence[int]]) -> Fan:
    rs = sorted({primitive(tuple(r)) for r in rays}, key=angle_key)
    cones = []
    for i, r in enumerate(rs):
        s = rs[(i + 1) % len(rs)]
        if _det2(r, s) <= 0:
            raise LatticeError("rays do not form a complete fan")
        cones.append(Cone([r, s], 2))
    return Fan(cones)


def apply_matrix(M: Sequence[Sequence[int]], v: Sequence[int]) -> Vec:
    return tuple(sum(M[i][j] * v[j] for j in range(len(v))) for i in range(len(M)))


def _map_fan_keys(M, fan: Fan) -> set[frozenset]:
    return {frozenset(primitive(apply_matrix(M, r)) for r in c.extreme_rays()) for c in fan.cones}


def fan_isomorphism(F1: Fan, F2: Fan):
    """A matrix M in GL_2(Z) mapping F1 onto F2, or None."""
    ident = ((1, 0), (0, 1))
    target = F2.cone_keys()
    if _map_fan_keys(ident, F1) == target:
        return ident
    two1 = [c for c in F1.cones if c.rank == 2]
    two2 = [c for c in F2.cones if c.rank == 2]
    if not two1:
        return None
    r1, r2 = two1[0].extreme_rays()
    det = _det2(r1, r2)
    for c in two2:
        s1, s2 = c.extreme_rays()
        for a, b in ((s1, s2), (s2, s1)):
            # M [r1 r2] = [a b]
            inv = [[Fraction(r2[1], det), Fraction(-r2[0], det)], [Fraction(-r1[1], det), Fraction(r1[0], det)]]
            S = [[a[0], b[0]], [a[1], b[1]]]
            M = [[sum(S[i][k] * inv[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
            if any(x.denominator != 1 for row in M for x in row):
                continue
            M = tuple(tuple(int(x) for x in row) for row in M)
            if abs(M[0][0] * M[1][1] - M[0][1] * M[1][0]) != 1:
                continue
            if _map_fan_keys(M, F1) == target:
                return M
    return None
