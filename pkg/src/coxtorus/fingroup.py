"""Finite matrix groups over Q(zeta_12)."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .exactmath import ONE, ZERO, CycNum, smith_normal_form

Matrix = tuple  # tuple of row tuples of CycNum


class GroupError(ValueError):
    pass


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(x if isinstance(x, CycNum) else CycNum.from_rational(x) for x in r) for r in rows)


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, m, k = len(A), len(B[0]), len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ZERO
            for t in range(k):
                a = A[i][t]
                if not a.is_zero():
                    b = B[t][j]
                    if not b.is_zero():
                        acc = acc + a * b
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def _rref(A: Sequence[Sequence[CycNum]]):
    rows = [list(r) for r in A]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def nullspace(A: Matrix) -> tuple[tuple[CycNum, ...], ...]:
    """Canonical basis of ker(A): the reduced row echelon form of the kernel."""
    n = len(A[0])
    R, piv = _rref(A)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for row, p in zip(R, piv):
            v[p] = -row[f]
        basis.append(v)
    if not basis:
        return ()
    E, _ = _rref(basis)
    return tuple(tuple(r) for r in E)


@dataclass
class MatGroup:
    generators: list
    elements: list = field(default_factory=list)
    index: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Matrix:
        return mat_identity(len(self.generators[0]) if self.generators else 1)

    def mul(self, a: int, b: int) -> int:
        return self.index[mat_mul(self.elements[a], self.elements[b])]

    def inverse(self, a: int) -> int:
        e = self.index[self.identity]
        for b in range(self.order):
            if self.mul(a, b) == e:
                return b
        raise GroupError("element without inverse")

    def element_order(self, a: int) -> int:
        e = self.index[self.identity]
        k, x = 1, a
        while x != e:
            x = self.mul(x, a)
            k += 1
        return k


def enumerate_group(gens: Sequence, cap: int = 10_000) -> MatGroup:
    gens = [as_matrix(g) for g in gens]
    if not gens:
        raise GroupError("no generators")
    n = len(gens[0])
    e = mat_identity(n)
    elements = [e]
    index = {e: 0}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mat_mul(x, g)
            if y not in index:
                if len(elements) >= cap:
                    raise GroupError(f"group enumeration exceeded cap {cap}")
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)
    return MatGroup(gens, elements, index)


def conjugacy_classes(G: MatGroup) -> list[list[int]]:
    seen = set()
    classes = []
    inv = [G.inverse(a) for a in range(G.order)]
    for a in range(G.order):
        if a in seen:
            continue
        cls = sorted({G.mul(G.mul(inv[g], a), g) for g in range(G.order)})
        seen.update(cls)
        classes.append(cls)
    return classes


def generated_subgroup(G: MatGroup, elems) -> list[int]:
    e = G.index[G.identity]
    sub = {e}
    frontier = [e]
    elems = list(elems)
    while frontier:
        x = frontier.pop()
        for g in elems:
            y = G.mul(x, g)
            if y not in sub:
                sub.add(y)
                frontier.append(y)
    return sorted(sub)


def commutator_and_abelianization(G: MatGroup) -> tuple[list[int], list[int]]:
    """[G,G] as element indices and the invariant factors of G/[G,G].

    The abelianization is computed from a presentation: a relation for every
    product x*g = y in the Cayley graph on the generators, written in the
    free abelian group on the generators, together with [G,G]-paths.
    """
    inv = [G.inverse(a) for a in range(G.order)]
    comms = {G.mul(G.mul(inv[a], inv[b]), G.mul(a, b)) for a in range(G.order) for b in range(G.order)}
    K = generated_subgroup(G, comms)
    # spanning tree of the Cayley graph gives each element a word (exponent vector)
    ngen = len(G.generators)
    gidx = [G.index[g] for g in G.generators]
    e = G.index[G.identity]
    word = {e: [0] * ngen}
    queue = deque([e])
    relations = []
    while queue:
        x = queue.popleft()
        for k, g in enumerate(gidx):
            y = G.mul(x, g)
            w = list(word[x])
            w[k] += 1
            if y in word:
                rel = [a - b for a, b in zip(w, word[y])]
                if any(rel):
                    relations.append(rel)
            else:
                word[y] = w
                queue.append(y)
    if not relations:
        return K, [0] * ngen
    _, D, _ = smith_normal_form(relations)
    diag = [D[i][i] if i < len(D) else 0 for i in range(ngen)]
    factors = [abs(d) for d in diag if abs(d) != 1]
    return K, factors


def is_quaternion(G: MatGroup, sub: Sequence[int]) -> bool:
    """Order 8, a single involution, and every subgroup normal."""
    if len(sub) != 8:
        return False
    inv_count = sum(1 for a in sub if G.element_order(a) == 2)
    if inv_count != 1:
        return False
    subset = set(sub)
    for a in sub:
        H = set(generated_subgroup(G, [a]))
        for g in sub:
            gi = G.inverse(g)
            if any(G.mul(G.mul(gi, h), g) not in H for h in H):
                return False
    return subset == set(generated_subgroup(G, sub))


@dataclass
class Reflection:
    element: int
    plane: tuple  # canonical basis of the fixed space


def reflections_and_planes(G: MatGroup) -> tuple[list[Reflection], list[tuple], list[list[int]]]:
    """Symplectic reflections, the distinct fixed planes and, for each group
    element, the permutation it induces on the plane list."""
    e = G.index[G.identity]
    refl = []
    planes: list[tuple] = []
    for a, g in enumerate(G.elements):
        if a == e:
            continue
        ker = nullspace(mat_sub(g, G.identity))
        if len(ker) == 2:
            refl.append(Reflection(a, ker))
            if ker not in planes:
                planes.append(ker)
    perms = []
    for g in G.elements:
        perm = []
        for P in planes:
            # image of the plane spanned by rows v: v -> g v
            img = [tuple(sum((g[i][j] * v[j] for j in range(len(v))), ZERO) for i in range(len(v))) for v in P]
            E, _ = _rref(img)
            key = tuple(tuple(r) for r in E)
            if key not in planes:
                raise GroupError("plane set not preserved by the group")
            perm.append(planes.index(key))
        perms.append(perm)
    return refl, planes, perms


def orbit_of_plane(perms: list[list[int]], k: int = 0) -> set[int]:
    return {p[k] for p in perms}


def block_invariant(G: MatGroup) -> bool:
    """span(x1,y1) and span(x2,y2) are preserved by every element."""
    for g in G.elements:
        for i in range(4):
            for j in range(4):
                if (i < 2) != (j < 2) and not g[i][j].is_zero():
                    return False
    return True


def eigen_product_on_moving_plane(G: MatGroup, r: Reflection) -> CycNum:
    """det(g) restricted to the complement of the fixed plane (equals det g)."""
    g = G.elements[r.element]
    # the fixed plane contributes eigenvalue 1 twice, so the product of the
    # other two eigenvalues is the determinant
    return _det(g)


def _det(M: Matrix) -> CycNum:
    n = len(M)
    rows = [list(r) for r in M]
    det = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if not rows[i][c].is_zero()), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = rows[c][c].inverse()
        for i in range(c + 1, n):
            if not rows[i][c].is_zero():
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


def group_summary(G: MatGroup) -> dict:
    classes = conjugacy_classes(G)
    K, ab = commutator_and_abelianization(G)
    refl, planes, perms = reflections_and_planes(G)
    refl_set = {r.element for r in refl}
    refl_classes = [c for c in classes if set(c) <= refl_set]
    return {
        "order": G.order,
        "classes": len(classes),
        "class_sizes": sorted(len(c) for c in classes),
        "reflection_classes": len(refl_classes),
        "commutator_order": len(K),
        "commutator_quaternion": is_quaternion(G, K),
        "abelianization": ab,
        "fixed_planes": len(planes),
        "planes_transitive": len(orbit_of_plane(perms)) == len(planes),
        "block_invariant": block_invariant(G),
        "reflection_determinants_one": all(eigen_product_on_moving_plane(G, r) == ONE for r in refl),
    }
