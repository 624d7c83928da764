import itertools

from hypothesis import assume, given, settings, strategies as st

from coxtorus.latgeom import (AffineSemigroup, Cone, dot, dual_cone, face_duality, faces, hilbert_basis,
                              semigroup_member)


vec2 = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).filter(any)
vec3 = st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)).filter(any)


def pointed(gens, dim):
    c = Cone(gens, dim)
    return c if c.is_pointed() else None


@settings(max_examples=120, deadline=None)
@given(st.lists(vec3, min_size=1, max_size=4))
def test_double_dual(gens):
    c = Cone(gens, 3)
    assert dual_cone(dual_cone(c)) == c
    for g in c.generators:
        assert all(dot(a, g) >= 0 for a in dual_cone(c).generators)


@settings(max_examples=120, deadline=None)
@given(st.lists(vec3, min_size=2, max_size=4))
def test_face_duality_dimensions(gens):
    c = pointed(gens, 3)
    assume(c is not None and c.is_full_dimensional())
    for tau in faces(c):
        assert face_duality(c, tau).rank == 3 - tau.rank


def _lattice_points(c, box):
    rng = range(-box, box + 1)
    return [p for p in itertools.product(rng, repeat=c.dim) if any(p) and c.contains(p)]


@settings(max_examples=120, deadline=None)
@given(st.lists(vec2, min_size=1, max_size=3))
def test_hilbert_basis_minimal_and_generating(gens):
    c = pointed(gens, 2)
    assume(c is not None)
    hb = hilbert_basis(c)
    hbs = set(hb)
    box = max(max(abs(x) for x in h) for h in hb) + 2
    pts = _lattice_points(c, box)
    ptset = set(pts)
    # minimality: no element is a sum of two nonzero lattice points of the cone
    for h in hb:
        assert not any(tuple(a - b for a, b in zip(h, p)) in ptset for p in pts if p != h)
    # every irreducible lattice point in the box is in the basis
    for p in pts:
        irreducible = not any(tuple(a - b for a, b in zip(p, q)) in ptset for q in pts if q != p)
        if irreducible:
            assert p in hbs
    S = AffineSemigroup(hb)
    assert all(semigroup_member(S, p) for p in pts[:40])


@settings(max_examples=100, deadline=None)
@given(st.lists(vec3, min_size=1, max_size=3))
def test_hilbert_basis_three_dim_irreducible(gens):
    c = pointed(gens, 3)
    assume(c is not None)
    hb = hilbert_basis(c)
    for h in hb:
        others = [g for g in hb if g != h]
        if others:
            assert not semigroup_member(AffineSemigroup(others, 3), h)
