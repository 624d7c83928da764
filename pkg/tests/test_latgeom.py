import pytest

from coxtorus.latgeom import (AffineSemigroup, Cone, Fan, LatticeError, complete_fan_from_rays, faces,
                              fan_isomorphism, hilbert_basis, orbit_is_normal)


def test_standard_cones():
    c = Cone([(1, 0), (0, 1)])
    assert sorted(c.facets) == [(0, 1), (1, 0)]
    assert hilbert_basis(Cone([(1, 0), (1, 2)])) == [(1, 0), (1, 1), (1, 2)]
    assert len(faces(Cone([(1, 0, 0), (0, 1, 0), (0, 0, 1)]))) == 8


def test_h6_fan_isomorphism():
    ref = complete_fan_from_rays([(1, 0), (0, 1), (-1, 6), (0, -1)])
    other = complete_fan_from_rays([(0, 1), (0, -1), (-1, -3), (1, -3)])
    M = fan_isomorphism(other, ref)
    assert M is not None
    assert fan_isomorphism(complete_fan_from_rays([(1, 0), (0, 1), (-1, 5), (0, -1)]), ref) is None


def test_overlapping_cones_rejected():
    with pytest.raises(LatticeError):
        Fan([[(1, 0), (0, 1)], [(1, 1), (-1, 1)]])


def test_non_normal_semigroup():
    # the cusp semigroup <2, 3>: the vertex orbit is not normal, the big orbit is
    S = AffineSemigroup([(2,), (3,)])
    c = S.cone()
    assert not orbit_is_normal(S, Cone([], 1))
    assert orbit_is_normal(S, c)
