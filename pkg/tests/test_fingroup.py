import pytest

from coxtorus.exactmath import ONE, ZERO, ZETA, CycNum
from coxtorus.fingroup import (GroupError, commutator_and_abelianization, conjugacy_classes, enumerate_group,
                               group_summary, is_quaternion, nullspace, reflections_and_planes, as_matrix)


def diag(*xs):
    return [[xs[i] if i == j else ZERO for j in range(len(xs))] for i in range(len(xs))]


def perm(p):
    n = len(p)
    return [[ONE if p[i] == j else ZERO for j in range(n)] for i in range(n)]


def test_seed_group(group):
    s = group_summary(group)
    assert s["order"] == 24
    assert s["class_sizes"] == [1, 1, 4, 4, 4, 4, 6]
    assert s["commutator_quaternion"] and s["abelianization"] == [3]
    assert s["fixed_planes"] == 4 and s["planes_transitive"]
    assert s["block_invariant"] and s["reflection_determinants_one"]


def test_cyclic_group_abelianization():
    z = ZETA
    G = enumerate_group([diag(z, z.inverse(), ONE, ONE)])
    assert G.order == 12
    K, ab = commutator_and_abelianization(G)
    assert len(K) == 1 and ab == [12]
    assert len(conjugacy_classes(G)) == 12


def test_dihedral_is_not_quaternion():
    # symmetries of a square acting on four points
    G = enumerate_group([perm([1, 2, 3, 0]), perm([3, 2, 1, 0])])
    assert G.order == 8
    assert not is_quaternion(G, list(range(8)))


def test_quaternion_units_recognized():
    i = ZETA ** 3
    qi = diag(i, -i, i, -i)
    qj = [[ZERO, -ONE, ZERO, ZERO], [ONE, ZERO, ZERO, ZERO], [ZERO, ZERO, ZERO, -ONE], [ZERO, ZERO, ONE, ZERO]]
    G = enumerate_group([qi, qj])
    assert G.order == 8 and is_quaternion(G, list(range(8)))


def test_enumeration_cap():
    with pytest.raises(GroupError):
        enumerate_group([diag(ZETA, ONE, ONE, ONE)], cap=5)


def test_reflection_planes_of_diagonal_group():
    z = ZETA ** 4
    G = enumerate_group([diag(z, z.inverse(), ONE, ONE)])
    refl, planes, perms = reflections_and_planes(G)
    assert len(refl) == 2 and len(planes) == 1


def test_nullspace_canonical():
    A = as_matrix([[1, 1, 0], [0, 0, 1]])
    assert nullspace(A) == ((ONE, -ONE, CycNum()),)
