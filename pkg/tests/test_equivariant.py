import pytest

from coxtorus import equivariant as E, seeds


@pytest.fixture(scope="module")
def table_2_1(fixed_points):
    return E.hilbert_weight_table((2, 1), fixed_points, (3, 2), 130)


def test_compass_constraints():
    assert E.pairs_to_two([(0, 4), (0, 6), (1, -5), (1, -3)])
    assert not E.pairs_to_two([(0, 4), (0, 4), (1, -5), (1, -3)])
    assert E.sign_balanced([(0, 4), (0, 6), (1, -5), (1, -3)])


def test_assemble_compass_unique_and_ambiguous():
    assert sorted(E.assemble_compass("P1", [(1, -5), (1, -3)])) == [(0, 4), (0, 6), (1, -5), (1, -3)]
    with pytest.raises(E.CompassError) as err:
        E.assemble_compass("X", [(1, -1)])
    assert len(err.value.candidates) != 1


def test_convex_hull_drops_collinear_points():
    assert sorted(E.convex_hull([(0, 0), (1, 1), (2, 2), (2, 0), (0, 2)])) == [(0, 0), (0, 2), (2, 0), (2, 2)]


def test_trivial_bundle_series(fixed_points):
    t = E.hilbert_weight_table((0, 0), fixed_points, (3, 2), 30)
    assert t[(0, 0)] == 1
    assert (1, 0) not in t and (0, 1) not in t


def test_diagram_anchors(table_2_1):
    for a, b, v in seeds.load_expected()["diagram_anchors_2_1"]:
        assert table_2_1[(a, b)] == v


def test_diagram_cells(table_2_1):
    diagram = seeds.load_diagram()
    box = {w: v for w, v in table_2_1.items() if w[0] <= 26 and w[1] <= 22}
    assert box == diagram


def test_swap_symmetry(fixed_points):
    # swapping the two torus factors exchanges L1 and L2 on a symmetric region
    a = E.hilbert_weight_table((1, 0), fixed_points, (3, 2), 60)
    b = E.hilbert_weight_table((0, 1), fixed_points, (3, 2), 60)

    def sym(t):
        return {w: v for w, v in t.items() if 3 * w[0] + 2 * w[1] <= 60 and 2 * w[0] + 3 * w[1] <= 60}
    assert sym(a) == sym({(w[1], w[0]): v for w, v in b.items()})


def test_functional_must_not_vanish(fixed_points):
    assert not E.admissible((1, 1), fixed_points)
    with pytest.raises(E.SeriesError):
        E.lrr_character_series((2, 1), fixed_points, (1, 0), 20)


def test_walls(fixed_points):
    assert E.movable_walls(fixed_points) == [(1, 0), (1, 1)]


def test_render_and_csv():
    t = {(0, 0): 1, (1, 0): 2, (0, 1): 3}
    assert E.table_to_csv(t) == "a,b,dim\n0,0,1\n0,1,3\n1,0,2\n"
    grid = E.render_grid(t).splitlines()
    assert grid[0].split("|")[1].split() == ["3", "."]
    assert grid[1].split("|")[1].split() == ["1", "2"]
