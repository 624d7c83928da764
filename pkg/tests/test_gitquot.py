import random

import pytest

from coxtorus import gitquot as G, seeds
from coxtorus.latgeom import Cone


@pytest.fixture(scope="module")
def comps():
    return seeds.load_components()


@pytest.fixture(scope="module")
def ring():
    return G.GeneratorRing(seeds.load_generators())


def test_semistability_by_weights(weights):
    chi = (2, 1)
    assert G.is_semistable_support(["w12", "s"], chi, weights)
    assert not G.is_semistable_support(["w12"], chi, weights)
    assert not G.is_semistable_support(["w01", "w02"], chi, weights)
    assert G.minimal_semistable(["w12", "w23"], chi, weights)


def test_gmono_text_round_trip():
    m = G.gmono_from_text("w12^2*s/w23")
    assert G.format_gmono(m) == "w12^2*s/w23"
    assert G.gmono_mul(m, G.gmono_from_text("w23")) == G.gmono_from_text("w12^2*s")


def test_degree_zero_correction(weights):
    fixed = G.degree_zero_correction(G.gmono_from_text("w23/(w12*s)"), G.gmono_from_text("w12*s"), weights)
    assert G.format_gmono(fixed) == "w23/(w12^2*s)"
    assert weights.pic_of(fixed) == (0, 0)


def test_z1_quotient(comps, weights):
    c = G.component_data(comps["Z1"], weights)
    ref = [[3, -1], [1, -1]]
    q = G.toric_quotient_pipeline(c, weights, reference_tmatrix=ref)
    assert q.fan.rays() == {(0, 1), (1, 0), (1, -1), (-1, -2)}
    assert q.fan.is_complete()
    assert [list(r) for r in zip(*q.tmatrix)] == ref


def test_z0_nonnormal_orbit_is_a_point(comps, weights):
    c = G.component_data(comps["Z0"], weights)
    q = G.toric_quotient_pipeline(c, weights, kernel=comps["Z0"].kernel)
    nn = G.nonnormal_locus(c, q, [Cone(w) for w in comps["Z0"].omega])
    assert nn.nonnormal_images == {((0, -1), (1, -3))}
    assert nn.nonnormal_rays == set()
    assert nn.omega_consistent


def test_wrong_kernel_rejected(comps, weights):
    c = G.component_data(comps["Z0"], weights)
    with pytest.raises(G.QuotientError):
        G.toric_quotient_pipeline(c, weights, kernel=[[1, 0, 0, 0], [0, 1, 0, 0]])


def test_hypersurface_component(comps, weights):
    r = G.zp_checks(comps["ZP"], weights, [[2, 0, 3], [2, 4, 1]])
    assert r["passed"] and r["cusp_point"] == "(0:1:0)"
    assert G.hypersurface_weight_table((2, 1), comps["ZP"], weights) == {(6, 4): 1, (3, 7): 1, (5, 5): 1}


def test_chart_u2_certificates(weights, ring):
    seed = seeds.load_charts()[1]
    ch = G.build_chart(seed, weights)
    assert ch.corrections == []
    inv = G.chart_ambient_invariants(ch.localize, weights)
    assert len(inv) == 18
    for m in inv:
        assert G.express_in_chart_coordinates(m, ch.coordinates, ring, weights).ok
    assert G.chart_jacobian_rank(ch.coordinates, ring, random.Random(0)) == 4


def test_tangent_weight_correction_u3(weights):
    comp = seeds.load_compasses()
    ch = G.build_chart(seeds.load_charts()[2], weights, comp["P3"]["compass"])
    assert ch.corrections == [("w12*w24/w3", "w12*w21/w3")]
    assert sorted(weights.t_of(c) for c in ch.coordinates) == sorted(map(tuple, comp["P3"]["compass"]))


def test_inexpressible_target_reported(weights, ring):
    ch = G.build_chart(seeds.load_charts()[1], weights)
    e = G.express_in_chart_coordinates(G.gmono_from_text("w01"), ch.coordinates[:2], ring, weights)
    assert not e.ok


def test_base_locus(comps, weights):
    for n in ("Z0", "Z1", "Z2"):
        c = G.component_data(comps[n], weights)
        assert G.base_locus_on_component((1, 0), c, (2, 1), weights)["passed"]
