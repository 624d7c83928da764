import pytest

from coxtorus import coxoracle as C, equivariant as E, seeds
from coxtorus.exactmath import default_primes


def test_degree_matrix_recomputed(gen_table):
    r = C.verify_degree_matrix(gen_table)
    assert r["passed"] and len(r["rows"]) == 20


def test_corrupted_degree_entry_named(gen_table):
    bad = C.GeneratorTable(gen_table.polys, dict(gen_table.picard), dict(gen_table.tweight))
    bad.tweight["w24"] = (0, 0)
    r = C.verify_degree_matrix(bad)
    assert not r["passed"] and r["mismatches"][0].startswith("w24:")


def test_semiinvariance_characters(gen_table, group):
    r = C.verify_semiinvariance(gen_table, group)
    assert r["passed"]
    assert C.picard_class((1, 1)) == 0 and C.picard_class((1, 0)) == 1


def test_graded_piece_ranks(gen_table):
    assert C.graded_piece_rank((2, 1), (0, 16), gen_table)["rank"] == 1
    r = C.graded_piece_rank((1, 1), (3, 3), gen_table)
    assert r["rank"] == 1 and r["agree"]


def test_monomial_enumeration(gen_table):
    monos = C.enumerate_graded_monomials((1, 1), (3, 3), gen_table)
    assert {tuple(sorted(m.items())) for m in monos} == {(("w3", 1),)}
    assert C.solve_st((2, 1), (2, 1)) == (0, 0)


def test_invariant_dimensions_match_trivial_bundle(group, fixed_points):
    t = E.hilbert_weight_table((0, 0), fixed_points, (3, 2), 60)
    for a in range(9):
        for b in range(9 - a):
            assert C.invariant_dimension(group, a, b) == t.get((a, b), 0)


def test_regularity_closure_and_necessity():
    b = seeds.load_bundles()
    S = [tuple(x) for x in b["S"] + b["S'"]]
    r = C.regularity_closure(S, N=50)
    assert r.complete and len(r.covered) == 51 * 51
    chain = r.chain((10, 7))
    assert chain[-1] == (10, 7) and chain[0] in S
    nec = C.seed_necessity(S, N=50)
    assert all(s in unc for s, unc in nec.items())


def test_verdict_needs_two_primes(gen_table, fixed_points):
    t = {(2, 1): E.hilbert_weight_table((2, 1), fixed_points, (3, 2), 30)}
    with pytest.raises(C.OracleError):
        C.cox_equality_verdict([(2, 1)], t, gen_table, primes=default_primes(1), D=30)
    r = C.cox_equality_verdict([(2, 1)], t, gen_table, D=30)
    assert r["passed"] and all(c.status == "equal" for c in r["cells"])


def test_verdict_flags_inflated_table(gen_table, fixed_points):
    t = E.hilbert_weight_table((2, 1), fixed_points, (3, 2), 40)
    t[(0, 16)] += 1
    r = C.cox_equality_verdict([(2, 1)], {(2, 1): t}, gen_table, D=40)
    assert [c.weight for c in r["failures"]] == [(0, 16)]
    assert r["failures"][0].status == "short"
