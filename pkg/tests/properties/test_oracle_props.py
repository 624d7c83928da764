import random

from hypothesis import given, settings, strategies as st

from coxtorus import coxoracle, equivariant, seeds
from coxtorus.exactmath import default_primes

DATA = equivariant.fixed_point_data(seeds.load_compasses(), seeds.load_mu_table())
TABLE = coxoracle.GeneratorTable.from_seeds(seeds.load_generators(), seeds.load_degree_matrix())
BUNDLES = [tuple(L) for L in seeds.load_bundles()["S"]]
BOUND = 36
TABLES = {L: equivariant.hilbert_weight_table(L, DATA, (3, 2), BOUND) for L in BUNDLES}
ORACLE = coxoracle.ModularPieceOracle(TABLE, default_primes(1)[0])
SEEDS = [tuple(s) for s in seeds.load_bundles()["S"] + seeds.load_bundles()["S'"]]

cells = st.sampled_from(BUNDLES).flatmap(
    lambda L: st.tuples(st.just(L), st.sampled_from(sorted(
        (a, b) for a in range(13) for b in range(13) if 3 * a + 2 * b <= BOUND))))


@settings(max_examples=150, deadline=None)
@given(cells)
def test_candidate_rank_bounded_by_section_dimension(cell):
    # containment: the subring generated by the listed elements sits inside
    # the Cox ring, so its graded pieces can never be larger
    L, w = cell
    assert ORACLE.rank(L, w).rank <= TABLES[L].get(w, 0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(SEEDS), unique=True), st.lists(st.sampled_from(SEEDS), unique=True),
       st.integers(0, 15))
def test_closure_monotone_in_seeds(a, b, N):
    small = coxoracle.regularity_closure(a, N=N).covered
    big = coxoracle.regularity_closure(sorted(set(a) | set(b)), N=N).covered
    assert small <= big


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(SEEDS), unique=True), st.integers(0, 12))
def test_closure_grid_monotone(a, N):
    lo = coxoracle.regularity_closure(a, N=N).covered
    hi = coxoracle.regularity_closure(a, N=N + 3).covered
    assert lo <= hi


def test_exact_rank_agrees_with_modular_rank():
    rng = random.Random(5)
    picks = [(L, w) for L in BUNDLES for w in TABLES[L] if sum(w) <= 5]
    for L, w in rng.sample(picks, 8):
        assert coxoracle.exact_piece_rank(L, w, TABLE) == ORACLE.rank(L, w).rank
