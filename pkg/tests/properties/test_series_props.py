from functools import lru_cache

from hypothesis import assume, given, settings, strategies as st

from coxtorus import equivariant, seeds

DATA = equivariant.fixed_point_data(seeds.load_compasses(), seeds.load_mu_table())


@lru_cache(maxsize=None)
def table(L, ell, D):
    return equivariant.lrr_character_series(L, DATA, ell, D).terms


def common(t, l1, l2, D):
    return {w: v for w, v in t.items()
            if l1[0] * w[0] + l1[1] * w[1] <= D and l2[0] * w[0] + l2[1] * w[1] <= D}


functionals = st.tuples(st.integers(1, 9), st.integers(1, 9)).filter(lambda v: equivariant.admissible(v, DATA))
bundles = st.tuples(st.integers(0, 4), st.integers(0, 4))


@settings(max_examples=120, deadline=None)
@given(bundles, functionals, functionals, st.integers(10, 60))
def test_series_independent_of_functional(L, l1, l2, D):
    assume(l1 != l2)
    a, b = table(L, l1, D), table(L, l2, D)
    assert common(a, l1, l2, D) == common(b, l1, l2, D)


nef_bundles = bundles.filter(lambda L: L[0] >= L[1])


@settings(max_examples=100, deadline=None)
@given(nef_bundles, functionals, st.integers(10, 60))
def test_series_supported_in_quadrant_with_positive_coefficients(L, ell, D):
    # higher cohomology vanishes for p >= q, where the Euler characteristic
    # counts sections
    s = equivariant.lrr_character_series(L, DATA, ell, D)
    assert not s.off_quadrant()
    assert all(c > 0 for c in s.terms.values())


@settings(max_examples=100, deadline=None)
@given(bundles, st.integers(20, 60), st.integers(1, 20))
def test_truncation_is_stable(L, D, extra):
    # raising the bound never changes coefficients below the old bound
    small, big = table(L, (3, 2), D), table(L, (3, 2), D + extra)
    assert {w: v for w, v in big.items() if 3 * w[0] + 2 * w[1] <= D} == small
