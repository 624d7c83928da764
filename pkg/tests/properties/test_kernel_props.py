import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from coxtorus import _fallback

compiled = pytest.importorskip("coxtorus._kernels")
P = 2147483629

steps = st.tuples(st.integers(-3, 4), st.integers(-3, 4)).filter(lambda v: 3 * v[0] + 2 * v[1] > 0)


@settings(max_examples=120, deadline=None)
@given(st.integers(3, 14), st.integers(3, 14), steps, st.integers(0, 40), st.data())
def test_geometric_divide_backends_agree(n, m, v, bound, data):
    a = data.draw(arrays(np.int64, (n, m), elements=st.integers(-5, 5)))
    I, J = np.meshgrid(np.arange(n), np.arange(m), indexing="ij")
    ell = np.ascontiguousarray(3 * I + 2 * J, dtype=np.int64)
    x, y = a.copy(), a.copy()
    _fallback.geometric_divide(x, v[0], v[1], ell, bound)
    compiled.geometric_divide(y, v[0], v[1], ell, bound)
    assert np.array_equal(x, y)


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(1, 6), st.integers(1, 6), st.data())
def test_poly_mul_backends_agree(na, ma, nb, mb, data):
    el = st.integers(0, P - 1)
    A = data.draw(arrays(np.int64, (na, ma), elements=el))
    B = data.draw(arrays(np.int64, (nb, mb), elements=el))
    assert np.array_equal(_fallback.poly_mul_mod(A, B, P), compiled.poly_mul_mod(A, B, P))


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 10), st.integers(1, 12), st.sampled_from([13, 37, P]), st.data())
def test_rank_and_echelon_backends_agree(n, m, p, data):
    rows = data.draw(arrays(np.int64, (n, m), elements=st.integers(0, min(p - 1, 3))))
    r1, r2 = _fallback.rank_mod_p(rows, p), compiled.rank_mod_p(rows, p)
    b1, p1, b2, p2 = [], [], [], []
    for r in rows:
        _fallback.echelon_insert(b1, p1, np.ascontiguousarray(r), p)
        compiled.echelon_insert(b2, p2, np.ascontiguousarray(r), p)
    assert r1 == r2 == len(b1) == len(b2)
    assert p1 == p2
