from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from coxtorus.exactmath import (ONE, ZERO, CycNum, default_primes, det_int, invariant_factors, kernel_basis,
                                mat_mul, mod_p_embed, primitive_12th_root, smith_normal_form)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
cycnums = st.lists(fractions, min_size=4, max_size=4).map(CycNum)
nonzero = cycnums.filter(lambda x: not x.is_zero())

P0 = default_primes(1)[0]
R0 = primitive_12th_root(P0)

_z = sympy.Symbol("z")
_PHI = sympy.Poly(sympy.cyclotomic_poly(12, _z), _z)


def as_sympy(x: CycNum) -> sympy.Poly:
    return sympy.Poly(sum(sympy.Rational(c.numerator, c.denominator) * _z ** k
                          for k, c in enumerate(x.coeffs)), _z, domain="QQ")


def from_sympy(p: sympy.Poly) -> CycNum:
    r = p.rem(_PHI)
    coeffs = [Fraction(0)] * 4
    for (k,), c in r.terms():
        coeffs[k] = Fraction(int(c.p), int(c.q))
    return CycNum(coeffs)


@settings(max_examples=150, deadline=None)
@given(cycnums, cycnums, cycnums)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO and a * ONE == a


@settings(max_examples=150, deadline=None)
@given(nonzero, cycnums)
def test_inverse_and_division(a, b):
    assert a * a.inverse() == ONE
    assert (b / a) * a == b


@settings(max_examples=120, deadline=None)
@given(cycnums, cycnums)
def test_product_matches_polynomial_remainder(a, b):
    # independent route: multiply in Q[z] and reduce modulo the cyclotomic polynomial
    assert a * b == from_sympy(as_sympy(a) * as_sympy(b))


@settings(max_examples=120, deadline=None)
@given(cycnums, cycnums, st.sampled_from([1, 5, 7, 11]))
def test_galois_is_field_automorphism(a, b, k):
    assert (a * b).galois(k) == a.galois(k) * b.galois(k)
    assert (a + b).galois(k) == a.galois(k) + b.galois(k)


@settings(max_examples=120, deadline=None)
@given(cycnums, cycnums)
def test_reduction_mod_p_is_ring_map(a, b):
    ea, eb = mod_p_embed(a, P0, R0), mod_p_embed(b, P0, R0)
    assert mod_p_embed(a * b, P0, R0) == ea * eb % P0
    assert mod_p_embed(a + b, P0, R0) == (ea + eb) % P0


int_matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(int_matrices)
def test_smith_normal_form_contract(A):
    U, D, V = smith_normal_form(A)
    assert mat_mul(mat_mul(U, A), V) == D
    assert abs(det_int(U)) == 1 and abs(det_int(V)) == 1
    m, n = len(A), len(A[0])
    diag = [D[i][i] for i in range(min(m, n))]
    assert all(D[i][j] == 0 for i in range(m) for j in range(n) if i != j)
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[len(nz):] == [0] * (len(diag) - len(nz))


@settings(max_examples=100, deadline=None)
@given(int_matrices)
def test_invariant_factors_match_sympy(A):
    S = sympy_snf(sympy.Matrix(A), domain=sympy.ZZ)
    theirs = [abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0]
    assert invariant_factors(A) == sorted(theirs)


@settings(max_examples=100, deadline=None)
@given(int_matrices)
def test_kernel_basis_is_saturated_kernel(A):
    K = kernel_basis(A)
    n = len(A[0])
    assert all(sum(a * k for a, k in zip(row, kr)) == 0 for kr in K for row in A)
    assert len(K) == n - sympy.Matrix(A).rank()
    if K:
        # saturation: the kernel rows have trivial elementary divisors
        assert all(d == 1 for d in invariant_factors(K))
