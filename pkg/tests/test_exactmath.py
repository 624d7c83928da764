from fractions import Fraction

import pytest
import sympy

from coxtorus.exactmath import (I, ONE, SQRT3, ZERO, ZETA, BadReduction, CycNum, DivisionByZero, cyc_arith,
                                default_primes, mod_p_embed, primitive_12th_root, rank_exact, same_row_lattice,
                                solve_linear)

P0 = default_primes(1)[0]
R0 = primitive_12th_root(P0)


def test_named_constants():
    assert ZETA ** 12 == ONE
    assert ZETA ** 6 == -ONE
    assert I * I == -ONE
    assert SQRT3 * SQRT3 == CycNum.from_int(3)
    assert ZETA ** 4 + ZETA ** 8 + ONE == ZERO


def test_text_round_trip_and_zero():
    x = CycNum([Fraction(1, 2), 0, -3, Fraction(2, 7)])
    assert x.to_text() == "1/2-3*z^2+2/7*z^3"
    assert ZERO.to_text() == "0"
    with pytest.raises(DivisionByZero):
        ONE / ZERO


def test_cyc_arith_ops():
    a, b = CycNum([1, 2, 0, 0]), CycNum([0, 1, 0, 1])
    assert cyc_arith(a, b, "add") == a + b
    assert cyc_arith(a, b, "div") * b == a


def test_mod_p_bad_reduction():
    with pytest.raises(BadReduction):
        mod_p_embed(CycNum([Fraction(1, P0), 0, 0, 0]), P0, R0)


def test_default_primes():
    ps = default_primes(3)
    assert ps[:2] == [2147483629, 2147483497]
    assert all(p % 12 == 1 and sympy.isprime(p) for p in ps)


def test_same_row_lattice():
    assert same_row_lattice([[1, 2], [0, 1]], [[1, 0], [0, 1]])
    assert not same_row_lattice([[2, 0], [0, 1]], [[1, 0], [0, 1]])


def test_solve_linear_and_rank():
    A = [[ONE, ZETA], [ZETA, ZETA * ZETA]]
    assert rank_exact(A) == 1
    res = solve_linear(A, [ONE, ZETA])
    assert res.consistent
    res = solve_linear(A, [ONE, ONE])
    assert not res.consistent and res.inconsistent_row == 1
