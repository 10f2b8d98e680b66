from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from kummer_lfun.orbits import (
    build_z2d, i_q, is_supersingular, mult_order, orbit_length, stratify,
    supersingular_witness, totient, z2d_members,
)


def brute_order(q, n):
    x, k = q % n, 1
    while x != 1 % n:
        x, k = (x * q) % n, k + 1
    return k


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 60), st.integers(1, 400))
def test_mult_order_brute(q, n):
    if gcd(q, n) != 1:
        with pytest.raises(ValueError):
            mult_order(q, n)
        return
    assert mult_order(q, n) == brute_order(q, n)
    if n > 1:
        assert mult_order(q, n) == sympy.n_order(q, n)


@pytest.mark.parametrize("n,order", [(25, 20), (50, 20), (10, 4), (8, 2), (16, 4), (14, 6), (28, 6), (4, 2), (2, 1)])
def test_known_orders_base3(n, order):
    assert mult_order(3, n) == order


def test_totient_convention():
    assert totient(1) == 0 and totient(2) == 1 and totient(12) == 4


def test_z2d_members():
    assert z2d_members(1) == []
    assert z2d_members(2) == []
    assert z2d_members(5) == [1, 2, 3, 4, 6, 7, 8, 9]
    assert z2d_members(4) == [1, 3, 5, 7]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5, 7, 9, 25, 27]), st.integers(1, 60))
def test_orbits_partition(q, d):
    if gcd(2 * d, q) != 1:
        with pytest.raises(ValueError, match="strip p-part"):
            build_z2d(q, d)
        return
    os_ = build_z2d(q, d)
    seen = sorted(m for o in os_ for m in o.members)
    assert seen == sorted(z2d_members(d))
    for o in os_:
        assert o.representative == min(o.members)
        assert o.length == orbit_length(q, 2 * d, o.representative)
        assert {(m * q) % (2 * d) for m in o.members} == set(o.members)
    assert sum(stratify(q, d).values()) == len(os_)


def test_q3_d5_orbits():
    os_ = build_z2d(3, 5)
    assert [o.members for o in os_] == [(1, 3, 7, 9), (2, 4, 6, 8)]
    assert stratify(3, 5) == {5: 1, 10: 1}


@pytest.mark.parametrize("D,value", [(10, 3), (14, 3), (4, 2), (50, 5), (28, 6), (2, 1)])
def test_i_q_base3(D, value):
    assert i_q(3, D) == value


def test_i_q_termwise():
    # e = 2, 4, 8 contribute 1/1, 2/2, 4/2
    assert i_q(3, 8) == Fraction(1, 1) + 1 + 2
    assert i_q(5, 3) == Fraction(2, 2)


@pytest.mark.parametrize("D,a", [(4, 1), (10, 2), (14, 3), (28, 3), (82, 4), (2, 1), (50, 10)])
def test_supersingular_witness(D, a):
    assert supersingular_witness(3, D) == a
    assert (3**a + 1) % D == 0


@pytest.mark.parametrize("D", [8, 16, 20, 13, 22])
def test_not_supersingular(D):
    assert not is_supersingular(3, D)
    assert all((3**a + 1) % D for a in range(1, 200))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([3, 5, 7, 11]), st.integers(2, 300))
def test_supersingular_even_order(q, D):
    if gcd(q, D) != 1:
        return
    a = supersingular_witness(q, D)
    brute = next((k for k in range(1, 2 * D + 2) if (q**k + 1) % D == 0), None)
    assert a == brute
    if a is not None and D > 2:
        assert mult_order(q, D) == 2 * a
