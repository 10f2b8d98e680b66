import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_add, gf_irreducible_p, gf_mul, gf_rem

from kummer_lfun.errors import BudgetExceeded
from kummer_lfun.gfq import (
    build_field, embed, field_for, norm_log_factor, prime_power, relative_norm,
    smallest_irreducible,
)

FIELDS = [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (3, 4), (7, 2)]


def to_poly(x, p, k):
    """Independent id -> sympy dense poly (high degree first)."""
    digits = [(x // p**i) % p for i in range(k)]
    poly = digits[::-1]
    while poly and poly[0] == 0:
        poly = poly[1:]
    return poly


def from_poly(poly, p):
    out = 0
    for c in poly:
        out = out * p + int(c) % p
    return out


@pytest.mark.parametrize("q,pk", [(3, (3, 1)), (9, (3, 2)), (125, (5, 3)), (49, (7, 2))])
def test_prime_power(q, pk):
    assert prime_power(q) == pk


@pytest.mark.parametrize("q", [1, 6, 12, 100])
def test_prime_power_rejects(q):
    with pytest.raises(ValueError):
        prime_power(q)


def test_even_characteristic_rejected():
    with pytest.raises(ValueError, match="odd characteristic"):
        build_field(2, 3)


def test_budget():
    with pytest.raises(BudgetExceeded, match="field too large"):
        build_field(3, 10, budget=3**9)


def test_budget_env(monkeypatch):
    monkeypatch.setenv("KUMMER_LFUN_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        field_for(3, 5)


@pytest.mark.parametrize("p,k", FIELDS)
def test_modulus_is_smallest_irreducible(p, k):
    mod = smallest_irreducible(p, k)
    assert mod[-1] == 1 and gf_irreducible_p(list(mod[::-1]), p, ZZ)
    for low in itertools.product(range(p), repeat=k):
        if low == mod[:k]:
            break
        assert not gf_irreducible_p([1] + list(low[::-1]), p, ZZ)


# Frozen from hand computation: F_3 -> 2, F_5 -> 2 / 3, F_7 -> 3 / 5.
# F_9 = F_3[i]/(i^2+1): i (id 3) has order 4, 1+i (id 4) has order 8.
@pytest.mark.parametrize("p,k,primary,alternate", [(3, 1, 2, None), (5, 1, 2, 3), (7, 1, 3, 5), (3, 2, 4, 5)])
def test_generators(p, k, primary, alternate):
    assert build_field(p, k).generator == primary
    if alternate is None:
        with pytest.raises(ValueError):
            build_field(p, k, "alternate")
    else:
        assert build_field(p, k, "alternate").generator == alternate


def test_f9_modulus():
    assert build_field(3, 2).modulus == (1, 0, 1)


@pytest.mark.parametrize("p,k", FIELDS)
def test_tables_are_bijections(p, k):
    F = build_field(p, k)
    assert sorted(F.exp_table.tolist()) == list(range(1, F.Q))
    assert F.log_table[0] == -1
    assert np.all(F.exp_table[F.log_table[1:]] == np.arange(1, F.Q))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_arithmetic_matches_polynomials(pk, data):
    p, k = pk
    F = build_field(p, k)
    a = data.draw(st.integers(0, F.Q - 1))
    b = data.draw(st.integers(0, F.Q - 1))
    f = list(F.modulus[::-1])
    pa, pb = to_poly(a, p, k), to_poly(b, p, k)
    assert F.add(a, b) == from_poly(gf_add(pa, pb, p, ZZ), p)
    assert F.mul(a, b) == from_poly(gf_rem(gf_mul(pa, pb, p, ZZ), f, p, ZZ), p)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_field_laws(pk, data):
    F = build_field(*pk)
    a, b, c = (data.draw(st.integers(0, F.Q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.exp(F.dlog(a)) == a
    assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))


def test_vectorized_matches_scalar():
    F = build_field(3, 3)
    xs = F.elements
    ys = (xs * 7 + 5) % F.Q
    vec = F.mul(xs, ys)
    assert [F.mul(int(x), int(y)) for x, y in zip(xs, ys)] == vec.tolist()


def test_dlog_zero():
    with pytest.raises(ValueError, match="dlog of zero"):
        build_field(5).dlog(0)


def test_from_int():
    F = build_field(3, 2)
    assert F.from_int(-4) == 2 and F.from_int(-16) == 2


@pytest.mark.parametrize("big,small", [((3, 2), (3, 1)), ((3, 4), (3, 2)), ((5, 2), (5, 1)), ((3, 6), (3, 3))])
def test_embedding_is_ring_hom_onto_fixed_field(big, small):
    B, S = build_field(*big), build_field(*small)
    xs = S.elements
    img = embed(B, S, xs)
    assert len(set(img.tolist())) == S.Q
    fixed = B.elements[B.pow(B.elements, S.Q) == B.elements]
    assert sorted(img.tolist()) == sorted(fixed.tolist())
    X, Y = np.meshgrid(xs, xs)
    assert np.all(embed(B, S, S.mul(X, Y)) == B.mul(embed(B, S, X), embed(B, S, Y)))
    assert np.all(embed(B, S, S.add(X, Y)) == B.add(embed(B, S, X), embed(B, S, Y)))


@pytest.mark.parametrize("big,small", [((3, 2), (3, 1)), ((3, 4), (3, 2)), ((5, 3), (5, 1))])
def test_relative_norm(big, small):
    B, S = build_field(*big), build_field(*small)
    c = B.order // S.order
    xs = B.elements
    assert np.all(embed(B, S, relative_norm(B, S, xs)) == B.pow(xs, c))
    t = norm_log_factor(B, S)
    nz = B.nonzero
    assert np.all(S.dlog(relative_norm(B, S, nz)) == (B.dlog(nz) * t) % S.order)


def test_not_a_subfield():
    with pytest.raises(ValueError, match="not a subfield"):
        embed(build_field(3, 3), build_field(3, 2), 1)


def test_pickle_roundtrip():
    import pickle
    F = build_field(5, 2)
    G = pickle.loads(pickle.dumps(F))
    assert G is F
