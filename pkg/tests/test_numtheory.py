import math

import pytest
import sympy.ntheory as nt

from shorsim import coprimes, factors_from_order, order, phase_to_order
from shorsim.errors import PreconditionError
from shorsim.numtheory import OrderProfile


@pytest.mark.parametrize("C,N,r", [(2, 15, 4), (4, 15, 2), (2, 21, 6)])
def test_order_examples(C, N, r):
    assert order(C, N) == r


def test_order_exhaustive_small_moduli():
    # every odd composite modulus up to 255, cross-checked against sympy
    for N in range(9, 256, 2):
        if nt.isprime(N):
            continue
        for C in coprimes(N):
            r = order(C, N)
            assert pow(C, r, N) == 1
            assert r == nt.n_order(C, N)


def test_order_minimality_by_brute_force():
    for N in (15, 21, 33):
        for C in coprimes(N):
            r = order(C, N)
            assert all(pow(C, k, N) != 1 for k in range(1, r))


def test_coprimes_of_15_all_have_power_of_two_orders():
    orders = [order(C, 15) for C in coprimes(15)]
    assert orders == [4, 2, 4, 4, 2, 4, 2]
    assert all(r & (r - 1) == 0 for r in orders)


def test_non_coprime_rejected():
    with pytest.raises(PreconditionError):
        order(6, 15)
    with pytest.raises(PreconditionError):
        order(1, 15)


@pytest.mark.parametrize("C,r,N,expected", [
    (2, 4, 15, (3, 5)),
    (4, 2, 15, (3, 5)),
    (14, 2, 15, None),   # gcd(15,15)=15 and gcd(13,15)=1 are both trivial
    (2, 6, 21, (3, 7)),
])
def test_factors_from_order(C, r, N, expected):
    assert factors_from_order(C, r, N) == expected


def test_factors_odd_order_trivial():
    assert factors_from_order(4, 3, 7) is None


def test_order_profile():
    p = OrderProfile.compute(2, 15)
    assert (p.r, p.log2_r) == (4, 2)
    assert p.orbit == (1, 2, 4, 8)
    q = OrderProfile.compute(2, 21)
    assert q.log2_r is None and not q.power_of_two
    assert q.orbit == (1, 2, 4, 8, 16, 11)


def test_phase_to_order_continued_fractions():
    assert phase_to_order(0, 3, 15) is None
    assert phase_to_order(2, 3, 15) == 4   # 2/8 = 1/4
    assert phase_to_order(4, 3, 15) == 2   # 4/8 = 1/2
    assert phase_to_order(6, 3, 15) == 4   # 6/8 = 3/4
    # near-miss of 1/3 at 5 bits: 11/32 -> denominator 3
    assert phase_to_order(11, 5, 21) == 3
    assert math.gcd(phase_to_order(85, 8, 21), 3) == 3  # 85/256 ~ 1/3
