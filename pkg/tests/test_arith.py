from fractions import Fraction

import pytest

from hermod.arith import (FpElem, NotPIntegral, bernoulli, bernoulli_akiyama_tanigawa,
                          check_prime, is_prime, legendre, reduce_int, reduce_mod_p)


def test_primality_against_trial_division():
    brute = [n for n in range(200) if n > 1 and all(n % d for d in range(2, n))]
    assert [n for n in range(200) if is_prime(n)] == brute


@pytest.mark.parametrize("bad", [2, 3, 4, 9, 25, 1])
def test_check_prime_rejects_small_or_composite(bad):
    with pytest.raises(ValueError):
        check_prime(bad)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17])
def test_legendre_matches_squares(p):
    squares = {x * x % p for x in range(1, p)}
    for b in range(1, p):
        assert legendre(b, p) == (1 if b in squares else -1)
    assert legendre(0, p) == 0


def test_bernoulli_known_values():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert bernoulli(3) == 0


def test_bernoulli_two_algorithms_agree_for_even_index():
    for n in range(0, 40, 2):
        assert bernoulli(n) == bernoulli_akiyama_tanigawa(n)


def test_reduce_and_field_ops():
    assert reduce_int(Fraction(1, 3), 7) == 5
    assert reduce_int(-1, 7) == 6
    with pytest.raises(NotPIntegral):
        reduce_int(Fraction(1, 7), 7)
    a = reduce_mod_p(Fraction(2, 3), 11)
    assert a * FpElem(3, 11) == FpElem(2, 11)
    assert a.inverse() * a == FpElem(1, 11)
    assert FpElem(3, 7) ** 6 == FpElem(1, 7)
