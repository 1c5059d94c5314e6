# test_numberTheory.py

import math
from fractions import Fraction

import numpy as np
import pytest

from orbifold.numberTheory import (Irrational, abc, bezout, checkApproximation, convergentDeterminant,
                                   convergents, coprimeShift, fourSquare, gdeltaScan, orientConvergent,
                                   quadraticCoprime, selectPhase, PhaseSelection)
from orbifold.sysmsg import DomainError, FlagError, PrecisionError


def deltaByHand(a, b, g, A, B, C):
    return b*A + 2*(g - a)*B + (1 - b*b + 4*a*g)*C


####################
#   Irrationals    #
####################


def test_irrational_needs_exactly_one_input():
    with pytest.raises(FlagError):
        Irrational()
    with pytest.raises(FlagError):
        Irrational(cf=[0, 2], decimal='0.4')


def test_irrational_domain():
    with pytest.raises(DomainError):
        Irrational(cf=[1, 2])
    with pytest.raises(DomainError):
        Irrational(cf=[0, 0, 2])
    with pytest.raises(DomainError):
        Irrational(decimal='1.5')


def test_periodic_coefficients(sqrt2m1):
    assert sqrt2m1.coefficients(5) == [0, 2, 2, 2, 2]
    assert Irrational(cf=[0, 5], period=[1, 5]).coefficients(6) == [0, 5, 1, 5, 1, 5]


def test_enclosure_brackets_value(sqrt2m1):
    lo, hi = sqrt2m1.enclosure()
    assert lo < hi
    assert float(lo) <= math.sqrt(2) - 1 <= float(hi)


def test_decimal_determines_leading_coefficients():
    theta = Irrational(decimal='0.41421356237309504880168872420969807856967187537694')
    assert theta.coefficients(10) == [0] + [2]*9
    with pytest.raises(PrecisionError):
        theta.coefficients(200)


def test_reflect(sqrt2m1):
    lo, hi = sqrt2m1.reflect().enclosure()
    assert float(lo) <= 2 - math.sqrt(2) <= float(hi)


def test_digest_is_stable(sqrt2m1):
    assert sqrt2m1.digest() == Irrational(cf=[0], period=[2]).digest()
    assert sqrt2m1.digest() != Irrational(cf=[0], period=[1]).digest()


####################
#   Convergents    #
####################


def test_convergents_sqrt2(sqrt2m1):
    cs = convergents(sqrt2m1, 4)
    assert [(c.p, c.q) for c in cs] == [(0, 1), (1, 2), (2, 5), (5, 12)]
    assert [c.index for c in cs] == [0, 1, 2, 3]


def test_convergents_golden_are_fibonacci_ratios():
    cs = convergents(Irrational(cf=[0], period=[1]), 6)
    fib = [0, 1, 1, 2, 3, 5, 8]
    assert [(c.p, c.q) for c in cs] == [(fib[n], fib[n + 1]) for n in range(6)]


def test_convergent_determinant(irrationals):
    for theta in irrationals.values():
        cs = convergents(theta, 12)
        for c0, c1 in zip(cs, cs[1:]):
            assert convergentDeterminant(c0, c1) in (1, -1)
        assert all(c0.q < c1.q for c0, c1 in zip(cs[1:], cs[2:]))


def test_rational_input_exhausts_precision():
    with pytest.raises(PrecisionError):
        convergents(Irrational(cf=[0, 2]), 3)


def test_check_approximation(sqrt2m1):
    assert checkApproximation(sqrt2m1, 1, 2) == (True, True)
    assert checkApproximation(sqrt2m1, 1, 3)[0] is False
    assert checkApproximation(sqrt2m1, 0, 1) == (True, True)
    with pytest.raises(DomainError):
        checkApproximation(sqrt2m1, 2, 4)


def test_check_approximation_undecidable():
    theta = Irrational(decimal='0.3', digits=1)
    with pytest.raises(PrecisionError):
        checkApproximation(theta, 1, 2)


def test_error_magnitude(sqrt2m1):
    c = convergents(sqrt2m1, 2)[1]
    assert c.q*abs(c.error) == pytest.approx(0.3431457505, abs=1e-9)


def test_orient_convergent(sqrt2m1):
    below = convergents(sqrt2m1, 3)[2]
    assert orientConvergent(below) is below
    above = convergents(sqrt2m1, 2)[1]
    flipped = orientConvergent(above)
    assert (flipped.p, flipped.q, flipped.reflected) == (1, 2, True)
    assert flipped.below
    assert flipped.betaSq == pytest.approx(above.betaSq, rel=1e-12)


####################
#   Four squares   #
####################


@pytest.mark.parametrize('p, expected', [(0, (0, 0, 0, 0)), (1, (1, 0, 0, 0)), (7, (2, 1, 1, 1))])
def test_four_square_examples(p, expected):
    assert fourSquare(p).asTuple() == expected


@pytest.mark.parametrize('fs, expected', [((1, 0, 0, 0), (1, 0, 0)), ((2, 1, 1, 1), (3, 3, 1)),
                                          ((0, 0, 0, 0), (0, 0, 0))])
def test_abc_examples(fs, expected):
    t = abc(fourSquare(sum(x*x for x in fs)))
    assert (t.A, t.B, t.C) == expected


def test_abc_identity_random():
    rng = np.random.default_rng(1)
    for p in rng.integers(0, 10**6 + 1, 1000):
        p = int(p)
        fs = fourSquare(p)
        assert fs.p == p
        assert fs.p1 >= fs.p2 >= fs.p3 >= fs.p4 >= 0
        assert abc(fs).identity() == p*p


####################
#   Coprimality    #
####################


@pytest.mark.parametrize('method', ['scan', 'constructive'])
@pytest.mark.parametrize('p, r, q', [(3, 0, 2), (2, 3, 4), (0, 1, 5), (6, 5, 30), (10, 21, 77)])
def test_coprime_shift(p, r, q, method):
    k = coprimeShift(p, r, q, method)
    assert math.gcd(p + k*r, q) == 1


def test_coprime_shift_scan_is_smallest():
    assert coprimeShift(3, 0, 2) == 0
    assert coprimeShift(2, 3, 4) == 1


@pytest.mark.parametrize('method', ['scan', 'constructive'])
@pytest.mark.parametrize('X, Y, Z', [(1, 0, 6), (2, 3, 5), (0, 1, 3), (4, 9, 35), (6, 1, 12)])
def test_quadratic_coprime(X, Y, Z, method):
    k = quadraticCoprime(X, Y, Z, method)
    assert math.gcd(k*X + (k*k - 1)*Y, Z) == 1


def test_coprime_preconditions():
    with pytest.raises(DomainError):
        coprimeShift(2, 4, 6)
    with pytest.raises(DomainError):
        quadraticCoprime(3, 3, 9)
    with pytest.raises(FlagError):
        coprimeShift(1, 1, 2, method='guess')


def test_bezout():
    c, d = bezout(7, 12)
    assert c*7 + d*12 == 1
    with pytest.raises(DomainError):
        bezout(4, 6)


####################
#   Phase select   #
####################


def test_select_phase_unit_p():
    fs = fourSquare(1)
    for q in range(1, 30):
        ps = selectPhase(fs, q)
        assert math.gcd(ps.Delta, q) == 1


@pytest.mark.parametrize('p, q, branch', [(7, 3, 'odd'), (5, 4, 'even')])
def test_select_phase_examples(p, q, branch):
    fs = fourSquare(p)
    ps = selectPhase(fs, q)
    t = abc(fs)
    assert ps.branch == branch
    assert ps.Delta == deltaByHand(ps.a, ps.b, ps.gamma, t.A, t.B, t.C)
    assert math.gcd(ps.Delta, q) == 1
    if branch == 'even':
        assert ps.b % 2 == 1


@pytest.mark.parametrize('method', ['scan', 'constructive'])
def test_select_phase_random(method):
    rng = np.random.default_rng(2)
    branches = set()
    count = 0
    while count < 500:
        p, q = (int(x) for x in rng.integers(1, 10**4 + 1, 2))
        if math.gcd(p, q) != 1:
            continue
        count += 1
        fs = fourSquare(p)
        t = abc(fs)
        ps = selectPhase(fs, q, method)
        assert ps.Delta == deltaByHand(ps.a, ps.b, ps.gamma, t.A, t.B, t.C)
        assert math.gcd(ps.Delta, q) == 1
        assert (ps.Delta*ps.DeltaInv - 1) % q == 0
        assert ps.c*p + ps.d*q == 1
        branches.add(ps.branch)
    assert branches == {'odd', 'even'}


def test_override_keeps_noncoprime_delta():
    ps = PhaseSelection.override(0, 0, 0, fourSquare(1), 4)
    assert ps.Delta == 0
    assert not ps.coprime


####################
#   G-delta scan   #
####################


def test_gdelta_period_213(irrationals):
    hits = gdeltaScan(irrationals['triple213'].coefficients(60), 2, 3)
    assert hits
    for h in hits:
        assert h.lower == Fraction(5, 4) and h.upper == 1 + Fraction(1, 3) + Fraction(1, 2)
        assert h.satisfied
        assert h.lower < h.betaSqLow <= h.betaSqHigh < h.upper


def test_gdelta_515(irrationals):
    hits = gdeltaScan(irrationals['silverInv'].coefficients(40), 5, 5)
    assert hits
    for h in hits:
        assert Fraction(7, 6) < h.betaSqLow and h.betaSqHigh < Fraction(7, 5)


def test_gdelta_matches_convergent_beta(irrationals):
    theta = irrationals['triple213']
    cs = convergents(theta, 30)
    for h in gdeltaScan(theta.coefficients(30), 2, 3):
        if h.index > 15:
            continue
        assert cs[h.index].betaSq == pytest.approx(h.betaSq, rel=1e-6)


def test_gdelta_without_triple(sqrt2m1):
    assert gdeltaScan(sqrt2m1.coefficients(30), 2, 3) == []
