# conftest.py

import math
from fractions import Fraction

import numpy as np
import pytest

import orbifold
from orbifold.dat.testIrrationals import testIrrationals


def nearRational(p, q, digits=30):
    """
    An irrational stand-in with theta - p/q = 1/(3 q^2), known to the given digits
    """
    return orbifold.Irrational(decimal=Fraction(p, q) + Fraction(1, 3*q*q), digits=digits)


def randomPairs(count, qMax, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        q = int(rng.integers(2, qMax + 1))
        p = int(rng.integers(1, q))
        if math.gcd(p, q) == 1:
            out.append((p, q))
    return out


@pytest.fixture(scope='session')
def irrationals():
    return {name: orbifold.Irrational(**spec) for name, spec in testIrrationals.items()}


@pytest.fixture(scope='session')
def sqrt2m1():
    return orbifold.Irrational(cf=[0], period=[2])


@pytest.fixture(scope='session')
def pipelines(sqrt2m1, irrationals):
    """
    Pipelines of small convergents, q between 2 and 29
    """
    out = [orbifold.prepare(sqrt2m1, index=n) for n in (1, 2, 3, 4)]
    out += [orbifold.prepare(irrationals['golden'], index=n) for n in (3, 4, 5)]
    out += [orbifold.prepare(irrationals['triple213'], index=n) for n in (2, 3, 4)]
    return out


@pytest.fixture(scope='session')
def randomPipelines():
    return [orbifold.prepare(nearRational(p, q), p, q) for p, q in randomPairs(200, 60, 7)]
