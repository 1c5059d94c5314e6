# test_utils.py

import csv
import json
from fractions import Fraction

import numpy as np
import pytest

from orbifold.utils import (Certificate, Phase, canonicalJson, isZeroSum, jsonValue, rootOfUnity,
                            rootOfUnitySum, writeCsv, writeJson)


def test_phase_arithmetic():
    a = Phase(Fraction(1, 3), betaSq=Fraction(1, 2))
    b = Phase(Fraction(2, 3), betaSq=Fraction(-1, 2))
    assert (a*b).isTrivial()
    assert (a**2).betaSq == 1
    assert a.conj()*a == Phase()


def test_phase_keeps_branch():
    ph = Phase(Fraction(3, 2))
    assert ph != Phase(Fraction(1, 2))
    assert ph.equivalent(Phase(Fraction(1, 2)))
    assert (ph**Fraction(1, 2)).frac == Fraction(3, 4)


def test_phase_value():
    assert rootOfUnity(1, 4).value() == pytest.approx(1j, abs=1e-15)
    ph = Phase(alphaSq=1)
    assert ph.value(alphaSq=0.5) == pytest.approx(-1, abs=1e-15)


@pytest.mark.parametrize('q', [1, 2, 3, 6, 12])
def test_full_sum_of_roots_vanishes(q):
    rem = rootOfUnitySum([1]*q, q)
    assert isZeroSum(rem) == (q > 1)


def test_root_sum_exact():
    # 1 + e(1/3) + e(2/3) = 0 and 1 + e(1/2) = 0 inside the sixth roots
    assert isZeroSum(rootOfUnitySum([1, 0, 1, 0, 1, 0], 6))
    assert isZeroSum(rootOfUnitySum([1, 0, 0, 1, 0, 0], 6))
    assert not isZeroSum(rootOfUnitySum([1, 1, 0, 0, 0, 0], 6))
    with pytest.raises(ValueError):
        rootOfUnitySum([1, 2], 3)


def test_json_values():
    assert jsonValue(Fraction(1, 3)) == '1/3'
    assert jsonValue(np.float64(0.5)) == 0.5
    assert jsonValue(np.int64(3)) == 3
    assert jsonValue(np.bool_(True)) is True
    assert jsonValue(1 + 2j) == [1.0, 2.0]
    assert jsonValue({1: (2, 3)}) == {'1': [2, 3]}
    assert jsonValue(Phase(Fraction(1, 2))) == 'e(1/2)'
    with pytest.raises(TypeError):
        jsonValue(object())


def test_certificate_dict():
    cert = Certificate('demo', inputs={'q': 3}, values={'x': np.float64(1.5)}, threshold=2.0, passed=True)
    d = cert.asDict()
    assert d['pass'] is True
    assert d['values'] == {'x': 1.5}
    assert set(d) == {'claim', 'inputs', 'values', 'threshold', 'pass', 'tolerance', 'tail_budget', 'notes'}


def test_canonical_json_is_sorted():
    assert canonicalJson({'b': 1, 'a': 2}) == canonicalJson({'a': 2, 'b': 1})


def test_writers(tmp_path):
    path = tmp_path/'out'/'x.json'
    writeJson(str(path), {'a': Fraction(1, 2)})
    assert json.loads(path.read_text()) == {'a': '1/2'}
    cpath = tmp_path/'out'/'x.csv'
    writeCsv(str(cpath), [(1, 2.5), (2, 3.5)], ('m', 're'))
    with open(cpath) as f:
        rows = list(csv.reader(f))
    assert rows == [['m', 're'], ['1', '2.5'], ['2', '3.5']]
    assert sorted(p.name for p in (tmp_path/'out').iterdir()) == ['x.csv', 'x.json']
