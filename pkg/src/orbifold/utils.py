# Created by Yen-Hsun Lin (Academia Sinica) in 10/2026.
# Copyright (c) 2026 Yen-Hsun Lin.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# any later version (see <http://www.gnu.org/licenses/>).
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.



"""

This module contains the exact bookkeeping shared by the other modules:
unit phases e(x) with exact exponents, exact sums of q-th roots of unity,
the certificate record and the atomic writers used by the command line.
They can be loaded manually via

>>> from orbifold.utils import Phase, Certificate

"""

import csv as _csv
import io as _io
import json as _json
import logging as _logging
import os as _os
import tempfile as _tempfile
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

import mpmath as _mp
import numpy as _np
from sympy import Poly as _Poly, Symbol as _Symbol, cyclotomic_poly as _cyclotomic

_logger = _logging.getLogger(__name__)



##########################################################################
#                                                                        #
#   Exact phases                                                         #
#                                                                        #
##########################################################################


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Phase:
    """
    The unit complex number e(frac + alphaSq*alpha^2 + betaSq*beta^2) where
    e(x) = exp(2 pi i x)

    The three exponents are exact rationals and are never reduced modulo 1,
    so that fractional powers of a phase keep a single fixed branch. Use
    reduced() or equivalent() to compare values.

    In
    ------
    frac: rational part of the exponent
    alphaSq: rational multiple of alpha^2
    betaSq: rational multiple of beta^2
    """
    frac: Fraction = Fraction(0)
    alphaSq: Fraction = Fraction(0)
    betaSq: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 'frac', _frac(self.frac))
        object.__setattr__(self, 'alphaSq', _frac(self.alphaSq))
        object.__setattr__(self, 'betaSq', _frac(self.betaSq))

    def __mul__(self, other):
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.frac + other.frac, self.alphaSq + other.alphaSq, self.betaSq + other.betaSq)

    def __pow__(self, k):
        k = _frac(k)
        return Phase(self.frac*k, self.alphaSq*k, self.betaSq*k)

    def conj(self):
        return Phase(-self.frac, -self.alphaSq, -self.betaSq)

    def reduced(self):
        """
        The same value with the rational part taken in [0,1)
        """
        f = self.frac
        return Phase(Fraction(f.numerator % f.denominator, f.denominator), self.alphaSq, self.betaSq)

    def equivalent(self, other) -> bool:
        return self.reduced() == other.reduced()

    def isTrivial(self) -> bool:
        return self.equivalent(Phase())

    def exponent(self, alphaSq=0.0, betaSq=0.0) -> float:
        """
        Real exponent x of e(x), rational part reduced first
        """
        f = self.reduced().frac
        x = float(f)
        if self.alphaSq:
            x += float(self.alphaSq)*alphaSq
        if self.betaSq:
            x += float(self.betaSq)*betaSq
        return x

    def value(self, alphaSq=0.0, betaSq=0.0) -> complex:
        """
        Numerical value of the phase

        In
        ------
        alphaSq: the value of alpha^2
        betaSq: the value of beta^2

        Out
        ------
        complex
        """
        return complex(_np.exp(2j*_np.pi*self.exponent(alphaSq, betaSq)))

    def asText(self) -> str:
        parts = [str(self.frac)]
        if self.alphaSq:
            parts.append(f'{self.alphaSq}*alpha^2')
        if self.betaSq:
            parts.append(f'{self.betaSq}*beta^2')
        return 'e(' + ' + '.join(parts) + ')'


def rootOfUnity(k, q) -> Phase:
    """
    Phase e(k/q)
    """
    return Phase(Fraction(k, q))



##########################################################################
#                                                                        #
#   Exact sums of roots of unity                                         #
#                                                                        #
##########################################################################


_x = _Symbol('x')


@lru_cache(maxsize=None)
def _cyclotomicModulus(q: int):
    return _Poly(_cyclotomic(q, _x), _x)


def rootOfUnitySum(counts: Sequence[int], q: int) -> Tuple[int, ...]:
    """
    Exact value of sum_r counts[r] e(r/q), given as the remainder of the
    polynomial sum_r counts[r] x^r modulo the q-th cyclotomic polynomial

    In
    ------
    counts: integer multiplicities indexed by residue r = 0..q-1
    q: order of the root of unity

    Out
    ------
    remainder: tuple of integer coefficients, lowest degree first. The sum is
        zero iff the tuple is all zeros
    """
    counts = [int(c) for c in counts]
    if len(counts) != q:
        raise ValueError(f'Expected {q} multiplicities, got {len(counts)}.')
    if not any(counts):
        return (0,)
    if q > 1 and len(set(counts)) == 1:
        return (0,)
    poly = _Poly(list(reversed(counts)), _x)
    rem = poly.rem(_cyclotomicModulus(q))
    if rem.is_zero:
        return (0,)
    return tuple(int(c) for c in reversed(rem.all_coeffs()))


def isZeroSum(remainder: Tuple[int, ...]) -> bool:
    return not any(remainder)



##########################################################################
#                                                                        #
#   Certificates and output                                              #
#                                                                        #
##########################################################################


def jsonValue(value):
    """
    Convert numbers and containers of this package to JSON-serializable ones
    """
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, _np.bool_):
        return bool(value)
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Phase):
        return value.asText()
    if isinstance(value, (float, _np.floating, _mp.mpf)):
        return float(value)
    if isinstance(value, (complex, _np.complexfloating, _mp.mpc)):
        z = complex(value)
        return [z.real, z.imag]
    if isinstance(value, _np.integer):
        return int(value)
    if isinstance(value, _np.ndarray):
        return [jsonValue(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): jsonValue(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonValue(v) for v in value]
    raise TypeError(f'Cannot serialize value of type {type(value).__name__}.')


@dataclass
class Certificate:
    """
    Record of a single verified claim

    In
    ------
    claim: short name of the claim
    inputs: the instance the claim is about
    values: the computed quantities
    threshold: the value the decisive quantity is compared with
    passed: outcome
    tolerance: numerical tolerance in force
    tailBudget: accumulated truncation budget
    notes: free text
    """
    claim: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    values: Dict[str, Any] = field(default_factory=dict)
    threshold: Optional[Any] = None
    passed: bool = False
    tolerance: Optional[float] = None
    tailBudget: float = 0.0
    notes: str = ''

    def asDict(self) -> dict:
        return {
            'claim': self.claim,
            'inputs': jsonValue(self.inputs),
            'values': jsonValue(self.values),
            'threshold': jsonValue(self.threshold),
            'pass': bool(self.passed),
            'tolerance': jsonValue(self.tolerance),
            'tail_budget': jsonValue(self.tailBudget),
            'notes': self.notes,
            }


def canonicalJson(payload) -> str:
    return _json.dumps(jsonValue(payload), sort_keys=True, indent=2) + '\n'


def _atomicWrite(path, text):
    directory = _os.path.dirname(_os.path.abspath(path))
    _os.makedirs(directory, exist_ok=True)
    fd, tmp = _tempfile.mkstemp(dir=directory, prefix='.orbifold-', suffix='.tmp')
    try:
        with _os.fdopen(fd, 'w', newline='') as f:
            f.write(text)
        _os.replace(tmp, path)
    except BaseException:
        if _os.path.exists(tmp):
            _os.remove(tmp)
        raise
    _logger.debug('wrote %s', path)


def writeJson(path, payload):
    """
    Write payload as canonical JSON, replacing path atomically
    """
    _atomicWrite(path, canonicalJson(payload))


def writeCsv(path, rows: Iterable[Sequence], header: Sequence[str]):
    """
    Write rows as CSV with the given header, replacing path atomically
    """
    buf = _io.StringIO()
    writer = _csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([jsonValue(v) for v in row])
    _atomicWrite(path, buf.getvalue())
