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


import hashlib as _hashlib
import json as _json
import logging as _logging
import math as _math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath as _mp
from sympy import Rational as _Rational
from sympy import continued_fraction_iterator as _cfIterator
from sympy.core.intfunc import igcdex as _igcdex
from sympy import primefactors as _primefactors

from .constant import constant
from .sysmsg import FlagError, DomainError, PrecisionError, ScopeError

_logger = _logging.getLogger(__name__)



##########################################################################
#                                                                        #
#   Irrational numbers and their continued fractions                     #
#                                                                        #
##########################################################################


def _cfValue(coeffs: Sequence[int]) -> Fraction:
    """
    Exact value of the finite continued fraction [a0; a1, ..., aK]
    """
    value = Fraction(coeffs[-1])
    for a in reversed(coeffs[:-1]):
        value = a + 1/value
    return value


def _cfOfRational(x: Fraction) -> List[int]:
    return [int(a) for a in _cfIterator(_Rational(x.numerator, x.denominator))]


class Irrational:

    def __init__(self, cf=None, period=None, decimal=None, digits=None):
        """
        An irrational theta in (0,1) known either through its continued
        fraction or through a decimal approximation of stated accuracy

        In
        ------
        cf: leading CF coefficients [0; a1, a2, ...]
        period: optional repeating block appended indefinitely after cf
        decimal: decimal string (or exact Fraction) approximating theta
        digits: theta lies within 10^-digits of decimal, default is the number
            of digits after the decimal point
        """
        if (cf is None) == (decimal is None):
            raise FlagError('Exactly one of \'cf\' and \'decimal\' must be given.')
        if period is not None and cf is None:
            raise FlagError('Flag \'period\' needs \'cf\'.')
        self._cf = None
        self._period = None
        self._decimal = None
        self._digits = None
        self._decimalCoeffs = None
        if cf is not None:
            cf = [int(a) for a in cf]
            period = None if period is None else [int(a) for a in period]
            if not cf or cf[0] != 0:
                raise DomainError('theta must lie in (0,1): the continued fraction must start with 0.')
            if period is not None and not period:
                raise DomainError('The repeating block must be nonempty.')
            if any(a < 1 for a in cf[1:] + (period or [])):
                raise DomainError('Partial quotients after a0 must be positive.')
            if len(cf) < 2 and period is None:
                raise DomainError('At least one partial quotient after a0 is needed.')
            self._cf = cf
            self._period = period
        else:
            if isinstance(decimal, Fraction):
                if digits is None:
                    raise FlagError('Flag \'digits\' is required for an exact fraction.')
                value = decimal
            else:
                text = str(decimal).strip()
                try:
                    value = Fraction(text)
                except ValueError:
                    raise DomainError(f'Cannot read \'{decimal}\' as a decimal number.')
                if digits is None:
                    if 'e' in text.lower() or '.' not in text:
                        raise FlagError('Flag \'digits\' is required for this decimal.')
                    digits = len(text.split('.')[1])
            digits = int(digits)
            if digits < 1:
                raise DomainError('digits must be positive.')
            eps = Fraction(1, 10**digits)
            if not (0 < value - eps and value + eps < 1):
                raise DomainError('theta must lie in (0,1) with the stated accuracy.')
            self._decimal = value
            self._digits = digits

    # ----- coefficients -----

    @property
    def isPeriodic(self) -> bool:
        return self._period is not None

    @property
    def depth(self) -> Optional[int]:
        """
        Number of CF coefficients the input determines, None if unlimited
        """
        if self._cf is not None:
            return None if self.isPeriodic else len(self._cf)
        return len(self._fromDecimal())

    def _fromDecimal(self) -> List[int]:
        if self._decimalCoeffs is None:
            lo, hi = self.enclosure()
            cfLo, cfHi = _cfOfRational(lo), _cfOfRational(hi)
            common = []
            # the last coefficient of a terminating expansion is ambiguous
            for j in range(min(len(cfLo), len(cfHi)) - 1):
                if cfLo[j] != cfHi[j]:
                    break
                common.append(cfLo[j])
            self._decimalCoeffs = common
            _logger.debug('decimal %s determines %d CF coefficients', self._decimal, len(common))
        return self._decimalCoeffs

    def coefficients(self, count: int) -> List[int]:
        """
        First count CF coefficients a0, ..., a_{count-1}

        In
        ------
        count: number of coefficients

        Out
        ------
        list of int

        Raises PrecisionError when the input does not determine them
        """
        if count < 1:
            raise DomainError('count must be positive.')
        if self._cf is not None:
            if self.isPeriodic:
                coeffs = list(self._cf)
                while len(coeffs) < count:
                    coeffs.extend(self._period)
                return coeffs[:count]
            known = self._cf
        else:
            known = self._fromDecimal()
        if count > len(known):
            raise PrecisionError(f'theta determines only {len(known)} CF coefficients, {count} requested.')
        return list(known[:count])

    def enclosure(self) -> Tuple[Fraction, Fraction]:
        """
        Exact interval (lo, hi) containing theta

        For CF input theta = [a0; ..., aK, x] with x > 1, so theta lies strictly
        between [a0; ..., aK] and [a0; ..., aK + 1]. For decimal input the
        interval is closed, [decimal - 10^-digits, decimal + 10^-digits].
        """
        if self._cf is not None:
            if self.isPeriodic:
                coeffs = self.coefficients(max(constant.enclosureDepth, len(self._cf)))
            else:
                coeffs = list(self._cf)
            x1 = _cfValue(coeffs)
            x2 = _cfValue(coeffs[:-1] + [coeffs[-1] + 1])
            return min(x1, x2), max(x1, x2)
        eps = Fraction(1, 10**self._digits)
        return self._decimal - eps, self._decimal + eps

    def midpoint(self, dps: Optional[int] = None):
        """
        Midpoint of the enclosure as an mpmath number
        """
        lo, hi = self.enclosure()
        mid = (lo + hi)/2
        with _mp.workdps(dps or constant.workingDigits):
            return _mp.mpf(mid.numerator)/mid.denominator

    def reflect(self):
        """
        The irrational 1 - theta
        """
        if self._cf is None:
            return Irrational(decimal=1 - self._decimal, digits=self._digits)
        coeffs = self.coefficients(constant.enclosureDepth) if self.isPeriodic else list(self._cf)
        a1 = coeffs[1]
        if a1 > 1:
            return Irrational(cf=[0, 1, a1 - 1] + coeffs[2:])
        if len(coeffs) < 3:
            raise PrecisionError('Not enough CF coefficients to reflect theta.')
        return Irrational(cf=[0, 1 + coeffs[2]] + coeffs[3:])

    def spec(self) -> dict:
        if self._cf is not None:
            out = {'cf': list(self._cf)}
            if self.isPeriodic:
                out['period'] = list(self._period)
            return out
        return {'decimal': str(self._decimal), 'digits': self._digits}

    def digest(self) -> str:
        text = _json.dumps(self.spec(), sort_keys=True)
        return _hashlib.sha256(text.encode()).hexdigest()

    def __repr__(self):
        return f'Irrational({self.spec()})'



##########################################################################
#                                                                        #
#   Convergents                                                          #
#                                                                        #
##########################################################################


@dataclass(frozen=True)
class Convergent:
    """
    A rational approximant p/q of theta

    In
    ------
    theta: the Irrational
    p, q: numerator and denominator, gcd(p,q) = 1
    index: position in the CF convergent sequence, None for a free p/q
    reflected: True if theta was replaced by 1 - theta and p by q - p
    """
    theta: Irrational
    p: int
    q: int
    index: Optional[int] = None
    reflected: bool = False

    def _errorMp(self):
        with _mp.workdps(constant.workingDigits):
            return self.q*self.theta.midpoint() - self.p

    def errorBounds(self) -> Tuple[Fraction, Fraction]:
        """
        Exact interval containing q*theta - p
        """
        lo, hi = self.theta.enclosure()
        return self.q*lo - self.p, self.q*hi - self.p

    @property
    def below(self) -> bool:
        """
        Decide p/q < theta exactly
        """
        lo, hi = self.errorBounds()
        if lo >= 0 and hi > 0:
            return True
        if hi <= 0 and lo < 0:
            return False
        raise PrecisionError(f'Cannot decide the side of {self.p}/{self.q} relative to theta.')

    @property
    def error(self) -> float:
        return float(self._errorMp())

    @property
    def alphaSq(self) -> float:
        """
        theta - p/q
        """
        with _mp.workdps(constant.workingDigits):
            return float(self._errorMp()/self.q)

    @property
    def alpha(self) -> float:
        if not self.below:
            raise ScopeError('alpha needs p/q < theta, orient the convergent first.')
        with _mp.workdps(constant.workingDigits):
            return float(_mp.sqrt(self._errorMp()/self.q))

    @property
    def betaSq(self) -> float:
        """
        1/(q|q theta - p|)
        """
        with _mp.workdps(constant.workingDigits):
            return float(1/(self.q*abs(self._errorMp())))

    @property
    def beta(self) -> float:
        with _mp.workdps(constant.workingDigits):
            return float(1/_mp.sqrt(self.q*abs(self._errorMp())))

    def betaSqBounds(self) -> Tuple[Fraction, Fraction]:
        """
        Exact interval containing beta^2
        """
        lo, hi = self.errorBounds()
        if lo <= 0 <= hi:
            raise PrecisionError(f'Cannot bound beta^2 away from infinity for {self.p}/{self.q}.')
        a, b = sorted((abs(lo), abs(hi)))
        return 1/(self.q*b), 1/(self.q*a)

    def asDict(self) -> dict:
        return {'p': self.p, 'q': self.q, 'index': self.index, 'reflected': self.reflected}


def convergents(theta: Irrational, count: int) -> List[Convergent]:
    """
    The first count CF convergents p_n/q_n of theta, starting at p_0/q_0 = 0/1

    In
    ------
    theta: Irrational
    count: number of convergents

    Out
    ------
    list of Convergent
    """
    a = theta.coefficients(count)
    out = []
    pPrev, qPrev = 1, 0
    p, q = a[0], 1
    out.append(Convergent(theta, p, q, 0))
    for n in range(1, count):
        pPrev, p = p, a[n]*p + pPrev
        qPrev, q = q, a[n]*q + qPrev
        out.append(Convergent(theta, p, q, n))
    return out


def convergentDeterminant(c0: Convergent, c1: Convergent) -> int:
    """
    q_n p_{n-1} - p_n q_{n-1} for consecutive convergents, always +-1
    """
    return c1.q*c0.p - c1.p*c0.q


def checkApproximation(theta: Irrational, p: int, q: int) -> Tuple[bool, bool]:
    """
    Decide |theta - p/q| < 1/q^2 and q|q theta - p| < 1 exactly

    In
    ------
    theta: Irrational
    p, q: the rational, q >= 1 and gcd(p,q) = 1

    Out
    ------
    (bool, bool)

    Raises PrecisionError when the enclosure of theta cannot settle either
    """
    if q < 1 or _math.gcd(p, q) != 1:
        raise DomainError(f'Need q >= 1 and gcd(p,q) = 1, got {p}/{q}.')
    lo, hi = theta.enclosure()
    eLo, eHi = q*lo - p, q*hi - p
    absHi = max(abs(eLo), abs(eHi))
    absLo = Fraction(0) if eLo <= 0 <= eHi else min(abs(eLo), abs(eHi))

    def decide(low, high, bound, label):
        if high < bound:
            return True
        if low >= bound:
            return False
        raise PrecisionError(f'{label} cannot be decided for {p}/{q} at the available precision.')

    first = decide(absLo/q, absHi/q, Fraction(1, q*q), '|theta - p/q| < 1/q^2')
    second = decide(q*absLo, q*absHi, Fraction(1), 'q|q theta - p| < 1')
    return first, second


def orientConvergent(conv: Convergent) -> Convergent:
    """
    Return conv itself if p/q < theta, else the convergent (q - p)/q of
    1 - theta with reflected set
    """
    if conv.below:
        return conv
    _logger.info('p/q = %d/%d exceeds theta, switching to 1 - theta', conv.p, conv.q)
    return Convergent(conv.theta.reflect(), conv.q - conv.p, conv.q, conv.index, not conv.reflected)



##########################################################################
#                                                                        #
#   Four squares and the ABC relation                                    #
#                                                                        #
##########################################################################


@dataclass(frozen=True)
class FourSquare:
    p1: int
    p2: int
    p3: int
    p4: int

    @property
    def p(self) -> int:
        return self.p1**2 + self.p2**2 + self.p3**2 + self.p4**2

    def asTuple(self) -> Tuple[int, int, int, int]:
        return (self.p1, self.p2, self.p3, self.p4)


@dataclass(frozen=True)
class AbcTriple:
    A: int
    B: int
    C: int

    def identity(self) -> int:
        """
        A^2 + 4B^2 + 4C^2, equal to p^2
        """
        return self.A**2 + 4*self.B**2 + 4*self.C**2


def fourSquare(p: int) -> FourSquare:
    """
    Lexicographically smallest p1 >= p2 >= p3 >= p4 >= 0 with sum of squares p

    In
    ------
    p: nonnegative integer

    Out
    ------
    FourSquare
    """
    if p < 0:
        raise DomainError('p must be nonnegative.')
    isqrt = _math.isqrt
    # p1^2 >= p/4 for a nonincreasing tuple
    p1 = isqrt(p//4)
    while 4*p1*p1 < p:
        p1 += 1
    while p1*p1 <= p:
        r1 = p - p1*p1
        p2 = isqrt(r1//3)
        while 3*p2*p2 < r1:
            p2 += 1
        while p2 <= p1 and p2*p2 <= r1:
            r2 = r1 - p2*p2
            p3 = isqrt(r2//2)
            while 2*p3*p3 < r2:
                p3 += 1
            while p3 <= p2 and p3*p3 <= r2:
                r3 = r2 - p3*p3
                p4 = isqrt(r3)
                if p4*p4 == r3 and p4 <= p3:
                    return FourSquare(p1, p2, p3, p4)
                p3 += 1
            p2 += 1
        p1 += 1
    raise AssertionError(f'No four square decomposition found for {p}.')


def abc(fs: FourSquare) -> AbcTriple:
    """
    A = p1^2 - p2^2 + p3^2 - p4^2, B = p1p2 + p3p4, C = p1p4 - p2p3
    """
    p1, p2, p3, p4 = fs.asTuple()
    return AbcTriple(p1*p1 - p2*p2 + p3*p3 - p4*p4, p1*p2 + p3*p4, p1*p4 - p2*p3)



##########################################################################
#                                                                        #
#   Coprime witnesses and the phase selection                            #
#                                                                        #
##########################################################################


_methods = ('scan', 'constructive')


def _checkMethod(method):
    if method not in _methods:
        raise FlagError(f'Flag \'method\' must be one of {_methods}, got \'{method}\'.')


def coprimeShift(p: int, r: int, q: int, method: str = 'scan') -> int:
    """
    An integer k with gcd(p + k r, q) = 1

    In
    ------
    p, r, q: integers with gcd(p,r,q) = 1 and q >= 1
    method: 'scan' for the smallest k >= 0, 'constructive' for the product of
        prime divisors

    Out
    ------
    k: int
    """
    _checkMethod(method)
    if q < 1 or _math.gcd(_math.gcd(p, r), q) != 1:
        raise DomainError(f'coprimeShift needs q >= 1 and gcd(p,r,q) = 1, got ({p},{r},{q}).')
    if method == 'scan':
        # gcd(p + k r, q) is periodic in k with period q
        k = next(k for k in range(q) if _math.gcd(p + k*r, q) == 1)
    else:
        primes = [t for t in _primefactors(q) if r % t != 0]
        if not primes:
            k = 0
        else:
            roots = [(-p*pow(r, -1, t)) % t for t in primes]
            k1 = roots[0]
            if len(primes) == 1:
                k = k1 + 1
            else:
                prod = 1
                for t, kj in zip(primes[1:], roots[1:]):
                    prod *= t//_math.gcd(k1 - kj, t)
                k = k1 + prod
    if _math.gcd(p + k*r, q) != 1:
        raise AssertionError(f'coprimeShift produced k = {k} failing the gcd check.')
    _logger.debug('coprimeShift(%d,%d,%d) = %d by %s', p, r, q, k, method)
    return k


def quadraticCoprime(X: int, Y: int, Z: int, method: str = 'scan') -> int:
    """
    An integer k with gcd(kX + (k^2 - 1)Y, Z) = 1

    In
    ------
    X, Y, Z: integers with gcd(X,Y,Z) = 1 and Z >= 1
    method: 'scan' or 'constructive'

    Out
    ------
    k: int
    """
    _checkMethod(method)
    if Z < 1 or _math.gcd(_math.gcd(X, Y), Z) != 1:
        raise DomainError(f'quadraticCoprime needs Z >= 1 and gcd(X,Y,Z) = 1, got ({X},{Y},{Z}).')
    value = lambda k: k*X + (k*k - 1)*Y
    if method == 'scan':
        k = next(k for k in range(Z) if _math.gcd(value(k), Z) == 1)
    else:
        k = 1
        for t in _primefactors(Z):
            if Y % t != 0:
                k *= t
    if _math.gcd(value(k), Z) != 1:
        raise AssertionError(f'quadraticCoprime produced k = {k} failing the gcd check.')
    _logger.debug('quadraticCoprime(%d,%d,%d) = %d by %s', X, Y, Z, k, method)
    return k


def bezout(p: int, q: int) -> Tuple[int, int]:
    """
    Integers (c, d) with c p + d q = 1
    """
    c, d, g = _igcdex(p, q)
    if g != 1:
        raise DomainError(f'gcd({p},{q}) = {g} is not 1.')
    return int(c), int(d)


def determinant(abcT: AbcTriple, a: int, b: int, gamma: int) -> int:
    """
    Delta = bA + 2(gamma - a)B + (1 - b^2 + 4 a gamma)C
    """
    return b*abcT.A + 2*(gamma - a)*abcT.B + (1 - b*b + 4*a*gamma)*abcT.C


@dataclass(frozen=True)
class PhaseSelection:
    """
    The integers (a, b, gamma) of the Gaussian phase together with the
    determinant Delta, its inverse mod q and a Bezout pair c p + d q = 1

    DeltaInv is None for a selection built by override() whose Delta is not
    a unit mod q.
    """
    a: int
    b: int
    gamma: int
    Delta: int
    DeltaInv: Optional[int]
    c: int
    d: int
    q: int
    k: Optional[int] = None
    branch: str = 'override'

    @property
    def coprime(self) -> bool:
        return self.DeltaInv is not None

    @classmethod
    def override(cls, a: int, b: int, gamma: int, fs: FourSquare, q: int):
        """
        Selection with prescribed (a, b, gamma), used for negative controls
        """
        c, d = bezout(fs.p, q)
        Delta = determinant(abc(fs), a, b, gamma)
        inv = _inverse(Delta, q) if _math.gcd(Delta, q) == 1 else None
        return cls(a, b, gamma, Delta, inv, c, d, q)

    def asDict(self) -> dict:
        return {'a': self.a, 'b': self.b, 'gamma': self.gamma, 'Delta': self.Delta,
                'DeltaInv': self.DeltaInv, 'c': self.c, 'd': self.d, 'k': self.k, 'branch': self.branch}


def _inverse(x: int, q: int) -> int:
    if q == 1:
        return 0
    return pow(x, -1, q)


def selectPhase(fs: FourSquare, q: int, method: str = 'scan') -> PhaseSelection:
    """
    Choose (a, b, gamma) with gcd(Delta, q) = 1

    Odd q uses b = 2ka, gamma = k^2 a and even q uses b = 1 + 2ka, gamma = k^2 a,
    with k and a produced by quadraticCoprime and coprimeShift.

    In
    ------
    fs: FourSquare of p with gcd(p,q) = 1
    q: positive integer
    method: witness search, 'scan' or 'constructive'

    Out
    ------
    PhaseSelection
    """
    p = fs.p
    if q < 1 or _math.gcd(p, q) != 1:
        raise DomainError(f'selectPhase needs gcd(p,q) = 1, got p = {p}, q = {q}.')
    t = abc(fs)
    A, B, C = t.A, t.B, t.C
    if q % 2 == 1:
        k = quadraticCoprime(A, B, _math.gcd(q, C), method)
        betaK = k*A + (k*k - 1)*B
        a = coprimeShift(C, 2*betaK, q, method)
        b, gamma = 2*k*a, k*k*a
        Delta = 2*a*betaK + C
        branch = 'odd'
    else:
        k = quadraticCoprime(A - 2*C, B, _math.gcd(q, A), method)
        betaK = k*(A - 2*C) + (k*k - 1)*B
        a = coprimeShift(A, 2*betaK, q, method)
        b, gamma = 1 + 2*k*a, k*k*a
        Delta = 2*a*betaK + A
        branch = 'even'
    if Delta != determinant(t, a, b, gamma):
        raise AssertionError('Branch value of Delta disagrees with the general formula.')
    if _math.gcd(Delta, q) != 1:
        raise AssertionError(f'Delta = {Delta} is not a unit mod {q}.')
    c, d = bezout(p, q)
    ps = PhaseSelection(a, b, gamma, Delta, _inverse(Delta, q), c, d, q, k, branch)
    _logger.debug('selectPhase p=%d q=%d -> %s', p, q, ps)
    return ps



##########################################################################
#                                                                        #
#   Triples (N, 1, M) in the continued fraction                          #
#                                                                        #
##########################################################################


@dataclass(frozen=True)
class GdeltaHit:
    """
    A position n with (a_n, a_{n+1}, a_{n+2}) = (N, 1, M)

    betaSqLow, betaSqHigh enclose beta^2 of p_n/q_n exactly, lower and upper
    are the two sides of 1 + 1/(M+1) < beta^2 < 1 + 1/M + 1/N
    """
    index: int
    betaSq: float
    lower: Fraction
    upper: Fraction
    betaSqLow: Fraction
    betaSqHigh: Fraction
    satisfied: bool


def gdeltaScan(cf: Sequence[int], N: int, M: int) -> List[GdeltaHit]:
    """
    Scan a CF coefficient list for the triple (N, 1, M) and bound beta^2 of
    the convergent in front of each occurrence

    beta^2 = xi_{n+1} + q_{n-1}/q_n, where xi_{n+1} = [a_{n+1}; a_{n+2}, ..., x]
    and the unknown tail x ranges over (1, infinity).

    In
    ------
    cf: CF coefficients [a0; a1, ...]
    N, M: positive integers

    Out
    ------
    list of GdeltaHit, empty when the triple does not occur
    """
    if N < 1 or M < 1:
        raise DomainError('N and M must be positive.')
    cf = [int(a) for a in cf]
    qs = [1]
    if len(cf) > 1:
        qs.append(cf[1])
    for n in range(2, len(cf)):
        qs.append(cf[n]*qs[-1] + qs[-2])
    lower = 1 + Fraction(1, M + 1)
    upper = 1 + Fraction(1, M) + Fraction(1, N)
    hits = []
    for n in range(1, len(cf) - 2):
        if (cf[n], cf[n + 1], cf[n + 2]) != (N, 1, M):
            continue
        tail = cf[n + 1:]
        xi1 = _cfValue(tail)
        xi2 = _cfValue(tail[:-1] + [tail[-1] + 1])
        ratio = Fraction(qs[n - 1], qs[n])
        lo, hi = sorted((xi1 + ratio, xi2 + ratio))
        ok = lo >= lower and hi <= upper
        hits.append(GdeltaHit(n, float((lo + hi)/2), lower, upper, lo, hi, ok))
        _logger.debug('triple at n=%d: beta^2 in (%s, %s), ok=%s', n, float(lo), float(hi), ok)
    return hits
