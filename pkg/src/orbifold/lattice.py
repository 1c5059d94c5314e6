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


import logging as _logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .numberTheory import Convergent, FourSquare, PhaseSelection, abc, checkApproximation
from .sysmsg import FlagError, DomainError, ScopeError, CongruenceError
from .utils import Phase

_logger = _logging.getLogger(__name__)



##########################################################################
#                                                                        #
#   Vectors of G = M x M^ and the Heisenberg cocycle                     #
#                                                                        #
##########################################################################


@dataclass(frozen=True)
class LatticeVector:
    """
    A point (x, [m1], [m2]; xi, [s1], [s2]) of G with M = R x Z_q x Z_q

    The real slots x and xi are integer multiples of alpha (scale='alpha')
    or of beta (scale='beta'); the four class slots are taken mod q.
    """
    x: int
    m: Tuple[int, int]
    xi: int
    s: Tuple[int, int]
    scale: str
    q: int

    def __add__(self, other):
        self._compatible(other)
        return LatticeVector(self.x + other.x, (self.m[0] + other.m[0], self.m[1] + other.m[1]),
                             self.xi + other.xi, (self.s[0] + other.s[0], self.s[1] + other.s[1]),
                             self.scale, self.q)

    def __rmul__(self, k: int):
        return LatticeVector(k*self.x, (k*self.m[0], k*self.m[1]), k*self.xi,
                             (k*self.s[0], k*self.s[1]), self.scale, self.q)

    def __neg__(self):
        return (-1)*self

    def __sub__(self, other):
        return self + (-other)

    def _compatible(self, other):
        if self.scale != other.scale or self.q != other.q:
            raise FlagError('Vectors live on different scales or moduli.')

    def reduced(self):
        q = self.q
        return LatticeVector(self.x, (self.m[0] % q, self.m[1] % q), self.xi,
                             (self.s[0] % q, self.s[1] % q), self.scale, q)

    def same(self, other) -> bool:
        return self.reduced() == other.reduced()

    def classes(self) -> Tuple[int, int, int, int]:
        r = self.reduced()
        return (r.m[0], r.m[1], r.s[0], r.s[1])


def _vec(x, m1, m2, xi, s1, s2, scale, q):
    return LatticeVector(x, (m1, m2), xi, (s1, s2), scale, q)


def cocycle(u: LatticeVector, v: LatticeVector) -> Phase:
    """
    h(u,v) = e(x_u xi_v) e((m_u . s_v)/q)

    The real product is x_u xi_v times alpha^2, beta^2 or alpha beta = 1/q
    according to the scales of u and v.
    """
    if u.q != v.q:
        raise FlagError('Vectors live on different moduli.')
    q = u.q
    real = u.x*v.xi
    frac = Fraction(u.m[0]*v.s[0] + u.m[1]*v.s[1], q)
    if u.scale == v.scale == 'alpha':
        return Phase(frac, alphaSq=real)
    if u.scale == v.scale == 'beta':
        return Phase(frac, betaSq=real)
    return Phase(frac + Fraction(real, q))


def commutator(u: LatticeVector, v: LatticeVector) -> Phase:
    """
    pi_u pi_v pi_u^* pi_v^* = h(u,v) conj(h(v,u))
    """
    return cocycle(u, v)*cocycle(v, u).conj()


def discreteDeltas(fs: FourSquare, q: int) -> Tuple[LatticeVector, LatticeVector]:
    """
    The order q generators delta3, delta4, which do not depend on theta
    """
    p1, p2, p3, p4 = fs.asTuple()
    d3 = _vec(0, p2, -p1, 0, -p4, p3, 'beta', q)
    d4 = _vec(0, p4, -p3, 0, p2, -p1, 'beta', q)
    return d3, d4


def discreteLambda(fs: FourSquare, q: int) -> Dict[Tuple[int, int], Phase]:
    """
    lambda_33, lambda_34, lambda_43, lambda_44 from the cocycle
    """
    d3, d4 = discreteDeltas(fs, q)
    vecs = {3: d3, 4: d4}
    return {(j, k): cocycle(vecs[j], vecs[k]) for j in (3, 4) for k in (3, 4)}



##########################################################################
#                                                                        #
#   The lattices D and D-perp                                            #
#                                                                        #
##########################################################################


@dataclass(frozen=True, eq=False)
class LatticeData:
    """
    Bases of D and of its complement D-perp for a convergent p/q < theta

    In
    ------
    conv: Convergent with p/q < theta and q|q theta - p| < 1
    fs: FourSquare of p
    ps: PhaseSelection for (fs, q)
    eps: (eps1, eps2), basis of D
    delta: (delta1, ..., delta4), basis of D-perp
    deltaPrime: (delta1', ..., delta6'), the dependent generators of D-perp
    lam: lambda_jk = h(delta_j, delta_k) for j, k = 1..4
    mu0: e((p1 p3 + p2 p4)/q)
    """
    conv: Convergent
    fs: FourSquare
    ps: PhaseSelection
    eps: Tuple[LatticeVector, LatticeVector]
    delta: Tuple[LatticeVector, LatticeVector, LatticeVector, LatticeVector]
    deltaPrime: Tuple[LatticeVector, ...]
    lam: Dict[Tuple[int, int], Phase] = field(default_factory=dict)
    mu0: Phase = Phase()

    @property
    def p(self) -> int:
        return self.conv.p

    @property
    def q(self) -> int:
        return self.conv.q

    @property
    def c(self) -> int:
        return self.ps.c

    @property
    def alphaSq(self) -> float:
        return self.conv.alphaSq

    @property
    def betaSq(self) -> float:
        return self.conv.betaSq

    @property
    def alpha(self) -> float:
        return self.conv.alpha

    @property
    def beta(self) -> float:
        return self.conv.beta

    @property
    def covolume(self) -> float:
        """
        |G/D| = alpha^2 q^2
        """
        return self.alphaSq*self.q**2

    @property
    def thetaPrime(self) -> float:
        """
        beta^2 + c/q = (c theta + d)/(q theta - p)
        """
        return self.betaSq + self.c/self.q

    @property
    def thetaPrimePhase(self) -> Phase:
        return Phase(Fraction(self.c, self.q), betaSq=1)

    @property
    def P(self) -> int:
        p1, p2, p3, p4 = self.fs.asTuple()
        return p1*p3 + p2*p4

    @property
    def Q2(self) -> int:
        p1, p2, _, _ = self.fs.asTuple()
        return p1*p1 + p2*p2

    @property
    def C(self) -> int:
        return abc(self.fs).C

    def commutatorD(self) -> Phase:
        """
        Commutator of pi_eps1 and pi_eps2, equal to e(alpha^2 + p/q) = e(theta)
        """
        return commutator(self.eps[0], self.eps[1])

    def lambdaOf(self, j: int, k: int) -> Phase:
        return self.lam[(j, k)]

    def asDict(self) -> dict:
        return {'p': self.p, 'q': self.q, 'fs': self.fs.asTuple(), 'ps': self.ps.asDict(),
                'betaSq': self.betaSq, 'covolume': self.covolume, 'thetaPrime': self.thetaPrime,
                'lambda': {f'{j}{k}': v.reduced() for (j, k), v in sorted(self.lam.items())},
                'mu0': self.mu0.reduced()}


def buildLattices(conv: Convergent, fs: FourSquare, ps: PhaseSelection) -> LatticeData:
    """
    Construct D, D-perp and the cocycle table for p/q < theta

    In
    ------
    conv: Convergent, oriented so that p/q < theta
    fs: FourSquare with fs.p = conv.p
    ps: PhaseSelection with ps.q = conv.q

    Out
    ------
    LatticeData

    Raises ScopeError when q|q theta - p| >= 1 or p/q > theta
    """
    p, q = conv.p, conv.q
    if fs.p != p or ps.q != q:
        raise DomainError(f'Inconsistent inputs: p = {p}, sum of squares {fs.p}, q = {q}, selection q = {ps.q}.')
    if not conv.below:
        raise ScopeError(f'{p}/{q} exceeds theta, orient the convergent first.')
    if not checkApproximation(conv.theta, p, q)[1]:
        raise ScopeError(f'q|q theta - p| >= 1 for {p}/{q}, beta^2 <= 1 and the construction does not apply.')
    p1, p2, p3, p4 = fs.asTuple()
    c = ps.c
    eps = (_vec(1, p1, p2, 0, p3, p4, 'alpha', q),
           _vec(0, -p3, -p4, 1, p1, p2, 'alpha', q))
    d3, d4 = discreteDeltas(fs, q)
    delta = (_vec(1, -c*p1, -c*p2, 0, -c*p3, -c*p4, 'beta', q),
             _vec(0, c*p3, c*p4, 1, -c*p1, -c*p2, 'beta', q),
             d3, d4)
    deltaPrime = (_vec(q, 0, 0, 0, 0, 0, 'beta', q),
                  _vec(0, 0, 0, q, 0, 0, 'beta', q),
                  _vec(-p1, 1, 0, p3, 0, 0, 'beta', q),
                  _vec(-p2, 0, 1, p4, 0, 0, 'beta', q),
                  _vec(-p3, 0, 0, -p1, 1, 0, 'beta', q),
                  _vec(-p4, 0, 0, -p2, 0, 1, 'beta', q))
    lam = {(j + 1, k + 1): cocycle(delta[j], delta[k]) for j in range(4) for k in range(4)}
    mu0 = Phase(Fraction(p1*p3 + p2*p4, q))
    ld = LatticeData(conv, fs, ps, eps, delta, deltaPrime, lam, mu0)
    _logger.debug('built lattices for %d/%d, beta^2 = %.6f', p, q, ld.betaSq)
    return ld


def basisRelations(ld: LatticeData) -> Dict[str, bool]:
    """
    Check the change of basis between delta_j and delta_j' and that every
    delta_j commutes with D

    Out
    ------
    dict of named checks to bool
    """
    p1, p2, p3, p4 = ld.fs.asTuple()
    c, d, q = ld.ps.c, ld.ps.d, ld.q
    d1, d2, d3, d4 = ld.delta
    e1, e2, e3, e4, e5, e6 = ld.deltaPrime
    out = {
        'delta1': d1.same(d*e1 - (c*p1)*e3 - (c*p2)*e4 - (c*p3)*e5 - (c*p4)*e6),
        'delta2': d2.same(d*e2 + (c*p3)*e3 + (c*p4)*e4 - (c*p1)*e5 - (c*p2)*e6),
        'delta3': d3.same(p2*e3 - p1*e4 - p4*e5 + p3*e6),
        'delta4': d4.same(p4*e3 - p3*e4 + p2*e5 - p1*e6),
        'delta1Prime': e1.same(q*d1),
        'delta2Prime': e2.same(q*d2),
        'delta3Prime': e3.same((-p1)*d1 + p3*d2 + (c*p2)*d3 + (c*p4)*d4),
        'delta4Prime': e4.same((-p2)*d1 + p4*d2 - (c*p1)*d3 - (c*p3)*d4),
        'delta5Prime': e5.same((-p3)*d1 - p1*d2 - (c*p4)*d3 + (c*p2)*d4),
        'delta6Prime': e6.same((-p4)*d1 - p2*d2 + (c*p3)*d3 - (c*p1)*d4),
        }
    out['perp'] = all(commutator(e, dj).isTrivial() for e in ld.eps for dj in ld.delta)
    out['order'] = all((q*dj).same(_vec(0, 0, 0, 0, 0, 0, 'beta', q)) for dj in (d3, d4))
    return out


def mCoeffs(ld: LatticeData, n1: int, n2: int, n3: int, n4: int) -> Tuple[int, int, int, int]:
    """
    Classes (m1, m2, m3, m4) mod q of sum_j n_j delta_j
    """
    p1, p2, p3, p4 = ld.fs.asTuple()
    c, q = ld.c, ld.q
    m1 = -c*p1*n1 + c*p3*n2 + p2*n3 + p4*n4
    m2 = -c*p2*n1 + c*p4*n2 - p1*n3 - p3*n4
    m3 = -c*p3*n1 - c*p1*n2 - p4*n3 + p2*n4
    m4 = -c*p4*n1 - c*p2*n2 + p3*n3 - p1*n4
    return (m1 % q, m2 % q, m3 % q, m4 % q)



##########################################################################
#                                                                        #
#   The diophantine system                                               #
#                                                                        #
##########################################################################


def rsCoeffs(fs: FourSquare, ps: PhaseSelection) -> Tuple[int, ...]:
    """
    The eight integers (r1, r2, r3, r4, s1, s2, s3, s4) of the reduced system

        r4 n3 + r2 n4 = -u3 + c s3 n1 + c s1 n2
        r3 n3 + r1 n4 = -u4 + c s4 n1 + c s2 n2   (mod q)
    """
    p1, p2, p3, p4 = fs.asTuple()
    a, b, g = ps.a, ps.b, ps.gamma
    r1 = -p1 - 2*g*p3 + b*p4
    r2 = p2 + 2*a*p4 - b*p3
    r3 = p3 - 2*g*p1 + b*p2
    r4 = -p4 + 2*a*p2 - b*p1
    s1 = p1 - 2*a*p3 - b*p4
    s2 = p2 - 2*g*p4 - b*p3
    s3 = p3 + 2*a*p1 + b*p2
    s4 = p4 + 2*g*p2 + b*p1
    return (r1, r2, r3, r4, s1, s2, s3, s4)


@dataclass(frozen=True)
class DiophantineSolution:
    """
    n3 = c3 + a1 n1 + a2 n2, n4 = c4 + b1 n1 + b2 n2 (mod q)

    r, s are the coefficient tuples of rsCoeffs and detR, detS their two
    determinants, both equal to Delta. notes records an integer disagreement
    that still holds mod q.
    """
    c3: int
    c4: int
    a1: int
    a2: int
    b1: int
    b2: int
    r: Tuple[int, int, int, int]
    s: Tuple[int, int, int, int]
    u3: int
    u4: int
    q: int
    detR: int
    detS: int
    notes: str = ''

    def solve(self, n1: int, n2: int) -> Tuple[int, int]:
        q = self.q
        return ((self.c3 + self.a1*n1 + self.a2*n2) % q, (self.c4 + self.b1*n1 + self.b2*n2) % q)


def systemResidual(ld: LatticeData, u3: int, u4: int, n: Tuple[int, int, int, int]) -> Tuple[int, int]:
    """
    Left-hand sides m3 + 2a m1 + b m2 + u3 and m4 + 2 gamma m2 + b m1 + u4 mod q
    """
    m1, m2, m3, m4 = mCoeffs(ld, *n)
    a, b, g, q = ld.ps.a, ld.ps.b, ld.ps.gamma, ld.q
    return ((m3 + 2*a*m1 + b*m2 + u3) % q, (m4 + 2*g*m2 + b*m1 + u4) % q)


def solveDiophantine(ld: LatticeData, u3: int, u4: int) -> DiophantineSolution:
    """
    Solve the system for (n3, n4) as affine functions of (n1, n2)

    In
    ------
    ld: LatticeData whose PhaseSelection has gcd(Delta, q) = 1
    u3, u4: integers

    Out
    ------
    DiophantineSolution
    """
    ps = ld.ps
    if not ps.coprime:
        raise CongruenceError(f'Delta = {ps.Delta} is not a unit mod {ld.q}, the system has no unique solution.')
    q, c, Dinv = ld.q, ps.c, ps.DeltaInv
    r1, r2, r3, r4, s1, s2, s3, s4 = rsCoeffs(ld.fs, ps)
    detR = r1*r4 - r2*r3
    detS = s1*s4 - s2*s3
    notes = ''
    if not (detR == detS == ps.Delta):
        notes = f'determinants disagree as integers: detR = {detR}, detS = {detS}, Delta = {ps.Delta}'
        _logger.warning('%s', notes)
    if (detR - ps.Delta) % q != 0:
        raise CongruenceError(f'r-determinant {detR} differs from Delta = {ps.Delta} mod {q}.')
    sol = DiophantineSolution(
        c3=(Dinv*(-r1*u3 + r2*u4)) % q,
        c4=(Dinv*(-r4*u4 + r3*u3)) % q,
        a1=(c*Dinv*(r1*s3 - r2*s4)) % q,
        a2=(c*Dinv*(r1*s1 - r2*s2)) % q,
        b1=(c*Dinv*(r4*s4 - r3*s3)) % q,
        b2=(c*Dinv*(r4*s2 - r3*s1)) % q,
        r=(r1, r2, r3, r4), s=(s1, s2, s3, s4), u3=u3, u4=u4, q=q, detR=detR, detS=detS, notes=notes)
    return sol



##########################################################################
#                                                                        #
#   Phases of words in D-perp                                            #
#                                                                        #
##########################################################################


def _half(n: int, q: int) -> Fraction:
    return Fraction(n*(n + q), 2)


def lambdaCapital(ld: LatticeData, n1: int, n2: int, n3: int, n4: int) -> Phase:
    """
    Phase Lambda with pi*_{sum n_j delta_j} = Lambda V4^n4 V3^n3 V2^n2 V1^n1

    Exponents n(n+q)/2 are kept as exact half integers.
    """
    lam, q = ld.lam, ld.q
    return (lam[(1, 3)]**(n1*n3) * lam[(2, 4)]**(n2*n4) * lam[(1, 2)]**(n1*n2) * lam[(3, 4)]**(n3*n4)
            * lam[(1, 1)]**_half(n1, q) * lam[(2, 2)]**_half(n2, q)
            * lam[(3, 3)]**_half(n3, q) * lam[(4, 4)]**_half(n4, q))


def perpWordPhase(fs: FourSquare, q: int, k: int, l: int) -> Phase:
    """
    Lambda restricted to the discrete generators, pi*_{k delta3 + l delta4} = Lambda V4^l V3^k
    """
    lam = discreteLambda(fs, q)
    return lam[(3, 4)]**(k*l) * lam[(3, 3)]**_half(k, q) * lam[(4, 4)]**_half(l, q)


def generatorPhase(lamjj: Phase, q: int) -> Phase:
    """
    The phase in V_j = lambda_jj^{-(q+1)/2} pi*_{delta_j}
    """
    return lamjj**Fraction(-(q + 1), 2)



##########################################################################
#                                                                        #
#   The exact phase polynomial S                                         #
#                                                                        #
##########################################################################


_tChoices = ('zero', 'eps1')


def _tValues(ld: LatticeData, tChoice: str) -> Tuple[int, int, int, int]:
    if tChoice not in _tChoices:
        raise FlagError(f'Flag \'tChoice\' must be one of {_tChoices}, got \'{tChoice}\'.')
    return (0, 0, 0, 0) if tChoice == 'zero' else ld.fs.asTuple()


def shiftU(ld: LatticeData, tChoice: str) -> Tuple[int, int]:
    """
    u3 = t3 + 2a t1 + b t2 and u4 = t4 + 2 gamma t2 + b t1
    """
    t1, t2, t3, t4 = _tValues(ld, tChoice)
    a, b, g = ld.ps.a, ld.ps.b, ld.ps.gamma
    return t3 + 2*a*t1 + b*t2, t4 + 2*g*t2 + b*t1


@dataclass(frozen=True)
class PhasePolynomial:
    """
    S = aP n1^2 + bP n2^2 + 2 cP n1 n2 + dP n1 + eP n2 + K

    with dP = 2 d0P + d1P, eP = 2 e0P + e1P, aPP = aP/q, bPP = bP/q, and
    dCoeffs = (d0, d1, d2), eCoeffs = (e0, e1, e2) the affine forms of
    m1 + t1 and m2 + t2.
    """
    aP: int
    bP: int
    cP: int
    dP: int
    eP: int
    K: int
    d0P: int
    e0P: int
    d1P: int
    e1P: int
    aPP: int
    bPP: int
    dCoeffs: Tuple[int, int, int]
    eCoeffs: Tuple[int, int, int]
    tChoice: str
    q: int

    def evaluate(self, n1: int, n2: int) -> int:
        return self.aP*n1*n1 + self.bP*n2*n2 + 2*self.cP*n1*n2 + self.dP*n1 + self.eP*n2 + self.K

    def congruences(self) -> Dict[str, int]:
        """
        Residues mod q of aP, bP, cP, d0P and e0P, all zero
        """
        q = self.q
        return {'aP': self.aP % q, 'bP': self.bP % q, 'cP': self.cP % q,
                'd0P': self.d0P % q, 'e0P': self.e0P % q}

    def unitaryPhases(self) -> Tuple[Phase, Phase]:
        """
        Phases of W1 = e(a''/2 + d1'/2q) V4^b1 V3^a1 V1 and
        W2 = e(b''/2 + e1'/2q) V4^b2 V3^a2 V2
        """
        q = self.q
        return (Phase(Fraction(self.aPP, 2) + Fraction(self.d1P, 2*q)),
                Phase(Fraction(self.bPP, 2) + Fraction(self.e1P, 2*q)))

    def asDict(self) -> dict:
        return {k: getattr(self, k) for k in ('aP', 'bP', 'cP', 'dP', 'eP', 'K', 'd0P', 'e0P',
                                              'd1P', 'e1P', 'aPP', 'bPP', 'dCoeffs', 'eCoeffs', 'tChoice')}


def _resolve(ld, ds, tChoice):
    u3, u4 = shiftU(ld, tChoice)
    if ds is None:
        return solveDiophantine(ld, u3, u4)
    if (ds.u3 - u3) % ld.q or (ds.u4 - u4) % ld.q:
        raise FlagError(f'The solution was built for u = ({ds.u3},{ds.u4}), tChoice \'{tChoice}\' needs ({u3},{u4}).')
    return ds


def phasePolynomial(ld: LatticeData, ds: Optional[DiophantineSolution] = None, tChoice: str = 'zero') -> PhasePolynomial:
    """
    Accumulate the integer exponent S of the inner product series into the
    quadratic polynomial in (n1, n2)

    In
    ------
    ld: LatticeData
    ds: DiophantineSolution for the shift of tChoice, solved here if None
    tChoice: 'zero' for g = f, 'eps1' for g = pi_eps1 f

    Out
    ------
    PhasePolynomial

    Raises CongruenceError if aP or bP is not divisible by q
    """
    t1, t2, t3, t4 = _tValues(ld, tChoice)
    ds = _resolve(ld, ds, tChoice)
    p1, p2, p3, p4 = ld.fs.asTuple()
    a, b, g, c = ld.ps.a, ld.ps.b, ld.ps.gamma, ld.c
    p, q = ld.p, ld.q
    C, P, Q2 = ld.C, ld.P, ld.Q2
    c3, c4, a1, a2, b1, b2 = ds.c3, ds.c4, ds.a1, ds.a2, ds.b1, ds.b2

    d0 = t1 + p2*c3 + p4*c4
    d1 = -c*p1 + p2*a1 + p4*b1
    d2 = c*p3 + p2*a2 + p4*b2
    e0 = t2 - p1*c3 - p3*c4
    e1 = -c*p2 - p1*a1 - p3*b1
    e2 = c*p4 - p1*a2 - p3*b2

    aP = (2*a*d1*d1 + 2*b*d1*e1 + 2*g*e1*e1 + 2*c*C*a1 + 2*Q2*a1*b1
          + P*(c*c - a1*a1 + b1*b1) - p*a1*b1)
    bP = (2*a*d2*d2 + 2*b*d2*e2 + 2*g*e2*e2 - 2*c*C*b2 + 2*Q2*a2*b2
          + P*(-c*c - a2*a2 + b2*b2) - p*a2*b2)
    cP = (2*a*d1*d2 + b*(d1*e2 + d2*e1) + 2*g*e1*e2 + c*C*(a2 - b1)
          + Q2*(c*c + a1*b2 + a2*b1) + P*(b1*b2 - a1*a2) - p*a2*b1)
    d0P = (t3*d1 + t4*e1 + 2*a*d0*d1 + b*(d0*e1 + d1*e0) + 2*g*e0*e1 + c*C*c3
           + Q2*(c3*b1 + c4*a1) + P*(b1*c4 - a1*c3) - p*c3*b1)
    e0P = (t3*d2 + t4*e2 + 2*a*d0*d2 + b*(d0*e2 + d2*e0) + 2*g*e0*e2 - c*C*c4
           + Q2*(c3*b2 + c4*a2) + P*(b2*c4 - c3*a2) - p*c3*b2)
    d1P = P*(q*c*c - a1*q + b1*q) + p*a1*b1
    e1P = P*(-q*c*c - a2*q + b2*q) + p*a2*b2
    K = (-2*t3*t1 - 2*t4*t2 + 2*t3*d0 + 2*t4*e0 + 2*a*d0*d0 + 2*b*d0*e0 + 2*g*e0*e0
         + 2*Q2*c3*c4 + P*(-c3*(c3 + q) + c4*(c4 + q)))

    if aP % q or bP % q:
        raise CongruenceError(f'a\' = {aP} or b\' = {bP} is not divisible by q = {q}.')
    pp = PhasePolynomial(aP, bP, cP, 2*d0P + d1P, 2*e0P + e1P, K, d0P, e0P, d1P, e1P,
                         aP//q, bP//q, (d0, d1, d2), (e0, e1, e2), tChoice, q)
    bad = {k: v for k, v in pp.congruences().items() if v}
    if bad:
        raise CongruenceError(f'Congruences fail mod {q}: {bad}.')
    return pp


def phaseExponent(ld: LatticeData, ds: Optional[DiophantineSolution], tChoice: str, n1: int, n2: int) -> int:
    """
    S(n1, n2) = 2G + L - pR evaluated term by term from n3, n4 and m1, m2
    """
    t1, t2, t3, t4 = _tValues(ld, tChoice)
    ds = _resolve(ld, ds, tChoice)
    p1, p2, p3, p4 = ld.fs.asTuple()
    a, b, g, c = ld.ps.a, ld.ps.b, ld.ps.gamma, ld.c
    p, q = ld.p, ld.q
    C, P, Q2 = ld.C, ld.P, ld.Q2
    # unreduced affine forms, S depends on the representatives
    n3 = ds.c3 + ds.a1*n1 + ds.a2*n2
    n4 = ds.c4 + ds.b1*n1 + ds.b2*n2
    D = -c*p1*n1 + c*p3*n2 + p2*n3 + p4*n4 + t1
    E = -c*p2*n1 + c*p4*n2 - p1*n3 - p3*n4 + t2
    G = -t3*t1 - t4*t2 + t3*D + t4*E + a*D*D + b*D*E + g*E*E
    L = (2*c*C*(n1*n3 - n2*n4) + 2*Q2*(c*c*n1*n2 + n3*n4)
         + P*(c*c*n1*(n1 + q) - c*c*n2*(n2 + q) - n3*(n3 + q) + n4*(n4 + q)))
    R = (2*ds.c3*(ds.b1*n1 + ds.b2*n2) + 2*ds.b1*ds.a2*n1*n2
         + ds.a2*ds.b2*n2*(n2 - 1) + ds.a1*ds.b1*n1*(n1 - 1))
    return 2*G + L - p*R
