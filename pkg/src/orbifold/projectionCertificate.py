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

This module assembles the coefficient series of the inner products and
turns the analytic estimates into certificates. Every bound is an l^1 bound
on coefficients, operator norms are never computed. The pipeline can be
loaded via

>>> from orbifold.projectionCertificate import prepare, certifyAll

"""

import logging as _logging
import math as _math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath as _mp
import numpy as _np

from .constant import constant
from .finiteWeil import (clockShiftRep, finiteWeilCertificate, gaussianPhi, operatorMatrix,
                         scalarityCheck, w0)
from .lattice import (DiophantineSolution, LatticeData, PhasePolynomial, basisRelations,
                      buildLattices, phasePolynomial, shiftU, solveDiophantine)
from .numberTheory import (Convergent, Irrational, PhaseSelection, checkApproximation,
                           convergents, fourSquare, orientConvergent, selectPhase)
from .sysmsg import CongruenceError, DomainError, FlagError, ScopeError
from .theta import psi, rawInvertibilityBound, rhoNorms, theta, thetaImag
from .utils import Certificate, Phase

_logger = _logging.getLogger(__name__)



##########################################################################
#                                                                        #
#   Coefficient series                                                   #
#                                                                        #
##########################################################################


_algebras = ('D', 'Dperp')


@dataclass
class NCSeries:
    """
    A finite series sum_{(m,n)} weight * phase * second^n first^m

    In
    ------
    coeffs: {(m,n): (weight, Phase)}, weight >= 0
    labels: (first, second) generator names
    commutation: first second = commutation * second first
    algebra: 'D' or 'Dperp', None for an untagged series
    alphaSq, betaSq: values used to evaluate the phases
    tailBudget: l^1 mass of the omitted coefficients
    prefactor: scalar and word data multiplying the series on the left
    """
    coeffs: Dict[Tuple[int, int], Tuple[float, Phase]]
    labels: Tuple[str, str]
    commutation: Phase
    algebra: Optional[str] = None
    alphaSq: float = 0.0
    betaSq: float = 0.0
    tailBudget: float = 0.0
    prefactor: Dict[str, object] = field(default_factory=dict)

    def value(self, key: Tuple[int, int]) -> complex:
        w, ph = self.coeffs[key]
        return w*ph.value(self.alphaSq, self.betaSq)

    def l1(self) -> float:
        return _math.fsum(w for w, _ in self.coeffs.values())

    def _like(self, coeffs):
        return NCSeries(coeffs, self.labels, self.commutation, self.algebra,
                        self.alphaSq, self.betaSq, self.tailBudget, dict(self.prefactor))

    def rows(self) -> List[Tuple[int, int, float, float, float]]:
        """
        (m, n, re, im, modulus) sorted by (m, n)
        """
        out = []
        for key in sorted(self.coeffs):
            z = self.value(key)
            out.append((key[0], key[1], z.real, z.imag, abs(z)))
        return out


def _tail(rho: float, start: int) -> float:
    """
    sum_{j >= start} exp(-pi rho j^2/2), start >= 0
    """
    r = _math.exp(-_np.pi*rho*(2*start + 1)/2)
    return _math.exp(-_np.pi*rho*start*start/2)/(1 - r)


def _boxComplement(innerM, tailM, innerN, tailN) -> float:
    return (innerM + tailM)*(innerN + tailN) - innerM*innerN


def gaussianSeries(commutation: Phase, cutoff: int, rho: float, labels: Tuple[str, str],
                   algebra: Optional[str], alphaSq: float = 0.0, betaSq: float = 0.0) -> NCSeries:
    """
    sum exp(-pi rho (m^2+n^2)/2) commutation^{mn/2} second^n first^m on |m|,|n| <= cutoff

    In
    ------
    commutation: Phase with first second = commutation * second first, its
        value must equal e(rho) up to an integer
    cutoff: positive integer
    rho: the real number of the Gaussian weight
    labels, algebra: generator names and algebra tag

    Out
    ------
    NCSeries with its l^1 tail budget
    """
    if cutoff < 1:
        raise DomainError('cutoff must be positive.')
    coeffs = {}
    for m in range(-cutoff, cutoff + 1):
        for n in range(-cutoff, cutoff + 1):
            w = _math.exp(-_np.pi*rho*(m*m + n*n)/2)
            if w >= constant.floor:
                coeffs[(m, n)] = (w, commutation**Fraction(m*n, 2))
    inner = 1 + 2*_math.fsum(_math.exp(-_np.pi*rho*j*j/2) for j in range(1, cutoff + 1))
    tail1 = 2*_tail(rho, cutoff + 1)
    return NCSeries(coeffs, labels, commutation, algebra, alphaSq, betaSq,
                    tailBudget=_boxComplement(inner, tail1, inner, tail1))


def seriesInnerFF(ld: LatticeData, cutoff: Optional[int] = None) -> NCSeries:
    """
    <f,f>_Dperp = sum exp(-pi beta^2 (m^2+n^2)/2) e(beta^2 mn/2) W2^n W1^m
    """
    cutoff = cutoff or constant.cutoff
    return gaussianSeries(Phase(betaSq=1), cutoff, ld.betaSq, ('W1', 'W2'), 'Dperp',
                          ld.alphaSq, ld.betaSq)


def seriesInnerFU1F(ld: LatticeData, ds: DiophantineSolution, pp: PhasePolynomial,
                    cutoff: Optional[int] = None) -> NCSeries:
    """
    The series B in <f,U1 f>_Dperp = mu0^{1/2} e(K/2q) V4^c4 V3^c3 B, with

        B = sum exp(-pi ((alpha + beta m)^2 + beta^2 n^2)/2) e(beta^2 mn/2) e(-n/2q) W2^n W1^m

    In
    ------
    ld: LatticeData
    ds, pp: DiophantineSolution and PhasePolynomial built for tChoice 'eps1'
    cutoff: positive integer

    Out
    ------
    NCSeries, the prefactor data under 'mu0Half', 'K', 'c3', 'c4'
    """
    cutoff = cutoff or constant.cutoff
    if pp.tChoice != 'eps1':
        raise FlagError(f'<f,U1 f> needs tChoice \'eps1\', got \'{pp.tChoice}\'.')
    u3, u4 = shiftU(ld, 'eps1')
    q = ld.q
    if (ds.u3 - u3) % q or (ds.u4 - u4) % q:
        raise FlagError('The diophantine solution was not built for tChoice \'eps1\'.')
    if cutoff < 1:
        raise DomainError('cutoff must be positive.')
    alpha, beta, b2 = ld.alpha, ld.beta, ld.betaSq
    coeffs = {}
    for m in range(-cutoff, cutoff + 1):
        for n in range(-cutoff, cutoff + 1):
            w = _math.exp(-_np.pi*((alpha + beta*m)**2 + b2*n*n)/2)
            if w >= constant.floor:
                coeffs[(m, n)] = (w, Phase(Fraction(-n, 2*q), betaSq=Fraction(m*n, 2)))
    # beta > alpha gives (beta|m| - alpha)^2 >= beta^2 (|m| - 1)^2
    innerM = _math.fsum(_math.exp(-_np.pi*(alpha + beta*m)**2/2) for m in range(-cutoff, cutoff + 1))
    innerN = 1 + 2*_math.fsum(_math.exp(-_np.pi*b2*n*n/2) for n in range(1, cutoff + 1))
    tailM = 2*_tail(b2, cutoff)
    tailN = 2*_tail(b2, cutoff + 1)
    P = ld.P
    prefactor = {'mu0Half': Phase(Fraction(P, 2*q)), 'K': Phase(Fraction(pp.K, 2*q)),
                 'c3': ds.c3, 'c4': ds.c4}
    return NCSeries(coeffs, ('W1', 'W2'), Phase(betaSq=1), 'Dperp', ld.alphaSq, b2,
                    _boxComplement(innerM, tailM, innerN, tailN), prefactor)


def primitiveForm(ld: LatticeData, cutoff: Optional[int] = None) -> NCSeries:
    """
    X = <f,f>_D = (1/beta^2) sum e(q^2 alpha^2 mn/2) exp(-pi q^2 alpha^2 (m^2+n^2)/2)
        mu_{qm,qn} U2^{qn} U1^{qm}

    with mu_{qm,qn} = (-1)^{q(p1p3 + p2p4)(n^2 - m^2)}. Keys are the exponents (qm, qn).
    """
    cutoff = cutoff or constant.cutoff
    if cutoff < 1:
        raise DomainError('cutoff must be positive.')
    q, P = ld.q, ld.P
    rho = q*q*ld.alphaSq
    scale = 1/ld.betaSq
    coeffs = {}
    for m in range(-cutoff, cutoff + 1):
        for n in range(-cutoff, cutoff + 1):
            w = scale*_math.exp(-_np.pi*rho*(m*m + n*n)/2)
            if w >= constant.floor:
                phase = Phase(Fraction(q*P*(n*n - m*m), 2), alphaSq=Fraction(q*q*m*n, 2))
                coeffs[(q*m, q*n)] = (w, phase)
    inner = 1 + 2*_math.fsum(_math.exp(-_np.pi*rho*j*j/2) for j in range(1, cutoff + 1))
    tail1 = 2*_tail(rho, cutoff + 1)
    return NCSeries(coeffs, ('U1', 'U2'), Phase(Fraction(ld.p, q), alphaSq=1), 'D',
                    ld.alphaSq, ld.betaSq, scale*_boxComplement(inner, tail1, inner, tail1))


def muSign(ld: LatticeData, m: int, n: int) -> int:
    """
    mu_{qm,qn} as an integer
    """
    return -1 if (ld.q*ld.P*(n*n - m*m)) % 2 else 1


_fourierPairs = {'sigma': (('U1', 'U2'),), 'sigma_prime': (('V1', 'V2'), ('V3', 'V4'))}


def fourierMap(series: NCSeries, convention: str) -> NCSeries:
    """
    The order four automorphism first -> second -> first*

    second^n first^m goes to first^{-n} second^m = commutation^{-mn} second^m first^{-n}.

    In
    ------
    series: NCSeries tagged with its algebra
    convention: 'sigma' for (U1, U2), 'sigma_prime' for (V1, V2) or (V3, V4)

    Out
    ------
    NCSeries
    """
    if convention not in _fourierPairs:
        raise FlagError(f'Flag \'convention\' must be one of {tuple(_fourierPairs)}, got \'{convention}\'.')
    if series.algebra not in _algebras:
        raise FlagError('The series is not tagged with its algebra.')
    if tuple(series.labels) not in _fourierPairs[convention]:
        raise FlagError(f'{convention} does not act on the generators {series.labels}.')
    out = {}
    for (m, n), (w, ph) in series.coeffs.items():
        out[(-n, m)] = (w, ph*series.commutation**(-m*n))
    return series._like(out)


def adjointSeries(series: NCSeries) -> NCSeries:
    """
    (second^n first^m)* = commutation^{mn} second^{-n} first^{-m}
    """
    out = {}
    for (m, n), (w, ph) in series.coeffs.items():
        out[(-m, -n)] = (w, ph.conj()*series.commutation**(m*n))
    return series._like(out)


def seriesEqual(a: NCSeries, b: NCSeries, tol: float = 0.0) -> bool:
    """
    Same support, weights within tol and phases equal as unit numbers
    """
    if set(a.coeffs) != set(b.coeffs):
        return False
    for key, (w, ph) in a.coeffs.items():
        w2, ph2 = b.coeffs[key]
        if abs(w - w2) > tol or not ph.equivalent(ph2):
            return False
    return True


def hermiticityResidual(series: NCSeries) -> float:
    """
    max |c - c_adjoint| over the support, 0 for a hermitian series
    """
    adj = adjointSeries(series)
    if set(adj.coeffs) != set(series.coeffs):
        return _np.inf
    return max(abs(series.value(k) - adj.value(k)) for k in series.coeffs)


def seriesMatrix(series: NCSeries, first: _np.ndarray, second: _np.ndarray) -> _np.ndarray:
    """
    sum c_{m,n} second^n first^m for unitary matrices first, second
    """
    def powers(M, keys):
        out = {0: _np.eye(M.shape[0], dtype=complex)}
        Minv = M.conj().T
        for k in sorted(set(keys), key=abs):
            if k not in out:
                prev = out[k - 1] if k > 0 else out[k + 1]
                out[k] = prev @ (M if k > 0 else Minv)
        return out

    mKeys = [m for m, _ in series.coeffs]
    nKeys = [n for _, n in series.coeffs]
    fp = powers(first, range(min(mKeys), max(mKeys) + 1))
    sp = powers(second, range(min(nKeys), max(nKeys) + 1))
    out = _np.zeros_like(fp[0])
    for (m, n) in series.coeffs:
        out += series.value((m, n))*(sp[n] @ fp[m])
    return out



##########################################################################
#                                                                        #
#   Pipeline                                                             #
#                                                                        #
##########################################################################


@dataclass(frozen=True, eq=False)
class Pipeline:
    """
    Everything derived from (theta, p/q): the oriented convergent, the four
    squares, the phase selection, the lattices, and the diophantine
    solutions and phase polynomials for both choices of the shift
    """
    conv: Convergent
    ld: LatticeData
    ds: DiophantineSolution
    pp: PhasePolynomial
    dsEps: DiophantineSolution
    ppEps: PhasePolynomial

    @property
    def fs(self):
        return self.ld.fs

    @property
    def ps(self):
        return self.ld.ps


def prepare(theta: Irrational, p: Optional[int] = None, q: Optional[int] = None,
            index: Optional[int] = None, override: Optional[Sequence[int]] = None,
            method: str = 'scan') -> Pipeline:
    """
    Orient, decompose, select, build and solve

    In
    ------
    theta: Irrational
    p, q: explicit rational, or
    index: position of the CF convergent
    override: (a, b, gamma) replacing the selected phase
    method: witness search of selectPhase

    Out
    ------
    Pipeline

    Raises ScopeError when q|q theta - p| >= 1 and CongruenceError when the
    overridden phase breaks the construction
    """
    if (index is None) == (p is None or q is None):
        raise FlagError('Give either \'index\' or both \'p\' and \'q\'.')
    if index is not None:
        if index < 0:
            raise DomainError('index must be nonnegative.')
        conv = convergents(theta, index + 1)[index]
    else:
        if q < 1 or _math.gcd(p, q) != 1:
            raise DomainError(f'Need q >= 1 and gcd(p,q) = 1, got {p}/{q}.')
        conv = Convergent(theta, p, q)
    if not checkApproximation(conv.theta, conv.p, conv.q)[1]:
        raise ScopeError(f'q|q theta - p| >= 1 for {conv.p}/{conv.q}.')
    conv = orientConvergent(conv)
    fs = fourSquare(conv.p)
    if override is not None:
        a, b, g = (int(x) for x in override)
        ps = PhaseSelection.override(a, b, g, fs, conv.q)
    else:
        ps = selectPhase(fs, conv.q, method)
    ld = buildLattices(conv, fs, ps)
    u3, u4 = shiftU(ld, 'zero')
    ds = solveDiophantine(ld, u3, u4)
    pp = phasePolynomial(ld, ds, 'zero')
    u3, u4 = shiftU(ld, 'eps1')
    dsEps = solveDiophantine(ld, u3, u4)
    ppEps = phasePolynomial(ld, dsEps, 'eps1')
    _logger.info('prepared %d/%d: fs %s, (a,b,gamma) = (%d,%d,%d), beta^2 = %.6g',
                 conv.p, conv.q, fs.asTuple(), ps.a, ps.b, ps.gamma, ld.betaSq)
    return Pipeline(conv, ld, ds, pp, dsEps, ppEps)


def _inputs(ld: LatticeData) -> dict:
    p1, p2, p3, p4 = ld.fs.asTuple()
    ps = ld.ps
    return {'theta': ld.conv.theta.spec(), 'theta_digest': ld.conv.theta.digest(),
            'reflected': ld.conv.reflected, 'p': ld.p, 'q': ld.q,
            'p1': p1, 'p2': p2, 'p3': p3, 'p4': p4,
            'a': ps.a, 'b': ps.b, 'gamma': ps.gamma, 'c': ps.c, 'd': ps.d}



##########################################################################
#                                                                        #
#   Certificates                                                         #
#                                                                        #
##########################################################################


def invertibilityCertificate(target: Union[LatticeData, float], tol: Optional[float] = None) -> Certificate:
    """
    <f,f>_Dperp is invertible when the raw bound at beta^2 is below 1

    In
    ------
    target: LatticeData, or beta^2 directly
    tol: theta truncation tolerance

    Out
    ------
    Certificate, with the bound ||<f,f>^-1|| <= ||rho_0^-1||^2/(1 - raw)
    """
    tol = constant.tol if tol is None else tol
    if isinstance(target, LatticeData):
        betaSq, inputs = target.betaSq, _inputs(target)
    else:
        betaSq, inputs = float(target), {}
    inputs['betaSq'] = betaSq
    if betaSq <= 1:
        raise ScopeError(f'beta^2 = {betaSq} <= 1: the Gaussian element cannot be invertible there.')
    raw = rawInvertibilityBound(betaSq, tol)
    norm0, norm0Inv = rhoNorms(betaSq, tol)
    passed = raw.value < 1
    inverseBound = norm0Inv**2/(1 - raw.value) if passed else _np.inf
    _logger.info('invertibility at beta^2 = %.6g: raw %.6g, energy %.6g', betaSq, raw.value, raw.energy)
    return Certificate('invertibility', inputs=inputs,
                       values={'raw': raw.value, 'energy': raw.energy, 'dominated': raw.dominated,
                               'normRho0': norm0, 'normRho0Inv': norm0Inv,
                               'inverseNormBound': inverseBound},
                       threshold=1.0, passed=passed, tolerance=tol)


def _gaussSum(weight, b2, tol):
    """
    sum_{n >= 1} weight(n) for weight(n) <= 2 n exp(-pi n^2/(2 b2))
    """
    total, n = [], 1
    while True:
        total.append(weight(n))
        envelope = 2*n*_math.exp(-_np.pi*n*n/(2*b2))
        if n*n > b2 and envelope < tol*1e-3:
            return _math.fsum(total)
        n += 1
        if n > constant.maxTerms:
            raise DomainError('Gaussian sum did not settle.')


def centralityCertificate(ld: LatticeData, tol: Optional[float] = None) -> Certificate:
    """
    ||U1 X U1* - X|| through the l^1 chain and its closed-form majorant

        l1  = (2/beta^2) theta3(0, i/(2 beta^2)) sum_{n>=1} exp(-pi n^2/(2 beta^2)) |e(n/(q beta^2)) - 1|
        maj = (4 pi/(q beta^2)) (1 + beta sqrt 2) (1/pi + 2/(beta sqrt(pi e)))

    passes iff maj < 12 pi/q and l1 <= maj
    """
    tol = constant.tol if tol is None else tol
    q, b2, b = ld.q, ld.betaSq, ld.beta
    th = thetaImag(3, 0.0, 1/(2*b2), tol)
    gauss = lambda n: _math.exp(-_np.pi*n*n/(2*b2))
    sineSum = _gaussSum(lambda n: gauss(n)*2*abs(_math.sin(_np.pi*n/(q*b2))), b2, tol)
    l1 = 2/b2*th*sineSum
    majorant = 4*_np.pi/(q*b2)*(1 + b*_math.sqrt(2))*(1/_np.pi + 2/(b*_math.sqrt(_np.pi*_np.e)))
    momentSum = _gaussSum(lambda n: n*gauss(n), b2, tol)
    momentBound = b2/_np.pi + 2*b/_math.sqrt(_np.pi*_np.e)
    thetaBound = 1 + _math.sqrt(2)*b
    passed = majorant < 12*_np.pi/q and l1 <= majorant and momentSum <= momentBound and th <= thetaBound
    return Certificate('centrality', inputs=_inputs(ld),
                       values={'l1': l1, 'majorant': majorant, 'limit': 12*_np.pi/q,
                               'momentSum': momentSum, 'momentBound': momentBound,
                               'theta3': th, 'theta3Bound': thetaBound},
                       threshold=12*_np.pi/q, passed=passed, tolerance=tol)


def _checkEps(ld, ds, pp):
    if pp.tChoice != 'eps1':
        raise FlagError(f'The cut down needs tChoice \'eps1\', got \'{pp.tChoice}\'.')
    u3, u4 = shiftU(ld, 'eps1')
    if (ds.u3 - u3) % ld.q or (ds.u4 - u4) % ld.q:
        raise FlagError('The diophantine solution was not built for tChoice \'eps1\'.')


def nuCongruences(ld: LatticeData, ds: DiophantineSolution) -> Tuple[Phase, Phase]:
    """
    nu_1 = e(p(c3 b1 - c4 a1)/q) and nu_2 = e(p(c3 b2 - c4 a2)/q), required
    to be 1 and e(1/q)

    Raises CongruenceError otherwise
    """
    q, p, c = ld.q, ld.p, ld.c
    r1 = (ds.c3*ds.b1 - ds.c4*ds.a1) % q
    r2 = (ds.c4*ds.a2 - ds.c3*ds.b2) % q
    if r1 != 0:
        raise CongruenceError(f'c3 b1 - c4 a1 = {r1} mod {q}, expected 0.')
    if r2 != (-c) % q:
        raise CongruenceError(f'c4 a2 - c3 b2 = {r2} mod {q}, expected {(-c) % q}.')
    nu1 = Phase(Fraction(p*(ds.c3*ds.b1 - ds.c4*ds.a1), q))
    nu2 = Phase(Fraction(p*(ds.c3*ds.b2 - ds.c4*ds.a2), q))
    return nu1, nu2


def cutdownCertificate(ld: LatticeData, ds: DiophantineSolution, pp: PhasePolynomial,
                       cutoff: Optional[int] = None, N: Optional[int] = None,
                       tol: Optional[float] = None) -> Certificate:
    """
    The bounds behind <xi, U1 xi> ~ mu0^{1/2} e(K/2q) V4^c4 V3^c3

    (i) ||B - <f,f>|| in l^1 against the four-way split at N, (ii) the
    conjugation by V4^c4 V3^c3 against (2 pi/q) sum |n| exp(-pi(m^2+n^2)/2),
    (iii) the exact congruences giving nu_1 = 1 and nu_2 = e(1/q)

    In
    ------
    ld: LatticeData
    ds, pp: built for tChoice 'eps1'
    cutoff: box of the computed l^1 sums
    N: split point of the four-way bound

    Out
    ------
    Certificate
    """
    cutoff = cutoff or constant.cutoff
    N = N or constant.splitCutoff
    tol = constant.tol if tol is None else tol
    _checkEps(ld, ds, pp)
    nu1, nu2 = nuCongruences(ld, ds)
    q, a2, b2 = ld.q, ld.alphaSq, ld.betaSq
    g = lambda k, rho=1.0: _math.exp(-_np.pi*rho*k*k/2)
    shift = lambda m: _math.exp(-_np.pi*(a2 + 2*m/q)/2)
    rng = range(-cutoff, cutoff + 1)

    # computed l^1 norm of B - <f,f> on the box, plus the box complement
    l1 = _math.fsum(g(m, b2)*g(n, b2)*abs(shift(m)*_np.exp(-1j*_np.pi*n/q) - 1) for m in rng for n in rng)
    far = cutoff + 40
    outerM = _math.fsum(g(m, b2)*(shift(m) + 1) for m in range(-far, far + 1) if abs(m) > cutoff)
    innerM = _math.fsum(g(m, b2)*(shift(m) + 1) for m in rng)
    innerN = 1 + 2*_math.fsum(g(n, b2) for n in range(1, cutoff + 1))
    l1Tail = _boxComplement(innerM, outerM, innerN, 2*_tail(b2, cutoff + 1))

    # the four pieces of the split at N, weights relaxed from beta^2 to 1
    boxN = range(-N, N + 1)
    th = thetaImag(3, 0.0, 0.5, tol)
    box = _math.fsum(g(m)*g(n)*abs(shift(m)*_np.exp(-1j*_np.pi*n/q) - 1) for m in boxN for n in boxN)
    farM = _math.fsum(g(m)*(shift(m) + 1) for m in range(-far, far + 1) if abs(m) > N)
    nearM = _math.fsum(g(m)*(shift(m) + 1) for m in boxN)
    farN = 2*_tail(1.0, N + 1)
    second = th*farM
    third = nearM*farN
    fourth = farM*farN
    splitBound = box + second + third + fourth
    shiftTail = _math.fsum(g(m)*_math.exp(-_np.pi*m/q) for m in range(-far, far + 1) if abs(m) > N)
    shiftTailBound = 2*_tail(1.0, N)

    # conjugation by V4^c4 V3^c3 multiplies W2^n W1^m by e(n/q)
    conj = _math.fsum(g(m, b2)*g(n, b2)*abs(_np.exp(2j*_np.pi*n/q) - 1) for m in rng for n in rng)
    conjBound = 2*_np.pi/q*th*2*psi(0.5, tol)

    # the shifted tail estimate is reported only, it fails for q = 1
    passed = l1 <= splitBound and conj <= conjBound
    return Certificate('cutdown', inputs={**_inputs(ld), 'cutoff': cutoff, 'N': N},
                       values={'l1': l1, 'splitBound': splitBound, 'box': box, 'second': second,
                               'third': third, 'fourth': fourth, 'shiftTail': shiftTail,
                               'shiftTailBound': shiftTailBound, 'conjugation': conj,
                               'conjugationBound': conjBound, 'nu1': nu1.reduced(),
                               'nu2': nu2.reduced(), 'c3': ds.c3, 'c4': ds.c4,
                               'qSplitBound': q*splitBound, 'qConjugationBound': q*conjBound,
                               'detR': ds.detR, 'detS': ds.detS},
                       threshold=splitBound, passed=passed, tolerance=tol, tailBudget=l1Tail, notes=ds.notes)


def cutdownApproximants(ld: LatticeData, ds: DiophantineSolution, pp: PhasePolynomial,
                        tol: Optional[float] = None) -> Certificate:
    """
    The q x q matrices approximating the cut downs of U1 and U2,

        A1 = mu0^{1/2} e(K/2q) V4^c4 V3^c3
        A2 = mu0^{1/2} e(K/2q) W0 V3^{-c4} V4^c3 W0*

    both checked unitary
    """
    tol = constant.residualTol if tol is None else tol
    _checkEps(ld, ds, pp)
    q = ld.q
    if q > constant.maxWeilDim:
        raise ScopeError(f'q = {q} exceeds maxWeilDim = {constant.maxWeilDim}.')
    V3, V4 = clockShiftRep(q, ld.p)
    mp = _np.linalg.matrix_power
    scalar = (Phase(Fraction(ld.P, 2*q))*Phase(Fraction(pp.K, 2*q))).value()
    A1 = scalar*(mp(V4, ds.c4) @ mp(V3, ds.c3))
    W = operatorMatrix(w0(gaussianPhi(ld.ps, ld.fs, q, normalized=True)))
    V3inv = V3.conj().T
    A2 = scalar*(W @ mp(V3inv, ds.c4) @ mp(V4, ds.c3) @ W.conj().T)
    eye = _np.eye(q)
    r1 = float(_np.linalg.norm(A1 @ A1.conj().T - eye, 2))
    r2 = float(_np.linalg.norm(A2 @ A2.conj().T - eye, 2))
    return Certificate('cutdown_approximants', inputs=_inputs(ld),
                       values={'unitarityU1': r1, 'unitarityU2': r2},
                       threshold=tol, passed=r1 < tol and r2 < tol, tolerance=tol)


def cutdownDecay(pipes: Sequence[Pipeline], cutoff: Optional[int] = None, N: Optional[int] = None,
                 tol: Optional[float] = None) -> Certificate:
    """
    The cut down bounds along a sequence of convergents

    In
    ------
    pipes: pipelines with strictly increasing q
    cutoff, N, tol: passed to cutdownCertificate

    Out
    ------
    Certificate, passed iff every cut down passes and both the split and the
    conjugation bounds strictly decrease. The rates q*bound are reported.
    """
    if len(pipes) < 2:
        raise DomainError('The decay needs at least two convergents.')
    qs = [pipe.ld.q for pipe in pipes]
    if any(q0 >= q1 for q0, q1 in zip(qs, qs[1:])):
        raise DomainError(f'q must increase strictly along the sequence, got {qs}.')
    certs = [cutdownCertificate(pipe.ld, pipe.dsEps, pipe.ppEps, cutoff, N, tol) for pipe in pipes]
    split = [c.values['splitBound'] for c in certs]
    conj = [c.values['conjugationBound'] for c in certs]
    decreasing = all(a > b for a, b in zip(split, split[1:])) and all(a > b for a, b in zip(conj, conj[1:]))
    rows = [{'q': q, 'l1': c.values['l1'], 'splitBound': s, 'conjugationBound': k,
             'qSplitBound': q*s, 'qConjugationBound': q*k}
            for q, c, s, k in zip(qs, certs, split, conj)]
    passed = decreasing and all(c.passed for c in certs)
    _logger.info('cut down decay over q = %s: decreasing %s', qs, decreasing)
    return Certificate('cutdown_decay', inputs={'theta': pipes[0].conv.theta.spec(), 'q': qs},
                       values={'rows': rows, 'decreasing': decreasing,
                               'maxQSplitBound': max(r['qSplitBound'] for r in rows),
                               'maxQConjugationBound': max(r['qConjugationBound'] for r in rows)},
                       passed=passed, tolerance=certs[0].tolerance)


def rhoNormExtended(ld: LatticeData, dps: int, tol: Optional[float] = None) -> Certificate:
    """
    ||rho_0|| = theta3(0, i beta^2/2) recomputed with mpmath at dps digits
    against the binary64 value used by the invertibility certificate
    """
    tol = constant.residualTol if tol is None else tol
    norm0 = rhoNorms(ld.betaSq)[0]
    extended = theta(3, 0, 1j*ld.betaSq/2, dps=dps)
    residual = float(abs(extended - norm0))/norm0
    return Certificate('rho_norm_extended', inputs={**_inputs(ld), 'dps': dps},
                       values={'binary64': norm0, 'extended': _mp.nstr(extended.real, dps),
                               'residual': residual},
                       threshold=tol, passed=residual < tol, tolerance=tol)


def traceReport(ld: LatticeData, listMax: int = 1000) -> Certificate:
    """
    tau(e) = q|q theta - p|, the subprojection traces k|q theta - p| and tau(1 - e)

    For q > listMax only the first listMax subtraces and the last are listed.
    """
    q = ld.q
    gap = ld.covolume/q
    ks = list(range(1, min(q, listMax) + 1))
    if ks[-1] != q:
        ks.append(q)
    sub = [k*gap for k in ks]
    trace = ld.covolume
    passed = 0 < trace < 1 and all(0 < t < 1 for t in sub)
    return Certificate('trace', inputs=_inputs(ld),
                       values={'trace': trace, 'subtraces': dict(zip(ks, sub)), 'complement': 1 - trace},
                       threshold=1.0, passed=passed)


def subprojectionTrace(theta: Irrational, n: int) -> float:
    """
    q_n |q_{n+1} theta - p_{n+1}|, the trace of the projection built from
    consecutive convergents
    """
    cs = convergents(theta, n + 2)
    return cs[n].q*abs(cs[n + 1].error)


def congruenceCertificate(pipe: Pipeline) -> Certificate:
    """
    The exact residues of a', b', c', d0', e0' mod q for both shifts, and the
    agreement of d1', e1', a', b' between them
    """
    pp, ppEps = pipe.pp, pipe.ppEps
    same = all(getattr(pp, k) == getattr(ppEps, k) for k in ('aP', 'bP', 'd1P', 'e1P'))
    residues = {'zero': pp.congruences(), 'eps1': ppEps.congruences()}
    passed = same and not any(v for r in residues.values() for v in r.values())
    return Certificate('phase_congruences', inputs=_inputs(pipe.ld),
                       values={'residues': residues, 'shiftIndependent': same,
                               'aPP': pp.aPP, 'bPP': pp.bPP}, threshold=0, passed=passed,
                       notes='; '.join(sorted({pipe.ds.notes, pipe.dsEps.notes} - {''})))


def certifyAll(pipe: Pipeline, cutoff: Optional[int] = None, N: Optional[int] = None,
               tol: Optional[float] = None, dps: Optional[int] = None) -> List[Certificate]:
    """
    Every certificate that applies to the pipeline, in a fixed order. With dps
    the rho norm is also recomputed in extended precision at the end.
    """
    ld = pipe.ld
    rel = basisRelations(ld)
    out = [Certificate('basis_relations', inputs=_inputs(ld), values=rel, passed=all(rel.values())),
           congruenceCertificate(pipe),
           invertibilityCertificate(ld, tol),
           centralityCertificate(ld, tol),
           cutdownCertificate(ld, pipe.dsEps, pipe.ppEps, cutoff, N, tol),
           traceReport(ld)]
    series = seriesInnerFF(ld, cutoff)
    out.append(Certificate('series_hermitian', inputs=_inputs(ld),
                           values={'residual': hermiticityResidual(series), 'tail': series.tailBudget},
                           threshold=constant.residualTol,
                           passed=hermiticityResidual(series) <= constant.residualTol,
                           tailBudget=series.tailBudget))
    X = primitiveForm(ld, cutoff)
    out.append(Certificate('primitive_fourier_invariant', inputs=_inputs(ld),
                           values={'l1': X.l1(), 'tail': X.tailBudget},
                           passed=seriesEqual(fourierMap(X, 'sigma'), X), tailBudget=X.tailBudget))
    if ld.q <= constant.maxExactDim:
        out.append(scalarityCheck(ld.ps, ld.fs))
    if ld.q <= constant.maxWeilDim:
        out.append(finiteWeilCertificate(ld.ps, ld.fs))
        out.append(cutdownApproximants(ld, pipe.dsEps, pipe.ppEps))
    else:
        _logger.info('q = %d exceeds maxWeilDim, finite checks skipped', ld.q)
    if dps is not None:
        out.append(rhoNormExtended(ld, dps))
    return out
