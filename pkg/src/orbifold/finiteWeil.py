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

The discrete layer on L^2(Z_q x Z_q).

Conventions, fixed once:

    pi_(u,s) f(n) = e(n.s/q) f(n+u)            u, s, n in Z_q^2
    F f(s)        = (1/q) sum_n f(n) e(n.s/q)  (dft2)
    D0            = span(eps1, eps2),  eps1 = (p1,p2; p3,p4),  eps2 = (-p3,-p4; p1,p2)
    D0-perp       = span(delta3, delta4),
                    delta3 = (p2,-p1; -p4,p3),  delta4 = (p4,-p3; p2,-p1)
    V3, V4        = lambda_jj^{-(q+1)/2} pi*_(delta_j), acting on the left of
                    L^2(Z_q^2) and commuting with pi_(D0)

An element of C*(D0-perp) is kept as the q x q array of coefficients of the
words V4^l V3^k. The clock/shift pair maps it to a q x q matrix.

"""

import logging as _logging
import math as _math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as _np

from .constant import constant
from .numberTheory import FourSquare, PhaseSelection
from .sysmsg import DomainError, ScopeError
from .utils import Certificate, isZeroSum, rootOfUnitySum

_logger = _logging.getLogger(__name__)



##########################################################################
#                                                                        #
#   Types                                                                #
#                                                                        #
##########################################################################


@dataclass
class CyclicFunction:
    """
    A function on Z_q x Z_q together with the four squares fixing D0

    In
    ------
    q: positive integer
    values: complex array of shape (q,q), values[n,m]
    fs: FourSquare of p
    """
    q: int
    values: _np.ndarray
    fs: FourSquare

    def __post_init__(self):
        self.values = _np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.q, self.q):
            raise DomainError(f'Expected a {self.q}x{self.q} array, got shape {self.values.shape}.')

    @property
    def p(self) -> int:
        return self.fs.p

    def norm(self) -> float:
        return float(_np.linalg.norm(self.values))


@dataclass
class PerpOperator:
    """
    sum_{k,l} coeffs[k,l] V4^l V3^k in C*(D0-perp), with V3 V4 = e(p/q) V4 V3
    """
    q: int
    p: int
    coeffs: _np.ndarray

    def __post_init__(self):
        self.coeffs = _np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (self.q, self.q):
            raise DomainError(f'Expected a {self.q}x{self.q} array, got shape {self.coeffs.shape}.')

    def __add__(self, other):
        _sameAlgebra(self, other)
        return PerpOperator(self.q, self.p, self.coeffs + other.coeffs)

    def __sub__(self, other):
        _sameAlgebra(self, other)
        return PerpOperator(self.q, self.p, self.coeffs - other.coeffs)

    def __rmul__(self, z):
        return PerpOperator(self.q, self.p, z*self.coeffs)

    def offScalar(self) -> float:
        """
        Largest |coeff| away from the identity word
        """
        c = _np.abs(self.coeffs).copy()
        c[0, 0] = 0
        return float(c.max())


def _sameAlgebra(a, b):
    if a.q != b.q or (a.p - b.p) % a.q:
        raise DomainError(f'Operators live in different algebras, q = {a.q} and q = {b.q}.')


def word(q: int, p: int, k: int, l: int) -> PerpOperator:
    """
    The single word V4^l V3^k
    """
    c = _np.zeros((q, q), dtype=complex)
    c[k % q, l % q] = 1
    return PerpOperator(q, p, c)


def identity(q: int, p: int) -> PerpOperator:
    return word(q, p, 0, 0)



##########################################################################
#                                                                        #
#   Heisenberg operators                                                 #
#                                                                        #
##########################################################################


def _e(k, q):
    """
    e(k/q) for integer arrays k
    """
    return _np.exp(2j*_np.pi*(_np.asarray(k) % q)/q)


def _grid(q):
    return _np.meshgrid(_np.arange(q), _np.arange(q), indexing='ij')


def applyHeisenberg(values, q: int, u: Tuple[int, int], s: Tuple[int, int]):
    """
    pi_(u,s) applied to a q x q array
    """
    n, m = _grid(q)
    shifted = _np.roll(values, shift=(-u[0], -u[1]), axis=(0, 1))
    return _e(n*s[0] + m*s[1], q)*shifted


def heisenbergOperator(q: int, u: Tuple[int, int], s: Tuple[int, int]) -> _np.ndarray:
    """
    Matrix of pi_(u,s) on L^2(Z_q^2), index n*q + m

    Out
    ------
    complex array of shape (q^2, q^2)
    """
    n, m = _grid(q)
    rows = (n*q + m).ravel()
    cols = (((n + u[0]) % q)*q + (m + u[1]) % q).ravel()
    out = _np.zeros((q*q, q*q), dtype=complex)
    out[rows, cols] = _e(n*s[0] + m*s[1], q).ravel()
    return out


def d0Basis(fs: FourSquare):
    p1, p2, p3, p4 = fs.asTuple()
    return ((p1, p2), (p3, p4)), ((-p3, -p4), (p1, p2))


def d0PerpBasis(fs: FourSquare):
    p1, p2, p3, p4 = fs.asTuple()
    return ((p2, -p1), (-p4, p3)), ((p4, -p3), (p2, -p1))


def _generatorScalars(fs: FourSquare, q: int) -> Tuple[complex, complex]:
    # lambda_33 = e(-P/q), lambda_44 = e(P/q) and V_j = lambda_jj^{-(q-1)/2} pi_(-delta_j)
    p1, p2, p3, p4 = fs.asTuple()
    P = p1*p3 + p2*p4
    x = Fraction(P*(q - 1), 2*q)
    return _np.exp(2j*_np.pi*float(x % 1)), _np.exp(-2j*_np.pi*float(x % 1))


class _Generators:
    """
    V3 and V4 acting on q x q arrays
    """

    def __init__(self, fs: FourSquare, q: int):
        self.q = q
        self.z3, self.z4 = _generatorScalars(fs, q)
        (u3, s3), (u4, s4) = d0PerpBasis(fs)
        self.u3, self.s3 = (-u3[0], -u3[1]), (-s3[0], -s3[1])
        self.u4, self.s4 = (-u4[0], -u4[1]), (-s4[0], -s4[1])

    def V3(self, values):
        return self.z3*applyHeisenberg(values, self.q, self.u3, self.s3)

    def V4(self, values):
        return self.z4*applyHeisenberg(values, self.q, self.u4, self.s4)



##########################################################################
#                                                                        #
#   Functions and inner products                                         #
#                                                                        #
##########################################################################


def gaussianPhi(ps: PhaseSelection, fs: FourSquare, q: Optional[int] = None,
                normalized: bool = False) -> CyclicFunction:
    """
    phi(n,m) = e((a n^2 + b n m + gamma m^2)/q)

    In
    ------
    ps: PhaseSelection carrying (a, b, gamma)
    fs: FourSquare fixing the lattices
    q: defaults to ps.q
    normalized: divide by q, so that <phi,phi>_D0perp = 1 when it is scalar

    Out
    ------
    CyclicFunction
    """
    q = ps.q if q is None else q
    n, m = _grid(q)
    values = _e(ps.a*n*n + ps.b*n*m + ps.gamma*m*m, q)
    if normalized:
        values = values/q
    return CyclicFunction(q, values, fs)


def _checkPair(phi1: CyclicFunction, phi2: CyclicFunction):
    if phi1.q != phi2.q:
        raise DomainError(f'Functions on Z_{phi1.q}^2 and Z_{phi2.q}^2 cannot be paired.')
    if phi1.fs != phi2.fs:
        raise DomainError('Functions carry different four square decompositions.')


def innerPerp(phi1: CyclicFunction, phi2: CyclicFunction) -> PerpOperator:
    """
    C*(D0-perp) valued inner product, coefficient of V4^l V3^k equal to
    <V4^l V3^k phi1, phi2>

    In
    ------
    phi1, phi2: CyclicFunction on the same Z_q^2

    Out
    ------
    PerpOperator
    """
    _checkPair(phi1, phi2)
    q = phi1.q
    gen = _Generators(phi1.fs, q)
    g = phi2.values
    coeffs = _np.empty((q, q), dtype=complex)
    h = phi1.values
    for k in range(q):
        hk = h
        for l in range(q):
            coeffs[k, l] = _np.vdot(hk, g)
            hk = gen.V4(hk)
        h = gen.V3(h)
    return PerpOperator(q, phi1.p, coeffs)


def rightAction(op: PerpOperator, phi: CyclicFunction) -> CyclicFunction:
    """
    phi . op = sum coeffs[k,l] V4^l V3^k phi
    """
    if op.q != phi.q:
        raise DomainError(f'Operator on q = {op.q} cannot act on Z_{phi.q}^2.')
    q = phi.q
    gen = _Generators(phi.fs, q)
    out = _np.zeros((q, q), dtype=complex)
    h = phi.values
    for k in range(q):
        hk = h
        for l in range(q):
            if op.coeffs[k, l] != 0:
                out += op.coeffs[k, l]*hk
            hk = gen.V4(hk)
        h = gen.V3(h)
    return CyclicFunction(q, out, phi.fs)


def innerD0(phi1: CyclicFunction, phi2: CyclicFunction) -> _np.ndarray:
    """
    C*(D0) valued inner product sum_{x in D0} <pi_x phi2, phi1> pi_x as a
    q^2 x q^2 matrix

    Out
    ------
    complex array of shape (q^2, q^2)
    """
    _checkPair(phi1, phi2)
    q = phi1.q
    if q > constant.maxWeilDim:
        raise ScopeError(f'q = {q} exceeds maxWeilDim = {constant.maxWeilDim}.')
    (ue1, se1), (ue2, se2) = d0Basis(phi1.fs)
    n, m = _grid(q)
    rows = (n*q + m).ravel()
    out = _np.zeros((q*q, q*q), dtype=complex)
    for i in range(q):
        for j in range(q):
            u = ((i*ue1[0] + j*ue2[0]) % q, (i*ue1[1] + j*ue2[1]) % q)
            s = ((i*se1[0] + j*se2[0]) % q, (i*se1[1] + j*se2[1]) % q)
            coeff = _np.vdot(applyHeisenberg(phi2.values, q, u, s), phi1.values)
            if abs(coeff) < constant.floor:
                continue
            cols = (((n + u[0]) % q)*q + (m + u[1]) % q).ravel()
            out[rows, cols] += coeff*_e(n*s[0] + m*s[1], q).ravel()
    return out


def traceD0(op: _np.ndarray) -> complex:
    """
    Normalized trace on C*(D0), the coefficient of pi_0
    """
    return complex(_np.trace(op)/op.shape[0])


def tracePerp(op: PerpOperator) -> complex:
    """
    Normalized trace on C*(D0-perp), the coefficient of the identity word
    """
    return complex(op.coeffs[0, 0])


def dft2(phi: CyclicFunction) -> CyclicFunction:
    """
    F phi(s,t) = (1/q) sum_{n,m} phi(n,m) e((ns + mt)/q)

    Unitary, with F^2 phi(n,m) = phi(-n,-m).
    """
    return CyclicFunction(phi.q, _np.fft.ifft2(phi.values, norm='ortho'), phi.fs)


def w0(phi: CyclicFunction, tol: Optional[float] = None) -> PerpOperator:
    """
    The unitary W0 = <phi, F phi>_D0perp, with F phi = phi . W0

    In
    ------
    phi: CyclicFunction with <phi,phi>_D0perp = 1
    tol: tolerance on the normalization

    Out
    ------
    PerpOperator
    """
    tol = constant.residualTol if tol is None else tol
    gram = innerPerp(phi, phi)
    dev = max(abs(gram.coeffs[0, 0] - 1), gram.offScalar())
    if dev > tol:
        raise DomainError(f'phi is not normalized, |<phi,phi> - 1| = {dev:.3e}.')
    return innerPerp(phi, dft2(phi))



##########################################################################
#                                                                        #
#   Automorphisms and matrices                                           #
#                                                                        #
##########################################################################


def _omega(op: PerpOperator):
    k = _np.arange(op.q)
    return _e(op.p*_np.multiply.outer(k, k), op.q)


def sigma0Prime(op: PerpOperator) -> PerpOperator:
    """
    The order four automorphism V3 -> V4 -> V3*

    V4^l V3^k goes to V3^{-l} V4^k = e(-pkl/q) V4^k V3^{-l}.
    """
    q = op.q
    out = _np.zeros_like(op.coeffs)
    k = _np.arange(q)
    # out[-l, k] = coeffs[k, l] omega^{-kl}
    out[(-k[None, :]) % q, k[:, None]] = op.coeffs*_np.conj(_omega(op))
    return PerpOperator(q, op.p, out)


def adjoint(op: PerpOperator) -> PerpOperator:
    """
    (V4^l V3^k)* = e(pkl/q) V4^{-l} V3^{-k}
    """
    q = op.q
    k = _np.arange(q)
    out = _np.zeros_like(op.coeffs)
    out[(-k[:, None]) % q, (-k[None, :]) % q] = _np.conj(op.coeffs)*_omega(op)
    return PerpOperator(q, op.p, out)


def clockShiftRep(q: int, p: int) -> Tuple[_np.ndarray, _np.ndarray]:
    """
    Clock V3 = diag(e(pk/q)) and shift V4 e_k = e_{k+1}, with V3 V4 = e(p/q) V4 V3

    In
    ------
    q: positive integer
    p: integer with gcd(p,q) = 1

    Out
    ------
    (V3, V4): q x q unitary matrices
    """
    if q < 1 or _math.gcd(p, q) != 1:
        raise DomainError(f'The clock and shift pair needs gcd(p,q) = 1, got p = {p}, q = {q}.')
    V3 = _np.diag(_e(p*_np.arange(q), q))
    V4 = _np.roll(_np.eye(q, dtype=complex), 1, axis=0)
    return V3, V4


def operatorMatrix(op: PerpOperator) -> _np.ndarray:
    """
    sum coeffs[k,l] V4^l V3^k under clockShiftRep
    """
    q = op.q
    V3, V4 = clockShiftRep(q, op.p)
    clock = _np.diag(V3)
    out = _np.zeros((q, q), dtype=complex)
    shift = _np.eye(q, dtype=complex)
    for l in range(q):
        # V4^l V3^k = shift^l diag(clock^k)
        row = op.coeffs[:, l]
        if _np.any(row):
            diag = (clock[None, :]**_np.arange(q)[:, None]*row[:, None]).sum(axis=0)
            out += shift*diag[None, :]
        shift = V4 @ shift
    return out


def unitarityResidual(op: PerpOperator) -> float:
    M = operatorMatrix(op)
    return float(_np.linalg.norm(M @ M.conj().T - _np.eye(op.q), 2))


def operatorDistance(a: PerpOperator, b: PerpOperator) -> float:
    return float(_np.linalg.norm(operatorMatrix(a) - operatorMatrix(b), 2))



##########################################################################
#                                                                        #
#   Scalarity and the finite certificate                                 #
#                                                                        #
##########################################################################


def scalarityCheck(ps: PhaseSelection, fs: FourSquare, q: Optional[int] = None) -> Certificate:
    """
    Exact test that <phi,phi>_D0perp is scalar for the Gaussian phase of ps

    Each coefficient is a sum of q-th roots of unity and is reduced modulo
    the cyclotomic polynomial.

    Out
    ------
    Certificate listing the words (k,l) with a nonzero coefficient
    """
    q = ps.q if q is None else q
    if q > constant.maxExactDim:
        raise ScopeError(f'q = {q} exceeds maxExactDim = {constant.maxExactDim}.')
    a, b, g = ps.a, ps.b, ps.gamma
    (u3, s3), (u4, s4) = d0PerpBasis(fs)
    n, m = _grid(q)
    survivors = []
    for k in range(q):
        for l in range(q):
            u = (k*u3[0] + l*u4[0], k*u3[1] + l*u4[1])
            s = (k*s3[0] + l*s4[0], k*s3[1] + l*s4[1])
            # <pi_y phi, phi> = sum_x e(-Q(u) - x.s - B(x,u))/q
            Qu = a*u[0]**2 + b*u[0]*u[1] + g*u[1]**2
            Bxu = 2*a*n*u[0] + b*(n*u[1] + m*u[0]) + 2*g*m*u[1]
            expo = (-Qu - n*s[0] - m*s[1] - Bxu) % q
            counts = _np.bincount(expo.ravel(), minlength=q)
            if not isZeroSum(rootOfUnitySum(counts, q)):
                survivors.append((k, l))
    passed = survivors == [(0, 0)]
    _logger.info('scalarity q=%d (a,b,gamma)=(%d,%d,%d): %d surviving words', q, a, b, g, len(survivors))
    return Certificate('finite_scalarity', inputs={'q': q, 'fs': fs.asTuple(), 'abg': (a, b, g)},
                       values={'surviving': survivors, 'Delta': ps.Delta}, threshold=0, passed=passed)


def finiteWeilCertificate(ps: PhaseSelection, fs: FourSquare, q: Optional[int] = None,
                          tol: Optional[float] = None) -> Certificate:
    """
    Numerical checks on L^2(Z_q^2): scalarity, unitarity of W0, the Fourier
    relation F phi = phi W0, sigma0'(W0) = W0* and <phi,phi>_D0 = 1

    In
    ------
    ps, fs: the Gaussian phase and four squares
    q: defaults to ps.q, at most maxWeilDim
    tol: residual tolerance

    Out
    ------
    Certificate
    """
    q = ps.q if q is None else q
    tol = constant.residualTol if tol is None else tol
    if q > constant.maxWeilDim:
        raise ScopeError(f'q = {q} exceeds maxWeilDim = {constant.maxWeilDim}.')
    phi = gaussianPhi(ps, fs, q, normalized=True)
    gram = innerPerp(phi, phi)
    values = {'offScalar': gram.offScalar(), 'gram00': gram.coeffs[0, 0].real}
    passed = values['offScalar'] < tol and abs(values['gram00'] - 1) < tol
    if passed:
        W = w0(phi, tol)
        values['unitarity'] = unitarityResidual(W)
        values['sigmaAdjoint'] = operatorDistance(sigma0Prime(W), adjoint(W))
        values['fourier'] = float(_np.linalg.norm(dft2(phi).values - rightAction(W, phi).values))
        gramD0 = innerD0(phi, phi)
        values['gramD0'] = float(_np.linalg.norm(gramD0 - _np.eye(q*q), 2))
        passed = all(values[k] < tol for k in ('unitarity', 'sigmaAdjoint', 'fourier', 'gramD0'))
    return Certificate('finite_weil', inputs={'q': q, 'p': fs.p, 'fs': fs.asTuple(),
                                              'abg': (ps.a, ps.b, ps.gamma)},
                       values=values, threshold=tol, passed=passed, tolerance=tol)
