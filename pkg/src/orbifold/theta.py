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
import math as _math
from contextlib import nullcontext as _nullcontext
from dataclasses import dataclass
from typing import Optional, Tuple

import mpmath as _mp
import numpy as _np
from scipy.integrate import quad as _quad

from .constant import constant
from .sysmsg import FlagError, DomainError
from .utils import Certificate

_logger = _logging.getLogger(__name__)



##########################################################################
#                                                                        #
#   Theta functions                                                      #
#                                                                        #
##########################################################################


#   theta2(z,t) = sum_n exp(pi i t (n+1/2)^2 + 2 i z (n+1/2))
#   theta3(z,t) = sum_n exp(pi i t n^2 + 2 i z n)
#   theta4(z,t) = sum_n (-1)^n exp(pi i t n^2 + 2 i z n)

_kinds = (2, 3, 4)


def _truncation(y, b, tol, half) -> Tuple[int, float]:
    """
    Smallest N for which the omitted terms have modulus sum below tol/16

    In
    ------
    y: Im(t) > 0
    b: |Im(z)|
    tol: absolute tolerance
    half: True for the half integer lattice of theta2

    Out
    ------
    N: terms |s| <= N (+1/2) are kept
    tail: majorant of the omitted sum
    """
    target = _math.log(tol/16)
    shift = 0.5 if half else 0.0
    N = 0
    while N <= constant.maxTerms:
        s = N + 1 + shift
        logRatio = -_np.pi*y*(2*s + 1) + 2*b
        if logRatio < 0:
            logT = -_np.pi*y*s*s + 2*b*s
            logTail = logT + _math.log(2) - _math.log1p(-_math.exp(logRatio))
            if logTail < target:
                return N, _math.exp(logTail)
        N += 1 if N < 64 else N//8
    raise DomainError(f'Theta series needs more than {constant.maxTerms} terms at Im(t) = {y}.')


def _checkKind(kind):
    if kind not in _kinds:
        raise FlagError(f'Flag \'kind\' must be one of {_kinds}, got {kind}.')


def theta(kind: int, z, t, tol: Optional[float] = None, dps: Optional[int] = None):
    """
    Jacobi theta function theta_kind(z, t)

    In
    ------
    kind: 2, 3 or 4
    z: complex argument
    t: complex with Im(t) > 0
    tol: absolute truncation tolerance, default constant.tol or constant.tolExtended
    dps: mpmath decimal digits for the extended precision mode, None for binary64

    Out
    ------
    complex in binary64 mode, mpmath.mpc in extended mode
    """
    _checkKind(kind)
    tc, zc = complex(t), complex(z)
    if tc.imag <= 0:
        raise DomainError(f't = {t} is not in the upper half plane.')
    if tol is None:
        tol = constant.tol if dps is None else constant.tolExtended
    if tol <= 0:
        raise DomainError('tol must be positive.')
    N, tail = _truncation(tc.imag, abs(zc.imag), tol, kind == 2)
    lo = -N - 1 if kind == 2 else -N
    _logger.debug('theta%d truncated at N=%d, tail %.3e', kind, N, tail)
    if dps is None:
        n = _np.arange(lo, N + 1)
        s = n + 0.5 if kind == 2 else n.astype(float)
        terms = _np.exp(1j*_np.pi*tc*s*s + 2j*zc*s)
        if kind == 4:
            terms = terms*_np.where(n % 2 == 0, 1.0, -1.0)
        return complex(_math.fsum(terms.real) + 1j*_math.fsum(terms.imag))
    with _mp.workdps(dps):
        tm, zm = _mp.mpmathify(t), _mp.mpmathify(z)
        half = _mp.mpf(1)/2
        total = _mp.mpc(0)
        for n in range(lo, N + 1):
            s = n + half if kind == 2 else _mp.mpf(n)
            term = _mp.exp(1j*_mp.pi*tm*s*s + 2j*zm*s)
            total += -term if (kind == 4 and n % 2) else term
        return +total


def thetaImag(kind: int, z, x, tol: Optional[float] = None):
    """
    theta_kind(z, i x) for real z and x > 0, vectorised over numpy arrays

    In
    ------
    kind: 2, 3 or 4
    z: real, scalar or array
    x: positive real, scalar or array, broadcast against z

    Out
    ------
    real, scalar or array
    """
    _checkKind(kind)
    tol = constant.tol if tol is None else tol
    z, x = _np.broadcast_arrays(_np.asarray(z, dtype=float), _np.asarray(x, dtype=float))
    if _np.any(x <= 0):
        raise DomainError('x must be positive.')
    N, _ = _truncation(float(_np.min(x)), 0.0, tol, kind == 2)
    n = _np.arange(-N - 1 if kind == 2 else -N, N + 1)
    s = n + 0.5 if kind == 2 else n.astype(float)
    sign = _np.where(n % 2 == 0, 1.0, -1.0) if kind == 4 else 1.0
    terms = sign*_np.exp(-_np.pi*x[..., None]*s*s)*_np.cos(2*z[..., None]*s)
    out = terms.sum(axis=-1)
    return float(out) if out.ndim == 0 else out


def psi(x, tol: Optional[float] = None):
    """
    Psi(x) = sum_{k >= 1} k exp(-pi x k^2), vectorised

    In
    ------
    x: positive real, scalar or array

    Out
    ------
    real, scalar or array
    """
    tol = constant.tol if tol is None else tol
    x = _np.asarray(x, dtype=float)
    if _np.any(x <= 0):
        raise DomainError('Psi needs x > 0.')
    xmin = float(_np.min(x))
    # k exp(-pi x k^2) decreases with ratio below 2 exp(-pi x (2k+1)) for k >= K
    K = 1
    while True:
        logRatio = _math.log(2) - _np.pi*xmin*(2*K + 1)
        if logRatio < 0:
            logTail = _math.log(K) - _np.pi*xmin*K*K - _math.log1p(-_math.exp(logRatio))
            if logTail < _math.log(tol/16):
                break
        K += 1
    k = _np.arange(1, K)
    out = (k*_np.exp(-_np.pi*x[..., None]*k*k)).sum(axis=-1)
    return float(out) if out.ndim == 0 else out


def gaussianOverlap(s, t):
    """
    H(s,t) = int conj(h(x)) h(x+s) e(t x) dx = e(-st/2) exp(-pi (s^2 + t^2)/2)/sqrt(2)
    for the Gaussian h(x) = exp(-pi x^2)
    """
    s, t = _np.asarray(s, dtype=float), _np.asarray(t, dtype=float)
    out = _np.exp(-1j*_np.pi*s*t - _np.pi*(s*s + t*t)/2)/_np.sqrt(2)
    return complex(out) if out.ndim == 0 else out


def gaussianOverlapQuadrature(s: float, t: float) -> complex:
    """
    H(s,t) by adaptive quadrature, an independent check of gaussianOverlap
    """
    f = lambda x: _np.exp(-_np.pi*x*x - _np.pi*(x + s)**2)
    re = _quad(lambda x: f(x)*_np.cos(2*_np.pi*t*x), -_np.inf, _np.inf, epsabs=1e-14, epsrel=1e-13)[0]
    im = _quad(lambda x: f(x)*_np.sin(2*_np.pi*t*x), -_np.inf, _np.inf, epsabs=1e-14, epsrel=1e-13)[0]
    return complex(re, im)



##########################################################################
#                                                                        #
#   The invertibility bounds                                             #
#                                                                        #
##########################################################################


def _checkAbove(x, bound, label):
    if _np.any(_np.asarray(x) <= bound):
        raise DomainError(f'{label} must exceed {bound}.')


def energyBound(x, tol: Optional[float] = None):
    """
    E(x) = (K (x-1) exp(-5 pi x/2) + 2 theta2(0,2ix)^2)/theta3(pi/2, ix/2)^2

    In
    ------
    x: real > 1, scalar or array

    Out
    ------
    real, scalar or array
    """
    _checkAbove(x, 1, 'x')
    x = _np.asarray(x, dtype=float)
    h = constant.K*(x - 1)*_np.exp(-5*_np.pi*x/2)
    num = h + 2*thetaImag(2, 0.0, 2*x, tol)**2
    den = thetaImag(3, _np.pi/2, x/2, tol)**2
    out = num/den
    return float(out) if _np.ndim(out) == 0 else out


@dataclass(frozen=True)
class RawBound:
    """
    The invertibility quantity at beta^2 with its energy majorant
    """
    betaSq: float
    value: float
    energy: float
    dominated: bool


def rawInvertibilityBound(betaSq: float, tol: Optional[float] = None) -> RawBound:
    """
    (8 pi (b-1) Psi(b/2) Psi(2b) + 2 theta2(0, 2ib)^2)/theta3(pi/2, ib/2)^2 at b = beta^2

    In
    ------
    betaSq: real > 1

    Out
    ------
    RawBound, with dominated = value <= energyBound(betaSq)
    """
    _checkAbove(betaSq, 1, 'beta^2')
    tol = constant.tol if tol is None else tol
    b = float(betaSq)
    num = 8*_np.pi*(b - 1)*psi(b/2, tol)*psi(2*b, tol) + 2*thetaImag(2, 0.0, 2*b, tol)**2
    value = num/thetaImag(3, _np.pi/2, b/2, tol)**2
    energy = energyBound(b, tol)
    return RawBound(b, float(value), float(energy), bool(value <= energy + tol))


def rhoNorms(betaSq: float, tol: Optional[float] = None) -> Tuple[float, float]:
    """
    Norms of rho_0 and of its inverse, theta3(0, i b/2) and 1/theta3(pi/2, i b/2)

    In
    ------
    betaSq: real >= 1

    Out
    ------
    (normRho0, normRho0Inv)
    """
    if betaSq < 1:
        raise DomainError('beta^2 must be at least 1.')
    b = float(betaSq)
    return thetaImag(3, 0.0, b/2, tol), 1/thetaImag(3, _np.pi/2, b/2, tol)


def rhoProfile(betaSq: float, m: int, t, tol: Optional[float] = None):
    """
    rho_m(t) = theta3(pi t + pi beta^2 m/2, i beta^2/2) on a t-grid
    """
    b = float(betaSq)
    return thetaImag(3, _np.pi*_np.asarray(t, dtype=float) + _np.pi*b*m/2, b/2, tol)


@dataclass(frozen=True)
class RhoDeviation:
    m: int
    bound: float
    gridSup: float
    consistent: bool


def rhoDeviationBound(betaSq: float, m: int, tol: Optional[float] = None,
                      gridPoints: Optional[int] = None, dps: Optional[int] = None) -> RhoDeviation:
    """
    Upper bound on ||rho_m - rho_0||, checked against the sup on a t-grid

    Even m = 2k gives 4 pi |k| (beta^2 - 1) Psi(beta^2/2), odd m gives
    2 theta2(0, 2i beta^2).

    In
    ------
    betaSq: real > 1
    m: integer
    gridPoints: size of the t-grid on [0,1)
    dps: mpmath digits for the odd bound, None for binary64

    Out
    ------
    RhoDeviation
    """
    _checkAbove(betaSq, 1, 'beta^2')
    tol = constant.tol if tol is None else tol
    gridPoints = gridPoints or constant.gridPoints
    b = float(betaSq)
    if m % 2 == 0:
        bound = 4*_np.pi*abs(m//2)*(b - 1)*psi(b/2, tol)
    elif dps is None:
        bound = 2*thetaImag(2, 0.0, 2*b, tol)
    else:
        bound = 2*theta(2, 0, 2j*b, dps=dps).real
    t = _np.arange(gridPoints)/gridPoints
    sup = float(_np.max(_np.abs(rhoProfile(b, m, t, tol) - rhoProfile(b, 0, t, tol))))
    return RhoDeviation(m, float(bound), sup, sup <= bound + tol)


def shiftDeviationBound(b: float, m: int, tol: Optional[float] = None,
                        gridPoints: Optional[int] = None) -> RhoDeviation:
    """
    |theta3(pi t + 2 pi b m, ib) - theta3(pi t, ib)| <= 8 pi |m| (b - 1/2) Psi(b)
    for b > 1/2, with the grid sup over t in [0,1)
    """
    _checkAbove(b, 0.5, 'b')
    tol = constant.tol if tol is None else tol
    gridPoints = gridPoints or constant.gridPoints
    t = _np.arange(gridPoints)/gridPoints
    f = thetaImag(3, _np.pi*t + 2*_np.pi*b*m, b, tol)
    g = thetaImag(3, _np.pi*t, b, tol)
    sup = float(_np.max(_np.abs(f - g)))
    bound = 8*_np.pi*abs(m)*(b - 0.5)*psi(b, tol)
    return RhoDeviation(m, float(bound), sup, sup <= bound + tol)



##########################################################################
#                                                                        #
#   Checks behind the energy function                                    #
#                                                                        #
##########################################################################


def gFunction(x, tol: Optional[float] = None):
    """
    g(x) = theta3(0, 2ix) - (1 + sqrt 2) theta2(0, 2ix), vanishing at x = 1
    """
    x = _np.asarray(x, dtype=float)
    return thetaImag(3, 0.0, 2*x, tol) - (1 + _np.sqrt(2))*thetaImag(2, 0.0, 2*x, tol)


def gSecondDerivativeTerms(x, terms: int = 12):
    """
    Terms k = 0..terms-1 of g''(x) = 8 pi^2 sum_k [(k+1)^4 exp(-2 pi x (k+1)^2)
    - (1 + sqrt 2)(k+1/2)^4 exp(-2 pi x (k+1/2)^2)]

    Out
    ------
    array of shape x.shape + (terms,)
    """
    x = _np.asarray(x, dtype=float)[..., None]
    k = _np.arange(terms)
    a, h = k + 1.0, k + 0.5
    return 8*_np.pi**2*(a**4*_np.exp(-2*_np.pi*x*a*a) - (1 + _np.sqrt(2))*h**4*_np.exp(-2*_np.pi*x*h*h))


def concavityCheck(grid=None) -> bool:
    """
    Every term of the g'' series is negative for x on the grid, x >= 1
    """
    grid = _np.linspace(1, 10, 901) if grid is None else _np.asarray(grid, dtype=float)
    _checkAbove(grid, 1 - 1e-12, 'x')
    return bool(_np.all(gSecondDerivativeTerms(grid) < 0))


@dataclass(frozen=True)
class SecantFacts:
    tangentSlope: float
    secantSlope: float
    dominated: bool


def secantCheck(stop: Optional[float] = None, tol: Optional[float] = None) -> SecantFacts:
    """
    Slope h'(1) = K exp(-5 pi/2) of h(x) = K (x-1) exp(-5 pi x/2) and the secant
    slope of g on [1, stop]; on that interval g lies above its secant and h
    below its tangent
    """
    stop = constant.tangentStop if stop is None else stop
    tangent = constant.K*_np.exp(-5*_np.pi/2)
    secant = float((gFunction(stop, tol) - gFunction(1.0, tol))/(stop - 1))
    return SecantFacts(float(tangent), secant, bool(tangent < secant))


def energyGridCheck(points: Optional[int] = None, upper: float = 10.0, tol: Optional[float] = None) -> Certificate:
    """
    E(x) < 1 on a grid of (1, upper] and E decreasing on the part beyond x0
    """
    points = points or constant.energyGrid
    x = _np.linspace(1 + 1e-3, upper, points)
    E = energyBound(x, tol)
    tail = E[x > constant.x0]
    decreasing = bool(_np.all(_np.diff(tail) <= 0))
    atX0 = energyBound(constant.x0, tol)
    passed = bool(_np.all(E < 1)) and decreasing and atX0 < constant.energyAtX0
    return Certificate('energy_grid', inputs={'points': points, 'upper': upper},
                       values={'max': float(E.max()), 'atX0': atX0, 'decreasingBeyondX0': decreasing},
                       threshold=1.0, passed=passed, tolerance=tol or constant.tol)



##########################################################################
#                                                                        #
#   Identity suite                                                       #
#                                                                        #
##########################################################################


def thetaIdentitiesCheck(t, tol: Optional[float] = None, dps: Optional[int] = None,
                         z=0.3 + 0.2j) -> Certificate:
    """
    Check the duplication, shift and inversion identities at argument t

    In
    ------
    t: complex with Im(t) > 0
    tol: tolerance on the relative residuals
    dps: mpmath digits, None for binary64
    z: sample argument used in the identities

    Out
    ------
    Certificate with one residual per identity
    """
    tc = complex(t)
    if tc.imag <= 0:
        raise DomainError(f't = {t} is not in the upper half plane.')
    tol = (constant.tol if dps is None else constant.tolExtended) if tol is None else tol
    inner = tol/64

    def th(kind, zz, tt):
        return theta(kind, zz, tt, inner, dps)

    ctx = _mp.workdps(dps) if dps is not None else _nullcontext()
    with ctx:
        if dps is not None:
            t, z = _mp.mpmathify(t), _mp.mpmathify(z)
            pi, sqrt, exp = _mp.pi, _mp.sqrt, _mp.exp
            one = _mp.mpf(1)
        else:
            t, z = complex(t), complex(z)
            pi, sqrt, exp = _np.pi, _np.emath.sqrt, _np.exp
            one = 1.0
        pairs = {
            'duplication3': (th(3, z, t), th(3, 2*z, 4*t) + th(2, 2*z, 4*t)),
            'duplication4': (th(4, z, t), th(3, 2*z, 4*t) - th(2, 2*z, 4*t)),
            'shift2': (th(2, pi, t), -th(2, 0, t)),
            'shift3': (th(3, z + pi/2, t), th(4, z, t)),
            'inversion3': (th(3, z, t), (-1j*t)**(-one/2)*exp(z*z/(pi*1j*t))*th(3, z/t, -1/t)),
            'inversion4': (th(4, z, t), (-1j*t)**(-one/2)*exp(z*z/(pi*1j*t))*th(2, z/t, -1/t)),
            }
        residuals = {k: float(abs(a - b)/max(1.0, float(abs(a)))) for k, (a, b) in pairs.items()}
    passed = all(r < tol for r in residuals.values())
    _logger.info('theta identities at t=%s: max residual %.3e', tc, max(residuals.values()))
    return Certificate('theta_identities', inputs={'t': tc, 'z': complex(z), 'dps': dps},
                       values=residuals, threshold=tol, passed=passed, tolerance=tol)
