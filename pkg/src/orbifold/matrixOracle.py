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
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as _np
from scipy.linalg import eigvalsh as _eigvalsh

from .constant import constant
from .finiteWeil import clockShiftRep, gaussianPhi, innerD0
from .lattice import DiophantineSolution, LatticeData, solveDiophantine, systemResidual
from .numberTheory import PhaseSelection, fourSquare, selectPhase
from .projectionCertificate import gaussianSeries, seriesMatrix
from .sysmsg import CongruenceError, DomainError, ScopeError
from .theta import rawInvertibilityBound, rhoNorms
from .utils import Certificate, Phase

_logger = _logging.getLogger(__name__)



##########################################################################
#                                                                        #
#   Spectral check at rational rho                                       #
#                                                                        #
##########################################################################


@dataclass
class SpectralReport:
    """
    Spectrum of the Gaussian element in the s-dimensional representation of A_rho

    In
    ------
    rho: r/s in lowest terms
    dimension: s
    cutoff: series cutoff
    minEigenvalue: smallest eigenvalue of the hermitized matrix
    hermiticityResidual: ||A - A*||_2
    tailBudget: l^1 mass of the omitted coefficients
    predictedFloor: (1 - raw) theta3(pi/2, i rho/2)^2 when raw < 1
    """
    rho: Fraction
    dimension: int
    cutoff: int
    minEigenvalue: float
    hermiticityResidual: float
    tailBudget: float
    predictedFloor: Optional[float] = None
    passed: bool = False

    def asCertificate(self) -> Certificate:
        return Certificate('spectral', inputs={'rho': self.rho, 'dimension': self.dimension,
                                               'cutoff': self.cutoff},
                           values={'minEigenvalue': self.minEigenvalue,
                                   'hermiticityResidual': self.hermiticityResidual,
                                   'predictedFloor': self.predictedFloor},
                           threshold=self.tailBudget, passed=self.passed, tailBudget=self.tailBudget)


def _rational(rho) -> Fraction:
    try:
        return Fraction(rho)
    except (TypeError, ValueError):
        raise DomainError(f'Cannot read rho = {rho} as a rational number.')


def spectralCheck(rho, cutoff: Optional[int] = None, tol: Optional[float] = None) -> SpectralReport:
    """
    Smallest eigenvalue of sum exp(-pi rho (m^2+n^2)/2) e(rho mn/2) U^n V^m with
    V U = e(rho) U V realized by s x s clock and shift matrices

    In
    ------
    rho: rational r/s > 1, a Fraction or a string such as '3/2'
    cutoff: series cutoff
    tol: theta tolerance of the predicted floor

    Out
    ------
    SpectralReport, passed iff the smallest eigenvalue exceeds the tail budget
    """
    rho = _rational(rho)
    cutoff = cutoff or constant.cutoff
    if rho <= 1:
        raise ScopeError(f'rho = {rho} <= 1: the Gaussian element is not invertible there.')
    r, s = rho.numerator, rho.denominator
    if s > constant.spectralMaxDim:
        raise ScopeError(f'Denominator {s} exceeds spectralMaxDim = {constant.spectralMaxDim}.')
    clock, shift = clockShiftRep(s, r)
    series = gaussianSeries(Phase(rho), cutoff, float(rho), ('V', 'U'), None)
    A = seriesMatrix(series, clock, shift)
    herm = float(_np.linalg.norm(A - A.conj().T, 2))
    evals = _eigvalsh((A + A.conj().T)/2)
    floor = None
    raw = rawInvertibilityBound(float(rho), tol)
    if raw.value < 1:
        floor = (1 - raw.value)/rhoNorms(float(rho), tol)[1]**2
    report = SpectralReport(rho, s, cutoff, float(evals[0]), herm, series.tailBudget, floor)
    report.passed = report.minEigenvalue > report.tailBudget
    _logger.info('spectral rho=%s s=%d: min eigenvalue %.6g', rho, s, report.minEigenvalue)
    return report


def scalarProbe(rho, u: complex = -1, v: complex = -1, cutoff: Optional[int] = None) -> complex:
    """
    The Gaussian element evaluated at commuting unit scalars U = u, V = v,
    possible only for integer rho
    """
    rho = _rational(rho)
    cutoff = cutoff or constant.cutoff
    if rho.denominator != 1:
        raise ScopeError(f'Scalars commute only for integer rho, got {rho}.')
    series = gaussianSeries(Phase(rho), cutoff, float(rho), ('V', 'U'), None)
    total = 0j
    for (m, n) in series.coeffs:
        total += series.value((m, n))*complex(u)**n*complex(v)**m
    return total



##########################################################################
#                                                                        #
#   Brute force oracles                                                  #
#                                                                        #
##########################################################################


@dataclass
class BruteForceReport:
    q: int
    pairs: int
    unique: bool
    agrees: Optional[bool]
    failures: List[Tuple[int, int, int]] = field(default_factory=list)


def bruteForceDiophantine(ld: LatticeData, u3: int, u4: int, ds: Optional[DiophantineSolution] = None,
                          strict: bool = True, bound: Optional[int] = None,
                          samples: int = 64) -> BruteForceReport:
    """
    Enumerate all (n3, n4) in Z_q^2 solving the system for each (n1, n2)

    Every (n1, n2) is visited for q <= 25, a fixed random sample of size
    samples otherwise.

    In
    ------
    ld: LatticeData
    u3, u4: the shift
    ds: solution to compare with, solved here if None
    strict: raise CongruenceError on non-uniqueness or disagreement
    bound: largest q accepted, default constant.bruteForceMax

    Out
    ------
    BruteForceReport, failures as (n1, n2, number of solutions)
    """
    bound = bound or constant.bruteForceMax
    q = ld.q
    if q > bound:
        raise ScopeError(f'q = {q} exceeds the brute force bound {bound}.')
    if ds is None:
        try:
            ds = solveDiophantine(ld, u3, u4)
        except CongruenceError:
            ds = None
    if q <= 25:
        pairs = [(n1, n2) for n1 in range(q) for n2 in range(q)]
    else:
        rng = _np.random.default_rng(0)
        pairs = [tuple(int(x) for x in rng.integers(0, q, 2)) for _ in range(samples)]
    n3, n4 = _np.meshgrid(_np.arange(q), _np.arange(q), indexing='ij')
    failures = []
    agrees = None if ds is None else True
    for n1, n2 in pairs:
        r3, r4 = systemResidual(ld, u3, u4, (n1, n2, n3, n4))
        hits = _np.argwhere((r3 == 0) & (r4 == 0))
        if len(hits) != 1:
            failures.append((n1, n2, len(hits)))
            continue
        if ds is not None and tuple(int(x) for x in hits[0]) != ds.solve(n1, n2):
            agrees = False
    report = BruteForceReport(q, len(pairs), not failures, agrees, failures)
    if strict and (failures or agrees is False):
        raise CongruenceError(f'Brute force disagrees with the solver for q = {q}: {failures[:4]}.')
    return report


def finiteProjectionProbe(q: int, p: int, ps: Optional[PhaseSelection] = None,
                          tol: Optional[float] = None) -> Certificate:
    """
    ||<phi,phi>_D0 - I|| for the normalized Gaussian on Z_q^2
    """
    tol = constant.residualTol if tol is None else tol
    if q < 1 or _math.gcd(p, q) != 1:
        raise DomainError(f'The probe needs gcd(p,q) = 1, got p = {p}, q = {q}.')
    fs = fourSquare(p)
    ps = selectPhase(fs, q) if ps is None else ps
    phi = gaussianPhi(ps, fs, q, normalized=True)
    residual = float(_np.linalg.norm(innerD0(phi, phi) - _np.eye(q*q), 2))
    return Certificate('finite_projection', inputs={'q': q, 'p': p, 'fs': fs.asTuple(),
                                                    'abg': (ps.a, ps.b, ps.gamma)},
                       values={'residual': residual}, threshold=tol, passed=residual < tol,
                       tolerance=tol)
