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


import os as _os
import numpy as _np


class constant:

    # numerical tolerances
    tol              = 1.000e-13        # default theta truncation tolerance
    tolExtended      = 1.000e-30        # tolerance used with extended precision
    residualTol      = 1.000e-09        # matrix residuals, unitarity, hermiticity
    floor            = 1.000e-300       # series coefficients below this are dropped

    # precision
    precisionEnv     = 'ORBIFOLD_PRECISION'
    extendedDigits   = 40               # default mpmath digits for extended mode
    workingDigits    = 34               # digits for theta-derived reals alpha, beta
    enclosureDepth   = 96               # CF coefficients used for periodic input

    # truncation
    cutoff           = 12               # default series cutoff |m|,|n| <= cutoff
    splitCutoff      = 10               # N in the four-way split bound
    maxTerms         = 1000000          # hard cap on theta truncation index
    gridPoints       = 2048             # t-grid for rho_m deviation sup
    energyGrid       = 10000            # x-grid on (1,10] for the energy check

    # energy function constants
    K                = 8*_np.pi*1.018   # coefficient of (x-1) exp(-5 pi x/2)
    x0               = 1 + 2/(5*_np.pi) # location of the maximum of h(x)
    energyAtX0       = 0.532            # upper value of the energy at x0
    tangentStop      = 1.128            # end of the secant interval
    rho1Bound        = 1.01798          # majorant of psi(1/2) exp(pi/2)
    rho1InvBound     = 1.000000014      # majorant of psi(2) exp(2 pi)

    # sizes
    bruteForceMax    = 50               # largest q for brute force enumeration
    maxWeilDim       = 40               # largest q for q^2 x q^2 operator checks
    maxExactDim      = 24               # largest q for exact cyclotomic reduction
    spectralMaxDim   = 400              # largest s for the spectral oracle

    def __init__():
        """
        Containing the numerical constants and defaults of orbifold

        Tolerances
        ------
        tol: theta truncation tolerance, the tail is kept below tol/16
        tolExtended: tolerance for the extended precision mode
        residualTol: tolerance on matrix residuals
        floor: weights below floor are dropped from a series

        Precision
        ------
        extendedDigits: mpmath digits, overridden by ORBIFOLD_PRECISION
        workingDigits: digits for alpha, beta and the like
        enclosureDepth: number of CF coefficients unrolled for periodic theta

        Truncation
        ------
        cutoff: default series cutoff
        splitCutoff: cutoff N of the four-way split
        gridPoints: t-grid size for rho deviation

        Energy function
        ------
        K: 8 pi 1.018
        x0: 1 + 2/(5 pi)
        energyAtX0: energy at x0 is below this
        tangentStop: the secant is taken on [1, tangentStop]

        Sizes
        ------
        bruteForceMax: q above this is refused by the brute force oracle
        maxWeilDim: q above this skips L^2(Z_q^2) operator checks
        maxExactDim: q above this skips the exact scalarity check
        """
        pass

    @staticmethod
    def precision() -> int:
        """
        Decimal digits for the extended precision mode, read from the
        environment variable ORBIFOLD_PRECISION each time

        Out
        ------
        digits: int
        """
        value = _os.environ.get(constant.precisionEnv)
        if value is None:
            return constant.extendedDigits
        try:
            digits = int(value)
        except ValueError:
            raise ValueError(f'{constant.precisionEnv} must be an integer, got \'{value}\'.')
        if digits < 16:
            raise ValueError(f'{constant.precisionEnv} must be at least 16.')
        return digits
