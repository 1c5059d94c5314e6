# test_theta.py

import math

import mpmath
import numpy as np
import pytest

from orbifold.constant import constant
from orbifold.sysmsg import DomainError, FlagError
from orbifold.theta import (concavityCheck, energyBound, energyGridCheck, gaussianOverlap,
                            gaussianOverlapQuadrature, gFunction, psi, rawInvertibilityBound,
                            rhoDeviationBound, rhoNorms, secantCheck, shiftDeviationBound, theta,
                            thetaIdentitiesCheck, thetaImag)

SQRT2 = math.sqrt(2)


def test_theta_domain():
    with pytest.raises(DomainError):
        theta(3, 0, -1j)
    with pytest.raises(FlagError):
        theta(1, 0, 1j)
    with pytest.raises(DomainError):
        thetaImag(3, 0.0, 0.0)


def test_theta_matches_mpmath():
    t = 0.3 + 0.8j
    z = 0.4 - 0.1j
    q = mpmath.exp(1j*mpmath.pi*t)
    for kind in (2, 3, 4):
        ref = complex(mpmath.jtheta(kind, z, q))
        assert abs(theta(kind, z, t) - ref) < 1e-12


def test_theta_imag_agrees_with_complex_path():
    for kind in (2, 3, 4):
        assert thetaImag(kind, 0.7, 1.3) == pytest.approx(theta(kind, 0.7, 1.3j).real, abs=1e-13)


def test_gaussian_identity_at_two():
    # theta3(0,2i) = (1 + sqrt 2) theta2(0,2i)
    assert abs(theta(3, 0, 2j) - (1 + SQRT2)*theta(2, 0, 2j)) < 1e-12


def test_gaussian_identity_extended():
    dps = 40
    with mpmath.workdps(dps):
        lhs = theta(3, 0, 2j, tol=1e-25, dps=dps)
        rhs = (1 + mpmath.sqrt(2))*theta(2, 0, 2j, tol=1e-25, dps=dps)
        assert abs(lhs - rhs) < mpmath.mpf('1e-20')


def test_ratio_at_half():
    ratio = thetaImag(3, 0.0, 0.5)/thetaImag(3, np.pi/2, 0.5)
    assert abs(ratio - (1 + SQRT2)) < 1e-12


def test_g_vanishes_at_one():
    assert abs(gFunction(1.0)) < 1e-12


def test_psi_constants():
    assert psi(0.5)*math.exp(math.pi/2) < constant.rho1Bound
    assert psi(2.0)*math.exp(2*math.pi) < constant.rho1InvBound
    direct = sum(k*math.exp(-math.pi*0.7*k*k) for k in range(1, 40))
    assert psi(0.7) == pytest.approx(direct, rel=1e-13)


def test_gaussian_overlap_quadrature():
    for s, t in ((1.0, 1.0), (0.5, -0.3), (0.0, 2.0)):
        assert abs(gaussianOverlap(s, t) - gaussianOverlapQuadrature(s, t)) < 1e-10


def test_energy_at_x0():
    assert energyBound(constant.x0) < 0.532


def test_energy_grid():
    cert = energyGridCheck(10000)
    assert cert.passed
    assert cert.values['max'] < 1


def test_energy_requires_x_above_one():
    with pytest.raises(DomainError):
        energyBound(1.0)


def test_raw_bound_below_energy():
    for b in np.linspace(1.01, 9.5, 40):
        raw = rawInvertibilityBound(b)
        assert raw.value < 1
        assert raw.dominated


def test_rho_norms():
    norm, normInv = rhoNorms(constant.x0)
    assert norm > 1 and 0 < normInv
    assert rhoNorms(1.0)[0] == pytest.approx(thetaImag(3, 0.0, 0.5))
    with pytest.raises(DomainError):
        rhoNorms(0.9)


@pytest.mark.parametrize('m', [1, 2, 3, 4, -2])
def test_rho_deviation_bound(m):
    dev = rhoDeviationBound(1.3, m, gridPoints=512)
    assert dev.consistent


@pytest.mark.parametrize('m', [1, -1, 2])
def test_shift_deviation_bound(m):
    assert shiftDeviationBound(0.8, m, gridPoints=512).consistent


def test_concavity_and_secant():
    assert concavityCheck()
    facts = secantCheck()
    assert facts.dominated
    assert facts.tangentSlope == pytest.approx(8*np.pi*1.018*math.exp(-2.5*math.pi))


@pytest.mark.parametrize('t', [1j, 0.3 + 0.7j, -0.8 + 1.5j])
def test_identities_binary64(t):
    cert = thetaIdentitiesCheck(t, 1e-10)
    assert cert.passed, cert.values


def test_identities_extended():
    cert = thetaIdentitiesCheck(0.2 + 1.1j, 1e-20, dps=40)
    assert cert.passed, cert.values


def test_identities_extended_follow_dps():
    low = thetaIdentitiesCheck(0.3 + 1.1j, 1e-32, dps=40)
    high = thetaIdentitiesCheck(0.3 + 1.1j, 1e-72, dps=80)
    assert low.passed and high.passed, (low.values, high.values)
    assert (low.inputs['dps'], high.inputs['dps']) == (40, 80)
    assert max(high.values.values()) < 1e-60


def test_rho_deviation_bound_extended():
    binary = rhoDeviationBound(constant.x0, 1, gridPoints=256)
    extended = rhoDeviationBound(constant.x0, 1, gridPoints=256, dps=50)
    assert extended.consistent
    assert extended.bound == pytest.approx(binary.bound, rel=1e-13)
    assert rhoDeviationBound(constant.x0, 2, gridPoints=256, dps=50).bound == pytest.approx(
        rhoDeviationBound(constant.x0, 2, gridPoints=256).bound)
