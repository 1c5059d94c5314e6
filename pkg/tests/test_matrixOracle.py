# test_matrixOracle.py

from fractions import Fraction

import pytest

from orbifold.lattice import buildLattices, shiftU
from orbifold.matrixOracle import bruteForceDiophantine, finiteProjectionProbe, scalarProbe, spectralCheck
from orbifold.numberTheory import PhaseSelection
from orbifold.sysmsg import CongruenceError, DomainError, ScopeError


@pytest.mark.parametrize('rho', ['3/2', '7/5', '5/3', '3'])
def test_spectral_positive(rho):
    report = spectralCheck(rho, cutoff=10)
    assert report.minEigenvalue > 0
    assert report.passed
    assert report.hermiticityResidual < 1e-9
    assert report.dimension == Fraction(rho).denominator


def test_spectral_report_certificate():
    cert = spectralCheck(Fraction(3, 2), cutoff=8).asCertificate()
    assert cert.claim == 'spectral'
    assert cert.passed


def test_spectral_scope():
    with pytest.raises(ScopeError):
        spectralCheck('1/2')
    with pytest.raises(ScopeError):
        spectralCheck(1)
    with pytest.raises(DomainError):
        spectralCheck('abc')


def test_scalar_probe_vanishes_at_one():
    assert abs(scalarProbe(1)) < 1e-10
    assert abs(scalarProbe(2)) > 0.1
    with pytest.raises(ScopeError):
        scalarProbe('3/2')


def test_brute_force_agrees(pipelines):
    for pipe in pipelines:
        for ds in (pipe.ds, pipe.dsEps):
            report = bruteForceDiophantine(pipe.ld, ds.u3, ds.u4, ds)
            assert report.unique and report.agrees


def test_brute_force_random(randomPipelines):
    small = [pipe for pipe in randomPipelines if pipe.ld.q <= 25][:30]
    assert small
    for pipe in small:
        report = bruteForceDiophantine(pipe.ld, pipe.dsEps.u3, pipe.dsEps.u4, pipe.dsEps)
        assert report.pairs == pipe.ld.q**2
        assert report.unique and report.agrees


def test_brute_force_sampling(pipelines):
    pipe = pipelines[3]
    assert pipe.ld.q > 25
    report = bruteForceDiophantine(pipe.ld, pipe.ds.u3, pipe.ds.u4, samples=16)
    assert report.pairs == 16
    assert report.agrees


def test_brute_force_detects_singular_system(pipelines):
    pipe = pipelines[1]
    ps = PhaseSelection.override(0, 0, 0, pipe.fs, pipe.ld.q)
    ld = buildLattices(pipe.conv, pipe.fs, ps)
    u3, u4 = shiftU(ld, 'zero')
    report = bruteForceDiophantine(ld, u3, u4, strict=False)
    assert not report.unique
    assert report.agrees is None
    with pytest.raises(CongruenceError):
        bruteForceDiophantine(ld, u3, u4)


def test_brute_force_bound(pipelines):
    with pytest.raises(ScopeError):
        bruteForceDiophantine(pipelines[3].ld, 0, 0, bound=10)


@pytest.mark.parametrize('q, p', [(2, 1), (5, 2), (7, 3), (12, 7), (13, 5)])
def test_finite_projection_probe(q, p):
    cert = finiteProjectionProbe(q, p)
    assert cert.passed, cert.values


def test_finite_projection_probe_domain():
    with pytest.raises(DomainError):
        finiteProjectionProbe(6, 4)
