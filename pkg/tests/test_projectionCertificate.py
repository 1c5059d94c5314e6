# test_projectionCertificate.py

import dataclasses
from fractions import Fraction

import numpy as np
import pytest

from orbifold.finiteWeil import clockShiftRep
from orbifold.lattice import buildLattices, phasePolynomial, shiftU, solveDiophantine
from orbifold.numberTheory import Irrational, checkApproximation, convergents
from orbifold.projectionCertificate import (NCSeries, adjointSeries, centralityCertificate, certifyAll,
                                            cutdownApproximants, cutdownCertificate, cutdownDecay, fourierMap,
                                            gaussianSeries, hermiticityResidual, invertibilityCertificate,
                                            muSign, nuCongruences, prepare, primitiveForm, seriesEqual,
                                            seriesInnerFF, seriesInnerFU1F, seriesMatrix,
                                            subprojectionTrace, traceReport)
from orbifold.sysmsg import CongruenceError, DomainError, FlagError, ScopeError
from orbifold.theta import psi, thetaImag
from orbifold.utils import Phase


####################
#     Pipeline     #
####################


def test_prepare_needs_one_rational(sqrt2m1):
    with pytest.raises(FlagError):
        prepare(sqrt2m1)
    with pytest.raises(FlagError):
        prepare(sqrt2m1, 1, 2, index=1)
    with pytest.raises(DomainError):
        prepare(sqrt2m1, index=-1)
    with pytest.raises(DomainError):
        prepare(sqrt2m1, 2, 4)


def test_prepare_refuses_poor_approximation(sqrt2m1):
    with pytest.raises(ScopeError):
        prepare(sqrt2m1, 1, 4)


def test_prepare_orients_above_convergents(sqrt2m1):
    pipe = prepare(sqrt2m1, index=3)
    assert pipe.conv.reflected
    assert (pipe.ld.p, pipe.ld.q) == (7, 12)


def test_override_breaks_solver(sqrt2m1):
    with pytest.raises(CongruenceError):
        prepare(sqrt2m1, index=2, override=(0, 0, 0))


####################
#  Invertibility   #
####################


def test_invertibility_on_convergents(irrationals):
    for name, theta in irrationals.items():
        for conv in convergents(theta, 9):
            if not checkApproximation(theta, conv.p, conv.q)[1]:
                continue
            cert = invertibilityCertificate(conv.betaSq)
            assert cert.passed, (name, conv.p, conv.q)
            assert cert.values['raw'] < 1
            assert np.isfinite(cert.values['inverseNormBound'])


def test_invertibility_scope():
    with pytest.raises(ScopeError):
        invertibilityCertificate(1.0)
    with pytest.raises(ScopeError):
        invertibilityCertificate(0.7)


####################
#   Centrality     #
####################


def test_centrality(pipelines):
    for pipe in pipelines:
        cert = centralityCertificate(pipe.ld)
        assert cert.passed, cert.values
        assert cert.values['majorant'] < 12*np.pi/pipe.ld.q
        assert cert.values['l1'] <= cert.values['majorant']


####################
#     Cut down     #
####################


def test_nu_congruences(randomPipelines):
    for pipe in randomPipelines[:100]:
        nu1, nu2 = nuCongruences(pipe.ld, pipe.dsEps)
        assert nu1.isTrivial()
        assert nu2.equivalent(Phase(Fraction(1, pipe.ld.q)))


def test_cutdown_certificate(pipelines):
    for pipe in pipelines:
        cert = cutdownCertificate(pipe.ld, pipe.dsEps, pipe.ppEps)
        assert cert.passed, cert.values
        assert cert.values['l1'] <= cert.values['splitBound']
        assert cert.values['conjugation'] <= cert.values['conjugationBound']


def test_cutdown_decays_along_golden_convergents(irrationals):
    pipes = [prepare(irrationals['golden'], index=n) for n in range(4, 10)]
    assert [pipe.ld.q for pipe in pipes] == [5, 8, 13, 21, 34, 55]
    cert = cutdownDecay(pipes)
    assert cert.passed, cert.values
    rows = cert.values['rows']
    split = [r['splitBound'] for r in rows]
    conj = [r['conjugationBound'] for r in rows]
    assert all(a > b for a, b in zip(split, split[1:]))
    assert all(a > b for a, b in zip(conj, conj[1:]))
    assert cert.values['maxQSplitBound'] < 4
    rate = 4*np.pi*thetaImag(3, 0.0, 0.5)*psi(0.5)
    for r in rows:
        assert r['qConjugationBound'] == pytest.approx(rate)
        assert r['l1'] <= r['splitBound']


def test_cutdown_decay_needs_increasing_q(pipelines):
    with pytest.raises(DomainError):
        cutdownDecay(pipelines[:1])
    with pytest.raises(DomainError):
        cutdownDecay([pipelines[2], pipelines[1]])


def test_cutdown_records_determinant_notes(pipelines):
    pipe = pipelines[1]
    assert cutdownCertificate(pipe.ld, pipe.dsEps, pipe.ppEps).notes == ''
    ps = dataclasses.replace(pipe.ps, Delta=pipe.ps.Delta + pipe.ld.q)
    ld = buildLattices(pipe.conv, pipe.fs, ps)
    ds = solveDiophantine(ld, *shiftU(ld, 'eps1'))
    cert = cutdownCertificate(ld, ds, phasePolynomial(ld, ds, 'eps1'))
    assert ds.notes and cert.notes == ds.notes
    assert cert.values['detR'] != ps.Delta


def test_cutdown_needs_eps_shift(pipelines):
    pipe = pipelines[1]
    with pytest.raises(FlagError):
        cutdownCertificate(pipe.ld, pipe.ds, pipe.pp)
    with pytest.raises(FlagError):
        seriesInnerFU1F(pipe.ld, pipe.ds, pipe.pp)


def test_cutdown_approximants_are_unitary(pipelines):
    for pipe in pipelines[:6]:
        cert = cutdownApproximants(pipe.ld, pipe.dsEps, pipe.ppEps)
        assert cert.passed, cert.values


def test_inner_f_u1_f_prefactor(pipelines):
    pipe = pipelines[2]
    series = seriesInnerFU1F(pipe.ld, pipe.dsEps, pipe.ppEps, cutoff=8)
    assert set(series.prefactor) == {'mu0Half', 'K', 'c3', 'c4'}
    assert series.labels == ('W1', 'W2')
    assert 0 <= series.tailBudget < 1e-10


####################
#      Traces      #
####################


def test_trace_is_covolume(pipelines):
    for pipe in pipelines:
        cert = traceReport(pipe.ld)
        assert cert.passed
        assert cert.values['trace'] == pytest.approx(pipe.ld.covolume)
        assert cert.values['complement'] == pytest.approx(1 - pipe.ld.covolume)
        assert cert.values['subtraces'][pipe.ld.q] == pytest.approx(pipe.ld.covolume)


def test_subprojection_trace(sqrt2m1):
    cs = convergents(sqrt2m1, 8)
    for n in range(6):
        t = subprojectionTrace(sqrt2m1, n)
        assert 0 < t < 1
        assert t == pytest.approx(cs[n].q*abs(cs[n + 1].error))


####################
#      Series      #
####################


def test_inner_series_is_hermitian(pipelines):
    for pipe in pipelines:
        series = seriesInnerFF(pipe.ld, cutoff=8)
        assert hermiticityResidual(series) < 1e-12


def test_primitive_form_is_fourier_invariant(pipelines):
    for pipe in pipelines:
        X = primitiveForm(pipe.ld, cutoff=6)
        assert seriesEqual(fourierMap(X, 'sigma'), X)
        for (m, n), (w, ph) in X.coeffs.items():
            assert m % pipe.ld.q == 0 and n % pipe.ld.q == 0


def test_mu_sign(pipelines):
    ld = pipelines[2].ld
    assert muSign(ld, 0, 0) == 1
    assert muSign(ld, 1, 1) == 1
    assert muSign(ld, 1, 0) == muSign(ld, 0, 1)


def test_fourier_map_has_order_four():
    series = gaussianSeries(Phase(Fraction(2, 7)), 5, 9/7, ('V3', 'V4'), 'Dperp')
    out = series
    for _ in range(4):
        out = fourierMap(out, 'sigma_prime')
    assert seriesEqual(out, series)
    twice = adjointSeries(adjointSeries(series))
    assert seriesEqual(twice, series)


def test_fourier_map_flags(pipelines):
    X = primitiveForm(pipelines[0].ld, cutoff=3)
    with pytest.raises(FlagError):
        fourierMap(X, 'tau')
    with pytest.raises(FlagError):
        fourierMap(X, 'sigma_prime')
    bare = NCSeries(dict(X.coeffs), X.labels, X.commutation)
    with pytest.raises(FlagError):
        fourierMap(bare, 'sigma')


def test_series_matrix_is_hermitian():
    q, p = 5, 3
    V3, V4 = clockShiftRep(q, p)
    series = gaussianSeries(Phase(Fraction(p, q)), 6, p/q + 1, ('V3', 'V4'), 'Dperp')
    A = seriesMatrix(series, V3, V4)
    assert np.allclose(A, A.conj().T, atol=1e-12)


def test_gaussian_series_cutoff():
    with pytest.raises(DomainError):
        gaussianSeries(Phase(), 0, 2.0, ('V', 'U'), None)


####################
#    Everything    #
####################


def test_certify_all(pipelines):
    for pipe in pipelines:
        certs = certifyAll(pipe, cutoff=8)
        failed = [c.claim for c in certs if not c.passed]
        assert not failed, (pipe.ld.p, pipe.ld.q, failed)
        claims = [c.claim for c in certs]
        assert claims[:6] == ['basis_relations', 'phase_congruences', 'invertibility',
                              'centrality', 'cutdown', 'trace']


def test_certify_skips_large_q():
    theta = Irrational(cf=[0], period=[1])
    pipe = prepare(theta, index=10)
    claims = [c.claim for c in certifyAll(pipe, cutoff=6)]
    assert pipe.ld.q > 40
    assert 'cutdown_approximants' not in claims


def test_certify_all_extended_precision(pipelines):
    pipe = pipelines[1]
    plain = certifyAll(pipe, cutoff=6)
    assert 'rho_norm_extended' not in [c.claim for c in plain]
    certs = certifyAll(pipe, cutoff=6, dps=50)
    extended = certs[-1]
    assert extended.claim == 'rho_norm_extended'
    assert extended.passed, extended.values
    assert extended.inputs['dps'] == 50
    assert float(extended.values['extended']) == pytest.approx(extended.values['binary64'], rel=1e-12)
