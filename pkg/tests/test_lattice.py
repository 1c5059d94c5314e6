# test_lattice.py

import dataclasses
import itertools
from fractions import Fraction

import numpy as np
import pytest

from orbifold.lattice import (LatticeVector, basisRelations, buildLattices, cocycle, commutator, rsCoeffs,
                              lambdaCapital, mCoeffs, perpWordPhase, phaseExponent, phasePolynomial,
                              shiftU, solveDiophantine, systemResidual)
from orbifold.numberTheory import Convergent, Irrational, PhaseSelection, convergents, fourSquare, selectPhase
from orbifold.projectionCertificate import prepare
from orbifold.sysmsg import CongruenceError, DomainError, FlagError, ScopeError
from orbifold.utils import Phase


def test_cocycle_scales():
    q = 5
    u = LatticeVector(1, (1, 0), 0, (0, 0), 'alpha', q)
    v = LatticeVector(0, (0, 0), 1, (2, 0), 'alpha', q)
    assert cocycle(u, v) == Phase(Fraction(2, 5), alphaSq=1)
    w = LatticeVector(0, (0, 0), 1, (0, 0), 'beta', q)
    # alpha beta = 1/q
    assert cocycle(u, w) == Phase(Fraction(1, 5))


def test_commutator_is_antisymmetric():
    q = 7
    u = LatticeVector(2, (1, 3), -1, (4, 0), 'beta', q)
    v = LatticeVector(-1, (2, 2), 3, (1, 5), 'beta', q)
    assert (commutator(u, v)*commutator(v, u)).isTrivial()


def test_basis_relations(pipelines):
    for pipe in pipelines:
        rel = basisRelations(pipe.ld)
        assert all(rel.values()), rel


def test_commutator_of_D_is_theta(pipelines):
    for pipe in pipelines:
        ld = pipe.ld
        comm = ld.commutatorD()
        assert comm.equivalent(Phase(Fraction(ld.p, ld.q), alphaSq=1))


def test_covolume_and_theta_prime(pipelines):
    for pipe in pipelines:
        ld = pipe.ld
        assert ld.covolume == pytest.approx(ld.q*abs(ld.conv.error), rel=1e-12)
        assert 0 < ld.covolume < 1
        assert ld.betaSq > 1
        assert ld.alpha*ld.beta == pytest.approx(1/ld.q, rel=1e-12)


def test_build_refuses_wrong_side(sqrt2m1):
    conv = convergents(sqrt2m1, 2)[1]
    fs = fourSquare(conv.p)
    with pytest.raises(ScopeError):
        buildLattices(conv, fs, selectPhase(fs, conv.q))


def test_build_refuses_inconsistent_inputs(sqrt2m1):
    conv = convergents(sqrt2m1, 3)[2]
    with pytest.raises(DomainError):
        buildLattices(conv, fourSquare(3), selectPhase(fourSquare(3), conv.q))


def test_build_refuses_poor_approximation(sqrt2m1):
    conv = Convergent(sqrt2m1, 1, 4)
    fs = fourSquare(1)
    with pytest.raises(ScopeError):
        buildLattices(conv, fs, selectPhase(fs, 4))


def test_diophantine_solution_solves_system(randomPipelines):
    for pipe in randomPipelines[:40]:
        ld, ds = pipe.ld, pipe.dsEps
        assert ds.detR == ds.detS == ld.ps.Delta
        for n1, n2 in itertools.product(range(min(ld.q, 6)), repeat=2):
            n3, n4 = ds.solve(n1, n2)
            assert systemResidual(ld, ds.u3, ds.u4, (n1, n2, n3, n4)) == (0, 0)


def test_solver_refuses_singular_delta(sqrt2m1):
    conv = convergents(sqrt2m1, 3)[2]
    fs = fourSquare(conv.p)
    ps = PhaseSelection.override(0, 0, 0, fs, conv.q)
    ld = buildLattices(conv, fs, ps)
    with pytest.raises(CongruenceError):
        solveDiophantine(ld, *shiftU(ld, 'zero'))


def test_m_coefficients_of_discrete_generators(pipelines):
    ld = pipelines[1].ld
    p1, p2, p3, p4 = ld.fs.asTuple()
    q = ld.q
    assert mCoeffs(ld, 0, 0, 1, 0) == (p2 % q, -p1 % q, -p4 % q, p3 % q)
    assert mCoeffs(ld, 0, 0, 0, 1) == (p4 % q, -p3 % q, p2 % q, -p1 % q)


def test_phase_polynomial_congruences(randomPipelines):
    for pipe in randomPipelines:
        for pp in (pipe.pp, pipe.ppEps):
            assert not any(pp.congruences().values())
        for key in ('aP', 'bP', 'd1P', 'e1P'):
            assert getattr(pipe.pp, key) == getattr(pipe.ppEps, key)


def test_phase_polynomial_matches_direct_sum(randomPipelines):
    for pipe in randomPipelines[:25]:
        for ds, pp in ((pipe.ds, pipe.pp), (pipe.dsEps, pipe.ppEps)):
            for n1, n2 in ((0, 0), (1, 0), (0, 1), (2, -3), (-1, 4)):
                assert pp.evaluate(n1, n2) == phaseExponent(pipe.ld, ds, pp.tChoice, n1, n2)


def test_phase_polynomial_unit_case():
    # p = 1, q = 3 with fs = (1,0,0,0)
    theta = Irrational(decimal=Fraction(1, 3) + Fraction(1, 27), digits=30)
    pipe = prepare(theta, 1, 3)
    ld = pipe.ld
    assert ld.fs.asTuple() == (1, 0, 0, 0)
    pp = phasePolynomial(ld, None, 'zero')
    assert pp.aP % 3 == 0 and pp.bP % 3 == 0
    assert pp.aPP*3 == pp.aP


def test_phase_polynomial_rejects_mismatched_shift(pipelines):
    pipe = pipelines[1]
    u3, u4 = shiftU(pipe.ld, 'eps1')
    if u3 % pipe.ld.q or u4 % pipe.ld.q:
        with pytest.raises(FlagError):
            phasePolynomial(pipe.ld, pipe.dsEps, 'zero')
    with pytest.raises(FlagError):
        shiftU(pipe.ld, 'other')


def test_lambda_capital_on_discrete_words(pipelines):
    for pipe in pipelines[:4]:
        ld = pipe.ld
        for k, l in itertools.product(range(3), repeat=2):
            assert lambdaCapital(ld, 0, 0, k, l).equivalent(perpWordPhase(ld.fs, ld.q, k, l))


def test_lambda_capital_is_quadratic(pipelines):
    ld = pipelines[4].ld
    assert ld.q == 3
    assert lambdaCapital(ld, 0, 0, 0, 0).isTrivial()
    broken = [n for n in itertools.product(range(3), repeat=4)
              if not lambdaCapital(ld, *(2*x for x in n)).equivalent(lambdaCapital(ld, *n)**2)]
    assert broken


def test_rs_coefficients_unit_case():
    fs = fourSquare(1)
    ps = PhaseSelection.override(2, 3, 5, fs, 7)
    r1, r2, r3, r4, s1, s2, s3, s4 = rsCoeffs(fs, ps)
    assert (r1, r2, r3, r4) == (-1, 0, -10, -3)
    assert (s1, s2, s3, s4) == (1, 0, 4, 3)
    assert r1*r4 - r2*r3 == s1*s4 - s2*s3 == ps.Delta == 3


def test_rs_determinants_random():
    rng = np.random.default_rng(5)
    for _ in range(200):
        fs = fourSquare(int(rng.integers(0, 10**4)))
        a, b, g = (int(x) for x in rng.integers(-6, 7, 3))
        ps = PhaseSelection.override(a, b, g, fs, 11)
        r1, r2, r3, r4, s1, s2, s3, s4 = rsCoeffs(fs, ps)
        assert r1*r4 - r2*r3 == ps.Delta
        assert s1*s4 - s2*s3 == ps.Delta
    zero = rsCoeffs(fourSquare(0), PhaseSelection.override(1, 1, 1, fourSquare(0), 3))
    assert zero == (0,)*8


def test_determinant_disagreement_is_recorded(pipelines):
    pipe = pipelines[1]
    assert pipe.dsEps.notes == ''
    ps = dataclasses.replace(pipe.ps, Delta=pipe.ps.Delta + pipe.ld.q)
    ld = buildLattices(pipe.conv, pipe.fs, ps)
    ds = solveDiophantine(ld, *shiftU(ld, 'eps1'))
    assert 'detR' in ds.notes and str(ps.Delta) in ds.notes
    assert (ds.detR - ps.Delta) % ld.q == 0
