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

Command line driver. Each subcommand builds a RunConfig, runs the pipeline
and returns an exit code:

    0   every claim passed
    1   a claim failed
    2   usage or scope error

JSON is the canonical output, the CSV tables and the printed summary are
projections of it.

"""

import argparse as _argparse
import logging as _logging
import os as _os
import sys as _sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath as _mp
import numpy as _np

from .constant import constant
from .matrixOracle import scalarProbe, spectralCheck
from .numberTheory import (Irrational, abc, checkApproximation, convergents, fourSquare,
                           gdeltaScan, selectPhase)
from .projectionCertificate import (certifyAll, cutdownDecay, prepare, primitiveForm, seriesInnerFF,
                                    seriesInnerFU1F)
from .sysmsg import CongruenceError, FlagError
from .theta import (concavityCheck, energyGridCheck, psi, rhoDeviationBound, secantCheck,
                    theta, thetaIdentitiesCheck, thetaImag)
from .utils import Certificate, canonicalJson, writeCsv, writeJson

_logger = _logging.getLogger(__name__)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2



##########################################################################
#                                                                        #
#   Configuration                                                        #
#                                                                        #
##########################################################################


@dataclass
class RunConfig:
    """
    Parsed and validated options of one invocation
    """
    command: str
    theta: Optional[Irrational] = None
    index: Optional[int] = None
    pq: Optional[Tuple[int, int]] = None
    p: Optional[int] = None
    tol: Optional[float] = None
    cutoff: int = constant.cutoff
    N: Optional[int] = None
    M: Optional[int] = None
    out: Optional[str] = None
    emitCsv: bool = False
    override: Optional[Tuple[int, int, int]] = None
    gridPoints: int = constant.energyGrid
    rho: Optional[Fraction] = None
    probeScalar: bool = False
    count: Optional[int] = None
    method: str = 'scan'
    decay: Optional[int] = None
    dps: int = constant.extendedDigits
    verbose: bool = False


def _intList(text: str) -> List[int]:
    try:
        out = [int(x) for x in text.replace(' ', '').split(',') if x != '']
    except ValueError:
        raise FlagError(f'Cannot read \'{text}\' as a comma separated list of integers.')
    if not out:
        raise FlagError('Empty integer list.')
    return out


def _pq(text: str) -> Tuple[int, int]:
    try:
        p, q = (int(x) for x in text.split('/'))
    except ValueError:
        raise FlagError(f'Flag \'--pq\' must look like p/q, got \'{text}\'.')
    return p, q


def _theta(args) -> Optional[Irrational]:
    cf, decimal = getattr(args, 'cf', None), getattr(args, 'decimal', None)
    if cf is None and decimal is None:
        return None
    if cf is not None and decimal is not None:
        raise FlagError('Give exactly one of \'--cf\' and \'--decimal\'.')
    if cf is not None:
        period = getattr(args, 'period', None)
        return Irrational(cf=_intList(cf), period=None if period is None else _intList(period))
    return Irrational(decimal=decimal, digits=getattr(args, 'digits', None))


def buildConfig(args) -> RunConfig:
    """
    Validate the parsed arguments into a RunConfig
    """
    cfg = RunConfig(args.command, verbose=args.verbose, dps=constant.precision())
    cfg.theta = _theta(args)
    for name in ('index', 'p', 'out', 'method', 'M'):
        if getattr(args, name, None) is not None:
            setattr(cfg, name, getattr(args, name))
    if getattr(args, 'pq', None) is not None:
        cfg.pq = _pq(args.pq)
    if getattr(args, 'tol', None) is not None:
        if not args.tol > 0:
            raise FlagError('Flag \'--tol\' must be positive.')
        cfg.tol = args.tol
    for name, attr in (('cutoff', 'cutoff'), ('N', 'N'), ('count', 'count'), ('grid_points', 'gridPoints'),
                       ('decay', 'decay')):
        value = getattr(args, name, None)
        if value is not None:
            if value < 1:
                raise FlagError(f'Flag \'--{name.replace("_", "-")}\' must be positive.')
            setattr(cfg, attr, value)
    cfg.emitCsv = bool(getattr(args, 'emit_csv', False))
    cfg.probeScalar = bool(getattr(args, 'probe_scalar', False))
    if getattr(args, 'override_abc', None) is not None:
        abg = _intList(args.override_abc)
        if len(abg) != 3:
            raise FlagError('Flag \'--override-abc\' needs three integers a,b,gamma.')
        cfg.override = tuple(abg)
    if getattr(args, 'rho', None) is not None:
        try:
            cfg.rho = Fraction(args.rho)
        except (ValueError, ZeroDivisionError):
            raise FlagError(f'Flag \'--rho\' must be rational, got \'{args.rho}\'.')
    if cfg.command in ('convergents', 'certify', 'gdelta-scan') and cfg.theta is None:
        raise FlagError(f'\'{cfg.command}\' needs theta via \'--cf\' or \'--decimal\'.')
    if cfg.command == 'certify' and (cfg.index is None) == (cfg.pq is None):
        raise FlagError('\'certify\' needs exactly one of \'--index\' and \'--pq\'.')
    if cfg.decay is not None and cfg.index is None:
        raise FlagError('Flag \'--decay\' needs \'--index\'.')
    return cfg



##########################################################################
#                                                                        #
#   Commands                                                             #
#                                                                        #
##########################################################################


def _emit(cfg: RunConfig, payload: dict, tables: Sequence[Tuple[str, list, Sequence[str]]] = ()):
    if cfg.out is not None:
        writeJson(_os.path.join(cfg.out, cfg.command.replace('-', '_') + '.json'), payload)
        for name, rows, header in tables:
            writeCsv(_os.path.join(cfg.out, name + '.csv'), rows, header)
    else:
        _sys.stdout.write(canonicalJson(payload))


def _summary(certs: Sequence[Certificate]):
    for c in certs:
        _logger.info('%-28s %s', c.claim, 'pass' if c.passed else 'FAIL')


def _bundle(cfg, certs, extra=None) -> dict:
    payload = {'command': cfg.command, 'certificates': [c.asDict() for c in certs],
               'pass': all(c.passed for c in certs)}
    if extra:
        payload.update(extra)
    return payload


def cmdConvergents(cfg: RunConfig) -> int:
    rows = []
    for c in convergents(cfg.theta, cfg.count or 8):
        first, second = checkApproximation(cfg.theta, c.p, c.q) if c.q > 0 else (None, None)
        rows.append((c.index, c.p, c.q, c.q*abs(c.error), first, second))
    header = ('n', 'p', 'q', 'q|q theta - p|', 'approximation', 'below_one')
    payload = {'command': cfg.command, 'theta': cfg.theta.spec(), 'digest': cfg.theta.digest(),
               'rows': [dict(zip(header, r)) for r in rows]}
    _emit(cfg, payload, [('convergents', rows, header)])
    return EXIT_PASS


def cmdFourSquare(cfg: RunConfig) -> int:
    if cfg.p is None:
        raise FlagError('\'foursquare\' needs \'--p\'.')
    fs = fourSquare(cfg.p)
    t = abc(fs)
    passed = t.identity() == cfg.p**2
    _emit(cfg, {'command': cfg.command, 'p': cfg.p, 'fs': fs.asTuple(),
                'abc': (t.A, t.B, t.C), 'identity': passed})
    return EXIT_PASS if passed else EXIT_FAIL


def cmdSelectAbc(cfg: RunConfig) -> int:
    if cfg.pq is None:
        raise FlagError('\'select-abc\' needs \'--pq\'.')
    p, q = cfg.pq
    fs = fourSquare(p)
    ps = selectPhase(fs, q, cfg.method)
    _emit(cfg, {'command': cfg.command, 'p': p, 'q': q, 'fs': fs.asTuple(), 'selection': ps.asDict()})
    return EXIT_PASS


def cmdCertify(cfg: RunConfig) -> int:
    p, q = cfg.pq if cfg.pq is not None else (None, None)
    try:
        pipe = prepare(cfg.theta, p, q, cfg.index, cfg.override, cfg.method)
    except CongruenceError as err:
        cert = Certificate('construction', inputs={'theta': cfg.theta.spec(), 'pq': cfg.pq,
                                                   'index': cfg.index, 'override': cfg.override},
                           passed=False, notes=str(err))
        _logger.error('construction failed: %s', err)
        _emit(cfg, _bundle(cfg, [cert]))
        return EXIT_FAIL
    certs = certifyAll(pipe, cfg.cutoff, cfg.N, cfg.tol, cfg.dps)
    if cfg.decay is not None:
        start = max(2, cfg.index - cfg.decay)
        if start >= cfg.index:
            raise FlagError(f'Flag \'--decay\' needs \'--index\' above 2, got {cfg.index}.')
        pipes = [prepare(cfg.theta, index=n, method=cfg.method) for n in range(start, cfg.index)]
        certs.append(cutdownDecay([*pipes, pipe], cfg.cutoff, cfg.N, cfg.tol))
    _summary(certs)
    header = ('m', 'n', 're', 'im', 'modulus')
    tables = []
    if cfg.emitCsv:
        ld = pipe.ld
        tables = [('series_ff', seriesInnerFF(ld, cfg.cutoff).rows(), header),
                  ('series_fu1f', seriesInnerFU1F(ld, pipe.dsEps, pipe.ppEps, cfg.cutoff).rows(), header),
                  ('primitive_form', primitiveForm(ld, cfg.cutoff).rows(), header)]
    _emit(cfg, _bundle(cfg, certs, {'lattice': pipe.ld.asDict(), 'dps': cfg.dps}), tables)
    return EXIT_PASS if all(c.passed for c in certs) else EXIT_FAIL


def _constantsCertificate(tol) -> Certificate:
    ratio = thetaImag(3, 0.0, 0.5)/thetaImag(3, _np.pi/2, 0.5)
    g1 = thetaImag(3, 0.0, 2.0) - (1 + _np.sqrt(2))*thetaImag(2, 0.0, 2.0)
    rho1 = psi(0.5)*_np.exp(_np.pi/2)
    rho1Inv = psi(2.0)*_np.exp(2*_np.pi)
    secant = secantCheck()
    concave = concavityCheck()
    values = {'ratio': ratio, 'gAtOne': g1, 'psiHalf': rho1, 'psiTwo': rho1Inv,
              'tangentSlope': secant.tangentSlope, 'secantSlope': secant.secantSlope,
              'concave': concave}
    passed = (abs(ratio - 1 - _np.sqrt(2)) < tol and abs(g1) < tol and rho1 < constant.rho1Bound
              and rho1Inv < constant.rho1InvBound and secant.dominated and concave)
    return Certificate('theta_constants', values=values, threshold=tol, passed=passed, tolerance=tol)


def _extendedCertificate(dps: int, tol: float) -> Certificate:
    """
    The Gaussian identity theta3(0,2i) = (1 + sqrt 2) theta2(0,2i) at dps digits
    and the odd rho deviation bound against its binary64 value
    """
    with _mp.workdps(dps):
        g1 = theta(3, 0, 2j, tol/64, dps) - (1 + _mp.sqrt(2))*theta(2, 0, 2j, tol/64, dps)
        gap = abs(g1)
    extended = rhoDeviationBound(constant.x0, 1, gridPoints=256, dps=dps)
    binary = rhoDeviationBound(constant.x0, 1, gridPoints=256)
    drift = abs(extended.bound - binary.bound)
    values = {'gAtOne': _mp.nstr(gap, 5), 'oddBound': extended.bound, 'oddBoundDrift': drift}
    passed = gap < tol and drift < constant.residualTol and extended.consistent
    return Certificate('theta_extended', inputs={'dps': dps}, values=values, threshold=tol,
                       passed=bool(passed), tolerance=tol)


def cmdVerifyTheta(cfg: RunConfig) -> int:
    tol = cfg.tol or 1e-10
    rng = _np.random.default_rng(0)
    certs = []
    for x, y in zip(rng.uniform(-1, 1, 20), rng.uniform(0.5, 2.0, 20)):
        certs.append(thetaIdentitiesCheck(complex(x, y), tol))
    certs.append(_constantsCertificate(max(tol, 1e-12)))
    certs.append(energyGridCheck(cfg.gridPoints))
    tolExtended = max(10.0**(8 - cfg.dps), 1e-290)
    for t in (0.3 + 1.1j, -0.4 + 0.8j, 1.5j):
        certs.append(thetaIdentitiesCheck(t, tolExtended, cfg.dps))
    certs.append(_extendedCertificate(cfg.dps, tolExtended))
    _summary(certs)
    _emit(cfg, _bundle(cfg, certs, {'dps': cfg.dps}))
    return EXIT_PASS if all(c.passed for c in certs) else EXIT_FAIL


def cmdSpectral(cfg: RunConfig) -> int:
    if cfg.rho is None:
        raise FlagError('\'spectral\' needs \'--rho\'.')
    if cfg.probeScalar:
        value = scalarProbe(cfg.rho, -1, -1, cfg.cutoff)
        tol = cfg.tol or 1e-10
        cert = Certificate('scalar_probe', inputs={'rho': cfg.rho, 'u': -1, 'v': -1},
                           values={'value': value}, threshold=tol, passed=abs(value) < tol, tolerance=tol)
        certs = [cert]
    else:
        certs = [spectralCheck(cfg.rho, cfg.cutoff, cfg.tol).asCertificate()]
    _summary(certs)
    _emit(cfg, _bundle(cfg, certs))
    return EXIT_PASS if all(c.passed for c in certs) else EXIT_FAIL


def cmdGdeltaScan(cfg: RunConfig) -> int:
    M = cfg.M if cfg.M is not None else 3
    count = cfg.count or cfg.theta.depth or constant.enclosureDepth
    coeffs = cfg.theta.coefficients(max(count, 3))
    N = cfg.N if cfg.N is not None else 2
    hits = gdeltaScan(coeffs, N, M)
    rows = [(h.index, h.betaSq, h.lower, h.upper, h.betaSqLow, h.betaSqHigh, h.satisfied) for h in hits]
    header = ('n', 'betaSq', 'lower', 'upper', 'betaSqLow', 'betaSqHigh', 'satisfied')
    payload = {'command': cfg.command, 'theta': cfg.theta.spec(), 'N': N, 'M': M,
               'hits': [dict(zip(header, r)) for r in rows], 'pass': all(h.satisfied for h in hits)}
    _emit(cfg, payload, [('gdelta_scan', rows, header)])
    return EXIT_PASS if payload['pass'] else EXIT_FAIL


_commands = {'convergents': cmdConvergents, 'foursquare': cmdFourSquare,
             'select-abc': cmdSelectAbc, 'certify': cmdCertify, 'verify-theta': cmdVerifyTheta,
             'spectral': cmdSpectral, 'gdelta-scan': cmdGdeltaScan}



##########################################################################
#                                                                        #
#   Parser and entry point                                               #
#                                                                        #
##########################################################################


def _thetaFlags(sp):
    sp.add_argument('--cf', help='continued fraction 0,a1,a2,...')
    sp.add_argument('--period', help='repeating block appended to --cf')
    sp.add_argument('--decimal', help='decimal approximation of theta')
    sp.add_argument('--digits', type=int, help='theta is within 10^-digits of --decimal')


def buildParser() -> _argparse.ArgumentParser:
    parser = _argparse.ArgumentParser(prog='orbifold',
                                      description='Certificates for Fourier invariant projections.')
    parser.add_argument('--verbose', '-v', action='store_true')
    parser.add_argument('--quiet', '-q', action='store_true', help='log errors only')
    sub = parser.add_subparsers(dest='command', required=True)

    sp = sub.add_parser('convergents', help='CF convergents and the approximation conditions')
    _thetaFlags(sp)
    sp.add_argument('--count', type=int)
    sp.add_argument('--out')

    sp = sub.add_parser('foursquare', help='four square decomposition and the ABC identity')
    sp.add_argument('--p', type=int, required=True)
    sp.add_argument('--out')

    sp = sub.add_parser('select-abc', help='select (a, b, gamma) with gcd(Delta, q) = 1')
    sp.add_argument('--pq', required=True)
    sp.add_argument('--method', choices=('scan', 'constructive'))
    sp.add_argument('--out')

    sp = sub.add_parser('certify', help='all certificates for one convergent')
    _thetaFlags(sp)
    sp.add_argument('--index', type=int)
    sp.add_argument('--pq')
    sp.add_argument('--tol', type=float)
    sp.add_argument('--cutoff', type=int)
    sp.add_argument('--N', type=int)
    sp.add_argument('--override-abc')
    sp.add_argument('--method', choices=('scan', 'constructive'))
    sp.add_argument('--emit-csv', action='store_true')
    sp.add_argument('--decay', type=int, help='also bound the cut down over this many preceding convergents')
    sp.add_argument('--out')

    sp = sub.add_parser('verify-theta', help='theta identities and the energy bound')
    sp.add_argument('--tol', type=float)
    sp.add_argument('--grid-points', type=int)
    sp.add_argument('--out')

    sp = sub.add_parser('spectral', help='finite dimensional spectral check at rational rho')
    sp.add_argument('--rho', required=True)
    sp.add_argument('--cutoff', type=int)
    sp.add_argument('--tol', type=float)
    sp.add_argument('--probe-scalar', action='store_true')
    sp.add_argument('--out')

    sp = sub.add_parser('gdelta-scan', help='scan the CF for the triple (N, 1, M)')
    _thetaFlags(sp)
    sp.add_argument('--count', type=int)
    sp.add_argument('--N', type=int)
    sp.add_argument('--M', type=int)
    sp.add_argument('--out')
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the orbifold command

    In
    ------
    argv: arguments without the program name, default sys.argv[1:]

    Out
    ------
    exit code
    """
    parser = buildParser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_PASS if err.code == 0 else EXIT_USAGE
    level = _logging.ERROR if args.quiet else _logging.INFO if args.verbose else _logging.WARNING
    _logging.basicConfig(level=level,
                         format='%(levelname)s %(name)s: %(message)s')
    try:
        cfg = buildConfig(args)
        return _commands[cfg.command](cfg)
    except CongruenceError as err:
        _logger.error('%s', err)
        return EXIT_FAIL
    except (FlagError, ValueError) as err:
        _logger.error('%s', err)
        _sys.stderr.write(f'orbifold: error: {err}\n')
        return EXIT_USAGE


if __name__ == '__main__':
    _sys.exit(main())
