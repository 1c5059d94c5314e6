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



# Continued fractions of the test irrationals, [0; cf..., period, period, ...]

_sqrt2m1 = {'cf': [0], 'period': [2]}                  # sqrt(2) - 1
_golden = {'cf': [0], 'period': [1]}                   # (sqrt(5) - 1)/2
_sqrt3m1 = {'cf': [0], 'period': [1, 2]}               # sqrt(3) - 1
_sqrt5m2 = {'cf': [0], 'period': [4]}                  # sqrt(5) - 2
_sqrt7m2 = {'cf': [0], 'period': [1, 1, 1, 4]}         # sqrt(7) - 2
_silverInv = {'cf': [0, 5], 'period': [1, 5]}          # [0; 5, 1, 5, 1, ...]
_triple213 = {'cf': [0], 'period': [2, 1, 3]}          # contains (N,1,M) = (2,1,3)
_triple213b = {'cf': [0, 4], 'period': [2, 1, 3, 1]}
_sqrt11m3 = {'cf': [0], 'period': [3, 6]}              # sqrt(11) - 3
_sqrt13m3 = {'cf': [0], 'period': [1, 1, 1, 1, 6]}     # sqrt(13) - 3

testIrrationals = {
    'sqrt2m1': _sqrt2m1,
    'golden': _golden,
    'sqrt3m1': _sqrt3m1,
    'sqrt5m2': _sqrt5m2,
    'sqrt7m2': _sqrt7m2,
    'silverInv': _silverInv,
    'triple213': _triple213,
    'triple213b': _triple213b,
    'sqrt11m3': _sqrt11m3,
    'sqrt13m3': _sqrt13m3,
    }
