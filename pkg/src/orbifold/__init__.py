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

__name__         = 'orbifold'
__version__      = '1.0.0'
__description__  = 'This package certifies Fourier invariant projections in irrational rotation algebras'
__author__       = 'Yen-Hsun Lin'
__email__        = 'yenhsun@phys.ncku.edu.tw'
__url__          = 'https://github.com/yenhsunlin/orbifold'
__license__      = 'GNU GPL-3.0'

from .sysmsg import *
from .constant import constant
from .utils import *
from .numberTheory import *
from .lattice import *
from .theta import *
from .finiteWeil import *
from .projectionCertificate import *
from .matrixOracle import *
