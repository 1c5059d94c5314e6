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


class FlagError(Exception):

    def __init__(self, message):
        """
        User-defined exception for invalid flags and options

        In
        ------
        message: The message to raise when exception ecountered
        """
        self.message = message

    def __str__(self):
        return f'{self.message}'


class DomainError(FlagError, ValueError):
    """
    An argument lies outside the domain of the operation, eg. Im(t) <= 0,
    x <= 1 or a violated gcd precondition
    """
    pass


class ScopeError(FlagError, ValueError):
    """
    The request is well-formed but outside what the construction covers,
    eg. q|q*theta - p| >= 1
    """
    pass


class PrecisionError(FlagError, ArithmeticError):
    """
    A comparison or a continued fraction coefficient cannot be decided
    from the available digits of theta
    """
    pass


class CongruenceError(FlagError, ArithmeticError):
    """
    An exact congruence that must hold failed
    """
    pass
