"""
Arithmetic backends.

Kernels, exact energies and expansions are written once against a small
"ops" interface.  ``DOUBLE`` works on floats, complex and numpy arrays using
this package's own special functions; ``high_precision(dps)`` wraps a private
mpmath context so that remainder orders far below double-precision round-off
can be observed.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy import integrate

from . import specialfn as sf


class DoubleOps:
    dps = None
    pi = math.pi
    euler = sf.EULER_GAMMA

    def num(self, x):
        if isinstance(x, Fraction):
            return float(x)
        if isinstance(x, complex) and x.imag == 0:
            return x.real
        return x

    def cnum(self, x) -> complex:
        return complex(x)

    def exp(self, x):
        return np.exp(x)

    def log(self, x):
        return np.log(x)

    def sin(self, x):
        return np.sin(x)

    def cos(self, x):
        return np.cos(x)

    def sqrt(self, x):
        return np.sqrt(x)

    def power(self, x, a):
        a = complex(a)
        if a.imag == 0:
            return np.power(x, a.real)
        return np.exp(a * np.log(x))

    def zeta(self, s):
        return sf.riemann_zeta(s)

    def rgamma(self, z):
        return sf.reciprocal_gamma(z)

    def gamma(self, z):
        return sf.complex_gamma(z)

    def loggamma(self, z):
        return sf.log_gamma(z)

    def ei(self, x):
        return sf.exp_integral_ei(x)

    def fsum(self, values):
        vals = [complex(v) for v in values]
        return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))

    def sum_array(self, arr):
        arr = np.asarray(arr)
        return complex(math.fsum(arr.real.ravel()), math.fsum(np.imag(arr).ravel()))

    def quad(self, f, a, b):
        opts = dict(epsabs=1e-13, epsrel=1e-13, limit=400)
        re = integrate.quad(lambda x: complex(f(x)).real, a, b, **opts)[0]
        im = integrate.quad(lambda x: complex(f(x)).imag, a, b, **opts)[0]
        return complex(re, im)

    def to_complex(self, x) -> complex:
        return complex(x)

    def is_zero(self, x) -> bool:
        return complex(x) == 0

    def __repr__(self):
        return "DoubleOps()"


class MpOps:
    """Arithmetic on a private mpmath context; thread-safe as long as it is not shared."""

    def __init__(self, dps: int):
        self.dps = int(dps)
        self.ctx = mpmath.MPContext()
        self.ctx.dps = self.dps
        self.pi = self.ctx.pi
        self.euler = self.ctx.euler

    def num(self, x):
        ctx = self.ctx
        if isinstance(x, Fraction):
            return ctx.mpf(x.numerator) / x.denominator
        if isinstance(x, complex) or isinstance(x, np.complexfloating):
            x = complex(x)
            if x.imag == 0:
                return ctx.mpf(x.real)
            return ctx.mpc(x.real, x.imag)
        if isinstance(x, (int, np.integer)):
            return ctx.mpf(int(x))
        if isinstance(x, (float, np.floating)):
            return ctx.mpf(float(x))
        return x

    def cnum(self, x):
        return self.ctx.mpc(self.num(x))

    def exp(self, x):
        return self.ctx.exp(x)

    def log(self, x):
        return self.ctx.log(x)

    def sin(self, x):
        return self.ctx.sin(x)

    def cos(self, x):
        return self.ctx.cos(x)

    def sqrt(self, x):
        return self.ctx.sqrt(x)

    def power(self, x, a):
        return self.ctx.power(x, self.num(a))

    def zeta(self, s):
        return self.ctx.zeta(self.num(s))

    def rgamma(self, z):
        return self.ctx.rgamma(self.num(z))

    def gamma(self, z):
        return self.ctx.gamma(self.num(z))

    def loggamma(self, z):
        return self.ctx.loggamma(self.num(z))

    def ei(self, x):
        return self.ctx.ei(self.num(x))

    def fsum(self, values):
        return self.ctx.fsum(values)

    def sum_array(self, arr):
        return self.ctx.fsum(arr)

    def quad(self, f, a, b):
        return self.ctx.quad(f, [self.num(a), self.num(b)])

    def to_complex(self, x) -> complex:
        return complex(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def __repr__(self):
        return f"MpOps(dps={self.dps})"


DOUBLE = DoubleOps()


@lru_cache(maxsize=16)
def high_precision(dps: int) -> MpOps:
    return MpOps(dps)


def get_ops(dps=None):
    """``None`` selects double precision; an integer selects that many decimal digits."""
    if dps is None:
        return DOUBLE
    if isinstance(dps, (DoubleOps, MpOps)):
        return dps
    return high_precision(int(dps))
