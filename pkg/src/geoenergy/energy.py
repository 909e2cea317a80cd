"""
Exact discrete energies on a closed curve of length L.

A curve enters only through its length.  Positions are arclength coordinates
in [0, L); the distance between two of them is the length of the shorter arc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from ._numeric import DOUBLE, get_ops
from .errors import ConfigurationError, DomainError, PoleError
from .kernels import (
    ExpInv,
    Kernel,
    LaplaceDiscrete,
    Laurent,
    Log,
    PowerSeries,
    Riesz,
    SincWeighted,
    Weighted,
)
from .specialfn import _alpha_series, bernoulli_number, bernoulli_poly_exact

__all__ = [
    "Curve",
    "Configuration",
    "INFINITE_ENERGY",
    "is_infinite",
    "geodesic_distance",
    "equally_spaced",
    "antipodal_configuration",
    "exact_energy",
    "brute_force_energy",
    "riesz_exact",
    "log_exact",
    "neg_int_exact",
    "euclid_exact",
    "antipodal_energy",
    "continuous_energy",
]

INFINITE_ENERGY = complex(math.inf, 0.0)


def is_infinite(e) -> bool:
    return not math.isfinite(complex(e).real)


@dataclass(frozen=True)
class Curve:
    length: float

    def __post_init__(self):
        if not self.length > 0:
            raise DomainError("curve length must be positive")


@dataclass(frozen=True)
class Configuration:
    positions: tuple
    curve: Curve

    def __post_init__(self):
        L = self.curve.length
        pos = tuple(float(x) % L for x in self.positions)
        object.__setattr__(self, "positions", pos)

    @property
    def n(self) -> int:
        return len(self.positions)


def _as_length(L) -> float:
    L = L.length if isinstance(L, Curve) else float(L)
    if not L > 0:
        raise DomainError("curve length must be positive")
    return L


def _check_n(N):
    if int(N) != N or N < 2:
        raise DomainError("N must be an integer >= 2")
    return int(N)


def geodesic_distance(u, v, L):
    """Length of the shorter arc between u and v; works elementwise on arrays."""
    ell = np.mod(np.subtract(v, u), L)
    d = np.minimum(ell, L - ell)
    return float(d) if np.ndim(d) == 0 else d


def equally_spaced(N: int, L, offset: float = 0.0) -> Configuration:
    L = _as_length(L)
    return Configuration(tuple(offset + k * L / N for k in range(N)), Curve(L))


def antipodal_configuration(N: int, L, offset: float = 0.0) -> Configuration:
    """ceil(N/2) points at ``offset`` and floor(N/2) at the antipode."""
    L = _as_length(L)
    up = (N + 1) // 2
    return Configuration(tuple([offset] * up + [offset + L / 2] * (N - up)), Curve(L))


def exact_energy(k: Kernel, L, N: int, dps=None):
    """
    Energy of N equally spaced points:
    2N sum_{n=1}^{floor(N/2)} f(nL/N) - (1 - kappa) f(L/2) N.
    """
    ops = get_ops(dps)
    L = _as_length(L)
    N = _check_n(N)
    M, kappa = divmod(N, 2)
    if ops is DOUBLE:
        x = np.arange(1, M + 1) * L / N
        total = ops.sum_array(k.value(x, ops))
        half = complex(k.value(L / 2, ops))
        return 2 * N * total - (1 - kappa) * half * N
    Lm = ops.num(L)
    vals = [k.value(ops.num(n) * Lm / N, ops) for n in range(1, M + 1)]
    total = ops.fsum(vals)
    return 2 * N * total - (1 - kappa) * k.value(Lm / 2, ops) * N


def brute_force_energy(k: Kernel, config: Configuration):
    """sum over ordered pairs j != k of f(d(x_j, x_k)); INFINITE_ENERGY for coincident singular points."""
    L = config.curve.length
    pos = np.asarray(config.positions, dtype=float)
    n = len(pos)
    if n < 2:
        return 0j
    D = geodesic_distance(pos[:, None], pos[None, :], L)
    d = D[~np.eye(n, dtype=bool)]
    zero = d == 0
    extra = 0j
    if zero.any():
        f0 = k.at_zero()
        if isinstance(f0, float) and not math.isfinite(f0):
            return INFINITE_ENERGY
        extra = complex(f0) * int(zero.sum())
        d = d[~zero]
    if d.size == 0:
        return extra
    return DOUBLE.sum_array(k.value(d, DOUBLE)) + extra


def _harmonic(s, M, ops):
    if ops is DOUBLE:
        k = np.arange(1, M + 1, dtype=float)
        return ops.sum_array(ops.power(k, -complex(s)))
    return ops.fsum(ops.power(ops.num(j), -complex(s)) for j in range(1, M + 1))


def riesz_exact(s, L, N: int, dps=None):
    """(2/L^s) N^(1+s) H^(s)_{floor(N/2)} - (1 - kappa) (L/2)^(-s) N, with H summed directly."""
    ops = get_ops(dps)
    s = complex(s)
    L = _as_length(L)
    N = _check_n(N)
    M, kappa = divmod(N, 2)
    H = _harmonic(s, M, ops)
    Lm, Nm = ops.num(L), ops.num(N)
    value = 2 * ops.power(Lm, -s) * ops.power(Nm, 1 + s) * H - (1 - kappa) * ops.power(Lm / 2, -s) * N
    return complex(value) if ops is DOUBLE else value


def log_exact(L, N: int, dps=None):
    """N(N - kappa) log(N/L) - 2N log Gamma(floor(N/2) + 1) - (1 - kappa) N log(2/L)."""
    ops = get_ops(dps)
    L = _as_length(L)
    N = _check_n(N)
    M, kappa = divmod(N, 2)
    Lm, Nm = ops.num(L), ops.num(N)
    if ops is DOUBLE:
        lgam = math.lgamma(M + 1)
    else:
        lgam = ops.loggamma(M + 1)
    value = N * (N - kappa) * ops.log(Nm / Lm) - 2 * N * lgam - (1 - kappa) * N * ops.log(2 / Lm)
    return float(value) if ops is DOUBLE else value


def neg_int_exact(p: int, L, N: int, dps=None):
    """
    Closed form of sum_{j != k} d(x_j, x_k)^p for N equally spaced points (p a positive integer).
    """
    ops = get_ops(dps)
    if p < 1 or int(p) != p:
        raise DomainError("p must be a positive integer")
    L = _as_length(L)
    N = _check_n(N)
    kappa = N % 2
    w = Fraction(kappa, 2)
    terms = _neg_int_terms(p, w)
    Lm, Nm = ops.num(L), ops.num(N)
    vals = [ops.num(c) * ops.power(Lm, lp) * ops.power(Nm, np_) for c, lp, np_ in terms]
    value = ops.fsum(vals)
    return complex(value).real if ops is DOUBLE else value


def _neg_int_terms(p, w):
    """(coefficient, power of L, power of N) triples of the closed form."""
    lead = Fraction(1, 2**p * (p + 1))
    terms = [(lead, p, 2)]
    for n in range(1, p // 2 + 1):
        c = lead * comb(p + 1, 2 * n) * bernoulli_poly_exact(2 * n, w) * 4**n
        if c != 0:
            terms.append((c, p, 2 - 2 * n))
    last = Fraction(2, p + 1) * (bernoulli_poly_exact(p + 1, w) - bernoulli_number(p + 1))
    if last != 0:
        terms.append((last, p, 1 - p))
    return terms


def euclid_exact(s, N: int, dps=None):
    """Riesz s-energy of the N-th roots of unity: N sum_{k=1}^{N-1} (2 sin(pi k/N))^(-s)."""
    ops = get_ops(dps)
    s = complex(s)
    N = _check_n(N)
    if ops is DOUBLE:
        chord = 2 * np.sin(np.pi * np.arange(1, N) / N)
        return N * ops.sum_array(ops.power(chord, -s))
    vals = [ops.power(2 * ops.sin(ops.pi * j / N), -s) for j in range(1, N)]
    return N * ops.fsum(vals)


def antipodal_energy(f_half, N: int):
    """(1/2) f(L/2) (N^2 - kappa) for the two-point antipodal system."""
    N = _check_n(N)
    return 0.5 * complex(f_half) * (N * N - N % 2)


# ---------------------------------------------------------------------------
# Continuous energy V_f


def continuous_energy(k: Kernel, L, dps=None):
    """
    V_f for the normalized arclength measure, (2/L) int_0^{L/2} f, continued
    analytically through the theorem-specific closed forms when f is not
    integrable at 0.
    """
    ops = get_ops(dps)
    L = _as_length(L)
    Lm = ops.num(L)
    half = Lm / 2
    log2_gamma = ops.log(ops.num(2)) - ops.euler
    value = _continuous(k, L, Lm, half, log2_gamma, ops)
    return complex(value) if ops is DOUBLE else value


def _series_integral(pairs, half, log2_gamma, ops):
    # (a, e) pairs for a x^e; x^-1 contributes -a (log 2 - gamma) by continuation.
    acc = []
    for a, e in pairs:
        if a == 0:
            continue
        if complex(e) == -1:
            acc.append(-ops.num(a) * log2_gamma)
        else:
            acc.append(ops.num(a) * ops.power(half, e + 1) / ops.num(e + 1))
    return ops.fsum(acc) if acc else 0


def _continuous(k, L, Lm, half, log2_gamma, ops):
    if isinstance(k, Riesz):
        if abs(k.s - 1) < 1e-12:
            raise PoleError("continuous Riesz energy has a pole at s = 1")
        return k.sign * ops.power(half, -k.s) / ops.num(1 - k.s)
    if isinstance(k, Log):
        return 1 - ops.log(half)
    if isinstance(k, PowerSeries):
        if half >= k.radius:
            raise DomainError("L/2 lies outside the disc of convergence")
        pairs = [(a, complex(n)) for n, a in enumerate(k.coeffs)]
        return _series_integral(pairs, half, log2_gamma, ops) / half
    if isinstance(k, Laurent):
        pairs = [(a, complex(j - k.K)) for j, a in enumerate(k.coeffs)]
        return _series_integral(pairs, half, log2_gamma, ops) / half
    if isinstance(k, Weighted):
        if half >= k.radius:
            raise DomainError("L/2 lies outside the disc of convergence")
        pairs = [(w, n - k.s) for n, w in enumerate(k.weight_coeffs)]
        return _series_integral(pairs, half, log2_gamma, ops) / half
    if isinstance(k, SincWeighted):
        return _sinc_continuous(k, L, half, log2_gamma, ops)
    if isinstance(k, LaplaceDiscrete):
        acc = []
        for t, w in k.masses:
            if t == 0:
                acc.append(ops.num(w) * half)
            else:
                tt = ops.num(t)
                acc.append(ops.num(w) * (1 - ops.exp(-tt * half)) / tt)
        return ops.fsum(acc) / half
    if isinstance(k, ExpInv):
        two_over_L = 2 / Lm
        return ops.exp(two_over_L) - two_over_L * (
            1 - 2 * ops.euler + ops.log(Lm) + ops.ei(two_over_L)
        )
    raise ConfigurationError(f"no continuous energy for {type(k).__name__}")


def _sinc_continuous(k, L, half, log2_gamma, ops):
    if not L < 4 * math.pi:
        raise DomainError("chordal series for V needs L < 4 pi")
    ratio = L / (4 * math.pi)
    digits = 20 if ops is DOUBLE else ops.dps + 5
    count = 8 if ratio < 1e-3 else math.ceil(digits * math.log(10) / (-2 * math.log(ratio))) + 4
    count = min(count, 400)
    alpha = _alpha_series(ops.num(k.s), count, ops.num)
    pairs = [(alpha[j], 2 * j - k.s) for j in range(count + 1)]
    return _series_integral(pairs, half, log2_gamma, ops) / half
