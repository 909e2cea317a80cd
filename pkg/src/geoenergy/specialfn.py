"""
Special functions used by the energy asymptotics.

Bernoulli numbers are held once as exact rationals; everything else works in
double precision on plain Python ``complex`` values.  Zeta-type functions are
evaluated by Euler-Maclaurin summation, log-gamma by a shifted Stirling series.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .errors import DomainError, PoleError, UnsupportedOrderError

__all__ = [
    "EULER_GAMMA",
    "MAX_BERNOULLI",
    "Parity",
    "bernoulli_number",
    "bernoulli_poly",
    "bernoulli_poly_exact",
    "periodized_bernoulli",
    "pochhammer",
    "incomplete_zeta",
    "psi_p",
    "riemann_zeta",
    "hurwitz_zeta",
    "log_gamma",
    "log_gamma_expansion",
    "complex_gamma",
    "reciprocal_gamma",
    "exp_integral_ei",
    "euclid_alpha_coeffs",
    "series_log",
    "series_exp",
]

EULER_GAMMA = 0.57721566490153286061
MAX_BERNOULLI = 64

# |s - 1| below this is treated as the pole of the zeta family.
POLE_GUARD = 1e-8

_ZETA_EM_DEPTH = 12
_STIRLING_TERMS = 10


@dataclass(frozen=True)
class Parity:
    """Decomposition N = 2*m_half + kappa."""

    kappa: int
    m_half: int | None = None

    def __post_init__(self):
        if self.kappa not in (0, 1):
            raise ValueError(f"kappa must be 0 or 1, got {self.kappa!r}")

    @property
    def omega(self) -> float:
        return self.kappa / 2

    @classmethod
    def of(cls, n: int) -> "Parity":
        return cls(n % 2, n // 2)

    def matches(self, n: int) -> bool:
        return n % 2 == self.kappa


# ---------------------------------------------------------------------------
# Bernoulli machinery

_bern_lock = threading.Lock()
_bern_table: tuple[Fraction, ...] | None = None


def _bernoulli_table() -> tuple[Fraction, ...]:
    global _bern_table
    if _bern_table is None:
        with _bern_lock:
            if _bern_table is None:
                B = [Fraction(1)]
                for m in range(1, MAX_BERNOULLI + 1):
                    acc = sum(comb(m + 1, k) * B[k] for k in range(m))
                    B.append(-acc / (m + 1))
                _bern_table = tuple(B)
    return _bern_table


def _check_order(n: int) -> None:
    if n < 0:
        raise ValueError("order must be nonnegative")
    if n > MAX_BERNOULLI:
        raise UnsupportedOrderError(f"Bernoulli order {n} exceeds cache bound {MAX_BERNOULLI}")


def bernoulli_number(n: int) -> Fraction:
    """B_n with the convention B_1 = -1/2."""
    _check_order(n)
    return _bernoulli_table()[n]


def bernoulli_poly_exact(n: int, x) -> Fraction:
    """B_n(x) as an exact rational; float arguments are taken at their exact binary value."""
    _check_order(n)
    x = Fraction(x)
    B = _bernoulli_table()
    acc = Fraction(0)
    xk = Fraction(1)
    for k in range(n + 1):
        acc += comb(n, k) * B[n - k] * xk
        xk *= x
    return acc


def bernoulli_poly(n: int, x: float) -> float:
    return float(bernoulli_poly_exact(n, x))


def periodized_bernoulli(k: int, x: float) -> float:
    """C_k(x) = B_k(x - floor(x))."""
    if k < 1:
        raise ValueError("k must be positive")
    fx = Fraction(x)
    return float(bernoulli_poly_exact(k, fx - math.floor(fx)))


@lru_cache(maxsize=None)
def _centered_coeffs(k: int) -> np.ndarray:
    # B_k(1/2 + t) = sum_j C(k, j) B_{k-j}(1/2) t^j, highest power first for polyval
    _check_order(k)
    B = _bernoulli_table()
    half = [(Fraction(2) ** (1 - m) - 1) * B[m] for m in range(k + 1)]
    coeffs = [comb(k, j) * half[k - j] for j in range(k + 1)]
    return np.array([float(c) for c in reversed(coeffs)])


def _periodized_bernoulli_array(k: int, x: np.ndarray, floor_x: np.ndarray) -> np.ndarray:
    return np.polyval(_centered_coeffs(k), x - floor_x - 0.5)


@lru_cache(maxsize=None)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def pochhammer(s, n: int) -> complex:
    """Rising factorial (s)_n = s (s+1) ... (s+n-1)."""
    return complex(_poch(complex(s), n))


def _poch(s, n: int):
    r = 1
    for k in range(n):
        r = r * (s + k)
    return r


# ---------------------------------------------------------------------------
# Incomplete zeta and Psi_p


def _bernoulli_power_integral(p: int, a: float, b: float, expo: complex) -> complex:
    """int_a^b C_{2p+1}(x) x**expo dx, split at the integers where C_{2p+1} has kinks."""
    if b <= a:
        return 0j
    k = 2 * p + 1
    inner = np.arange(math.floor(a) + 1, math.ceil(b), dtype=float)
    edges = np.concatenate(([a], inner, [b]))
    lo, hi = edges[:-1], edges[1:]
    nodes, weights = _gauss_legendre(16 if p <= 7 else 32)
    mid = 0.5 * (hi + lo)
    half = 0.5 * (hi - lo)
    x = mid[:, None] + half[:, None] * nodes[None, :]
    c = _periodized_bernoulli_array(k, x, np.floor(mid)[:, None])
    if expo.imag == 0:
        pw = np.power(x, expo.real)
    else:
        pw = np.exp(expo * np.log(x))
    vals = (c * pw) @ weights
    total = vals * half
    return complex(math.fsum(total.real), math.fsum(np.imag(total)))


def _check_omega(p: int, omega: float, y: float) -> float:
    if omega not in (0, 0.5):
        raise ValueError("omega must be 0 or 1/2")
    if not 1 <= p <= 30:
        raise UnsupportedOrderError("p must lie in 1..30")
    a = 1 - omega
    if y < a:
        raise DomainError(f"y must be >= 1 - omega = {a}")
    return a


def incomplete_zeta(p: int, omega: float, y: float, s) -> complex:
    """
    Euler-Maclaurin surrogate zeta_p(omega, y; s).

    Exact at s = 0, -1, ..., -2p for every y; converges to zeta(s) as y grows
    when Re s + 2p > 0.  Raises PoleError near s = 1 (use :func:`psi_p`).
    """
    s = complex(s)
    a = _check_omega(p, omega, y)
    if abs(s - 1) < POLE_GUARD:
        raise PoleError("incomplete_zeta has a pole at s = 1; use psi_p")
    om = Fraction(omega)
    terms = [a ** (1 - s) / (s - 1)]
    for r in range(1, 2 * p + 1):
        br = float(bernoulli_poly_exact(r, om))
        if br == 0:
            continue
        terms.append(br / factorial(r) * (-1) ** r * _poch(s, r - 1) * a ** (1 - s - r))
    head = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    coef = _poch(s, 2 * p + 1)
    if coef == 0:
        return head
    return head - coef / factorial(2 * p + 1) * _bernoulli_power_integral(p, a, y, -s - 1 - 2 * p)


def psi_p(p: int, omega: float, y: float) -> float:
    """Regularized s -> 1 companion of incomplete_zeta; tends to Euler's gamma."""
    a = _check_omega(p, omega, y)
    om = Fraction(omega)
    terms = [-math.log(a)]
    for r in range(1, 2 * p + 1):
        br = float(bernoulli_poly_exact(r, om))
        terms.append(br / r * (-1) ** r * a ** (-r))
    integral = _bernoulli_power_integral(p, a, y, complex(-2 - 2 * p))
    return math.fsum(terms) - integral.real


# ---------------------------------------------------------------------------
# Riemann and Hurwitz zeta


def _csum(values) -> complex:
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def _nonpositive_integer(s: complex) -> int | None:
    if s.imag == 0 and s.real <= 0 and s.real == math.floor(s.real):
        return int(-s.real)
    return None


def _zeta_em(s: complex, a: float) -> complex:
    # Needs Re s + 2*depth > 0; used for Re s >= -1/2 only.
    K = max(20, math.ceil(abs(s.imag) / 2) + 10)
    k = np.arange(K, dtype=float) + a
    if s.imag == 0:
        head_terms = np.power(k, -s.real).astype(complex)
    else:
        head_terms = np.exp(-s * np.log(k))
    x = K + a
    tail = [x ** (1 - s) / (s - 1), 0.5 * x ** (-s)]
    B = _bernoulli_table()
    for j in range(1, _ZETA_EM_DEPTH + 1):
        tail.append(float(B[2 * j]) / factorial(2 * j) * _poch(s, 2 * j - 1) * x ** (1 - s - 2 * j))
    return _csum(list(head_terms) + tail)


def _sin_pi(z: complex) -> complex:
    # sin(pi z) with the integer part removed first, accurate near the zeros
    k = round(z.real)
    return (-1) ** (k % 2) * cmath.sin(math.pi * (z - k))


def _zeta_reflected(s: complex) -> complex:
    # zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s), Re s < 0
    logmag = s * math.log(2) + (s - 1) * math.log(math.pi) + log_gamma(1 - s)
    return cmath.exp(logmag) * _sin_pi(s / 2) * _zeta_em(1 - s, 1.0)


_STIELTJES_1 = -0.0728158454836767249


def _zeta_pole_product(z: complex) -> complex:
    """(z - 1) zeta(z), finite at z = 1."""
    w = z - 1
    if abs(w) < 1e-5:
        return 1 + EULER_GAMMA * w - _STIELTJES_1 * w * w
    return w * riemann_zeta(z)


def riemann_zeta(s) -> complex:
    """
    Riemann zeta function for Re s > -60, s != 1.

    Nonpositive integers are returned exactly from the Bernoulli table.  For
    Re s >= -1/2 the value comes from Euler-Maclaurin summation with 12 correction
    terms; below that the reflection formula maps the problem to Re s > 1.
    """
    s = complex(s)
    if abs(s - 1) < POLE_GUARD:
        raise PoleError("zeta has a pole at s = 1")
    n = _nonpositive_integer(s)
    if n is not None:
        if n + 1 > MAX_BERNOULLI:
            raise UnsupportedOrderError("argument below supported range")
        return complex((-1) ** n * float(bernoulli_number(n + 1)) / (n + 1))
    if s.real <= -60:
        raise DomainError("riemann_zeta supports Re s > -60")
    # reflecting near 0 would evaluate zeta(1 - s) next to its pole
    if s.real < -0.5:
        return _zeta_reflected(s)
    return _zeta_em(s, 1.0)


def hurwitz_zeta(s, a: float) -> complex:
    """
    Hurwitz zeta sum_{k>=0} (k + a)^(-s), continued analytically in s.

    For Re s < 0 the argument is first moved into [1/2, 3/2) and the Taylor
    series in a about a = 1 (coefficients built from Riemann zeta values) is
    summed; accuracy there is relative, not absolute.
    """
    s = complex(s)
    a = float(a)
    if a <= 0:
        raise DomainError("hurwitz_zeta requires a > 0")
    if abs(s - 1) < POLE_GUARD:
        raise PoleError("hurwitz zeta has a pole at s = 1")
    n = _nonpositive_integer(s)
    if n is not None:
        if n + 1 > MAX_BERNOULLI:
            raise UnsupportedOrderError("argument below supported range")
        return complex(-float(bernoulli_poly_exact(n + 1, a)) / (n + 1))
    if s.real >= 0:
        return _zeta_em(s, a)

    shift = math.floor(a - 0.5)
    a0 = a - shift
    correction = []
    if shift < 0:
        correction.append(a ** (-s))
    else:
        correction.extend(-((a0 + k) ** (-s)) for k in range(shift))
    h = 1.0 - a0
    total = []
    coef = 1 + 0j
    hm = 1.0
    for m in range(400):
        if m > 0 and hm == 0:
            break
        if m > 0 and abs(s + m - 1) < 1e-5:
            # coef carries the factor (s + m - 1) that cancels the pole of zeta(s + m)
            z = _zeta_pole_product(s + m)
            term = prev / m * hm * z
        else:
            z = riemann_zeta(s + m) if coef != 0 else 0
            term = coef * hm * z
        total.append(term)
        if m > 4 and abs(coef * hm) * max(1.0, abs(z)) < 1e-18 * max(abs(sum(total)), 1e-300):
            break
        prev = coef
        coef = coef * (s + m) / (m + 1)
        hm *= h
    return _csum(total + correction)


# ---------------------------------------------------------------------------
# Gamma family


def _stirling(w: complex) -> complex:
    B = _bernoulli_table()
    terms = [(w - 0.5) * cmath.log(w), -w, complex(0.5 * math.log(2 * math.pi))]
    winv = 1 / w
    w2 = winv * winv
    wp = winv
    for k in range(1, _STIRLING_TERMS + 1):
        terms.append(float(B[2 * k]) / (2 * k * (2 * k - 1)) * wp)
        wp *= w2
    return _csum(terms)


def log_gamma(z) -> complex:
    """Principal log Gamma(z) for Re z > 0 (shifted so the Stirling point has Re > 10)."""
    z = complex(z)
    if z.real <= 0:
        raise DomainError("log_gamma requires Re z > 0")
    n = 0 if z.real > 10 else math.floor(10 - z.real) + 1
    val = _stirling(z + n)
    if n:
        val -= _csum(cmath.log(z + k) for k in range(n))
    return val


def log_gamma_expansion(x: float, alpha: float, q: int) -> float:
    """
    Truncated large-x expansion of log Gamma(x + alpha):

        (x + alpha - 1/2) log x - x + log sqrt(2 pi)
            + sum_{n=1}^{q} B_2n(alpha) / ((2n-1) 2n) x^(1-2n)
    """
    al = Fraction(alpha)
    s = (x + alpha - 0.5) * math.log(x) - x + 0.5 * math.log(2 * math.pi)
    for n in range(1, q + 1):
        s += float(bernoulli_poly_exact(2 * n, al)) / ((2 * n - 1) * 2 * n) * x ** (1 - 2 * n)
    return s


def _is_pole(z: complex) -> bool:
    return _nonpositive_integer(z) is not None


def complex_gamma(z) -> complex:
    z = complex(z)
    if _is_pole(z):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.real > 0:
        return cmath.exp(log_gamma(z))
    return math.pi / (_sin_pi(z) * cmath.exp(log_gamma(1 - z)))


def reciprocal_gamma(z) -> complex:
    """1/Gamma(z); entire, zero at the nonpositive integers."""
    z = complex(z)
    if _is_pole(z):
        return 0j
    if z.real > 0:
        return cmath.exp(-log_gamma(z))
    return _sin_pi(z) * cmath.exp(log_gamma(1 - z)) / math.pi


def exp_integral_ei(x: float) -> float:
    """Ei(x) for x > 0 from gamma + log x + sum_k x^k / (k k!)."""
    x = float(x)
    if x <= 0:
        raise DomainError("exp_integral_ei requires x > 0")
    terms = [EULER_GAMMA, math.log(x)]
    pk = 1.0
    total = 0.0
    k = 0
    while True:
        k += 1
        pk *= x / k
        t = pk / k
        terms.append(t)
        total += t
        if t < 1e-17 * total:
            break
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# Formal power series helpers (work for any numeric type with + - * /)


def series_log(c, n: int):
    """Coefficients of log(c(w)) up to w^n, for a series with c[0] == 1."""
    g = [0] * (n + 1)
    for m in range(1, n + 1):
        acc = c[m] if m < len(c) else 0
        for k in range(1, m):
            if m - k < len(c):
                acc = acc - k * g[k] * c[m - k] / m
        g[m] = acc
    return g


def series_exp(h, n: int):
    """Coefficients of exp(h(w)) up to w^n, for a series with h[0] == 0."""
    e = [0] * (n + 1)
    e[0] = 1
    for m in range(1, n + 1):
        acc = 0
        for k in range(1, m + 1):
            if k < len(h):
                acc = acc + k * h[k] * e[m - k]
        e[m] = acc / m
    return e


def _sinc_half_series(q: int, num=float):
    # sinc(z/2) = sum_k (-1)^k z^(2k) / (4^k (2k+1)!), as a series in w = z^2
    return [num(Fraction((-1) ** k, 4**k * factorial(2 * k + 1))) for k in range(q + 1)]


def euclid_alpha_coeffs(s, q: int) -> list[complex]:
    """alpha_0..alpha_q with sinc(z/2)^(-s) = sum_n alpha_n(s) z^(2n)."""
    if q > 40:
        raise UnsupportedOrderError("q must be <= 40")
    return [complex(v) for v in _alpha_series(complex(s), q, float)]


def _alpha_series(s, q: int, num):
    g = series_log(_sinc_half_series(q, num), q)
    return series_exp([-s * gk for gk in g], q)
