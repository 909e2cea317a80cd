"""
Kernel families f(d) acting on geodesic distances.

Every kernel evaluates values and derivatives of arbitrary order (within the
order cap), knows its value at d = 0, and reports its singular part S_q: the
finite sum of powers a_n x^(-s_n) that models f near zero.

All evaluation methods take an optional ``ops`` backend (see ``_numeric``) so
the same formulas serve double-precision and high-precision callers.  In
double precision, numpy arrays are accepted wherever a scalar is.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from ._numeric import DOUBLE, get_ops
from .errors import ConfigurationError, DomainError, UnsupportedOrderError
from .specialfn import _alpha_series, _poch, series_exp, series_log

__all__ = [
    "MAX_DERIVATIVE",
    "Kernel",
    "Riesz",
    "Log",
    "PowerSeries",
    "Laurent",
    "Weighted",
    "SincWeighted",
    "LaplaceDiscrete",
    "ExpInv",
    "SingularPart",
    "KernelSpecError",
    "eval_kernel",
    "kernel_derivative",
    "singular_part",
    "admissibility_probe",
    "parse_kernel",
    "sine_weight_coeffs",
]

P_MAX = 15
MAX_DERIVATIVE = 2 * P_MAX + 1


class KernelSpecError(ValueError):
    """Malformed kernel specification string."""


@dataclass(frozen=True)
class SingularPart:
    """
    S_q(x) = sum a_n x^(-s_n) together with the remainder exponent data.

    ``s_q`` is the exponent that fixes the remainder order
    (f - S_q)^(nu) = O(x^(delta - s_q - nu)); it can differ from the last
    retained exponent when trailing coefficients vanish.  ``exact`` means
    f == S_q identically.  ``infinite`` marks families (e^(1/x)) whose
    singular part never terminates.
    """

    terms: tuple
    delta: float
    s_q: complex
    exact: bool = False
    infinite: bool = False

    @property
    def exponents(self):
        return [s for _, s in self.terms]


def _check_x(x, radius):
    if isinstance(x, np.ndarray):
        bad = np.any(x <= 0)
        out = np.any(x >= radius)
    else:
        bad = x <= 0
        out = x >= radius
    if bad:
        raise DomainError("kernel argument must be positive")
    if out:
        raise DomainError(f"kernel argument outside the disc of convergence (radius {radius})")


def _check_order(m):
    if m < 0:
        raise ValueError("derivative order must be nonnegative")
    if m > MAX_DERIVATIVE:
        raise UnsupportedOrderError(f"derivative order {m} exceeds cap {MAX_DERIVATIVE}")


def _falling(n, m):
    r = 1
    for i in range(m):
        r = r * (n - i)
    return r


def _horner(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _zero_like(x):
    if isinstance(x, np.ndarray):
        return np.zeros_like(x, dtype=float)
    return 0.0


class Kernel:
    """Base class; subclasses are frozen dataclasses."""

    radius = math.inf

    def value(self, x, ops=DOUBLE):
        raise NotImplementedError

    def derivative(self, m, x, ops=DOUBLE):
        raise NotImplementedError

    def singular_part(self, q, ops=DOUBLE) -> SingularPart:
        raise NotImplementedError

    def at_zero(self):
        """f(0): ``math.inf`` when singular, else the finite value."""
        return math.inf

    def remainder(self, x, q, ops=DOUBLE, sp=None):
        """f(x) - S_q(x); subclasses sum the tail directly to avoid cancellation near 0."""
        sp = self.singular_part(q, ops) if sp is None else sp
        return self.value(x, ops) - singular_value(sp, x, ops)

    def to_spec(self) -> str:
        raise NotImplementedError

    def _prep(self, x, ops):
        x = ops.num(x) if ops is not DOUBLE else x
        _check_x(x, self.radius)
        return x


def _fmt(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    sign = "+" if z.imag >= 0 or math.isnan(z.imag) else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


@dataclass(frozen=True)
class Riesz(Kernel):
    """x^(-s); with ``signed`` and real s < 0 the kernel is -x^(-s) so that it is decreasing."""

    s: complex
    signed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))

    @property
    def sign(self) -> int:
        return -1 if self.signed and self.s.imag == 0 and self.s.real < 0 else 1

    def value(self, x, ops=DOUBLE):
        x = self._prep(x, ops)
        return self.sign * ops.power(x, -self.s)

    def derivative(self, m, x, ops=DOUBLE):
        _check_order(m)
        x = self._prep(x, ops)
        s = ops.num(self.s)
        return self.sign * (-1) ** m * _poch(s, m) * ops.power(x, -self.s - m)

    def singular_part(self, q, ops=DOUBLE):
        if q != 0:
            raise ConfigurationError("the Riesz kernel has singular part with q = 0 only")
        return SingularPart(((ops.num(self.sign + 0j), self.s),), math.inf, self.s, exact=True)

    def at_zero(self):
        if self.s.real > 0:
            return math.inf
        if self.s.real < 0:
            return 0.0
        return float(self.sign) if self.s == 0 else math.nan

    def to_spec(self):
        return f"riesz:s={_fmt(self.s)}" + (";signed" if self.signed else "")


@dataclass(frozen=True)
class Log(Kernel):
    """log(1/x)."""

    def value(self, x, ops=DOUBLE):
        x = self._prep(x, ops)
        return -ops.log(x)

    def derivative(self, m, x, ops=DOUBLE):
        _check_order(m)
        if m == 0:
            return self.value(x, ops)
        x = self._prep(x, ops)
        return (-1) ** m * factorial(m - 1) * ops.power(x, -m)

    def singular_part(self, q, ops=DOUBLE):
        # No power part; log(1/x) = O(x^-eps) is recorded with exponent 0.
        return SingularPart((), 1.0, 1 + 0j)

    def to_spec(self):
        return "log"


def _as_coeffs(values) -> tuple:
    return tuple(complex(c) for c in values)


@dataclass(frozen=True)
class PowerSeries(Kernel):
    """sum_{n=0}^{J} a_n x^n inside |x| < radius."""

    coeffs: tuple
    radius: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))
        if not self.coeffs:
            raise ConfigurationError("power series needs at least one coefficient")
        if not self.radius > 0:
            raise ConfigurationError("radius must be positive")

    def value(self, x, ops=DOUBLE):
        return self.derivative(0, x, ops)

    def derivative(self, m, x, ops=DOUBLE):
        _check_order(m)
        x = self._prep(x, ops)
        d = [ops.num(self.coeffs[n + m] * _falling(n + m, m)) for n in range(len(self.coeffs) - m)]
        if not d:
            return _zero_like(x) if ops is DOUBLE else ops.num(0)
        return _horner(d, x)

    def singular_part(self, q, ops=DOUBLE):
        if not 0 <= q:
            raise ConfigurationError("q must be nonnegative")
        terms = tuple((ops.num(self.coeffs[n]), complex(-n))
                      for n in range(min(q, len(self.coeffs) - 1) + 1) if self.coeffs[n] != 0)
        exact = all(c == 0 for c in self.coeffs[q + 1:])
        return SingularPart(terms, 1.0, complex(-q), exact=exact)

    def remainder(self, x, q, ops=DOUBLE, sp=None):
        x = self._prep(x, ops)
        tail = [ops.num(c) for c in self.coeffs[q + 1:]]
        return x ** (q + 1) * _horner(tail, x) if tail else _zero_like(x)

    def at_zero(self):
        c = self.coeffs[0]
        return c.real if c.imag == 0 else c

    def to_spec(self):
        spec = "series:" + ",".join(_fmt(c) for c in self.coeffs)
        if math.isfinite(self.radius):
            spec += f";radius={self.radius!r}"
        return spec


@dataclass(frozen=True)
class Laurent(Kernel):
    """sum_{n=-K}^{J} a_n x^n; ``coeffs`` lists a_{-K}, ..., a_J."""

    K: int
    coeffs: tuple
    radius: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))
        if self.K < 1:
            raise ConfigurationError("Laurent kernels need K >= 1")
        if not self.coeffs or self.coeffs[0] == 0:
            raise ConfigurationError("leading Laurent coefficient a_{-K} must be nonzero")

    @property
    def top(self) -> int:
        return len(self.coeffs) - 1 - self.K

    def coeff(self, n):
        j = n + self.K
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0j

    def value(self, x, ops=DOUBLE):
        return self.derivative(0, x, ops)

    def derivative(self, m, x, ops=DOUBLE):
        _check_order(m)
        x = self._prep(x, ops)
        b = [ops.num(c * _falling(j - self.K, m)) for j, c in enumerate(self.coeffs)]
        return ops.power(x, -self.K - m) * _horner(b, x)

    def singular_part(self, q, ops=DOUBLE):
        if q < -self.K:
            raise ConfigurationError("q must be >= -K")
        terms = tuple((ops.num(self.coeff(n)), complex(-n))
                      for n in range(-self.K, min(q, self.top) + 1) if self.coeff(n) != 0)
        exact = q >= self.top
        return SingularPart(terms, 1.0, complex(-q), exact=exact)

    def remainder(self, x, q, ops=DOUBLE, sp=None):
        x = self._prep(x, ops)
        tail = [ops.num(self.coeff(n)) for n in range(q + 1, self.top + 1)]
        return ops.power(x, q + 1) * _horner(tail, x) if tail else _zero_like(x)

    def to_spec(self):
        return f"laurent:K={self.K};" + ",".join(_fmt(c) for c in self.coeffs)


@dataclass(frozen=True)
class Weighted(Kernel):
    """x^(-s) w(x) with w(x) = sum_n w_n x^n analytic in |x| < radius."""

    s: complex
    weight_coeffs: tuple
    radius: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))
        object.__setattr__(self, "weight_coeffs", _as_coeffs(self.weight_coeffs))
        if not self.weight_coeffs:
            raise ConfigurationError("weight needs at least one coefficient")

    @classmethod
    def sine(cls, s, L, terms=40):
        """The weight sin(pi x / L)."""
        return cls(s, sine_weight_coeffs(L, terms))

    def value(self, x, ops=DOUBLE):
        return self.derivative(0, x, ops)

    def derivative(self, m, x, ops=DOUBLE):
        _check_order(m)
        x = self._prep(x, ops)
        s = ops.num(self.s)
        b = [ops.num(w) * _falling(n - s, m) for n, w in enumerate(self.weight_coeffs)]
        return ops.power(x, -self.s - m) * _horner(b, x)

    def singular_part(self, q, ops=DOUBLE):
        if q < 0:
            raise ConfigurationError("q must be nonnegative")
        if q >= len(self.weight_coeffs):
            raise ConfigurationError("q exceeds the number of weight coefficients")
        terms = tuple((ops.num(w), self.s - n) for n, w in enumerate(self.weight_coeffs[: q + 1]) if w != 0)
        exact = all(w == 0 for w in self.weight_coeffs[q + 1:])
        return SingularPart(terms, 1.0, self.s - q, exact=exact)

    def remainder(self, x, q, ops=DOUBLE, sp=None):
        x = self._prep(x, ops)
        tail = [ops.num(w) for w in self.weight_coeffs[q + 1:]]
        if not tail:
            return _zero_like(x)
        return ops.power(x, q + 1 - self.s) * _horner(tail, x)

    def at_zero(self):
        for n, w in enumerate(self.weight_coeffs):
            if w != 0:
                e = n - self.s
                if e.real < 0:
                    return math.inf
                if e.real > 0:
                    return 0.0
                return w if e == 0 else math.nan
        return 0.0

    def to_spec(self):
        spec = f"weighted:s={_fmt(self.s)};" + ",".join(_fmt(c) for c in self.weight_coeffs)
        if math.isfinite(self.radius):
            spec += f";radius={self.radius!r}"
        return spec


def sine_weight_coeffs(L, terms=40):
    """Taylor coefficients of sin(pi x / L)."""
    c = [0.0] * terms
    a = math.pi / L
    for k in range((terms + 1) // 2):
        n = 2 * k + 1
        if n < terms:
            c[n] = (-1) ** k * a**n / factorial(n)
    return tuple(c)


@dataclass(frozen=True)
class SincWeighted(Kernel):
    """
    (2 sin(x/2))^(-s) = x^(-s) sinc(x/2)^(-s), the chordal Riesz kernel on the unit circle.
    """

    s: complex
    radius = 2 * math.pi

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))

    def value(self, x, ops=DOUBLE):
        x = self._prep(x, ops)
        return ops.power(2 * ops.sin(x / 2), -self.s)

    def derivative(self, m, x, ops=DOUBLE):
        _check_order(m)
        if m == 0:
            return self.value(x, ops)
        x = self._prep(x, ops)
        # Taylor jet of u(x + h) = 2 sin((x + h)/2), then u^(-s) by series log/exp.
        half = x / 2
        sc = (ops.sin(half), ops.cos(half))
        cycle = (sc[0], sc[1], -sc[0], -sc[1])
        u = [ops.num(Fraction(2, 2**k * factorial(k))) * cycle[k % 4] for k in range(m + 1)]
        u0 = u[0]
        c = [1] + [uk / u0 for uk in u[1:]]
        g = series_log(c, m)
        s = ops.num(self.s)
        e = series_exp([-s * gk for gk in g], m)
        return factorial(m) * e[m] * ops.power(u0, -self.s)

    def alphas(self, count, ops=DOUBLE):
        return _alpha_series(ops.num(self.s), count, ops.num)

    def singular_part(self, q, ops=DOUBLE):
        if q < 0:
            raise ConfigurationError("q must be nonnegative")
        alpha = self.alphas(q // 2, ops)
        terms = tuple((alpha[j], self.s - 2 * j) for j in range(q // 2 + 1))
        return SingularPart(terms, 1.0, self.s - q)

    def remainder(self, x, q, ops=DOUBLE, sp=None):
        x = self._prep(x, ops)
        if np.any(x >= 1):
            return super().remainder(x, q, ops, sp)
        # sum_{j > q/2} alpha_j x^(2j - s); terms shrink like (x / 2 pi)^2j
        digits = 17 if ops is DOUBLE else ops.dps + 3
        count = q // 2 + 1 + math.ceil(digits / (2 * math.log10(2 * math.pi))) + 1
        alpha = _cached_alphas(self.s, count, ops)
        tail = alpha[q // 2 + 1:]
        x2 = x * x
        return ops.power(x, 2 * (q // 2 + 1) - self.s) * _horner(tail, x2)

    def at_zero(self):
        if self.s.real > 0:
            return math.inf
        if self.s.real < 0:
            return 0.0
        return 1.0 if self.s == 0 else math.nan

    def to_spec(self):
        return f"sincw:s={_fmt(self.s)}"


@dataclass(frozen=True)
class LaplaceDiscrete(Kernel):
    """sum_i w_i exp(-t_i x), the Laplace transform of a finite atomic measure."""

    masses: tuple

    def __post_init__(self):
        masses = tuple((float(t), float(w)) for t, w in self.masses)
        if not masses:
            raise ConfigurationError("need at least one mass")
        for t, w in masses:
            if not math.isfinite(t) or t < 0:
                raise ConfigurationError("Laplace nodes must be finite and nonnegative")
        object.__setattr__(self, "masses", masses)

    def moment(self, n, ops=DOUBLE):
        return ops.fsum([ops.num(w) * ops.num(t) ** n for t, w in self.masses]) if ops is not DOUBLE \
            else math.fsum(w * t**n for t, w in self.masses)

    def value(self, x, ops=DOUBLE):
        return self.derivative(0, x, ops)

    def derivative(self, m, x, ops=DOUBLE):
        _check_order(m)
        x = self._prep(x, ops)
        acc = 0
        for t, w in self.masses:
            tt = ops.num(t)
            acc = acc + ops.num(w) * (-tt) ** m * ops.exp(-tt * x)
        return acc

    def singular_part(self, q, ops=DOUBLE):
        if q < 0:
            raise ConfigurationError("q must be nonnegative")
        terms = []
        for n in range(q + 1):
            a = (-1) ** n * self.moment(n, ops) / factorial(n)
            if a != 0:
                terms.append((a, complex(-n)))
        exact = all(t == 0 for t, _ in self.masses)
        return SingularPart(tuple(terms), 1.0, complex(-q), exact=exact)

    def remainder(self, x, q, ops=DOUBLE, sp=None):
        x = self._prep(x, ops)
        if np.any(x * max(t for t, _ in self.masses) >= 1):
            return super().remainder(x, q, ops, sp)
        # sum_i w_i sum_{n > q} (-t_i x)^n / n!, summed until negligible
        eps = 1e-18 if ops is DOUBLE else ops.num(10) ** (-ops.dps - 3)
        acc = 0
        for t, w in self.masses:
            if t == 0:
                continue
            y = -ops.num(t) * x
            term = y ** (q + 1) / factorial(q + 1)
            part = term
            n = q + 1
            while True:
                n += 1
                term = term * y / n
                part = part + term
                if np.all(abs(term) <= eps * abs(part)):
                    break
            acc = acc + ops.num(w) * part
        return acc if not isinstance(acc, int) else _zero_like(x)

    def at_zero(self):
        return math.fsum(w for _, w in self.masses)

    def to_spec(self):
        return "laplace:" + ",".join(f"({t!r},{w!r})" for t, w in self.masses)


@lru_cache(maxsize=64)
def _cached_alphas(s, count, ops):
    return _alpha_series(ops.num(s), count, ops.num)


@lru_cache(maxsize=None)
def _expinv_poly(m: int) -> tuple:
    # d^m/dx^m e^{1/x} = P_m(u) e^u with u = 1/x; P_{m+1} = -u^2 (P_m' + P_m)
    if m == 0:
        return (1,)
    prev = _expinv_poly(m - 1)
    deriv = [k * prev[k] for k in range(1, len(prev))] + [0]
    inner = [a + b for a, b in zip(prev, deriv)]
    return (0, 0) + tuple(-c for c in inner)


@dataclass(frozen=True)
class ExpInv(Kernel):
    """e^(1/x), an essential singularity at 0."""

    def value(self, x, ops=DOUBLE):
        x = self._prep(x, ops)
        return ops.exp(1 / x)

    def derivative(self, m, x, ops=DOUBLE):
        _check_order(m)
        x = self._prep(x, ops)
        u = 1 / x
        poly = [ops.num(c) for c in _expinv_poly(m)]
        return _horner(poly, u) * ops.exp(u)

    def singular_part(self, q, ops=DOUBLE):
        if q < 0:
            raise ConfigurationError("q must be nonnegative")
        terms = tuple((ops.num(Fraction(1, factorial(n))), complex(n)) for n in range(q, -1, -1))
        return SingularPart(terms, 1.0, 0j, infinite=True)

    def to_spec(self):
        return "expinv"


# ---------------------------------------------------------------------------
# Functional interface


def _scalar(v):
    if isinstance(v, np.ndarray):
        return v.astype(complex)
    try:
        return complex(v)
    except TypeError:
        return v


def eval_kernel(k: Kernel, x, dps=None):
    ops = get_ops(dps)
    v = k.value(x, ops)
    return _scalar(v) if ops is DOUBLE else v


def kernel_derivative(k: Kernel, m: int, x, dps=None):
    ops = get_ops(dps)
    v = k.derivative(m, x, ops)
    return _scalar(v) if ops is DOUBLE else v


def singular_part(k: Kernel, q: int, dps=None) -> SingularPart:
    return k.singular_part(q, get_ops(dps))


def singular_value(sp: SingularPart, x, ops=DOUBLE, m=0):
    """m-th derivative of S_q at x."""
    acc = 0
    for a, s in sp.terms:
        acc = acc + a * _falling(ops.num(-s), m) * ops.power(x, -s - m)
    return acc


@dataclass
class ProbeReport:
    q: int
    delta: float
    s_q: complex
    rows: list = field(default_factory=list)

    @property
    def bounded(self) -> bool:
        return all(r["bounded"] for r in self.rows)


PROBE_POINTS = (1e-1, 1e-2, 1e-3, 1e-4)


def admissibility_probe(k: Kernel, q: int, nu_max: int, dps: int = 50) -> ProbeReport:
    """
    Tabulate |(f - S_q)^(nu)(x)| x^-(delta - Re s_q - nu) as x -> 0.

    A row is flagged bounded when the scaled remainder does not grow by more
    than a factor 100 across the probe points; the max/min ratio is reported
    alongside.
    """
    ops = get_ops(dps)
    sp = k.singular_part(q, ops)
    report = ProbeReport(q, sp.delta, sp.s_q)
    for nu in range(nu_max + 1):
        vals = []
        for x0 in PROBE_POINTS:
            x = ops.num(x0)
            if x0 >= k.radius:
                continue
            rem = abs(k.derivative(nu, x, ops) - singular_value(sp, x, ops, nu))
            if sp.exact:
                vals.append(float(rem))
                continue
            expo = sp.delta - sp.s_q.real - nu
            vals.append(float(rem * ops.power(x, -expo)))
        big = max(vals)
        small = min(vals)
        ratio = math.inf if small == 0 and big > 0 else (1.0 if big == 0 else big / small)
        bounded = big == 0 or all(v <= 100 * vals[0] for v in vals)
        report.rows.append({"nu": nu, "scaled": vals, "max_min_ratio": ratio, "bounded": bounded})
    return report


# ---------------------------------------------------------------------------
# Spec grammar


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "")
    if not t:
        raise KernelSpecError("empty number")
    if t.endswith("i"):
        t = t[:-1] + "j"
    if t in ("j", "+j", "-j"):
        t = t.replace("j", "1j")
    try:
        return complex(t)
    except ValueError:
        raise KernelSpecError(f"bad complex literal {text!r}") from None


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise KernelSpecError(f"bad real literal {text!r}") from None


def _kv(part, key):
    m = re.fullmatch(rf"\s*{key}\s*=\s*(.+?)\s*", part)
    if not m:
        raise KernelSpecError(f"expected '{key}=...', got {part!r}")
    return m.group(1)


def _numbers(text):
    items = [c for c in text.split(",")]
    if any(not c.strip() for c in items):
        raise KernelSpecError(f"bad coefficient list {text!r}")
    return [parse_complex(c) for c in items]


def parse_kernel(spec: str) -> Kernel:
    """
    Parse a kernel specification string.

    ``riesz:s=<c>[;signed]``, ``log``, ``series:<c0>,<c1>,...[;radius=<r>]``,
    ``laurent:K=<k>;<c_-K>,...,<c_J>``, ``weighted:s=<c>;<w0>,<w1>,...[;radius=<r>]``,
    ``sincw:s=<c>``, ``laplace:(t1,w1),(t2,w2),...``, ``expinv``.
    Complex literals are written ``a+bi``.
    """
    spec = spec.strip()
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    parts = [p for p in rest.split(";")] if rest else []
    try:
        if name == "riesz":
            if not parts:
                raise KernelSpecError("riesz needs s=<complex>")
            signed = False
            for extra in parts[1:]:
                if extra.strip() != "signed":
                    raise KernelSpecError(f"unknown riesz option {extra!r}")
                signed = True
            return Riesz(parse_complex(_kv(parts[0], "s")), signed=signed)
        if name == "log":
            if rest.strip():
                raise KernelSpecError("log takes no parameters")
            return Log()
        if name == "expinv":
            if rest.strip():
                raise KernelSpecError("expinv takes no parameters")
            return ExpInv()
        if name == "series":
            if not parts:
                raise KernelSpecError("series needs coefficients")
            radius = math.inf
            for extra in parts[1:]:
                radius = _parse_float(_kv(extra, "radius"))
            return PowerSeries(_numbers(parts[0]), radius)
        if name == "laurent":
            if len(parts) != 2:
                raise KernelSpecError("laurent needs K=<k>;<coefficients>")
            K = _kv(parts[0], "K")
            if not K.isdigit():
                raise KernelSpecError(f"bad K {K!r}")
            return Laurent(int(K), _numbers(parts[1]))
        if name == "weighted":
            if len(parts) < 2:
                raise KernelSpecError("weighted needs s=<complex>;<coefficients>")
            radius = math.inf
            for extra in parts[2:]:
                radius = _parse_float(_kv(extra, "radius"))
            return Weighted(parse_complex(_kv(parts[0], "s")), _numbers(parts[1]), radius)
        if name == "sincw":
            if len(parts) != 1:
                raise KernelSpecError("sincw needs s=<complex>")
            return SincWeighted(parse_complex(_kv(parts[0], "s")))
        if name == "laplace":
            pairs = re.findall(r"\(([^()]*)\)", rest)
            leftover = re.sub(r"\(([^()]*)\)", "", rest).replace(",", "").strip()
            if not pairs or leftover:
                raise KernelSpecError("laplace needs (t,w) pairs")
            masses = []
            for pr in pairs:
                bits = pr.split(",")
                if len(bits) != 2:
                    raise KernelSpecError(f"bad mass {pr!r}")
                masses.append((_parse_float(bits[0]), _parse_float(bits[1])))
            return LaplaceDiscrete(tuple(masses))
    except ConfigurationError as exc:
        raise KernelSpecError(str(exc)) from None
    raise KernelSpecError(f"unknown kernel family {name!r}")
