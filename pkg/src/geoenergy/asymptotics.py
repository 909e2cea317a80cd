"""
Complete asymptotic expansions of the energy of N equally spaced points.

An :class:`Expansion` is a finite list of terms c N^a (log N)^b together
with the order of the neglected remainder.  Builders exist for general
admissible kernels (with and without an x^-1 singular term), for the Riesz
and logarithmic families in closed form, for e^(1/x), and for the Euclidean
energy of the roots of unity.

Every builder takes ``dps``: ``None`` builds double-precision coefficients,
an integer builds them in that many decimal digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from math import factorial

from ._numeric import DOUBLE, get_ops
from .energy import _as_length, _neg_int_terms
from .errors import ConfigurationError, DomainError, ParityMismatchError
from .kernels import (
    ExpInv,
    Kernel,
    LaplaceDiscrete,
    Log,
    Riesz,
    SincWeighted,
    Weighted,
    _fmt,
)
from .specialfn import Parity, _poch, bernoulli_poly_exact

__all__ = [
    "ExpansionTerm",
    "Expansion",
    "ExpInvSeries",
    "bp_term",
    "vf_general",
    "vf_exceptional",
    "expansion_geodesic",
    "expansion_riesz",
    "expansion_log",
    "expansion_euclid",
    "build_expansion",
    "evaluate_expansion",
    "expansion_to_json",
    "expansion_from_json",
    "default_q",
]

DEFAULT_P = 2


@dataclass(frozen=True)
class ExpansionTerm:
    coeff: object
    n_power: complex
    log_power: int = 0


@dataclass(frozen=True)
class ExpInvSeries:
    """2N F(N/L) with F(z) = sum_{n>=2} zeta(n) z^n / n!."""

    length: float

    def __call__(self, N, ops=DOUBLE):
        z = ops.num(N) / ops.num(self.length)
        cut = ops.num(1e-16) if ops is DOUBLE else ops.num(10) ** (-ops.dps - 5)
        ez = ops.exp(z)
        terms = []
        zn = z  # z^n / n!, starting at n = 1
        n = 1
        while True:
            n += 1
            zn = zn * z / n
            t = ops.zeta(n) * zn
            terms.append(t)
            # zeta(n) - 1 < c 2^-n, so once past the peak the tail is below the last term
            if n > z and t < cut * ez:
                break
        return 2 * N * ops.fsum(terms)

    def to_json(self):
        return {"kind": "expinv", "length": self.length}


@dataclass(frozen=True)
class Expansion:
    terms: tuple
    parity: Parity | None
    remainder_exponent: float
    remainder_has_log: bool = False
    extra: ExpInvSeries | None = None
    remainder_coeff: float | None = None
    dps: int | None = None
    label: str = ""

    @property
    def exact(self) -> bool:
        return self.remainder_exponent == -math.inf

    def coefficient(self, n_power, log_power=0):
        for t in self.terms:
            if t.n_power == complex(n_power) and t.log_power == log_power:
                return t.coeff
        return 0


def _assemble(ops, raw_terms, parity, rem, rem_log=False, **kw) -> Expansion:
    merged: dict = {}
    order = []
    for c, a, b in raw_terms:
        key = (complex(a), b)
        if key not in merged:
            merged[key] = []
            order.append(key)
        merged[key].append(c)
    terms = []
    for key in order:
        vals = merged[key]
        c = vals[0] if len(vals) == 1 else ops.fsum(vals)
        if ops is DOUBLE:
            c = complex(c)
        terms.append(ExpansionTerm(c, key[0], key[1]))
    terms.sort(key=lambda t: (-t.n_power.real, -t.log_power))
    return Expansion(tuple(terms), parity, float(rem), rem_log, dps=ops.dps, **kw)


def _parity(parity) -> Parity:
    if isinstance(parity, Parity):
        return parity
    if parity in (0, 1):
        return Parity(int(parity))
    raise ValueError("parity must be a Parity or kappa in {0, 1}")


def _is_neg_even_int(s: complex) -> bool:
    return s.imag == 0 and s.real <= -2 and s.real == math.floor(s.real) and int(s.real) % 2 == 0


def _is_one(s) -> bool:
    return complex(s) == 1


# ---------------------------------------------------------------------------
# Building blocks


def bp_term(k: Kernel, L, p: int, parity, dps=None) -> list:
    """Terms (2/L) B_2n(kappa/2)/(2n)! L^2n f^(2n-1)(L/2) N^(2-2n), n = 1..p."""
    ops = get_ops(dps)
    return [ExpansionTerm(c, a, b) for c, a, b in _bp_raw(k, _as_length(L), p, _parity(parity), ops)]


def _bp_raw(k, L, p, parity, ops):
    Lm = ops.num(L)
    half = Lm / 2
    w = Fraction(parity.kappa, 2)
    out = []
    for n in range(1, p + 1):
        b = bernoulli_poly_exact(2 * n, w) / factorial(2 * n)
        c = 2 / Lm * ops.num(b) * Lm ** (2 * n) * k.derivative(2 * n - 1, half, ops)
        out.append((c, complex(2 - 2 * n), 0))
    return out


def _power_integrals(sp, half, skip_one, ops):
    acc = []
    for a, s in sp.terms:
        if skip_one and _is_one(s):
            continue
        acc.append(a * ops.power(half, 1 - s) / ops.num(1 - s))
    return acc


def _remainder_integral(k, sp, q, half, ops):
    if sp.exact:
        return 0

    def g(x):
        return k.remainder(x, q, ops, sp)

    return ops.quad(g, 0, half)


def vf_general(k: Kernel, L, q: int, dps=None):
    """(2/L)[sum a_n (L/2)^(1-s_n)/(1-s_n) + int_0^{L/2} (f - S_q)]."""
    ops = get_ops(dps)
    value = _vf(k, _as_length(L), q, ops, exceptional=False)
    return complex(value) if ops is DOUBLE else value


def vf_exceptional(k: Kernel, L, q: int | None = None, q_prime_index: int | None = None, dps=None):
    """V_f when the singular part contains x^-1: the x^-1 term contributes -a (log 2 - gamma)."""
    ops = get_ops(dps)
    L = _as_length(L)
    if isinstance(k, ExpInv):
        value = _vf_expinv(L, ops)
    else:
        if q is None:
            q = default_q(k, DEFAULT_P)
        value = _vf(k, L, q, ops, exceptional=True, q_prime_index=q_prime_index)
    return complex(value) if ops is DOUBLE else value


def _vf(k, L, q, ops, exceptional, q_prime_index=None):
    if isinstance(k, ExpInv):
        raise ConfigurationError("e^(1/x) has an x^-1 term; use vf_exceptional")
    sp = k.singular_part(q, ops)
    ones = [i for i, (_, s) in enumerate(sp.terms) if _is_one(s)]
    if exceptional:
        if len(ones) != 1:
            raise ConfigurationError("exceptional case needs exactly one exponent s_n = 1")
        if q_prime_index is not None and q_prime_index != ones[0]:
            raise ConfigurationError(f"exponent 1 sits at index {ones[0]}, not {q_prime_index}")
    elif ones:
        raise ConfigurationError("singular part contains x^-1; use vf_exceptional")
    Lm = ops.num(L)
    half = Lm / 2
    parts = _power_integrals(sp, half, exceptional, ops)
    if exceptional:
        a1 = sp.terms[ones[0]][0]
        parts.append(-a1 * (ops.log(ops.num(2)) - ops.euler))
    parts.append(_remainder_integral(k, sp, q, half, ops))
    return ops.fsum(parts) / half


def _vf_expinv(L, ops):
    # 1 + (2/L) sum_{n>=2} (L/2)^(1-n) / (n! (1-n)) - (2/L)(log 2 - gamma)
    Lm = ops.num(L)
    half = Lm / 2
    cut = 1e-18 if ops is DOUBLE else ops.num(10) ** (-ops.dps - 5)
    terms = []
    n = 1
    while True:
        n += 1
        t = ops.power(half, 1 - n) / (ops.num(factorial(n)) * (1 - n))
        terms.append(t)
        if abs(t) < cut:
            break
    return 1 + (ops.fsum(terms) - (ops.log(ops.num(2)) - ops.euler)) / half


def default_q(k: Kernel, p: int) -> int:
    """Smallest singular-part length making 1 - delta + Re s_q <= 1 - 2p."""
    if isinstance(k, Riesz):
        return 0
    if isinstance(k, (Weighted, SincWeighted)):
        return max(0, math.ceil(k.s.real + 2 * p - 1))
    return 2 * p


# ---------------------------------------------------------------------------
# Expansions


def expansion_geodesic(k: Kernel, L, p: int | None = None, q: int | None = None, parity=0, dps=None) -> Expansion:
    """
    V_f N^2 [+ (2/L) a N^2 log N] + sum a_n 2 zeta(s_n)/L^s_n N^(1+s_n) + B_p
    with remainder O(N^(1-2p)) + O(N^(1-delta+Re s_q)).
    """
    ops = get_ops(dps)
    L = _as_length(L)
    parity = _parity(parity)
    if isinstance(k, Log):
        return expansion_log(L, p or DEFAULT_P, parity, dps)
    pinned = p is not None
    p = DEFAULT_P if p is None else p
    if not 1 <= p <= 15:
        raise ConfigurationError("p must lie in 1..15")
    if isinstance(k, ExpInv):
        return _expansion_expinv(L, p, parity, ops)
    if isinstance(k, LaplaceDiscrete):
        if q is not None and q != 2 * p:
            raise ConfigurationError("Laplace-transform kernels use q = 2p")
        q = 2 * p
    if q is None:
        q = default_q(k, p)
    sp = k.singular_part(q, ops)
    if not sp.exact and 1 - sp.s_q.real + sp.delta <= 0:
        raise ConfigurationError("inadmissible singular part: need 1 - Re s_q + delta > 0")
    boundary = not sp.exact and 2 * p == sp.delta - sp.s_q.real
    if boundary and not pinned:
        p += 1
        boundary = False
    Lm = ops.num(L)
    ones = [i for i, (_, s) in enumerate(sp.terms) if _is_one(s)]
    raw = []
    if ones:
        a1 = sp.terms[ones[0]][0]
        raw.append((2 / Lm * a1, 2, 1))
        V = _vf(k, L, q, ops, exceptional=True)
    else:
        V = _vf(k, L, q, ops, exceptional=False)
    raw.append((V, 2, 0))
    raw += _zeta_tower(sp.terms, Lm, ops)
    raw += _bp_raw(k, L, p, parity, ops)
    rem = 1 - 2 * p if sp.exact else max(1 - 2 * p, 1 - sp.delta + sp.s_q.real)
    return _assemble(ops, raw, parity, rem, boundary, label=f"geodesic:{k.to_spec()}")


def _zeta_tower(terms, Lm, ops):
    raw = []
    for a, s in terms:
        s = complex(s)
        if _is_one(s) or _is_neg_even_int(s):
            continue
        raw.append((a * 2 * ops.zeta(s) * ops.power(Lm, -s), 1 + s, 0))
    return raw


def _expansion_expinv(L, p, parity, ops):
    Lm = ops.num(L)
    raw = [
        (2 / Lm, 2, 1),
        (_vf_expinv(L, ops), 2, 0),
        (ops.num(-1), 1, 0),
    ]
    raw += _bp_raw(ExpInv(), L, p, parity, ops)
    return _assemble(ops, raw, parity, 1 - 2 * p, extra=ExpInvSeries(L), label="geodesic:expinv")


def expansion_riesz(s, L, q: int = 2, parity=0, dps=None, sign: int = 1) -> Expansion:
    """
    Closed-form Riesz expansions: general s, s = 1, s = 0 (logarithmic) and
    s = -p (exact, no remainder).  ``sign`` multiplies every coefficient.
    """
    ops = get_ops(dps)
    s = complex(s)
    L = _as_length(L)
    parity = _parity(parity)
    if q < 1:
        raise ConfigurationError("q must be >= 1")
    if s == 0:
        e = expansion_log(L, q, parity, dps)
    elif s == 1:
        e = _riesz_one(L, q, parity, ops)
    elif s.imag == 0 and s.real < 0 and s.real == math.floor(s.real):
        e = _riesz_neg_int(int(-s.real), L, parity, ops)
    else:
        e = _riesz_general(s, L, q, parity, ops)
    if sign != 1:
        e = replace(e, terms=tuple(ExpansionTerm(sign * t.coeff, t.n_power, t.log_power) for t in e.terms))
    return e


def _riesz_general(s, L, q, parity, ops):
    q = max(q, math.ceil(-s.real / 2))
    Lm = ops.num(L)
    half_pow = ops.power(Lm / 2, -s)
    w = Fraction(parity.kappa, 2)
    sm = ops.num(s)
    raw = [
        (half_pow / (1 - sm), 2, 0),
        (2 * ops.zeta(s) * ops.power(Lm, -s), 1 + s, 0),
    ]
    for n in range(1, q + 1):
        b = ops.num(bernoulli_poly_exact(2 * n, w) / factorial(2 * n))
        raw.append((-half_pow * b * _poch(sm, 2 * n - 1) * 4**n, 2 - 2 * n, 0))
    rem_log = s.real == -2 * q
    return _assemble(ops, raw, parity, -2 * q, rem_log, label=f"riesz:s={_fmt(s)}")


def _riesz_one(L, q, parity, ops):
    Lm = ops.num(L)
    two_L = 2 / Lm
    w = Fraction(parity.kappa, 2)
    raw = [
        (two_L, 2, 1),
        (-(ops.log(ops.num(2)) - ops.euler) * two_L, 2, 0),
    ]
    for n in range(1, q + 1):
        b = ops.num(bernoulli_poly_exact(2 * n, w) / (2 * n))
        raw.append((-two_L * b * 4**n, 2 - 2 * n, 0))
    bound = 2 / L * abs(float(bernoulli_poly_exact(2 * q + 2, w))) / (2 * q + 2) * 4 ** (q + 1)
    return _assemble(ops, raw, parity, -2 * q, remainder_coeff=bound, label="riesz:s=1")


def _riesz_neg_int(p, L, parity, ops):
    Lm = ops.num(L)
    raw = [(ops.num(c) * Lm**lp, np_, 0) for c, lp, np_ in _neg_int_terms(p, Fraction(parity.kappa, 2))]
    return _assemble(ops, raw, parity, -math.inf, label=f"riesz:s=-{p}")


def expansion_log(L, q: int = 2, parity=0, dps=None) -> Expansion:
    """V_log N^2 - N log N + N log(L/2pi) - sum B_2n(kappa/2)/((2n-1)2n) 4^n N^(2-2n)."""
    ops = get_ops(dps)
    L = _as_length(L)
    parity = _parity(parity)
    Lm = ops.num(L)
    w = Fraction(parity.kappa, 2)
    raw = [
        (1 - ops.log(Lm / 2), 2, 0),
        (ops.num(-1), 1, 1),
        (ops.log(Lm / (2 * ops.pi)), 1, 0),
    ]
    for n in range(1, q + 1):
        b = ops.num(bernoulli_poly_exact(2 * n, w) / ((2 * n - 1) * 2 * n))
        raw.append((-b * 4**n, 2 - 2 * n, 0))
    return _assemble(ops, raw, parity, -2 * q, label="log")


def expansion_euclid(s, p: int = 3, q: int | None = None, dps=None) -> Expansion:
    """
    Riesz s-energy of the N-th roots of unity (parity independent).  Positive
    odd s produce an N^2 log N term and take V from the exceptional formula.
    """
    ops = get_ops(dps)
    s = complex(s)
    if s == 0:
        raise ConfigurationError("s = 0 is not covered")
    two_pi = 2 * ops.pi
    odd = s.imag == 0 and s.real > 0 and s.real == math.floor(s.real) and int(s.real) % 2 == 1
    if odd:
        ell = (int(s.real) - 1) // 2
        count = p + ell
        alpha = SincWeighted(s).alphas(count, ops)
        V = _vf(SincWeighted(s), two_pi, 2 * count, ops, exceptional=True)
        raw = [(alpha[ell] / ops.pi, 2, 1), (V, 2, 0)]
        for m in range(count + 1):
            if m != ell:
                raw.append(_euclid_term(alpha[m], s - 2 * m, two_pi, ops))
        rem = 1 - 2 * p
    else:
        if q is None:
            q = p
        if not q - 2 * p < s.real < 2 + q:
            raise ConfigurationError("need q - 2p < Re s < 2 + q")
        alpha = SincWeighted(s).alphas(q, ops)
        sm = ops.num(s)
        if _gamma_pole((1 - s) / 2):
            raise ConfigurationError("V_s has a pole here")
        V = ops.power(ops.num(2), -s) * ops.gamma((1 - sm) / 2) * ops.rgamma(1 - sm / 2) / ops.sqrt(ops.pi)
        raw = [(V, 2, 0)]
        for n in range(q + 1):
            raw.append(_euclid_term(alpha[n], s - 2 * n, two_pi, ops))
        rem = max(1 - 2 * p, s.real - 2 * p)
    raw = [r for r in raw if r is not None]
    return _assemble(ops, raw, None, rem, label=f"euclid:s={_fmt(s)}")


def _gamma_pole(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def _euclid_term(alpha, e, two_pi, ops):
    if _is_neg_even_int(e):
        return None
    return (alpha * 2 * ops.zeta(e) * ops.power(two_pi, -e), 1 + e, 0)


def build_expansion(k: Kernel, L, p: int | None = None, q: int | None = None, parity=0, dps=None,
                    euclid: bool = False) -> Expansion:
    """Pick the most specific expansion for a kernel."""
    if euclid:
        if not isinstance(k, SincWeighted):
            raise ConfigurationError("the roots-of-unity expansion needs a sincw kernel")
        return expansion_euclid(k.s, p or 3, q, dps)
    if isinstance(k, Riesz):
        return expansion_riesz(k.s, L, q or p or DEFAULT_P, parity, dps, sign=k.sign)
    if isinstance(k, Log):
        return expansion_log(L, q or p or DEFAULT_P, parity, dps)
    return expansion_geodesic(k, L, p, q, parity, dps)


# ---------------------------------------------------------------------------
# Evaluation and serialization


def evaluate_expansion(e: Expansion, N: int):
    """(value, remainder scale N^rem (log N)) of an expansion at N."""
    if int(N) != N or N < 2:
        raise DomainError("N must be an integer >= 2")
    N = int(N)
    if e.parity is not None and N % 2 != e.parity.kappa:
        raise ParityMismatchError(f"expansion built for kappa={e.parity.kappa}, got N={N}")
    ops = get_ops(e.dps)
    Nm = ops.num(N)
    logN = ops.log(Nm)
    vals = []
    for t in e.terms:
        v = t.coeff * ops.power(Nm, t.n_power)
        if t.log_power:
            v = v * logN**t.log_power
        vals.append(v)
    if e.extra is not None:
        vals.append(e.extra(N, ops))
    value = ops.fsum(vals) if vals else (0j if ops is DOUBLE else ops.num(0))
    if ops is DOUBLE:
        value = complex(value)
    if e.exact:
        scale = 0.0
    else:
        scale = float(N) ** e.remainder_exponent
        if e.remainder_has_log:
            scale *= math.log(N)
    return value, scale


def expansion_to_json(e: Expansion) -> dict:
    terms = []
    for t in e.terms:
        c = complex(t.coeff)
        terms.append({
            "coeff_re": c.real,
            "coeff_im": c.imag,
            "power_re": t.n_power.real,
            "power_im": t.n_power.imag,
            "log_power": t.log_power,
        })
    return {
        "terms": terms,
        "kappa": None if e.parity is None else e.parity.kappa,
        "remainder_exponent": None if e.exact else e.remainder_exponent,
        "remainder_has_log": e.remainder_has_log,
        "remainder_coeff": e.remainder_coeff,
        "extra": None if e.extra is None else e.extra.to_json(),
        "label": e.label,
    }


def expansion_from_json(doc: dict) -> Expansion:
    """Rebuild a double-precision expansion from :func:`expansion_to_json` output."""
    terms = tuple(
        ExpansionTerm(complex(t["coeff_re"], t["coeff_im"]), complex(t["power_re"], t["power_im"]), int(t["log_power"]))
        for t in doc["terms"]
    )
    kappa = doc.get("kappa")
    rem = doc.get("remainder_exponent")
    extra = doc.get("extra")
    if extra is not None:
        if extra.get("kind") != "expinv":
            raise ValueError(f"unknown extra term {extra!r}")
        extra = ExpInvSeries(float(extra["length"]))
    return Expansion(
        terms,
        None if kappa is None else Parity(int(kappa)),
        -math.inf if rem is None else float(rem),
        bool(doc.get("remainder_has_log", False)),
        extra,
        doc.get("remainder_coeff"),
        None,
        doc.get("label", ""),
    )
