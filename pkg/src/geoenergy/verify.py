"""
Independent checkers: remainder-order regression, a brute-force search for
optimal configurations, and a suite of cross-identities.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np
from scipy import integrate

from .asymptotics import Expansion, build_expansion, evaluate_expansion, expansion_euclid
from .energy import (
    _as_length,
    antipodal_energy,
    continuous_energy,
    euclid_exact,
    exact_energy,
    geodesic_distance,
)
from .errors import ConfigurationError, DomainError
from .kernels import Kernel, SincWeighted, Weighted
from .specialfn import (
    EULER_GAMMA,
    bernoulli_number,
    bernoulli_poly_exact,
    hurwitz_zeta,
    incomplete_zeta,
    psi_p,
    riemann_zeta,
)

__all__ = [
    "OrderFitReport",
    "OptimalityReport",
    "IdentityReport",
    "order_fit",
    "kernel_order_fit",
    "geometric_grid",
    "optimality_search",
    "spacing_deviation",
    "identity_suite",
]

DEFAULT_TOLERANCE = 0.3
MIN_R_SQUARED = 0.9


def _json_float(x):
    x = float(x)
    return x if math.isfinite(x) else None


# ---------------------------------------------------------------------------
# Remainder orders


@dataclass
class OrderFitReport:
    slope: float
    intercept: float
    r_squared: float
    n_values: list
    declared_exponent: float
    passed: bool
    status: str = "fit"
    tolerance: float = DEFAULT_TOLERANCE
    errors: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "slope": _json_float(self.slope),
            "intercept": _json_float(self.intercept),
            "r_squared": _json_float(self.r_squared),
            "n_values": list(self.n_values),
            "declared_exponent": _json_float(self.declared_exponent),
            "pass": self.passed,
            "status": self.status,
            "tolerance": self.tolerance,
            "errors": [float(e) for e in self.errors],
        }


def geometric_grid(start: int, stop: int, count: int = 5, parity: int | None = None) -> list:
    """Roughly geometric integers from start to stop, nudged up to the requested parity."""
    if count < 2 or start < 2 or stop <= start:
        raise ConfigurationError("need count >= 2 and 2 <= start < stop")
    raw = np.geomspace(start, stop, count)
    out = []
    for v in raw:
        n = int(round(v))
        if parity is not None and n % 2 != parity:
            n += 1
        if out and n <= out[-1]:
            n = out[-1] + (2 if parity is not None else 1)
        out.append(n)
    return out


def order_fit(exact_fn, expansion_builder, L, N_grid, parity, tolerance=DEFAULT_TOLERANCE) -> OrderFitReport:
    """
    Least-squares slope of log|exact - expansion| against log N.

    ``exact_fn(L, N)`` returns the exact energy and ``expansion_builder(L, kappa)``
    an :class:`Expansion`.  Differences below a round-off floor relative to
    |exact| (1e-15 in double precision, 10^(5 - dps) otherwise) are dropped.
    """
    N_grid = [int(n) for n in N_grid]
    if len(N_grid) < 4:
        raise ConfigurationError("order_fit needs at least 4 grid points")
    if any(n % 2 != parity for n in N_grid):
        raise ConfigurationError(f"every N must have parity {parity}")
    if sorted(set(N_grid)) != N_grid:
        raise ConfigurationError("grid must be strictly increasing")
    e: Expansion = expansion_builder(L, parity)
    floor = 1e-15 if e.dps is None else 10.0 ** (5 - e.dps)
    declared = e.remainder_exponent
    used, errs = [], []
    for N in N_grid:
        exact = exact_fn(L, N)
        approx, _ = evaluate_expansion(e, N)
        diff = abs(exact - approx)
        if diff <= floor * abs(exact):
            continue
        used.append(N)
        errs.append(float(diff))
    nan = math.nan
    if len(used) < 3:
        if e.exact and not used:
            return OrderFitReport(nan, nan, nan, N_grid, declared, True, "exact", tolerance)
        return OrderFitReport(nan, nan, nan, used, declared, False, "inconclusive", tolerance, errs)
    x = np.log(np.asarray(used, dtype=float))
    y = np.log(np.asarray(errs))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    ok = abs(slope - declared) <= tolerance and r2 >= MIN_R_SQUARED
    return OrderFitReport(float(slope), float(intercept), r2, used, declared, bool(ok), "fit", tolerance, errs)


def kernel_order_fit(k: Kernel, L, N_grid, p=None, q=None, parity=None, dps=60, euclid=False,
                     build_parity=None, tolerance=DEFAULT_TOLERANCE) -> OrderFitReport:
    """
    order_fit for a kernel against exact_energy (or euclid_exact when ``euclid``).

    ``build_parity`` builds the expansion for a different kappa than the grid,
    to check that the parity-dependent coefficients matter.
    """
    N_grid = [int(n) for n in N_grid]
    if parity is None:
        parity = N_grid[0] % 2
    kb = parity if build_parity is None else build_parity

    if euclid:
        def exact_fn(L_, N):
            return euclid_exact(k.s, N, dps)
    else:
        def exact_fn(L_, N):
            return exact_energy(k, L_, N, dps)

    def builder(L_, kappa):
        return build_expansion(k, L_, p, q, kb, dps, euclid=euclid)

    if kb != parity:
        # evaluate a wrong-parity expansion by relabelling it
        def wrong(L_, kappa):
            return replace(builder(L_, kappa), parity=None)
        return order_fit(exact_fn, wrong, L, N_grid, parity, tolerance)
    return order_fit(exact_fn, builder, L, N_grid, parity, tolerance)


# ---------------------------------------------------------------------------
# Optimality search


@dataclass
class OptimalityReport:
    best_energy: float
    reference_energy: float
    best_positions: list
    restarts: int
    passed: bool
    case: str = "A"
    seed: int = 0
    energies: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "best_energy": self.best_energy,
            "reference_energy": self.reference_energy,
            "best_positions": list(self.best_positions),
            "restarts": self.restarts,
            "pass": self.passed,
            "case": self.case,
            "seed": self.seed,
        }


def _pair_values(k: Kernel, d: np.ndarray, f0) -> np.ndarray:
    out = np.empty(d.shape, dtype=float)
    zero = d == 0
    if zero.any():
        if not math.isfinite(f0):
            return np.full(d.shape, math.inf)
        out[zero] = f0
    if (~zero).any():
        v = np.asarray(k.value(d[~zero]))
        if np.iscomplexobj(v):
            if np.any(v.imag != 0):
                raise ConfigurationError("optimality search needs a real-valued kernel")
            v = v.real
        out[~zero] = v
    return out


def _total(k, x, L, f0):
    n = len(x)
    D = geodesic_distance(x[:, None], x[None, :], L)
    d = D[~np.eye(n, dtype=bool)]
    vals = _pair_values(k, d, f0)
    return math.fsum(vals)


def _moves(N):
    # single coordinates, then pairs moved together: a pair sitting at mutual
    # distance L/2 is locked by the kink of the geodesic distance and can only
    # travel jointly
    singles = [(i,) for i in range(1, N)]
    pairs = [(i, j) for i in range(1, N) for j in range(i + 1, N)]
    return singles + pairs


def _runs(x):
    # runs of 3 or more neighbours in circular order, skipping the pinned point:
    # a tight cluster only moves as a whole
    order = [int(i) for i in np.argsort(x) if i != 0]
    n = len(order)
    return [tuple(sorted(order[a:b])) for a in range(n) for b in range(a + 3, n + 1)]


def _partial(k, x, moved, L, f0, keep):
    # energy carried by the pairs touching ``moved``, excluding pairs inside it;
    # ``keep`` masks out the moved points
    others = x[keep]
    acc = 0.0
    for i in moved:
        acc += _pair_values(k, geodesic_distance(x[i], others, L), f0).sum()
    return 2 * acc


def _descend(k, L, N, f0, rng) -> tuple:
    x = rng.uniform(0.0, L, N)
    x[0] = 0.0
    energy = _total(k, x, L, f0)
    while not math.isfinite(energy):
        x[1:] = rng.uniform(0.0, L, N - 1)
        energy = _total(k, x, L, f0)
    masks = {}

    def mask(mv):
        if mv not in masks:
            m = np.ones(N, dtype=bool)
            m[list(mv)] = False
            masks[mv] = m
        return masks[mv]

    base = _moves(N)
    step = L / 4
    while step > 1e-10:
        improved = False
        for mv in base + _runs(x):
            keep = mask(mv)
            cur = _partial(k, x, mv, L, f0, keep)
            slack = 1e-13 * (abs(energy) + abs(cur))
            for sgn in (1.0, -1.0):
                trial = x.copy()
                trial[list(mv)] = (x[list(mv)] + sgn * step) % L
                new = _partial(k, trial, mv, L, f0, keep)
                # non-finite trials (coincident singular points) are rejected
                if math.isfinite(new) and new < cur - slack:
                    x = trial
                    energy += new - cur
                    improved = True
                    break
        if not improved:
            step /= 2
    return _total(k, x, L, f0), x


def spacing_deviation(positions, L) -> float:
    """Max distance of the gauge-fixed, sorted positions from k L / N."""
    x = np.sort((np.asarray(positions, dtype=float) - positions[0]) % L)
    N = len(x)
    target = np.arange(N) * L / N
    dev = np.abs(x - target)
    return float(np.max(np.minimum(dev, L - dev)))


def optimality_search(k: Kernel, L, N: int, restarts: int = 50, seed: int = 0, case: str = "A",
                      jobs: int = 1) -> OptimalityReport:
    """
    Multi-restart coordinate descent on arclength positions with point 0 pinned
    at 0.  Case "A" compares with equally spaced points, case "B" with the
    antipodal two-point system.
    """
    L = _as_length(L)
    if not 2 <= N <= 12:
        raise DomainError("optimality_search handles 2 <= N <= 12")
    if case not in ("A", "B"):
        raise ConfigurationError("case must be 'A' or 'B'")
    f0 = k.at_zero()
    f0 = complex(f0).real if math.isfinite(complex(f0).real) else math.inf
    streams = np.random.SeedSequence(seed).spawn(restarts)

    def run(ss):
        return _descend(k, L, N, f0, np.random.default_rng(ss))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, streams))
    else:
        results = [run(ss) for ss in streams]
    energies = [r[0] for r in results]
    best = int(np.argmin(energies))
    best_energy, best_x = results[best]
    if case == "A":
        ref = complex(exact_energy(k, L, N)).real
    else:
        ref = complex(antipodal_energy(k.value(L / 2), N)).real
    ok = best_energy >= ref - 1e-9 * abs(ref)
    positions = sorted(float(v) for v in best_x)
    return OptimalityReport(float(best_energy), float(ref), positions, restarts, bool(ok), case, seed, energies)


# ---------------------------------------------------------------------------
# Identity suite


@dataclass
class IdentityReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def add(self, name, error, tolerance):
        error = float(error)
        self.checks.append({"name": name, "error": error, "tolerance": tolerance, "pass": error <= tolerance})

    def to_json(self) -> dict:
        return {"checks": self.checks, "pass": self.passed}


def _rel(a, b):
    a, b = complex(a), complex(b)
    return abs(a - b) / max(abs(b), 1e-300)


def fresnel_s1() -> float:
    """S(1) = int_0^1 sin(pi t^2 / 2) dt by adaptive quadrature."""
    return integrate.quad(lambda t: math.sin(math.pi * t * t / 2), 0.0, 1.0, epsabs=1e-14, epsrel=1e-14)[0]


def identity_suite() -> IdentityReport:
    rep = IdentityReport()

    # chordal identity: geodesic sincw energy on a length-2pi curve = roots-of-unity energy
    k = SincWeighted(1.5)
    err = max(_rel(exact_energy(k, 2 * math.pi, N), euclid_exact(1.5, N)) for N in range(2, 33))
    rep.add("chordal identity s=1.5, N=2..32", err, 1e-12)

    # zeta_p at nonpositive integers is exact, hence independent of y
    spread = 0.0
    for n in range(0, 7):
        vals = [incomplete_zeta(3, 0, y, -n) for y in (5, 50, 500)]
        truth = (-1) ** n * float(bernoulli_number(n + 1)) / (n + 1)
        spread = max(spread, max(abs(v - vals[0]) for v in vals), max(abs(v - truth) for v in vals))
    rep.add("incomplete zeta y-independence at s=0..-6", spread, 1e-13)

    rep.add("psi_p(1/2, 100) -> Euler gamma", abs(psi_p(3, 0.5, 100) - EULER_GAMMA), 1e-8)

    err = 0.0
    for n in range(0, 41):
        lhs = bernoulli_poly_exact(n, Fraction(1, 2))
        rhs = -(1 - Fraction(2) ** (1 - n)) * bernoulli_number(n)
        err = max(err, abs(float(lhs - rhs)))
    rep.add("B_n(1/2) = -(1 - 2^(1-n)) B_n, n=0..40", err, 0.0)

    err = max(_rel(euclid_exact(2, N), N * (N * N - 1) / 12) for N in range(2, 51))
    rep.add("roots of unity s=2 energy N(N^2-1)/12", err, 1e-12)

    err = 0.0
    for s in (2.5, 0.5, -1.5, -3.7, 1 + 2j, 0.3 - 4j, -2.5 + 1j):
        err = max(err, _rel(hurwitz_zeta(s, 1.0), riemann_zeta(s)))
        err = max(err, _rel(hurwitz_zeta(s, 0.5), (2**s - 1) * riemann_zeta(s)))
    rep.add("Hurwitz reductions at a=1 and a=1/2", err, 1e-12)

    err = max(abs(riemann_zeta(0) + 0.5), max(abs(riemann_zeta(-2 * j)) for j in range(1, 6)))
    rep.add("zeta(0) = -1/2 and trivial zeros", err, 1e-13)

    v = expansion_euclid(-1, 3).coefficient(2)
    rep.add("roots of unity V_-1 = 4/pi", abs(complex(v) - 4 / math.pi), 1e-12)

    S1 = fresnel_s1()
    err = 0.0
    for L in (2.0, 2 * math.pi):
        V = continuous_energy(Weighted.sine(0.5, L), L)
        err = max(err, abs(complex(V) - 2 * math.sqrt(2 / L) * S1))
    rep.add("sine-weighted V against Fresnel S(1)", err, 1e-9)
    return rep
