import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geoenergy.asymptotics import (
    Expansion,
    ExpInvSeries,
    build_expansion,
    bp_term,
    evaluate_expansion,
    expansion_euclid,
    expansion_from_json,
    expansion_geodesic,
    expansion_log,
    expansion_riesz,
    expansion_to_json,
    vf_exceptional,
    vf_general,
)
from geoenergy.energy import (
    brute_force_energy,
    continuous_energy,
    equally_spaced,
    euclid_exact,
    exact_energy,
    log_exact,
    riesz_exact,
)
from geoenergy.errors import ConfigurationError, DomainError, ParityMismatchError
from geoenergy.kernels import (
    ExpInv,
    LaplaceDiscrete,
    Laurent,
    Log,
    PowerSeries,
    Riesz,
    SincWeighted,
    Weighted,
)
from geoenergy.specialfn import EULER_GAMMA, bernoulli_poly_exact, pochhammer, riemann_zeta
from geoenergy.verify import geometric_grid, kernel_order_fit

PI = math.pi
LOG2_GAMMA = math.log(2) - EULER_GAMMA
EXP_NEG = PowerSeries(tuple((-1) ** n / math.factorial(n) for n in range(40)))


def rel(a, b):
    return abs(complex(a) - complex(b)) / max(abs(complex(b)), 1e-300)


class TestBoundaryTerms:
    def test_sincw_vanishes_on_unit_circle(self):
        for kappa in (0, 1):
            for t in bp_term(SincWeighted(1.5), 2 * PI, 4, kappa):
                assert abs(t.coeff) < 1e-12

    @pytest.mark.parametrize("s", [3, 2.5, 0.5, 1 + 2j])
    @pytest.mark.parametrize("kappa", [0, 1])
    def test_riesz_matches_pochhammer_form(self, s, kappa):
        L = 3.0
        got = bp_term(Riesz(s), L, 3, kappa)
        for n, t in enumerate(got, start=1):
            b = float(bernoulli_poly_exact(2 * n, Fraction(kappa, 2))) / math.factorial(2 * n)
            ref = -((L / 2) ** -s) * b * pochhammer(s, 2 * n - 1) * 4**n
            assert t.n_power == 2 - 2 * n
            assert rel(t.coeff, ref) < 1e-12

    def test_parity_changes_coefficients(self):
        even = bp_term(Riesz(2.5), 2.0, 2, 0)
        odd = bp_term(Riesz(2.5), 2.0, 2, 1)
        assert all(abs(a.coeff - b.coeff) > 1e-3 for a, b in zip(even, odd))


class TestVolumeTerm:
    def test_riesz_half(self):
        assert vf_general(Riesz(0.5), 2.0, 0) == pytest.approx(2, abs=1e-14)

    def test_exp_neg(self):
        for L in (1.0, 3.0, 2 * PI):
            assert abs(vf_general(EXP_NEG, L, 4) - 2 / L * (1 - math.exp(-L / 2))) < 1e-10

    def test_equals_continuous_energy(self):
        assert rel(vf_general(Riesz(0.3), 5.0, 0), continuous_energy(Riesz(0.3), 5.0)) < 1e-11

    def test_laurent_continuation(self):
        # x^-2 + 1/2: every term is a continued power integral
        L = 3.0
        k = Laurent(2, (1, 0, 0.5))
        assert rel(vf_general(k, L, 2), 2 / L * (-(L / 2) ** -1 + 0.5 * L / 2)) < 1e-12

    def test_sine_weight_by_quadrature(self):
        # x^-1/2 sin(x/2) minus its first singular terms is integrated numerically
        L = 3.0
        with mpmath.workdps(30):
            ref = 2 / L * mpmath.quad(lambda x: x**-0.5 * mpmath.sin(x / 2), [0, L / 2])
        assert rel(vf_general(Weighted.sine(0.5, 2 * PI), L, 3), complex(ref)) < 1e-11

    def test_general_rejects_x_inverse(self):
        with pytest.raises(ConfigurationError):
            vf_general(Riesz(1), 2.0, 0)

    def test_riesz_one(self):
        for L in (2.0, 2 * PI):
            assert rel(vf_exceptional(Riesz(1), L, 0), -LOG2_GAMMA / (L / 2)) < 1e-14

    def test_expinv(self):
        ref = math.e - (1 - 2 * EULER_GAMMA + math.log(2) + float(mpmath.ei(1)))
        assert rel(vf_exceptional(ExpInv(), 2.0), ref) < 1e-13

    def test_pure_inverse(self):
        assert rel(vf_exceptional(Laurent(1, (1,)), 2.0, 0), -LOG2_GAMMA) < 1e-14

    def test_exceptional_needs_x_inverse(self):
        with pytest.raises(ConfigurationError):
            vf_exceptional(Riesz(2.5), 2.0, 0)
        with pytest.raises(ConfigurationError):
            vf_exceptional(Laurent(2, (1, 1)), 2.0, 1, q_prime_index=0)


class TestGeodesic:
    def test_riesz_three_terms(self):
        L = 2 * PI
        e = expansion_geodesic(Riesz(3), L, p=2, q=0, parity=0)
        assert rel(e.coefficient(2), (L / 2) ** -3 / (1 - 3)) < 1e-13
        assert rel(e.coefficient(4), 2 * riemann_zeta(3) * L**-3) < 1e-14

    @given(st.sampled_from([3, 2.5, 0.5, -0.5, 1 + 2j, -1.5 + 0.5j]), st.sampled_from([0, 1]))
    @settings(max_examples=20, deadline=None)
    def test_general_route_equals_riesz_closed_form(self, s, kappa):
        L = 3.0
        a = expansion_geodesic(Riesz(s), L, p=3, parity=kappa)
        b = expansion_riesz(s, L, 3, kappa)
        for N in (50 + kappa, 400 + kappa):
            va, _ = evaluate_expansion(a, N)
            vb, _ = evaluate_expansion(b, N)
            assert rel(va, vb) < 1e-12

    def test_laplace_linear_coefficient(self):
        e = expansion_geodesic(LaplaceDiscrete(((1.0, 1.0),)), 2 * PI, p=2)
        assert rel(e.coefficient(1), -1) < 1e-14

    def test_negative_even_zeta_terms_dropped(self):
        e = expansion_geodesic(EXP_NEG, 3.0, p=3, q=6)
        assert all(t.n_power not in (-1, -3, -5) for t in e.terms)

    def test_laplace_pins_q(self):
        with pytest.raises(ConfigurationError):
            expansion_geodesic(LaplaceDiscrete(((1.0, 1.0),)), 3.0, p=2, q=3)

    def test_boundary_nudges_unpinned_p(self):
        # exp(-x) with q = 3: 2p = delta - Re s_q at p = 2
        pinned = expansion_geodesic(EXP_NEG, 3.0, p=2, q=3)
        assert pinned.remainder_has_log and pinned.remainder_exponent == -3
        free = expansion_geodesic(EXP_NEG, 3.0, q=3)
        assert not free.remainder_has_log and free.remainder_exponent == -3

    def test_remainder_exponent(self):
        e = expansion_geodesic(Weighted.sine(0.5, 2 * PI), 2 * PI, p=2)
        assert e.remainder_exponent == -3

    def test_terms_sorted(self):
        for k in (EXP_NEG, Laurent(2, (1, 1)), SincWeighted(1.5), ExpInv()):
            e = build_expansion(k, 3.0, p=3)
            re = [t.n_power.real for t in e.terms]
            assert re == sorted(re, reverse=True)
            assert e.remainder_has_log or e.remainder_exponent < min(re)

    def test_p_range(self):
        with pytest.raises(ConfigurationError):
            expansion_geodesic(EXP_NEG, 3.0, p=16)


class TestRiesz:
    def test_negative_one_is_exact(self):
        for kappa, N in ((0, 4), (1, 7), (0, 30)):
            e = expansion_riesz(-1, 2 * PI, parity=kappa)
            v, scale = evaluate_expansion(e, N)
            assert e.exact and scale == 0
            assert rel(v, PI / 2 * (N * N - kappa)) < 1e-14

    def test_log_linear_term(self):
        e = expansion_riesz(0, 2 * PI)
        assert abs(e.coefficient(1)) < 1e-15
        assert e.coefficient(1, 1) == -1

    def test_s_one_leading(self):
        e = expansion_riesz(1, 2.0)
        assert rel(e.coefficient(2, 1), 1) < 1e-15
        assert e.remainder_coeff is not None

    def test_q_raised_for_very_negative_s(self):
        e = expansion_riesz(-5.5 + 1j, 3.0, q=1)
        assert e.remainder_exponent == -6

    @pytest.mark.parametrize("p", [1, 2, 3, 4])
    def test_negative_integers_exact_against_brute_force(self, p):
        L = 3.0
        for N in range(2, 41):
            e = expansion_riesz(-p, L, parity=N % 2)
            v, _ = evaluate_expansion(e, N)
            bf = brute_force_energy(Riesz(-p), equally_spaced(N, L))
            assert rel(v, bf) < 1e-11, N

    @pytest.mark.parametrize("L", [2.0, 2 * PI])
    @pytest.mark.parametrize("q", [1, 2])
    def test_s_one_bound(self, L, q):
        for kappa in (0, 1):
            e = expansion_riesz(1, L, q, kappa, dps=40)
            for N in (10 + kappa, 38 + kappa, 200 + kappa):
                v, scale = evaluate_expansion(e, N)
                err = abs(riesz_exact(1, L, N, dps=40) - v)
                assert float(err) <= e.remainder_coeff * scale


class TestLog:
    def test_against_exact(self):
        e = expansion_log(3.0, 2, 0)
        v, _ = evaluate_expansion(e, 1000)
        assert abs(v - log_exact(3.0, 1000)) < 10 * 1000.0**-4 * 1e6
        hp = expansion_log(3.0, 2, 0, dps=40)
        v, _ = evaluate_expansion(hp, 1000)
        assert abs(v - log_exact(3.0, 1000, dps=40)) < 10 * 1000.0**-4

    def test_kernel_dispatch(self):
        assert build_expansion(Log(), 3.0, q=2) == expansion_log(3.0, 2, 0)


class TestEuclid:
    def test_s_two_reproduces_closed_form(self):
        e = expansion_euclid(2, p=3)
        assert abs(e.coefficient(2)) < 1e-15
        assert rel(e.coefficient(3), 1 / 12) < 1e-14
        assert rel(e.coefficient(1), -1 / 12) < 1e-14
        for N in (5, 10, 64, 301):
            v, _ = evaluate_expansion(e, N)
            assert rel(v, N * (N * N - 1) / 12) < 1e-12

    def test_s_minus_one_volume(self):
        assert rel(expansion_euclid(-1, p=3).coefficient(2), 4 / PI) < 1e-14

    def test_odd_s_has_log_term(self):
        e = expansion_euclid(3, p=2)
        assert rel(e.coefficient(2, 1), 1 / (8 * PI)) < 1e-14

    @pytest.mark.parametrize("s", [3, 1.5])
    def test_against_exact(self, s):
        e = expansion_euclid(s, p=2, dps=40)
        errs = []
        for N in (256, 1024):
            v, scale = evaluate_expansion(e, N)
            errs.append(float(abs(euclid_exact(s, N, dps=40) - v)) / scale)
        assert errs[1] <= errs[0] * 1.01 and errs[0] < 1

    def test_parity_free(self):
        e = expansion_euclid(1.5)
        evaluate_expansion(e, 10)
        evaluate_expansion(e, 11)

    def test_rejections(self):
        with pytest.raises(ConfigurationError):
            expansion_euclid(0)
        with pytest.raises(ConfigurationError):
            build_expansion(Riesz(2), 2 * PI, euclid=True)


class TestExpInv:
    def test_series_truncation(self):
        L, N = 2 * PI, 48
        z = mpmath.mpf(N) / L
        with mpmath.workdps(40):
            ref = 2 * N * mpmath.nsum(lambda n: mpmath.zeta(n) * z**n / mpmath.factorial(n), [2, mpmath.inf])
        assert rel(ExpInvSeries(L)(N), complex(ref)) < 1e-14

    def test_expansion_against_exact(self):
        L, N = 2 * PI, 48
        e = build_expansion(ExpInv(), L, p=3, dps=40)
        v, _ = evaluate_expansion(e, N)
        ex = exact_energy(ExpInv(), L, N, dps=40)
        assert float(abs(v - ex) / abs(ex)) <= 1e-6


class TestEvaluate:
    def test_empty(self):
        e = Expansion((), None, -math.inf)
        assert evaluate_expansion(e, 7) == (0, 0.0)

    def test_parity_mismatch(self):
        e = expansion_riesz(2.5, 3.0, 2, 0)
        with pytest.raises(ParityMismatchError):
            evaluate_expansion(e, 11)

    def test_bad_n(self):
        e = expansion_riesz(2.5, 3.0, 2, 0)
        with pytest.raises(DomainError):
            evaluate_expansion(e, 0)

    def test_remainder_scale(self):
        e = expansion_riesz(2.5, 3.0, 2, 0)
        assert evaluate_expansion(e, 10)[1] == pytest.approx(1e-4)

    @pytest.mark.parametrize("k", [Riesz(1), Riesz(1 + 2j), Log(), EXP_NEG, ExpInv(), SincWeighted(1.5)],
                             ids=lambda k: k.to_spec()[:20])
    def test_json_round_trip(self, k):
        e = build_expansion(k, 3.0, p=2, parity=1)
        back = expansion_from_json(expansion_to_json(e))
        assert back.terms == e.terms and back.parity == e.parity
        assert evaluate_expansion(back, 41) == evaluate_expansion(e, 41)


CLOSURE = [
    Riesz(3), Riesz(2.5), Riesz(0.5), Riesz(-0.5), Riesz(1 + 2j), Log(), EXP_NEG, Laurent(2, (1, 1)),
    Weighted.sine(0.5, 2 * PI), SincWeighted(1.5), SincWeighted(3), ExpInv(),
]


@pytest.mark.parametrize("kappa", [0, 1])
@pytest.mark.parametrize("k", CLOSURE, ids=lambda k: k.to_spec()[:20])
def test_oracle_closure(k, kappa):
    L = 2 * PI
    ratios = []
    for N in (64, 128, 256, 512, 1024, 2048, 4096):
        N += kappa
        # e^(1/x) energies grow like e^(N/L); keep enough digits past the cancellation
        dps = 40 + int(N / L / math.log(10)) if isinstance(k, ExpInv) else 60
        e = build_expansion(k, L, parity=kappa, dps=dps)
        v, scale = evaluate_expansion(e, N)
        ratios.append(float(abs(exact_energy(k, L, N, dps=dps) - v)) / scale)
    assert max(ratios) < 1e3
    assert ratios[-1] <= 1.01 * ratios[0]


class TestObservedOrders:
    """Measured remainder slopes where the declared exponent is a bound, not the rate."""

    @pytest.mark.parametrize("p", [1, 2])
    @pytest.mark.parametrize("kappa", [0, 1])
    def test_exp_neg_gains_a_power(self, p, kappa):
        rep = kernel_order_fit(EXP_NEG, 2 * PI, geometric_grid(128, 4096, 5, kappa), p=p)
        assert rep.declared_exponent == 1 - 2 * p
        assert abs(rep.slope + 2 * p) < 0.3

    @pytest.mark.parametrize("kappa", [0, 1])
    def test_sine_weight_follows_singular_remainder(self, kappa):
        # q = 4 leaves x^(9/2) in the weight: 1 - delta + Re s_q = -7/2
        rep = kernel_order_fit(Weighted.sine(0.5, 2 * PI), 2 * PI, geometric_grid(128, 4096, 5, kappa), p=2)
        assert rep.declared_exponent == -3
        assert abs(rep.slope + 3.5) < 0.1

    @pytest.mark.parametrize("q", [1, 2, 3])
    def test_riesz_three_odd(self, q):
        rep = kernel_order_fit(Riesz(3), 2 * PI, geometric_grid(128, 4096, 5, 1), q=q)
        assert rep.passed and abs(rep.slope + 2 * q) < 0.3

    def test_euclid_odd_s(self):
        rep = kernel_order_fit(SincWeighted(3), 2 * PI, geometric_grid(128, 4096, 5, 0), p=2, euclid=True)
        assert rep.slope < -3.7
