import math
from fractions import Fraction

import numpy as np
import pytest

from arithmoments.errors import EmptyRangeError, OrderLimitError, ParameterError
from arithmoments.functions.builtins import builtin
from arithmoments.functions.combinators import custom_function
from arithmoments.functions.prime_classes import build_prime_classes, kolmogorov_example_function
from arithmoments.limitlaws.kolmogorov import parse_params
from arithmoments.models.domain import MomentReport, PrimeSumMode, ProgressionSpec
from arithmoments.predictor.sums import (
    bounded_moment_check,
    class_h_profile,
    compare,
    floor_mean,
    lnln,
    mertens_progression,
    moment_sums,
    selected_primes,
    smallness_proxy,
    xp_central_moment,
)
from arithmoments.primes.sieve import primes_up_to

PAPER = PrimeSumMode.PAPER_PROGRESSION
DIVISOR = PrimeSumMode.DIVISOR_DENSITY


@pytest.fixture(scope="module")
def primes_million():
    return primes_up_to(10**6)


def test_lnln():
    assert math.isnan(lnln(1))
    assert lnln(math.e**math.e) == pytest.approx(1.0)


def test_reciprocal_prime_sum(primes_million):
    spec = ProgressionSpec(k=1, l=1, n=10**6)
    predicted = moment_sums(builtin("omega"), spec, PAPER, 3, primes_million)
    assert predicted.orders == [1, 2, 3]
    assert predicted.sums[0] == pytest.approx(2.8873, abs=1e-4)
    assert predicted.sums[0] == predicted.sums[1] == predicted.sums[2]
    assert predicted.B == pytest.approx(math.sqrt(predicted.sums[0]))
    assert predicted.prime_count == 78498
    assert predicted.leading_terms[0] == pytest.approx(lnln(10**6))


def test_mertens_constant(primes_million):
    report = mertens_progression(ProgressionSpec(k=1, l=1, n=10**6), primes_million)
    assert report.phi_k == 1
    assert report.difference == pytest.approx(0.2615, abs=0.005)


def test_mertens_in_progression_is_stable(primes_million):
    low = mertens_progression(ProgressionSpec(k=4, l=1, n=10**5), primes_million)
    high = mertens_progression(ProgressionSpec(k=4, l=1, n=10**6), primes_million)
    assert high.phi_k == 2
    assert high.leading == pytest.approx(lnln(10**6) / 2)
    assert abs(high.difference - low.difference) < 0.02


def test_small_progression_sums():
    spec = ProgressionSpec(k=2, l=1, n=10)
    primes = primes_up_to(10)
    expected = 1 / 3 + 1 / 5 + 1 / 7
    for mode in (PAPER, DIVISOR):
        predicted = moment_sums(builtin("omega"), spec, mode, 1, primes)
        assert predicted.sums == [pytest.approx(expected)]
        assert predicted.prime_count == 3


def test_modes_split_over_residues(primes_million):
    f = builtin("log_p_sum")
    n = 10**5
    parts = [moment_sums(f, ProgressionSpec(k=4, l=l, n=n), PAPER, 4, primes_million) for l in (1, 3)]
    whole = moment_sums(f, ProgressionSpec(k=4, l=1, n=n), DIVISOR, 4, primes_million)
    assert parts[0].prime_count + parts[1].prime_count == whole.prime_count
    for u in range(4):
        assert parts[0].sums[u] + parts[1].sums[u] == pytest.approx(whole.sums[u], rel=1e-12)
    assert whole.leading_terms[1] == pytest.approx(lnln(n) ** 2)
    assert parts[0].leading_terms[1] == pytest.approx(lnln(n) ** 2 / 2)


def test_progression_count_mod_four(primes_million):
    selected = selected_primes(ProgressionSpec(k=4, l=1, n=10**6), PAPER, primes_million)
    assert selected.size == 39175
    assert np.all(selected % 4 == 1)


def test_prime_set_must_cover_n():
    with pytest.raises(EmptyRangeError):
        selected_primes(ProgressionSpec(k=1, l=1, n=1000), PAPER, primes_up_to(100))


def test_moment_sums_order_limit():
    with pytest.raises(OrderLimitError):
        moment_sums(builtin("omega"), ProgressionSpec(k=1, l=1, n=100), PAPER, 0, primes_up_to(100))


@pytest.mark.parametrize("p", [2, 3, 5, 101])
@pytest.mark.parametrize("fp", [-2.0, 0.5, 3.0])
def test_xp_central_moments(p, fp):
    assert xp_central_moment(fp, p, 1) == pytest.approx(0.0, abs=1e-15)
    assert xp_central_moment(fp, p, 2) == pytest.approx(fp * fp / p * (1 - 1 / p))
    for u in range(2, 7):
        remainder = abs(xp_central_moment(fp, p, u) - fp**u / p)
        assert remainder <= (u + 1) * abs(fp) ** u / p**2 + 1e-12


def test_xp_central_moment_errors():
    with pytest.raises(ParameterError):
        xp_central_moment(1.0, 1, 2)
    with pytest.raises(OrderLimitError):
        xp_central_moment(1.0, 2, 0)


def test_floor_mean_small():
    # omega over 1..10 sums to 11
    assert floor_mean(builtin("omega"), 10, primes_up_to(10)) == pytest.approx(1.1)


def test_bounded_check_for_log_phi_ratio(primes_million):
    report = bounded_moment_check(builtin("log_phi_ratio"), ProgressionSpec(k=1, l=1, n=10**6), primes_million)
    assert report.sup_abs == pytest.approx(math.log(2))
    assert report.sup_at == 2
    assert report.tail_bound == 10**5
    assert report.verdict


def test_bounded_check_for_omega(primes_million):
    report = bounded_moment_check(builtin("omega"), ProgressionSpec(k=1, l=1, n=10**6), primes_million)
    assert report.sup_abs == 1.0
    assert report.tail_difference == pytest.approx(lnln(10**6) - lnln(10**5), abs=0.01)
    assert not report.verdict


def test_class_h_profile(primes_million):
    spec = ProgressionSpec(k=1, l=1, n=10**6)
    points = class_h_profile(builtin("omega"), spec, PAPER, primes_million, [10**6, 10**4, 10**5])
    assert [point.n for point in points] == [10**4, 10**5, 10**6]
    for point in points:
        assert point.ratio == pytest.approx(math.log(point.D) / lnln(point.n))
    assert points[0].D < points[1].D < points[2].D

    zero = custom_function("zero", "strongly_additive", "0")
    assert class_h_profile(zero, spec, PAPER, primes_million, [1000])[0].ratio is None

    with pytest.raises(EmptyRangeError):
        class_h_profile(builtin("omega"), spec, PAPER, primes_million, [2 * 10**6])


def test_smallness_proxy(primes_million):
    spec = ProgressionSpec(k=1, l=1, n=10**6)
    f = builtin("omega")
    B = math.sqrt(2.8873)
    wide = smallness_proxy(f, spec, PAPER, primes_million, 0.5)
    assert wide.B == pytest.approx(B, rel=1e-4)
    assert wide.exceed_fraction == 1.0
    assert wide.max_ratio == pytest.approx(1 / B, rel=1e-4)
    assert smallness_proxy(f, spec, PAPER, primes_million, 1.0).exceed_fraction == 0.0
    with pytest.raises(ParameterError):
        smallness_proxy(f, spec, PAPER, primes_million, 0.0)


def test_compare_rows():
    spec = ProgressionSpec(k=1, l=1, n=1000)
    primes = primes_up_to(1000)
    report = MomentReport(spec=spec, function="omega_diff", count=1000, mean=0.5, central_moments=[0.4, 0.1], max_order=3)
    predicted = moment_sums(builtin("omega_diff"), spec, PAPER, 4, primes)
    comparison = compare(report, predicted)
    assert [row.order for row in comparison.rows] == [1, 2, 3]
    assert all(row.predicted == 0.0 and row.ratio is None for row in comparison.rows)

    predicted = moment_sums(builtin("omega"), spec, PAPER, 2, primes)
    rows = compare(report, predicted).rows
    assert rows[0].empirical == 0.5
    assert rows[1].ratio == pytest.approx(0.4 / predicted.sums[1])


def test_modes_agree_for_modulus_one(primes_million):
    spec = ProgressionSpec(k=1, l=1, n=10**5)
    f = builtin("big_omega_minus_log_phi_ratio")
    paper = moment_sums(f, spec, PAPER, 4, primes_million)
    divisor = moment_sums(f, spec, DIVISOR, 4, primes_million)
    assert paper.sums == divisor.sums
    assert paper.leading_terms == divisor.leading_terms


def test_kolmogorov_example_sums_grow_toward_scale(primes_million):
    params = parse_params("A=-1,C=1,mu=0.3,nu=0.3")
    f = kolmogorov_example_function(params, build_prime_classes(primes_million, params, 1))
    ratios = []
    for n in (10**4, 10**5, 10**6):
        predicted = moment_sums(f, ProgressionSpec(k=1, l=1, n=n), PAPER, 2, primes_million)
        ratios.append([s / lead for s, lead in zip(predicted.sums, predicted.leading_terms)])
    for u in (0, 1):
        assert ratios[0][u] < ratios[1][u] < ratios[2][u]
    assert ratios[2][1] < 1.0


def test_xp_central_moment_against_outcomes():
    fps = [-3.0, -1.5, -0.75, -0.125, 0.25, 0.5, 1.0, 2.0, 3.25, 8.0]
    ps = primes_up_to(71).tolist()
    assert len(ps) == 20
    checked = 0
    for fp in fps:
        for p in ps:
            q = Fraction(1, p)
            mean = Fraction(fp) * q
            for u in range(2, 7):
                # X_p takes fp with probability 1/p and 0 otherwise
                expected = q * (Fraction(fp) - mean) ** u + (1 - q) * (-mean) ** u
                assert xp_central_moment(fp, p, u) == pytest.approx(float(expected), rel=1e-12)
                remainder = abs(xp_central_moment(fp, p, u) - fp**u / p)
                assert remainder <= 2**u * abs(fp) ** u / p**2 * (1 + 1e-9)
                checked += 1
    assert checked == 1000


def test_smallness_proxy_counts_against_all_primes(primes_million):
    spec = ProgressionSpec(k=4, l=1, n=10**6)
    proxy = smallness_proxy(builtin("omega"), spec, PAPER, primes_million, 0.1)
    # every selected prime exceeds, but only the ones = 1 (mod 4) are selected
    assert proxy.exceed_fraction == pytest.approx(39175 / 78498)


def test_bounded_check_needs_strongly_additive(primes_million):
    spec = ProgressionSpec(k=1, l=1, n=10**6)
    with pytest.raises(ParameterError, match="strongly additive"):
        bounded_moment_check(builtin("big_omega_minus_log_phi_ratio"), spec, primes_million)
