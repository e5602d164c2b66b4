import math

import numpy as np
import pytest

from arithmoments.errors import ParameterError
from arithmoments.functions.prime_classes import build_prime_classes, kolmogorov_example_function
from arithmoments.functions.types import Q0, Q1, Q2, PrimeClassAssignment
from arithmoments.models.domain import KolmogorovParams
from arithmoments.primes.sieve import primes_up_to

EXAMPLE = KolmogorovParams(A=-1, C=1, mu=0.3, nu=0.3)


@pytest.fixture(scope="module")
def primes_million():
    return primes_up_to(10**6)


def test_no_mass_means_all_q0():
    assignment = build_prime_classes(primes_up_to(10_000), KolmogorovParams(A=-1, C=1, mu=0, nu=0), 1)
    assert assignment.count(Q0) == len(assignment.primes)
    assert assignment.target_q1 == 0.0
    assert assignment.target_q2 == 0.0


def test_small_primes_stay_in_q0():
    assignment = build_prime_classes(primes_up_to(13), EXAMPLE, 1)
    assert assignment.labels.tolist() == [Q0] * 6


def test_realized_counts_track_targets(primes_million):
    assignment = build_prime_classes(primes_million, EXAMPLE, 1)
    assert assignment.relative_error(Q1) < 0.1
    assert assignment.relative_error(Q2) < 0.1
    assert assignment.count(Q0) + assignment.count(Q1) + assignment.count(Q2) == len(primes_million)
    assert set(np.unique(assignment.labels).tolist()) == {Q0, Q1, Q2}


def test_build_is_deterministic():
    primes = primes_up_to(100_000)
    first = build_prime_classes(primes, EXAMPLE, 1)
    second = build_prime_classes(primes, EXAMPLE, 1)
    assert np.array_equal(first.labels, second.labels)


def test_example_function_without_mass():
    params = KolmogorovParams(A=0, C=0, mu=0, nu=0)
    primes = primes_up_to(1000)
    f = kolmogorov_example_function(params, build_prime_classes(primes, params, 1))
    assert f.strongly_additive
    assert f.at(13) == 0.0
    assert f.at(17) == pytest.approx(math.sqrt(2 * math.log(math.log(17))))
    assert f.at(997) == pytest.approx(math.sqrt(2 * math.log(math.log(997))))


def test_example_function_by_class():
    primes = primes_up_to(100_000)
    assignment = build_prime_classes(primes, EXAMPLE, 1)
    f = kolmogorov_example_function(EXAMPLE, assignment)
    radicand = 2 * (1 - 0.3 - 0.3)

    p1 = int(assignment.primes[assignment.labels == Q1][-1])
    p2 = int(assignment.primes[assignment.labels == Q2][-1])
    p0 = int(assignment.primes[(assignment.labels == Q0) & (assignment.primes >= 16)][-1])
    assert f.at(p1) == pytest.approx(-math.log(math.log(p1)))
    assert f.at(p2) == pytest.approx(math.log(math.log(p2)))
    assert f.at(p0) == pytest.approx(math.sqrt(radicand * math.log(math.log(p0))))


def test_example_function_near_ln_ln_two():
    p = 1619  # ln ln p is close to 2
    assignment = PrimeClassAssignment(
        primes=np.array([p]),
        labels=np.array([Q1], dtype=np.int8),
        params=EXAMPLE,
        k=1,
        bound=p,
        target_q1=1.0,
        target_q2=0.0,
        target_q0=0.0,
    )
    assert kolmogorov_example_function(EXAMPLE, assignment).at(p) == pytest.approx(-2.0, abs=0.01)


def test_example_function_rejects_q1_without_a():
    params = KolmogorovParams(A=0, C=1, mu=0, nu=0.5)
    assignment = PrimeClassAssignment(
        primes=np.array([17]),
        labels=np.array([Q1], dtype=np.int8),
        params=params,
        k=1,
        bound=17,
        target_q1=0.0,
        target_q2=0.0,
        target_q0=0.0,
    )
    with pytest.raises(ParameterError, match="A = 0"):
        kolmogorov_example_function(params, assignment)


def test_primes_outside_assignment_are_q0():
    assignment = build_prime_classes(primes_up_to(100), EXAMPLE, 1)
    assert assignment.label_of(np.array([101, 2])).tolist() == [Q0, Q0]
