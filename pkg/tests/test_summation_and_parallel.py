import numpy as np

from arithmoments.utils.parallel import ordered_map
from arithmoments.utils.summation import CompensatedSum, descending_sum, exact_sum


def test_compensated_sum_is_grouping_independent():
    values = [1e16, 1.0, -1e16, 1.0] * 50
    whole = CompensatedSum()
    for value in values:
        whole.add(value)

    left, right = CompensatedSum(), CompensatedSum()
    left.add_array(np.array(values[:77]))
    right.add_array(np.array(values[77:]))
    left.merge(right)

    assert whole.value == left.value == exact_sum(values) == 100.0


def test_descending_sum_ignores_input_order():
    primes = np.array([5, 2, 3, 7])
    terms = 1.0 / primes
    assert descending_sum(primes, terms) == descending_sum(primes[::-1], terms[::-1])
    assert descending_sum(np.array([], dtype=np.int64), np.array([])) == 0.0


def test_ordered_map_keeps_input_order():
    items = list(range(50))
    assert ordered_map(lambda x: x * x, items, workers=4) == [x * x for x in items]
    assert ordered_map(lambda x: x, [], workers=4) == []
