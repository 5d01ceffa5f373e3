"""Power-basis V polynomials: recurrence, products, evaluation."""

import math
import random

import pytest

from realcyclo.chebyshev import (
    eval_at,
    eval_basis,
    poly_divmod,
    poly_mul,
    trim,
    v_compose_check,
    v_poly,
    v_product_indices,
    v_rows,
)

# first rows expanded by hand from V_{j+1} = x V_j - V_{j-1} seeded at
# (V_1, V_2) = (x, x^2 - 2); index 0 stores the basis element V_0 = 1
V_ROWS_HAND = [
    [1],
    [0, 1],
    [-2, 0, 1],
    [0, -3, 0, 1],
    [2, 0, -4, 0, 1],
    [0, 5, 0, -5, 0, 1],
]


def test_v_poly_small_rows():
    for j, expect in enumerate(V_ROWS_HAND):
        assert v_poly(j) == expect


def test_v_rows_matches_v_poly():
    gen = v_rows()
    for j in range(40):
        assert next(gen) == v_poly(j)


def test_v_poly_monic_with_exact_degree():
    for j in range(1, 80):
        row = v_poly(j)
        assert len(row) == j + 1
        assert row[-1] == 1


def test_recurrence_consistency_up_to_512():
    # the two-sided cos recurrence needs the weight-2 constant at index 0
    assert v_poly(2) == [-2, 0, 1]  # x * V_1 - [2]
    gen = v_rows()
    next(gen)
    prev2, prev1 = next(gen), next(gen)
    for j in range(3, 513):
        cur = next(gen)
        lifted = [0] + prev1  # x * V_{j-1}
        expect = [a - b for a, b in zip(lifted, prev2 + [0] * (j - len(prev2) + 1))]
        assert cur == expect, f"recurrence fails at j = {j}"
        prev2, prev1 = prev1, cur


def test_product_indices_examples():
    assert v_product_indices(1, 1) == [2, 0, 1]  # V_2 + 2 V_0
    assert v_product_indices(3, 1) == [0, 0, 1, 0, 1]  # V_4 + V_2
    assert v_product_indices(2, 5) == [0, 0, 0, 1, 0, 0, 0, 1]  # V_7 + V_3


def test_product_law_against_schoolbook():
    rng = random.Random(11)
    for _ in range(25):
        n, m = rng.randint(1, 256), rng.randint(1, 256)
        expanded = [0] * (n + m + 1)
        for idx, coef in enumerate(v_product_indices(n, m)):
            if not coef:
                continue
            row = v_poly(idx) if idx else [1]  # coefficient convention: V_0 = 1
            for i, c in enumerate(row):
                expanded[i] += coef * c
        assert trim(expanded) == poly_mul(v_poly(n), v_poly(m))


def test_compose_check_examples():
    assert v_compose_check(2, 3, [0.5])
    assert v_compose_check(1, 5, [-1.7, 0.0, 0.3, 1.9])
    # V_m(2) = 2 for every m, so both sides equal 2 at the grid edge
    assert eval_basis(21, 2.0) == pytest.approx(2.0, abs=1e-9)
    assert v_compose_check(6, 7, [2.0])


def test_eval_at_basis_vectors():
    assert eval_at([1], 0.37) == pytest.approx(1.0, abs=1e-12)
    t7 = 2 * math.cos(2 * math.pi / 7)
    assert eval_at([0, 0, 0, 1], t7) == pytest.approx(2 * math.cos(6 * math.pi / 7), abs=1e-9)
    t5 = 2 * math.cos(2 * math.pi / 5)
    assert eval_at([1, 1, 1], t5) == pytest.approx(0.0, abs=1e-9)


def test_eval_at_defining_identity():
    rng = random.Random(23)
    degrees = list(range(1, 33)) + [63, 64, 127, 128, 255, 256, 511, 512, 1023, 1024]
    thetas = [rng.uniform(0, math.pi) for _ in range(64)]
    for j in degrees:
        e_j = [0] * j + [1]
        for theta in thetas[:8] if j > 64 else thetas:
            got = eval_at(e_j, 2 * math.cos(theta))
            want = 2 * math.cos(j * theta)
            assert abs(got - want) <= 1e-9 * max(1.0, abs(want)) + 1e-9


def test_eval_at_matches_term_sum():
    rng = random.Random(5)
    coeffs = [rng.randint(-9, 9) for _ in range(30)]
    t = 1.234
    direct = coeffs[0] + sum(c * eval_basis(j, t) for j, c in enumerate(coeffs) if j >= 1)
    assert eval_at(coeffs, t) == pytest.approx(direct, rel=1e-12)


def test_poly_divmod_roundtrip():
    rng = random.Random(7)
    for _ in range(20):
        den = [rng.randint(-5, 5) for _ in range(rng.randint(1, 6))] + [1]
        quo = [rng.randint(-5, 5) for _ in range(rng.randint(1, 8))]
        rem = [rng.randint(-5, 5) for _ in range(len(den) - 1)]
        num = [a + b for a, b in zip(poly_mul(den, quo), rem + [0] * 99)]
        q, r = poly_divmod(num, den)
        assert trim(q) == trim(quo)
        assert trim(r) == trim(rem)


def test_poly_divmod_rejects_non_monic():
    with pytest.raises(AssertionError):
        poly_divmod([1, 2, 3], [1, 2])
