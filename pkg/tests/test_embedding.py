"""Cosine and embedding matrices: Gram closed forms, elimination, kappas."""

from math import cos, gcd, pi, sqrt

import numpy as np
import pytest

from realcyclo.chebyshev import eval_basis
from realcyclo.embedding import (
    PRIME_POWER,
    TWO_POWER,
    CosineMatrix,
    EliminationF,
    EmbeddingMatrix,
    cosine_condition,
    elimination_check,
    embedding_condition,
    frobenius_closed_form,
    gram_check,
)
from realcyclo.minpoly import Conductor, conductors_up_to

C5 = Conductor(5, 1, 0)
C12 = Conductor(3, 1, 2)

SWEEP = conductors_up_to(300)


# --- cosine matrix -----------------------------------------------------------


def test_cosine_matrix_shapes_and_case():
    cm = CosineMatrix.build(C5)
    assert cm.size == 3 and cm.entries.shape == (3, 3)
    assert cm.case == PRIME_POWER
    assert np.allclose(cm.entries[-1], 1.0)  # appended all-ones row
    cm12 = CosineMatrix.build(C12)
    assert cm12.case == TWO_POWER and cm12.entries.shape == (3, 3)


def test_cosine_rows_match_recurrence():
    # rows must equal V_j evaluated by the three-term recurrence
    for c in (C5, C12, Conductor(7, 2, 0), Conductor(5, 1, 3)):
        cm = CosineMatrix.build(c)
        sigmas = list(range(1, c.n_grid + 1)) if c.r == 0 else list(
            range(1, 2 * c.n_grid + 2, 2)
        )
        for i, sig in enumerate(sigmas):
            t = 2.0 * cos(2.0 * pi * sig / c.n)
            want = [eval_basis(j, t) for j in range(c.n_grid + 1)]
            assert np.allclose(cm.entries[i], want, atol=1e-9)


def test_gram_closed_form_examples():
    cm = CosineMatrix.build(C5)
    gram = cm.entries @ cm.entries.T
    assert np.allclose(gram, [[4, -1, 0], [-1, 4, 0], [0, 0, 3]], atol=1e-12)
    cm12 = CosineMatrix.build(C12)
    gram12 = cm12.entries.T @ cm12.entries
    assert np.allclose(gram12, np.diag([3.0, 6.0, 6.0]), atol=1e-12)


def test_gram_check_sweep():
    for c in SWEEP:
        assert gram_check(CosineMatrix.build(c)) <= 1e-10 * (c.n_grid + 1)


def test_row_and_column_sums():
    # prime powers: every cosine row sums to zero (all-ones row is orthogonal)
    cm = CosineMatrix.build(Conductor(3, 2, 0))
    assert np.max(np.abs(cm.entries[:-1].sum(axis=1))) <= 1e-12
    # two-power case: columns past the first sum to zero, norms are fixed
    cm12 = CosineMatrix.build(Conductor(3, 1, 3))
    assert np.max(np.abs(cm12.entries[:, 1:].sum(axis=0))) <= 1e-12
    n1 = np.sum(cm12.entries[:, 0] ** 2)
    assert abs(n1 - cm12.size) <= 1e-12
    assert np.allclose((cm12.entries[:, 1:] ** 2).sum(axis=0), 2.0 * cm12.size)


# --- condition numbers of C --------------------------------------------------


def test_cosine_condition_prime_power_example():
    kappa2, kappa_f = cosine_condition(CosineMatrix.build(C5))
    assert abs(kappa2 - sqrt(5.0 / 3.0)) <= 1e-9
    # ||C||_F^2 = 11 and tr(G^{-1}) = 13/15 for N = 2
    assert abs(kappa_f - sqrt(11.0 * 13.0 / 15.0)) <= 1e-9


def test_cosine_condition_two_power_is_sqrt2():
    for c in (C12, Conductor(3, 1, 4), Conductor(5, 2, 2), Conductor(19, 2, 2)):
        kappa2, kappa_f = cosine_condition(CosineMatrix.build(c))
        assert abs(kappa2 - sqrt(2.0)) <= 1e-9
        assert kappa_f < sqrt(2.0) * (c.n_grid + 1)


def test_cosine_condition_monotone_to_sqrt2():
    primes = [c for c in SWEEP if c.r == 0]
    primes.sort(key=lambda c: c.n_grid)
    kappas = [cosine_condition(CosineMatrix.build(c))[0] for c in primes]
    assert all(k < sqrt(2.0) for k in kappas)
    assert all(a < b for a, b in zip(kappas, kappas[1:]))
    assert sqrt(2.0) - kappas[-1] < sqrt(2.0) - kappas[0]


def test_kappa_f_matches_explicit_inverse():
    for c in (C5, Conductor(7, 1, 0), C12, Conductor(5, 1, 3), Conductor(7, 2, 0)):
        cm = CosineMatrix.build(c)
        _, kappa_f = cosine_condition(cm)
        inv = np.linalg.inv(cm.entries)
        direct = sqrt(float(np.sum(cm.entries**2) * np.sum(inv**2)))
        assert abs(kappa_f - direct) <= 1e-8 * direct


def test_frobenius_norm_of_c_closed_form():
    for c in SWEEP:
        cm = CosineMatrix.build(c)
        total = float(np.sum(cm.entries**2))
        N = c.n_grid
        want = 2.0 * N * N + N + 1.0 if c.r == 0 else (N + 1.0) * (2.0 * N + 1.0)
        assert abs(total - want) <= 1e-9 * want


# --- elimination -------------------------------------------------------------


def test_elimination_f_hand_examples():
    f5 = EliminationF.build(C5).entries
    assert f5.tolist() == [[1], [1]]  # col_2 = -(col_0 + col_1) on coprime rows
    f12 = EliminationF.build(C12).entries
    assert f12.tolist() == [[-1], [0]]  # col_2 = col_0


def test_frobenius_sq_closed_form():
    assert frobenius_closed_form(Conductor(7, 2, 0)) == 21
    assert frobenius_closed_form(Conductor(19, 2, 2)) == 9 * 37
    for c in SWEEP:
        assert EliminationF.build(c).frobenius_sq() == frobenius_closed_form(c)


def test_elimination_check_sweep():
    assert elimination_check(Conductor(5, 2, 0)) <= 1e-10
    for c in SWEEP:
        assert elimination_check(c) <= 1e-9


# --- embedding matrix --------------------------------------------------------


def test_embedding_matrix_sigmas_and_entries():
    emb = EmbeddingMatrix.build(Conductor(7, 2, 0))
    want = [s for s in range(1, 25) if gcd(s, 49) == 1]
    assert list(emb.sigmas) == want and len(want) == 21
    for i, sig in enumerate(emb.sigmas[:4]):
        t = 2.0 * cos(2.0 * pi * sig / 49)
        col = [eval_basis(j, t) for j in range(21)]
        assert np.allclose(emb.entries[i], col, atol=1e-9)


def test_embedding_condition_2x2_exact():
    # M = [[1, 2cos(2pi/5)], [1, 2cos(4pi/5)]]: ||M||_F^2 = 5, det = -sqrt(5),
    # so kappa_F^2 = 5 * 5 / 5 = 5 exactly
    kappa_sq, ratio = embedding_condition(C5)
    assert abs(kappa_sq - 5.0) <= 1e-9
    assert abs(ratio - 5.0 / 125.0) <= 1e-12


def test_embedding_condition_sweep():
    for c in SWEEP:
        kappa_sq, ratio = embedding_condition(c)
        assert 0.0 < ratio <= 10.0
        emb = EmbeddingMatrix.build(c).entries
        inv = np.linalg.inv(emb)
        direct = float(np.sum(emb**2) * np.sum(inv**2))
        assert abs(kappa_sq - direct) <= 1e-6 * direct


def test_embedding_condition_size_guard():
    with pytest.raises(AssertionError):
        embedding_condition(Conductor(23, 1, 9))  # m = 2816
