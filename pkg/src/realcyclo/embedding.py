"""Cosine, embedding, and elimination matrices, with their numeric checks.

The cosine matrix C evaluates the V-basis on the full cosine grid of the
conductor; its Gram matrix has a closed form (near-scalar for prime powers,
diagonal otherwise), which pins kappa_2(C) to an explicit eigenvalue ratio.
Deleting the non-coprime grid rows and the columns above m - the latter by
the same dependency relations the ring reduction uses, encoded as a sparse
sign matrix F - turns C into the canonical-embedding matrix M. The checks
here verify the Gram closed forms, the block identity P*C*R = [[M,0],[A,D]],
and the condition-number bounds kappa_2 <= sqrt(2) and kappa_F(M)^2 = O(n^3).
"""

from dataclasses import dataclass, field
from math import gcd, sqrt

import numpy as np

from .errors import IllConditioned, SingularMatrix
from .minpoly import Conductor

PRIME_POWER = "prime-power"
TWO_POWER = "two-power-times-prime-power"


def _grid_sigmas(c: Conductor) -> np.ndarray:
    """Row frequencies of C: row sigma has angle 2*pi*sigma/n."""
    if c.r == 0:
        return np.arange(1, c.n_grid + 1, dtype=np.int64)
    return np.arange(1, 2 * c.n_grid + 2, 2, dtype=np.int64)


def _cosine_rows(sigmas: np.ndarray, n: int, width: int) -> np.ndarray:
    """Rows [V_j(2cos(2pi*sigma/n))]_j = [1, 2cos(2pi*sigma*j/n), ...]."""
    cols = np.arange(width, dtype=np.float64)
    angles = (2.0 * np.pi / n) * np.outer(sigmas.astype(np.float64), cols)
    rows = 2.0 * np.cos(angles)
    rows[:, 0] = 1.0
    return rows


@dataclass(frozen=True, eq=False)
class CosineMatrix:
    """Square (N+1)x(N+1) evaluation of the V-basis on the cosine grid."""

    conductor: Conductor
    entries: np.ndarray = field(repr=False)
    case: str

    @classmethod
    def build(cls, c: Conductor) -> "CosineMatrix":
        width = c.n_grid + 1
        rows = _cosine_rows(_grid_sigmas(c), c.n, width)
        if c.r == 0:
            return cls(c, np.vstack([rows, np.ones((1, width))]), PRIME_POWER)
        return cls(c, rows, TWO_POWER)

    @property
    def size(self) -> int:
        return self.conductor.n_grid + 1


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """m x m canonical embedding: V-basis at the coprime conjugates of psi."""

    conductor: Conductor
    entries: np.ndarray = field(repr=False)
    sigmas: tuple

    @classmethod
    def build(cls, c: Conductor) -> "EmbeddingMatrix":
        sig = np.array(
            [s for s in range(1, c.n // 2 + 1) if gcd(s, c.n) == 1],
            dtype=np.int64,
        )
        assert len(sig) == c.m, "coprime representatives must count m"
        return cls(c, _cosine_rows(sig, c.n, c.m), tuple(int(s) for s in sig))


@dataclass(frozen=True, eq=False)
class EliminationF:
    """Sparse sign matrix expressing columns m..N of C over columns < m.

    Column l records the dependency col_{m+l} = -sum_i F[i,l] * col_i.
    Hits sit at i = t*d + l for t in [0, k-1] and i = t*d - l for t in
    [1, k], with d the conductor stride; the sign is +1 for prime powers
    and (-1)^(k-t) otherwise. The two hit families never collide because
    0 < 2l < d throughout.
    """

    conductor: Conductor
    entries: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, c: Conductor) -> "EliminationF":
        d, k = c.stride, c.k
        width = c.n_grid + 1 - c.m
        f = np.zeros((c.m, width), dtype=np.int64)
        ls = np.arange(1, width)
        for t in range(k + 1):
            sign = 1 if c.r == 0 else (-1) ** (k - t)
            if t < k:
                f[t * d, 0] = sign
                f[t * d + ls, ls] = sign
            if t > 0:
                f[t * d - ls, ls] = sign
        return cls(c, f)

    def frobenius_sq(self) -> int:
        return int(np.count_nonzero(self.entries))


def frobenius_closed_form(c: Conductor) -> int:
    """||F||_F^2: m for prime powers, k*(d-1) otherwise."""
    if c.r == 0:
        return c.m
    return c.k * (c.stride - 1)


def gram_check(cm: CosineMatrix) -> float:
    """Max deviation of the Gram matrix from its closed form.

    Prime powers: C*C^T = [(2N+1)I - J, 0; 0, N+1] with J all-ones.
    Otherwise:    C^T*C = diag(N+1, 2(N+1), ..., 2(N+1)).
    """
    c = cm.conductor
    N = c.n_grid
    if cm.case == PRIME_POWER:
        gram = cm.entries @ cm.entries.T
        target = np.zeros((N + 1, N + 1))
        target[:N, :N] = -1.0
        target[np.arange(N), np.arange(N)] = 2.0 * N
        target[N, N] = N + 1.0
    else:
        gram = cm.entries.T @ cm.entries
        target = np.diag(np.full(N + 1, 2.0 * (N + 1)))
        target[0, 0] = N + 1.0
    return float(np.max(np.abs(gram - target)))


def cosine_condition(cm: CosineMatrix) -> tuple:
    """(kappa_2, kappa_F) of C, with kappa_2 measured from the Gram.

    kappa_2 is the numerically diagonalized Gram's eigenvalue ratio and
    must agree with the closed form sqrt((2N+1)/(N+1)) resp. sqrt(2) to
    1e-6 relative (and to 1e-9 absolute against sqrt(2) in the diagonal
    case). kappa_F uses ||C^{-1}||_F^2 = tr(G^{-1}) with the closed-form
    inverse, so nothing is inverted numerically.
    """
    c = cm.conductor
    N = c.n_grid
    if cm.case == PRIME_POWER:
        gram = cm.entries @ cm.entries.T
        closed = sqrt((2.0 * N + 1.0) / (N + 1.0))
        # G^{-1} = [(I + J/(N+1))/(2N+1), 0; 0, 1/(N+1)]
        inv_trace = (N * (N + 2.0) + 2.0 * N + 1.0) / ((2.0 * N + 1.0) * (N + 1.0))
    else:
        gram = cm.entries.T @ cm.entries
        closed = sqrt(2.0)
        inv_trace = (N + 2.0) / (2.0 * (N + 1.0))
    eigs = np.linalg.eigvalsh(gram)
    if eigs[0] <= 0.0:
        raise SingularMatrix(
            f"cosine Gram for n = {c.n} has eigenvalue {eigs[0]:.3e}"
        )
    kappa2 = sqrt(eigs[-1] / eigs[0])
    assert abs(kappa2 - closed) <= 1e-6 * closed, (
        f"kappa_2 numeric {kappa2} vs closed form {closed} at n = {c.n}"
    )
    if cm.case == PRIME_POWER:
        assert kappa2 < sqrt(2.0)
    else:
        assert abs(kappa2 - sqrt(2.0)) <= 1e-9
    kappa_f = sqrt(float(np.sum(cm.entries**2)) * inv_trace)
    assert kappa_f < sqrt(2.0) * (N + 1), (
        f"kappa_F(C) = {kappa_f} breaches sqrt(2)(N+1) at n = {c.n}"
    )
    return kappa2, kappa_f


def _row_permutation(c: Conductor) -> np.ndarray:
    """P reordering grid rows: coprime sigmas first, original order kept."""
    sigmas = _grid_sigmas(c)
    coprime = sigmas % c.p != 0
    if c.r == 0:
        coprime = np.append(coprime, False)  # trailing all-ones row
    order = np.concatenate([np.flatnonzero(coprime), np.flatnonzero(~coprime)])
    perm = np.zeros((len(order), len(order)))
    perm[np.arange(len(order)), order] = 1.0
    return perm


def _column_eliminator(c: Conductor) -> np.ndarray:
    """R = [[I, F], [0, I]]: adds F-weighted low columns into columns >= m."""
    size = c.n_grid + 1
    r = np.eye(size)
    r[: c.m, c.m :] = EliminationF.build(c).entries
    return r


def elimination_check(c: Conductor) -> float:
    """Deviation of P*C*R from [[M, 0], [A, D]] on its top block row."""
    cm = CosineMatrix.build(c)
    product = _row_permutation(c) @ cm.entries @ _column_eliminator(c)
    top = product[: c.m]
    emb = EmbeddingMatrix.build(c).entries
    dev_m = float(np.max(np.abs(top[:, : c.m] - emb)))
    dev_b = float(np.max(np.abs(top[:, c.m :])))
    return max(dev_m, dev_b)


def embedding_condition(c: Conductor) -> tuple:
    """(kappa_F(M)^2, kappa_F(M)^2 / n^3), with the block identity verified.

    M is inverted in double precision with one Newton refinement step; a
    refined residual above 1e-6 (relative to ||I||_F) raises IllConditioned.
    """
    assert c.m <= 2048, "dense numerics cap m at 2048"
    emb = EmbeddingMatrix.build(c).entries
    try:
        inv = np.linalg.inv(emb)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(f"embedding matrix for n = {c.n}") from exc
    inv = inv @ (2.0 * np.eye(c.m) - emb @ inv)
    residual = np.linalg.norm(emb @ inv - np.eye(c.m)) / sqrt(c.m)
    if residual > 1e-6:
        raise IllConditioned(
            f"inverse residual {residual:.3e} for n = {c.n} after refinement"
        )
    kappa_sq = float(np.sum(emb**2) * np.sum(inv**2))
    ratio = kappa_sq / float(c.n) ** 3
    assert ratio <= 10.0, f"kappa_F(M)^2 / n^3 = {ratio} at n = {c.n}"
    assert elimination_check(c) <= 1e-8, f"block identity fails at n = {c.n}"
    return kappa_sq, ratio
