"""Minimal polynomials of psi_n = 2cos(2pi/n) for conductors n = 2^r p^s.

Closed forms in the V-basis:

* n = p^s:      Psi_n = sum_{i=0}^{k} V_{i d},              d = p^(s-1)
* n = 2^r p^s:  Psi_n = sum_{i=0}^{k} (-1)^(k-i) V_{i d},   d = 2^(r-1) p^(s-1)

with k = (p-1)/2 and degree m = phi(n)/2 = k*d. The sparse form drives the
ring reduction; the dense power form drives the attack scanner and the
numeric verification.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import chebyshev
from .errors import InvalidConductor
from .finitefield import is_prime


@dataclass(frozen=True)
class Conductor:
    """Validated (p, s, r) triple with n = 2^r p^s and derived quantities.

    Supported: r = 0 or r >= 2 (r = 1 is rejected; the grid constructions
    do not cover it) and m = phi(n)/2 >= 2 (n = 3 is a degree-1 ring).
    """

    p: int
    s: int
    r: int

    def __post_init__(self):
        if not (self.p >= 3 and self.p % 2 == 1 and is_prime(self.p)):
            raise InvalidConductor(f"p = {self.p} is not an odd prime")
        if self.s < 1:
            raise InvalidConductor(f"s = {self.s} must be >= 1")
        if self.r == 1:
            raise InvalidConductor("r = 1 conductors are rejected (no grid construction)")
        if self.r < 0:
            raise InvalidConductor(f"r = {self.r} must be 0 or >= 2")
        if self.m < 2:
            raise InvalidConductor(
                f"n = {self.n} gives a degenerate degree-{self.m} ring"
            )
        # Cross-check the closed form for m against phi(n) computed directly.
        phi = (self.p - 1) * self.p ** (self.s - 1)
        if self.r >= 2:
            phi *= 2 ** (self.r - 1)
        assert self.m == phi // 2

    @property
    def n(self) -> int:
        return 2**self.r * self.p**self.s

    @property
    def k(self) -> int:
        return (self.p - 1) // 2

    @property
    def stride(self) -> int:
        """Index stride d of the sparse V-form."""
        base = self.p ** (self.s - 1)
        return base if self.r == 0 else 2 ** (self.r - 1) * base

    @property
    def m(self) -> int:
        """Degree of Psi_n, = phi(n)/2."""
        return self.k * self.stride

    @property
    def n_grid(self) -> int:
        """Grid size N: largest index kept by phase 1 of the reduction."""
        if self.r == 0:
            return (self.p**self.s - 1) // 2
        return 2 ** (self.r - 2) * self.p**self.s - 1

    @property
    def m_elim(self) -> int:
        """m' = N + 1 - m, the number of eliminated columns."""
        return self.n_grid + 1 - self.m


def conductors_up_to(max_n: int) -> list:
    """Every valid Conductor with n <= max_n, sorted by n."""
    out = []
    for p in range(3, max_n + 1, 2):
        if not is_prime(p):
            continue
        s = 1
        while p**s <= max_n:
            try:
                out.append(Conductor(p, s, 0))
            except InvalidConductor:
                pass  # n = 3 only
            r = 2
            while 2**r * p**s <= max_n:
                out.append(Conductor(p, s, r))
                r += 1
            s += 1
    return sorted(out, key=lambda c: c.n)


@dataclass(frozen=True)
class MinimalPolynomial:
    conductor: Conductor
    sparse_v: tuple  # ((index, +-1), ...), k+1 entries, index ascending
    power: tuple = field(repr=False)  # exact ints, ascending, monic, len m+1

    def dense_v(self) -> list:
        """Dense V-basis coefficient list of length m+1."""
        out = [0] * (self.conductor.m + 1)
        for idx, sign in self.sparse_v:
            out[idx] = sign
        return out

    def power_l1(self) -> float:
        return float(sum(abs(c) for c in self.power))


def build_min_poly(c: Conductor) -> MinimalPolynomial:
    return _build_cached(c.p, c.s, c.r)


@functools.lru_cache(maxsize=None)
def _build_cached(p: int, s: int, r: int) -> MinimalPolynomial:
    c = Conductor(p, s, r)
    d, k = c.stride, c.k
    sparse = tuple(
        (i * d, 1 if r == 0 else (-1) ** (k - i)) for i in range(k + 1)
    )
    power = _power_form_exact(c, sparse)
    assert len(power) == c.m + 1 and power[-1] == 1, "power form must be monic of degree m"
    return MinimalPolynomial(c, sparse, tuple(power))


def _power_form_exact(c: Conductor, terms) -> list:
    """Dense power-basis coefficients of the sparse V-combination, exact ints.

    For stride 1 the sum telescopes through V_j = U_{j} - U_{j-2} (U is the
    second-kind row in the same variable) down to U_k + U_{k-1}, two rows
    instead of k+1. Other strides walk the sparse rows directly.
    """
    power = [0] * (c.m + 1)
    if c.stride == 1:
        _add_row_exact(power, c.k, 1, second_kind=True)
        _add_row_exact(power, c.k - 1, 1, second_kind=True)
        return power
    for j, sign in terms:
        _add_row_exact(power, j, sign, second_kind=False)
    return power


def _add_row_exact(power: list, j: int, sign: int, second_kind: bool) -> None:
    """Accumulate sign * V_j (or sign * U_j) in power coefficients.

    U_j = sum_t (-1)^t C(j-t, t) x^(j-2t); V_j carries the extra weight
    j/(j-t). Both weights walk down in t by an exact multiplicative step,
    one big-int multiply and divide per term.
    """
    if j == 0:
        power[0] += sign
        return
    a = 1
    off = 1 if second_kind else 0
    for t in range(j // 2 + 1):
        if t:
            a = a * (j - 2 * t + 2) * (j - 2 * t + 1) // (t * (j - t + off))
        power[j - 2 * t] += -a if (t % 2) ^ (sign < 0) else a


def _bitrev_order(count: int) -> list:
    """Indices 0..count-1 visited in bit-reversed order (padded, filtered)."""
    width = max(1, (count - 1).bit_length())
    order = []
    for i in range(1 << width):
        rev = int(format(i, f"0{width}b")[::-1], 2)
        if rev < count:
            order.append(rev)
    return order


def _cosine_rep_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product in the cosine representation (basis e_t = 2cos(t*theta), e_0 = 2).

    e_i e_j = e_{i+j} + e_{|i-j|} uniformly, so the product is a convolution
    plus a folded cross-correlation.
    """
    conv = np.convolve(a, b)
    r = np.correlate(a, b, "full")  # r[s + len(b) - 1] = sum_j a[j] b[j-s]
    mid = len(b) - 1
    out = conv
    out[0] += r[mid]
    out[1 : len(a)] += r[mid + 1 :]
    out[1 : len(b)] += r[mid - 1 :: -1]
    return out


def _root_product_v(roots: np.ndarray) -> np.ndarray:
    """Monic product prod (x - root) as V-basis coefficients, float64.

    Balanced binary tree over the roots sorted and bit-reversal interleaved:
    each subtree then sees roots spread over the whole spectrum, which keeps
    partial-product coefficients small in the cosine representation.
    """
    order = _bitrev_order(len(roots))
    ordered = np.sort(roots)[order]
    layer = [np.array([-t / 2.0, 1.0]) for t in ordered]  # c-rep of x - t
    while len(layer) > 1:
        nxt = [
            _cosine_rep_mul(layer[i], layer[i + 1]) if i + 1 < len(layer) else layer[i]
            for i in range(0, len(layer), 2)
        ]
        layer = nxt
    crep = layer[0]
    vcoeffs = crep.copy()
    vcoeffs[0] *= 2.0  # e_0 = 2*V_0
    return vcoeffs


def conjugate_exponents(n: int) -> list:
    """All sigma in [1, n/2] coprime to n (exponents of the conjugate roots)."""
    return [s for s in range(1, n // 2 + 1) if math.gcd(s, n) == 1]


def verify_min_poly_numeric(mp: MinimalPolynomial) -> bool:
    """Numeric oracle for the closed forms.

    (a) Psi vanishes at every conjugate 2cos(2pi sigma/n) to
        1e-6 * ||Psi||_1. Evaluation goes through V_j(2cos t) = 2cos(jt)
        on the sparse form; power-basis Horner at |x| near 2 amplifies
        roundoff by 2^m and is useless past m of about 60.
    (b) the monic float64 product over those roots, built in the cosine
        representation and rounded (residual < 0.25 required), equals the
        constructed coefficients exactly. The comparison runs on the
        V-basis vector, which the exact integer basis change maps
        injectively onto the power form; this is the binding check.
    """
    c = mp.conductor
    n = c.n
    sigmas = conjugate_exponents(n)
    if len(sigmas) != c.m:
        return False
    theta = 2.0 * np.pi * np.array(sigmas) / n
    roots = 2.0 * np.cos(theta)

    idx = np.array([i for i, _ in mp.sparse_v], dtype=np.float64)
    sgn = np.array([s for _, s in mp.sparse_v], dtype=np.float64)
    sgn[idx == 0] *= 0.5  # V_0 = 1, half of 2cos(0)
    vals = 2.0 * (sgn @ np.cos(np.outer(idx, theta)))
    if np.max(np.abs(vals)) > 1e-6 * mp.power_l1():
        return False

    vfloat = _root_product_v(roots)
    vint = np.rint(vfloat)
    if np.max(np.abs(vfloat - vint)) >= 0.25:
        return False
    return [int(x) for x in vint] == mp.dense_v()
