"""Modified Chebyshev polynomials V_j(x) = 2*T_j(x/2).

V_0 = 1, V_1 = x, V_2 = x^2 - 2 and V_j = x*V_{j-1} - V_{j-2} for j >= 3.
On [-2, 2] they satisfy V_j(2 cos t) = 2 cos(j t), and they are monic with
integer coefficients, so {V_0, ..., V_{m-1}} is an integral basis wherever
we work modulo a degree-m member of the family.

Polynomials are plain coefficient lists, ascending:

* PowerPoly: index i holds the coefficient of x^i.
* VPoly: index j holds the coefficient of V_j(x).

Coefficient arithmetic is exact (Python ints); floats appear only in the
evaluation helpers.
"""

from __future__ import annotations

from typing import Iterator, Sequence

VPoly = list
PowerPoly = list


def v_rows() -> Iterator[PowerPoly]:
    """Yield the power-basis rows V_0, V_1, V_2, ... indefinitely.

    The recurrence seeds at (V_1, V_2): one blind step from (V_0, V_1)
    would give x^2 - 1 instead of V_2 = x^2 - 2. Yielded lists must not
    be mutated by the caller.
    """
    yield [1]
    prev, cur = [0, 1], [-2, 0, 1]
    yield prev
    yield cur
    while True:
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
        yield cur


def v_poly(j: int) -> PowerPoly:
    """Power-basis expansion of V_j, exact. Monic of degree j for j >= 1."""
    assert j >= 0
    gen = v_rows()
    for _ in range(j):
        next(gen)
    return list(next(gen))


def v_product_indices(n: int, m: int) -> VPoly:
    """V-basis expansion of V_n * V_m.

    V_n V_m = V_{n+m} + V_{|n-m|}; for n = m the constant part is
    V_0 * 2 because V_n^2 = V_{2n} + 2.
    """
    assert n >= 1 and m >= 1
    out = [0] * (n + m + 1)
    out[n + m] += 1
    out[abs(n - m)] += 2 if n == m else 1
    return out


def eval_at(poly: Sequence, t: float) -> float:
    """Evaluate sum_j a_j V_j(t) by a Clenshaw recurrence.

    Backward pass adapted to the V recurrence: b_k = a_k + t*b_{k+1} -
    b_{k+2} for k = d..1, then the V_2 seed correction gives
    result = a_0 + t*b_1 - 2*b_2.
    """
    d = len(poly) - 1
    b1 = b2 = 0.0
    for k in range(d, 0, -1):
        b1, b2 = poly[k] + t * b1 - b2, b1
    return poly[0] + t * b1 - 2 * b2


def eval_basis(j: int, t: float) -> float:
    """V_j(t) via the scalar three-term recurrence (no coefficient list)."""
    if j == 0:
        return 1.0
    prev, cur = 1.0, float(t)
    if j >= 2:
        prev, cur = cur, t * t - 2.0
        for _ in range(j - 2):
            prev, cur = cur, t * cur - prev
    return cur


def v_compose_check(n: int, m: int, samples, tol: float = 1e-9) -> bool:
    """Check V_n(V_m(t)) = V_{nm}(t) at the sample points (float self-test)."""
    assert n >= 1 and m >= 1
    for t in samples:
        if abs(eval_basis(n, eval_basis(m, t)) - eval_basis(n * m, t)) > tol:
            return False
    return True


def poly_mul(a: Sequence, b: Sequence) -> list:
    """Schoolbook product of power-basis polynomials, exact."""
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def poly_divmod(num: Sequence, den: Sequence) -> tuple[list, list]:
    """Long division by a monic divisor, exact over the integers."""
    assert den[-1] == 1, "divisor must be monic"
    rem = list(num)
    dn = len(den) - 1
    if len(rem) - 1 < dn:
        return [0], rem
    quo = [0] * (len(rem) - dn)
    for i in range(len(rem) - 1, dn - 1, -1):
        c = rem[i]
        if c:
            quo[i - dn] = c
            for j, dj in enumerate(den):
                rem[i - dn + j] -= c * dj
    rem = rem[:dn] or [0]
    return quo, rem


def trim(poly: Sequence) -> list:
    """Drop trailing zeros, keeping at least the constant term."""
    end = len(poly)
    while end > 1 and poly[end - 1] == 0:
        end -= 1
    return list(poly[:end])
