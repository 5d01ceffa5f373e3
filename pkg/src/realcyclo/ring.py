"""Arithmetic in Z[x]/(Psi_n) and (Z/qZ)[x]/(Psi_n).

Elements live in the V-basis as length-m coefficient vectors. The fast
product pads to the power-of-two grid size N >= 2m, multiplies pointwise
on the cosine grid via DCT-III, comes back with DCT-II using
c = (4/N) dct2(dct3(a) * dct3(b)), and reduces the degree <= 2m-2 result
in O(m) additions through the sparse form of Psi_n. The integer domain
gets exactness from an internally selected two-prime CRT modulus; a
rounded float path exists for benchmarking only.

The schoolbook oracle goes the long way on purpose: V -> power basis,
O(m^2) convolution, long division by the power form of Psi_n, power -> V.
Its prime-field instantiation is deliberately plain Python so benchmarks
measure an honest quadratic baseline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import chebyshev
from .dct import DctPlan, OpCount, dct2, dct3
from .errors import (
    DegreeTooLarge,
    DomainMismatch,
    IllConditioned,
    ModulusUnsuitable,
    SizeMismatch,
)
from .finitefield import CrtModulus, PrimeField, is_prime, prime_congruent_below
from .minpoly import Conductor, build_min_poly

INTEGER = "int"  # sentinel for the exact-integer domain


def _next_pow2(x: int) -> int:
    return 1 << max(x - 1, 1).bit_length()


def _domain_modulus(domain):
    """None for exact integers, else the (possibly composite) modulus."""
    if domain == INTEGER:
        return None
    if isinstance(domain, PrimeField):
        return domain.q
    if isinstance(domain, CrtModulus):
        return domain.composite
    raise DomainMismatch(f"unknown coefficient domain {domain!r}")


@dataclass(frozen=True)
class RingElement:
    """Residue class in the V-basis: coeffs[t] multiplies V_t, t < m."""

    conductor: Conductor
    coeffs: tuple
    domain: object = INTEGER

    def __post_init__(self):
        if len(self.coeffs) != self.conductor.m:
            raise SizeMismatch(
                f"need exactly m = {self.conductor.m} coefficients, got {len(self.coeffs)}"
            )
        M = _domain_modulus(self.domain)
        if M is None:
            canon = tuple(int(x) for x in self.coeffs)
        else:
            canon = tuple(int(x) % M for x in self.coeffs)
        object.__setattr__(self, "coeffs", canon)

    @classmethod
    def from_power(cls, conductor: Conductor, power, domain=INTEGER) -> "RingElement":
        """Element from power-basis coefficients of degree < m."""
        pw = list(power)
        if len(pw) > conductor.m:
            raise SizeMismatch(
                f"degree {len(pw) - 1} power form does not fit below m = {conductor.m}"
            )
        pw += [0] * (conductor.m - len(pw))
        M = _domain_modulus(domain)
        v = to_v_basis(pw) if M is None else _v_from_power_list(pw, M)
        return cls(conductor, tuple(v), domain)

    def to_power(self) -> list:
        """Power-basis coefficients, length m."""
        M = _domain_modulus(self.domain)
        v = list(self.coeffs)
        return to_power_basis(v) if M is None else _power_from_v_list(v, M)

    def max_abs(self) -> int:
        return max((abs(x) for x in self.coeffs), default=0)


@dataclass(frozen=True, eq=False)
class UnreducedProduct:
    """Raw V-basis product, degree <= 2m-2 (one extra index for n = 12,
    the single conductor where the grid fold reaches degree N+1 > 2m-2)."""

    conductor: Conductor
    coeffs: object  # sequence or ndarray, length <= degree cap + 1
    domain: object = INTEGER

    def __post_init__(self):
        cap = _degree_cap(self.conductor)
        if len(self.coeffs) - 1 > cap:
            raise DegreeTooLarge(
                f"degree {len(self.coeffs) - 1} exceeds cap {cap} for n = {self.conductor.n}"
            )


def _degree_cap(c: Conductor) -> int:
    hi = 2 * c.m - 2
    if c.r >= 2:
        hi = max(hi, c.n_grid + 1)
    return hi


# --- reduction ---------------------------------------------------------------


def reduce(u: UnreducedProduct, ops: OpCount = None) -> RingElement:
    """Reduce modulo Psi_n to degree < m in at most 2m scalar additions.

    Phase 1 folds indices above the grid: V_j = V_{n-j} for r = 0;
    V_{N+1} = 0 and V_j = -V_{n/2 - j} for r >= 2. Phase 2 eliminates
    indices m..N by rewriting V_{m+l} as a signed sum of V_{t d +- l}.
    Both phases are in-place slice additions; sources are never targets,
    so order within a phase is free.
    """
    c = u.conductor
    M = _domain_modulus(u.domain)
    if ops is None:
        ops = OpCount()
    arr = np.array([int(x) for x in u.coeffs], dtype=object)
    out = _reduce_vec(arr, c, M, ops)
    return RingElement(c, tuple(out[: c.m]), u.domain)


def _reduce_vec(cv: np.ndarray, c: Conductor, M, ops: OpCount) -> np.ndarray:
    m, N, d, k = c.m, c.n_grid, c.stride, c.k
    if len(cv) - 1 > _degree_cap(c):
        raise DegreeTooLarge(f"degree {len(cv) - 1} exceeds cap for n = {c.n}")
    assert 2 * (N - m) < d, "elimination targets t*d +- l must stay distinct"
    if len(cv) <= m:
        out = np.zeros(m, dtype=cv.dtype)
        out[: len(cv)] = cv
        return out if M is None else out % M
    if len(cv) < N + 2:
        pad = np.zeros(N + 2, dtype=cv.dtype)
        pad[: len(cv)] = cv
        cv = pad

    deg = len(cv) - 1
    if c.r == 0:
        n = c.n
        if deg > N:
            cv[n - deg : n - N] += cv[N + 1 : deg + 1][::-1]
            ops.add += deg - N
    else:
        H = c.n // 2
        cv[N + 1] = 0
        if deg > N + 1:
            cv[H - deg : H - N - 1] -= cv[N + 2 : deg + 1][::-1]
            ops.add += deg - N - 1

    L = N - m
    src = cv[m : N + 1]
    src_rev = cv[m + 1 : N + 1][::-1]
    if c.r == 0:
        for t in range(k):
            cv[t * d : t * d + L + 1] -= src
        for t in range(1, k + 1):
            cv[t * d - L : t * d] -= src_rev
    else:
        for t in range(k):
            if (k - 1 - t) % 2:
                cv[t * d : t * d + L + 1] -= src
            else:
                cv[t * d : t * d + L + 1] += src
        for t in range(1, k + 1):
            if (k - 1 - t) % 2:
                cv[t * d - L : t * d] -= src_rev
            else:
                cv[t * d - L : t * d] += src_rev
    ops.add += k * (2 * L + 1)

    out = cv[:m]
    return out if M is None else out % M


# --- basis conversion --------------------------------------------------------


def to_power_basis(v) -> list:
    """Exact V -> power basis: accumulate coefficient-weighted V rows."""
    v = [int(x) for x in v]  # numpy scalars would overflow against bigint rows
    out = [0] * len(v)
    for j, row in zip(range(len(v)), chebyshev.v_rows()):
        a = v[j]
        if a:
            for i, r in enumerate(row):
                if r:
                    out[i] += a * r
    return out


def to_v_basis(pw) -> list:
    """Exact power -> V basis via Horner over multiply-by-x in the V-basis.

    x V_0 = V_1, x V_1 = V_2 + 2 V_0, x V_t = V_{t+1} + V_{t-1}: the
    triangular system inverts without materializing any V row.
    """
    acc = []
    for cf in reversed([int(x) for x in pw]):
        acc = _xmul_v(acc)
        if not acc:
            acc = [0]
        acc[0] = acc[0] + cf
    acc += [0] * (len(pw) - len(acc))
    return acc


def _xmul_v(a: list) -> list:
    if not a:
        return []
    out = [0] * (len(a) + 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        out[i + 1] += ai
        if i >= 2:
            out[i - 1] += ai
        elif i == 1:
            out[0] += 2 * ai
    return out


def _power_from_v_list(v: list, M: int) -> list:
    out = [0] * len(v)
    prev, cur = [1], [0, 1]
    for j in range(len(v)):
        if j >= 2:
            nxt = [0] + cur
            if j == 2:
                nxt[0] = (nxt[0] - 2) % M
            else:
                for i in range(len(prev)):
                    nxt[i] = (nxt[i] - prev[i]) % M
            prev, cur = cur, nxt
        row = [1] if j == 0 else cur
        a = v[j]
        if a:
            for i, r in enumerate(row):
                if r:
                    out[i] = (out[i] + a * r) % M
    return out


def _v_from_power_list(pw: list, M: int) -> list:
    acc = []
    for cf in reversed(pw):
        if acc:
            out = [0] * (len(acc) + 1)
            for i, ai in enumerate(acc):
                if not ai:
                    continue
                out[i + 1] = (out[i + 1] + ai) % M
                if i >= 2:
                    out[i - 1] = (out[i - 1] + ai) % M
                elif i == 1:
                    out[0] = (out[0] + 2 * ai) % M
            acc = out
        else:
            acc = [0]
        acc[0] = (acc[0] + cf) % M
    acc += [0] * (len(pw) - len(acc))
    return acc


def _power_from_v_lanes(v: np.ndarray, mods: np.ndarray) -> np.ndarray:
    """Lane-parallel V -> power for (lanes, width) int64 residues < mods."""
    width = v.shape[1]
    out = np.zeros_like(v)
    out[:, 0] = v[:, 0]
    if width >= 2:
        out[:, 1] = v[:, 1]
    if width <= 2:
        return out
    # the accumulator can skip per-step reduction while width*q^2 fits int64
    defer = width * int(mods.max()) ** 2 < (1 << 62)
    prev = np.zeros_like(v)
    cur = np.zeros_like(v)
    nxt = np.zeros_like(v)
    prev[:, 0] = 1
    cur[:, 1] = 1
    for j in range(2, width):
        # row_j = x*row_{j-1} - row_{j-2}; buffers hold stale data past the
        # row's support, so every write below stays inside [:, :j+1]
        w = nxt[:, : j + 1]
        w[:, 0] = 0
        w[:, 1:] = cur[:, :j]
        if j == 2:
            w[:, 0] = mods[:, 0] - 2
        else:
            w[:, : j - 1] -= prev[:, : j - 1]
            w[:, : j - 1] %= mods
        prev, cur, nxt = cur, nxt, prev
        out[:, : j + 1] += v[:, j : j + 1] * cur[:, : j + 1]
        if not defer:
            out[:, : j + 1] %= mods
    return out % mods if defer else out


def _v_from_power_lanes(pw: np.ndarray, mods: np.ndarray) -> np.ndarray:
    """Lane-parallel power -> V (Horner over x*V_t) for residues < mods."""
    width = pw.shape[1]
    acc = np.zeros_like(pw)
    nxt = np.zeros_like(pw)
    acc[:, 0] = pw[:, width - 1]
    t = 1  # support length of acc
    for j in range(width - 2, -1, -1):
        w = nxt[:, : t + 1]
        w[:, 1:] = acc[:, :t]
        w[:, 0] = pw[:, j]
        if t >= 2:
            w[:, 1 : t - 1] += acc[:, 2:t]
            w[:, 0] += 2 * acc[:, 1]
        w %= mods
        acc, nxt = nxt, acc
        t += 1
    return acc


# --- fast multiplication -----------------------------------------------------

_PLAN_CACHE = {}
_CRT_CACHE = {}
_PSI_MOD_CACHE = {}
_PSI_LANES_CACHE = {}
_GARNER_CACHE = {}
_RNS_PRIMES = []


def _plan(N: int, key, domain) -> DctPlan:
    tag = (N, key)
    plan = _PLAN_CACHE.get(tag)
    if plan is None:
        plan = DctPlan(N, domain)
        _PLAN_CACHE[tag] = plan
    return plan


def _crt_for(N: int) -> tuple:
    hit = _CRT_CACHE.get(N)
    if hit is None:
        q1, q2 = prime_congruent_below(4 * N, 1 << 31, count=2)
        cm = CrtModulus.build(4 * N, q1, q2)
        hit = (cm, _plan(N, (q1, q2), cm))
        _CRT_CACHE[N] = hit
    return hit


def _check_pair(a: RingElement, b: RingElement):
    if a.conductor != b.conductor:
        raise DomainMismatch(
            f"conductor mismatch: n = {a.conductor.n} vs {b.conductor.n}"
        )
    if a.domain != b.domain:
        raise DomainMismatch(f"domain mismatch: {a.domain!r} vs {b.domain!r}")


def mul_fast(a: RingElement, b: RingElement) -> RingElement:
    """DCT-based product, reduced; exact in every domain."""
    _check_pair(a, b)
    c = a.conductor
    N = _next_pow2(2 * c.m)
    if isinstance(a.domain, PrimeField):
        return _mul_fast_modular(a, b, N, _plan(N, a.domain.q, a.domain), a.domain)
    if isinstance(a.domain, CrtModulus):
        dom = a.domain
        return _mul_fast_modular(a, b, N, _plan(N, (dom.q1, dom.q2), dom), dom)
    return _mul_fast_integer(a, b, N)


def _mul_fast_modular(a, b, N, plan, domain) -> RingElement:
    c = a.conductor
    m = c.m
    Q = _domain_modulus(domain)
    pair = np.zeros((2, N), dtype=np.int64)
    pair[0, :m] = a.coeffs
    pair[1, :m] = b.coeffs
    hat = dct3(plan, pair)
    if isinstance(domain, CrtModulus):
        # lane products overflow int64 at composite size; go through objects
        prod = (hat[0].astype(object) * hat[1].astype(object)) % Q
        scaled = prod * (4 * pow(N, -1, Q) % Q) % Q
        cv = dct2(plan, scaled.astype(np.int64))
        cv = cv.astype(object) % Q
    else:
        prod = hat[0] * hat[1] % Q
        cv = dct2(plan, prod)
        cv = cv * (4 * pow(N, -1, Q) % Q) % Q
    assert not np.any(cv[2 * m - 1 :]), "unreduced product must fit degree 2m-2"
    ops = OpCount()
    if isinstance(domain, CrtModulus):
        out = _reduce_vec(cv[: 2 * m - 1].astype(object), c, Q, ops)
    else:
        out = _reduce_vec(cv[: 2 * m - 1].copy(), c, Q, ops)
    return RingElement(c, tuple(int(x) for x in out), domain)


def _mul_fast_integer(a, b, N) -> RingElement:
    c = a.conductor
    m = c.m
    A, B = a.max_abs(), b.max_abs()
    if A == 0 or B == 0:
        return RingElement(c, (0,) * m, INTEGER)
    cm, plan = _crt_for(N)
    bound = 2 * (3 * m * A * B + 1)
    if bound >= cm.composite:
        raise ModulusUnsuitable(
            f"coefficient bound {bound} exceeds CRT capacity {cm.composite}"
        )
    Q = cm.composite
    pair = np.zeros((2, N), dtype=np.int64)
    pair[0, :m] = [x % Q for x in a.coeffs]
    pair[1, :m] = [x % Q for x in b.coeffs]
    hat = dct3(plan, pair)
    prod = (hat[0].astype(object) * hat[1].astype(object)) % Q
    scaled = (prod * (4 * pow(N, -1, Q) % Q)) % Q
    cv = dct2(plan, scaled.astype(np.int64)).astype(object) % Q
    half = Q // 2
    cv = np.array([x - Q if x > half else x for x in cv], dtype=object)
    assert not np.any(cv[2 * m - 1 :]), "unreduced product must fit degree 2m-2"
    out = _reduce_vec(cv[: 2 * m - 1], c, None, OpCount())
    return RingElement(c, tuple(int(x) for x in out), INTEGER)


def mul_fast_real(a: RingElement, b: RingElement) -> RingElement:
    """Float64 DCT product with nearest-integer rounding, integer domain.

    Benchmark-parity path only; raises IllConditioned when the rounding
    residual reaches 0.25 instead of returning a wrong product.
    """
    _check_pair(a, b)
    if a.domain != INTEGER:
        raise DomainMismatch("the rounded float path is integer-domain only")
    c = a.conductor
    m = c.m
    N = _next_pow2(2 * m)
    plan = _plan(N, "real", None)
    pair = np.zeros((2, N))
    pair[0, :m] = a.coeffs
    pair[1, :m] = b.coeffs
    hat = dct3(plan, pair)
    cv = dct2(plan, hat[0] * hat[1]) * (4.0 / N)
    rounded = np.rint(cv)
    # beyond 2^52 the float grid is coarser than 1/2 and the residual test
    # below can no longer see a rounding failure
    if np.max(np.abs(cv)) >= 2.0**52 or np.max(np.abs(cv - rounded)) >= 0.25:
        raise IllConditioned("float product residual >= 0.25; use the CRT path")
    iv = rounded.astype(np.int64)
    assert not np.any(iv[2 * m - 1 :])
    out = _reduce_vec(iv[: 2 * m - 1].astype(object), c, None, OpCount())
    return RingElement(c, tuple(int(x) for x in out), INTEGER)


# --- schoolbook oracle -------------------------------------------------------


def _psi_power_mod(c: Conductor, M: int) -> list:
    tag = (c.p, c.s, c.r, M)
    hit = _PSI_MOD_CACHE.get(tag)
    if hit is None:
        hit = [x % M for x in build_min_poly(c).power]
        _PSI_MOD_CACHE[tag] = hit
    return hit


def mul_schoolbook(a: RingElement, b: RingElement) -> RingElement:
    """Power-basis O(m^2) oracle: convert, convolve, long-divide, convert."""
    _check_pair(a, b)
    M = _domain_modulus(a.domain)
    if M is None:
        return _schoolbook_integer_rns(a, b)
    return _schoolbook_modular(a, b, M)


_INT64_LANE_CAP = 1 << 31  # single-lane int64 conversions need q below this


def _power_from_v_mod(v: list, M: int) -> list:
    if M < _INT64_LANE_CAP:
        lane = np.array([v], dtype=np.int64) % M
        mvec = np.array([[M]], dtype=np.int64)
        return [int(x) for x in _power_from_v_lanes(lane, mvec)[0]]
    return _power_from_v_list(v, M)


def _v_from_power_mod(pw: list, M: int) -> list:
    if M < _INT64_LANE_CAP:
        lane = np.array([pw], dtype=np.int64) % M
        mvec = np.array([[M]], dtype=np.int64)
        return [int(x) for x in _v_from_power_lanes(lane, mvec)[0]]
    return _v_from_power_list(pw, M)


def _conv_exact_mod(pa: list, pb: list, M: int) -> list:
    """Exact power-basis convolution of residue vectors, reduced mod M."""
    half = M // 2
    ca = [x - M if x > half else x for x in pa]
    cb = [x - M if x > half else x for x in pb]
    A = max(map(abs, ca))
    B = max(map(abs, cb))
    if A == 0 or B == 0:
        return [0] * (len(pa) + len(pb) - 1)
    mods = tuple(_rns_primes_for(2 * (min(len(ca), len(cb)) * A * B + 1)))
    assert min(len(ca), len(cb)) * max(mods) ** 2 < 1 << 63, (
        "int64 convolution accumulator overflows; 25-bit lanes cap m at 4096"
    )
    lanes = [
        np.convolve(
            np.array([x % q for x in ca], dtype=np.int64),
            np.array([x % q for x in cb], dtype=np.int64),
        )
        % q
        for q in mods
    ]
    return [_crt_centered_int(res, mods) % M for res in zip(*lanes)]


def _schoolbook_modular(a: RingElement, b: RingElement, M: int) -> RingElement:
    c = a.conductor
    m = c.m
    pa = _power_from_v_mod(list(a.coeffs), M)
    pb = _power_from_v_mod(list(b.coeffs), M)
    conv = _conv_exact_mod(pa, pb, M)
    psi = _psi_power_mod(c, M)
    for j in range(2 * m - 2, m - 1, -1):
        qc = conv[j]
        if qc:
            base = j - m
            conv[base:j] = [(x - qc * y) % M for x, y in zip(conv[base:j], psi)]
            conv[j] = 0
    return RingElement(c, tuple(_v_from_power_mod(conv[:m], M)), a.domain)


def _rns_primes_for(bound: int) -> list:
    """Primes just below 2^25 with product > bound (int64-safe convolution)."""
    total = 1
    take = []
    idx = 0
    while total <= bound:
        while idx >= len(_RNS_PRIMES):
            q = _RNS_PRIMES[-1] - 2 if _RNS_PRIMES else (1 << 25) - 1
            while not is_prime(q):
                q -= 2
            _RNS_PRIMES.append(q)
        p = _RNS_PRIMES[idx]
        take.append(p)
        total *= p
        idx += 1
    return take


def _psi_lanes(c: Conductor, mods: tuple) -> np.ndarray:
    tag = (c.p, c.s, c.r, mods)
    hit = _PSI_LANES_CACHE.get(tag)
    if hit is None:
        power = build_min_poly(c).power
        hit = np.array([[x % q for x in power] for q in mods], dtype=np.int64)
        _PSI_LANES_CACHE[tag] = hit
    return hit


def _schoolbook_integer_rns(a: RingElement, b: RingElement) -> RingElement:
    c = a.conductor
    m = c.m
    A, B = a.max_abs(), b.max_abs()
    if A == 0 or B == 0:
        return RingElement(c, (0,) * m, INTEGER)
    # remainder coefficients are bounded by the reduction fan-in
    bound = 2 * (3 * m * A * B * (2 * c.k + 4) + 1)
    mods = tuple(_rns_primes_for(bound))
    assert m * max(mods) ** 2 < 1 << 63, (
        "int64 convolution accumulator overflows; 25-bit lanes cap m at 4096"
    )
    mvec = np.array(mods, dtype=np.int64).reshape(-1, 1)
    va = np.array([[x % q for x in a.coeffs] for q in mods], dtype=np.int64)
    vb = np.array([[x % q for x in b.coeffs] for q in mods], dtype=np.int64)
    pa = _power_from_v_lanes(va, mvec)
    pb = _power_from_v_lanes(vb, mvec)
    conv = np.empty((len(mods), 2 * m - 1), dtype=np.int64)
    for lane in range(len(mods)):
        conv[lane] = np.convolve(pa[lane], pb[lane]) % mods[lane]
    psi = _psi_lanes(c, mods)
    for j in range(2 * m - 2, m - 1, -1):
        qc = conv[:, j : j + 1]
        conv[:, j - m : j] = (conv[:, j - m : j] - qc * psi[:, :m]) % mvec
        conv[:, j] = 0
    vr = _v_from_power_lanes(conv[:, :m], mvec)
    out = [_crt_centered_int(vr[:, i], mods) for i in range(m)]
    return RingElement(c, tuple(out), INTEGER)


def _garner(mods: tuple):
    """Mixed-radix CRT constants for a fixed modulus tuple, cached."""
    hit = _GARNER_CACHE.get(mods)
    if hit is None:
        steps = []
        total = mods[0]
        for p in mods[1:]:
            steps.append((total, pow(total % p, -1, p), p))
            total *= p
        hit = (steps, total)
        _GARNER_CACHE[mods] = hit
    return hit


def _crt_centered_int(residues, mods) -> int:
    steps, total = _garner(tuple(mods))
    y = int(residues[0])
    for (prefix, inv, p), x in zip(steps, residues[1:]):
        y += (int(x) - y) * inv % p * prefix
    return y - total if y > total // 2 else y


def _schoolbook_bigint(a: RingElement, b: RingElement) -> RingElement:
    """Reference oracle on exact integers; O(m^2) bigint, small m only."""
    _check_pair(a, b)
    c = a.conductor
    pa = to_power_basis(list(a.coeffs))
    pb = to_power_basis(list(b.coeffs))
    conv = chebyshev.poly_mul(pa, pb)
    psi = list(build_min_poly(c).power)
    _, rem = chebyshev.poly_divmod(conv, psi)
    rem += [0] * (c.m - len(rem))
    return RingElement(c, tuple(to_v_basis(rem)), INTEGER)


def random_element(c: Conductor, domain=INTEGER, rng=None, bound: int = 100) -> RingElement:
    """Uniform random element; integer coefficients are in [-bound, bound]."""
    rng = rng or np.random.default_rng()
    M = _domain_modulus(domain)
    if M is None:
        coeffs = rng.integers(-bound, bound + 1, c.m)
    else:
        coeffs = [int(rng.integers(0, min(M, 1 << 62))) % M for _ in range(c.m)]
    return RingElement(c, tuple(int(x) for x in coeffs), domain)
