"""Non-scaled DCT-II/DCT-III of power-of-two size, real and modular.

Definitions (size N, indices 0-based):

    dct3(a)(j) = a_0/2 + sum_{i>=1} a_i cos(2 pi (2j+1) i / 4N)
    dct2(a)(j) =         sum_i     a_i cos(2 pi (2i+1) j / 4N)

dct2(dct3(a)) = (N/2) a. Over F_q the cosines become 2^-1 (w^e + w^-e) for
w a root of unity of order 4N, which requires q = 1 (mod 4N); the same
recursion then runs verbatim and is exact. A CRT domain runs one lane per
prime and recombines.

Both transforms use the even/odd factorization with one halving pass, so a
size-N call costs O(N log N) scalar operations. The direct O(N^2)
summations are kept as oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ModulusUnsuitable, SizeMismatch
from .finitefield import CrtModulus, PrimeField, root_of_unity

_INT64_PRIME_CAP = 1 << 31  # keeps modmul products inside int64


@dataclass
class OpCount:
    """Instrumentation totals for the fast kernels (scalar mult/add)."""

    mult: int = 0
    add: int = 0

    def reset(self):
        self.mult = 0
        self.add = 0


class _Lane:
    """One coefficient domain: q = None means float64, else F_q int64.

    Holds the per-level butterfly tables. w2[h][i] = 2 cos(pi (2i+1) / 2h)
    (or its root-of-unity analogue) for i < h/2; winv is its elementwise
    inverse, used by the DCT-III recombine.
    """

    __slots__ = ("q", "inv2", "w2", "winv", "pow_table")

    def __init__(self, N: int, q):
        self.q = q
        self.w2 = {}
        self.winv = {}
        if q is None:
            self.inv2 = 0.5
            self.pow_table = None
            h = 2
            while h <= N:
                ang = np.pi * (2 * np.arange(h // 2) + 1) / (2 * h)
                w = 2.0 * np.cos(ang)
                self.w2[h] = w
                self.winv[h] = 1.0 / w
                h *= 2
        else:
            omega = root_of_unity(4 * N, q)
            powers = [1] * (4 * N)
            for t in range(1, 4 * N):
                powers[t] = powers[t - 1] * omega % q
            self.pow_table = np.array(powers, dtype=np.int64)
            self.inv2 = pow(2, -1, q)
            h = 2
            while h <= N:
                step = N // h
                w = [
                    (powers[(2 * i + 1) * step] + powers[4 * N - (2 * i + 1) * step]) % q
                    for i in range(h // 2)
                ]
                # (2i+1) step is never = N (mod 2N), so w is a unit
                self.w2[h] = np.array(w, dtype=np.int64)
                self.winv[h] = np.array([pow(x, -1, q) for x in w], dtype=np.int64)
                h *= 2


class DctPlan:
    """Twiddle tables and instrumentation for one transform size and domain.

    domain: None (real), a PrimeField or prime int, or a CrtModulus. The
    spec-level twiddle family cos(2 pi (2j+1) i / 4N) is exposed through
    twiddle_value; the per-level kernel tables live on the lanes. Plans are
    immutable after construction except for the ops counters.
    """

    __slots__ = ("N", "domain", "ops", "_lanes", "_crt")

    def __init__(self, N: int, domain=None):
        if N < 2 or N & (N - 1):
            raise SizeMismatch(f"transform size {N} is not a power of two >= 2")
        self.N = N
        self.ops = OpCount()
        self._crt = None
        if domain is None or domain == "real":
            self.domain = "real"
            self._lanes = (_Lane(N, None),)
            return
        if isinstance(domain, CrtModulus):
            if domain.M % (4 * N):
                raise ModulusUnsuitable(
                    f"CRT root order {domain.M} does not cover 4N = {4 * N}"
                )
            for q in (domain.q1, domain.q2):
                self._check_prime(N, q)
            self.domain = domain
            self._lanes = (_Lane(N, domain.q1), _Lane(N, domain.q2))
            # Garner constant for the recombine
            self._crt = (domain.q1, domain.q2, pow(domain.q1, -1, domain.q2))
            return
        q = domain.q if isinstance(domain, PrimeField) else PrimeField(int(domain)).q
        self._check_prime(N, q)
        self.domain = PrimeField(q)
        self._lanes = (_Lane(N, q),)

    @staticmethod
    def _check_prime(N: int, q: int):
        if (q - 1) % (4 * N):
            raise ModulusUnsuitable(f"q = {q} is not 1 mod 4N = {4 * N}")
        if q >= _INT64_PRIME_CAP:
            raise ModulusUnsuitable(f"q = {q} overflows the int64 kernel")

    @property
    def modular(self) -> bool:
        return self.domain != "real"

    @property
    def twiddles(self) -> dict:
        """Per-level cosine tables: twiddles[h][i] = cos(pi (2i+1) / 2h).

        These are the cos(2 pi (2j+1) i / 4N) family restricted to the
        indices the kernels touch; modular entries carry the 2^-1 factor.
        """
        out = {}
        for h, w in self._lanes[0].w2.items():
            if not self.modular:
                out[h] = w * 0.5
            elif len(self._lanes) == 1:
                out[h] = w * self._lanes[0].inv2 % self._lanes[0].q
            else:
                l1, l2 = self._lanes
                a = w * l1.inv2 % l1.q
                b = l2.w2[h] * l2.inv2 % l2.q
                out[h] = np.array(
                    [self._combine_scalar(int(x), int(y)) for x, y in zip(a, b)]
                )
        return out

    def twiddle_value(self, j: int, i: int):
        """cos(2 pi (2j+1) i / 4N) in the plan's domain; equals 1 at i = 0."""
        if not self.modular:
            return float(np.cos(2.0 * np.pi * (2 * j + 1) * i / (4 * self.N)))
        vals = []
        for lane in self._lanes:
            e = (2 * j + 1) * i % (4 * self.N)
            s = int(lane.pow_table[e]) + int(lane.pow_table[(4 * self.N - e) % (4 * self.N)])
            vals.append(s % lane.q * lane.inv2 % lane.q)
        return vals[0] if len(vals) == 1 else self._combine_scalar(vals[0], vals[1])

    def _combine_scalar(self, x1: int, x2: int) -> int:
        q1, q2, c = self._crt
        return x1 + q1 * ((x2 - x1) * c % q2)

    def _split(self, arr: np.ndarray) -> list:
        if not self.modular:
            return [arr.astype(np.float64)]
        return [(arr % lane.q).astype(np.int64) for lane in self._lanes]

    def _join(self, outs: list) -> np.ndarray:
        if len(outs) == 1:
            return outs[0]
        q1, q2, c = self._crt
        x1, x2 = outs[0], outs[1]
        return x1 + q1 * ((x2 - x1) * c % q2)


def _as_batch(plan: DctPlan, a) -> tuple:
    arr = np.atleast_2d(np.asarray(a))
    if arr.ndim != 2 or arr.shape[-1] != plan.N:
        raise SizeMismatch(f"vector length {arr.shape[-1]} != plan size {plan.N}")
    return arr, np.asarray(a).ndim == 1


def dct3(plan: DctPlan, a):
    """Fast type-III transform; accepts one vector or a (batch, N) array."""
    arr, single = _as_batch(plan, a)
    outs = [_dct3_lane(lane, arr_l, plan.ops) for lane, arr_l in zip(plan._lanes, plan._split(arr))]
    out = plan._join(outs)
    return out[0] if single else out


def dct2(plan: DctPlan, a):
    """Fast type-II transform; accepts one vector or a (batch, N) array."""
    arr, single = _as_batch(plan, a)
    outs = [_dct2_lane(lane, arr_l, plan.ops) for lane, arr_l in zip(plan._lanes, plan._split(arr))]
    out = plan._join(outs)
    return out[0] if single else out


def _dct3_lane(lane: _Lane, x: np.ndarray, ops: OpCount) -> np.ndarray:
    """Split x into (even part, folded odd part), recurse, recombine.

    Top-down, per block of size h: the even entries transform as a size-h/2
    DCT-III; the odd entries fold to g = (2 a_1, a_3 + a_1, a_5 + a_3, ...)
    whose size-h/2 DCT-III equals w_j * (odd part at j). Every size-1 leaf
    is a_0/2, hence the single global halving at the bottom.
    """
    q = lane.q
    x = x.copy()
    size = x.shape[0] * x.shape[1]
    N = x.shape[1]
    h = N
    while h >= 2:
        blocks = x.reshape(-1, h)
        h2 = h // 2
        even = blocks[:, 0::2].copy()
        odd = blocks[:, 1::2]
        g = np.empty_like(even)
        g[:, 0] = odd[:, 0] * 2
        if h2 > 1:
            g[:, 1:] = odd[:, 1:] + odd[:, :-1]
        if q is not None:
            g %= q
        blocks[:, :h2] = even
        blocks[:, h2:] = g
        ops.add += blocks.shape[0] * h2  # doubling counted with the folds
        h = h2
    if q is None:
        x *= lane.inv2
    else:
        x = x * lane.inv2 % q
    ops.mult += size
    h = 2
    while h <= N:
        blocks = x.reshape(-1, h)
        h2 = h // 2
        E = blocks[:, :h2].copy()
        O = blocks[:, h2:] * lane.winv[h][None, :]
        if q is not None:
            O %= q
        lo = E + O
        hi = E - O
        if q is not None:
            lo %= q
            hi %= q
        blocks[:, :h2] = lo
        blocks[:, h2:] = hi[:, ::-1]
        ops.mult += blocks.shape[0] * h2
        ops.add += blocks.shape[0] * h
        h *= 2
    return x


def _dct2_lane(lane: _Lane, x: np.ndarray, ops: OpCount) -> np.ndarray:
    """Butterfly x into (sums, twiddled differences), recurse, interleave.

    Top-down, per block of size h: u_i = a_i + a_{h-1-i} feeds the even
    outputs; v_i = (a_i - a_{h-1-i}) w_i feeds D, from which the odd
    outputs follow by S_0 = D_0/2, S_t = D_t - S_{t-1} (an alternating
    cumulative sum). Size-1 leaves are the identity.
    """
    q = lane.q
    x = x.copy()
    N = x.shape[1]
    h = N
    while h >= 2:
        blocks = x.reshape(-1, h)
        h2 = h // 2
        lo = blocks[:, :h2].copy()
        hi = blocks[:, h2:][:, ::-1].copy()
        u = lo + hi
        v = (lo - hi) * lane.w2[h][None, :]
        if q is not None:
            u %= q
            v %= q
        blocks[:, :h2] = u
        blocks[:, h2:] = v
        ops.add += blocks.shape[0] * h
        ops.mult += blocks.shape[0] * h2
        h = h2
    h = 2
    while h <= N:
        blocks = x.reshape(-1, h)
        h2 = h // 2
        E = blocks[:, :h2].copy()
        D = blocks[:, h2:].copy()
        if q is None:
            D[:, 0] *= lane.inv2
            sgn = np.where(np.arange(h2) & 1, -1.0, 1.0)
            S = sgn * np.cumsum(sgn * D, axis=1)
        else:
            D[:, 0] = D[:, 0] * lane.inv2 % q
            sgn = np.where(np.arange(h2) & 1, -1, 1).astype(np.int64)
            # lifted alternating partial sums stay below 2^42, safe in int64
            S = sgn * np.cumsum(sgn * D % q, axis=1) % q
        blocks[:, 0::2] = E
        blocks[:, 1::2] = S
        ops.mult += blocks.shape[0]
        ops.add += blocks.shape[0] * (h2 - 1)
        h *= 2
    return x


def dct3_direct(plan: DctPlan, a):
    """O(N^2) summation oracle for dct3."""
    return _direct(plan, a, transpose=False)


def dct2_direct(plan: DctPlan, a):
    """O(N^2) summation oracle for dct2."""
    return _direct(plan, a, transpose=True)


def _direct(plan: DctPlan, a, transpose: bool):
    arr, single = _as_batch(plan, a)
    N = plan.N
    outs = []
    for lane, al in zip(plan._lanes, plan._split(arr)):
        if lane.q is None:
            j, i = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
            C = np.cos(2.0 * np.pi * (2 * j + 1) * i / (4 * N))
            if transpose:
                out = al @ C
            else:
                C = C.copy()
                C[:, 0] = 0.5
                out = al @ C.T
        else:
            e = (2 * np.arange(N)[:, None] + 1) * np.arange(N)[None, :] % (4 * N)
            C = lane.pow_table[e] + lane.pow_table[(4 * N - e) % (4 * N)]
            C = C % lane.q * lane.inv2 % lane.q
            if transpose:
                C = C.T.copy()
            else:
                C[:, 0] = lane.inv2
            out = np.empty_like(al)
            for r in range(N):
                out[:, r] = (al * C[r][None, :] % lane.q).sum(axis=1) % lane.q
        outs.append(out)
    out = plan._join(outs)
    return out[0] if single else out


def operation_count(N: int) -> tuple:
    """Closed-form (multiplications, additions) for the size-N fast DCT.

    Returned verbatim from the l = log2 N formulas mult = (l-2) 2^(l-2),
    add = 3(l-2) 2^(l-3) - 2^(l-2) + 1. These undercount any realizable
    radix-2 kernel (at l = 2 they claim zero additions); the instrumented
    counters are held to them only up to documented slack.
    """
    if N < 4 or N & (N - 1):
        raise SizeMismatch(f"operation_count needs a power of two >= 4, got {N}")
    l = N.bit_length() - 1
    mult = (l - 2) << (l - 2)
    add = (3 * (l - 2) * (1 << l)) // 8 - (1 << (l - 2)) + 1
    return mult, add
