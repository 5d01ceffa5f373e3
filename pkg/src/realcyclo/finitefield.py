"""Prime-field arithmetic: primality, factoring, orders, roots of unity, CRT.

Moduli are capped at 64 bits; Python ints give exact 128-bit intermediates
for free, so no special-casing is needed in the hot paths (those live in
numpy int64 code elsewhere and keep their own headroom).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoSuchRoot, ZeroElement

# Deterministic Miller-Rabin bases for n < 3.3 * 10^24 (covers 64 bits).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    twos = (d & -d).bit_length() - 1
    d >>= twos
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(twos - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """One nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        y, c, m = (seed * 2862933555777941757 + 3037000493) % n or 1, seed, 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 1


def factorize(n: int) -> dict:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    out: dict = {}
    stack = [n]
    while stack:
        v = stack.pop()
        if v == 1:
            continue
        if is_prime(v):
            out[v] = out.get(v, 0) + 1
            continue
        for small in (2, 3, 5, 7, 11, 13):
            if v % small == 0:
                stack += [small, v // small]
                break
        else:
            d = _pollard_brent(v)
            stack += [d, v // d]
    return out


@dataclass(frozen=True)
class PrimeField:
    """An odd prime modulus q (fits 64 bits)."""

    q: int

    def __post_init__(self):
        assert self.q % 2 == 1 and self.q.bit_length() <= 64 and is_prime(self.q), (
            f"modulus {self.q} is not an odd 64-bit prime"
        )


def _modulus(q) -> int:
    return q.q if isinstance(q, PrimeField) else int(q)


def mul_order(a: int, q) -> int:
    """Least t >= 1 with a^t = 1 mod q, by descending through q-1's divisors."""
    q = _modulus(q)
    a %= q
    if a == 0:
        raise ZeroElement("multiplicative order of 0 is undefined")
    t = q - 1
    for ell in factorize(q - 1):
        while t % ell == 0 and pow(a, t // ell, q) == 1:
            t //= ell
    return t


def find_generator(q) -> int:
    """Smallest generator of the cyclic group F_q^*."""
    q = _modulus(q)
    radicals = list(factorize(q - 1))
    for g in range(2, q):
        if all(pow(g, (q - 1) // ell, q) != 1 for ell in radicals):
            return g
    raise AssertionError(f"no generator found mod {q}")  # unreachable for prime q


def root_of_unity(M: int, q) -> int:
    """Element of exact multiplicative order M in F_q."""
    q = _modulus(q)
    if (q - 1) % M:
        raise NoSuchRoot(f"q = {q} is not 1 mod {M}")
    if M == 1:
        return 1
    w = pow(find_generator(q), (q - 1) // M, q)
    assert mul_order(w, q) == M
    return w


def crt_combine(x1: int, q1: int, x2: int, q2: int) -> int:
    """The unique y mod q1*q2 with y = x1 (q1), y = x2 (q2)."""
    y = x1 + (x2 - x1) * pow(q1, -1, q2) % q2 * q1
    return y % (q1 * q2)


@dataclass(frozen=True)
class CrtModulus:
    """Composite modulus q1*q2 carrying a common root of unity of order M.

    omega's image mod each prime has exact order M, so DCT twiddles built
    from it are valid in both residue components simultaneously.
    """

    q1: int
    q2: int
    M: int
    omega: int

    def __post_init__(self):
        assert self.q1 != self.q2 and is_prime(self.q1) and is_prime(self.q2)
        for q in (self.q1, self.q2):
            assert (q - 1) % self.M == 0, f"{q} is not 1 mod {self.M}"
            w = self.omega % q
            assert pow(w, self.M, q) == 1
            for ell in factorize(self.M):
                assert pow(w, self.M // ell, q) != 1
    @property
    def composite(self) -> int:
        return self.q1 * self.q2

    @classmethod
    def build(cls, M: int, q1: int, q2: int) -> "CrtModulus":
        w = crt_combine(root_of_unity(M, q1), q1, root_of_unity(M, q2), q2)
        return cls(q1, q2, M, w)


def prime_congruent_below(M: int, limit: int, count: int = 1) -> list:
    """The `count` largest primes q <= limit with q = 1 mod M, descending."""
    out = []
    q = limit - ((limit - 1) % M)
    while q > M and len(out) < count:
        if is_prime(q):
            out.append(q)
        q -= M
    assert len(out) == count, f"not enough primes = 1 mod {M} below {limit}"
    return out


def primes_in_range(lo: int, hi: int) -> list:
    """All primes in [lo, hi], ascending (simple sieve)."""
    if hi < 2:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(hi) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(max(lo, 2), hi + 1) if sieve[i]]
