"""PLWE sampling and root-based vulnerability scanning.

The attack family evaluates ring samples at a root alpha of the modulus
polynomial over F_q: when alpha has small multiplicative order (or the
polynomial has a factor x^k + a whose negated constant term does), the
evaluated errors land in a distinguishable subset of F_q. This module
provides the sample generator, brute-force root and k-ideal-factor scans,
the evaluation distinguisher, preset checks mirroring standardized scheme
parameters, and a statistical campaign over a conductor/prime grid, with
a cyclotomic control run for comparison.
"""

import functools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainMismatch, InvalidK, NotARoot
from .finitefield import PrimeField, factorize, is_prime, mul_order, primes_in_range
from .minpoly import Conductor, MinimalPolynomial, build_min_poly
from .ring import RingElement, mul_schoolbook

_CHUNK = 1 << 20
_VECTOR_Q_CAP = 1 << 31  # int64 products q^2 must stay below 2^63

ATTACK_ROWS = (
    "small-set-roots",
    "small-error-roots",
    "small-set-kideal",
    "small-error-kideal",
)

PRESETS = {
    "ml-kem": ((5, 1, 8), 3329),
    "ml-dsa": ((5, 1, 8), 8380417),
    "fn-dsa-512": ((5, 1, 9), 12289),
    "fn-dsa-1024": ((5, 1, 10), 12289),
}


@dataclass(frozen=True)
class PlweParams:
    """Instance description: ring conductor, prime modulus, error width."""

    conductor: Conductor
    q: PrimeField
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma = {self.sigma} must be positive")


@dataclass(frozen=True)
class PlweSample:
    """One pair (a, a*s + e) over F_q in the V-basis."""

    a: RingElement
    b: RingElement


@dataclass(frozen=True)
class ScanReport:
    """Roots and k-ideal factors of one (polynomial, q) pair."""

    conductor: Conductor
    q: int
    roots: tuple
    smallest_root_order: "int | None"
    k_ideal: tuple
    smallest_kideal_order: "int | None"


@dataclass(frozen=True, eq=False)
class CampaignSummary:
    """Aggregated scan results over a conductor/prime grid.

    The vulnerability criteria test only root and factor orders, never
    the error width, so counts and ratios are identical for every sigma;
    the sigma axis enters instance_count and the table layout only.
    """

    family: str
    sigmas: tuple
    k_max: int
    pair_count: int
    instance_count: int
    counts: dict
    denominators: dict
    ratios: dict
    vulnerable: tuple
    conductors: tuple
    prime_count: int
    prime_range: tuple
    sample: "int | None"
    seed: "int | None"
    small_order_bound: int
    small_set_bound: int


def discrete_gaussian(sigma: float, size: int, rng) -> np.ndarray:
    """Centered discrete Gaussian draws, rejection-sampled, cut at 6*sigma.

    sigma <= 1e-8 is the exact-zero switch: every draw is 0.
    """
    out = np.zeros(size, dtype=np.int64)
    bound = int(6 * sigma)
    if sigma <= 1e-8 or bound == 0:
        return out
    inv = 1.0 / (2.0 * sigma * sigma)
    filled = 0
    while filled < size:
        batch = max(64, 2 * (size - filled))
        cand = rng.integers(-bound, bound + 1, size=batch)
        keep = rng.random(batch) < np.exp(-(cand.astype(np.float64) ** 2) * inv)
        got = cand[keep][: size - filled]
        out[filled : filled + len(got)] = got
        filled += len(got)
    return out


def sample_plwe(params: PlweParams, s: RingElement, count: int, rng_seed=None) -> list:
    """`count` samples (a, a*s + e): a uniform in the power basis, e Gaussian."""
    c, fq = params.conductor, params.q
    if not isinstance(s.domain, PrimeField) or s.domain != fq or s.conductor != c:
        raise DomainMismatch("secret must live in F_q with the params' conductor")
    rng = np.random.default_rng(rng_seed)
    q = fq.q
    out = []
    for _ in range(count):
        a = RingElement.from_power(c, [int(x) for x in rng.integers(0, q, size=c.m)], fq)
        e_pow = discrete_gaussian(params.sigma, c.m, rng)
        e = RingElement.from_power(c, [int(x) % q for x in e_pow], fq)
        prod = mul_schoolbook(a, s)
        b = RingElement(c, tuple((x + y) % q for x, y in zip(prod.coeffs, e.coeffs)), fq)
        out.append(PlweSample(a, b))
    return out


def _eval_power(coeffs, x: int, q: int) -> int:
    """Horner evaluation of ascending power coefficients, exact mod q."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % q
    return acc


def _eval_v_basis(coeffs, x: int, q: int) -> int:
    """sum_j c_j V_j(x) mod q via the three-term recurrence.

    Tracks W_j with W_0 = 2, W_1 = x, W_{j+1} = x W_j - W_{j-1}; V_j = W_j
    for j >= 1 while V_0 = 1 contributes coeffs[0] directly.
    """
    total = coeffs[0] % q
    w_prev, w = 2 % q, x % q
    for c in coeffs[1:]:
        total = (total + c * w) % q
        w_prev, w = w, (x * w - w_prev) % q
    return total


def _root_candidates(coeffs, q: int) -> list:
    """All alpha in F_q* with poly(alpha) = 0, by chunked vector Horner."""
    if q >= _VECTOR_Q_CAP:
        return [a for a in range(1, q) if _eval_power(coeffs, a, q) == 0]
    desc = [int(c) for c in reversed(coeffs)]
    hits = []
    for lo in range(1, q, _CHUNK):
        al = np.arange(lo, min(lo + _CHUNK, q), dtype=np.int64)
        acc = np.full(al.shape, desc[0], dtype=np.int64)
        for c in desc[1:]:
            acc = (acc * al + c) % q
        hits.extend(int(a) for a in al[acc == 0])
    return hits


def find_roots(psi: MinimalPolynomial, q: PrimeField) -> list:
    """All roots of psi in F_q* with their multiplicative orders.

    Brute force over the whole group, O(q m); each hit is re-verified by
    scalar Horner before its order is computed. Sorted by (order, alpha).
    """
    qq = q.q
    coeffs = [c % qq for c in psi.power]
    out = []
    for alpha in _root_candidates(coeffs, qq):
        assert _eval_power(coeffs, alpha, qq) == 0
        out.append((alpha, mul_order(alpha, q)))
    out.sort(key=lambda pair: (pair[1], pair[0]))
    return out


def _divides_sparse(coeffs, k: int, a: int, q: int) -> bool:
    """Long-division remainder check of poly by x^k + a, mod q."""
    rem = [c % q for c in coeffs]
    for j in range(len(rem) - 1, k - 1, -1):
        t = rem[j]
        if t:
            rem[j] = 0
            rem[j - k] = (rem[j - k] - t * a) % q
    return not any(rem[:k])


def _k_ideal_candidates(coeffs, k: int, q: int) -> list:
    """All a with (x^k + a) | poly mod q, by folding x^k -> -a.

    Grouping coefficients by index mod k turns divisibility into k
    simultaneous Horner evaluations at y = -a, vectorized over all a.
    """
    if q >= _VECTOR_Q_CAP:
        return [a for a in range(q) if _divides_sparse(coeffs, k, a, q)]
    classes = [[int(c) for c in reversed(coeffs[t::k])] for t in range(k)]
    hits = []
    for lo in range(0, q, _CHUNK):
        a = np.arange(lo, min(lo + _CHUNK, q), dtype=np.int64)
        y = (q - a) % q
        ok = np.ones(a.shape, dtype=bool)
        for cls in classes:
            acc = np.full(a.shape, cls[0], dtype=np.int64)
            for c in cls[1:]:
                acc = (acc * y + c) % q
            ok &= acc == 0
        hits.extend(int(v) for v in a[ok])
    return hits


def _k_ideal_scan(coeffs, q: PrimeField, k_max: int) -> list:
    qq = q.q
    found = []
    for k in range(2, k_max + 1):
        for a in _k_ideal_candidates(coeffs, k, qq):
            assert _divides_sparse(coeffs, k, a, qq)
            neg = (qq - a) % qq
            found.append((k, a, mul_order(neg, q) if neg else 0))
    return found


def find_k_ideal_factors(psi: MinimalPolynomial, q: PrimeField, k_max: int) -> list:
    """All factors x^k + a of psi mod q for k in 2..k_max.

    Returns (k, a, order of -a) triples; order 0 marks a = 0. Every fold
    hit is independently confirmed by long division before being listed.
    """
    if not 2 <= k_max <= 4:
        raise InvalidK(f"k_max = {k_max} outside the supported range [2, 4]")
    if k_max >= psi.conductor.m:
        raise InvalidK(f"k_max = {k_max} must stay below the degree {psi.conductor.m}")
    return _k_ideal_scan([c % q.q for c in psi.power], q, k_max)


def distinguisher(samples: list, alpha: int, order: int, sigma: float) -> str:
    """Evaluation-at-root verdict: 'plwe', 'uniform', or 'inconclusive'.

    Every guess g for s(alpha) is accepted when all centered residuals
    b_i(alpha) - g*a_i(alpha) stay within tau = 6*sigma*sqrt(m). A lone
    accepted cluster (at most `order` guesses) reads as PLWE, an empty
    one as uniform, anything more as inconclusive.
    """
    if not samples:
        raise ValueError("no samples to distinguish")
    first = samples[0]
    c, dom = first.a.conductor, first.a.domain
    if not isinstance(dom, PrimeField):
        raise DomainMismatch("distinguisher needs prime-field samples")
    for smp in samples:
        for elt in (smp.a, smp.b):
            if elt.conductor != c or elt.domain != dom:
                raise DomainMismatch("samples must share conductor and modulus")
    q = dom.q
    assert q < _VECTOR_Q_CAP, "guess enumeration is vectorized in int64"
    if _eval_power([cf % q for cf in build_min_poly(c).power], alpha % q, q) != 0:
        raise NotARoot(f"{alpha} is not a root of the conductor-{c.n} modulus mod {q}")
    tau = 6.0 * sigma * math.sqrt(c.m)
    a_vals = np.array([_eval_v_basis(s.a.coeffs, alpha, q) for s in samples], dtype=np.int64)
    b_vals = np.array([_eval_v_basis(s.b.coeffs, alpha, q) for s in samples], dtype=np.int64)
    passing = 0
    for lo in range(0, q, _CHUNK):
        g = np.arange(lo, min(lo + _CHUNK, q), dtype=np.int64)
        r = (b_vals[:, None] - a_vals[:, None] * g[None, :]) % q
        small = np.minimum(r, q - r) <= tau
        passing += int(small.all(axis=0).sum())
    if passing == 0:
        return "uniform"
    if passing <= order:
        return "plwe"
    return "inconclusive"


def scan_pair(c: Conductor, q: int, k_max: int = 4) -> ScanReport:
    """Root and k-ideal scan of one (conductor, prime) pair."""
    fq = PrimeField(q)
    psi = build_min_poly(c)
    roots = tuple(find_roots(psi, fq))
    k_ideal = tuple(find_k_ideal_factors(psi, fq, k_max))
    return ScanReport(
        conductor=c,
        q=q,
        roots=roots,
        smallest_root_order=min((o for _, o in roots), default=None),
        k_ideal=k_ideal,
        smallest_kideal_order=min((o for _, _, o in k_ideal if o), default=None),
    )


def preset_check(preset: str) -> ScanReport:
    """Scan the conductor/modulus pair mirroring a standardized scheme."""
    try:
        (p, s, r), q = PRESETS[preset]
    except KeyError:
        raise ValueError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}") from None
    return scan_pair(Conductor(p, s, r), q, k_max=4)


def _divisors(n: int) -> list:
    divs = [1]
    for prime, exp in factorize(n).items():
        divs = [d * prime**e for d in divs for e in range(exp + 1)]
    return sorted(divs)


def _moebius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def _mul_x_pow_minus_1(poly: list, d: int) -> list:
    out = [-c for c in poly] + [0] * d
    for i, c in enumerate(poly):
        out[i + d] += c
    return out


def _div_x_pow_minus_1(poly: list, d: int) -> list:
    out = [0] * (len(poly) - d)
    for j in range(len(out)):
        out[j] = (out[j - d] if j >= d else 0) - poly[j]
    for j in range(len(out), len(poly)):
        quotient_coeff = out[j - d] if j >= d else 0
        assert poly[j] == quotient_coeff, "division by x^d - 1 left a remainder"
    return out


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple:
    """Power coefficients of the n-th cyclotomic polynomial, ascending.

    Moebius form: product over divisors d of (x^d - 1)^mu(n/d), with all
    multiplications applied before the exact divisions.
    """
    num, den = [], []
    for d in _divisors(n):
        mu = _moebius(n // d)
        if mu == 1:
            num.append(d)
        elif mu == -1:
            den.append(d)
    poly = [1]
    for d in num:
        poly = _mul_x_pow_minus_1(poly, d)
    for d in den:
        poly = _div_x_pow_minus_1(poly, d)
    return tuple(poly)


def standard_conductor_set() -> tuple:
    """Conductors with 5 <= p <= 50, 1 <= s <= 3, 2 <= r <= 9, 256 <= m <= 512."""
    out = []
    for p in range(5, 51, 2):
        if not is_prime(p):
            continue
        for s in range(1, 4):
            for r in range(2, 10):
                m = 2 ** (r - 2) * (p - 1) * p ** (s - 1)
                if 256 <= m <= 512:
                    out.append(Conductor(p, s, r))
    return tuple(sorted(out, key=lambda c: (c.n, c.p, c.s, c.r)))


def _scan_task(args) -> ScanReport:
    p, s, r, q, k_max, family = args
    c = Conductor(p, s, r)
    if family == "cyclotomic":
        # Control family: same degree and modulus, phi(n/2) = phi(n)/2 for r >= 2.
        coeffs = [v % q for v in cyclotomic_poly(c.n // 2)]
        fq = PrimeField(q)
        roots = []
        for alpha in _root_candidates(coeffs, q):
            assert _eval_power(coeffs, alpha, q) == 0
            roots.append((alpha, mul_order(alpha, fq)))
        roots.sort(key=lambda pair: (pair[1], pair[0]))
        k_ideal = _k_ideal_scan(coeffs, fq, k_max)
        return ScanReport(
            conductor=c,
            q=q,
            roots=tuple(roots),
            smallest_root_order=min((o for _, o in roots), default=None),
            k_ideal=tuple(k_ideal),
            smallest_kideal_order=min((o for _, _, o in k_ideal if o), default=None),
        )
    return scan_pair(c, q, k_max)


def _pool_size(workers) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("REALCYCLO_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_campaign(
    conductor_set=None,
    prime_range=(2048, 4192),
    sigmas=(2, 3, 4, 5, 6, 7),
    k_max=4,
    sample=None,
    seed=None,
    family="maximal-real",
    workers=None,
    small_order_bound=5,
    small_set_bound=2,
) -> CampaignSummary:
    """Scan every (conductor, q) pair and aggregate vulnerability counts.

    The default grid is the standard conductor set against every prime in
    prime_range (inclusive); `sample` draws that many primes seeded by
    `seed` instead. A root hit needs order < small_order_bound for the
    small-error row and <= small_set_bound for the small-set row; k-ideal
    rows apply the same cuts to ord(-a) and count (pair, k) combinations,
    so their denominator carries the factor k_max - 1.
    """
    conductors = tuple(conductor_set) if conductor_set is not None else standard_conductor_set()
    primes = primes_in_range(prime_range[0], prime_range[1])
    if sample is not None:
        rng = np.random.default_rng(seed)
        picks = rng.choice(len(primes), size=sample, replace=False)
        primes = [primes[i] for i in sorted(picks)]
    tasks = [(c.p, c.s, c.r, q, k_max, family) for c in conductors for q in primes]
    nworkers = _pool_size(workers)
    if nworkers == 1 or len(tasks) < 2:
        reports = [_scan_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            chunk = max(1, len(tasks) // (4 * nworkers))
            reports = list(pool.map(_scan_task, tasks, chunksize=chunk))

    counts = {row: 0 for row in ATTACK_ROWS}
    vulnerable = []
    for rep in reports:
        c = rep.conductor
        base = {"p": c.p, "s": c.s, "r": c.r, "n": c.n, "q": rep.q}
        for row, cut in (("small-error-roots", small_order_bound - 1), ("small-set-roots", small_set_bound)):
            hits = [{"alpha": a, "order": o} for a, o in rep.roots if o <= cut]
            if hits:
                counts[row] += 1
                vulnerable.append({**base, "attack": row, "hits": hits})
        for k in range(2, k_max + 1):
            for row, cut in (("small-error-kideal", small_order_bound - 1), ("small-set-kideal", small_set_bound)):
                hits = [
                    {"k": kk, "a": a, "order": o}
                    for kk, a, o in rep.k_ideal
                    if kk == k and 0 < o <= cut
                ]
                if hits:
                    counts[row] += 1
                    vulnerable.append({**base, "attack": row, "hits": hits})

    pair_count = len(tasks)
    denominators = {
        "small-set-roots": pair_count,
        "small-error-roots": pair_count,
        "small-set-kideal": (k_max - 1) * pair_count,
        "small-error-kideal": (k_max - 1) * pair_count,
    }
    ratios = {row: counts[row] / denominators[row] if denominators[row] else 0.0 for row in ATTACK_ROWS}
    return CampaignSummary(
        family=family,
        sigmas=tuple(sigmas),
        k_max=k_max,
        pair_count=pair_count,
        instance_count=pair_count * len(sigmas),
        counts=counts,
        denominators=denominators,
        ratios=ratios,
        vulnerable=tuple(vulnerable),
        conductors=tuple((c.p, c.s, c.r, c.n, c.m) for c in conductors),
        prime_count=len(primes),
        prime_range=tuple(prime_range),
        sample=sample,
        seed=seed,
        small_order_bound=small_order_bound,
        small_set_bound=small_set_bound,
    )


def scan_json(report: ScanReport) -> str:
    """JSON document for one scan: conductor, q, roots, k-ideal factors."""
    c = report.conductor
    doc = {
        "conductor": {"p": c.p, "s": c.s, "r": c.r, "n": c.n, "degree": c.m},
        "q": report.q,
        "roots": [{"alpha": a, "order": o} for a, o in report.roots],
        "k_ideal": [{"k": k, "a": a, "order": o} for k, a, o in report.k_ideal],
    }
    return json.dumps(doc, indent=2)


def campaign_csv(summary: CampaignSummary) -> str:
    """Four attack rows by sigma columns; the criteria are sigma-independent."""
    lines = ["attack," + ",".join(f"sigma={s}" for s in summary.sigmas)]
    for row in ATTACK_ROWS:
        cell = f"{summary.ratios[row]:.6f}"
        lines.append(",".join([row] + [cell] * len(summary.sigmas)))
    return "\n".join(lines) + "\n"


def campaign_json(summary: CampaignSummary) -> str:
    """Full campaign record: configuration, counts, ratios, vulnerable list."""
    doc = {
        "family": summary.family,
        "conductors": [
            {"p": p, "s": s, "r": r, "n": n, "degree": m} for p, s, r, n, m in summary.conductors
        ],
        "prime_range": list(summary.prime_range),
        "prime_count": summary.prime_count,
        "sample": summary.sample,
        "seed": summary.seed,
        "sigmas": list(summary.sigmas),
        "k_max": summary.k_max,
        "small_order_bound": summary.small_order_bound,
        "small_set_bound": summary.small_set_bound,
        "pair_count": summary.pair_count,
        "instance_count": summary.instance_count,
        "counts": summary.counts,
        "denominators": summary.denominators,
        "ratios": summary.ratios,
        "vulnerable": list(summary.vulnerable),
    }
    return json.dumps(doc, indent=2)
