"""Sampling, root scans, the distinguisher, and the campaign aggregator."""

import json
from math import gcd

import numpy as np
import pytest

from realcyclo.attacks import (
    PRESETS,
    PlweParams,
    PlweSample,
    campaign_csv,
    campaign_json,
    cyclotomic_poly,
    discrete_gaussian,
    distinguisher,
    find_k_ideal_factors,
    find_roots,
    preset_check,
    run_campaign,
    sample_plwe,
    scan_json,
    scan_pair,
    standard_conductor_set,
)
from realcyclo.chebyshev import poly_mul
from realcyclo.errors import DomainMismatch, InvalidK, NotARoot
from realcyclo.finitefield import PrimeField
from realcyclo.minpoly import Conductor, build_min_poly
from realcyclo.ring import INTEGER, RingElement, mul_fast, random_element

C19 = Conductor(19, 2, 2)
F2887 = PrimeField(2887)


def horner_mod(coeffs, x: int, q: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % q
    return acc


def order_mod(x: int, q: int) -> int:
    acc, k = x % q, 1
    while acc != 1:
        acc = acc * x % q
        k += 1
    return k


# --- discrete gaussian -------------------------------------------------------


def test_discrete_gaussian_zero_switch():
    rng = np.random.default_rng(0)
    assert not discrete_gaussian(1e-9, 50, rng).any()
    assert not discrete_gaussian(0.15, 50, rng).any()  # 6 sigma rounds to 0


def test_discrete_gaussian_moments_and_cut():
    rng = np.random.default_rng(42)
    draws = discrete_gaussian(3.0, 100_000, rng)
    assert np.max(np.abs(draws)) <= 18
    assert abs(float(draws.mean())) <= 5.0 * 3.0 / np.sqrt(100_000)
    assert 2.9 <= float(draws.std()) <= 3.1


def test_discrete_gaussian_deterministic():
    a = discrete_gaussian(2.0, 200, np.random.default_rng(7))
    b = discrete_gaussian(2.0, 200, np.random.default_rng(7))
    assert np.array_equal(a, b)


# --- plwe sampling -----------------------------------------------------------


def test_sample_plwe_tiny_sigma_is_exact_product():
    c = Conductor(5, 1, 3)
    fq = PrimeField(193)  # 193 = 1 mod 64, so the DCT kernel cross-checks
    rng = np.random.default_rng(1)
    s = random_element(c, fq, rng)
    for smp in sample_plwe(PlweParams(c, fq, 1e-9), s, 4, rng_seed=2):
        assert smp.b.coeffs == mul_fast(smp.a, s).coeffs


def test_sample_plwe_zero_secret_exposes_error():
    c = Conductor(5, 1, 2)
    fq = PrimeField(97)
    zero = RingElement(c, (0,) * c.m, fq)
    for smp in sample_plwe(PlweParams(c, fq, 2.0), zero, 6, rng_seed=3):
        lift = [min(x, 97 - x) for x in smp.b.to_power()]
        assert max(lift) <= 12  # |e| <= 6 sigma


def test_sample_plwe_guards():
    c = Conductor(5, 1, 2)
    fq = PrimeField(97)
    with pytest.raises(ValueError):
        PlweParams(c, fq, 0.0)
    params = PlweParams(c, fq, 1.0)
    rng = np.random.default_rng(0)
    with pytest.raises(DomainMismatch):
        sample_plwe(params, random_element(c, INTEGER, rng), 1)
    with pytest.raises(DomainMismatch):
        sample_plwe(params, random_element(c, PrimeField(101), rng), 1)
    with pytest.raises(DomainMismatch):
        sample_plwe(params, random_element(Conductor(5, 1, 3), fq, rng), 1)


# --- root scan ---------------------------------------------------------------


def test_find_roots_psi5_mod_11():
    assert find_roots(build_min_poly(Conductor(5, 1, 0)), PrimeField(11)) == [
        (3, 5),
        (7, 10),
    ]


def test_find_roots_known_weak_pair():
    roots = find_roots(build_min_poly(C19), F2887)
    assert (698, 3) in roots
    assert roots[0] == (698, 3)  # sorted by order first


def test_find_roots_sound_and_complete():
    psi = build_min_poly(Conductor(3, 2, 0))
    for q in (17, 53, 107, 269):
        fq = PrimeField(q)
        got = find_roots(psi, fq)
        coeffs = [c % q for c in psi.power]
        want = sorted(
            ((a, order_mod(a, q)) for a in range(1, q) if horner_mod(coeffs, a, q) == 0),
            key=lambda t: (t[1], t[0]),
        )
        assert got == want


# --- k-ideal scan ------------------------------------------------------------


def test_k_ideal_examples():
    psi24 = build_min_poly(Conductor(3, 1, 3))  # x^4 - 4 x^2 + 1
    assert find_k_ideal_factors(psi24, PrimeField(11), 3) == [(2, 3, 10), (2, 4, 10)]
    psi20 = build_min_poly(Conductor(5, 1, 2))  # x^4 - 5 x^2 + 5, pure x^4 mod 5
    assert find_k_ideal_factors(psi20, PrimeField(5), 3) == [(2, 0, 0), (3, 0, 0)]


def test_k_ideal_hits_divide_by_reconstruction():
    psi = build_min_poly(C19)
    q = 2887
    coeffs = [c % q for c in psi.power]
    hits = find_k_ideal_factors(psi, F2887, 4)
    assert (2, 699, 3) in hits  # 699 = -698^2 mod 2887, order of 2188 is 3
    for k, a, o in hits:
        # rebuild the quotient by descending synthetic division, then verify
        # the convolution reproduces psi exactly mod q
        quot = [0] * (len(coeffs) - k)
        rem = list(coeffs)
        for j in range(len(rem) - 1, k - 1, -1):
            quot[j - k] = rem[j]
            rem[j - k] = (rem[j - k] - rem[j] * a) % q
            rem[j] = 0
        back = poly_mul(quot, [a] + [0] * (k - 1) + [1])
        assert [x % q for x in back] == coeffs
        assert o == (order_mod(q - a, q) if a else 0)


def test_k_ideal_completeness_small_prime():
    psi = build_min_poly(Conductor(3, 1, 3))
    q = 11
    coeffs = [c % q for c in psi.power]
    got = {(k, a) for k, a, _ in find_k_ideal_factors(psi, PrimeField(q), 3)}
    want = set()
    for k in (2, 3):
        for a in range(q):
            rem = list(coeffs)
            for j in range(len(rem) - 1, k - 1, -1):
                rem[j - k] = (rem[j - k] - rem[j] * a) % q
                rem[j] = 0
            if not any(rem[:k]):
                want.add((k, a))
    assert got == want


def test_k_ideal_guards():
    psi = build_min_poly(Conductor(5, 1, 2))  # degree 4
    with pytest.raises(InvalidK):
        find_k_ideal_factors(psi, PrimeField(11), 1)
    with pytest.raises(InvalidK):
        find_k_ideal_factors(psi, PrimeField(11), 5)
    with pytest.raises(InvalidK):
        find_k_ideal_factors(psi, PrimeField(11), 4)  # k_max must stay below m


# --- distinguisher -----------------------------------------------------------


def test_distinguisher_detects_plwe():
    params = PlweParams(C19, F2887, 0.01)
    for trial in range(12):
        rng = np.random.default_rng(1000 + trial)
        s = random_element(C19, F2887, rng)
        samples = sample_plwe(params, s, 6, rng_seed=2000 + trial)
        assert distinguisher(samples, 698, 3, 0.01) == "plwe"


def test_distinguisher_rejects_uniform():
    for trial in range(12):
        rng = np.random.default_rng(3000 + trial)
        fake = [
            PlweSample(random_element(C19, F2887, rng), random_element(C19, F2887, rng))
            for _ in range(6)
        ]
        assert distinguisher(fake, 698, 3, 0.01) == "uniform"


def test_distinguisher_inconclusive_when_tau_swallows_q():
    rng = np.random.default_rng(1)
    s = random_element(C19, F2887, rng)
    samples = sample_plwe(PlweParams(C19, F2887, 40.0), s, 2, rng_seed=5)
    assert distinguisher(samples, 698, 3, 40.0) == "inconclusive"


def test_distinguisher_guards():
    with pytest.raises(ValueError):
        distinguisher([], 698, 3, 0.01)
    c5 = Conductor(5, 1, 0)
    fq = PrimeField(11)
    rng = np.random.default_rng(2)
    s = random_element(c5, fq, rng)
    samples = sample_plwe(PlweParams(c5, fq, 0.01), s, 3, rng_seed=6)
    with pytest.raises(NotARoot):
        distinguisher(samples, 2, 3, 0.01)  # psi_5(2) = 5, not 0 mod 11
    a = RingElement(c5, (1, 2), INTEGER)
    with pytest.raises(DomainMismatch):
        distinguisher([PlweSample(a, a)], 3, 5, 0.01)
    other = sample_plwe(PlweParams(Conductor(5, 1, 2), PrimeField(11), 0.01),
                        random_element(Conductor(5, 1, 2), PrimeField(11), rng),
                        1, rng_seed=7)
    with pytest.raises(DomainMismatch):
        distinguisher(samples + other, 3, 5, 0.01)


# --- scans, presets, cyclotomic control --------------------------------------


def test_scan_pair_and_json_schema():
    rep = scan_pair(Conductor(3, 1, 3), 11, k_max=3)
    assert rep.k_ideal == ((2, 3, 10), (2, 4, 10))
    assert rep.smallest_kideal_order == 10
    doc = json.loads(scan_json(rep))
    assert doc["conductor"] == {"p": 3, "s": 1, "r": 3, "n": 24, "degree": 4}
    assert doc["q"] == 11
    assert doc["k_ideal"] == [{"k": 2, "a": 3, "order": 10}, {"k": 2, "a": 4, "order": 10}]
    assert all(set(r) == {"alpha", "order"} for r in doc["roots"])


def test_scan_pair_weak_prime_summary_fields():
    rep = scan_pair(C19, 2887)
    assert rep.smallest_root_order == 3
    assert rep.smallest_kideal_order == 3


def test_preset_check_ml_kem_clean():
    rep = preset_check("ml-kem")
    assert rep.conductor == Conductor(5, 1, 8) and rep.q == 3329
    assert rep.roots == () and rep.k_ideal == ()
    with pytest.raises(ValueError):
        preset_check("kyber")
    assert set(PRESETS) == {"ml-kem", "ml-dsa", "fn-dsa-512", "fn-dsa-1024"}


def test_cyclotomic_poly_known_values():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(2) == (1, 1)
    assert cyclotomic_poly(9) == (1, 0, 0, 1, 0, 0, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
    c105 = cyclotomic_poly(105)
    assert c105[7] == -2 and min(c105) == -2


def test_cyclotomic_poly_degree_and_product_law():
    for n in range(1, 121):
        deg = len(cyclotomic_poly(n)) - 1
        assert deg == sum(1 for t in range(1, n + 1) if gcd(t, n) == 1)
    for n in (6, 12, 30, 105):
        prod = [1]
        for d in range(1, n + 1):
            if n % d == 0:
                prod = poly_mul(prod, list(cyclotomic_poly(d)))
        assert prod == [-1] + [0] * (n - 1) + [1]  # x^n - 1


def test_standard_conductor_set():
    s = standard_conductor_set()
    assert len(s) == 24
    assert all(256 <= c.m <= 512 and c.r >= 2 for c in s)
    assert C19 in s and Conductor(5, 1, 9) in s
    ns = [c.n for c in s]
    assert ns == sorted(ns)


# --- campaign ----------------------------------------------------------------


def test_campaign_single_weak_prime():
    summ = run_campaign(prime_range=(2880, 2890), workers=1)
    assert summ.prime_count == 1 and summ.pair_count == 24
    assert summ.counts == {
        "small-set-roots": 0,
        "small-error-roots": 1,
        "small-set-kideal": 0,
        "small-error-kideal": 1,
    }
    assert summ.denominators["small-error-kideal"] == 3 * 24
    assert summ.ratios["small-error-roots"] == pytest.approx(1 / 24)
    hits = {v["attack"]: v for v in summ.vulnerable}
    assert hits["small-error-roots"]["q"] == 2887
    assert hits["small-error-roots"]["hits"] == [{"alpha": 698, "order": 3}]
    assert hits["small-error-kideal"]["hits"] == [{"k": 2, "a": 699, "order": 3}]
    assert summ.instance_count == 24 * len(summ.sigmas)


def test_campaign_outputs_and_determinism():
    kwargs = dict(
        conductor_set=[C19],
        prime_range=(2048, 2100),
        sample=3,
        seed=7,
        workers=1,
    )
    one = run_campaign(**kwargs)
    two = run_campaign(**kwargs)
    assert one.prime_count == 3 and one.pair_count == 3
    assert campaign_json(one) == campaign_json(two)
    csv = campaign_csv(one)
    lines = csv.strip().split("\n")
    assert lines[0] == "attack," + ",".join(f"sigma={s}" for s in one.sigmas)
    assert len(lines) == 5
    for row in lines[1:]:
        cells = row.split(",")
        assert len(cells) == 1 + len(one.sigmas)
        assert len(set(cells[1:])) == 1  # criteria are sigma-independent
    doc = json.loads(campaign_json(one))
    assert doc["sample"] == 3 and doc["seed"] == 7
    assert doc["prime_count"] == 3
