"""Command-line workbench over the library modules.

Subcommands: minpoly (print Psi_n), mul (ring product in both bases),
bench (fast vs schoolbook timing CSV), cond (condition-number sweep CSV),
scan (root and k-ideal attacks, single pair or campaign), sample (PLWE
sample generator). Exit codes: 0 success, 1 validation error, 2 internal
assertion failure. Coefficient lists read and print ascending, constant
term first. REALCYCLO_THREADS caps the campaign worker pool.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from .attacks import (
    PRESETS,
    PlweParams,
    campaign_csv,
    campaign_json,
    preset_check,
    run_campaign,
    sample_plwe,
    scan_json,
    scan_pair,
)
from .dct import OpCount
from .embedding import CosineMatrix, cosine_condition, embedding_condition
from .errors import ModulusUnsuitable, NoSuchRoot, RealcycloError
from .finitefield import CrtModulus, PrimeField, is_prime, prime_congruent_below
from .minpoly import Conductor, build_min_poly, conductors_up_to
from .ring import (
    INTEGER,
    RingElement,
    UnreducedProduct,
    mul_fast,
    mul_schoolbook,
    random_element,
    reduce,
)

# dense inverse in the embedding sweep; keeps `cond` interactive
_COND_N_CAP = 4000
_BENCH_M_CAP = 4096


@dataclass(frozen=True)
class Config:
    """Validated invocation state shared by the handlers."""

    subcommand: str
    conductor: Conductor = None
    modulus: str = None
    seed: int = None
    out_path: str = None
    csv_path: str = None
    as_json: bool = False


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; 2 is reserved for internal failures."""

    def error(self, message):
        raise _Usage(message)


def _conductor_flags(p: argparse.ArgumentParser, required: bool = True):
    p.add_argument("--p", type=int, required=required, help="odd prime")
    p.add_argument("--s", type=int, required=required, help="exponent of p, >= 1")
    p.add_argument("--r", type=int, required=required, help="exponent of 2, 0 or >= 2")


def _build_parser() -> _Parser:
    top = _Parser(prog="realcyclo", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="subcommand", required=True)

    mp = sub.add_parser("minpoly", help="print Psi_n in the V or power basis")
    _conductor_flags(mp)
    mp.add_argument("--basis", choices=("v", "power"), default="v")
    mp.add_argument("--json", action="store_true")

    ml = sub.add_parser("mul", help="multiply two elements, print both bases")
    _conductor_flags(ml)
    ml.add_argument("--domain", default="int", help="int, fq:Q, or crt")
    ml.add_argument("--a", help="power-basis coefficients, inline or @file")
    ml.add_argument("--b", help="power-basis coefficients, inline or @file")
    ml.add_argument("--seed", type=int, default=0, help="seed for random inputs")
    ml.add_argument("--json", action="store_true")

    be = sub.add_parser("bench", help="fast vs schoolbook timings as CSV")
    be.add_argument(
        "--sizes", type=int, nargs="+", required=True, help="degrees m, powers of two"
    )
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--csv", dest="csv_path", help="also write the table here")

    co = sub.add_parser("cond", help="condition-number sweep as CSV")
    co.add_argument("--max-n", type=int, default=1500)
    co.add_argument("--csv", dest="csv_path", help="also write the table here")

    sc = sub.add_parser("scan", help="root and k-ideal attack scans")
    _conductor_flags(sc, required=False)
    sc.add_argument("--q", type=int, help="modulus for a single-pair scan")
    sc.add_argument("--preset", choices=sorted(PRESETS), help="named parameter set")
    sc.add_argument("--campaign", action="store_true", help="scan a conductor family")
    sc.add_argument("--family", choices=("maximal-real", "cyclotomic"),
                    default="maximal-real")
    sc.add_argument("--qmin", type=int, default=2048)
    sc.add_argument("--qmax", type=int, default=4192)
    sc.add_argument("--sample", type=int, help="draw this many primes instead of all")
    sc.add_argument("--seed", type=int, help="seed for the prime sample")
    sc.add_argument("--sigmas", type=float, nargs="+", help="error widths for the CSV")
    sc.add_argument("--k-max", type=int, default=4)
    sc.add_argument("--out", dest="out_path", help="write campaign JSON here")
    sc.add_argument("--csv", dest="csv_path", help="write campaign CSV here")
    sc.add_argument("--json", action="store_true")

    sa = sub.add_parser("sample", help="draw PLWE samples (a, a*s + e)")
    _conductor_flags(sa)
    sa.add_argument("--q", type=int, required=True)
    sa.add_argument("--sigma", type=float, required=True)
    sa.add_argument("--count", type=int, default=4)
    sa.add_argument("--seed", type=int)
    sa.add_argument("--json", action="store_true")

    return top


# --- shared parsing helpers --------------------------------------------------


def _prime_field(q: int) -> PrimeField:
    if q < 3 or q % 2 == 0 or not is_prime(q):
        raise ValueError(f"q = {q} is not an odd prime")
    return PrimeField(q)


def _pad_size(m: int) -> int:
    n = 1
    while n < 2 * m:
        n <<= 1
    return n


def _parse_domain(text: str, c: Conductor):
    if text == "int":
        return INTEGER
    if text == "crt":
        M = 4 * _pad_size(c.m)
        q1, q2 = prime_congruent_below(M, 1 << 31, count=2)
        return CrtModulus.build(M, q1, q2)
    if text.startswith("fq:"):
        return _prime_field(int(text[3:]))
    raise ValueError(f"unknown domain {text!r}; expected int, fq:Q, or crt")


def _coeff_list(text: str) -> list:
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    return [int(tok) for tok in text.replace(",", " ").split()]


def _element(text, c: Conductor, domain, rng) -> RingElement:
    if text is None:
        return random_element(c, domain, rng)
    return RingElement.from_power(c, _coeff_list(text), domain)


def _ascending(coeffs) -> str:
    vals = [int(x) for x in coeffs]
    while len(vals) > 1 and vals[-1] == 0:
        vals.pop()
    return " ".join(str(v) for v in vals)


def _write(path: str, text: str):
    with open(path, "w") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


# --- handlers ----------------------------------------------------------------


def _cmd_minpoly(cfg: Config, ns) -> int:
    c = cfg.conductor
    poly = build_min_poly(c)
    if ns.basis == "power":
        coeffs = [int(x) for x in poly.power]
        if cfg.as_json:
            print(json.dumps({"p": c.p, "s": c.s, "r": c.r, "n": c.n, "m": c.m,
                              "basis": "power", "coeffs": coeffs}))
        else:
            print(" ".join(str(x) for x in coeffs))
    else:
        pairs = [[int(i), int(sign)] for i, sign in poly.sparse_v]
        if cfg.as_json:
            print(json.dumps({"p": c.p, "s": c.s, "r": c.r, "n": c.n, "m": c.m,
                              "basis": "v", "coeffs": pairs}))
        else:
            print(" ".join(f"{i}:{sign:+d}" for i, sign in pairs))
    return 0


def _cmd_mul(cfg: Config, ns) -> int:
    c = cfg.conductor
    domain = _parse_domain(ns.domain, c)
    rng = np.random.default_rng(cfg.seed)
    a = _element(ns.a, c, domain, rng)
    b = _element(ns.b, c, domain, rng)
    prod = mul_schoolbook(a, b)
    try:
        fast = mul_fast(a, b)
    except (NoSuchRoot, ModulusUnsuitable):
        fast = None  # modulus has no usable root of unity; schoolbook stands alone
    if fast is not None:
        assert fast.coeffs == prod.coeffs, "fast and schoolbook kernels disagree"
    power = prod.to_power()
    if cfg.as_json:
        print(json.dumps({"n": c.n, "m": c.m, "domain": ns.domain,
                          "v": [int(x) for x in prod.coeffs],
                          "power": [int(x) for x in power]}))
    else:
        print("v: " + _ascending(prod.coeffs))
        print("power: " + _ascending(power))
    return 0


def _bench_conductor(m: int) -> Conductor:
    if m < 2 or m & (m - 1):
        raise ValueError(f"bench sizes must be powers of two >= 2, got {m}")
    if m > _BENCH_M_CAP:
        raise ValueError(f"bench size {m} exceeds the cap {_BENCH_M_CAP}")
    return Conductor(5, 1, 0) if m == 2 else Conductor(5, 1, m.bit_length() - 1)


def _bench_modulus(sizes) -> PrimeField:
    # one q = 1 mod every padded size keeps the rows comparable
    M = 4 * _pad_size(max(sizes))
    q = M + 1
    while not is_prime(q):
        q += M
    return PrimeField(q)


def _best_ns(fn, reps: int) -> int:
    fn()  # warm caches and twiddle tables before timing
    best = None
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        dt = time.perf_counter_ns() - t0
        if best is None or dt < best:
            best = dt
    return best


def _cmd_bench(cfg: Config, ns) -> int:
    sizes = sorted(set(ns.sizes))
    conductors = [_bench_conductor(m) for m in sizes]
    fq = _bench_modulus(sizes)
    rng = np.random.default_rng(cfg.seed)
    lines = ["m,ns_fast,ns_schoolbook,additions_in_reduce"]
    for m, c in zip(sizes, conductors):
        a = random_element(c, fq, rng)
        b = random_element(c, fq, rng)
        reps = 5 if m >= 1024 else 11
        t_fast = _best_ns(lambda: mul_fast(a, b), reps)
        t_school = _best_ns(lambda: mul_schoolbook(a, b), reps)
        conv = np.convolve(
            np.array(a.coeffs, dtype=np.int64), np.array(b.coeffs, dtype=np.int64)
        ) % fq.q
        ops = OpCount()
        reduce(UnreducedProduct(c, tuple(int(x) for x in conv), fq), ops)
        lines.append(f"{m},{t_fast},{t_school},{ops.add}")
    table = "\n".join(lines)
    print(table)
    if cfg.csv_path:
        _write(cfg.csv_path, table)
    return 0


def _cmd_cond(cfg: Config, ns) -> int:
    if not 5 <= ns.max_n <= _COND_N_CAP:
        raise ValueError(f"--max-n must be in [5, {_COND_N_CAP}]")
    lines = ["n,m,N,kappa2_C,kappaF_C,kappaF_M_sq,ratio"]
    for c in conductors_up_to(ns.max_n):
        kappa2, kappa_f = cosine_condition(CosineMatrix.build(c))
        kappa_m_sq, ratio = embedding_condition(c)
        lines.append(
            f"{c.n},{c.m},{c.n_grid},{kappa2:.12g},{kappa_f:.12g},"
            f"{kappa_m_sq:.12g},{ratio:.12g}"
        )
    table = "\n".join(lines)
    print(table)
    if cfg.csv_path:
        _write(cfg.csv_path, table)
    return 0


def _scan_text(report) -> str:
    c = report.conductor
    lines = [
        f"conductor: p={c.p} s={c.s} r={c.r} n={c.n} degree={c.m}",
        f"q: {report.q}",
    ]
    if report.roots:
        lines += [f"root: alpha={a} order={o}" for a, o in report.roots]
    else:
        lines.append("roots: none")
    if report.k_ideal:
        lines += [f"k-ideal: k={k} a={a} order={o}" for k, a, o in report.k_ideal]
    else:
        lines.append("k-ideal: none")
    return "\n".join(lines)


def _cmd_scan(cfg: Config, ns) -> int:
    modes = [ns.preset is not None, ns.campaign, ns.q is not None]
    if sum(modes) != 1:
        raise ValueError("choose exactly one of --preset, --campaign, or --p/--s/--r/--q")

    if ns.campaign:
        kwargs = dict(
            prime_range=(ns.qmin, ns.qmax),
            k_max=ns.k_max,
            sample=ns.sample,
            seed=cfg.seed,
            family=ns.family,
        )
        if ns.sigmas:
            kwargs["sigmas"] = tuple(ns.sigmas)
        summary = run_campaign(**kwargs)
        text = campaign_json(summary)
        if cfg.out_path:
            _write(cfg.out_path, text)
        else:
            print(text)
        if cfg.csv_path:
            _write(cfg.csv_path, campaign_csv(summary))
        return 0

    if ns.preset is not None:
        report = preset_check(ns.preset)
    else:
        if cfg.conductor is None:
            raise ValueError("a single-pair scan needs --p, --s, --r, and --q")
        _prime_field(ns.q)
        report = scan_pair(cfg.conductor, ns.q, k_max=ns.k_max)
    print(scan_json(report) if cfg.as_json else _scan_text(report))
    return 0


def _cmd_sample(cfg: Config, ns) -> int:
    c = cfg.conductor
    fq = _prime_field(ns.q)
    if not 1 <= ns.count <= 1 << 16:
        raise ValueError(f"--count must be in [1, {1 << 16}]")
    params = PlweParams(c, fq, ns.sigma)
    rng = np.random.default_rng(cfg.seed)
    secret = random_element(c, fq, rng)
    draw_seed = None if cfg.seed is None else cfg.seed + 1
    samples = sample_plwe(params, secret, ns.count, rng_seed=draw_seed)
    if cfg.as_json:
        print(json.dumps({
            "p": c.p, "s": c.s, "r": c.r, "n": c.n, "q": fq.q,
            "sigma": ns.sigma, "seed": cfg.seed,
            "secret": [int(x) for x in secret.coeffs],
            "samples": [{"a": [int(x) for x in sm.a.coeffs],
                         "b": [int(x) for x in sm.b.coeffs]} for sm in samples],
        }, indent=2))
    else:
        print(f"n={c.n} m={c.m} q={fq.q} sigma={ns.sigma}")
        print("s: " + " ".join(str(x) for x in secret.coeffs))
        for sm in samples:
            print("a: " + " ".join(str(x) for x in sm.a.coeffs))
            print("b: " + " ".join(str(x) for x in sm.b.coeffs))
    return 0


_HANDLERS = {
    "minpoly": _cmd_minpoly,
    "mul": _cmd_mul,
    "bench": _cmd_bench,
    "cond": _cmd_cond,
    "scan": _cmd_scan,
    "sample": _cmd_sample,
}


def _configure(ns) -> Config:
    conductor = None
    p, s, r = getattr(ns, "p", None), getattr(ns, "s", None), getattr(ns, "r", None)
    if p is not None or s is not None or r is not None:
        if None in (p, s, r):
            raise ValueError("--p, --s, and --r must be given together")
        conductor = Conductor(p, s, r)
    return Config(
        subcommand=ns.subcommand,
        conductor=conductor,
        modulus=getattr(ns, "domain", None),
        seed=getattr(ns, "seed", None),
        out_path=getattr(ns, "out_path", None),
        csv_path=getattr(ns, "csv_path", None),
        as_json=getattr(ns, "json", False),
    )


def dispatch(argv=None) -> int:
    try:
        ns = _build_parser().parse_args(argv)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        cfg = _configure(ns)
        return _HANDLERS[cfg.subcommand](cfg, ns)
    except (RealcycloError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"internal: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
