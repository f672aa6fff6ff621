"""Counting small solutions of x1^2 + alpha2 x2^2 + alpha3 x3^2 = 0 mod p^m.

S(alpha3) counts triples with |x_i| <= floor(N) and gcd(x3, q) = 1.  The full
histogram over all residues alpha3 is assembled from two exact ingredients:

    c_v = #{(x1, x2) in the box : x1^2 + alpha2 x2^2 = v mod q}
    d_t = #{x3 in the box : gcd(x3, q) = 1, x3^2 = t mod q}

so that S(alpha3) = sum_t d_t * c[(-alpha3 * t) mod q].  This is the same
triple count as direct enumeration (checked against it in the tests) at
O(N^2 + q * #t) cost instead of O(q * N^3), which keeps moduli near 10^5
under a minute.  All arithmetic is int64; nothing is approximated.

The main term M = K*L/phi(q) is kept as an exact rational next to its
approximations K_hat = 4N^2 (1 - 1/p)(1 - (-alpha2/p)/p), L_hat = 2(1 - 1/p)N
and the constant

    C_q = 8 (1 - 1/p) (1 - (-alpha2/p)/p),

whose prediction C_q N^3 / q drives the exceptional-set statistics.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import PrimePower, legendre

__all__ = [
    "ExperimentConfig",
    "SolutionHistogram",
    "MainTermReport",
    "ExceptionalSetReport",
    "count_solutions",
    "form_value_histogram",
    "solution_histogram",
    "coprime_pair_count",
    "coprime_x3_count",
    "c_q",
    "main_term",
    "exceptional_set",
    "n_threshold",
    "padic_small_value_count",
    "THRESHOLD_EXPONENTS",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: modulus q = p^m, fixed coefficient alpha2, box radius N.

    epsilon only enters the reporting of the N-window q^(11/24+eps) <= 2N
    <= q^(7/12); floor(N) = 0 is allowed and simply gives empty counts.
    """

    pp: PrimePower
    alpha2: int
    N: float
    epsilon: float = 0.0

    def __post_init__(self):
        if math.gcd(self.alpha2, self.pp.q) != 1:
            raise ValueError(f"alpha2 = {self.alpha2} shares a factor with q = {self.pp.q}")
        if self.N < 0:
            raise ValueError(f"N must be >= 0, got {self.N}")

    @property
    def floor_N(self) -> int:
        return math.floor(self.N)

    @property
    def in_theorem_window(self) -> bool:
        """Whether q^(11/24 + epsilon) <= 2N <= q^(7/12)."""
        q = self.pp.q
        return q ** (11 / 24 + self.epsilon) <= 2 * self.N <= q ** (7 / 12)


@dataclass
class SolutionHistogram:
    """S(alpha3) for every residue alpha3 mod q, exact integers."""

    counts: np.ndarray
    cfg: ExperimentConfig

    def total(self) -> int:
        return int(self.counts.sum())

    def expected_total(self) -> int:
        """(2 floor(N) + 1)^2 * L: each admissible triple lands on exactly one alpha3."""
        n = self.cfg.floor_N
        return (2 * n + 1) ** 2 * coprime_x3_count(self.cfg.pp.p, n)

    def to_csv(self, fh) -> None:
        """RFC-4180 rows: header alpha3,count then one row per residue."""
        fh.write("alpha3,count\n")
        for a3, c in enumerate(self.counts):
            fh.write(f"{a3},{int(c)}\n")


def count_solutions(cfg: ExperimentConfig, alpha3: int) -> int:
    """S(alpha3) by direct triple enumeration (the reference route, O(N^3))."""
    n = cfg.floor_N
    q, p = cfg.pp.q, cfg.pp.p
    a2 = cfg.alpha2 % q
    a3 = alpha3 % q
    count = 0
    for x3 in range(-n, n + 1):
        if x3 % p == 0:
            continue
        t = (a3 * x3 * x3) % q
        for x1 in range(-n, n + 1):
            s1 = (x1 * x1 + t) % q
            for x2 in range(-n, n + 1):
                if (s1 + a2 * x2 * x2) % q == 0:
                    count += 1
    return count


def form_value_histogram(pp: PrimePower, alpha2: int, N: float) -> np.ndarray:
    """c_v = #{(x1,x2): |xi| <= floor(N), x1^2 + alpha2 x2^2 = v mod q} for all v."""
    n = math.floor(N)
    q = pp.q
    c = np.zeros(q, dtype=np.int64)
    if n < 0:
        return c
    xs = np.arange(-n, n + 1, dtype=np.int64)
    sq = (xs * xs) % q
    a2sq = (alpha2 % q) * sq % q
    block = max(1, 2 ** 22 // len(xs))  # cap the 2-D slab at ~4M cells
    for i in range(0, len(xs), block):
        vals = (sq[i:i + block, None] + a2sq[None, :]) % q
        c += np.bincount(vals.ravel(), minlength=q)
    return c


def _x3_square_multiplicities(pp: PrimePower, n: int) -> np.ndarray:
    """d_t = #{x3: |x3| <= n, gcd(x3, q) = 1, x3^2 = t mod q}."""
    d = np.zeros(pp.q, dtype=np.int64)
    if n >= 1:
        x3 = np.arange(1, n + 1, dtype=np.int64)
        x3 = x3[x3 % pp.p != 0]
        if len(x3):
            d = 2 * np.bincount((x3 * x3) % pp.q, minlength=pp.q)  # x3 and -x3
    return d


def solution_histogram(cfg: ExperimentConfig, threads: int | None = None) -> SolutionHistogram:
    """The full map alpha3 -> S(alpha3) in one sweep.

    Optionally splits the t-loop over worker threads; each worker accumulates
    a private int64 histogram and the merge is an elementwise sum, so the
    result is byte-identical for any thread count.
    """
    q = cfg.pp.q
    n = cfg.floor_N
    d = _x3_square_multiplicities(cfg.pp, n)
    ts = np.nonzero(d)[0]
    if len(ts) == 0:
        return SolutionHistogram(np.zeros(q, dtype=np.int64), cfg)
    c = form_value_histogram(cfg.pp, cfg.alpha2, n)
    alpha = np.arange(q, dtype=np.int64)

    def accumulate(chunk: np.ndarray) -> np.ndarray:
        acc = np.zeros(q, dtype=np.int64)
        for t in chunk:
            acc += d[t] * c[(-(t * alpha)) % q]
        return acc

    nthreads = 1 if threads is None else max(1, threads)
    if nthreads == 1 or len(ts) < 2 * nthreads:
        counts = accumulate(ts)
    else:
        chunks = np.array_split(ts, nthreads)
        with ThreadPoolExecutor(max_workers=nthreads) as ex:
            parts = list(ex.map(accumulate, chunks))
        counts = np.sum(parts, axis=0)
    return SolutionHistogram(counts, cfg)


def coprime_x3_count(p: int, n: int) -> int:
    """L = #{|x3| <= n : p does not divide x3} = 2(n - floor(n/p))."""
    return 2 * (n - n // p)


def _residue_box_counts(p: int, n: int) -> np.ndarray:
    """cnt[r] = #{x in [-n, n] : x = r mod p}."""
    r = np.arange(p, dtype=np.int64)
    return (n - r) // p + (n + r) // p + 1


def coprime_pair_count(p: int, alpha2: int, n: int) -> int:
    """K = #{(x1,x2): |xi| <= n, gcd(x1^2 + alpha2 x2^2, p) = 1}, exactly.

    Counted through residue classes: x1^2 + alpha2 x2^2 = 0 mod p forces
    (x1, x2) = (0, 0) mod p when -alpha2 is a non-residue, and x1 = +-s x2
    mod p with s^2 = -alpha2 otherwise.  O(p) instead of O(N^2).
    """
    cnt = _residue_box_counts(p, n)
    total = (2 * n + 1) ** 2
    bad = int(cnt[0]) ** 2
    if legendre(-alpha2, p) == 1:
        s = _sqrt_mod_p(-alpha2 % p, p)
        r = np.arange(1, p, dtype=np.int64)
        bad += int(((cnt[s * r % p] + cnt[(p - s) * r % p]) * cnt[r]).sum())
    return total - bad


def _sqrt_mod_p(t: int, p: int) -> int:
    """Smallest s in [1, p) with s^2 = t mod p; t must be a nonzero residue."""
    sq = (np.arange(p, dtype=np.int64) ** 2) % p
    hits = np.nonzero(sq == t % p)[0]
    if len(hits) == 0 or hits[0] == 0:
        raise ValueError(f"{t} is not a nonzero square mod {p}")
    return int(hits[0])


def c_q(p: int, alpha2: int) -> Fraction:
    """C_q = 8 (1 - 1/p)(1 - (-alpha2/p)/p), as an exact rational."""
    chi = legendre(-alpha2, p)
    return 8 * Fraction(p - 1, p) * (1 - Fraction(chi, p))


@dataclass
class MainTermReport:
    K: int
    L: int
    M: Fraction
    K_hat: float
    L_hat: float
    C_q: Fraction
    predicted: float

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "L": self.L,
            "M": f"{self.M.numerator}/{self.M.denominator}",
            "K_hat": self.K_hat,
            "L_hat": self.L_hat,
            "C_q": f"{self.C_q.numerator}/{self.C_q.denominator}",
            "predicted": self.predicted,
        }


def main_term(cfg: ExperimentConfig) -> MainTermReport:
    """Exact K, L, M = K*L/phi(q) plus the closed approximations."""
    p, q, phi = cfg.pp.p, cfg.pp.q, cfg.pp.phi
    n = cfg.floor_N
    K = coprime_pair_count(p, cfg.alpha2 % p, n)
    L = coprime_x3_count(p, n)
    M = Fraction(K * L, phi)
    chi = legendre(-cfg.alpha2, p)
    K_hat = 4 * cfg.N ** 2 * (1 - 1 / p) * (1 - chi / p)
    L_hat = 2 * (1 - 1 / p) * cfg.N
    cq = c_q(p, cfg.alpha2)
    predicted = float(cq) * cfg.N ** 3 / q
    return MainTermReport(K, L, M, K_hat, L_hat, cq, predicted)


@dataclass
class ExceptionalSetReport:
    """Coprime alpha3 whose count strays from C_q N^3 / q by more than delta."""

    indices: list[int]
    fraction: float
    delta: float
    predicted: float
    tested: int
    rel_err_min: float
    rel_err_max: float
    rel_err_mean: float

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "predicted": self.predicted,
            "tested": self.tested,
            "exceptional_count": len(self.indices),
            "fraction": self.fraction,
            "rel_err_min": self.rel_err_min,
            "rel_err_max": self.rel_err_max,
            "rel_err_mean": self.rel_err_mean,
            "indices": self.indices,
        }


def exceptional_set(
    cfg: ExperimentConfig,
    delta: float,
    histogram: SolutionHistogram | None = None,
    sample: int | None = None,
    seed: int = 0,
    threads: int | None = None,
) -> ExceptionalSetReport:
    """All coprime alpha3 with |S(alpha3) - C_q N^3/q| > delta * C_q N^3/q.

    The histogram always covers every residue; `sample` only restricts which
    coprime alpha3 enter the report (seeded, reproducible), for very large q.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    hist = histogram if histogram is not None else solution_histogram(cfg, threads=threads)
    q, p = cfg.pp.q, cfg.pp.p
    predicted = float(c_q(p, cfg.alpha2)) * cfg.N ** 3 / q
    coprime = np.nonzero(np.arange(q) % p != 0)[0]
    if sample is not None and sample < len(coprime):
        rng = np.random.default_rng(seed)
        coprime = np.sort(rng.choice(coprime, size=sample, replace=False))
    rel = np.abs(hist.counts[coprime] / predicted - 1.0)
    mask = rel > delta
    return ExceptionalSetReport(
        indices=[int(a) for a in coprime[mask]],
        fraction=float(mask.mean()),
        delta=delta,
        predicted=predicted,
        tested=len(coprime),
        rel_err_min=float(rel.min()),
        rel_err_max=float(rel.max()),
        rel_err_mean=float(rel.mean()),
    )


THRESHOLD_EXPONENTS = {
    "unconditional": Fraction(11, 24),
    "fixed_prime": Fraction(11, 25),
    "lindelof": Fraction(1, 3),
}


def n_threshold(pp: PrimePower, epsilon: float, mode: str) -> tuple[float, float]:
    """(q^(e+eps)/2, q^(7/12)/2) with e = 11/24, 11/25 or 1/3 per mode."""
    if mode not in THRESHOLD_EXPONENTS:
        raise ValueError(f"mode must be one of {sorted(THRESHOLD_EXPONENTS)}, got {mode!r}")
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    e = float(THRESHOLD_EXPONENTS[mode])
    n_min = pp.q ** (e + epsilon) / 2
    n_max = pp.q ** (7 / 12) / 2
    if n_min > n_max:
        raise ValueError(
            f"empty N-window for q = {pp.q}, epsilon = {epsilon}, mode = {mode}:"
            f" {n_min:.6g} > {n_max:.6g}"
        )
    return n_min, n_max


def _congruence_exponent(p: int, gamma: float, N: int) -> int:
    """Smallest m >= 0 with p^m >= N^gamma, compared exactly.

    |Q|_p <= N^(-gamma) holds iff the p-adic valuation v of Q satisfies
    p^v >= N^gamma, i.e. iff Q = 0 mod p^m.  gamma is taken at its exact
    binary-float value u/w so the comparison p^(m*w) >= N^u is pure integers.
    """
    g = Fraction(gamma)
    if g <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    u, w = g.numerator, g.denominator
    target = N ** u
    m = 0
    while p ** (m * w) < target:
        m += 1
    return m


def padic_small_value_count(p: int, gamma: float, N: int, alpha2: int, alpha3: int) -> int:
    """#{(x1,x2,x3): |xi| <= N, gcd(x3,p)=1, |x1^2+alpha2 x2^2+alpha3 x3^2|_p <= N^-gamma}.

    Reduces to a congruence count mod p^m: |s|_p <= p^(-m) iff s = 0 mod p^m.
    m = 0 (possible only for N = 1) means no condition at all.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if math.gcd(alpha2 * alpha3, p) != 1:
        raise ValueError(f"alpha2 * alpha3 must be coprime to p = {p}")
    m = _congruence_exponent(p, gamma, N)
    if m == 0:
        return (2 * N + 1) ** 2 * coprime_x3_count(p, N)
    cfg = ExperimentConfig(PrimePower(p, m), alpha2, float(N))
    return count_solutions(cfg, alpha3)
