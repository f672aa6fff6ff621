"""Dirichlet characters mod p^m, quadratic Gauss sums, and completed sums.

The unit group mod an odd prime power is cyclic, so a character is just an
index j in [0, phi(q)) against a fixed primitive root g:

    chi_j(g^t) = e(j*t/phi(q)),    chi_j(n) = 0 when p | n.

Index 0 is the principal character; index phi(q)/2 is the unique quadratic
character, which coincides with the Legendre symbol n -> (n/p).  A discrete
log table of size q gives O(1) evaluation with a single complex exponential.

Quadratic Gauss sums G(a,b;p) = sum_n e((a n^2 + b n)/p) carry both a direct
summation route and the closed evaluation

    G(a,b;p) = e(-(4a)^{-1} b^2 / p) * (a/p) * tau_p,
    tau_p    = sqrt(p) for p = 1 mod 4,  i*sqrt(p) for p = 3 mod 4,

and the twisted double sum over a Legendre form completes to

    sum_{a1,a2 mod p} ((a1^2 + alpha2 a2^2)/p) e((h1 a1 + h2 a2)/p)
        = (-(alpha2 h1^2 + h2^2)/p) * tau_p^2.

Both routes are kept so every identity can be checked numerically; batch
suite runners (FFT-evaluated, identical sums) cover whole prime ranges.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import PrimePower, is_odd_prime, legendre, mod_inverse, odd_primes_upto, primitive_root

__all__ = [
    "DirichletCharacter",
    "enumerate_characters",
    "char_eval",
    "char_sum",
    "signed_char_sum",
    "max_nonprincipal_char_sum",
    "all_signed_char_sums",
    "tau_p",
    "tau_p_closed",
    "gauss_sum_direct",
    "gauss_sum_closed",
    "legendre_twisted_double_sum",
    "twisted_double_sum_closed",
    "completed_legendre_form_sum",
    "GaussSuiteReport",
    "TwistedSuiteReport",
    "gauss_identity_suite",
    "twisted_identity_suite",
]

# Complex tolerances are 1e-9 scaled by the natural magnitude (sqrt(p) or p);
# doubles give ~1e-12 relative error at desk scale, leaving margin.
GAUSS_TOL = 1e-9
TWISTED_TOL = 1e-9


@lru_cache(maxsize=64)
def _group_tables(p: int, m: int) -> tuple[int, np.ndarray]:
    """(generator, dlog table) for q = p^m; dlog[n] = -1 when gcd(n, q) > 1."""
    pp = PrimePower(p, m)
    g = primitive_root(pp)
    dlog = np.full(pp.q, -1, dtype=np.int64)
    x = 1
    for t in range(pp.phi):
        dlog[x] = t
        x = x * g % pp.q
    return g, dlog


@lru_cache(maxsize=256)
def _legendre_table(p: int) -> np.ndarray:
    """leg[n] = (n/p) for n in [0, p), built by enumerating the squares."""
    t = np.full(p, -1, dtype=np.int64)
    t[0] = 0
    t[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
    return t


@lru_cache(maxsize=256)
def _unit_roots(p: int) -> np.ndarray:
    """root[k] = e(k/p) for k in [0, p)."""
    return np.exp(2j * np.pi * np.arange(p) / p)


@dataclass(frozen=True)
class DirichletCharacter:
    """Character chi_j mod p^m, indexed against a fixed primitive root."""

    modulus: PrimePower
    index: int
    generator: int

    @property
    def is_principal(self) -> bool:
        return self.index == 0

    @property
    def is_quadratic(self) -> bool:
        return self.index == self.modulus.phi // 2

    def __call__(self, n: int) -> complex:
        return char_eval(self, n)

    def value_vector(self) -> np.ndarray:
        """chi(v) for all residues v in [0, q), as a complex array."""
        _, dlog = _group_tables(self.modulus.p, self.modulus.m)
        phi = self.modulus.phi
        out = np.zeros(self.modulus.q, dtype=np.complex128)
        cop = dlog >= 0
        out[cop] = np.exp(2j * np.pi * (self.index * dlog[cop] % phi) / phi)
        return out


def enumerate_characters(pp: PrimePower) -> list[DirichletCharacter]:
    """All phi(q) characters mod q in index order; index 0 is principal."""
    g, _ = _group_tables(pp.p, pp.m)
    return [DirichletCharacter(pp, j, g) for j in range(pp.phi)]


def char_eval(chi: DirichletCharacter, n: int) -> complex:
    """chi(n), reducing n mod q; 0 on residues sharing a factor with q."""
    _, dlog = _group_tables(chi.modulus.p, chi.modulus.m)
    t = int(dlog[n % chi.modulus.q])
    if t < 0:
        return 0j
    phi = chi.modulus.phi
    return cmath.exp(2j * math.pi * (chi.index * t % phi) / phi)


def char_sum(chi: DirichletCharacter, N: int) -> complex:
    """sum_{0 < n <= N} chi(n) by direct evaluation."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    _, dlog = _group_tables(chi.modulus.p, chi.modulus.m)
    t = dlog[np.arange(1, N + 1, dtype=np.int64) % chi.modulus.q]
    t = t[t >= 0]
    phi = chi.modulus.phi
    return complex(np.exp(2j * np.pi * (chi.index * t % phi) / phi).sum())


def signed_char_sum(chi: DirichletCharacter, N: int) -> complex:
    """sum_{|x| <= N} chi(x) via the parity identity (1 + chi(-1)) * sum_{0 < x <= N}."""
    # chi_j(-1) = (-1)^j because dlog(-1) = phi/2.
    if chi.index % 2 == 1:
        return 0j
    return 2 * char_sum(chi, N)


def all_signed_char_sums(pp: PrimePower, N: int) -> np.ndarray:
    """sum_{|x| <= N} chi_j(x) for every index j at once.

    Bins n <= N by discrete log, then one length-phi(q) DFT evaluates all
    characters simultaneously: F[j] = sum_t w_t e(j t / phi).
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    _, dlog = _group_tables(pp.p, pp.m)
    t = dlog[np.arange(1, N + 1, dtype=np.int64) % pp.q]
    w = np.bincount(t[t >= 0], minlength=pp.phi).astype(np.float64)
    half = np.conj(np.fft.fft(w))  # index j: sum over 0 < n <= N
    signed = 2 * half
    signed[1::2] = 0.0  # odd characters cancel over the symmetric box
    return signed


def max_nonprincipal_char_sum(pp: PrimePower, N: int) -> tuple[float, int]:
    """(max over chi != chi_0 of |sum_{|x3| <= N} chi(x3)|, smallest witness index)."""
    sums = all_signed_char_sums(pp, N)
    mags = np.abs(sums)
    mags[0] = -1.0
    j = int(np.argmax(mags))
    return float(mags[j]), j


def tau_p(p: int) -> complex:
    """Quadratic Gauss sum sum_{n=1}^{p} (n/p) e(n/p), by direct summation."""
    if not is_odd_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    leg = _legendre_table(p)
    return complex((leg * _unit_roots(p)).sum())


def tau_p_closed(p: int) -> complex:
    """Closed evaluation: sqrt(p) if p = 1 mod 4, i*sqrt(p) if p = 3 mod 4."""
    if not is_odd_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    r = math.sqrt(p)
    return complex(r) if p % 4 == 1 else complex(0, r)


def gauss_sum_direct(a: int, b: int, p: int) -> complex:
    """G(a,b;p) = sum_{n=1}^{p} e((a n^2 + b n)/p), by direct summation."""
    if not is_odd_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if a % p == 0:
        raise ValueError(f"a must be coprime to p, got a={a}, p={p}")
    n = np.arange(p, dtype=np.int64)
    return complex(_unit_roots(p)[(a * n * n + b * n) % p].sum())


def gauss_sum_closed(a: int, b: int, p: int) -> complex:
    """G(a,b;p) by the closed form e(-(4a)^{-1} b^2/p) * (a/p) * tau_p."""
    if not is_odd_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if a % p == 0:
        raise ValueError(f"a must be coprime to p, got a={a}, p={p}")
    inv4a = mod_inverse(4 * a, p)
    phase = cmath.exp(-2j * math.pi * (inv4a * b * b % p) / p)
    return phase * legendre(a, p) * tau_p_closed(p)


def legendre_twisted_double_sum(alpha2: int, h1: int, h2: int, p: int) -> complex:
    """sum_{a1,a2 mod p} ((a1^2 + alpha2 a2^2)/p) e((h1 a1 + h2 a2)/p), directly."""
    if not is_odd_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if alpha2 % p == 0:
        raise ValueError(f"alpha2 must be coprime to p, got {alpha2}")
    leg = _legendre_table(p)
    root = _unit_roots(p)
    a = np.arange(p, dtype=np.int64)
    sq = (a * a) % p
    vals = leg[(sq[:, None] + alpha2 * sq[None, :]) % p]
    phases = root[(h1 * a) % p][:, None] * root[(h2 * a) % p][None, :]
    return complex((vals * phases).sum())


def twisted_double_sum_closed(alpha2: int, h1: int, h2: int, p: int) -> complex:
    """Closed form (-(alpha2 h1^2 + h2^2)/p) * tau_p^2 of the twisted double sum."""
    if alpha2 % p == 0:
        raise ValueError(f"alpha2 must be coprime to p, got {alpha2}")
    x = -(alpha2 * h1 * h1 + h2 * h2)
    return legendre(x, p) * tau_p_closed(p) ** 2


def completed_legendre_form_sum(alpha2: int, N: float, p: int) -> tuple[int, float]:
    """(exact sum_{|x1|,|x2| <= floor(N)} ((x1^2 + alpha2 x2^2)/p), |sum| / (N + p)).

    The ratio against N + p tracks the completed-sum bound empirically; it is
    report-only and never asserted (the bound's constant is unknown).
    """
    if not is_odd_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if alpha2 % p == 0:
        raise ValueError(f"alpha2 must be coprime to p, got {alpha2}")
    n = math.floor(N)
    if n < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    xs = np.arange(-n, n + 1, dtype=np.int64)
    sq = (xs * xs) % p
    leg = _legendre_table(p)
    total = int(leg[(sq[:, None] + alpha2 * sq[None, :]) % p].sum())
    return total, abs(total) / (N + p)


# ----------------------------------------------------------------------------
# Batch identity suites.  The direct sums are evaluated for a whole parameter
# slice at once through an FFT (same sums, same values), which keeps the full
# p <= 199 sweep in seconds.

@dataclass
class GaussSuiteReport:
    p_max: int
    pairs_checked: int
    worst_gauss_rel_err: float
    worst_tau_rel_err: float
    first_failure: tuple[int, int, int, float] | None  # (p, a, b, err/sqrt(p))

    @property
    def ok(self) -> bool:
        return self.first_failure is None


@dataclass
class TwistedSuiteReport:
    p_max: int
    triples_checked: int
    worst_rel_err: float
    first_failure: tuple[int, int, int, int, float] | None  # (p, alpha2, h1, h2, err/p)

    @property
    def ok(self) -> bool:
        return self.first_failure is None


def _gauss_direct_all_b(a: int, p: int) -> np.ndarray:
    """G(a, b; p) for every b in [0, p) via one DFT of e(a n^2 / p)."""
    n = np.arange(p, dtype=np.int64)
    va = _unit_roots(p)[(a * n * n) % p]
    return np.conj(np.fft.fft(np.conj(va)))


def gauss_identity_suite(p_max: int) -> GaussSuiteReport:
    """Check G_direct vs G_closed for all odd p <= p_max, a in [1,p), b in [0,p).

    Also checks tau_p against its closed evaluation per residue class of
    p mod 4.  Tolerance: |direct - closed| <= 1e-9 * sqrt(p).
    """
    worst_g = 0.0
    worst_t = 0.0
    first_fail = None
    checked = 0
    for p in odd_primes_upto(p_max):
        scale = math.sqrt(p)
        err_t = abs(tau_p(p) - tau_p_closed(p)) / scale
        worst_t = max(worst_t, err_t)
        if err_t > GAUSS_TOL and first_fail is None:
            first_fail = (p, 1, 0, err_t)
        leg = _legendre_table(p)
        root = _unit_roots(p)
        bsq = (np.arange(p, dtype=np.int64) ** 2) % p
        tau_c = tau_p_closed(p)
        inv4 = mod_inverse(4, p)
        for a in range(1, p):
            direct = _gauss_direct_all_b(a, p)
            inv4a = inv4 * mod_inverse(a, p) % p
            closed = root[(-inv4a * bsq) % p] * (int(leg[a]) * tau_c)
            errs = np.abs(direct - closed) / scale
            checked += p
            w = float(errs.max())
            if w > worst_g:
                worst_g = w
            if w > GAUSS_TOL and first_fail is None:
                b = int(np.argmax(errs))
                first_fail = (p, a, b, w)
    return GaussSuiteReport(p_max, checked, worst_g, worst_t, first_fail)


def twisted_identity_suite(p_max: int) -> TwistedSuiteReport:
    """Check the twisted double-sum identity for all odd p <= p_max and all
    alpha2 in [1, p), (h1, h2) mod p.  Tolerance: |direct - closed| <= 1e-9 * p.

    For fixed (p, alpha2) the direct sums over all (h1, h2) form one 2-D DFT
    of the Legendre-value matrix of the form.
    """
    worst = 0.0
    first_fail = None
    checked = 0
    for p in odd_primes_upto(p_max):
        leg = _legendre_table(p)
        sq = (np.arange(p, dtype=np.int64) ** 2) % p
        tau_sq = p if p % 4 == 1 else -p  # tau_p^2 = (-1/p) * p
        for alpha2 in range(1, p):
            m = leg[(sq[:, None] + alpha2 * sq[None, :]) % p].astype(np.float64)
            direct = np.conj(np.fft.fft2(m))  # index (h1, h2)
            x = (alpha2 * sq[:, None] + sq[None, :]) % p
            closed = leg[(-x) % p] * tau_sq
            errs = np.abs(direct - closed) / p
            checked += p * p
            w = float(errs.max())
            if w > worst:
                worst = w
            if w > TWISTED_TOL and first_fail is None:
                h1, h2 = np.unravel_index(int(np.argmax(errs)), errs.shape)
                first_fail = (p, alpha2, int(h1), int(h2), w)
    return TwistedSuiteReport(p_max, checked, worst, first_fail)
