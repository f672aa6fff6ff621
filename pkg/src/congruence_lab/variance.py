"""Variance of the solution-count error over the coefficient alpha3.

With M = K*L/phi(q) the exact main term, the variance

    V = sum_{alpha3 coprime to q} (S(alpha3) - M)^2

admits a character-sum identity: writing A(chi) = sum_{box} chi(x1^2 +
alpha2 x2^2) and B(chi) = sum_{|x3| <= N} conj(chi)^2(x3),

    V = (1/phi) sum_{chi != chi_0} |A(chi) B(chi)|^2,

which splits into V1 (the unique quadratic character, where A is the
integer Legendre-form sum and B = L) plus V2 (all chi with chi^2 != chi_0).
V and V1 are exact rationals; V2 and the direct character-sum route are
complex doubles, compared at 1e-6 relative tolerance.

The quadruple identity is the chi-orthogonality statement

    sum_chi |A(chi)|^2 = phi(q) * #{(x, y) in box^2 : form(x) = form(y) mod q,
                                     both values coprime to q},

checked as exact integer equality: the left side through the form-value
histogram c_v, the right side by brute-force pair comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import PrimePower
from .characters import _group_tables, completed_legendre_form_sum, max_nonprincipal_char_sum
from .congruence import (
    ExperimentConfig,
    SolutionHistogram,
    coprime_x3_count,
    form_value_histogram,
    main_term,
    solution_histogram,
)

__all__ = [
    "VarianceReport",
    "VarianceDecompositionError",
    "variance_direct",
    "variance_v1",
    "variance_v2",
    "variance_charsum",
    "variance_decomposition_check",
    "quadruple_count_identity",
    "quadruple_lhs_character_route",
    "BoundRatioRow",
    "bound_ratio_report",
    "VARIANCE_TOL",
]

VARIANCE_TOL = 1e-6


@dataclass
class VarianceReport:
    V_def: Fraction
    V1: Fraction
    V2: float
    V_charsum: float
    rel_diff_split: float
    rel_diff_charsum: float

    def divergent_routes(self, tol: float = VARIANCE_TOL) -> list[str]:
        out = []
        if self.rel_diff_split > tol:
            out.append("V1+V2 split")
        if self.rel_diff_charsum > tol:
            out.append("character-sum route")
        return out

    def to_dict(self) -> dict:
        return {
            "V_def": f"{self.V_def.numerator}/{self.V_def.denominator}",
            "V1": f"{self.V1.numerator}/{self.V1.denominator}",
            "V2": self.V2,
            "V_charsum": self.V_charsum,
            "rel_diff_split": self.rel_diff_split,
            "rel_diff_charsum": self.rel_diff_charsum,
        }


class VarianceDecompositionError(ArithmeticError):
    """Raised when a variance route disagrees beyond tolerance."""

    def __init__(self, report: VarianceReport, routes: list[str]):
        self.report = report
        self.routes = routes
        super().__init__(f"variance routes diverged: {', '.join(routes)} (report: {report.to_dict()})")


def variance_direct(cfg: ExperimentConfig, histogram: SolutionHistogram | None = None) -> Fraction:
    """V = sum over coprime alpha3 of (S(alpha3) - M)^2, exact.

    Computed over integers as sum (phi*S - K*L)^2 / phi^2.
    """
    hist = histogram if histogram is not None else solution_histogram(cfg)
    mt = main_term(cfg)
    phi = cfg.pp.phi
    kl = mt.K * mt.L
    coprime = np.arange(cfg.pp.q) % cfg.pp.p != 0
    dev = phi * hist.counts[coprime].astype(object) - kl
    return Fraction(int(np.sum(dev * dev)), phi * phi)


def variance_v1(cfg: ExperimentConfig) -> Fraction:
    """Quadratic-character contribution (1/phi) * T^2 * L^2 with T the
    integer Legendre-form sum over the box; exact rational."""
    n = cfg.floor_N
    t, _ = completed_legendre_form_sum(cfg.alpha2, n, cfg.pp.p) if n >= 0 else (0, 0.0)
    L = coprime_x3_count(cfg.pp.p, n)
    return Fraction(t * t * L * L, cfg.pp.phi)


def _char_form_sums(pp: PrimePower, c: np.ndarray) -> np.ndarray:
    """A[j] = sum_v c_v chi_j(v) for every index j, via one length-phi DFT."""
    _, dlog = _group_tables(pp.p, pp.m)
    w = np.zeros(pp.phi)
    cop = dlog >= 0
    np.add.at(w, dlog[cop], c[cop].astype(np.float64))
    return np.conj(np.fft.fft(w))


def _conj_sq_x3_sums(pp: PrimePower, n: int) -> np.ndarray:
    """B[j] = sum_{|x3| <= n} conj(chi_j)^2(x3) for every index j.

    conj(chi_j)^2 has index -2j mod phi, so all values come from one DFT of
    the x3 population binned by discrete log.
    """
    _, dlog = _group_tables(pp.p, pp.m)
    b = np.zeros(pp.phi)
    if n >= 1:
        x3 = np.arange(1, n + 1, dtype=np.int64)
        x3 = x3[x3 % pp.p != 0]
        if len(x3):
            np.add.at(b, dlog[x3 % pp.q], 1.0)
            np.add.at(b, dlog[(-x3) % pp.q], 1.0)
    f = np.fft.fft(b)  # f[k] = sum_t b_t e(-k t / phi)
    return f[(2 * np.arange(pp.phi)) % pp.phi]


def _char_products(cfg: ExperimentConfig) -> np.ndarray:
    """|A(chi_j) B(chi_j)|^2 for every j."""
    c = form_value_histogram(cfg.pp, cfg.alpha2, cfg.floor_N)
    a = _char_form_sums(cfg.pp, c)
    b = _conj_sq_x3_sums(cfg.pp, cfg.floor_N)
    return np.abs(a) ** 2 * np.abs(b) ** 2


def variance_v2(cfg: ExperimentConfig) -> float:
    """(1/phi) sum over chi with chi^2 != chi_0 of |A(chi)|^2 |B(chi)|^2.

    Exactly two characters are skipped: the principal one and the quadratic
    one (the only solutions of chi^2 = chi_0 in a cyclic group of even order).
    """
    prod = _char_products(cfg)
    mask = np.ones(cfg.pp.phi, dtype=bool)
    mask[0] = False
    mask[cfg.pp.phi // 2] = False
    return float(prod[mask].sum()) / cfg.pp.phi


def variance_charsum(cfg: ExperimentConfig) -> float:
    """(1/phi) sum over all chi != chi_0 of |A(chi) B(chi)|^2."""
    prod = _char_products(cfg)
    return float(prod[1:].sum()) / cfg.pp.phi


def variance_decomposition_check(cfg: ExperimentConfig, tol: float = VARIANCE_TOL) -> VarianceReport:
    """Compute V three ways and check they agree to `tol` relative.

    Raises VarianceDecompositionError naming the divergent route(s); the
    report inside the exception carries all the numbers either way.
    """
    v_def = variance_direct(cfg)
    v1 = variance_v1(cfg)
    v2 = variance_v2(cfg)
    v_ch = variance_charsum(cfg)
    vd = float(v_def)
    scale = max(1.0, vd)
    report = VarianceReport(
        V_def=v_def,
        V1=v1,
        V2=v2,
        V_charsum=v_ch,
        rel_diff_split=abs(vd - (float(v1) + v2)) / scale,
        rel_diff_charsum=abs(vd - v_ch) / scale,
    )
    routes = report.divergent_routes(tol)
    if routes:
        raise VarianceDecompositionError(report, routes)
    return report


def quadruple_count_identity(cfg: ExperimentConfig) -> tuple[int, int]:
    """(lhs, rhs) of the orthogonality identity, both exact integers.

    lhs = phi(q) * sum over coprime v of c_v^2, from the form histogram;
    rhs = phi(q) * #{(x1,x2,y1,y2) in the box : form(x) = form(y) mod q,
    both values coprime}, by brute-force pair comparison.  Intended for
    N < q/2 (the regime where the identity feeds the variance bound).
    """
    phi, q, p = cfg.pp.phi, cfg.pp.q, cfg.pp.p
    n = cfg.floor_N
    c = form_value_histogram(cfg.pp, cfg.alpha2, n)
    coprime_v = np.arange(q) % p != 0
    lhs = phi * int((c[coprime_v].astype(object) ** 2).sum()) if n >= 0 else 0

    xs = np.arange(-n, n + 1, dtype=np.int64)
    sq = (xs * xs) % q
    vals = ((sq[:, None] + (cfg.alpha2 % q) * sq[None, :]) % q).ravel()
    good = vals[vals % p != 0]
    quadruples = 0
    block = max(1, 2 ** 22 // max(1, len(good)))
    for i in range(0, len(good), block):
        quadruples += int((good[i:i + block, None] == good[None, :]).sum())
    rhs = phi * quadruples
    if lhs != rhs:
        raise ArithmeticError(f"quadruple identity violated: lhs={lhs} rhs={rhs}")
    return lhs, rhs


def quadruple_lhs_character_route(cfg: ExperimentConfig) -> float:
    """sum_chi |A(chi)|^2 evaluated directly in complex doubles (cross-check)."""
    c = form_value_histogram(cfg.pp, cfg.alpha2, cfg.floor_N)
    a = _char_form_sums(cfg.pp, c)
    return float((np.abs(a) ** 2).sum())


@dataclass
class BoundRatioRow:
    bound_name: str
    empirical_max: float
    reference_value: float
    ratio: float


def bound_ratio_report(pp: PrimePower, N: int, pair) -> list[BoundRatioRow]:
    """Empirical max non-principal character sum against four reference curves.

    Curves: Burgess N^(1-1/r) q^((r+1)/(4r^2)) for r = 2, 3; the exponent-pair
    curve N^(l-k) q^k for the supplied pair; and the Lindelof curve N^(1/2).
    Implied constants are unknown, so ratios are report-only; the only hard
    statement is the trivial |sum| <= 2N + 1.
    """
    emp, _ = max_nonprincipal_char_sum(pp, N)
    if emp > 2 * N + 1:
        raise ArithmeticError(f"character sum {emp} exceeds the trivial bound {2 * N + 1}")
    k, l = Fraction(pair.k), Fraction(pair.l)
    q = pp.q
    refs = [
        ("burgess_r2", N ** (1 / 2) * q ** (3 / 16)),
        ("burgess_r3", N ** (2 / 3) * q ** (1 / 9)),
        ("exponent_pair", N ** float(l - k) * q ** float(k)),
        ("lindelof", math.sqrt(N)),
    ]
    return [BoundRatioRow(name, emp, ref, emp / ref) for name, ref in refs]
