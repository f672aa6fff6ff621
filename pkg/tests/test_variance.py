import math
from fractions import Fraction

import numpy as np
import pytest

from congruence_lab.arith import PrimePower
from congruence_lab.characters import char_eval, enumerate_characters
from congruence_lab.congruence import ExperimentConfig, coprime_x3_count, main_term
from congruence_lab.exppair import ExponentPair
from congruence_lab.variance import (
    bound_ratio_report,
    quadruple_count_identity,
    quadruple_lhs_character_route,
    variance_charsum,
    variance_decomposition_check,
    variance_direct,
    variance_v1,
    variance_v2,
)


def cfg_of(p, m, alpha2, N):
    return ExperimentConfig(PrimePower(p, m), alpha2, float(N))


def brute_force_variance(cfg):
    """Independent oracle: count triples per alpha3 by raw loops, exact Fractions."""
    q, p, n = cfg.pp.q, cfg.pp.p, cfg.floor_N
    a2 = cfg.alpha2 % q
    counts = {}
    for alpha3 in range(q):
        c = 0
        for x1 in range(-n, n + 1):
            for x2 in range(-n, n + 1):
                for x3 in range(-n, n + 1):
                    if x3 % p != 0 and (x1 * x1 + a2 * x2 * x2 + alpha3 * x3 * x3) % q == 0:
                        c += 1
        counts[alpha3] = c
    k = sum(
        1
        for x1 in range(-n, n + 1)
        for x2 in range(-n, n + 1)
        if (x1 * x1 + a2 * x2 * x2) % p != 0
    )
    m = Fraction(k * coprime_x3_count(p, n), cfg.pp.phi)
    return sum((Fraction(counts[a3]) - m) ** 2 for a3 in range(q) if a3 % p != 0)


def test_variance_direct_zero_cases():
    assert variance_direct(cfg_of(3, 1, 1, 0.5)) == 0
    # S(1) = S(2) = 8 and M = 8 exactly
    assert variance_direct(cfg_of(3, 1, 1, 1)) == 0


def test_variance_direct_matches_brute_force():
    cfg = cfg_of(3, 2, 1, 2)
    want = brute_force_variance(cfg)
    assert variance_direct(cfg) == want == Fraction(256)
    cfg = cfg_of(5, 1, 2, 2)
    assert variance_direct(cfg) == brute_force_variance(cfg)


def test_variance_v1_cases():
    assert variance_v1(cfg_of(5, 1, 1, 0.5)) == 0
    # completed Legendre-form sum over the 3x3 box vanishes for p = 3
    assert variance_v1(cfg_of(3, 1, 1, 1)) == 0


def test_variance_v1_matches_character_route():
    cfg = cfg_of(5, 2, 1, 3)
    pp = cfg.pp
    quad = enumerate_characters(pp)[pp.phi // 2]
    t = sum(
        char_eval(quad, x1 * x1 + cfg.alpha2 * x2 * x2)
        for x1 in range(-3, 4)
        for x2 in range(-3, 4)
    )
    assert abs(t.imag) < 1e-12
    want = Fraction(round(t.real) ** 2 * coprime_x3_count(5, 3) ** 2, pp.phi)
    assert variance_v1(cfg) == want


def test_variance_v2_empty_for_prime_3():
    # mod 3 the only characters are principal and quadratic
    assert variance_v2(cfg_of(3, 1, 1, 2)) == 0.0


def test_variance_v2_matches_explicit_character_loop():
    cfg = cfg_of(3, 2, 1, 2)
    pp = cfg.pp
    total = 0.0
    for chi in enumerate_characters(pp):
        if chi.index in (0, pp.phi // 2):
            continue
        a = sum(
            char_eval(chi, x1 * x1 + cfg.alpha2 * x2 * x2)
            for x1 in range(-2, 3)
            for x2 in range(-2, 3)
        )
        b = sum(char_eval(chi, x3).conjugate() ** 2 for x3 in range(-2, 3))
        total += abs(a) ** 2 * abs(b) ** 2
    assert variance_v2(cfg) == pytest.approx(total / pp.phi, abs=1e-9)


GRID = [(3, 2, 1, 2), (3, 3, 2, 4), (5, 2, 3, 5), (7, 2, 5, 3), (11, 2, 1, 5), (5, 3, 2, 8), (7, 3, 3, 8)]


@pytest.mark.parametrize("p,m,alpha2,N", GRID)
def test_three_way_agreement(p, m, alpha2, N):
    report = variance_decomposition_check(cfg_of(p, m, alpha2, N))
    assert report.rel_diff_split <= 1e-6
    assert report.rel_diff_charsum <= 1e-6
    assert report.V_def >= 0 and report.V1 >= 0 and report.V2 >= -1e-9
    assert float(report.V1) + report.V2 == pytest.approx(report.V_charsum, rel=1e-9, abs=1e-9)


def test_variance_invariant_under_alpha2_shift():
    assert variance_direct(cfg_of(5, 2, 2, 3)) == variance_direct(cfg_of(5, 2, 27, 3))


def test_report_serialization():
    report = variance_decomposition_check(cfg_of(3, 2, 1, 2))
    d = report.to_dict()
    assert d["V_def"] == "256/1"
    assert set(d) == {"V_def", "V1", "V2", "V_charsum", "rel_diff_split", "rel_diff_charsum"}


def brute_force_quadruples(cfg):
    q, p, n = cfg.pp.q, cfg.pp.p, cfg.floor_N
    a2 = cfg.alpha2 % q
    box = [(x1, x2) for x1 in range(-n, n + 1) for x2 in range(-n, n + 1)]
    vals = [(x1 * x1 + a2 * x2 * x2) % q for x1, x2 in box]
    return sum(
        1
        for u in vals
        for v in vals
        if u == v and u % p != 0
    )


@pytest.mark.parametrize("p,m,alpha2,N", [(3, 2, 1, 2), (7, 1, 5, 6), (5, 2, 3, 4)])
def test_quadruple_identity(p, m, alpha2, N):
    cfg = cfg_of(p, m, alpha2, N)
    lhs, rhs = quadruple_count_identity(cfg)
    assert lhs == rhs
    assert rhs == cfg.pp.phi * brute_force_quadruples(cfg)


def test_quadruple_identity_empty_box():
    lhs, rhs = quadruple_count_identity(cfg_of(3, 2, 1, 0.2))
    assert (lhs, rhs) == (0, 0)


def test_quadruple_lhs_character_route_agrees():
    cfg = cfg_of(7, 2, 3, 5)
    lhs, _ = quadruple_count_identity(cfg)
    via_chars = quadruple_lhs_character_route(cfg)
    assert abs(via_chars - lhs) <= 1e-6 * max(1, lhs)


def test_bound_ratio_report():
    pair = ExponentPair(Fraction(1, 9), Fraction(13, 18))
    rows = bound_ratio_report(PrimePower(3, 7), 100, pair)
    assert [r.bound_name for r in rows] == ["burgess_r2", "burgess_r3", "exponent_pair", "lindelof"]
    q = 3 ** 7
    by_name = {r.bound_name: r for r in rows}
    assert by_name["exponent_pair"].reference_value == pytest.approx(100 ** (11 / 18) * q ** (1 / 9))
    assert by_name["lindelof"].reference_value == pytest.approx(10.0)
    assert by_name["burgess_r2"].reference_value == pytest.approx(100 ** 0.5 * q ** (3 / 16))
    emp = rows[0].empirical_max
    assert all(r.empirical_max == emp for r in rows)
    assert emp <= 2 * 100 + 1
    for r in rows:
        assert math.isfinite(r.ratio) and r.ratio >= 0
    # full-period N = q: every non-principal sum vanishes
    rows_q = bound_ratio_report(PrimePower(3, 2), 9, pair)
    assert rows_q[0].empirical_max < 1e-9


def test_main_term_consistency_with_variance_grid():
    # M entering V_def is the exact K*L/phi for every grid point
    for p, m, alpha2, N in GRID[:3]:
        cfg = cfg_of(p, m, alpha2, N)
        mt = main_term(cfg)
        assert mt.M * cfg.pp.phi == mt.K * mt.L
