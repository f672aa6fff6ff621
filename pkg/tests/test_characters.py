import cmath
import math

import numpy as np
import pytest

from congruence_lab.arith import PrimePower, legendre, odd_primes_upto
from congruence_lab.characters import (
    char_eval,
    char_sum,
    completed_legendre_form_sum,
    enumerate_characters,
    gauss_identity_suite,
    gauss_sum_closed,
    gauss_sum_direct,
    legendre_twisted_double_sum,
    max_nonprincipal_char_sum,
    signed_char_sum,
    tau_p,
    tau_p_closed,
    twisted_double_sum_closed,
    twisted_identity_suite,
)

GRID = [PrimePower(3, 2), PrimePower(5, 2), PrimePower(3, 3), PrimePower(7, 2),
        PrimePower(11, 2), PrimePower(5, 3), PrimePower(7, 3)]


def test_char_eval_examples():
    chars9 = enumerate_characters(PrimePower(3, 2))
    assert chars9[0].is_principal
    assert abs(char_eval(chars9[0], 4) - 1) < 1e-12
    for chi in chars9:
        assert char_eval(chi, 6) == 0
    # the quadratic character mod 25 is the Legendre symbol mod 5
    pp25 = PrimePower(5, 2)
    quad = enumerate_characters(pp25)[pp25.phi // 2]
    assert quad.is_quadratic
    for n in range(25):
        assert abs(char_eval(quad, n) - legendre(n, 5)) < 1e-12


def test_enumerate_counts():
    assert len(enumerate_characters(PrimePower(3, 2))) == 6
    assert len(enumerate_characters(PrimePower(5, 1))) == 4


def test_char_values_are_unit_or_zero():
    for pp in (PrimePower(3, 2), PrimePower(7, 1)):
        for chi in enumerate_characters(pp):
            for n in range(pp.q):
                v = abs(char_eval(chi, n))
                assert v < 1e-12 or abs(v - 1) < 1e-12


def test_orthogonality():
    # sum_chi chi(u) conj(chi(v)) depends only on dlog(u) - dlog(v) mod phi;
    # checking every difference class covers every coprime pair (u, v).
    for pp in GRID:
        j = np.arange(pp.phi)
        for delta in range(pp.phi):
            s = np.exp(2j * np.pi * j * delta / pp.phi).sum()
            want = pp.phi if delta == 0 else 0.0
            assert abs(s - want) <= 1e-8
    # and literally, by evaluation, for one small modulus
    pp = PrimePower(3, 2)
    chars = enumerate_characters(pp)
    for u in range(1, 9):
        for v in range(1, 9):
            if math.gcd(u * v, 9) > 1:
                continue
            s = sum(char_eval(chi, u) * char_eval(chi, v).conjugate() for chi in chars)
            want = pp.phi if u % 9 == v % 9 else 0.0
            assert abs(s - want) <= 1e-8


def test_char_multiplicativity_exhaustive():
    for pp in (PrimePower(3, 2), PrimePower(5, 2), PrimePower(3, 3), PrimePower(7, 2), PrimePower(11, 2)):
        q = pp.q
        units = np.array([n for n in range(q) if n % pp.p != 0])
        prod = (units[:, None] * units[None, :]) % q
        for chi in enumerate_characters(pp):
            v = chi.value_vector()
            assert np.abs(v[prod] - v[units][:, None] * v[units][None, :]).max() < 1e-10


def test_char_sum_examples():
    pp9 = PrimePower(3, 2)
    chars = enumerate_characters(pp9)
    assert abs(char_sum(chars[0], 9) - 6) < 1e-12  # n <= 9 coprime to 3
    for pp in (pp9, PrimePower(5, 2)):
        for chi in enumerate_characters(pp)[1:]:
            assert abs(char_sum(chi, pp.q)) < 1e-10  # full period
    quad9 = chars[pp9.phi // 2]
    # (1/3) - (2/3) + 0 + (4/3) = 1 - 1 + 0 + 1
    assert abs(char_sum(quad9, 4) - 1) < 1e-12


def test_max_nonprincipal_full_period_vanishes():
    for pp, N in ((PrimePower(3, 2), 9), (PrimePower(5, 2), 25)):
        m, _ = max_nonprincipal_char_sum(pp, N)
        assert m < 1e-9


def test_max_nonprincipal_matches_direct_route():
    pp = PrimePower(7, 2)
    N = 10
    best = -1.0
    for chi in enumerate_characters(pp)[1:]:
        direct = sum(char_eval(chi, x) for x in range(-N, N + 1))
        para = signed_char_sum(chi, N)
        assert abs(direct - para) < 1e-9
        best = max(best, abs(direct))
    got, j = max_nonprincipal_char_sum(pp, N)
    assert abs(got - best) < 1e-9
    assert 1 <= j < pp.phi


def test_tau_examples():
    assert abs(tau_p(5) - math.sqrt(5)) < 1e-9
    assert abs(tau_p(7) - 1j * math.sqrt(7)) < 1e-9
    assert abs(tau_p(3) - 1j * math.sqrt(3)) < 1e-9


def test_tau_squared():
    for p in odd_primes_upto(199):
        want = p * (-1) ** ((p - 1) // 2)
        assert abs(tau_p(p) ** 2 - want) <= 1e-9 * p


def test_gauss_examples():
    assert abs(gauss_sum_direct(1, 0, 5) - math.sqrt(5)) < 1e-9
    assert abs(gauss_sum_direct(1, 0, 5) - tau_p(5)) < 1e-12
    assert abs(gauss_sum_direct(1, 0, 7) - 1j * math.sqrt(7)) < 1e-9
    # 4a = 8 = 1 mod 7, inverse 1, b^2 = 9 = 2, (2/7) = 1
    want = cmath.exp(-2j * cmath.pi * 2 / 7) * 1j * math.sqrt(7)
    assert abs(gauss_sum_direct(2, 3, 7) - want) < 1e-9
    assert abs(gauss_sum_closed(2, 3, 7) - want) < 1e-12
    assert abs(gauss_sum_closed(3, 0, 5) + math.sqrt(5)) < 1e-12


def test_gauss_direct_vs_closed_small_primes():
    for p in odd_primes_upto(31):
        for a in range(1, p):
            for b in range(p):
                d = gauss_sum_direct(a, b, p)
                c = gauss_sum_closed(a, b, p)
                assert abs(d - c) <= 1e-9 * math.sqrt(p)


def test_gauss_rejects_bad_a():
    with pytest.raises(ValueError):
        gauss_sum_direct(7, 1, 7)
    with pytest.raises(ValueError):
        gauss_sum_closed(14, 1, 7)


def test_gauss_suite_matches_scalar_routes():
    report = gauss_identity_suite(31)
    assert report.ok
    assert report.worst_gauss_rel_err <= 1e-12
    assert report.pairs_checked == sum(p * (p - 1) for p in odd_primes_upto(31))


def test_twisted_examples():
    for p in odd_primes_upto(31):
        assert abs(legendre_twisted_double_sum(1, 0, 0, p)) < 1e-9 * p
    assert abs(legendre_twisted_double_sum(1, 1, 0, 3) - 3) < 1e-9
    # direct hand sum: 2 - (e(1/3) + e(2/3)) = 3
    hand = 2 - (cmath.exp(2j * cmath.pi / 3) + cmath.exp(4j * cmath.pi / 3))
    assert abs(hand - 3) < 1e-12
    want = legendre(-3, 7) * tau_p_closed(7) ** 2
    assert abs(legendre_twisted_double_sum(2, 1, 1, 7) - want) < 1e-9 * 7
    assert abs(twisted_double_sum_closed(2, 1, 1, 7) - want) < 1e-12


def test_twisted_identity_small():
    for p in odd_primes_upto(13):
        for alpha2 in range(1, p):
            for h1 in range(p):
                for h2 in range(p):
                    d = legendre_twisted_double_sum(alpha2, h1, h2, p)
                    c = twisted_double_sum_closed(alpha2, h1, h2, p)
                    assert abs(d - c) <= 1e-9 * p


def test_twisted_suite():
    report = twisted_identity_suite(31)
    assert report.ok
    assert report.triples_checked == sum(p * p * (p - 1) for p in odd_primes_upto(31))


def test_completed_legendre_form_sum():
    assert completed_legendre_form_sum(1, 0, 3)[0] == 0
    assert completed_legendre_form_sum(1, 1, 3)[0] == 0
    # two independent loop orders
    p, n = 7, 10
    s_rowmajor = sum(legendre(x1 * x1 + x2 * x2, p) for x1 in range(-n, n + 1) for x2 in range(-n, n + 1))
    s_colmajor = sum(legendre(x1 * x1 + x2 * x2, p) for x2 in range(-n, n + 1) for x1 in range(-n, n + 1))
    assert s_rowmajor == s_colmajor
    got, ratio = completed_legendre_form_sum(1, 10, 7)
    assert got == s_rowmajor
    assert ratio == abs(got) / (10 + 7)
    # real-valued N floors to the integer box
    assert completed_legendre_form_sum(1, 10.9, 7)[0] == got


def test_completed_sum_rejects_bad_alpha2():
    with pytest.raises(ValueError):
        completed_legendre_form_sum(7, 3, 7)
