import math

import numpy as np
import pytest

from oracles import (
    brute_pattern_mod_p,
    count_real_roots_bisection,
    factor_completely,
    legendre_by_enumeration,
    sylvester_discriminant,
    sylvester_resultant,
)
from quintrank.numtheory import (
    FactorPattern,
    IntPolynomial,
    LeadingCoeffVanishes,
    NotSquarefree,
    ResolventData,
    Splitting,
    _resultant,
    certify_s5,
    factor_pattern_mod_p,
    first_primes,
    is_probable_prime,
    kronecker_symbol,
    poly_discriminant,
    real_root_count,
    resolvent,
    splitting_in_resolvent,
    squarefree_kernel,
)

X5_X_1 = IntPolynomial.descending([1, 0, 0, 0, -1, -1])  # x^5 - x - 1


def _random_quintics(count, seed=20260819, lo=-30, hi=30):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        c = [int(v) for v in rng.integers(lo, hi + 1, size=6)]
        if c[5] != 0:
            out.append(IntPolynomial(c))
    return out


# -- Kronecker symbol ---------------------------------------------------------


def test_kronecker_matches_legendre_enumeration():
    for p in first_primes(95):
        if p == 2:
            continue
        squares = {x * x % p for x in range(1, p)}
        for a in range(-500, 501):
            expect = 0 if a % p == 0 else (1 if a % p in squares else -1)
            assert kronecker_symbol(a, p) == expect
        assert p <= 500


def test_kronecker_fixed_values():
    assert kronecker_symbol(5, 11) == 1
    assert kronecker_symbol(2, 15) == 1
    assert kronecker_symbol(2869, 3) == 1
    assert kronecker_symbol(5, 2) == -1
    for a in range(-7, 8):
        assert kronecker_symbol(a, 1) == 1


def test_kronecker_zero_and_negative_conventions():
    assert kronecker_symbol(1, 0) == 1
    assert kronecker_symbol(-1, 0) == 1
    for a in (0, 2, -2, 5, 9, -9):
        assert kronecker_symbol(a, 0) == 0
    # (a|2) by a mod 8
    for a, want in [(1, 1), (7, 1), (-1, 1), (3, -1), (5, -1), (-3, -1)]:
        assert kronecker_symbol(a, 2) == want
    assert kronecker_symbol(4, 2) == 0
    # (a|-1) is the sign of a
    assert kronecker_symbol(3, -1) == 1
    assert kronecker_symbol(-3, -1) == -1
    assert kronecker_symbol(-7, -5) == -kronecker_symbol(-7, 5)


def test_kronecker_multiplicative_both_slots():
    rng = np.random.default_rng(7)
    for _ in range(300):
        a, b = (int(v) for v in rng.integers(-200, 201, size=2))
        n, m = (int(v) for v in rng.integers(-120, 121, size=2))
        if 0 in (a, b, n, m):
            continue
        assert kronecker_symbol(a * b, n) == \
            kronecker_symbol(a, n) * kronecker_symbol(b, n)
        assert kronecker_symbol(a, n * m) == \
            kronecker_symbol(a, n) * kronecker_symbol(a, m)


def test_kronecker_periodic_mod_4n():
    rng = np.random.default_rng(8)
    for _ in range(200):
        a = int(rng.integers(-300, 301))
        n = int(rng.integers(1, 150))
        assert kronecker_symbol(a, n) == kronecker_symbol(a + 4 * n, n)


# -- primes ---------------------------------------------------------------------


def test_first_primes():
    assert first_primes(10) == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
    ps = first_primes(200)
    assert len(ps) == 200
    assert ps[-1] == 1223
    assert all(is_probable_prime(p) for p in ps)


def test_probable_prime_against_sieve():
    limit = 20000
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = bytes(len(flags[p * p::p]))
    for n in range(limit + 1):
        assert is_probable_prime(n) == bool(flags[n])


def test_probable_prime_large_and_carmichael():
    assert not is_probable_prime(561)
    assert not is_probable_prime(1105)
    assert is_probable_prime(2 ** 61 - 1)
    assert not is_probable_prime(2 ** 67 - 1)


# -- discriminants ----------------------------------------------------------------


def test_discriminant_fixed_values():
    assert poly_discriminant(X5_X_1) == 2869
    assert factor_completely(2869) == {19: 1, 151: 1}
    assert poly_discriminant(IntPolynomial.descending([1, 0, 0, 0, 0, -1])) \
        == 3125


def test_discriminant_quadratic_and_cubic_closed_forms():
    rng = np.random.default_rng(11)
    for _ in range(200):
        b, c = (int(v) for v in rng.integers(-40, 41, size=2))
        f = IntPolynomial([c, b, 1])
        assert poly_discriminant(f) == b * b - 4 * c
        p, q = (int(v) for v in rng.integers(-20, 21, size=2))
        g = IntPolynomial([q, p, 0, 1])
        assert poly_discriminant(g) == -4 * p ** 3 - 27 * q ** 2


def test_discriminant_trinomial_quintics():
    # disc(x^5 + a x + b) = 256 a^5 + 3125 b^4
    rng = np.random.default_rng(12)
    for _ in range(100):
        a, b = (int(v) for v in rng.integers(-30, 31, size=2))
        f = IntPolynomial([b, a, 0, 0, 0, 1])
        assert poly_discriminant(f) == 256 * a ** 5 + 3125 * b ** 4


def test_discriminant_against_sylvester_on_random_quintics():
    for f in _random_quintics(1000):
        assert poly_discriminant(f) == sylvester_discriminant(f.coeffs)


def test_discriminant_other_degrees_against_sylvester():
    rng = np.random.default_rng(13)
    for deg in (2, 3, 4, 6, 7):
        for _ in range(60):
            c = [int(v) for v in rng.integers(-25, 26, size=deg + 1)]
            if c[deg] == 0:
                c[deg] = 1
            f = IntPolynomial(c)
            assert poly_discriminant(f) == sylvester_discriminant(f.coeffs)


def test_resultant_random_pairs_against_sylvester():
    rng = np.random.default_rng(14)
    for _ in range(250):
        df = int(rng.integers(1, 6))
        dg = int(rng.integers(1, 6))
        fc = [int(v) for v in rng.integers(-12, 13, size=df + 1)]
        gc = [int(v) for v in rng.integers(-12, 13, size=dg + 1)]
        if fc[df] == 0:
            fc[df] = 3
        if gc[dg] == 0:
            gc[dg] = -2
        assert _resultant(tuple(fc), tuple(gc)) == \
            sylvester_resultant(fc, gc)


def test_resultant_constant_and_shared_factor_cases():
    f = (2, 0, 1)       # x^2 + 2
    assert _resultant(f, (7,)) == 49
    assert _resultant((7,), f) == 49
    # common factor (x - 1): resultant vanishes
    a = (-1, 0, 1)      # (x-1)(x+1)
    b = (1, -2, 1)      # (x-1)^2
    assert _resultant(a, b) == 0


def test_discriminant_degree_precondition():
    with pytest.raises(ValueError):
        poly_discriminant(IntPolynomial([3, 2]))


# -- real root counts ---------------------------------------------------------------


def test_root_count_fixed_values():
    assert real_root_count(X5_X_1) == 1
    assert real_root_count(IntPolynomial([1, 0, 1])) == 0       # x^2 + 1
    assert real_root_count(IntPolynomial([0, -4, 0, 0, 0, 1])) == 3
    # five real roots: x(x-1)(x+1)(x-2)(x+2)
    full = IntPolynomial([0, 4, 0, -5, 0, 1])
    assert real_root_count(full) == 5


def test_root_count_not_squarefree():
    f = IntPolynomial([2, -3, 0, 1])  # (x - 1)^2 (x + 2)
    with pytest.raises(NotSquarefree):
        real_root_count(f)


def test_root_count_against_bisection_on_random_quintics():
    skipped = 0
    for f in _random_quintics(1000):
        if poly_discriminant(f) == 0:
            skipped += 1
            continue
        assert real_root_count(f) == count_real_roots_bisection(f.coeffs)
    assert skipped < 20


def test_root_count_against_bisection_other_degrees():
    rng = np.random.default_rng(15)
    for deg in (2, 3, 4, 6):
        for _ in range(80):
            c = [int(v) for v in rng.integers(-15, 16, size=deg + 1)]
            if c[deg] == 0:
                c[deg] = 1
            f = IntPolynomial(c)
            if poly_discriminant(f) == 0:
                continue
            assert real_root_count(f) == count_real_roots_bisection(f.coeffs)


def test_root_count_determines_discriminant_sign():
    # five distinct roots of which r are real: sign(disc) = (-1)^((5-r)/2)
    for f in _random_quintics(300, seed=16):
        disc = poly_discriminant(f)
        if disc == 0:
            continue
        r = real_root_count(f)
        pairs = (5 - r) // 2
        assert (disc > 0) == (pairs % 2 == 0)


# -- factor patterns mod p ------------------------------------------------------------


def test_pattern_fixed_values():
    assert factor_pattern_mod_p(X5_X_1, 2) == FactorPattern(True, (2, 3))
    x5_x = IntPolynomial([0, -1, 0, 0, 0, 1])
    assert factor_pattern_mod_p(x5_x, 3) == FactorPattern(True, (1, 1, 1, 2))


def test_pattern_ramified_primes_not_squarefree():
    # 2869 = 19 * 151; both primes see a repeated factor
    for p in (19, 151):
        assert factor_pattern_mod_p(X5_X_1, p) == FactorPattern(False, None)


def test_pattern_leading_coeff_vanishes():
    f = IntPolynomial([1, 1, 0, 0, 0, 3])
    with pytest.raises(LeadingCoeffVanishes):
        factor_pattern_mod_p(f, 3)


def test_pattern_against_brute_factorization():
    rng = np.random.default_rng(17)
    for _ in range(150):
        c = [int(v) for v in rng.integers(-10, 11, size=6)]
        if c[5] == 0:
            c[5] = 1
        f = IntPolynomial(c)
        for p in (2, 3, 5, 7, 11):
            if f.lc % p == 0:
                continue
            sf, pattern = brute_pattern_mod_p(f.coeffs, p)
            got = factor_pattern_mod_p(f, p)
            assert got.squarefree == sf
            if sf:
                assert got.pattern == pattern


def test_pattern_fast_path_matches_general_ddf():
    from quintrank.numtheory import _pattern_general
    rng = np.random.default_rng(23)
    for _ in range(120):
        c = [int(v) for v in rng.integers(-15, 16, size=6)]
        if c[5] == 0:
            c[5] = 1
        f = IntPolynomial(c)
        for p in (2, 3, 5, 7, 101, 1223):
            if f.lc % p == 0:
                continue
            assert factor_pattern_mod_p(f, p) == _pattern_general(f, p)


def test_pattern_degrees_sum_to_degree():
    rng = np.random.default_rng(18)
    for _ in range(200):
        c = [int(v) for v in rng.integers(-20, 21, size=6)]
        if c[5] == 0:
            c[5] = 1
        f = IntPolynomial(c)
        for p in (2, 3, 5, 13, 101):
            if f.lc % p == 0:
                continue
            got = factor_pattern_mod_p(f, p)
            if got.squarefree:
                assert sum(got.pattern) == 5


# -- Galois certification ----------------------------------------------------------------


def test_certify_flagship_quintic():
    cert = certify_s5(X5_X_1)
    assert cert.status == "Certified"
    p5, p2 = cert.five_cycle_witness, cert.transposition_witness
    assert factor_pattern_mod_p(X5_X_1, p5).pattern == (5,)
    assert factor_pattern_mod_p(X5_X_1, p2).pattern == (1, 1, 1, 2)
    # re-check both witnesses with the exhaustive factorizer
    assert brute_pattern_mod_p(X5_X_1.coeffs, p5) == (True, (5,))
    assert brute_pattern_mod_p(X5_X_1.coeffs, p2) == (True, (1, 1, 1, 2))
    assert cert.primes_scanned <= 200


def test_certify_solvable_quintic_inconclusive():
    # x^5 - 2 has a solvable splitting field: no transposition pattern
    f = IntPolynomial([-2, 0, 0, 0, 0, 1])
    cert = certify_s5(f)
    assert cert.status == "Inconclusive"
    assert cert.transposition_witness is None
    assert cert.five_cycle_witness is not None


def test_certify_reducible_inconclusive():
    # (x^2 + 1)(x^3 - 2): never irreducible mod p
    f = IntPolynomial([-2, 0, -2, 1, 0, 1])
    cert = certify_s5(f)
    assert cert.status == "Inconclusive"
    assert cert.five_cycle_witness is None


def test_certify_degree_precondition():
    with pytest.raises(ValueError):
        certify_s5(IntPolynomial([1, 0, 0, 0, 1]))


def test_five_cycle_density_flagship():
    # proportion of irreducible reductions over the first 500 good primes
    disc = poly_discriminant(X5_X_1)
    hits = good = 0
    for p in first_primes(510):
        if disc % p == 0:
            continue
        if good == 500:
            break
        good += 1
        if factor_pattern_mod_p(X5_X_1, p).pattern == (5,):
            hits += 1
    assert good == 500
    assert 0.1 <= hits / good <= 0.3


# -- squarefree kernel ----------------------------------------------------------


def test_squarefree_kernel_fixed_values():
    assert squarefree_kernel(2869).kernel == 2869
    assert squarefree_kernel(2869).complete
    assert squarefree_kernel(4) == type(squarefree_kernel(4))(1, True)
    assert squarefree_kernel(18).kernel == 2
    assert squarefree_kernel(-12).kernel == -3
    assert squarefree_kernel(1).kernel == 1
    with pytest.raises(ValueError):
        squarefree_kernel(0)


def test_squarefree_kernel_against_full_factorization():
    rng = np.random.default_rng(19)
    for _ in range(400):
        n = int(rng.integers(2, 10 ** 6))
        if rng.integers(0, 2):
            n = -n
        res = squarefree_kernel(n)
        assert res.complete
        expect = 1
        for p, e in factor_completely(n).items():
            if e % 2:
                expect *= p
        if n < 0:
            expect = -expect
        assert res.kernel == expect
        # the removed part is a perfect square
        quad = n // res.kernel
        assert quad > 0 and math.isqrt(quad) ** 2 == quad


def test_squarefree_kernel_cofactor_resolution():
    # semiprime cofactor below bound^3 is forced
    r = squarefree_kernel(143, trial_bound=10)
    assert r == type(r)(143, True)
    # square cofactor contributes nothing even if its root is composite
    assert squarefree_kernel(169, trial_bound=10).kernel == 1
    assert squarefree_kernel((11 * 13) ** 2, trial_bound=10).kernel == 1
    # prime-power cofactor beyond bound^3 stays unresolved
    r = squarefree_kernel(1331, trial_bound=10)
    assert not r.complete
    assert r.kernel == 1331
    # three large primes: flagged incomplete
    assert not squarefree_kernel(11 * 13 * 17, trial_bound=10).complete
    # prime cofactor resolved by the primality test
    r = squarefree_kernel(4 * 7919, trial_bound=10)
    assert r == type(r)(7919, True)


# -- resolvent and splitting ------------------------------------------------------


def test_resolvent_flagship():
    rd = resolvent(X5_X_1)
    assert rd.disc == 2869
    assert rd.squarefree_kernel == 2869
    assert rd.fundamental_disc == 2869  # 2869 = 4*717 + 1
    assert rd.complete and not rd.degenerate


def test_resolvent_negative_discriminant():
    f = IntPolynomial([0, -4, 0, 0, 0, 1])  # three real roots
    rd = resolvent(f)
    assert rd.disc < 0 and rd.fundamental_disc < 0
    assert rd.fundamental_disc % 4 in (0, 1)


def test_resolvent_degenerate_square_discriminant():
    # cyclic quintic: the real subfield of the 11th cyclotomic field
    f = IntPolynomial.descending([1, 1, -4, -3, 3, 1])
    d = poly_discriminant(f)
    assert math.isqrt(d) ** 2 == d
    rd = resolvent(f)
    assert rd.degenerate and rd.squarefree_kernel == 1


def test_resolvent_fundamental_disc_invariants():
    for f in _random_quintics(150, seed=21, lo=-12, hi=12):
        disc = poly_discriminant(f)
        if disc == 0:
            continue
        rd = resolvent(f)
        assert rd.fundamental_disc % 4 in (0, 1)
        if rd.complete:
            quad = disc // rd.squarefree_kernel
            assert quad > 0 and math.isqrt(quad) ** 2 == quad
            for p, e in factor_completely(rd.squarefree_kernel).items():
                assert e == 1


def test_resolvent_incomplete_propagates():
    rd = resolvent(X5_X_1, trial_bound=2)
    assert not rd.complete
    with pytest.raises(ValueError):
        splitting_in_resolvent(3, rd)


def test_splitting_fixed_values():
    rd = resolvent(X5_X_1)
    assert splitting_in_resolvent(3, rd) is Splitting.SPLIT
    assert splitting_in_resolvent(19, rd) is Splitting.RAMIFIED
    assert splitting_in_resolvent(151, rd) is Splitting.RAMIFIED
    toy = ResolventData(5, 5, 5, True, False)
    assert splitting_in_resolvent(2, toy) is Splitting.INERT


def test_splitting_matches_pattern_counts():
    # split primes give the resolvent quadratic two roots mod p
    rd = resolvent(X5_X_1)
    for p in first_primes(60):
        if p == 2 or rd.fundamental_disc % p == 0:
            continue
        kind = splitting_in_resolvent(p, rd)
        roots = sum(1 for x in range(p)
                    if (x * x - rd.fundamental_disc) % p == 0)
        assert (kind is Splitting.SPLIT) == (roots == 2)
        assert (kind is Splitting.INERT) == (roots == 0)


# -- polynomial plumbing -----------------------------------------------------------


def test_polynomial_basics():
    f = X5_X_1
    assert f.degree == 5 and f.lc == 1
    assert f(0) == -1 and f(1) == -1 and f(2) == 29
    assert f.derivative().coeffs == (-1, 0, 0, 0, 5)
    assert IntPolynomial([0, 0, 0]).is_zero
    assert IntPolynomial.descending([1, 2, 3]).coeffs == (3, 2, 1)
    assert str(IntPolynomial([-1, -1, 0, 0, 0, 1])) == "x^5 - x - 1"
