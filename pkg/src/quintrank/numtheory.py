"""Exact integer and polynomial arithmetic for quintic field screening.

Everything here is exact: Kronecker symbols by reciprocity, resultants
by the subresultant remainder sequence, real root counts by Sturm
chains with sign-corrected pseudo-remainders, and factorization
patterns mod p by distinct-degree splitting.  Factoring of integers is
trial division plus a deterministic Miller-Rabin; whenever a cofactor
cannot be resolved the result carries complete=False rather than a
guess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

DEFAULT_TRIAL_BOUND = 10 ** 6
DEFAULT_PRIME_BUDGET = 200

# deterministic Miller-Rabin witness set; correct for all n < 3.3e24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class NotSquarefree(RuntimeError):
    """Sturm counting requires a squarefree polynomial."""


class LeadingCoeffVanishes(RuntimeError):
    """Reduction mod p killed the leading coefficient."""


# -- polynomials -------------------------------------------------------------


def _trim(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients low to high; the zero polynomial
    has an empty coefficient tuple."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", _trim([int(c) for c in coeffs]))

    @staticmethod
    def descending(coeffs) -> "IntPolynomial":
        return IntPolynomial(list(reversed(list(coeffs))))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def lc(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            term = "x" if i == 1 else f"x^{i}" if i else ""
            mag = "" if abs(c) == 1 and i else str(abs(c))
            parts.append(("-" if c < 0 else "+", (mag + "*" + term).strip("*")
                          if mag and term else mag + term))
        sign0, body0 = parts[0]
        out = ("-" if sign0 == "-" else "") + body0
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


# -- Kronecker symbol --------------------------------------------------------


def kronecker_symbol(a: int, n: int) -> int:
    """Full Kronecker symbol (a|n) for arbitrary integers: (a|0) is 1
    exactly for a = +-1; (a|2) follows the mod-8 rule; (a|-1) is the
    sign of a."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v2 = (n & -n).bit_length() - 1
    n >>= v2
    if v2:
        if a & 1 == 0:
            return 0
        if v2 & 1 and a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        t = 0
        while a & 1 == 0:
            a >>= 1
            t += 1
        if t & 1 and n % 8 in (3, 5):
            result = -result
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a, n = n % a, a
    return result if n == 1 else 0


# -- primes ------------------------------------------------------------------


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin over a fixed witness set; deterministic for every
    n below 3.3e24, probable-prime beyond."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def _sieve(limit: int) -> tuple[int, ...]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = bytes(len(flags[p * p::p]))
    return tuple(i for i in range(limit + 1) if flags[i])


def first_primes(count: int) -> tuple[int, ...]:
    limit = 16
    while True:
        # n-th prime is below n (ln n + ln ln n) for n >= 6
        bound = max(limit, int(count * (math.log(count + 6)
                                        + math.log(math.log(count + 6)))) + 10)
        ps = _sieve(bound)
        if len(ps) >= count:
            return ps[:count]
        limit = bound * 2


# -- integer squarefree kernel -------------------------------------------------


@dataclass(frozen=True)
class SquarefreeResult:
    kernel: int
    complete: bool


def squarefree_kernel(n: int, trial_bound: int = DEFAULT_TRIAL_BOUND
                      ) -> SquarefreeResult:
    """Product of the primes dividing n to an odd power, with the sign
    of n.  Trial division up to trial_bound, then the cofactor is
    resolved when it is 1, a probable prime, a perfect square, or a
    semiprime forced by size (< trial_bound^3); otherwise the cofactor
    is kept in the kernel and complete=False."""
    if n == 0:
        raise ValueError("squarefree kernel of 0 is undefined")
    sign = -1 if n < 0 else 1
    m = abs(n)
    kernel = 1
    d = 2
    while d <= trial_bound and d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            if e & 1:
                kernel *= d
        d += 1 if d == 2 else 2
    if m == 1:
        return SquarefreeResult(sign * kernel, True)
    if d * d > m or is_probable_prime(m):
        # cofactor is prime (exactly, or with MR confidence)
        return SquarefreeResult(sign * kernel * m, True)
    root = math.isqrt(m)
    if root * root == m:
        # a square cofactor has only even exponents, whatever its factors
        return SquarefreeResult(sign * kernel, True)
    if m < trial_bound ** 3:
        # all factors exceed trial_bound, so at most two of them; not a
        # prime and not a square forces two distinct primes
        return SquarefreeResult(sign * kernel * m, True)
    return SquarefreeResult(sign * kernel * m, False)


# -- resultants and discriminants ---------------------------------------------


def _content(coeffs) -> int:
    g = 0
    for c in coeffs:
        g = math.gcd(g, c)
        if g == 1:
            break
    return max(g, 1)


def _prem(A: tuple, B: tuple) -> tuple:
    """Pseudo-remainder: lc(B)^(deg A - deg B + 1) * A modulo B."""
    R = list(A)
    dB = len(B) - 1
    c = B[-1]
    steps = len(A) - len(B) + 1
    while len(R) - 1 >= dB and R:
        lead = R[-1]
        k = len(R) - 1 - dB
        R = [c * x for x in R]
        for i, b in enumerate(B):
            R[i + k] -= lead * b
        R = list(_trim(R))
        steps -= 1
    if steps > 0 and R:
        f = c ** steps
        R = [f * x for x in R]
    return tuple(R)


def _resultant(A: tuple, B: tuple) -> int:
    """Exact resultant by the subresultant remainder sequence."""
    if not A or not B:
        return 0
    dA, dB = len(A) - 1, len(B) - 1
    if dA == 0 and dB == 0:
        return 1
    s = 1
    if dA < dB:
        if (dA & 1) and (dB & 1):
            s = -s
        A, B, dA, dB = B, A, dB, dA
    if dB == 0:
        return s * B[0] ** dA
    ca, cb = _content(A), _content(B)
    A = tuple(c // ca for c in A)
    B = tuple(c // cb for c in B)
    t = ca ** dB * cb ** dA
    g = h = 1
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        delta = dA - dB
        if (dA & 1) and (dB & 1):
            s = -s
        R = _prem(A, B)
        A = B
        denom = g * h ** delta
        B = tuple(c // denom for c in R)
        if not B:
            return 0  # nonconstant common factor
        g = A[-1]
        if delta > 0:
            h = g ** delta // h ** (delta - 1)
        if len(B) == 1:
            break
    dA = len(A) - 1
    h = B[0] ** dA // h ** (dA - 1)
    return s * t * h


def poly_discriminant(f: IntPolynomial) -> int:
    """(-1)^(d(d-1)/2) Res(f, f') / lc(f), exact."""
    d = f.degree
    if d < 2:
        raise ValueError("discriminant needs degree >= 2")
    res = _resultant(f.coeffs, f.derivative().coeffs)
    sign = -1 if (d * (d - 1) // 2) & 1 else 1
    q, r = divmod(sign * res, f.lc)
    if r:
        raise RuntimeError("resultant is not divisible by the leading coeff")
    return q


# -- real root counting --------------------------------------------------------


def _sturm_chain(f: IntPolynomial) -> list[tuple]:
    chain = [f.coeffs, f.derivative().coeffs]
    while chain[-1]:
        A, B = chain[-2], chain[-1]
        if len(B) - 1 == 0:
            break
        R = _prem(A, B)
        # pseudo-division scales by lc(B)^k; flip so the chain keeps the
        # signs of the true remainders, then shrink by the content
        scale = B[-1] ** (len(A) - len(B) + 1)
        R = tuple(-c for c in R) if scale > 0 else R
        cont = _content(R)
        chain.append(tuple(c // cont for c in R))
    return chain


def _variations(signs: list[int]) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def real_root_count(f: IntPolynomial) -> int:
    """Number of distinct real roots by Sturm's theorem."""
    if f.degree < 1:
        return 0
    chain = _sturm_chain(f)
    if len(chain[-1]) == 0:
        chain.pop()
    if len(chain[-1]) > 1:
        raise NotSquarefree("polynomial has a repeated factor")
    at_plus = [p[-1] for p in chain]
    at_minus = [p[-1] * (-1 if (len(p) - 1) & 1 else 1) for p in chain]
    return _variations(at_minus) - _variations(at_plus)


# -- arithmetic mod p ----------------------------------------------------------


def _pmod(coeffs, p):
    return _trim([c % p for c in coeffs])


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pdivmod(a, b, p):
    inv = pow(b[-1], p - 2, p) if b[-1] != 1 else 1
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] * inv % p
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - c * y) % p
        a = list(_trim(a))
    return _trim(q), _trim(a)


def _pgcd(a, b, p):
    while b:
        _, r = _pdivmod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple(c * inv % p for c in a)
    return a


def _ppowmod(base, e, mod, p):
    result = (1,)
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        e >>= 1
        if e:
            base = _pdivmod(_pmul(base, base, p), mod, p)[1]
    return result


def _psub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, y in enumerate(b):
        out[i] = (out[i] - y) % p
    return _trim(out)


@dataclass(frozen=True)
class FactorPattern:
    squarefree: bool
    pattern: Optional[tuple[int, ...]]  # sorted factor degrees, or None


# Fast quintic path: plain-list arithmetic with no allocation-heavy
# helpers.  Polynomials are ascending coefficient lists mod p.

def _rem_small(a, b, p):
    r = list(a)
    db = len(b) - 1
    lead = b[-1]
    binv = 1 if lead == 1 else pow(lead, p - 2, p)
    while len(r) - 1 >= db:
        c = r[-1] * binv % p
        if c:
            k = len(r) - 1 - db
            for i in range(db):
                r[i + k] = (r[i + k] - c * b[i]) % p
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return r


def _quo_small(a, b, p):
    # exact quotient; any remainder is discarded
    r = list(a)
    db = len(b) - 1
    binv = pow(b[-1], p - 2, p)
    q = [0] * (len(r) - db)
    while len(r) - 1 >= db:
        c = r[-1] * binv % p
        q[len(r) - 1 - db] = c
        if c:
            k = len(r) - 1 - db
            for i in range(db):
                r[i + k] = (r[i + k] - c * b[i]) % p
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return q


def _gcd_small(a, b, p):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    b = list(b)
    while b and b[-1] == 0:
        b.pop()
    while b:
        a, b = b, _rem_small(a, b, p)
    if a and a[-1] != 1:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def _mulmod_small(u, v, m, p):
    # defer the mod to one final pass; intermediate sums stay small
    dm = len(m) - 1
    w = [0] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        if x:
            for j, y in enumerate(v):
                w[i + j] += x * y
    for k in range(len(w) - 1, dm - 1, -1):
        c = w[k] % p
        if c:
            base = k - dm
            for i in range(dm):
                w[base + i] -= c * m[i]
    return [t % p for t in w[:dm]]


def _pow_poly_mod_small(u, e, m, p):
    base = _rem_small(u, m, p) if len(u) >= len(m) else list(u)
    acc = None
    while e:
        if e & 1:
            acc = list(base) if acc is None else _mulmod_small(acc, base, m, p)
        e >>= 1
        if e:
            base = _mulmod_small(base, base, m, p)
    return acc if acc is not None else [1]


def _quintic_pattern_fast(coeffs, p):
    """(squarefree, pattern) for degree-5 coeffs mod p.  Only two
    Frobenius steps are ever needed: once linear and quadratic factors
    are removed, at most one factor of degree >= 3 can remain."""
    ic = pow(coeffs[5] % p, p - 2, p)
    f = [c % p * ic % p for c in coeffs]
    deriv = [i * f[i] % p for i in range(1, 6)]
    if len(_gcd_small(f, deriv, p)) != 1:
        return False, None
    w = _pow_poly_mod_small([0, 1], p, f, p)    # x^p mod f
    wx = list(w)
    while len(wx) < 2:
        wx.append(0)
    wx[1] = (wx[1] - 1) % p
    g1 = _gcd_small(f, wx, p)
    n1 = len(g1) - 1
    if n1 == 5:
        return True, (1, 1, 1, 1, 1)
    pattern = [1] * n1
    v = _quo_small(f, g1, p) if n1 else f
    dv = len(v) - 1
    if dv == 0:
        return True, tuple(pattern)
    if dv in (2, 3):
        # no linear factor remains, so degree 2 or 3 is irreducible
        pattern.append(dv)
        return True, tuple(sorted(pattern))
    # dv is 4 or 5: one more Frobenius finds the quadratic part
    wv = _rem_small(w, v, p) if n1 else w
    w2 = _pow_poly_mod_small(wv, p, v, p)       # x^(p^2) mod v
    w2 = list(w2)
    while len(w2) < 2:
        w2.append(0)
    w2[1] = (w2[1] - 1) % p
    g2 = _gcd_small(v, w2, p)
    n2 = (len(g2) - 1) // 2
    pattern.extend([2] * n2)
    rest = dv - 2 * n2
    if rest:
        pattern.append(rest)
    return True, tuple(sorted(pattern))


def factor_pattern_mod_p(f: IntPolynomial, p: int) -> FactorPattern:
    """Degrees of the irreducible factors of f mod p by distinct-degree
    splitting; pattern is omitted when f mod p has a repeated factor."""
    if f.lc % p == 0:
        raise LeadingCoeffVanishes(f"p={p} divides the leading coefficient")
    if f.degree == 5 and p < (1 << 20):
        squarefree, pattern = _quintic_pattern_fast(list(f.coeffs), p)
        return FactorPattern(squarefree, pattern)
    return _pattern_general(f, p)


def _pattern_general(f: IntPolynomial, p: int) -> FactorPattern:
    fp = _pmod(f.coeffs, p)
    inv = pow(fp[-1], p - 2, p)
    fp = tuple(c * inv % p for c in fp)
    deriv = _pmod([i * c for i, c in enumerate(fp)][1:], p)
    if len(_pgcd(fp, deriv, p)) != 1:
        return FactorPattern(False, None)
    pattern = []
    v = fp
    x = (0, 1)
    w = x
    d = 0
    while len(v) - 1 > 0:
        d += 1
        if 2 * d > len(v) - 1:
            pattern.append(len(v) - 1)
            break
        w = _ppowmod(w, p, v, p)
        g = _pgcd(_psub(w, x, p), v, p)
        if len(g) > 1:
            deg = len(g) - 1
            pattern.extend([d] * (deg // d))
            v = _pdivmod(v, g, p)[0]
            w = _pdivmod(w, v, p)[1]
    return FactorPattern(True, tuple(sorted(pattern)))


# -- Galois certification --------------------------------------------------------


@dataclass(frozen=True)
class S5Certificate:
    status: str                       # "Certified" or "Inconclusive"
    five_cycle_witness: Optional[int]
    transposition_witness: Optional[int]
    primes_scanned: int


def certify_s5(f: IntPolynomial, prime_budget: int = DEFAULT_PRIME_BUDGET,
               disc: Optional[int] = None) -> S5Certificate:
    """Sound one-sided Galois test for a quintic: a prime with factor
    pattern {5} forces transitivity, one with {1,1,1,2} puts a
    transposition in the group, and a transitive degree-5 group with a
    transposition is the full symmetric group.  Scans the first
    prime_budget primes not dividing the discriminant; never certifies
    falsely, but may return Inconclusive."""
    if f.degree != 5:
        raise ValueError("certification applies to quintics")
    if disc is None:
        disc = poly_discriminant(f)
    if disc == 0:
        raise ValueError("discriminant vanishes")
    five = transposition = None
    scanned = 0
    for p in first_primes(prime_budget):
        if disc % p == 0 or f.lc % p == 0:
            continue
        scanned += 1
        pat = factor_pattern_mod_p(f, p).pattern
        if pat == (5,):
            five = five if five is not None else p
        elif pat == (1, 1, 1, 2):
            transposition = transposition if transposition is not None else p
        if five is not None and transposition is not None:
            return S5Certificate("Certified", five, transposition, scanned)
    return S5Certificate("Inconclusive", five, transposition, scanned)


# -- quadratic resolvent -----------------------------------------------------------


@dataclass(frozen=True)
class ResolventData:
    disc: int
    squarefree_kernel: int
    fundamental_disc: int
    complete: bool
    degenerate: bool      # square discriminant: the resolvent collapses


def resolvent(f: IntPolynomial, trial_bound: int = DEFAULT_TRIAL_BOUND,
              disc: Optional[int] = None) -> ResolventData:
    if disc is None:
        disc = poly_discriminant(f)
    if disc == 0:
        raise NotSquarefree("zero discriminant has no resolvent")
    sk = squarefree_kernel(disc, trial_bound)
    D = sk.kernel
    fund = D if D % 4 == 1 else 4 * D
    return ResolventData(disc, D, fund, sk.complete, D == 1)


class Splitting(Enum):
    SPLIT = "Split"
    INERT = "Inert"
    RAMIFIED = "Ramified"


def splitting_in_resolvent(p: int, rd: ResolventData) -> Splitting:
    if not rd.complete:
        raise ValueError("resolvent factorization is incomplete")
    s = kronecker_symbol(rd.fundamental_disc, p)
    return Splitting.SPLIT if s == 1 else (
        Splitting.INERT if s == -1 else Splitting.RAMIFIED)
