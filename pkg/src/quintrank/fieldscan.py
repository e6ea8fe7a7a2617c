"""Quintic field supply: ingestion, enumeration, dedup, scan, cache.

A QuinticField wraps a monic separable integer quintic and derives its
data lazily: discriminant, signature, quadratic resolvent, S5
certificate, and a dedupe fingerprint (squarefree discriminant kernel
plus the factorization patterns at the first 20 primes not dividing the
discriminant).  Fingerprint identity is a heuristic for field
isomorphism, not a proof, so every merge is audited against 30 further
primes and a disagreement raises instead of silently collapsing two
fields.

Enumeration iterates coefficient vectors in lexicographic order, which
makes the kept representative of each fingerprint class the
lexicographically smallest vector and the whole stream reproducible.
The cache is an append-only JSONL file with a SHA-256 checksum per
record; corrupt lines are detected at load, reported, and simply
recomputed.  Single writer, any number of readers.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional

from .numtheory import (
    DEFAULT_PRIME_BUDGET,
    DEFAULT_TRIAL_BOUND,
    IntPolynomial,
    ResolventData,
    S5Certificate,
    certify_s5,
    factor_pattern_mod_p,
    first_primes,
    poly_discriminant,
    real_root_count,
    resolvent,
)
from .rankgrowth import CurveData, certify_pair

MAX_ENUM_HEIGHT = 50
FINGERPRINT_PRIMES = 20
AUDIT_PRIMES = 30


class NotSeparable(ValueError):
    """Zero discriminant: the polynomial has a repeated root."""


class FalseMergeError(RuntimeError):
    """Two fields shared a fingerprint but disagree at audit primes."""


class ChecksumMismatch(RuntimeError):
    """A cache entry failed its checksum."""


@dataclass
class Instrumentation:
    disc_computations: int = 0

    def reset(self):
        self.disc_computations = 0


INSTRUMENTATION = Instrumentation()


def _good_primes(disc: int, count: int, skip: int = 0) -> list[int]:
    """First `count` primes not dividing disc, after skipping `skip`."""
    budget = 64
    while True:
        good = [p for p in first_primes(budget) if disc % p != 0]
        if len(good) >= skip + count:
            return good[skip:skip + count]
        budget *= 2


class QuinticField:
    """Monic separable integer quintic with lazily derived field data."""

    __slots__ = ("poly", "label", "prime_budget", "trial_bound",
                 "_disc", "_signature", "_resolvent", "_certificate",
                 "_fingerprint", "_extended")

    def __init__(self, poly: IntPolynomial, label: Optional[str] = None,
                 prime_budget: int = DEFAULT_PRIME_BUDGET,
                 trial_bound: int = DEFAULT_TRIAL_BOUND):
        if poly.degree != 5 or poly.lc != 1:
            raise ValueError("expected a monic quintic")
        self.poly = poly
        self.label = label if label is not None else str(poly)
        self.prime_budget = prime_budget
        self.trial_bound = trial_bound
        INSTRUMENTATION.disc_computations += 1
        disc = poly_discriminant(poly)
        if disc == 0:
            raise NotSeparable(f"{poly} has a repeated root")
        self._disc = disc
        self._signature = None
        self._resolvent = None
        self._certificate = None
        self._fingerprint = None
        self._extended = None

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Coefficients a5..a0, descending."""
        return tuple(reversed(self.poly.coeffs))

    @property
    def disc(self) -> int:
        return self._disc

    @property
    def signature(self) -> tuple[int, int]:
        if self._signature is None:
            r1 = real_root_count(self.poly)
            self._signature = (r1, (5 - r1) // 2)
        return self._signature

    @property
    def resolvent(self) -> ResolventData:
        if self._resolvent is None:
            self._resolvent = resolvent(self.poly, self.trial_bound,
                                        disc=self._disc)
        return self._resolvent

    @property
    def certificate(self) -> S5Certificate:
        if self._certificate is None:
            self._certificate = certify_s5(self.poly, self.prime_budget,
                                           disc=self._disc)
        return self._certificate

    @property
    def s5_status(self) -> str:
        return self.certificate.status

    def _patterns(self, count: int, skip: int) -> tuple:
        ps = _good_primes(self._disc, count, skip)
        return tuple(factor_pattern_mod_p(self.poly, p).pattern for p in ps)

    @property
    def fingerprint(self) -> tuple:
        if self._fingerprint is None:
            self._fingerprint = (self.resolvent.squarefree_kernel,
                                 self._patterns(FINGERPRINT_PRIMES, 0))
        return self._fingerprint

    @property
    def extended_fingerprint(self) -> tuple:
        if self._extended is None:
            self._extended = self._patterns(AUDIT_PRIMES, FINGERPRINT_PRIMES)
        return self._extended

    def __repr__(self):
        return f"QuinticField({self.label!r})"

    def to_record(self) -> dict:
        """Complete derived data, JSON-ready; forces all computations."""
        sig = self.signature
        rd = self.resolvent
        cert = self.certificate
        fp = self.fingerprint
        return {
            "coeffs": list(self.coeffs),
            "label": self.label,
            "disc": self._disc,
            "signature": list(sig),
            "resolvent": [rd.disc, rd.squarefree_kernel, rd.fundamental_disc,
                          rd.complete, rd.degenerate],
            "s5": [cert.status, cert.five_cycle_witness,
                   cert.transposition_witness, cert.primes_scanned],
            "fingerprint": [fp[0], [list(p) for p in fp[1]]],
            "prime_budget": self.prime_budget,
            "trial_bound": self.trial_bound,
        }

    @staticmethod
    def from_record(rec: dict) -> "QuinticField":
        """Rebuild without recomputing anything."""
        self = object.__new__(QuinticField)
        self.poly = IntPolynomial.descending(rec["coeffs"])
        self.label = rec["label"]
        self.prime_budget = rec["prime_budget"]
        self.trial_bound = rec["trial_bound"]
        self._disc = rec["disc"]
        self._signature = tuple(rec["signature"])
        self._resolvent = ResolventData(*rec["resolvent"])
        self._certificate = S5Certificate(*rec["s5"])
        self._fingerprint = (rec["fingerprint"][0],
                             tuple(tuple(p) for p in rec["fingerprint"][1]))
        self._extended = None
        return self


# -- cache ---------------------------------------------------------------------


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _fp_key(fp_jsonable) -> str:
    return _canonical_json(fp_jsonable)


class FieldCache:
    """Append-only JSONL store of derived field records.

    Every line is a record plus its SHA-256 checksum.  Lines that fail
    to parse or to verify are skipped and listed in corrupt_lines
    (strict=True raises instead); callers recompute and re-put, and the
    newest record for a key wins on reload.
    """

    def __init__(self, path, strict: bool = False):
        self.path = Path(path)
        self._by_coeffs: dict[tuple, dict] = {}
        self._by_fp: dict[str, dict] = {}
        self.corrupt_lines: list[int] = []
        if self.path.exists():
            with open(self.path, "r", encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    if not line.strip():
                        continue
                    try:
                        rec = self._verify_line(line, lineno)
                    except ChecksumMismatch:
                        if strict:
                            raise
                        self.corrupt_lines.append(lineno)
                        continue
                    self._index(rec)

    @staticmethod
    def _verify_line(line: str, lineno: int) -> dict:
        try:
            obj = json.loads(line)
            claimed = obj.pop("checksum")
        except (json.JSONDecodeError, KeyError, AttributeError, TypeError):
            raise ChecksumMismatch(f"cache line {lineno} is unreadable")
        digest = hashlib.sha256(
            _canonical_json(obj).encode("utf-8")).hexdigest()
        if digest != claimed:
            raise ChecksumMismatch(f"cache line {lineno} fails its checksum")
        return obj

    def _index(self, rec: dict):
        self._by_coeffs[tuple(rec["coeffs"])] = rec
        self._by_fp[_fp_key(rec["fingerprint"])] = rec

    def put(self, field: QuinticField):
        rec = field.to_record()
        line = dict(rec)
        line["checksum"] = hashlib.sha256(
            _canonical_json(rec).encode("utf-8")).hexdigest()
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(_canonical_json(line) + "\n")
        self._index(rec)

    def get(self, coeffs) -> Optional[QuinticField]:
        rec = self._by_coeffs.get(tuple(coeffs))
        return QuinticField.from_record(rec) if rec is not None else None

    def get_by_fingerprint(self, fp) -> Optional[QuinticField]:
        key = _fp_key([fp[0], [list(p) for p in fp[1]]])
        rec = self._by_fp.get(key)
        return QuinticField.from_record(rec) if rec is not None else None

    def __len__(self):
        return len(self._by_coeffs)


def field_from_coeffs(coeffs, label: Optional[str] = None,
                      cache: Optional[FieldCache] = None,
                      prime_budget: int = DEFAULT_PRIME_BUDGET,
                      trial_bound: int = DEFAULT_TRIAL_BOUND) -> QuinticField:
    """Construct a field, serving it from the cache when possible; a
    cache miss derives everything and stores the record."""
    coeffs = tuple(int(c) for c in coeffs)
    if cache is not None:
        hit = cache.get(coeffs)
        if hit is not None:
            return hit
    field = QuinticField(IntPolynomial.descending(coeffs), label,
                         prime_budget, trial_bound)
    if cache is not None:
        cache.put(field)
    return field


# -- ingestion -------------------------------------------------------------------


_CSV_HEADER = "label,a5,a4,a3,a2,a1,a0"


def _default_on_error(lineno: int, message: str):
    print(f"row {lineno} skipped: {message}", file=sys.stderr)


def ingest_fields(path, fmt: str = "csv",
                  cache: Optional[FieldCache] = None,
                  on_error: Optional[Callable[[int, str], None]] = None,
                  prime_budget: int = DEFAULT_PRIME_BUDGET,
                  trial_bound: int = DEFAULT_TRIAL_BOUND
                  ) -> Iterator[QuinticField]:
    """Stream fields from a table; malformed rows are reported with
    their line number and skipped, never fatal."""
    if fmt not in ("csv", "jsonl"):
        raise ValueError(f"unknown format {fmt!r}")
    report = on_error if on_error is not None else _default_on_error
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if fmt == "csv" and line == _CSV_HEADER:
                continue
            try:
                if fmt == "csv":
                    parts = line.split(",")
                    if len(parts) != 7:
                        raise ValueError("expected label plus 6 coefficients")
                    label = parts[0].strip() or None
                    coeffs = [int(x) for x in parts[1:]]
                else:
                    obj = json.loads(line)
                    label = obj.get("label")
                    coeffs = [int(c) for c in obj["coeffs"]]
                    if len(coeffs) != 6:
                        raise ValueError("expected 6 coefficients a5..a0")
                if coeffs[0] != 1:
                    raise ValueError("NotMonic: leading coefficient must be 1")
                field = field_from_coeffs(coeffs, label, cache,
                                          prime_budget, trial_bound)
            except NotSeparable:
                report(lineno, "NotSeparable: zero discriminant")
                continue
            except (ValueError, KeyError, json.JSONDecodeError) as exc:
                report(lineno, str(exc))
                continue
            yield field


# -- enumeration and dedup ----------------------------------------------------------


def _shift_desc(coeffs: tuple[int, ...], c: int) -> tuple[int, ...]:
    """Coefficients of f(x + c), descending input and output."""
    asc = list(reversed(coeffs))
    acc = [0] * len(asc)
    cur = [1]
    for a in asc:
        for i, t in enumerate(cur):
            acc[i] += a * t
        nxt = [0] * (len(cur) + 1)
        for i, t in enumerate(cur):
            nxt[i] += c * t
            nxt[i + 1] += t
        cur = nxt
    return tuple(reversed(acc))


def _provably_same_field(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    """True when the monic quintics a and b are related by a mirror
    x -> -x, a reciprocal (unit constant term), or a translation, in
    any combination of at most one reciprocal, one mirror and one
    shift.  Those moves send a root to -x, 1/x or x - c, so they never
    change the generated field.  False only means "not proven here"."""
    variants = [b]
    if abs(b[5]) == 1:
        s = b[5]
        variants.append(tuple(x // s for x in reversed(b)))
    variants += [(v[0], -v[1], v[2], -v[3], v[4], -v[5]) for v in variants]
    for v in variants:
        delta = v[1] - a[1]
        if delta % 5 == 0 and _shift_desc(a, delta // 5) == v:
            return True
    return False


def dedupe_stream(fields: Iterable[QuinticField], audit: bool = True
                  ) -> Iterator[QuinticField]:
    """Keep the first field of each fingerprint class.  With audit on,
    every merge must either be provably a same-field transform or agree
    at 30 extra primes; a disagreement means the fingerprint collided
    for two genuinely different fields and raises FalseMergeError."""
    seen: dict[tuple, QuinticField] = {}
    for field in fields:
        fp = field.fingerprint
        rep = seen.get(fp)
        if rep is not None:
            if audit and not _provably_same_field(rep.coeffs, field.coeffs) \
                    and rep.extended_fingerprint != field.extended_fingerprint:
                raise FalseMergeError(
                    f"{rep.label} and {field.label} share a fingerprint but "
                    f"split differently at audit primes")
            continue
        seen[fp] = field
        yield field


def _has_integer_root(coeffs_desc: tuple[int, ...]) -> bool:
    # a rational root of a monic integer polynomial is an integer
    # dividing the constant term
    a0 = coeffs_desc[-1]
    if a0 == 0:
        return True
    d = 1
    while d * d <= abs(a0):
        if a0 % d == 0:
            for r in (d, -d, a0 // d, -(a0 // d)):
                acc = 0
                for c in coeffs_desc:
                    acc = acc * r + c
                if acc == 0:
                    return True
        d += 1
    return False


def enumerate_quintics(coeff_height: int, disc_bound: int,
                       prime_budget: int = DEFAULT_PRIME_BUDGET,
                       trial_bound: int = DEFAULT_TRIAL_BOUND,
                       cache: Optional[FieldCache] = None,
                       audit: bool = True) -> Iterator[QuinticField]:
    """All certified S5 fields from monic quintics with |a_i| <=
    coeff_height and |disc| <= disc_bound, deduplicated by fingerprint.
    Lexicographic coefficient order makes the output deterministic and
    the kept representatives lexicographically smallest."""
    if not 0 <= coeff_height <= MAX_ENUM_HEIGHT:
        raise ValueError(f"coefficient height must be in [0, {MAX_ENUM_HEIGHT}]")

    def raw() -> Iterator[QuinticField]:
        span = range(-coeff_height, coeff_height + 1)
        for tail in product(span, repeat=5):
            coeffs = (1,) + tail
            if _has_integer_root(coeffs):
                continue  # reducible, can never certify
            if cache is not None:
                hit = cache.get(coeffs)
                if hit is not None:
                    if abs(hit.disc) <= disc_bound \
                            and hit.s5_status == "Certified":
                        yield hit
                    continue
            try:
                field = QuinticField(IntPolynomial.descending(coeffs),
                                     prime_budget=prime_budget,
                                     trial_bound=trial_bound)
            except NotSeparable:
                continue
            if abs(field.disc) > disc_bound:
                continue
            if field.s5_status != "Certified":
                continue
            if cache is not None:
                cache.put(field)
            yield field

    yield from dedupe_stream(raw(), audit=audit)


# -- scan -----------------------------------------------------------------------


@dataclass(frozen=True)
class BucketStat:
    X: int
    total: int
    admissible: int
    odd: int

    def __post_init__(self):
        assert 0 <= self.odd <= self.admissible <= self.total

    @property
    def odd_proportion(self) -> Optional[float]:
        return self.odd / self.admissible if self.admissible else None


@dataclass(frozen=True)
class ScanReport:
    curve: str
    buckets: tuple[BucketStat, ...]

    def __post_init__(self):
        for a, b in zip(self.buckets, self.buckets[1:]):
            assert a.X < b.X
            assert a.total <= b.total and a.admissible <= b.admissible \
                and a.odd <= b.odd

    def to_json_dict(self) -> dict:
        return {"curve": self.curve,
                "buckets": [{"X": b.X, "total": b.total,
                             "admissible": b.admissible, "odd": b.odd}
                            for b in self.buckets]}


def scan(curve: CurveData, fields: Iterable[QuinticField],
         bucket_edges: Iterable[int]) -> ScanReport:
    """Cumulative counts per discriminant bound X: fields seen,
    admissible pairs, and odd-parity pairs (the certified lower bound
    for the number of fields with rank growth)."""
    edges = [int(x) for x in bucket_edges]
    if not edges or any(a >= b for a, b in zip(edges, edges[1:])):
        raise ValueError("bucket edges must be strictly ascending, nonempty")
    stats = [[0, 0, 0] for _ in edges]
    for field in fields:
        ad = abs(field.disc)
        if ad > edges[-1]:
            continue
        cert = certify_pair(curve, field)
        for i, x in enumerate(edges):
            if ad <= x:
                stats[i][0] += 1
                if cert.admissible:
                    stats[i][1] += 1
                    if cert.growth == "Certified":
                        stats[i][2] += 1
    return ScanReport(curve.label, tuple(
        BucketStat(x, *row) for x, row in zip(edges, stats)))
