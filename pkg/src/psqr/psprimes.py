"""Exact [n^c] arithmetic and Piatetski-Shapiro prime streams.

Floating point only ever supplies starting guesses; every floor, root,
and primality verdict is certified by integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import Overflow, PreconditionViolated

# Deterministic Miller-Rabin witness set covering the full 64-bit range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

PRIME_BUDGET = 1 << 64        # largest prime value any stream may emit
MAX_EXPONENT_NUM = 255        # cap on the numerator of c, enforced at parse time
_POW_BIT_BUDGET = 1 << 21     # cap on bits of n**num intermediates

_SIEVE_WIDTH_CAP = 1 << 26    # widest value window we sieve instead of testing
_SIEVE_VALUE_CAP = 1 << 44    # beyond this, base primes get too large to sieve


def is_prime(m: int) -> bool:
    """Exact primality verdict, deterministic for the full 64-bit range."""
    if m >= PRIME_BUDGET:
        raise Overflow(f"primality budget is 2**64, got a {m.bit_length()}-bit value")
    if m < 2:
        return False
    for p in _MR_BASES:
        if m % p == 0:
            return m == p
    d = m - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


# -- prime sieves ------------------------------------------------------------

_base_primes = np.array([2, 3, 5, 7], dtype=np.int64)


def primes_up_to(limit: int) -> np.ndarray:
    """All primes <= limit, ascending (cached, grows monotonically)."""
    global _base_primes
    if limit > int(_base_primes[-1]):
        n = max(limit, 2 * int(_base_primes[-1]))
        sieve = np.ones(n + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, math.isqrt(n) + 1):
            if sieve[p]:
                sieve[p * p :: p] = False
        _base_primes = np.flatnonzero(sieve).astype(np.int64)
    cut = np.searchsorted(_base_primes, limit, side="right")
    return _base_primes[:cut]


def _segment_is_prime(lo: int, hi: int) -> np.ndarray:
    """Boolean array over [lo, hi] inclusive, True exactly at primes."""
    width = hi - lo + 1
    seg = np.ones(width, dtype=bool)
    for k in range(lo, min(2, hi + 1)):
        seg[k - lo] = False
    for p in primes_up_to(math.isqrt(hi)):
        p = int(p)
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start <= hi:
            seg[start - lo :: p] = False
    return seg


def primes_in_range(lo: int, hi: int, chunk: int = 1 << 22) -> Iterator[int]:
    """Primes p with lo < p <= hi, ascending, by segmented sieve."""
    pos = lo
    while pos < hi:
        top = min(pos + chunk, hi)
        seg = _segment_is_prime(pos + 1, top)
        for off in np.flatnonzero(seg):
            yield pos + 1 + int(off)
        pos = top


# -- exact roots and floors --------------------------------------------------

def integer_nth_root(x: int, k: int) -> int:
    """floor(x ** (1/k)) for x >= 0, k >= 1, certified by integer compares."""
    if x < 0:
        raise ValueError("negative radicand")
    if k < 1:
        raise ValueError("root order must be >= 1")
    if k == 1 or x < 2:
        return x
    bits = x.bit_length()
    if bits <= 900:
        # float seed padded to sit above the true root
        est = x ** (1.0 / k)
        r = int(est + est * 1e-10) + 2
    else:
        r = 1 << -(-bits // k)
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


@dataclass(frozen=True)
class RationalExponent:
    """Reduced exponent c = num/den with 1 <= c < 2 and a capped numerator."""

    num: int
    den: int

    def __post_init__(self) -> None:
        if self.num < 1 or self.den < 1:
            raise ValueError(f"exponent must be positive, got {self.num}/{self.den}")
        g = math.gcd(self.num, self.den)
        if g > 1:
            object.__setattr__(self, "num", self.num // g)
            object.__setattr__(self, "den", self.den // g)
        if not self.den <= self.num < 2 * self.den:
            raise ValueError(f"exponent must satisfy 1 <= c < 2, got {self.num}/{self.den}")
        if self.num > MAX_EXPONENT_NUM:
            raise ValueError(
                f"exponent numerator {self.num} exceeds {MAX_EXPONENT_NUM}; "
                "intermediate powers would outgrow the integer budget"
            )

    @classmethod
    def parse(cls, text: str) -> "RationalExponent":
        """Parse 'p/q' or 'p'; decimal forms are rejected to keep floors exact."""
        body = text.strip()
        num, slash, den = body.partition("/")
        try:
            if slash:
                return cls(int(num), int(den))
            return cls(int(body), 1)
        except ValueError as exc:
            raise ValueError(
                f"exponent must be an exact fraction like 11/10, got {text!r}"
            ) from exc

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def gamma(self) -> Fraction:
        """The reciprocal exponent 1/c."""
        return Fraction(self.den, self.num)

    @property
    def theorem_backed(self) -> bool:
        """True iff c lies in the proven range c <= 243/205."""
        return 205 * self.num <= 243 * self.den

    def __str__(self) -> str:
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"


def floor_pow(n: int, c: RationalExponent) -> int:
    """floor(n ** (num/den)) exactly: the unique m with m**den <= n**num < (m+1)**den."""
    if n < 1:
        raise PreconditionViolated(f"floor_pow needs n >= 1, got {n}")
    if c.num == c.den:
        return n
    if n.bit_length() * c.num > _POW_BIT_BUDGET:
        raise Overflow(f"n**{c.num} would exceed the {_POW_BIT_BUDGET}-bit budget")
    return integer_nth_root(n**c.num, c.den)


def is_ps_prime(p: int, c: RationalExponent) -> bool:
    """True iff p = floor(n**c) for some integer n.

    Exact form of the floor-difference test: the interval [p^gamma, (p+1)^gamma)
    contains an integer iff ceil((p+1)^gamma) - ceil(p^gamma) = 1.
    """
    if c.num == c.den:
        return True
    a, b = c.num, c.den
    if p.bit_length() * b > _POW_BIT_BUDGET:
        raise Overflow(f"p**{b} would exceed the {_POW_BIT_BUDGET}-bit budget")
    # p prime and gcd(a, b) = 1 with a >= 3, so p^(b/a) is never an integer
    n = integer_nth_root(p**b, a) + 1
    return n**a < (p + 1) ** b


@dataclass(frozen=True)
class PsPrimeRange:
    """The n-window (lo, hi] together with its exponent."""

    exponent: RationalExponent
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if not 1 <= self.lo < self.hi:
            raise PreconditionViolated(f"need 1 <= lo < hi, got ({self.lo}, {self.hi}]")
        if floor_pow(self.hi, self.exponent) >= PRIME_BUDGET:
            raise Overflow("hi**c exceeds the 64-bit prime budget")


BLOCK_SIZE = 1 << 16


def ps_primes_in(rng: PsPrimeRange, block_size: int = BLOCK_SIZE) -> Iterator[tuple[int, int]]:
    """Yield (n, floor(n**c)) for rng.lo < n <= rng.hi where the floor is prime.

    Processed in fixed n-blocks so range censuses can partition work
    deterministically; ascending in n.
    """
    if block_size < 1:
        raise PreconditionViolated("block_size must be positive")
    for b_lo in range(rng.lo, rng.hi, block_size):
        b_hi = min(b_lo + block_size, rng.hi)
        yield from _ps_block(rng.exponent, b_lo, b_hi)


def _ps_block(c: RationalExponent, lo: int, hi: int) -> Iterator[tuple[int, int]]:
    """One block of the stream: n in (lo, hi]."""
    if c.num == c.den:
        seg = _segment_is_prime(lo + 1, hi)
        for off in np.flatnonzero(seg):
            p = lo + 1 + int(off)
            yield (p, p)
        return

    a, b = c.num, c.den
    m_lo = floor_pow(lo + 1, c)
    m_hi = floor_pow(hi, c)
    seg = None
    if m_hi - m_lo <= _SIEVE_WIDTH_CAP and m_hi <= _SIEVE_VALUE_CAP:
        seg = _segment_is_prime(m_lo, m_hi)

    cands = None
    if m_hi < (1 << 52):
        ns = np.arange(lo + 1, hi + 1, dtype=np.float64)
        cands = np.floor(ns ** (a / b)).astype(np.int64)

    for i, n in enumerate(range(lo + 1, hi + 1)):
        npow = n**a
        if cands is None:
            m = integer_nth_root(npow, b)
        else:
            # certify the float candidate; off by at most one in practice
            m = int(cands[i])
            while m**b > npow:
                m -= 1
            while (m + 1) ** b <= npow:
                m += 1
        if seg is not None:
            if seg[m - m_lo]:
                yield (n, m)
        elif is_prime(m):
            yield (n, m)
