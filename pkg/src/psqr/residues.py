"""Legendre-Jacobi symbols and the sign pattern of a set at a prime.

Both symbol routines carry a compiled fast path for machine-word arguments
(initialized lazily, falling back to the pure-Python loops if unavailable);
censuses call them millions of times.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import EvenModulus, NotPrime
from .psprimes import is_prime

_WORD_LIMIT = 1 << 62


def _jacobi_loop(a: int, n: int) -> int:
    """Binary reciprocity reduction; 0 <= a < n, n odd. Reference path."""
    result = 1
    while a:
        z = (a & -a).bit_length() - 1
        if z & 1 and n & 7 in (3, 5):
            result = -result
        a >>= z
        if a & n & 3 == 3:
            result = -result
        a, n = n % a, a
    return result if n == 1 else 0


_CORES: tuple | None = None
_CORES_TRIED = False


def _cores():
    """(jacobi, powmod) compiled for word-size arguments, or None."""
    global _CORES, _CORES_TRIED
    if not _CORES_TRIED:
        _CORES_TRIED = True
        try:
            from numba import njit

            @njit("int64(int64, int64)", cache=True)
            def jac(a, n):
                result = 1
                while a:
                    while not a & 1:
                        a >>= 1
                        r = n & 7
                        if r == 3 or r == 5:
                            result = -result
                    if a & 3 == 3 and n & 3 == 3:
                        result = -result
                    t = n % a
                    n = a
                    a = t
                if n == 1:
                    return result
                return 0

            @njit("int64(int64, int64, int64)", cache=True)
            def powmod(a, e, p):
                r = 1
                b = a % p
                while e:
                    if e & 1:
                        r = r * b % p
                    b = b * b % p
                    e >>= 1
                return r

            jac(2, 7)
            powmod(2, 3, 7)
            _CORES = (jac, powmod)
        except Exception:
            _CORES = None
    return _CORES


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1; 0 iff gcd(a, n) > 1.

    Binary quadratic-reciprocity reduction, no factorization. Negative and
    out-of-range numerators fold in through periodicity mod n.
    """
    if n < 1 or not n & 1:
        raise EvenModulus(f"Jacobi modulus must be odd and positive, got {n}")
    a %= n
    cores = _CORES if _CORES_TRIED else _cores()
    if cores is not None and n < _WORD_LIMIT:
        return int(cores[0](a, n))
    return _jacobi_loop(a, n)


_prime_verdicts: dict[int, bool] = {}


def _odd_prime(p: int) -> bool:
    ok = _prime_verdicts.get(p)
    if ok is None:
        ok = p > 2 and bool(p & 1) and is_prime(p)
        if len(_prime_verdicts) > (1 << 20):
            _prime_verdicts.clear()
        _prime_verdicts[p] = ok
    return ok


def legendre_euler(a: int, p: int) -> int:
    """Legendre symbol by Euler's criterion a**((p-1)/2) mod p.

    Independent oracle for jacobi at odd prime moduli.
    """
    if not _odd_prime(p):
        raise NotPrime(f"Euler's criterion needs an odd prime, got {p}")
    cores = _CORES if _CORES_TRIED else _cores()
    if cores is not None and 0 <= a and p < (1 << 31):
        r = int(cores[1](a % p, (p - 1) >> 1, p))
    else:
        r = pow(a, (p - 1) >> 1, p)
    return r - p if r > 1 else r


@dataclass(frozen=True)
class SignPattern:
    """Signs (s/p) of an ordered element list at a prime, all nonzero."""

    elements: tuple[int, ...]
    signs: tuple[int, ...]

    def key(self) -> str:
        """Histogram key: char i is '0' for +1 and '1' for -1 at position i."""
        return "".join("0" if s == 1 else "1" for s in self.signs)


def pattern_at(S: Sequence[int], p: int) -> Optional[SignPattern]:
    """Sign pattern of S at odd prime p, or None when p divides some element."""
    if not _odd_prime(p):
        raise NotPrime(f"sign patterns are defined at odd primes, got {p}")
    elements = tuple(int(s) for s in S)
    signs = []
    for s in elements:
        j = jacobi(s, p)
        if j == 0:
            return None
        signs.append(j)
    return SignPattern(elements, tuple(signs))
