"""Numerical workbench for the sawtooth expansion and its cancellation sums.

The truncated expansion is the Vaaler approximation: coefficient weights
W(t) = pi t (1 - t) cot(pi t) + t at t = j/(J+1), bounded by the Fejer-kernel
majorant delta = F_J/(2J+2). Its defining inequalities are the contract here;
decay constants: |a(j)| <= 1/(2 pi |j|) and b(j) <= 1/(2J+2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import PreconditionViolated
from .kernels import factorize
from .psprimes import primes_up_to
from .residues import jacobi

TWO_PI = 2.0 * math.pi


def psi(x: float) -> float:
    """Sawtooth x - floor(x) - 1/2, with values in [-1/2, 1/2)."""
    return x - math.floor(x) - 0.5


def _vaaler_weight(t: float) -> float:
    return math.pi * t * (1.0 - t) / math.tan(math.pi * t) + t


class TruncatedExpansion:
    """Degree-J sawtooth approximation psi* with nonnegative majorant delta."""

    A_DECAY = 1.0 / TWO_PI  # |a(j)| * |j| never exceeds this
    B_DECAY = 0.5           # b(j) * (J+1) never exceeds this

    def __init__(self, J: int, a_coeffs: dict[int, complex], b_coeffs: dict[int, float]):
        self.J = J
        self.a_coeffs = a_coeffs
        self.b_coeffs = b_coeffs
        # sine-series weights W_j/(pi j), recovered from a(j) = i W_j/(2 pi j)
        self._w = np.array([2.0 * a_coeffs[j].imag for j in range(1, J + 1)])

    def psi_star(self, x):
        """Evaluate psi* at x (scalar or array).

        Arguments are reduced mod 1 and reflected into [0, 1/2] (the series is
        odd around integers), keeping every sine argument well conditioned.
        """
        u = np.mod(np.asarray(x, dtype=np.float64), 1.0)
        flip = u > 0.5
        w = np.where(flip, 1.0 - u, u)
        acc = np.zeros_like(w)
        for j in range(1, self.J + 1):
            acc -= self._w[j - 1] * np.sin(TWO_PI * j * w)
        acc = np.where(flip, -acc, acc)
        return acc if acc.ndim else float(acc)

    def delta(self, x):
        """Fejer majorant F_J(x)/(2J+2); nonnegative, 1/2 at integers.

        Even around integers, so evaluated on the reflected argument.
        """
        u = np.mod(np.asarray(x, dtype=np.float64), 1.0)
        w = np.minimum(u, 1.0 - u)
        jp = self.J + 1
        s = np.sin(math.pi * w)
        num = np.sin(math.pi * jp * w) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = num / (2.0 * jp * jp * s * s)
        out = np.where(s == 0.0, 0.5, vals)
        return out if out.ndim else float(out)

    def delta_from_coeffs(self, x):
        """delta evaluated term by term from b(j); cross-check of the closed form."""
        u = np.mod(np.asarray(x, dtype=np.float64), 1.0)
        acc = np.full_like(u, self.b_coeffs[0])
        for j in range(1, self.J + 1):
            acc += 2.0 * self.b_coeffs[j] * np.cos(TWO_PI * j * u)
        return acc if acc.ndim else float(acc)


def build_expansion(J: int) -> TruncatedExpansion:
    """The pinned admissible coefficient family at truncation J."""
    if J < 1:
        raise PreconditionViolated(f"truncation must be >= 1, got {J}")
    a: dict[int, complex] = {}
    b: dict[int, float] = {0: 1.0 / (2 * J + 2)}
    for j in range(1, J + 1):
        w = _vaaler_weight(j / (J + 1))
        a[j] = 1j * w / (TWO_PI * j)
        a[-j] = -1j * w / (TWO_PI * j)
        b[j] = b[-j] = (1.0 - j / (J + 1)) / (2 * J + 2)
    return TruncatedExpansion(J, a, b)


def majorant_check(J: int, grid_points: int = 100_000, tol: float = 1e-12) -> dict:
    """Dense-grid check that delta >= -tol and |psi - psi*| <= delta + tol.

    The grid pins integers and both one-sided neighborhoods, where the
    sawtooth jumps and the bound is tight.
    """
    exp = build_expansion(J)
    xs = np.linspace(-2.5, 2.5, grid_points, endpoint=False)
    extra = []
    for k in range(-2, 4):
        extra += [k, k - 1e-9, k + 1e-9, k - 1e-12, k + 1e-12]
    # Fejer nodes k/(J+1): the majorant vanishes there, so the bound is tight
    step = max(1, J // 128)
    extra += [k / (J + 1) for k in range(1, J + 1, step)]
    xs = np.concatenate([xs, np.array(extra, dtype=np.float64)])
    saw = xs - np.floor(xs) - 0.5
    err = np.abs(saw - exp.psi_star(xs))
    dl = exp.delta(xs)
    worst = float(np.max(err - dl))
    min_delta = float(np.min(dl))
    return {
        "J": J,
        "grid_points": int(xs.size),
        "max_err_minus_delta": worst,
        "min_delta": min_delta,
        "passed": bool(worst <= tol and min_delta >= -tol),
    }


# -- arithmetic functions ------------------------------------------------------

@lru_cache(maxsize=4)
def von_mangoldt_sieve(limit: int) -> np.ndarray:
    """Lambda(0..limit) as an array; treat as read-only."""
    lam = np.zeros(limit + 1)
    for p in primes_up_to(limit):
        p = int(p)
        lp = math.log(p)
        pk = p
        while pk <= limit:
            lam[pk] = lp
            pk *= p
    return lam


@lru_cache(maxsize=4)
def mobius_sieve(limit: int) -> np.ndarray:
    """mu(0..limit) as an int8 array; treat as read-only."""
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in primes_up_to(limit):
        p = int(p)
        mu[p::p] *= -1
        if p * p <= limit:
            mu[p * p :: p * p] = 0
    return mu


def von_mangoldt(n: int) -> float:
    """log p when n is a power of the prime p, else 0."""
    if n < 2:
        return 0.0
    factors = factorize(n).factors
    return math.log(factors[0][0]) if len(factors) == 1 else 0.0


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError(f"mobius needs n >= 1, got {n}")
    factors = factorize(n).factors
    if any(e > 1 for _, e in factors):
        return 0
    return -1 if len(factors) & 1 else 1


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _require_squarefree(s: int) -> None:
    if s < 1:
        raise PreconditionViolated(f"s must be a positive squarefree integer, got {s}")
    if any(e > 1 for _, e in factorize(s).factors):
        raise PreconditionViolated(f"s = {s} is not squarefree")


# -- Vaughan's identity ----------------------------------------------------------

def vaughan(n: int, u: float, v: float) -> float:
    """Three-term decomposition of Lambda(n); equals Lambda(n) for n > v.

    The Mobius-log term runs over the bounded Mobius variable (k <= u, log
    on the cofactor); that is the reading under which the three terms sum
    to Lambda(n) identically.
    """
    if u < 1 or v < 1:
        raise PreconditionViolated("u and v must be >= 1")
    if n <= v:
        raise PreconditionViolated(f"identity needs n > v, got n = {n}, v = {v}")
    divs = divisors(n)

    t1 = 0.0
    for k in divs:
        if k > v:
            lk = von_mangoldt(k)
            if lk:
                cof = n // k
                if cof > u:
                    t1 += lk * sum(mobius(d) for d in divisors(cof) if d <= u)

    t2 = 0.0
    for k in divs:
        if k <= u:
            mk = mobius(k)
            if mk:
                t2 += mk * math.log(n // k)

    t3 = 0.0
    for k in divs:
        if k <= v:
            lk = von_mangoldt(k)
            if lk:
                for m in divisors(n // k):
                    if m <= u and (mm := mobius(m)):
                        t3 += lk * mm

    return -t1 + t2 - t3


# -- the cancellation sums -------------------------------------------------------

def default_truncation(N: int, gamma: float) -> int:
    """Scan default J ~ N**(1-gamma) log N, balancing the two error sources."""
    return max(1, math.ceil(N ** (1.0 - gamma) * math.log(N)))


def _l_sum(N: int, M: int, J: int, gamma: float, s: int, lam: np.ndarray | None = None) -> float:
    if not N < M <= 2 * N:
        raise PreconditionViolated(f"need N < M <= 2N, got N = {N}, M = {M}")
    if not 0.5 < gamma <= 1.0:
        raise PreconditionViolated(f"need 1/2 < gamma <= 1, got {gamma}")
    if J < 1:
        raise PreconditionViolated("truncation must be >= 1")
    exp = build_expansion(J)
    if lam is None:
        lam = von_mangoldt_sieve(M)
    ns = np.flatnonzero(lam[N + 1 : M + 1]) + N + 1
    ns = ns[ns & 1 == 1]  # the sums run over odd integers only
    if ns.size == 0:
        return 0.0
    diffs = exp.psi_star(-(ns.astype(np.float64) ** gamma)) - exp.psi_star(
        -((ns + 1).astype(np.float64) ** gamma)
    )
    contrib = lam[ns] * diffs
    if s != 1:
        chi = np.array([jacobi(s, int(n)) for n in ns], dtype=np.float64)
        contrib = contrib * chi
    return math.fsum(contrib.tolist())


def L1(N: int, M: int, J: int, gamma: float) -> float:
    """Lambda-weighted sawtooth-difference sum over odd n in (N, M]."""
    return _l_sum(N, M, J, gamma, 1)


def L2(N: int, M: int, J: int, gamma: float, s: int) -> float:
    """L1 twisted by the Jacobi character (s/n); s squarefree."""
    _require_squarefree(s)
    return _l_sum(N, M, J, gamma, s)


def bilinear_check(
    N: int, M: int, u: float, v: float, j: int, gamma: float, s: int
) -> tuple[complex, complex]:
    """Both sides of the Vaughan rearrangement of sum Lambda(n) e(j n^gamma) (s/n).

    An exact algebraic identity, so the two values must agree to accumulation
    roundoff. Phases on the bilinear side are taken at the integer products
    m*n; by complete multiplicativity of t -> t**gamma this is the same real
    number as the split form and keeps the comparison at roundoff scale.
    """
    _require_squarefree(s)
    if not N < M:
        raise PreconditionViolated("need N < M")
    if u < 1 or v < 1:
        raise PreconditionViolated("u and v must be >= 1")
    if u * v >= M:
        raise PreconditionViolated("need u*v < M")
    if v > N:
        raise PreconditionViolated("identity needs v <= N so every summand exceeds v")

    lam = von_mangoldt_sieve(M)
    mu = mobius_sieve(M)

    def phase(t: int) -> complex:
        return cmath.exp(TWO_PI * 1j * j * float(t) ** gamma)

    def fold(parts: list[complex]) -> complex:
        return complex(math.fsum(z.real for z in parts), math.fsum(z.imag for z in parts))

    lhs_parts = []
    for n in range((N + 1) | 1, M + 1, 2):
        w = lam[n]
        if w:
            lhs_parts.append(w * jacobi(s, n) * phase(n))
    lhs = fold(lhs_parts)

    # a(m) = sum of mu(d) over d | m, d <= u
    a_arr = np.zeros(M + 1, dtype=np.int64)
    for d in range(1, min(int(u), M) + 1):
        md = int(mu[d])
        if md:
            a_arr[d::d] += md

    # b(m) = sum of Lambda(d) mu(e) over de = m, d <= v, e <= u
    cap = min(int(u * v), M)
    b_arr = np.zeros(cap + 1)
    for d in range(1, int(v) + 1):
        ld = lam[d] if d <= M else 0.0
        if ld:
            for e in range(1, int(u) + 1):
                if d * e > cap:
                    break
                me = int(mu[e])
                if me:
                    b_arr[d * e] += ld * me

    rhs_parts = []
    n_min_1 = int(math.floor(v)) + 1  # smallest admissible n in the type-II sum

    def first_odd(k: int) -> int:
        return k if k & 1 else k + 1

    # type II: -a(m) Lambda(n) over m > u, n > v
    m_hi = M // n_min_1
    for m in range(first_odd(int(math.floor(u)) + 1), m_hi + 1, 2):
        am = int(a_arr[m])
        if am == 0:
            continue
        cm = jacobi(s, m)
        if cm == 0:
            continue
        base = -am * cm
        for n in range(first_odd(max(n_min_1, N // m + 1)), M // m + 1, 2):
            w = lam[n]
            if w:
                cn = jacobi(s, n)
                if cn:
                    rhs_parts.append(base * w * cn * phase(m * n))

    # type I: mu(m) log n over m <= u
    for m in range(1, int(u) + 1, 2):
        mm = int(mu[m])
        if mm == 0:
            continue
        cm = jacobi(s, m)
        if cm == 0:
            continue
        base = mm * cm
        for n in range(first_odd(N // m + 1), M // m + 1, 2):
            if n > 1:
                cn = jacobi(s, n)
                if cn:
                    rhs_parts.append(base * cn * math.log(n) * phase(m * n))

    # type I: -b(m) over m <= uv
    for m in range(1, cap + 1, 2):
        bm = float(b_arr[m])
        if bm == 0.0:
            continue
        cm = jacobi(s, m)
        if cm == 0:
            continue
        base = -bm * cm
        for n in range(first_odd(N // m + 1), M // m + 1, 2):
            cn = jacobi(s, n)
            if cn:
                rhs_parts.append(base * cn * phase(m * n))

    return lhs, fold(rhs_parts)


# -- scan reports ------------------------------------------------------------------

@dataclass(frozen=True)
class ExpSumRow:
    N: int
    M: int
    s: int
    j_max: int
    value: complex
    ratio: float  # |value| / N**gamma


@dataclass(frozen=True, eq=False)
class ExpSumReport:
    """Normalized cancellation ratios across a ladder of ranges."""

    gamma: float
    s: int
    rows: tuple[ExpSumRow, ...]

    COEFF_CONSTANTS = {
        "a_decay": TruncatedExpansion.A_DECAY,
        "b_decay": TruncatedExpansion.B_DECAY,
    }

    def to_json_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "s": self.s,
            "coeff_constants": dict(self.COEFF_CONSTANTS),
            "rows": [
                {
                    "N": r.N,
                    "M": r.M,
                    "s": r.s,
                    "j_max": r.j_max,
                    "value_re": r.value.real,
                    "value_im": r.value.imag,
                    "ratio": r.ratio,
                }
                for r in self.rows
            ],
        }

    def to_csv(self) -> str:
        lines = ["N,M,s,j_max,value_re,value_im,ratio"]
        for r in self.rows:
            lines.append(
                f"{r.N},{r.M},{r.s},{r.j_max},{r.value.real!r},{r.value.imag!r},{r.ratio!r}"
            )
        return "\n".join(lines) + "\n"


def cancellation_scan(
    gamma: float, s: int, N_list: Sequence[int], J: int | None = None
) -> ExpSumReport:
    """Table of |L2(N, 2N)| / N**gamma across increasing N (dyadic in practice)."""
    _require_squarefree(s)
    ns = [int(n) for n in N_list]
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise PreconditionViolated("N_list must be nonempty and strictly increasing")
    lam = von_mangoldt_sieve(2 * ns[-1])
    rows = []
    for N in ns:
        j_max = J if J is not None else default_truncation(N, gamma)
        val = _l_sum(N, 2 * N, j_max, gamma, s, lam=lam)
        rows.append(
            ExpSumRow(
                N=N, M=2 * N, s=s, j_max=j_max,
                value=complex(val, 0.0), ratio=abs(val) / N**gamma,
            )
        )
    return ExpSumReport(gamma=float(gamma), s=s, rows=tuple(rows))


# -- partial-summation factor --------------------------------------------------------

def phi_factor(t: float, j: int, gamma: float) -> complex:
    """1 - e(j((t+1)^gamma - t^gamma)); small when j t^(gamma-1) is."""
    return 1.0 - cmath.exp(TWO_PI * 1j * j * ((t + 1.0) ** gamma - t**gamma))


def fit_phi_constant(gamma: float, N: int, J: int, samples: int = 4096) -> float:
    """Fitted C with |phi_j(t)| <= C j N**(gamma-1) over t in [N, 2N], j <= J."""
    ts = np.linspace(N, 2 * N, samples)
    deltas = (ts + 1.0) ** gamma - ts**gamma
    scale = N ** (gamma - 1.0)
    best = 0.0
    for j in range(1, J + 1):
        vals = np.abs(1.0 - np.exp(TWO_PI * 1j * j * deltas))
        best = max(best, float(np.max(vals)) / (j * scale))
    return best
