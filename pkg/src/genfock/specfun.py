"""Special-function primitives.

Probabilists' Hermite polynomials He_n (complex argument), the orthonormal
Hermite functions xi_n, Stirling numbers of the second kind, Touchard
polynomials, Pochhammer symbols and the series 2pF2p(1,...,1; 2,...,2; z).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

__all__ = [
    "HermiteEval",
    "StirlingTable",
    "hermite_He",
    "hermite_He_coeffs",
    "hermite_fn",
    "hermite_functions",
    "hermite_eval",
    "stirling2",
    "stirling2_explicit",
    "touchard_coeffs",
    "touchard",
    "touchard_deflated",
    "pochhammer",
    "hyper_1s2s",
    "series_sum",
]

STIRLING_MAX_N = 30
_XI0 = (2 * math.pi) ** -0.25


def hermite_He(n: int, z):
    """He_n(z) via He_{k+1} = z He_k - k He_{k-1}.

    Integer or Fraction arguments are evaluated exactly.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    prev, cur = 0, 1
    for k in range(n):
        prev, cur = cur, z * cur - k * prev
    return cur


def hermite_He_coeffs(n: int) -> list[int]:
    """Integer monomial coefficients c_0..c_n of He_n."""
    prev, cur = [0], [1]
    for k in range(n):
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= k * c
        prev, cur = cur, nxt
    return cur


def hermite_functions(N: int, x) -> np.ndarray:
    """xi_0(x), ..., xi_N(x) stacked along axis 0.

    Uses the normalized recurrence xi_{n+1} = (x xi_n - sqrt(n) xi_{n-1}) / sqrt(n+1),
    so no factorial is ever formed.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((N + 1,) + x.shape)
    out[0] = _XI0 * np.exp(-x * x / 4)
    if N >= 1:
        out[1] = x * out[0]
    for n in range(1, N):
        out[n + 1] = (x * out[n] - math.sqrt(n) * out[n - 1]) / math.sqrt(n + 1)
    return out


def hermite_fn(n: int, x):
    """Orthonormal Hermite function xi_n(x) = e^{-x^2/4} He_n(x) / ((2 pi)^{1/4} sqrt(n!))."""
    if n < 0:
        raise ValueError("n must be non-negative")
    val = hermite_functions(n, x)[n]
    return float(val) if np.ndim(val) == 0 else val


@dataclass(frozen=True)
class HermiteEval:
    x: float
    values: np.ndarray

    @property
    def N(self) -> int:
        return len(self.values) - 1


def hermite_eval(N: int, x: float) -> HermiteEval:
    return HermiteEval(float(x), hermite_functions(N, float(x)))


class StirlingTable:
    """Triangular table of S(n, k) for 0 <= k <= n <= max_n, built by the recurrence."""

    def __init__(self, max_n: int):
        if max_n > STIRLING_MAX_N:
            raise ValueError(f"exact Stirling table limited to n <= {STIRLING_MAX_N}")
        self.max_n = max_n
        rows = [[1]]
        for n in range(1, max_n + 1):
            prev = rows[-1]
            row = [0] * (n + 1)
            for k in range(1, n + 1):
                row[k] = (k * prev[k] if k < n else 0) + prev[k - 1]
            rows.append(row)
        self.entries = tuple(tuple(r) for r in rows)

    def __getitem__(self, nk: tuple[int, int]) -> int:
        n, k = nk
        return self.entries[n][k]


@lru_cache(maxsize=None)
def _table() -> StirlingTable:
    return StirlingTable(STIRLING_MAX_N)


def _check_nk(n: int, k: int):
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if n > STIRLING_MAX_N:
        raise ValueError(f"exact Stirling numbers limited to n <= {STIRLING_MAX_N}")


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k)."""
    _check_nk(n, k)
    return _table()[n, k]


def stirling2_explicit(n: int, k: int) -> int:
    """S(n, k) from the alternating sum (1/k!) sum_i (-1)^i C(k,i) (k-i)^n."""
    _check_nk(n, k)
    total = sum((-1) ** i * math.comb(k, i) * (k - i) ** n for i in range(k + 1))
    q, r = divmod(total, math.factorial(k))
    assert r == 0
    return q


def touchard_coeffs(n: int) -> list[int]:
    """Coefficients (c_0, ..., c_n) of T_n(x) = sum_k S(n,k) x^k."""
    return [stirling2(n, k) for k in range(n + 1)]


def _exact(z) -> tuple[Fraction, Fraction]:
    z = complex(z)
    return Fraction(z.real), Fraction(z.imag)


def _horner_exact(coeffs, z):
    """Horner on integer coefficients at the exact rational value of ``z``."""
    zr, zi = _exact(z)
    ar, ai = Fraction(0), Fraction(0)
    for c in reversed(coeffs):
        ar, ai = ar * zr - ai * zi + c, ar * zi + ai * zr
    return complex(float(ar), float(ai))


def touchard(n: int, z) -> complex:
    """T_n(z), exact Horner on the Stirling coefficients, rounded once at the end."""
    return _horner_exact(touchard_coeffs(n), z)


def touchard_deflated(n: int, z) -> complex:
    """T_n(z)/z as a polynomial; regular at z = 0 because S(n, 0) = 0 for n >= 1."""
    if n < 1:
        raise ValueError("T_0 has no zero constant term")
    c = touchard_coeffs(n)
    assert c[0] == 0
    return _horner_exact(c[1:], z)


def pochhammer(a: float, n: int):
    """Rising factorial (a)_n = Gamma(a+n)/Gamma(a) as a running product."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = 1 if isinstance(a, (int, Fraction)) else 1.0
    for i in range(n):
        out *= a + i
    return out


def series_sum(terms, z, ratio: float = 1e2, dps: int = 40) -> complex:
    """Sum the list ``terms(z, ctx)`` with a cancellation guard.

    ``ctx`` is ``cmath`` for the float pass or ``mpmath`` for the re-sum.  The
    float sum is kept unless sum |t_n| exceeds ``ratio`` times |sum t_n|, in
    which case the terms are rebuilt and summed at ``dps`` decimal digits.
    """
    ts = terms(complex(z), cmath)
    total = complex(math.fsum(t.real for t in ts), math.fsum(t.imag for t in ts))
    if math.fsum(abs(t) for t in ts) <= ratio * abs(total):
        return total
    with mpmath.workdps(dps):
        return complex(mpmath.fsum(terms(mpmath.mpc(complex(z)), mpmath)))


def hyper_1s2s(p: int, z, N: int) -> complex:
    """Partial sum n <= N of 2pF2p(1,...,1; 2,...,2; z).

    Terms are built from the Pochhammer quotient (1)_n^{2p} / (2)_n^{2p}, i.e.
    z^n / ((n+1)^{2p} n!); for p = 0 this is the truncated exponential.
    """
    if p < 0 or N < 0:
        raise ValueError("p and N must be non-negative")

    def terms(zz, ctx):
        out, t = [], ctx.mpf(1) if ctx is mpmath else 1.0
        for n in range(N + 1):
            q = Fraction(pochhammer(1, n), pochhammer(2, n))
            q = ctx.mpf(q.numerator) / q.denominator if ctx is mpmath else float(q)
            out.append(t * q ** (2 * p))
            t = t * zz / (n + 1)
        return out

    return series_sum(terms, z)
