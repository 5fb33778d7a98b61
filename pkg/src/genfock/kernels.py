"""Reproducing kernels of the Fock, Hp and Fp spaces.

Every kernel is evaluated along two independent routes, the defining power
series and a closed form, and the gap is reported with the value:

    Hp:  sum (n+1)^{2p} t^n / n!        vs  e^t T_{2p+1}(t) / t
    Fp:  sum t^n / ((n+1)^{2p} n!)      vs  2pF2p(1,...,1; 2,...,2; t)

with t = z * conj(w).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .coeffspace import CoeffSeq, KernelSpec, Space, evaluate, inner, weights
from .specfun import hyper_1s2s, series_sum, touchard_deflated

__all__ = [
    "KernelValue",
    "kernel_hp",
    "kernel_fp",
    "kernel_fock",
    "kernel",
    "kernel_section",
    "kernel_section_exact",
    "reproduce_check",
]


@dataclass(frozen=True)
class KernelValue:
    series_value: complex
    closed_value: complex
    abs_gap: float
    terms_used: int
    last_term: float

    @property
    def value(self) -> complex:
        return self.closed_value

    def to_json(self) -> dict:
        return {
            "series": [self.series_value.real, self.series_value.imag],
            "closed": [self.closed_value.real, self.closed_value.imag],
            "gap": self.abs_gap,
            "terms_used": self.terms_used,
            "last_term": self.last_term,
        }


def _weighted_exp_series(t: complex, N: int, e: int) -> tuple[complex, float]:
    """sum_{n<=N} (n+1)^e t^n / n! and the magnitude of its last term."""

    def terms(tt, ctx):
        out, term = [], ctx.mpf(1) if ctx is mpmath else 1.0
        for n in range(N + 1):
            out.append(term * (n + 1) ** e if e >= 0 else term / (n + 1) ** -e)
            term = term * tt / (n + 1)
        return out

    last = abs(terms(t, cmath)[-1])
    return series_sum(terms, t), last


def _value(series: complex, closed: complex, N: int, last: float) -> KernelValue:
    return KernelValue(complex(series), complex(closed), abs(series - closed), N + 1, last)


def kernel_hp(p: int, z, w, N: int = 60) -> KernelValue:
    """K_p(z, w) of Hp by its series and by e^t T_{2p+1}(t)/t."""
    t = complex(z) * complex(w).conjugate()
    series, last = _weighted_exp_series(t, N, 2 * p)
    closed = cmath.exp(t) * touchard_deflated(2 * p + 1, t)
    return _value(series, closed, N, last)


def kernel_fp(p: int, z, w, N: int = 60) -> KernelValue:
    """Fp kernel by its series and by the hypergeometric partial sum."""
    t = complex(z) * complex(w).conjugate()
    series, last = _weighted_exp_series(t, N, -2 * p)
    closed = hyper_1s2s(p, t, N)
    return _value(series, closed, N, last)


def kernel_fock(z, w, N: int = 60) -> KernelValue:
    t = complex(z) * complex(w).conjugate()
    series, last = _weighted_exp_series(t, N, 0)
    return _value(series, cmath.exp(t), N, last)


def kernel(spec: KernelSpec, z, w, N: int = 60) -> KernelValue:
    if spec.space is Space.HP:
        return kernel_hp(spec.p, z, w, N)
    if spec.space is Space.FP:
        return kernel_fp(spec.p, z, w, N)
    return kernel_fock(z, w, N)


def kernel_section(spec: KernelSpec, w, N: int) -> CoeffSeq:
    """Coefficients conj(w)^n / weight(n) of z -> K(z, w), degrees 0..N."""
    wc = complex(w).conjugate()
    powers = np.ones(N + 1, dtype=complex)
    for n in range(1, N + 1):
        powers[n] = powers[n - 1] * wc
    return CoeffSeq(powers / weights(spec, N))


def kernel_section_exact(spec: KernelSpec, w: Fraction, N: int) -> list[Fraction]:
    """Exact section coefficients for a real rational ``w``."""
    w = Fraction(w)
    out, fact = [], 1
    for n in range(N + 1):
        if n:
            fact *= n
        out.append(w**n * Fraction(n + 1) ** (-spec.exponent) / fact)
    return out


def reproduce_check(spec: KernelSpec, f: CoeffSeq, w, N: int | None = None) -> float:
    """|<f, K(., w)> - f(w)| with the kernel section materialized to degree N."""
    N = f.truncation if N is None else N
    if f.truncation > N:
        raise ValueError("f has degree above the kernel truncation")
    section = kernel_section(spec, w, N)
    return abs(inner(spec, f.padded(N), section) - evaluate(f, complex(w)))
