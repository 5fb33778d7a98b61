"""Truncated power-series coefficients and the weighted Fock-type inner products.

An entire function f(z) = sum a_n z^n is represented by the coefficient
vector (a_0, ..., a_N).  Three Hilbert structures live on these vectors,
all diagonal in the monomial basis:

    Fock   <z^n, z^n> = n!
    Hp     <z^n, z^n> = n! / (n+1)^(2p)
    Fp     <z^n, z^n> = n! * (n+1)^(2p)

Mismatched truncations are zero padded, never rejected.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Space",
    "KernelSpec",
    "FOCK",
    "CoeffSeq",
    "weight",
    "weight_exact",
    "log_weight",
    "weights",
    "inner",
    "norm_sq",
    "norm",
    "evaluate",
]


class Space(str, enum.Enum):
    FOCK = "fock"
    HP = "hp"
    FP = "fp"


@dataclass(frozen=True)
class KernelSpec:
    """Selects one of the three spaces; ``p`` is ignored for the Fock space."""

    space: Space
    p: int = 0

    def __post_init__(self):
        object.__setattr__(self, "space", Space(self.space))
        if not isinstance(self.p, (int, np.integer)) or self.p < 0:
            raise ValueError(f"p must be a non-negative integer, got {self.p!r}")
        object.__setattr__(self, "p", int(self.p))

    @property
    def exponent(self) -> int:
        """Signed power of (n+1) in the weight: -2p for Hp, +2p for Fp, 0 for Fock."""
        if self.space is Space.HP:
            return -2 * self.p
        if self.space is Space.FP:
            return 2 * self.p
        return 0

    @classmethod
    def parse(cls, text: str) -> "KernelSpec":
        """Parse ``fock``, ``hp:P`` or ``fp:P``."""
        name, _, p = text.partition(":")
        return cls(Space(name.strip().lower()), int(p) if p else 0)

    def __str__(self):
        return "fock" if self.space is Space.FOCK else f"{self.space.value}:{self.p}"


FOCK = KernelSpec(Space.FOCK)


@dataclass(frozen=True, eq=False)
class CoeffSeq:
    """Immutable complex coefficient vector a_0..a_N of a truncated power series."""

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.array(self.coeffs, dtype=complex).reshape(-1)
        if a.size == 0:
            raise ValueError("a CoeffSeq needs at least one coefficient")
        if not np.all(np.isfinite(a)):
            raise ValueError("coefficients must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)

    @property
    def truncation(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def __repr__(self):
        return f"CoeffSeq(N={self.truncation}, coeffs={self.coeffs!r})"

    def __eq__(self, other):
        if not isinstance(other, CoeffSeq):
            return NotImplemented
        n = max(len(self), len(other))
        return bool(np.array_equal(self.padded(n - 1).coeffs, other.padded(n - 1).coeffs))

    __hash__ = None

    @classmethod
    def zeros(cls, N: int) -> "CoeffSeq":
        return cls(np.zeros(N + 1, dtype=complex))

    @classmethod
    def monomial(cls, n: int, N: int | None = None, scale: complex = 1.0) -> "CoeffSeq":
        N = n if N is None else N
        if n > N:
            raise ValueError(f"degree {n} exceeds truncation {N}")
        a = np.zeros(N + 1, dtype=complex)
        a[n] = scale
        return cls(a)

    def padded(self, N: int) -> "CoeffSeq":
        """Zero-pad or cut to truncation ``N``."""
        a = np.zeros(N + 1, dtype=complex)
        m = min(N + 1, len(self))
        a[:m] = self.coeffs[:m]
        return CoeffSeq(a)

    def __add__(self, other: "CoeffSeq") -> "CoeffSeq":
        N = max(self.truncation, other.truncation)
        return CoeffSeq(self.padded(N).coeffs + other.padded(N).coeffs)

    def __sub__(self, other: "CoeffSeq") -> "CoeffSeq":
        return self + (-1) * other

    def __mul__(self, scalar: complex) -> "CoeffSeq":
        return CoeffSeq(self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return -1 * self

    def __call__(self, z):
        return evaluate(self, z)

    def to_json(self) -> dict:
        return {
            "truncation": self.truncation,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "CoeffSeq":
        if isinstance(data, str):
            data = json.loads(data)
        pairs = data["coeffs"]
        coeffs = [complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c) for c in pairs]
        N = data.get("truncation", len(coeffs) - 1)
        if N != len(coeffs) - 1:
            raise ValueError(f"truncation {N} does not match {len(coeffs)} coefficients")
        return cls(coeffs)


def weight_exact(spec: KernelSpec, n: int) -> Fraction:
    """Exact rational weight <z^n, z^n> in the given space."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    return math.factorial(n) * Fraction(n + 1) ** spec.exponent


def log_weight(spec: KernelSpec, n: int) -> float:
    return math.lgamma(n + 1) + spec.exponent * math.log(n + 1)


def weight(spec: KernelSpec, n: int, log: bool = False) -> float:
    """Weight of z^n as a float (or its logarithm when ``log`` is set).

    Raises OverflowError if the linear value does not fit in a double.
    """
    if log:
        return log_weight(spec, n)
    try:
        return float(weight_exact(spec, n))
    except OverflowError:
        raise OverflowError(
            f"weight of z^{n} in {spec} exceeds the float range; use log=True"
        ) from None


def weights(spec: KernelSpec, N: int) -> np.ndarray:
    """Weights for degrees 0..N by the running recurrence w_{n+1} = w_n (n+1) ((n+2)/(n+1))^e."""
    w = np.empty(N + 1)
    w[0] = 1.0
    e = spec.exponent
    with np.errstate(over="ignore"):
        for n in range(N):
            w[n + 1] = w[n] * (n + 1) * ((n + 2) / (n + 1)) ** e
    return w


def _as_seq(f) -> CoeffSeq:
    return f if isinstance(f, CoeffSeq) else CoeffSeq(f)


def inner(spec: KernelSpec, f: CoeffSeq, g: CoeffSeq) -> complex:
    """sum_n weight(n) a_n conj(b_n), over the common (zero-padded) range."""
    f, g = _as_seq(f), _as_seq(g)
    N = min(f.truncation, g.truncation)
    a, b = f.coeffs[: N + 1], g.coeffs[: N + 1]
    w = weights(spec, N)
    if np.all(np.isfinite(w)):
        return complex(np.sum(w * a * np.conj(b)))
    # log-domain fallback once n! outgrows the double range
    nz = (a != 0) & (b != 0)
    logw = np.array([log_weight(spec, n) for n in range(N + 1)])
    terms = np.zeros(N + 1, dtype=complex)
    mag = np.exp(logw[nz] + np.log(np.abs(a[nz])) + np.log(np.abs(b[nz])))
    terms[nz] = mag * np.exp(1j * (np.angle(a[nz]) - np.angle(b[nz])))
    return complex(np.sum(terms))


def norm_sq(spec: KernelSpec, f: CoeffSeq) -> float:
    return inner(spec, f, f).real


def norm(spec: KernelSpec, f: CoeffSeq) -> float:
    return math.sqrt(max(norm_sq(spec, f), 0.0))


def evaluate(f: CoeffSeq | Sequence[complex], z):
    """Horner evaluation of sum a_n z^n; ``z`` may be a scalar or an array."""
    coeffs: Iterable = f.coeffs if isinstance(f, CoeffSeq) else f
    acc = 0
    for a in reversed(list(coeffs)):
        acc = acc * z + a
    return acc
