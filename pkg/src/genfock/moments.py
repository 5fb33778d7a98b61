"""Hankel positivity certificates for Stieltjes moment sequences.

A sequence s is a Stieltjes moment sequence iff both Hankel families
H_N(s) = (s_{i+j}) and H_N(Es) = (s_{i+j+1}) are positive semidefinite for
every N.  Built-in sequences are exact rationals; PSD verdicts on them use
fraction-free elimination, never floating eigenvalues.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "MomentSeq",
    "HankelReport",
    "Certificate",
    "hp_sequence",
    "fp_sequence",
    "factorial_sequence",
    "hausdorff_sequence",
    "load_sequence",
    "parse_sequence",
    "hankel",
    "leading_minors",
    "determinant",
    "psd_check",
    "stieltjes_certificate",
    "first_failure",
    "carleman_bound_check",
]

Number = int | Fraction | float


@dataclass(frozen=True)
class MomentSeq:
    generator: Callable[[int], Number]
    label: str = "s"

    def __call__(self, n: int) -> Number:
        v = self.generator(n)
        return Fraction(v) if isinstance(v, int) else v

    def shifted(self) -> "MomentSeq":
        g = self.generator
        return MomentSeq(lambda n: g(n + 1), f"E{self.label}")

    @property
    def exact(self) -> bool:
        return not isinstance(self.generator(0), float)


def hp_sequence(p: int) -> MomentSeq:
    """s_n = n!/(n+1)^{2p}."""
    return MomentSeq(lambda n: Fraction(math.factorial(n), (n + 1) ** (2 * p)), f"hp:{p}")


def fp_sequence(p: int) -> MomentSeq:
    """s_n = n!(n+1)^{2p}."""
    return MomentSeq(lambda n: Fraction(math.factorial(n) * (n + 1) ** (2 * p)), f"fp:{p}")


def factorial_sequence() -> MomentSeq:
    return MomentSeq(lambda n: Fraction(math.factorial(n)), "factorial")


def hausdorff_sequence() -> MomentSeq:
    """s_n = 1/(n+1), the moments of Lebesgue measure on [0, 1]."""
    return MomentSeq(lambda n: Fraction(1, n + 1), "hausdorff")


def load_sequence(path: str | Path) -> MomentSeq:
    """JSON list of moments; integers and "a/b" strings stay exact, floats do not.

    Accepts either a bare list or {"moments": [...], "label": ...}.
    """
    data = json.loads(Path(path).read_text())
    label = Path(path).stem
    if isinstance(data, dict):
        label = data.get("label", label)
        data = data["moments"]
    values: list[Number] = []
    for v in data:
        if isinstance(v, str):
            values.append(Fraction(v))
        elif isinstance(v, int):
            values.append(Fraction(v))
        else:
            values.append(float(v))
    if any(isinstance(v, float) for v in values):
        values = [float(v) for v in values]

    def gen(n):
        if n >= len(values):
            raise IndexError(f"sequence {label!r} has only {len(values)} moments")
        return values[n]

    return MomentSeq(gen, label)


def parse_sequence(text: str) -> MomentSeq:
    """``hp:P``, ``fp:P``, ``factorial``, ``hausdorff`` or ``file:PATH``."""
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind == "hp":
        return hp_sequence(int(arg))
    if kind == "fp":
        return fp_sequence(int(arg))
    if kind == "factorial":
        return factorial_sequence()
    if kind == "hausdorff":
        return hausdorff_sequence()
    if kind == "file":
        return load_sequence(arg)
    raise ValueError(f"unknown sequence {text!r}")


def hankel(s: MomentSeq, N: int, shifted: bool = False) -> list[list[Number]]:
    """(N+1)x(N+1) matrix with entries s_{i+j} (or s_{i+j+1})."""
    off = 1 if shifted else 0
    vals = [s(k + off) for k in range(2 * N + 1)]
    return [[vals[i + j] for j in range(N + 1)] for i in range(N + 1)]


def leading_minors(matrix: Sequence[Sequence[Number]]) -> list[Fraction]:
    """Leading principal minors by Bareiss fraction-free elimination.

    Without pivoting, the k-th pivot after elimination is exactly the k-th
    leading minor.  A zero pivot makes every later leading minor
    undetermined by this sweep; those are computed directly instead.
    """
    a = [[Fraction(v) for v in row] for row in matrix]
    n = len(a)
    minors: list[Fraction] = []
    prev = Fraction(1)
    for k in range(n):
        piv = a[k][k]
        minors.append(piv)
        if piv == 0:
            minors.extend(determinant([row[: m + 1] for row in matrix[: m + 1]]) for m in range(k + 1, n))
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]) / prev
        prev = piv
    return minors


def determinant(matrix: Sequence[Sequence[Number]]) -> Fraction:
    """Exact determinant by Gaussian elimination with row swaps."""
    a = [[Fraction(v) for v in row] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        r = next((i for i in range(k, n) if a[i][k] != 0), None)
        if r is None:
            return Fraction(0)
        if r != k:
            a[k], a[r] = a[r], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def _all_principal_minors_nonneg(matrix) -> bool:
    n = len(matrix)
    for size in range(1, n + 1):
        for idx in itertools.combinations(range(n), size):
            if determinant([[matrix[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


@dataclass(frozen=True)
class HankelReport:
    order: int
    kind: str
    min_eigenvalue: float
    leading_minors: tuple[Fraction, ...] = field(default=())
    psd: bool = False
    mode: str = "exact"

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "kind": self.kind,
            "mode": self.mode,
            "psd": self.psd,
            "min_eigenvalue": self.min_eigenvalue,
            "leading_minors": [_frac_str(m) for m in self.leading_minors],
        }


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _min_eig(matrix) -> float:
    a = np.array([[float(v) for v in row] for row in matrix])
    if not np.all(np.isfinite(a)):
        return float("nan")
    return float(np.linalg.eigvalsh(a)[0])


def psd_check(matrix, mode: str = "exact", kind: str = "H") -> HankelReport:
    """PSD verdict for a symmetric matrix.

    exact: all leading minors > 0 proves positive definiteness; any zero
    leading minor triggers the check of every principal minor.  float:
    min eigenvalue >= -1e-10 (1 + trace).
    """
    order = len(matrix) - 1
    if mode == "exact":
        minors = leading_minors(matrix)
        if any(m < 0 for m in minors):
            psd = False
        elif all(m > 0 for m in minors):
            psd = True
        else:
            psd = _all_principal_minors_nonneg(matrix)
        return HankelReport(order, kind, _min_eig(matrix), tuple(minors), psd, "exact")
    if mode == "float":
        a = np.array([[float(v) for v in row] for row in matrix])
        lam = float(np.linalg.eigvalsh(a)[0])
        tol = 1e-10 * (1 + float(np.trace(a)))
        return HankelReport(order, kind, lam, (), lam >= -tol, "float")
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class Certificate:
    label: str
    reports: tuple[HankelReport, ...]

    @property
    def psd(self) -> bool:
        return all(r.psd for r in self.reports)

    def to_json(self) -> dict:
        return {"sequence": self.label, "psd": self.psd, "reports": [r.to_json() for r in self.reports]}


def stieltjes_certificate(s: MomentSeq, N_max: int, mode: str | None = None) -> Certificate:
    """Reports for H_N(s) and H_N(Es), N = 0..N_max."""
    if N_max < 0:
        raise ValueError("N_max must be non-negative")
    mode = ("exact" if s.exact else "float") if mode is None else mode
    reports = []
    for N in range(N_max + 1):
        reports.append(psd_check(hankel(s, N), mode, "H(s)"))
        reports.append(psd_check(hankel(s, N, shifted=True), mode, "H(Es)"))
    return Certificate(s.label, tuple(reports))


def first_failure(cert: Certificate) -> HankelReport | None:
    return next((r for r in cert.reports if not r.psd), None)


def carleman_bound_check(s: MomentSeq, M: Number, N: int) -> bool:
    """True iff s_n <= M^n (2n)! for all n <= N.

    Rational data is compared exactly; float data in the log domain.
    """
    if M <= 0:
        raise ValueError("M must be positive")
    for n in range(N + 1):
        sn = s(n)
        if isinstance(sn, Fraction) and not isinstance(M, float):
            if sn > Fraction(M) ** n * math.factorial(2 * n):
                return False
        else:
            if sn <= 0:
                continue
            if math.log(sn) > n * math.log(M) + math.lgamma(2 * n + 1) + 1e-12:
                return False
    return True
