"""Identity sweep behind ``genfock verify``.

Each check returns (metric, params); it passes when metric <= threshold.
Random cases draw from a generator seeded by (seed, crc32(check_id)), so a
check's inputs depend only on the seed and its own id, never on run order.
"""

from __future__ import annotations

import json
import math
import time
import zlib
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from . import bargmann as bg
from . import kernels as kn
from . import moments as mo
from . import operators as op
from .coeffspace import FOCK, CoeffSeq, KernelSpec, Space, evaluate, inner, norm, weight, weights
from .specfun import hermite_functions, stirling2, stirling2_explicit, touchard

__all__ = ["Profile", "PROFILES", "CheckRecord", "CHECKS", "run_verify", "report_json", "fd_derivative",
           "fd_weights"]


@dataclass(frozen=True)
class Profile:
    name: str
    p_max: int
    N: int
    exact_N: int
    cases: int


PROFILES = {
    "quick": Profile("quick", p_max=2, N=32, exact_N=20, cases=20),
    "full": Profile("full", p_max=4, N=64, exact_N=40, cases=200),
}


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    ref: str
    params: dict
    metric: float
    threshold: float
    passed: bool
    runtime_ms: float | None

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass(frozen=True)
class _Check:
    check_id: str
    ref: str
    threshold: float
    fn: Callable[[Profile, np.random.Generator], tuple[float, dict]]


CHECKS: dict[str, _Check] = {}


def check(check_id: str, ref: str, threshold: float = 0.0):
    def deco(fn):
        CHECKS[check_id] = _Check(check_id, ref, threshold, fn)
        return fn

    return deco


def _crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _rand_point(rng, radius: float) -> complex:
    r = radius * math.sqrt(rng.uniform())
    return complex(r * math.cos(2 * math.pi * rng.uniform()), r * math.sin(2 * math.pi * rng.uniform()))


def _specs(p_max: int):
    for p in range(p_max + 1):
        yield KernelSpec(Space.HP, p)
        yield KernelSpec(Space.FP, p)


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# finite-difference oracle --------------------------------------------------

def fd_weights(k: int, m: int) -> list[Fraction]:
    """Central stencil on -m..m for the k-th derivative (exact Vandermonde solve)."""
    pts = list(range(-m, m + 1))
    n = len(pts)
    a = [[Fraction(x) ** i for x in pts] + [Fraction(math.factorial(k)) if i == k else Fraction(0)]
         for i in range(n)]
    for c in range(n):
        r = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[r] = a[r], a[c]
        piv = a[c][c]
        a[c] = [v / piv for v in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [u - f * v for u, v in zip(a[i], a[c])]
    return [row[-1] for row in a]


def fd_derivative(f: Callable, k: int, z: complex, h: float = 1e-3, axis: str = "real",
                  dps: int = 40) -> complex:
    """d^k f/dz^k at z by a 4th-order central stencil, stepping along one axis.

    ``f`` receives mpmath complex numbers and is evaluated at ``dps`` digits.
    Stepping along the imaginary axis differentiates in t for z + i t, which
    is divided by i^k to recover the complex derivative.
    """
    m = (k + 1) // 2 + 1
    w = fd_weights(k, m)
    with mpmath.workdps(dps):
        step = mpmath.mpf(h) * (1 if axis == "real" else 1j)
        z0 = mpmath.mpc(z)
        total = mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * f(z0 + j * step)
                            for j, c in zip(range(-m, m + 1), w) if c)
        return complex(total / step**k)


def _mp_kernel_A(x: float):
    def f(z):
        return (2 * mpmath.pi) ** mpmath.mpf(-0.25) * mpmath.exp(-mpmath.mpf(x) ** 2 / 4 - z * z / 2 + z * x)

    return f


# coeffspace ----------------------------------------------------------------

@check("coeffspace.p0_weights", "p = 0 weights coincide with Fock weights", 0.0)
def _(prof, rng):
    bad = sum(weight(KernelSpec(s, 0), n) != weight(FOCK, n) for s in Space for n in range(101))
    return float(bad), {"n_max": 100}


@check("coeffspace.inner_linearity", "inner product linear in first slot, Hermitian on the diagonal", 1e-12)
def _(prof, rng):
    worst = 0.0
    for spec in _specs(prof.p_max):
        for _ in range(max(1, prof.cases // 10)):
            f, g, h = (CoeffSeq(_crandn(rng, prof.N + 1) / np.sqrt(weights(spec, prof.N))) for _ in range(3))
            a, b = _crandn(rng, 2)
            lhs = inner(spec, a * f + b * g, h)
            rhs = a * inner(spec, f, h) + b * inner(spec, g, h)
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1.0))
            ff = inner(spec, f, f)
            worst = max(worst, 100 * abs(ff.imag) / abs(ff))
    return worst, {"p_max": prof.p_max, "N": prof.N}


@check("coeffspace.evaluation_bound", "|f(w)| <= ||f|| ||K(., w)|| (bounded point evaluation)", 0.0)
def _(prof, rng):
    violations = 0
    for spec in _specs(prof.p_max):
        for _ in range(max(1, prof.cases // 10)):
            f = CoeffSeq(_crandn(rng, 17) / np.sqrt(weights(spec, 16)))
            w = _rand_point(rng, 2.0)
            ks = kn.kernel_section(spec, w, 60)
            if abs(evaluate(f, w)) > norm(spec, f) * norm(spec, ks) * (1 + 1e-12):
                violations += 1
    return float(violations), {"p_max": prof.p_max}


# specfun ---------------------------------------------------------------------

@check("specfun.touchard_generating", "T_n(x) = e^{-x} sum_k k^n x^k/k!", 1e-10)
def _(prof, rng):
    worst = 0.0
    for n in range(9):
        for x in np.linspace(0.25, 3.0, 12):
            gen = math.exp(-x) * math.fsum(k**n * x**k / math.factorial(k) for k in range(81))
            worst = max(worst, abs(touchard(n, x) - gen))
    return worst, {"n_max": 8, "K": 80}


@check("specfun.stirling_explicit", "Stirling recurrence equals alternating-sum formula", 0.0)
def _(prof, rng):
    bad = sum(stirling2(n, k) != stirling2_explicit(n, k) for n in range(21) for k in range(n + 1))
    return float(bad), {"n_max": 20}


@check("specfun.hermite_orthonormality", "quadrature Gram matrix of xi_0..xi_20 is the identity", 1e-9)
def _(prof, rng):
    q = bg.gauss_hermite_rule(200)
    xi = hermite_functions(20, q.nodes)
    gram = (xi * q.weights) @ xi.T
    return float(np.max(np.abs(gram - np.eye(21)))), {"n_max": 20, "nodes": 200}


# kernels -----------------------------------------------------------------------

def _two_route(prof, rng, fn):
    worst = 0.0
    pts = [4, -4, 4j, -4j, 2 + 2j, -2.8 - 2.8j] + [_rand_point(rng, 4.0) for _ in range(prof.cases // 4)]
    for p in range(prof.p_max + 1):
        for t in pts:
            v = fn(p, t, 1.0, 60)
            worst = max(worst, v.abs_gap / (1 + abs(v.value)))
    return worst, {"p_max": prof.p_max, "t_max": 4, "N": 60}


@check("kernels.hp_two_route", "Hp kernel: series equals e^t T_{2p+1}(t)/t", 1e-12)
def _(prof, rng):
    return _two_route(prof, rng, kn.kernel_hp)


@check("kernels.fp_two_route", "Fp kernel: series equals 2pF2p(1..1; 2..2; t)", 1e-12)
def _(prof, rng):
    return _two_route(prof, rng, kn.kernel_fp)


@check("kernels.hermitian", "K(z,w) = conj K(w,z)", 1e-13)
def _(prof, rng):
    worst = 0.0
    for spec in _specs(prof.p_max):
        for _ in range(5):
            z, w = _rand_point(rng, 2), _rand_point(rng, 2)
            a, b = kn.kernel(spec, z, w).value, kn.kernel(spec, w, z).value
            worst = max(worst, abs(a - b.conjugate()) / max(abs(a), 1e-300))
    return worst, {"p_max": prof.p_max}


@check("kernels.gram_psd", "kernel Gram matrix on 6 points is positive semidefinite", 0.0)
def _(prof, rng):
    bad = 0
    for spec in _specs(min(prof.p_max, 3)):
        pts = [_rand_point(rng, 1.5) for _ in range(6)]
        g = np.array([[kn.kernel(spec, a, b).value for b in pts] for a in pts])
        lam = np.linalg.eigvalsh((g + g.conj().T) / 2)
        bad += int(lam[0] < -1e-9 * np.trace(g).real)
    return float(bad), {"points": 6}


@check("kernels.reproducing", "<f, K(., w)> = f(w) in Hp and Fp", 1e-10)
def _(prof, rng):
    worst = 0.0
    for _ in range(prof.cases):
        spec = KernelSpec(Space.HP if rng.uniform() < 0.5 else Space.FP, int(rng.integers(0, 4)))
        deg = int(rng.integers(0, 33))
        f = CoeffSeq(_crandn(rng, deg + 1) / np.sqrt(weights(spec, deg)))
        w = _rand_point(rng, 2.0)
        err = kn.reproduce_check(spec, f, w, 40)
        worst = max(worst, err / (1 + abs(evaluate(f, w))))
    return worst, {"cases": prof.cases, "deg_max": 32, "w_max": 2}


@check("kernels.bridge", "Theta_p applied twice to the Fp kernel section gives the Hp section", 0.0)
def _(prof, rng):
    bad = 0
    w = Fraction(3, 7)
    for p in range(prof.p_max + 1):
        fp = kn.kernel_section_exact(KernelSpec(Space.FP, p), w, 60)
        hp = kn.kernel_section_exact(KernelSpec(Space.HP, p), w, 60)
        theta = op.diag_unitary("Thetap", p)
        bad += sum(theta.coeff(n) ** 2 * a != b for n, (a, b) in enumerate(zip(fp, hp)))
    return float(bad), {"p_max": prof.p_max, "N": 60, "w": "3/7"}


# operators ---------------------------------------------------------------------

@check("operators.adjoint_pairing", "<T z^n, z^m> = <z^n, T* z^m> from the adjoint tables", 0.0)
def _(prof, rng):
    worst = Fraction(0)
    for spec in [FOCK, *_specs(min(prof.p_max, 3))]:
        for b in op.BaseOp:
            worst = max(worst, op.adjoint_pairing_check(b, spec, min(prof.exact_N, 30)))
    return float(worst), {"p_max": min(prof.p_max, 3), "N": min(prof.exact_N, 30)}


@check("operators.composed_adjoint", "adjoint table equals composed product form on interior columns", 0.0)
def _(prof, rng):
    worst = Fraction(0)
    N = prof.exact_N
    for spec in _specs(min(prof.p_max, 3)):
        for b in op.BaseOp:
            m = op.composed_adjoint(b, spec, N)
            worst = max(worst, m.max_defect(op.adjoint_of(b, spec).matrix(N)))
    return float(worst), {"p_max": min(prof.p_max, 3), "N": N}


@check("operators.commutators", "closed commutator diagonals equal matrix commutators", 0.0)
def _(prof, rng):
    bad = 0
    N = prof.exact_N + 2
    for spec in _specs(min(prof.p_max, 3)):
        for pair, name in (("MzMzStar", "Mz"), ("R0R0Star", "R0")):
            c = op.commutator_matrix(op.base_op(name).matrix(N), op.adjoint_of(name, spec).matrix(N))
            for n in range(c.interior + 1):
                col = c.column(n)
                bad += col.get(n, 0) != op.commutator_diag_formula(pair, spec, n)
                bad += any(v != 0 for i, v in col.items() if i != n)
    return float(bad), {"p_max": min(prof.p_max, 3), "N": N}


@check("operators.lambda_recurrence", "(I R0)^n = sum_k Lambda_{k,n} I^k R0^k", 0.0)
def _(prof, rng):
    table = op.lambda_table(6)
    N = 30
    left = op.I.matrix(N) @ op.R0.matrix(N)
    bad = sum(not op.lambda_expansion(n, table, N).equal_columns(left**n, N) for n in range(7))
    return float(bad), {"n_max": 6, "N": N}


@check("operators.diagonal_powers", "(R0 I)^k, (I R0)^k, (R0^2 I Mz)^k act as 1/(n+1)^k, 1/n^k, 1/(n+2)^k", 0.0)
def _(prof, rng):
    bad = 0
    for k in range(7):
        a, b, c = (op.R0 @ op.I) ** k, (op.I @ op.R0) ** k, (op.R0 @ op.R0 @ op.I @ op.Mz) ** k
        for n in range(31):
            bad += a.coeff(n) != Fraction(1, (n + 1) ** k)
            bad += n > 0 and b.coeff(n) != Fraction(1, n**k)
            bad += c.coeff(n) != Fraction(1, (n + 2) ** k)
    return float(bad), {"k_max": 6, "n_max": 30}


@check("operators.isometry", "||Ep f||_Hp = ||f||_F and ||Vp f||_Fp = ||f||_F", 1e-12)
def _(prof, rng):
    worst = 0.0
    for _ in range(prof.cases):
        p = int(rng.integers(0, prof.p_max + 1))
        f = CoeffSeq(_crandn(rng, prof.N + 1) / np.sqrt(weights(FOCK, prof.N)))
        ref = norm(FOCK, f)
        worst = max(worst, _rel(norm(KernelSpec(Space.HP, p), op.diag_unitary("Ep", p).apply(f)), ref))
        worst = max(worst, _rel(norm(KernelSpec(Space.FP, p), op.diag_unitary("Vp", p).apply(f)), ref))
    return worst, {"cases": prof.cases, "N": prof.N}


@check("operators.unitary_bridges", "Theta = E^2, Lambda = V^2, Theta Lambda = Id, literal forms agree", 0.0)
def _(prof, rng):
    bad = 0
    n_max = prof.exact_N
    for p in range(prof.p_max + 1):
        e, v = op.diag_unitary("Ep", p), op.diag_unitary("Vp", p)
        th, lam = op.diag_unitary("Thetap", p), op.diag_unitary("Lambdap", p)
        bad += not th.equals_on(e @ e, n_max)
        bad += not lam.equals_on(v @ v, n_max)
        bad += not (th @ lam).equals_on(op.Id, n_max)
        bad += not (v @ e).equals_on(op.Id, n_max)
        for kind in ("Ep", "Vp", "Thetap", "Lambdap"):
            bad += not op.diag_unitary_literal(kind, p).equals_on(op.diag_unitary(kind, p), n_max)
    return float(bad), {"p_max": prof.p_max, "n_max": n_max}


@check("operators.p0_degeneration", "p = 0: adjoints are Fock adjoints, [Mz,Mz*] = -Id, [R0,R0*] = D0", 0.0)
def _(prof, rng):
    bad = 0
    n_max = prof.exact_N
    for space in (Space.HP, Space.FP):
        spec = KernelSpec(space, 0)
        for b in op.BaseOp:
            bad += not op.adjoint_of(b, spec).equals_on(op.adjoint_of(b, FOCK), n_max)
        for n in range(n_max + 1):
            bad += op.commutator_diag_formula("MzMzStar", spec, n) != -1
            bad += op.commutator_diag_formula("R0R0Star", spec, n) != op.D0.coeff(n)
    return float(bad), {"n_max": n_max}


# bargmann ----------------------------------------------------------------------

@check("bargmann.eigenrelations", "B xi_n = z^n/sqrt(n!), with (n+1)^{+-p} for Bp and SBp", 1e-8)
def _(prof, rng):
    worst = 0.0
    q = bg.gauss_hermite_rule(200)
    zs = [2.0, -2j, 1.4 + 1.4j] + [_rand_point(rng, 2.0) for _ in range(3)]
    for n in range(21):
        phi = bg.L2Function(samples=lambda x, n=n: hermite_functions(n, x)[n])
        c = phi.coeffs(40, q)
        for kind, p in (("b", 0), ("bp", 1), ("bp", 2), ("sbp", 1), ("sbp", 2)):
            fac = bg.Kind(kind).factor(p, n)
            bc = bg.transform_coeffs(kind, p, c)
            for z in zs:
                want = fac * z**n / math.sqrt(math.factorial(n))
                worst = max(worst, abs(evaluate(bc, z) - want))
    return worst, {"n_max": 20, "z_max": 2, "nodes": 200}


@check("bargmann.parseval", "||Bp phi||_Hp = ||SBp phi||_Fp = ||phi||_L2", 1e-10)
def _(prof, rng):
    worst = 0.0
    q = bg.gauss_hermite_rule(200)
    for _ in range(max(1, prof.cases // 4)):
        p = int(rng.integers(0, prof.p_max + 1))
        c = CoeffSeq(_crandn(rng, 21))
        phi = bg.L2Function(samples=lambda x, c=c: np.tensordot(c.coeffs, hermite_functions(20, x), axes=1))
        ext = phi.coeffs(40, q)
        l2 = math.sqrt(q.integrate(np.abs(phi(q.nodes)) ** 2).real)
        worst = max(worst, _rel(norm(KernelSpec(Space.HP, p), bg.transform_coeffs("bp", p, ext)), l2))
        worst = max(worst, _rel(norm(KernelSpec(Space.FP, p), bg.transform_coeffs("sbp", p, ext)), l2))
    return worst, {"modes": 21, "p_max": prof.p_max}


@check("bargmann.route_agreement", "coefficient route equals direct kernel quadrature", 1e-7)
def _(prof, rng):
    worst = 0.0
    q = bg.gauss_hermite_rule(200)
    for _ in range(max(1, prof.cases // 4)):
        a = float(rng.uniform(-1.5, 1.5))
        phi = bg.L2Function.gaussian(a)
        z = _rand_point(rng, 2.0)
        for kind in ("b", "bp", "sbp"):
            p = 0 if kind == "b" else int(rng.integers(1, prof.p_max + 1))
            res = bg.transform_full(kind, p, phi, z, 40, q, cross_check=True)
            worst = max(worst, res.route_gap)
            if kind == "b":
                worst = max(worst, abs(res.value - complex(np.exp(z * a / 2 - a * a / 8))))
    return worst, {"z_max": 2, "nodes": 200, "N": 40}


@check("bargmann.factorizations", "Bp = Ep B, SBp = Vp B, Lambda_p Bp = SBp, Theta_p SBp = Bp", 1e-14)
def _(prof, rng):
    worst = 0.0
    for _ in range(max(1, prof.cases // 4)):
        p = int(rng.integers(0, prof.p_max + 1))
        c = CoeffSeq(_crandn(rng, 21))
        b, bp, sbp = (bg.transform_coeffs(k, p, c) for k in ("b", "bp", "sbp"))
        for lhs, rhs in ((op.diag_unitary("Ep", p).apply(b), bp), (op.diag_unitary("Vp", p).apply(b), sbp),
                         (op.diag_unitary("Lambdap", p).apply(bp), sbp),
                         (op.diag_unitary("Thetap", p).apply(sbp), bp)):
            scale = np.max(np.abs(rhs.coeffs))
            worst = max(worst, float(np.max(np.abs(lhs.coeffs - rhs.coeffs)) / scale))
    return worst, {"p_max": prof.p_max}


DKA_Z = (-1.0 + 0.3j, -0.4 + 0.5j, 0.2 + 0.2j, 0.7 - 0.4j, 1.1 + 0.6j)
DKA_X = (-2.0, -0.9, 0.15, 1.1, 2.3)


@check("bargmann.derivative", "d^k A/dz^k = He_k(x - z) A vs finite differences", 1e-6)
def _(prof, rng):
    worst = 0.0
    for k in range(7):
        for z in DKA_Z:
            for x in DKA_X:
                exact = bg.dkA(k, z, x)
                for axis in ("real", "imag"):
                    worst = max(worst, _rel(fd_derivative(_mp_kernel_A(x), k, z, axis=axis), exact))
    return worst, {"k_max": 6, "grid": "5x5", "h": 1e-3}


@check("bargmann.kernel_gram", "L2 pairing of kernels equals the Hp / Fp reproducing kernels", 1e-7)
def _(prof, rng):
    worst = 0.0
    q = bg.gauss_hermite_rule(200)
    for z, w in ((1.0, 1.0), (0.5 + 0.3j, 1.2)):
        for p in range(3):
            worst = max(worst, abs(bg.kernel_gram("hp", p, z, w, q) - kn.kernel_hp(p, z, w).value))
            worst = max(worst, abs(bg.kernel_gram("fp", p, z, w, q) - kn.kernel_fp(p, z, w).value))
    return worst, {"p_max": 2, "nodes": 200, "N": 40}


@check("bargmann.recurrence", "A_{p+1} - A_p = Mz (Id + D Mz)^p D A", 1e-9)
def _(prof, rng):
    worst = 0.0
    for p in range(prof.p_max + 1):
        for _ in range(5):
            z, x = _rand_point(rng, 1.0), float(rng.uniform(-2, 2))
            worst = max(worst, bg.recurrence_gap(p, z, x))
    return worst, {"p_max": prof.p_max, "N": 60}


@check("bargmann.generating", "sum_p A_p/p! tends to exp(Id + Mz D) A", 1e-8)
def _(prof, rng):
    z = 0.1 + 0.05j
    worst = max(bg.generating_gap(z, x, 20, 20) for x in (-2.0, -0.5, 0.0, 1.0, 2.5))
    return worst, {"P": 20, "N": 20, "z": "0.1+0.05i"}


@check("bargmann.calAp_routes", "(R0 I)^p = (D0 + I R0)^p = Lambda expansion = (n+1)^{-p}", 0.0)
def _(prof, rng):
    bad = 0
    table = op.lambda_table(3)
    for p in range(4):
        ref = bg.calAp_operator(p)
        for route in ("R0I", "D0IR0", "lambda"):
            bad += not bg.calAp_operator(p, route, table).equals_on(ref, 25)
    return float(bad), {"p_max": 3, "n_max": 25}


@check("bargmann.stirling_form", "Stirling expansion of (Id + Mz D)^p equals (n+1)^p", 0.0)
def _(prof, rng):
    bad = 0
    for p in range(prof.p_max + 1):
        ref = bg.Ap_operator(p)
        bad += not bg.Ap_operator(p, "stirling").equals_on(ref, 40)
        bad += not bg.Ap_operator(p, "number").equals_on(ref, 40)
    return float(bad), {"p_max": prof.p_max, "n_max": 40}


@check("bargmann.p0_degeneration", "A_0 = calA_0 = A", 1e-12)
def _(prof, rng):
    worst = 0.0
    for _ in range(20):
        z, x = _rand_point(rng, 2.0), float(rng.uniform(-4, 4))
        a = bg.kernel_A(z, x)
        worst = max(worst, abs(bg.kernel_Ap(0, z, x) - a), abs(bg.kernel_calAp(0, z, x) - a))
    return worst, {"z_max": 2, "x_max": 4}


# moments -----------------------------------------------------------------------

@check("moments.hp_certificate", "H(s) and H(Es) PSD for s_n = n!/(n+1)^{2p}", 0.0)
def _(prof, rng):
    bad = sum(not mo.stieltjes_certificate(mo.hp_sequence(p), 6).psd for p in (1, 2, 3))
    return float(bad), {"p": [1, 2, 3], "N_max": 6}


@check("moments.fp_witness", "s_n = n!(n+1)^{2p} is not Stieltjes (minors -24 and -94)", 0.0)
def _(prof, rng):
    m1 = mo.leading_minors(mo.hankel(mo.fp_sequence(1), 2))[-1]
    m2 = mo.leading_minors(mo.hankel(mo.fp_sequence(2), 1))[-1]
    bad = (m1 != -24) + (m2 != -94)
    for p in (1, 2):
        cert = mo.stieltjes_certificate(mo.fp_sequence(p), 6)
        h = [r for r in cert.reports if r.kind == "H(s)"]
        first = next(i for i, r in enumerate(h) if not r.psd)
        bad += any(r.psd for r in h[first:])
    return float(bad), {"witness": {"p1_N2": str(m1), "p2_N1": str(m2)}}


@check("moments.carleman", "s_n <= M^n (2n)! with M = 1", 0.0)
def _(prof, rng):
    bad = sum(not mo.carleman_bound_check(mo.hp_sequence(p), 1, 40) for p in range(4))
    return float(bad), {"N": 40, "M": 1}


@check("moments.schur_structure", "Hankel of n!/(n+1)^{2p} is a Hadamard product; Pascal matrix PSD", 0.0)
def _(prof, rng):
    bad = 0
    for p in (1, 2):
        h = mo.hankel(mo.hp_sequence(p), 8)
        for i in range(9):
            for j in range(9):
                bad += h[i][j] != math.factorial(i + j) * Fraction(1, (i + j + 1) ** (2 * p))
    pascal = [[Fraction(math.comb(i + j, i)) for j in range(9)] for i in range(9)]
    bad += not mo.psd_check(pascal).psd
    return float(bad), {"N": 8}


# driver --------------------------------------------------------------------------

def run_verify(profile: str = "quick", seed: int = 0, timings: bool = False,
               only: list[str] | None = None) -> dict:
    prof = PROFILES[profile]
    records = []
    for cid in sorted(CHECKS):
        if only and not any(cid.startswith(o) for o in only):
            continue
        c = CHECKS[cid]
        rng = np.random.default_rng([seed, zlib.crc32(cid.encode())])
        t0 = time.perf_counter()
        try:
            metric, params = c.fn(prof, rng)
            metric = float(metric)
        except Exception as exc:  # a crashing check is a failing check
            metric, params = float("inf"), {"error": f"{type(exc).__name__}: {exc}"}
        ms = (time.perf_counter() - t0) * 1e3 if timings else None
        passed = bool(metric <= c.threshold)
        records.append(CheckRecord(cid, c.ref, params, metric, c.threshold, passed, ms))
    return {
        "profile": profile,
        "seed": seed,
        "pass": all(r.passed for r in records),
        "checks": [r.to_json() for r in records],
    }


def report_json(report: dict, pretty: bool = False) -> str:
    return json.dumps(report, indent=2 if pretty else None, sort_keys=False, allow_nan=True) + "\n"
