"""Acceptance suite: one test per criterion, at the stated tolerances.

Run under pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly as a script.
"""

import cmath
import math
import subprocess
import sys
import time
from fractions import Fraction

import mpmath
import numpy as np

from genfock import bargmann as bg
from genfock import moments as mo
from genfock import operators as op
from genfock.coeffspace import FOCK, CoeffSeq, KernelSpec, Space, norm, weight_exact, weights
from genfock.kernels import kernel, kernel_fp, kernel_hp, reproduce_check
from genfock.specfun import hermite_functions
from genfock.verify import fd_derivative

SPACES = (Space.HP, Space.FP)


def _disk(rng, radius, size):
    return radius * np.sqrt(rng.uniform(size=size)) * np.exp(2j * np.pi * rng.uniform(size=size))


def test_c01_reproducing_property():
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    worst = 0.0
    for space in SPACES:
        for _ in range(200):
            spec = KernelSpec(space, int(rng.integers(0, 4)))
            deg = int(rng.integers(0, 33))
            f = CoeffSeq((rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)) / np.sqrt(weights(spec, deg)))
            w = complex(_disk(rng, 2.0, 1)[0])
            worst = max(worst, reproduce_check(spec, f, w, 32) / (1 + abs(f(w))))
    elapsed = time.perf_counter() - t0
    assert worst <= 1e-10
    assert elapsed < 2.0


def _two_route_worst(fn):
    rng = np.random.default_rng(7)
    ts = [4, -4, 4j, -4j, 2.8 + 2.8j, -2.8 - 2.8j, 0, 1e-9] + list(_disk(rng, 4.0, 60))
    worst = 0.0
    for p in range(5):
        for t in ts:
            # split t = z conj(w) across both arguments
            z = cmath.sqrt(t) if t else 0.3
            w = (t / z).conjugate() if t else 0
            v = fn(p, z, w, 60)
            worst = max(worst, v.abs_gap / (1 + abs(v.value)))
    return worst


def test_c02_touchard_closed_form():
    assert _two_route_worst(kernel_hp) <= 1e-12
    v = kernel_hp(1, 1, 1, 60)
    assert abs(v.closed_value - 5 * math.e) <= 1e-12
    assert abs(v.series_value - 5 * math.e) <= 1e-12


def test_c03_hypergeometric_closed_form():
    assert _two_route_worst(kernel_fp) <= 1e-12


def test_c04_adjoint_pairing():
    for space in SPACES:
        for p in range(4):
            for b in op.BaseOp:
                assert op.adjoint_pairing_check(b, KernelSpec(space, p), 30) == 0


def test_c05_composed_adjoints():
    N = 40
    for space in SPACES:
        for p in range(4):
            spec = KernelSpec(space, p)
            for b in op.BaseOp:
                m = op.composed_adjoint(b, spec, N)
                assert m.interior >= N - 2
                assert m.max_defect(op.adjoint_of(b, spec).matrix(N)) == 0


def test_c06_commutator_diagonals():
    N = 32
    for space in SPACES:
        for p in range(4):
            spec = KernelSpec(space, p)
            for pair, name in (("MzMzStar", "Mz"), ("R0R0Star", "R0")):
                c = op.commutator_matrix(op.base_op(name).matrix(N), op.adjoint_of(name, spec).matrix(N))
                assert c.interior >= 30
                for n in range(31):
                    col = c.column(n)
                    assert col.get(n, 0) == op.commutator_diag_formula(pair, spec, n)
                    assert all(v == 0 for i, v in col.items() if i != n)
            # boundary values on the constant function
            if space is Space.HP:
                assert c.entry(0, 0) == 4**p
            else:
                assert c.entry(0, 0) == Fraction(1, 4**p)
                mz = op.commutator_matrix(op.Mz.matrix(N), op.adjoint_of("Mz", spec).matrix(N))
                assert mz.entry(0, 0) == -(4**p)


def test_c07_lambda_recurrence():
    N = 30
    table = op.lambda_table(6)
    ir0 = op.I.matrix(N) @ op.R0.matrix(N)
    for n in range(1, 7):
        assert op.lambda_expansion(n, table, N).max_defect(ir0**n, N) == 0


def test_c08_isometries_and_bridges():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        p = int(rng.integers(0, 5))
        f = CoeffSeq((rng.normal(size=41) + 1j * rng.normal(size=41)) / np.sqrt(weights(FOCK, 40)))
        ref = norm(FOCK, f)
        worst = max(worst, abs(norm(KernelSpec("hp", p), op.diag_unitary("Ep", p).apply(f)) - ref) / ref)
        worst = max(worst, abs(norm(KernelSpec("fp", p), op.diag_unitary("Vp", p).apply(f)) - ref) / ref)
    assert worst <= 1e-12
    for p in range(5):
        e, v = op.diag_unitary("Ep", p), op.diag_unitary("Vp", p)
        th, lam = op.diag_unitary("Thetap", p), op.diag_unitary("Lambdap", p)
        assert th.equals_on(e @ e, 60)
        assert lam.equals_on(v @ v, 60)
        assert (th @ lam).equals_on(op.Id, 60)


def test_c09_bargmann_eigenrelations():
    q = bg.gauss_hermite_rule(200)
    rng = np.random.default_rng(9)
    zs = [2, -2, 2j, 1.4 - 1.4j] + list(_disk(rng, 2.0, 6))
    worst = 0.0
    for n in range(21):
        phi = bg.L2Function(samples=lambda x, n=n: hermite_functions(n, x)[n])
        for z in zs:
            base = z**n / math.sqrt(math.factorial(n))
            worst = max(worst, abs(bg.transform("b", 0, phi, z, 40, q) - base))
            for p in (1, 2, 3):
                worst = max(worst, abs(bg.transform("bp", p, phi, z, 40, q) - (n + 1) ** p * base) / (n + 1) ** p)
                worst = max(worst, abs(bg.transform("sbp", p, phi, z, 40, q) - base / (n + 1) ** p))
    assert worst <= 1e-8


def test_c10_unitarity():
    q = bg.gauss_hermite_rule(200)
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(20):
        c = rng.normal(size=20) + 1j * rng.normal(size=20)
        phi = bg.L2Function(samples=lambda x, c=c: np.tensordot(c, hermite_functions(19, x), axes=1))
        l2 = math.sqrt(q.integrate(np.abs(phi(q.nodes)) ** 2).real)
        ext = phi.coeffs(40, q)
        for p in range(4):
            for kind, space in (("bp", "hp"), ("sbp", "fp")):
                got = norm(KernelSpec(space, p), bg.transform_coeffs(kind, p, ext))
                worst = max(worst, abs(got - l2) / l2)
    assert worst <= 1e-10


def test_c11_derivative_formula():
    zs = (-1.0 + 0.3j, -0.4 + 0.5j, 0.2 + 0.2j, 0.7 - 0.4j, 1.1 + 0.6j)
    xs = (-2.0, -0.9, 0.15, 1.1, 2.3)
    worst = 0.0
    for x in xs:
        def a(z, x=x):
            return (2 * mpmath.pi) ** mpmath.mpf(-0.25) * mpmath.exp(-mpmath.mpf(x) ** 2 / 4 - z * z / 2 + z * x)

        for z in zs:
            for k in range(7):
                exact = bg.dkA(k, z, x)
                for axis in ("real", "imag"):
                    worst = max(worst, abs(fd_derivative(a, k, z, h=1e-3, axis=axis) - exact) / abs(exact))
    assert worst <= 1e-6


def test_c12_kernel_gram_integrals():
    q = bg.gauss_hermite_rule(200)
    for z, w in ((1.0, 1.0), (0.5 + 0.3j, 1.2)):
        for p in range(3):
            assert abs(bg.kernel_gram("hp", p, z, w, q, 40) - kernel_hp(p, z, w).value) <= 1e-7
            assert abs(bg.kernel_gram("fp", p, z, w, q, 40) - kernel_fp(p, z, w).value) <= 1e-7


def test_c13_moment_certificates():
    for p in (1, 2, 3):
        cert = mo.stieltjes_certificate(mo.hp_sequence(p), 6, "exact")
        assert cert.psd and {r.kind for r in cert.reports} == {"H(s)", "H(Es)"}
    r = mo.psd_check(mo.hankel(mo.fp_sequence(1), 2))
    assert not r.psd and r.leading_minors[-1] == -24
    r = mo.psd_check(mo.hankel(mo.fp_sequence(2), 1))
    assert not r.psd and r.leading_minors[-1] == -94
    for p in (0, 1, 2, 3):
        assert mo.carleman_bound_check(mo.hp_sequence(p), 1, 40)


def test_c14_p0_degeneration():
    for space in SPACES:
        spec = KernelSpec(space, 0)
        assert all(weight_exact(spec, n) == weight_exact(FOCK, n) for n in range(101))
        for b in op.BaseOp:
            assert op.adjoint_of(b, spec).equals_on(op.adjoint_of(b, FOCK), 60)
        rng = np.random.default_rng(14)
        for z, w in zip(_disk(rng, 2.0, 10), _disk(rng, 2.0, 10)):
            fock = cmath.exp(z * w.conjugate())
            assert abs(kernel(spec, z, w).value - fock) <= 1e-12 * abs(fock)
            assert abs(kernel(spec, z, w).series_value - fock) <= 1e-12 * abs(fock)
    rng = np.random.default_rng(15)
    c = CoeffSeq(rng.normal(size=21) + 1j * rng.normal(size=21))
    b = bg.transform_coeffs("b", 0, c)
    assert bg.transform_coeffs("bp", 0, c) == b and bg.transform_coeffs("sbp", 0, c) == b
    for z, x in zip(_disk(rng, 2.0, 10), rng.uniform(-4, 4, size=10)):
        a = bg.kernel_A(z, x)
        assert abs(bg.kernel_Ap(0, z, x) - a) <= 1e-12
        assert abs(bg.kernel_calAp(0, z, x) - a) <= 1e-12


def _verify(*args):
    return subprocess.run([sys.executable, "-m", "genfock", "verify", *args], capture_output=True)


def test_c15_cli_determinism():
    a, b = _verify("--profile", "quick", "--seed", "1"), _verify("--profile", "quick", "--seed", "1")
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout and len(a.stdout) > 0
    t0 = time.perf_counter()
    full = _verify("--profile", "full", "--seed", "1")
    assert full.returncode == 0
    assert time.perf_counter() - t0 < 60


if __name__ == "__main__":
    tests = [(name, fn) for name, fn in sorted(globals().items()) if name.startswith("test_c")]
    failed = 0
    for name, fn in tests:
        try:
            fn()
            verdict = "PASS"
        except Exception as exc:  # report and keep going
            verdict = f"FAIL ({type(exc).__name__}: {exc})"
            failed += 1
        print(f"criterion {int(name[6:8]):2d} {name[9:]:<32} {verdict}")
    sys.exit(1 if failed else 0)
