import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from genfock.coeffspace import FOCK, CoeffSeq, KernelSpec, Space, weights
from genfock.kernels import (kernel, kernel_fock, kernel_fp, kernel_hp, kernel_section, kernel_section_exact,
                             reproduce_check)
from genfock.operators import diag_unitary


def test_hp_kernel_examples():
    for z, w in ((0.3 + 1j, -0.5j), (2, 1.5)):
        v = kernel_hp(0, z, w)
        assert v.value == pytest.approx(cmath.exp(z * np.conj(w)), rel=1e-13)
        assert v.series_value == pytest.approx(v.value, rel=1e-13)
    for p in range(5):
        assert kernel_hp(p, 1.3 - 0.2j, 0).value == 1
    v = kernel_hp(1, 1, 1)
    assert abs(v.value - 5 * math.e) < 1e-12
    assert abs(v.series_value - 5 * math.e) < 1e-12
    assert v.abs_gap == abs(v.series_value - v.closed_value)
    assert v.terms_used == 61


def test_fp_kernel_examples():
    assert kernel_fp(0, 0.4 + 0.1j, 1.1).value == pytest.approx(cmath.exp((0.4 + 0.1j) * 1.1), rel=1e-13)
    assert kernel_fp(2, 3.0, 0).value == 1
    v = kernel_fp(1, 1, 1, 60)
    assert v.value == pytest.approx(1.3179, abs=1e-4)
    assert v.abs_gap <= 1e-13
    oracle = math.fsum(1 / (math.factorial(n) * (n + 1) ** 2) for n in range(200))
    assert v.value == pytest.approx(oracle, rel=1e-14)


@pytest.mark.parametrize("fn", [kernel_hp, kernel_fp])
def test_two_route_agreement_grid(fn):
    rng = np.random.default_rng(3)
    pts = [4, -4, 4j, -4j, -2.8 + 2.8j] + list(4 * np.sqrt(rng.uniform(size=20)) * np.exp(2j * np.pi * rng.uniform(size=20)))
    for p in range(5):
        for t in pts:
            v = fn(p, t, 1.0, 60)
            assert v.abs_gap <= 1e-12 * (1 + abs(v.value))


def test_kernel_dispatch_and_fock():
    assert kernel(FOCK, 1, 1).value == pytest.approx(math.e)
    assert kernel(KernelSpec("hp", 2), 0.5, 0.5).value == kernel_hp(2, 0.5, 0.5).value
    assert kernel(KernelSpec("fp", 2), 0.5, 0.5).value == kernel_fp(2, 0.5, 0.5).value
    assert kernel_fock(1j, 1).value == pytest.approx(cmath.exp(1j))


def test_hermitian_symmetry():
    rng = np.random.default_rng(5)
    for spec in [KernelSpec(s, p) for s in (Space.HP, Space.FP) for p in range(4)]:
        z, w = rng.normal(size=2) + 1j * rng.normal(size=2)
        a, b = kernel(spec, z, w).value, kernel(spec, w, z).value
        assert abs(a - np.conj(b)) <= 1e-13 * abs(a)


def test_kernel_gram_is_psd():
    rng = np.random.default_rng(11)
    for spec in [KernelSpec(s, p) for s in (Space.HP, Space.FP) for p in range(4)]:
        pts = rng.normal(size=6) + 1j * rng.normal(size=6)
        g = np.array([[kernel(spec, a, b).value for b in pts] for a in pts])
        assert np.linalg.eigvalsh((g + g.conj().T) / 2)[0] >= -1e-9 * np.trace(g).real


def test_kernel_section_examples():
    s = kernel_section(KernelSpec("hp", 3), 0, 5)
    assert s == CoeffSeq([1, 0, 0, 0, 0, 0])
    s = kernel_section(FOCK, 1, 10)
    np.testing.assert_allclose(s.coeffs.real, [1 / math.factorial(n) for n in range(11)])
    assert kernel_section(KernelSpec("hp", 1), 1, 4)[2] == pytest.approx(4.5)
    assert kernel_section_exact(KernelSpec("hp", 1), Fraction(1), 4)[2] == Fraction(9, 2)


def test_reproduce_examples():
    hp1 = KernelSpec("hp", 1)
    assert reproduce_check(hp1, CoeffSeq.monomial(3), 0.7 + 0.2j) <= 1e-12
    assert reproduce_check(hp1, CoeffSeq.zeros(5), 0.7 + 0.2j) == 0
    with pytest.raises(ValueError):
        reproduce_check(hp1, CoeffSeq.monomial(6), 1.0, N=3)


def test_reproduce_random_polynomials():
    rng = np.random.default_rng(7)
    for space in (Space.HP, Space.FP):
        for _ in range(200):
            spec = KernelSpec(space, int(rng.integers(0, 4)))
            deg = int(rng.integers(0, 33))
            f = CoeffSeq((rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)) / np.sqrt(weights(spec, deg)))
            w = 2 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
            assert reproduce_check(spec, f, w, 40) <= 1e-10 * (1 + abs(f(w)))


def test_bridge_theta_squared():
    w = Fraction(5, 3)
    for p in range(4):
        fp = kernel_section_exact(KernelSpec("fp", p), w, 60)
        hp = kernel_section_exact(KernelSpec("hp", p), w, 60)
        theta = diag_unitary("Thetap", p)
        assert [theta.coeff(n) ** 2 * a for n, a in enumerate(fp)] == hp
