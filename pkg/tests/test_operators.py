from fractions import Fraction

import numpy as np
import pytest

from genfock.coeffspace import FOCK, CoeffSeq, KernelSpec, Space, norm, weights
from genfock.operators import (D, D0, I, Id, R0, BaseOp, DiagonalOp, Mz, OpMatrix, adjoint_of,
                               adjoint_pairing_check, apply_base, base_op, commutator, commutator_diag_formula,
                               commutator_matrix, composed_adjoint, composed_form, diag_unitary,
                               diag_unitary_literal, evaluate_expr, lambda_expansion, lambda_table)

F = Fraction
SPECS = [KernelSpec(s, p) for s in (Space.HP, Space.FP) for p in range(4)]


def test_apply_base_examples():
    f = CoeffSeq([1, 2, 3])
    assert apply_base("R0", f) == CoeffSeq([2, 3, 0])
    assert apply_base(BaseOp.I, [F(0), F(0), F(1), F(0)]) == [0, 0, 0, F(1, 3)]
    assert apply_base("D", f) == CoeffSeq([2, 6, 0])
    assert apply_base("Mz", f) == CoeffSeq([0, 1, 2])  # top coefficient dropped
    c = commutator(R0, I)
    assert c.apply([F(1), 0, 0]) == [1, 0, 0]
    assert c.apply([0, 0, F(1)]) == [0, 0, F(-1, 6)]


def test_weighted_shift_composition_rules():
    assert (R0 @ I).shift == 0 and isinstance(R0 @ I, DiagonalOp)
    assert (I @ R0).coeff(0) == 0
    assert R0.coeff(0) == 0 and D.coeff(0) == 0
    assert (Mz @ Mz).reach == 2 and (R0 @ Mz).reach == 1 and (Mz @ R0).reach == 0
    with pytest.raises(ValueError):
        R0 + I
    assert (2 * Id - Id).equals_on(Id, 10)
    assert (Mz @ D) ** 0 is Id


def test_commutator_matrix_examples():
    N = 12
    c = commutator_matrix(Mz.matrix(N), D.matrix(N))
    assert c.interior == N - 1
    for j in range(c.interior + 1):
        assert c.column(j) == {j: -1}
    c = commutator_matrix(R0.matrix(N), I.matrix(N))
    assert all(c.entry(n, n) == D0.coeff(n) for n in range(c.interior + 1))
    a = adjoint_of("R0", KernelSpec("hp", 2)).matrix(N)
    assert all(not col for col in commutator_matrix(a, a).cols)
    with pytest.raises(ValueError):
        commutator_matrix(R0.matrix(3), R0.matrix(4))


def test_adjoint_examples():
    assert adjoint_of("R0", KernelSpec("hp", 1)).apply([0, 0, F(1), 0]) == [0, 0, 0, F(16, 27)]
    assert adjoint_of("D", FOCK).equals_on(Mz, 30)
    assert adjoint_of("R0", FOCK).equals_on(I, 30)
    t = adjoint_of("I", KernelSpec("fp", 1))
    assert t.shift == -1 and t.coeff(3) == F(16, 9)
    for spec in SPECS:
        if spec.space is Space.FP:
            assert adjoint_of("Mz", spec).coeff(0) == 0 and adjoint_of("I", spec).coeff(0) == 0


def test_adjoint_pairing_exact():
    for spec in [FOCK] + SPECS:
        for b in BaseOp:
            assert adjoint_pairing_check(b, spec, 30) == 0
    # a wrong adjoint is detected
    assert adjoint_pairing_check("R0", KernelSpec("hp", 1), 5, adjoint=I) > 0


def test_composed_adjoint_matches_tables():
    N = 40
    for spec in SPECS:
        for b in BaseOp:
            m = composed_adjoint(b, spec, N)
            t = adjoint_of(b, spec)
            assert m.interior >= N - 2
            assert m.equal_columns(t.matrix(N))
            assert composed_form(b, spec).equals_on(t, N)
    # Fp Mz* column n has (n+1)^2/n at row n-1 for p = 1
    m = composed_adjoint("Mz", KernelSpec("fp", 1), 20)
    for n in range(1, 20):
        assert m.column(n) == {n - 1: F((n + 1) ** 2, n)}


def test_composed_adjoint_p0_is_fock():
    for space in (Space.HP, Space.FP):
        m = composed_adjoint("R0", KernelSpec(space, 0), 15)
        assert m.equal_columns(I.matrix(15))


def test_commutator_closed_forms():
    N = 32
    for spec in SPECS:
        for pair, name in (("MzMzStar", "Mz"), ("R0R0Star", "R0")):
            c = commutator_matrix(base_op(name).matrix(N), adjoint_of(name, spec).matrix(N))
            for n in range(c.interior + 1):
                assert c.column(n) in ({n: commutator_diag_formula(pair, spec, n)}, {})
                assert c.entry(n, n) == commutator_diag_formula(pair, spec, n)


def test_commutator_boundary_values():
    for p in range(5):
        assert commutator_diag_formula("R0R0Star", KernelSpec("hp", p), 0) == 4**p
        assert commutator_diag_formula("R0R0Star", KernelSpec("fp", p), 0) == F(1, 4**p)
        assert commutator_diag_formula("MzMzStar", KernelSpec("fp", p), 0) == -(4**p)
    assert commutator_diag_formula("MzMzStar", KernelSpec("hp", 1), 0) == F(-1, 4)
    with pytest.raises(ValueError):
        commutator_diag_formula("nope", FOCK, 0)


def test_p0_degeneration():
    for space in (Space.HP, Space.FP):
        spec = KernelSpec(space, 0)
        for n in range(30):
            assert commutator_diag_formula("MzMzStar", spec, n) == -1
            assert commutator_diag_formula("R0R0Star", spec, n) == D0.coeff(n)


def test_diagonal_power_identities():
    for k in range(7):
        a, b, c = (R0 @ I) ** k, (I @ R0) ** k, (R0 @ R0 @ I @ Mz) ** k
        for n in range(31):
            assert a.coeff(n) == F(1, (n + 1) ** k)
            if n:
                assert b.coeff(n) == F(1, n**k)
            assert c.coeff(n) == F(1, (n + 2) ** k)


def test_diagonal_shifts():
    d = DiagonalOp(lambda n: F(n + 1))
    assert d.forward(1).entries(4) == [0, 1, 2, 3, 4]
    assert d.forward(2).entries(3) == [0, 0, 1, 2]
    assert d.backward(1).entries(3) == [2, 3, 4, 5]
    assert D0.entries(3) == [1, F(-1, 2), F(-1, 6), F(-1, 12)]


def test_lambda_table_examples():
    t = lambda_table(6)
    for n in range(1, 7):
        assert t[n, n].equals_on(Id, 30)
    assert all(v == 0 for v in t[0, 3].entries(30))
    N = 20
    lhs = (I.matrix(N) @ R0.matrix(N)) ** 2
    assert lambda_expansion(2, t, N).equal_columns(lhs, N)
    for n in range(7):
        assert lambda_expansion(n, t, 30).equal_columns((I.matrix(30) @ R0.matrix(30)) ** n, 30)


def test_unitaries():
    assert diag_unitary("Ep", 1).apply([0, 0, 0, F(1)]) == [0, 0, 0, 4]
    for p in range(5):
        e, v = diag_unitary("Ep", p), diag_unitary("Vp", p)
        th, la = diag_unitary("Thetap", p), diag_unitary("Lambdap", p)
        assert (v @ e).equals_on(Id, 40)
        assert th.equals_on(diag_unitary("Ep", 2 * p), 40)
        assert th.equals_on(e @ e, 40) and la.equals_on(v @ v, 40)
        assert (th @ la).equals_on(Id, 40)
        for kind in ("Ep", "Vp", "Thetap", "Lambdap"):
            assert diag_unitary_literal(kind, p).equals_on(diag_unitary(kind, p), 40)
        assert diag_unitary_literal("Ep", p, 10).equal_columns(diag_unitary("Ep", p).matrix(10))


def test_isometries():
    rng = np.random.default_rng(2)
    for _ in range(100):
        p = int(rng.integers(0, 5))
        f = CoeffSeq((rng.normal(size=33) + 1j * rng.normal(size=33)) / np.sqrt(weights(FOCK, 32)))
        ref = norm(FOCK, f)
        assert norm(KernelSpec("hp", p), diag_unitary("Ep", p).apply(f)) == pytest.approx(ref, rel=1e-12)
        assert norm(KernelSpec("fp", p), diag_unitary("Vp", p).apply(f)) == pytest.approx(ref, rel=1e-12)


def test_opmatrix_algebra():
    a = R0.matrix(5)
    assert (a + OpMatrix.identity(5)).entry(0, 1) == 1
    assert (a ** 0).equal_columns(OpMatrix.identity(5), 5)
    assert (3 * a - a - a - a).max_defect(0 * a, 5) == 0
    arr = Mz.matrix(4).to_array()
    assert arr[1, 0] == 1 and arr.shape == (5, 5)
    assert Mz.matrix(3).to_csv().splitlines()[1] == "1,0,0,0"
    with pytest.raises(TypeError):
        a @ np.eye(6)


def test_expression_language():
    t = evaluate_expr("adj(R0, hp, 1)")
    assert t.coeff(3) == F(25, 64) and t.shift == 1
    m = evaluate_expr("R0*I - I*R0", 6)
    assert [m.entry(n, n) for n in range(6)] == D0.entries(5)
    assert evaluate_expr("(Id + Mz*D)^2", 8).equal_columns(diag_unitary("Thetap", 1).matrix(8))
    assert evaluate_expr("Vp(2) @ Ep(2)").equals_on(Id, 20)
    assert evaluate_expr("Thetap(1)*Lambdap(1)").equals_on(Id, 20)
    assert evaluate_expr("2*D0 - D0").equals_on(D0, 10)
    # mixed shifts only exist as matrices
    assert evaluate_expr("R0 + I", 4).entry(1, 0) == 1
    for bad in ("foo", "R0 ^ -1", "adj(R0, qq, 1)", "3", "open('x')", "R0.__class__"):
        with pytest.raises((ValueError, KeyError)):
            evaluate_expr(bad)
