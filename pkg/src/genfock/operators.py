"""Weighted shifts on coefficient sequences and their adjoints.

Every operator here acts on monomials as z^n -> c(n) z^{n+s}.  Two
representations are kept side by side:

* ``WeightedShiftOp`` / ``DiagonalOp`` hold the shift and an exact rational
  weight function; composition, sums and powers stay in this form.
* ``OpMatrix`` is a sparse exact finite section on degrees 0..N, built only
  for verification.  Products of sections are exact on columns whose
  images never leave the window; ``reach`` tracks how far that can go.

Base operators:  R0 f = (f - f(0))/z,  I f = int_0^z f,  D = d/dz,  Mz f = z f.
"""

from __future__ import annotations

import ast
import enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .coeffspace import CoeffSeq, KernelSpec, Space, weight_exact

__all__ = [
    "BaseOp",
    "WeightedShiftOp",
    "DiagonalOp",
    "OpMatrix",
    "R0",
    "I",
    "D",
    "Mz",
    "Id",
    "D0",
    "base_op",
    "apply_base",
    "adjoint_of",
    "composed_form",
    "composed_adjoint",
    "commutator",
    "commutator_matrix",
    "commutator_diag_formula",
    "diag_unitary",
    "diag_unitary_literal",
    "lambda_table",
    "lambda_expansion",
    "adjoint_pairing_check",
    "evaluate_expr",
]

Weight = Callable[[int], Fraction]


class BaseOp(str, enum.Enum):
    R0 = "R0"
    I = "I"
    D = "D"
    MZ = "Mz"

    @classmethod
    def parse(cls, text: str) -> "BaseOp":
        key = text.strip()
        aliases = {"dz": "D", "d": "D", "mz": "Mz", "r0": "R0", "i": "I"}
        return cls(aliases.get(key.lower(), key))


class WeightedShiftOp:
    """z^n -> weight(n) z^{n+shift}; zero whenever n+shift < 0.

    ``reach`` is the highest degree excursion above the input degree that
    occurs while the operator is applied as a product of base operators.
    """

    def __init__(self, shift: int, weight: Weight, reach: int | None = None, name: str = ""):
        self.shift = int(shift)
        self._weight = lru_cache(maxsize=None)(weight)
        self.reach = max(0, self.shift) if reach is None else int(reach)
        self.name = name

    def __repr__(self):
        return f"{type(self).__name__}({self.name or '?'}, shift={self.shift})"

    def coeff(self, n: int) -> Fraction:
        if n < 0 or n + self.shift < 0:
            return Fraction(0)
        return Fraction(self._weight(n))

    __call__ = coeff

    # algebra -----------------------------------------------------------
    def __matmul__(self, other: "WeightedShiftOp") -> "WeightedShiftOp":
        if not isinstance(other, WeightedShiftOp):
            return NotImplemented
        a, b = self, other

        def w(n):
            m = n + b.shift
            return b.coeff(n) * a.coeff(m) if m >= 0 else Fraction(0)

        return _make(a.shift + b.shift, w, max(b.reach, b.shift + a.reach), f"{a.name}{b.name}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = other * Id
        if not isinstance(other, WeightedShiftOp):
            return NotImplemented
        if other.shift != self.shift:
            raise ValueError("sum of weighted shifts with different degree changes")
        a, b = self, other
        return _make(a.shift, lambda n: a.coeff(n) + b.coeff(n), max(a.reach, b.reach),
                     f"({a.name}+{b.name})")

    __radd__ = __add__

    def __neg__(self):
        return -1 * self

    def __sub__(self, other):
        return self + (-1) * other

    def __rsub__(self, other):
        return (-1) * self + other

    def __mul__(self, scalar):
        if isinstance(scalar, WeightedShiftOp):
            return self @ scalar
        c = Fraction(scalar)
        a = self
        return _make(a.shift, lambda n: c * a.coeff(n), a.reach, f"{c}{a.name}")

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not weighted shifts in general")
        out = Id
        for _ in range(k):
            out = self @ out
        if k == 0:
            return out
        out.name = f"({self.name})^{k}"
        return out

    # action ------------------------------------------------------------
    def apply(self, f):
        """Apply to a CoeffSeq (floating) or to a plain sequence (exact).

        The truncation is preserved; anything pushed above it is dropped.
        """
        if isinstance(f, CoeffSeq):
            N = f.truncation
            out = np.zeros(N + 1, dtype=complex)
            for n, a in enumerate(f.coeffs):
                m = n + self.shift
                if a != 0 and 0 <= m <= N:
                    out[m] += float(self.coeff(n)) * a
            return CoeffSeq(out)
        seq = list(f)
        N = len(seq) - 1
        out = [Fraction(0)] * (N + 1)
        for n, a in enumerate(seq):
            m = n + self.shift
            if a != 0 and 0 <= m <= N:
                out[m] += self.coeff(n) * a
        return out

    def matrix(self, N: int) -> "OpMatrix":
        cols = []
        for j in range(N + 1):
            i = j + self.shift
            c = self.coeff(j)
            cols.append({i: c} if 0 <= i <= N and c != 0 else {})
        return OpMatrix(cols, reach=self.reach, rise=self.shift)

    def equals_on(self, other: "WeightedShiftOp", n_max: int) -> bool:
        if self.shift != other.shift:
            return all(self.coeff(n) == 0 and other.coeff(n) == 0 for n in range(n_max + 1))
        return all(self.coeff(n) == other.coeff(n) for n in range(n_max + 1))


class DiagonalOp(WeightedShiftOp):
    """Diagonal operator diag(d_0, d_1, ...)."""

    def __init__(self, entries: Weight, reach: int = 0, name: str = ""):
        super().__init__(0, entries, reach, name)

    def entries(self, N: int) -> list[Fraction]:
        return [self.coeff(n) for n in range(N + 1)]

    def forward(self, steps: int = 1) -> "DiagonalOp":
        """diag(0, .., 0, d_0, d_1, ...) with ``steps`` leading zeros."""
        d = self
        return DiagonalOp(lambda n: d.coeff(n - steps) if n >= steps else Fraction(0),
                          name=f"{d.name}^({steps})")

    def backward(self, steps: int = 1) -> "DiagonalOp":
        """diag(d_steps, d_{steps+1}, ...)."""
        d = self
        return DiagonalOp(lambda n: d.coeff(n + steps), name=f"{d.name}^(-{steps})")


def _make(shift, weight, reach, name) -> WeightedShiftOp:
    if shift == 0:
        return DiagonalOp(weight, reach, name)
    return WeightedShiftOp(shift, weight, reach, name)


R0 = WeightedShiftOp(-1, lambda n: Fraction(1), name="R0")
I = WeightedShiftOp(1, lambda n: Fraction(1, n + 1), name="I")
D = WeightedShiftOp(-1, lambda n: Fraction(n), name="D")
Mz = WeightedShiftOp(1, lambda n: Fraction(1), name="Mz")
Id = DiagonalOp(lambda n: Fraction(1), name="Id")
D0 = DiagonalOp(lambda n: Fraction(1) if n == 0 else Fraction(-1, n * (n + 1)), name="D0")

_BASE = {BaseOp.R0: R0, BaseOp.I: I, BaseOp.D: D, BaseOp.MZ: Mz}


def base_op(op: BaseOp | str) -> WeightedShiftOp:
    return _BASE[BaseOp.parse(op) if isinstance(op, str) else op]


def apply_base(op: BaseOp | str, f):
    """R0: b_n = a_{n+1};  I: b_n = a_{n-1}/n;  D: b_n = (n+1) a_{n+1};  Mz: b_n = a_{n-1}."""
    return base_op(op).apply(f)


# sparse exact sections -------------------------------------------------------

class OpMatrix:
    """Sparse exact (N+1)x(N+1) section; column j holds the image of z^j.

    ``reach``/``rise`` bound the upward excursion and net degree change, so
    columns j <= N - reach agree with the infinite operator.
    """

    def __init__(self, cols: Sequence[dict], reach: int = 0, rise: int = 0):
        self.cols = [{i: Fraction(v) for i, v in c.items() if v != 0} for c in cols]
        self.reach = reach
        self.rise = rise

    @property
    def N(self) -> int:
        return len(self.cols) - 1

    @property
    def interior(self) -> int:
        """Largest column index that is free of truncation effects."""
        return self.N - self.reach

    @classmethod
    def identity(cls, N: int) -> "OpMatrix":
        return cls([{j: Fraction(1)} for j in range(N + 1)])

    def _check(self, other):
        if not isinstance(other, OpMatrix):
            raise TypeError(f"expected OpMatrix, got {type(other).__name__}")
        if other.N != self.N:
            raise ValueError(f"truncation mismatch: {self.N} vs {other.N}")

    def __matmul__(self, other: "OpMatrix") -> "OpMatrix":
        self._check(other)
        cols = []
        for col in other.cols:
            out: dict[int, Fraction] = {}
            for k, b in col.items():
                for i, a in self.cols[k].items():
                    out[i] = out.get(i, 0) + a * b
            cols.append(out)
        return OpMatrix(cols, max(other.reach, other.rise + self.reach), self.rise + other.rise)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = other * OpMatrix.identity(self.N)
        self._check(other)
        cols = []
        for a, b in zip(self.cols, other.cols):
            out = dict(a)
            for i, v in b.items():
                out[i] = out.get(i, 0) + v
            cols.append(out)
        return OpMatrix(cols, max(self.reach, other.reach), max(self.rise, other.rise))

    __radd__ = __add__

    def __mul__(self, scalar):
        if isinstance(scalar, OpMatrix):
            return self @ scalar
        c = Fraction(scalar)
        return OpMatrix([{i: c * v for i, v in col.items()} for col in self.cols], self.reach, self.rise)

    __rmul__ = __mul__

    def __neg__(self):
        return -1 * self

    def __sub__(self, other):
        return self + (-1) * other

    def __rsub__(self, other):
        return (-1) * self + other

    def __pow__(self, k: int):
        out = OpMatrix.identity(self.N)
        for _ in range(k):
            out = self @ out
        return out

    def entry(self, i: int, j: int) -> Fraction:
        return self.cols[j].get(i, Fraction(0))

    def column(self, j: int) -> dict[int, Fraction]:
        return dict(self.cols[j])

    def dense(self) -> list[list[Fraction]]:
        return [[self.entry(i, j) for j in range(self.N + 1)] for i in range(self.N + 1)]

    def to_array(self) -> np.ndarray:
        a = np.zeros((self.N + 1, self.N + 1))
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                a[i, j] = float(v)
        return a

    def apply(self, f: CoeffSeq) -> CoeffSeq:
        return CoeffSeq(self.to_array() @ f.padded(self.N).coeffs)

    def equal_columns(self, other: "OpMatrix", upto: int | None = None) -> bool:
        self._check(other)
        upto = min(self.interior, other.interior) if upto is None else upto
        return all(self.cols[j] == other.cols[j] for j in range(upto + 1))

    def max_defect(self, other: "OpMatrix", upto: int | None = None) -> Fraction:
        self._check(other)
        upto = min(self.interior, other.interior) if upto is None else upto
        worst = Fraction(0)
        for j in range(upto + 1):
            for i in set(self.cols[j]) | set(other.cols[j]):
                worst = max(worst, abs(self.entry(i, j) - other.entry(i, j)))
        return worst

    def to_csv(self) -> str:
        return "\n".join(",".join(str(v) for v in row) for row in self.dense())


def _algebra(N: int | None) -> dict:
    if N is None:
        return {"R0": R0, "I": I, "D": D, "Mz": Mz, "Id": Id}
    return {"R0": R0.matrix(N), "I": I.matrix(N), "D": D.matrix(N), "Mz": Mz.matrix(N),
            "Id": OpMatrix.identity(N)}


# adjoint tables --------------------------------------------------------------

def _pw(base: int, e: int) -> Fraction:
    return Fraction(base) ** e


def _hp_table(op: BaseOp, p: int) -> WeightedShiftOp:
    if op is BaseOp.R0:
        return WeightedShiftOp(1, lambda n: _pw(n + 2, 2 * p) / _pw(n + 1, 2 * p + 1), name="R0*")
    if op is BaseOp.D:
        return WeightedShiftOp(1, lambda n: _pw(n + 2, 2 * p) / _pw(n + 1, 2 * p), name="D*")
    if op is BaseOp.MZ:
        return WeightedShiftOp(-1, lambda n: _pw(n, 2 * p + 1) / _pw(n + 1, 2 * p), name="Mz*")
    return WeightedShiftOp(-1, lambda n: _pw(n, 2 * p) / _pw(n + 1, 2 * p), name="I*")


def _fp_table(op: BaseOp, p: int) -> WeightedShiftOp:
    # M_z^*(1) = I^*(1) = 0 by convention; the n = 0 weights are never used
    if op is BaseOp.R0:
        return WeightedShiftOp(1, lambda n: _pw(n + 1, 2 * p - 1) / _pw(n + 2, 2 * p), name="R0*")
    if op is BaseOp.D:
        return WeightedShiftOp(1, lambda n: _pw(n + 1, 2 * p) / _pw(n + 2, 2 * p), name="D*")
    if op is BaseOp.MZ:
        return WeightedShiftOp(-1, lambda n: _pw(n + 1, 2 * p) / _pw(n, 2 * p - 1) if n else Fraction(0),
                               name="Mz*")
    return WeightedShiftOp(-1, lambda n: _pw(n + 1, 2 * p) / _pw(n, 2 * p) if n else Fraction(0), name="I*")


def adjoint_of(op: BaseOp | str, spec: KernelSpec) -> WeightedShiftOp:
    """Adjoint of a base operator in the given space, as a weighted shift."""
    op = BaseOp.parse(op) if isinstance(op, str) else op
    if spec.space is Space.FP:
        return _fp_table(op, spec.p)
    p = spec.p if spec.space is Space.HP else 0
    return _hp_table(op, p)


def composed_form(op: BaseOp | str, spec: KernelSpec, N: int | None = None):
    """The adjoint written as a Fock adjoint times a power of a diagonal operator.

    Hp:  R0* = I(Id+R0 I)^{2p},  D* = Mz(Id+R0 I)^{2p},  Mz* = D(Id-R0 I)^{2p},  I* = R0(Id-R0 I)^{2p}
    Fp:  R0* = I(Id-R0^2 I Mz)^{2p},  D* = Mz(Id-R0^2 I Mz)^{2p},
         Mz* = D(Id+I R0)^{2p},  I* = R0(Id+I R0)^{2p}

    With ``N`` the expression is multiplied out from finite sections of the
    base operators; otherwise it is composed as weighted shifts.
    """
    op = BaseOp.parse(op) if isinstance(op, str) else op
    a = _algebra(N)
    r0, i_, d, mz, one = a["R0"], a["I"], a["D"], a["Mz"], a["Id"]
    fock_adj = {BaseOp.R0: i_, BaseOp.I: r0, BaseOp.D: mz, BaseOp.MZ: d}[op]
    p = spec.p if spec.space is not Space.FOCK else 0
    raising = op in (BaseOp.R0, BaseOp.D)
    if spec.space is Space.FP:
        inner_ = one - r0 @ r0 @ i_ @ mz if raising else one + i_ @ r0
    else:
        inner_ = one + r0 @ i_ if raising else one - r0 @ i_
    return fock_adj @ inner_ ** (2 * p)


def composed_adjoint(op: BaseOp | str, spec: KernelSpec, N: int) -> OpMatrix:
    """Finite section of the composed adjoint, multiplied out literally."""
    return composed_form(op, spec, N)


# commutators -----------------------------------------------------------------

def commutator(a, b):
    return a @ b - b @ a


def commutator_matrix(a: OpMatrix, b: OpMatrix) -> OpMatrix:
    """AB - BA of two sections of equal truncation."""
    if a.N != b.N:
        raise ValueError(f"truncation mismatch: {a.N} vs {b.N}")
    return a @ b - b @ a


def commutator_diag_formula(pair: str, spec: KernelSpec, n: int) -> Fraction:
    """Closed diagonal entry of [Mz, Mz*] (``"MzMzStar"``) or [R0, R0*] (``"R0R0Star"``) on z^n."""
    p = spec.p if spec.space is not Space.FOCK else 0
    q = 2 * p
    if pair == "MzMzStar":
        if spec.space is Space.FP:
            if n == 0:
                return -Fraction(4) ** p
            return n * (1 + Fraction(1, n)) ** q - (n + 1) * (1 + Fraction(1, n + 1)) ** q
        return n * (1 - Fraction(1, n + 1)) ** q - (n + 1) * (1 - Fraction(1, n + 2)) ** q
    if pair == "R0R0Star":
        if spec.space is Space.FP:
            if n == 0:
                return Fraction(1, 4**p)
            return -Fraction(1, n * (n + 1)) * (
                (n + 1) * (1 - Fraction(1, n + 1)) ** q - n * (1 - Fraction(1, n + 2)) ** q)
        if n == 0:
            return Fraction(4) ** p
        return -Fraction(1, n * (n + 1)) * (
            (n + 1) * (1 + Fraction(1, n)) ** q - n * (1 + Fraction(1, n + 1)) ** q)
    raise ValueError(f"unknown commutator pair {pair!r}")


# diagonal unitaries ----------------------------------------------------------

_UNITARY_EXP = {"Ep": 1, "Vp": -1, "Thetap": 2, "Lambdap": -2}


def diag_unitary(kind: str, p: int) -> DiagonalOp:
    """Ep = (n+1)^p, Vp = (n+1)^-p, Thetap = (n+1)^2p, Lambdap = (n+1)^-2p on z^n."""
    e = _UNITARY_EXP[kind] * p
    return DiagonalOp(lambda n: Fraction(n + 1) ** e, name=f"{kind}({p})")


def diag_unitary_literal(kind: str, p: int, N: int | None = None):
    """Same operators as words in the base operators: (Id+Mz D)^p, (R0 I)^p and their squares."""
    a = _algebra(N)
    up = a["Id"] + a["Mz"] @ a["D"]
    down = a["R0"] @ a["I"]
    return {"Ep": up**p, "Vp": down**p, "Thetap": up ** (2 * p), "Lambdap": down ** (2 * p)}[kind]


def lambda_table(n_max: int) -> dict[tuple[int, int], DiagonalOp]:
    """Lambda_{k,n} for 0 <= k <= n <= n_max from

        Lambda_{k,n} = Lambda_{k-1,n-1} + (sum_{l=1..k} D0^(l)) Lambda_{k,n-1},

    with Lambda_{n,n} = Id and Lambda_{0,n} = 0 for n >= 1.  Lambda_{0,0} = Id
    so that (I R0)^0 = Id is covered by the same sum.
    """
    zero = DiagonalOp(lambda n: Fraction(0), name="0")
    table: dict[tuple[int, int], DiagonalOp] = {(0, 0): Id}
    for n in range(1, n_max + 1):
        table[0, n] = zero
        table[n, n] = Id
        for k in range(1, n):
            shifts = [D0.forward(l) for l in range(1, k + 1)]
            prev_k, prev_diag = table[k, n - 1], table[k - 1, n - 1]

            def entry(m, prev_k=prev_k, prev_diag=prev_diag, shifts=shifts):
                return prev_diag.coeff(m) + sum(s.coeff(m) for s in shifts) * prev_k.coeff(m)

            table[k, n] = DiagonalOp(entry, name=f"Lambda({k},{n})")
    return table


def lambda_expansion(n: int, table: dict | None = None, N: int | None = None):
    """sum_k Lambda_{k,n} I^k R0^k, as a weighted shift or a finite section."""
    table = lambda_table(n) if table is None else table
    a = _algebra(N)
    total = None
    for k in range(0, n + 1):
        lam = table[k, n] if N is None else table[k, n].matrix(N)
        term = lam @ (a["I"] ** k) @ (a["R0"] ** k)
        total = term if total is None else total + term
    return total


# adjoint pairing -------------------------------------------------------------

def adjoint_pairing_check(op: BaseOp | str, spec: KernelSpec, N: int,
                          adjoint: WeightedShiftOp | None = None) -> Fraction:
    """max_{n,m<=N} |<T z^n, z^m> - <z^n, T* z^m>| in exact rationals."""
    t = base_op(op)
    t_star = adjoint_of(op, spec) if adjoint is None else adjoint
    worst = Fraction(0)
    for n in range(N + 1):
        for m in range(N + 1):
            lhs = t.coeff(n) * weight_exact(spec, m) if n + t.shift == m else Fraction(0)
            rhs = t_star.coeff(m) * weight_exact(spec, n) if m + t_star.shift == n else Fraction(0)
            worst = max(worst, abs(lhs - rhs))
    return worst


# expression language -----------------------------------------------------------

_SPACES = {"fock": Space.FOCK, "hp": Space.HP, "fp": Space.FP}


def evaluate_expr(text: str, N: int | None = None):
    """Evaluate an operator expression.

    Tokens: R0, I, D, Mz, Id, D0, adj(X, space, p), Ep(p), Vp(p), Thetap(p),
    Lambdap(p); ``*`` or ``@`` composes, ``+``/``-`` add, ``^``/``**`` take
    integer powers, numbers scale.  With ``N`` the result is an exact finite
    section (sums of any shifts allowed); otherwise a weighted shift.
    """
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    base = _algebra(N)
    base["D0"] = D0 if N is None else D0.matrix(N)

    def lift(op):
        return op if N is None else op.matrix(N)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Name):
            if node.id in base:
                return base[node.id]
            raise ValueError(f"unknown operator {node.id!r}")
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return Fraction(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.BinOp):
            left = ev(node.left)
            if isinstance(node.op, ast.Pow):
                k = ev(node.right)
                if not (isinstance(k, Fraction) and k.denominator == 1 and k >= 0):
                    raise ValueError("powers must be non-negative integers")
                return left ** int(k)
            right = ev(node.right)
            if isinstance(node.op, (ast.Mult, ast.MatMult)):
                if isinstance(left, Fraction) or isinstance(right, Fraction):
                    return left * right
                return left @ right
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            fn = node.func.id
            args = node.args
            if fn == "adj":
                if len(args) not in (2, 3) or not isinstance(args[0], ast.Name):
                    raise ValueError("adj takes (operator, space[, p])")
                space = _SPACES[_name(args[1]).lower()]
                p = int(ev(args[2])) if len(args) == 3 else 0
                return lift(adjoint_of(args[0].id, KernelSpec(space, p)))
            if fn in _UNITARY_EXP:
                if len(args) != 1:
                    raise ValueError(f"{fn} takes one integer argument")
                return lift(diag_unitary(fn, int(ev(args[0]))))
            raise ValueError(f"unknown function {fn!r}")
        raise ValueError(f"unsupported expression element: {ast.dump(node)}")

    result = ev(tree)
    if isinstance(result, Fraction):
        raise ValueError("expression is a scalar, not an operator")
    return result


def _name(node) -> str:
    if isinstance(node, ast.Name):
        return node.id
    if isinstance(node, ast.Constant) and isinstance(node.value, str):
        return node.value
    raise ValueError("expected a space name (fock, hp or fp)")
