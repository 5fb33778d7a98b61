"""Weighted Fock spaces Hp and Fp: kernels, shift-operator adjoints, Bargmann-type transforms
and Hankel moment certificates, each identity checkable exactly or numerically."""

from .coeffspace import FOCK, CoeffSeq, KernelSpec, Space, evaluate, inner, norm, norm_sq, weight
from .kernels import KernelValue, kernel, kernel_fp, kernel_hp, reproduce_check

__all__ = [
    "FOCK",
    "CoeffSeq",
    "KernelSpec",
    "KernelValue",
    "Space",
    "evaluate",
    "inner",
    "kernel",
    "kernel_fp",
    "kernel_hp",
    "norm",
    "norm_sq",
    "reproduce_check",
    "weight",
]

__version__ = "0.1.0"
