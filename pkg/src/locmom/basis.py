"""Fit-function bases: basis vectors f(x) and the function matrix f_i(x)*f_j(x)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BasisEvaluationError

__all__ = ["FitBasis", "eval_basis", "function_matrix", "make_polynomial_basis"]


@dataclass(frozen=True)
class FitBasis:
    """Ordered set of scalar fit-functions with human-readable labels.

    Functions must accept numpy arrays (vectorized evaluation) and return
    finite values on the data range they will see.
    """

    functions: tuple
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        if len(self.functions) < 1:
            raise ValueError("a basis needs at least one function")
        if len(self.functions) != len(self.labels):
            raise ValueError("one label per function required")

    @property
    def size(self) -> int:
        return len(self.functions)


def make_polynomial_basis(degree: int) -> FitBasis:
    """Monomial basis (1, x, ..., x^degree) in ascending degree."""
    if degree < 0:
        raise ValueError("degree must be non-negative")

    def mono(j):
        return lambda x: np.asarray(x, dtype=float) ** j

    labels = ["1" if j == 0 else ("x" if j == 1 else f"x^{j}") for j in range(degree + 1)]
    return FitBasis(functions=tuple(mono(j) for j in range(degree + 1)), labels=tuple(labels))


def eval_basis(basis: FitBasis, x):
    """Evaluate the basis vector at ``x``.

    Returns shape (N_f,) for scalar ``x`` and (N, N_f) for array ``x``.
    Raises :class:`BasisEvaluationError` naming the offending function label
    if any output is non-finite.
    """
    x = np.asarray(x, dtype=float)
    cols = []
    for fn, label in zip(basis.functions, basis.labels):
        col = np.asarray(fn(x), dtype=float)
        col = np.broadcast_to(col, x.shape) if col.shape != x.shape else col
        if not np.all(np.isfinite(col)):
            raise BasisEvaluationError(f"fit-function '{label}' returned a non-finite value")
        cols.append(col)
    out = np.stack(cols, axis=-1)
    return out


def function_matrix(basis: FitBasis, x: float) -> np.ndarray:
    """Outer product of the basis vector with itself: entries f_i(x)*f_j(x)."""
    v = eval_basis(basis, float(x))
    return np.outer(v, v)
