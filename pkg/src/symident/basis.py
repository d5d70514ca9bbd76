"""Polynomial dictionaries over phase space: monomial and tensor-Legendre bases.

A dictionary enumerates all multi-indices of total degree 1..max_total_degree
over the 2d phase-space variables (q1..qd, p1..pd), in graded lexicographic
order (degree ascending, then q1 before q2 before ... before pd).  The
constant term is excluded: an additive constant in the Hamiltonian does not
affect the dynamics, and keeping it would leave a flat direction in any fit.

Legendre polynomials are the standard family on [-1, 1], applied coordinatewise
without rescaling; the benchmark trajectories stay inside that box.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb

import numpy as np

BASIS_KINDS = ("monomial", "legendre")


def _multi_indices(n_vars: int, max_total_degree: int) -> np.ndarray:
    """All exponent tuples with total degree in [1, max_total_degree], graded lex."""
    rows = []
    for degree in range(1, max_total_degree + 1):
        for combo in combinations_with_replacement(range(n_vars), degree):
            exponents = [0] * n_vars
            for var in combo:
                exponents[var] += 1
            rows.append(exponents)
    return np.array(rows, dtype=np.int64)


def _value_and_derivative_tables(X: np.ndarray, max_degree: int, kind: str):
    """Per-variable tables T[..., k] = f_k(x) and D[..., k] = f_k'(x), k = 0..max_degree.

    Monomial: f_k(x) = x^k.  Legendre: f_k = P_k via the three-term recurrence,
    derivatives from P'_{k+1} = P'_{k-1} + (2k+1) P_k.
    """
    shape = X.shape + (max_degree + 1,)
    T = np.empty(shape)
    D = np.zeros(shape)
    T[..., 0] = 1.0
    if max_degree >= 1:
        T[..., 1] = X
        D[..., 1] = 1.0
    if kind == "monomial":
        for k in range(2, max_degree + 1):
            T[..., k] = T[..., k - 1] * X
            D[..., k] = k * T[..., k - 1]
    elif kind == "legendre":
        for k in range(1, max_degree):
            T[..., k + 1] = ((2 * k + 1) * X * T[..., k] - k * T[..., k - 1]) / (k + 1)
            D[..., k + 1] = D[..., k - 1] + (2 * k + 1) * T[..., k]
    else:
        raise ValueError(f"unknown basis kind {kind!r}")
    return T, D


@dataclass(frozen=True, eq=False)
class BasisDictionary:
    """Ordered polynomial basis over the flattened state (q1..qd, p1..pd)."""

    kind: str
    state_dim: int
    max_total_degree: int
    multi_indices: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.multi_indices.shape[0]

    def _check_state(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.state_dim:
            raise ValueError(
                f"state dimension {X.shape[-1]} does not match dictionary "
                f"state_dim {self.state_dim}"
            )
        return X

    def values(self, X: np.ndarray) -> np.ndarray:
        """Evaluate all basis functions at states X (..., state_dim) -> (..., N)."""
        X = self._check_state(X)
        T, _ = _value_and_derivative_tables(X, self.max_total_degree, self.kind)
        # W[..., i, j] = f_{E[i, j]}(x_j), then product over variables j
        W = T[..., np.arange(self.state_dim), self.multi_indices]
        return W.prod(axis=-1)

    def gradients(self, X: np.ndarray) -> np.ndarray:
        """Gradients of all basis functions: (..., state_dim) -> (..., N, state_dim)."""
        X = self._check_state(X)
        T, D = _value_and_derivative_tables(X, self.max_total_degree, self.kind)
        dims = np.arange(self.state_dim)
        W = T[..., dims, self.multi_indices]  # (..., N, state_dim)
        dW = D[..., dims, self.multi_indices]
        grads = np.empty_like(W)
        for j in range(self.state_dim):
            partial = dW[..., j]
            for k in range(self.state_dim):
                if k != j:
                    partial = partial * W[..., k]
            grads[..., j] = partial
        return grads

    def term_names(self) -> list[str]:
        """Readable name per basis function, e.g. 'q1^2*p2' or 'L2(q1)*L1(p2)'."""
        d = self.state_dim // 2
        var_names = [f"q{i + 1}" for i in range(d)] + [f"p{i + 1}" for i in range(d)]
        names = []
        for exponents in self.multi_indices:
            parts = []
            for var, k in zip(var_names, exponents):
                if k == 0:
                    continue
                if self.kind == "legendre":
                    parts.append(f"L{k}({var})")
                else:
                    parts.append(var if k == 1 else f"{var}^{k}")
            names.append("*".join(parts))
        return names

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "state_dim": self.state_dim,
            "max_total_degree": self.max_total_degree,
        }


def build_dictionary(kind: str, state_dim: int, max_total_degree: int) -> BasisDictionary:
    """Construct the dictionary; size is binom(state_dim + degree, degree) - 1."""
    if kind not in BASIS_KINDS:
        raise ValueError(f"kind must be one of {BASIS_KINDS}, got {kind!r}")
    if state_dim < 2 or state_dim % 2 != 0:
        raise ValueError("state_dim must be even and >= 2 (positions paired with momenta)")
    if max_total_degree < 1:
        raise ValueError("max_total_degree must be >= 1")
    indices = _multi_indices(state_dim, max_total_degree)
    expected = comb(state_dim + max_total_degree, max_total_degree) - 1
    assert indices.shape[0] == expected
    return BasisDictionary(kind, state_dim, max_total_degree, indices)


def dictionary_from_dict(spec: dict) -> BasisDictionary:
    return build_dictionary(spec["kind"], spec["state_dim"], spec["max_total_degree"])
