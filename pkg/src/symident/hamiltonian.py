"""Hamiltonian representations: dictionary-parametrized models and the Cherry system.

A model Hamiltonian is a linear combination of dictionary basis functions,
H(x) = Phi(x)' theta with the additive constant fixed to zero.  Gradients are
analytic (power rule / Legendre recurrence), never numeric: they sit inside
the symplectic flow maps where finite-difference noise would leak into the
integrator.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .basis import BasisDictionary, build_dictionary, dictionary_from_dict


@dataclass
class HamiltonianModel:
    """Dictionary Hamiltonian: value Phi(x)' theta, gradient dPhi(x)' theta."""

    dictionary: BasisDictionary
    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        if self.coefficients.shape != (self.dictionary.size,):
            raise ValueError(
                f"expected {self.dictionary.size} coefficients, "
                f"got shape {self.coefficients.shape}"
            )

    @property
    def state_dim(self) -> int:
        return self.dictionary.state_dim

    def value(self, X: np.ndarray) -> np.ndarray:
        """Hamiltonian value at states X (..., state_dim) -> (...)."""
        return self.dictionary.values(X) @ self.coefficients

    def gradient(self, X: np.ndarray) -> np.ndarray:
        """Gradient at states, ordered (d/dq1..d/dqd, d/dp1..d/dpd)."""
        grads = self.dictionary.gradients(X)
        return np.einsum("...nd,n->...d", grads, self.coefficients)

    def to_json(self, path: str | Path) -> None:
        payload = dict(self.dictionary.to_dict(), coefficients=self.coefficients.tolist())
        Path(path).write_text(json.dumps(payload, indent=2))

    @classmethod
    def from_json(cls, path: str | Path) -> "HamiltonianModel":
        payload = json.loads(Path(path).read_text())
        dictionary = dictionary_from_dict(payload)
        return cls(dictionary, np.array(payload["coefficients"], dtype=float))


class CherryHamiltonian:
    """Four-dimensional nonseparable benchmark Hamiltonian.

    H = (q1^2 + p1^2)/2 - (q2^2 + p2^2) + p2 (p1^2 - q1^2)/2 - q1 q2 p1.

    Carries a negative energy mode: small perturbations can blow up in finite
    time, which makes it a stress test for long-horizon prediction.
    """

    state_dim = 4

    @staticmethod
    def _split(X: np.ndarray):
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != 4:
            raise ValueError(f"Cherry system is four-dimensional, got state dim {X.shape[-1]}")
        return X[..., 0], X[..., 1], X[..., 2], X[..., 3]

    def value(self, X: np.ndarray) -> np.ndarray:
        q1, q2, p1, p2 = self._split(X)
        return (
            0.5 * (q1**2 + p1**2)
            - (q2**2 + p2**2)
            + 0.5 * p2 * (p1**2 - q1**2)
            - q1 * q2 * p1
        )

    def gradient(self, X: np.ndarray) -> np.ndarray:
        q1, q2, p1, p2 = self._split(X)
        out = np.empty(np.broadcast(q1, q2).shape + (4,))
        out[..., 0] = q1 - p2 * q1 - q2 * p1
        out[..., 1] = -2.0 * q2 - q1 * p1
        out[..., 2] = p1 + p2 * p1 - q1 * q2
        out[..., 3] = -2.0 * p2 + 0.5 * (p1**2 - q1**2)
        return out


def cherry_value(X: np.ndarray) -> np.ndarray:
    return CherryHamiltonian().value(X)


def cherry_gradient(X: np.ndarray) -> np.ndarray:
    return CherryHamiltonian().gradient(X)


def cherry_coefficients(dictionary: BasisDictionary) -> np.ndarray:
    """Coefficient vector realizing the Cherry Hamiltonian in a monomial dictionary.

    Seven monomials are nonzero: q1^2, p1^2, q2^2, p2^2, p1^2*p2, q1^2*p2, q1*q2*p1.
    """
    if dictionary.kind != "monomial":
        raise ValueError("exact Cherry coefficients exist only in the monomial basis")
    if dictionary.state_dim != 4 or dictionary.max_total_degree < 3:
        raise ValueError("need a monomial dictionary over 4 variables with degree >= 3")
    terms = {
        (2, 0, 0, 0): 0.5,   # q1^2
        (0, 0, 2, 0): 0.5,   # p1^2
        (0, 2, 0, 0): -1.0,  # q2^2
        (0, 0, 0, 2): -1.0,  # p2^2
        (0, 0, 2, 1): 0.5,   # p1^2 p2
        (2, 0, 0, 1): -0.5,  # q1^2 p2
        (1, 1, 1, 0): -1.0,  # q1 q2 p1
    }
    theta = np.zeros(dictionary.size)
    index_of = {tuple(row): i for i, row in enumerate(dictionary.multi_indices)}
    for exponents, weight in terms.items():
        theta[index_of[exponents]] = weight
    return theta


def cherry_model(max_total_degree: int = 3) -> HamiltonianModel:
    """Cherry system as an exact monomial dictionary model (useful fast path)."""
    dictionary = build_dictionary("monomial", 4, max_total_degree)
    return HamiltonianModel(dictionary, cherry_coefficients(dictionary))
