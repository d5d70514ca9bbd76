"""Explicit integrators for nonseparable Hamiltonian systems.

The symplectic scheme works in an extended phase space: the state (q, p) is
doubled to (q, p, qt, pt) and the augmented energy splits into three pieces
whose exact flows are explicit.  One step is the symmetric (Strang)
composition

    A(dt/2) B(dt/2) C(dt) B(dt/2) A(dt/2)

applied rightmost-first, where A updates (p, qt) from the gradient at
(q, pt), B updates (q, pt) from the gradient at (qt, p), and C is a linear
rotation with angle 2*omega*dt binding the two copies.  The non-symplectic
baseline is the explicit midpoint (RK2) rule on the canonical vector field
(H_p, -H_q).

Gradient callables map (..., 2d) state arrays to (..., 2d) gradients ordered
(d/dq, d/dp).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

DIVERGENCE_LIMIT = 1.0e6


class DivergenceError(RuntimeError):
    """Raised when a trajectory leaves the numerically meaningful range."""

    def __init__(self, step: int | None = None, message: str | None = None):
        self.step = step
        if message is None:
            message = "state diverged"
            if step is not None:
                message += f" at step {step}"
        super().__init__(message)


def lift(state: np.ndarray) -> np.ndarray:
    """Duplicate (q, p) into the extended state (q, p, q, p)."""
    state = np.asarray(state, dtype=float)
    return np.concatenate([state, state], axis=-1)


def restrict(aug: np.ndarray) -> np.ndarray:
    """Drop the fictitious copy, returning (q, p)."""
    aug = np.asarray(aug, dtype=float)
    return aug[..., : aug.shape[-1] // 2].copy()


def _blocks(aug: np.ndarray):
    d = aug.shape[-1] // 4
    return aug[..., :d], aug[..., d : 2 * d], aug[..., 2 * d : 3 * d], aug[..., 3 * d :]


def _check_gradient(g: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(g)):
        raise DivergenceError(message="non-finite Hamiltonian gradient")
    return g


def flow_a(aug: np.ndarray, dt: float, grad) -> np.ndarray:
    """Exact flow of H(q, pt): p -= dt*H_q(q, pt), qt += dt*H_p(q, pt)."""
    aug = np.asarray(aug, dtype=float)
    d = aug.shape[-1] // 4
    q, p, qt, pt = _blocks(aug)
    g = _check_gradient(grad(np.concatenate([q, pt], axis=-1)))
    out = aug.copy()
    out[..., d : 2 * d] = p - dt * g[..., :d]
    out[..., 2 * d : 3 * d] = qt + dt * g[..., d:]
    return out


def flow_b(aug: np.ndarray, dt: float, grad) -> np.ndarray:
    """Exact flow of H(qt, p): q += dt*H_p(qt, p), pt -= dt*H_qt(qt, p)."""
    aug = np.asarray(aug, dtype=float)
    d = aug.shape[-1] // 4
    q, p, qt, pt = _blocks(aug)
    g = _check_gradient(grad(np.concatenate([qt, p], axis=-1)))
    out = aug.copy()
    out[..., :d] = q + dt * g[..., d:]
    out[..., 3 * d :] = pt - dt * g[..., :d]
    return out


def flow_c(aug: np.ndarray, dt: float, omega: float) -> np.ndarray:
    """Exact flow of the binding term: rotate the copy difference by 2*omega*dt."""
    aug = np.asarray(aug, dtype=float)
    d = aug.shape[-1] // 4
    q, p, qt, pt = _blocks(aug)
    c = np.cos(2.0 * omega * dt)
    s = np.sin(2.0 * omega * dt)
    sq, sp = q + qt, p + pt
    dq, dp = q - qt, p - pt
    rq = c * dq + s * dp
    rp = -s * dq + c * dp
    out = np.empty_like(aug)
    out[..., :d] = 0.5 * (sq + rq)
    out[..., d : 2 * d] = 0.5 * (sp + rp)
    out[..., 2 * d : 3 * d] = 0.5 * (sq - rq)
    out[..., 3 * d :] = 0.5 * (sp - rp)
    return out


def tao_step(aug: np.ndarray, dt: float, omega: float, grad) -> np.ndarray:
    """One Strang-split step in the extended phase space."""
    half = 0.5 * dt
    z = flow_a(aug, half, grad)
    z = flow_b(z, half, grad)
    z = flow_c(z, dt, omega)
    z = flow_b(z, half, grad)
    return flow_a(z, half, grad)


def rk2_step(state: np.ndarray, dt: float, grad) -> np.ndarray:
    """Explicit midpoint step on the canonical vector field (H_p, -H_q)."""
    state = np.asarray(state, dtype=float)
    d = state.shape[-1] // 2

    def field(x):
        g = _check_gradient(grad(x))
        return np.concatenate([g[..., d:], -g[..., :d]], axis=-1)

    mid = state + 0.5 * dt * field(state)
    return state + dt * field(mid)


@dataclass
class TaoConfig:
    """Extended-phase-space integrator settings: binding constant and step size."""

    omega: float = 10.0
    dt: float = 0.01

    def __post_init__(self):
        if self.omega <= 0 or self.dt <= 0:
            raise ValueError("omega and dt must be positive")


class Propagator:
    """One-step state propagator for a Hamiltonian with a gradient.

    scheme "tao": x -> restrict(tao_step(lift(x))); used both as the filter
    transition map and, via propagate(), for whole trajectories (where the
    augmented state is carried across steps instead of re-lifting).
    scheme "rk2": explicit midpoint at the same step size.
    """

    def __init__(self, hamiltonian, scheme: str = "tao", dt: float = 0.01, omega: float = 10.0):
        if scheme not in ("tao", "rk2"):
            raise ValueError(f"scheme must be 'tao' or 'rk2', got {scheme!r}")
        if dt <= 0:
            raise ValueError("dt must be positive")
        if scheme == "tao" and omega <= 0:
            raise ValueError("omega must be positive")
        self.hamiltonian = hamiltonian
        self.scheme = scheme
        self.dt = dt
        self.omega = omega

    @property
    def state_dim(self) -> int:
        return self.hamiltonian.state_dim

    def transition(self, states: np.ndarray) -> np.ndarray:
        """Advance states (..., 2d) by one step, lifting and restricting for tao."""
        grad = self.hamiltonian.gradient
        if self.scheme == "tao":
            return restrict(tao_step(lift(states), self.dt, self.omega, grad))
        return rk2_step(states, self.dt, grad)

    def propagate(self, x0: np.ndarray, n_steps: int) -> np.ndarray:
        """Trajectory (n_steps+1, 2d) from x0; raises DivergenceError(step) on blowup."""
        x0 = np.asarray(x0, dtype=float)
        if x0.ndim != 1 or x0.shape[0] != self.state_dim:
            raise ValueError(f"x0 must be a state vector of length {self.state_dim}")
        if n_steps < 0:
            raise ValueError("n_steps must be >= 0")
        fast = _fast_kernel_args(self.hamiltonian)
        if fast is not None:
            from . import _kernels

            E, theta, kind = fast
            scheme_id = 0 if self.scheme == "tao" else 1
            out = np.empty((n_steps + 1, self.state_dim))
            status = _kernels.propagate_dense(
                x0, n_steps, self.dt, self.omega, E, theta, kind, scheme_id, out
            )
            if status >= 0:
                raise DivergenceError(step=int(status))
            return out
        return self._propagate_reference(x0, n_steps)

    def _propagate_reference(self, x0: np.ndarray, n_steps: int) -> np.ndarray:
        grad = self.hamiltonian.gradient
        out = np.empty((n_steps + 1, self.state_dim))
        out[0] = x0
        if self.scheme == "tao":
            z = lift(x0)
            for k in range(1, n_steps + 1):
                try:
                    z = tao_step(z, self.dt, self.omega, grad)
                except DivergenceError:
                    raise DivergenceError(step=k) from None
                _guard(z, k)
                out[k] = restrict(z)
        else:
            x = x0
            for k in range(1, n_steps + 1):
                try:
                    x = rk2_step(x, self.dt, grad)
                except DivergenceError:
                    raise DivergenceError(step=k) from None
                _guard(x, k)
                out[k] = x
        return out


def _guard(state: np.ndarray, step: int) -> None:
    if not np.all(np.isfinite(state)) or np.any(np.abs(state) > DIVERGENCE_LIMIT):
        raise DivergenceError(step=step)


def _fast_kernel_args(hamiltonian):
    """Kernel inputs (exponents, theta, kind id) for dictionary models, else None."""
    from .hamiltonian import HamiltonianModel

    if isinstance(hamiltonian, HamiltonianModel):
        kind = 0 if hamiltonian.dictionary.kind == "monomial" else 1
        return hamiltonian.dictionary.multi_indices, hamiltonian.coefficients, kind
    return None


def write_trajectory_csv(path: str | Path, times: np.ndarray, states: np.ndarray) -> None:
    """CSV with header t,q1..qd,p1..pd at full double precision."""
    states = np.asarray(states, dtype=float)
    times = np.asarray(times, dtype=float)
    d = states.shape[1] // 2
    header = "t," + ",".join([f"q{i+1}" for i in range(d)] + [f"p{i+1}" for i in range(d)])
    data = np.column_stack([times, states])
    np.savetxt(path, data, delimiter=",", header=header, comments="", fmt="%.17g")


def read_trajectory_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1:]
