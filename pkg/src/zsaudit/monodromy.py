"""Fundamental solution of J psi' + V psi = z psi over one period.

The system is rewritten as psi' = A(t, z) psi with

    A = J (V - z) = [[V2, -V1 - z], [z - V1, -V2]],   dA/dz = -J,

and the variational blocks d psi/dz, d^2 psi/dz^2 are carried along
(dY1' = A Y1 - J Y0, dY2' = A Y2 - 2 J Y1) on the same step sequence.

All spectral parameters of a call are integrated together as one batch with
a shared step sequence; the step controller uses the max-norm over the batch
so every member meets the tolerance individually.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate._ivp import dop853_coefficients as _dop

from .errors import IntegrationError
from .potential import PotentialSpec

DEFAULT_TOL = 1e-10

_S = _dop.N_STAGES
_A = _dop.A[:_S, :_S]
_B = _dop.B
_C = _dop.C[:_S]
_E3 = _dop.E3
_E5 = _dop.E5

_MAX_STEPS = 200_000


@dataclass(frozen=True)
class MonodromyResult:
    z: float
    M: np.ndarray
    delta: float
    delta_prime: float
    delta_double_prime: float

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.M))


@dataclass(frozen=True)
class Discriminant:
    """Batched Lyapunov function values; derivative arrays are None when not requested."""

    z: np.ndarray
    delta: np.ndarray
    d1: np.ndarray | None
    d2: np.ndarray | None
    det: np.ndarray


def _rhs(v1: float, v2: float, z: np.ndarray, Y: np.ndarray, out: np.ndarray) -> np.ndarray:
    top = Y[:, 0]
    bot = Y[:, 1]
    np.multiply(v2, top, out=out[:, 0])
    out[:, 0] -= (v1 + z) * bot
    np.multiply(z - v1, top, out=out[:, 1])
    out[:, 1] -= v2 * bot
    order = Y.shape[0] - 1
    if order >= 1:
        out[1, 0] -= bot[0]
        out[1, 1] += top[0]
    if order >= 2:
        out[2, 0] -= 2.0 * bot[1]
        out[2, 1] += 2.0 * top[1]
    return out


def propagate(pot: PotentialSpec, z, tol: float = DEFAULT_TOL, order: int = 2) -> np.ndarray:
    """Integrate to t = 1 and return the stacked state of shape (order+1, 2, 2, len(z)).

    ``Y[0]`` is psi(1, z); ``Y[k]`` its k-th z-derivative.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    z = np.atleast_1d(np.asarray(z, dtype=float))
    m = z.size
    Y = np.zeros((order + 1, 2, 2, m))
    Y[0, 0, 0] = 1.0
    Y[0, 1, 1] = 1.0
    if m == 0:
        return Y

    K = np.empty((_S + 1,) + Y.shape)
    scale = np.empty_like(Y)
    stage = np.empty_like(Y)
    h = 0.25 / (1.0 + np.max(np.abs(z)) + pot.sup_bound())
    edges = np.concatenate(([0.0], pot.breakpoints(), [1.0]))
    steps = 0
    t = 0.0
    for t_end in edges[1:]:
        v1, v2 = pot.values_at(t)
        _rhs(v1, v2, z, Y, K[0])
        while t_end - t > 1e-15:
            if steps > _MAX_STEPS:
                raise IntegrationError("step budget exhausted", t)
            h = min(h, t_end - t)
            if h < 1e-14:
                raise IntegrationError("step size underflow", t)
            for i in range(1, _S):
                np.copyto(stage, Y)
                for j in range(i):
                    if _A[i, j]:
                        stage += (h * _A[i, j]) * K[j]
                v1, v2 = pot.values_at(t + _C[i] * h)
                _rhs(v1, v2, z, stage, K[i])
            Y_new = Y + h * np.tensordot(_B, K[:_S], axes=1)
            t_new = t + h if t_end - (t + h) > 1e-15 else t_end
            v1, v2 = pot.values_at(t_new)
            _rhs(v1, v2, z, Y_new, K[_S])

            np.maximum(np.abs(Y), np.abs(Y_new), out=scale)
            scale *= tol
            scale += tol
            err5 = np.max(np.abs(np.tensordot(_E5, K, axes=1)) / scale)
            err3 = np.max(np.abs(np.tensordot(_E3, K, axes=1)) / scale)
            denom = err5**2 + 0.01 * err3**2
            err = h * err5**2 / np.sqrt(denom) if denom > 0 else 0.0
            if not np.isfinite(err):
                raise IntegrationError("non-finite state", t)
            if err <= 1.0:
                t = t_new
                Y = Y_new
                K[0] = K[_S]
                steps += 1
                factor = 10.0 if err == 0 else min(10.0, 0.9 * err ** (-1.0 / 8.0))
            else:
                factor = max(0.2, 0.9 * err ** (-1.0 / 8.0))
            h *= factor
    return Y


def discriminant(pot: PotentialSpec, z, tol: float = DEFAULT_TOL, order: int = 1) -> Discriminant:
    """Delta(z) = Tr psi(1, z) / 2 and its first ``order`` z-derivatives, batched over z."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    Y = propagate(pot, z, tol, order)
    half_trace = 0.5 * (Y[:, 0, 0] + Y[:, 1, 1])
    det = Y[0, 0, 0] * Y[0, 1, 1] - Y[0, 0, 1] * Y[0, 1, 0]
    return Discriminant(
        z=z,
        delta=half_trace[0],
        d1=half_trace[1] if order >= 1 else None,
        d2=half_trace[2] if order >= 2 else None,
        det=det,
    )


def integrate_monodromy(pot: PotentialSpec, z: float, tol: float = DEFAULT_TOL) -> MonodromyResult:
    Y = propagate(pot, [float(z)], tol, order=2)
    M = Y[0, :, :, 0].copy()
    d = 0.5 * (Y[:, 0, 0, 0] + Y[:, 1, 1, 0])
    return MonodromyResult(
        z=float(z),
        M=M,
        delta=float(0.5 * (M[0, 0] + M[1, 1])),
        delta_prime=float(d[1]),
        delta_double_prime=float(d[2]),
    )
