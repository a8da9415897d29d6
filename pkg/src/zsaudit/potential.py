"""Real 1-periodic Zakharov-Shabat potentials V = [[V1, V2], [V2, -V1]].

Four kinds are supported:

* ``zero``
* ``constant-offdiagonal``: V1 = 0, V2 = a
* ``fourier``: each component is ``c0 + sum_k c_k cos(2 pi k t) + s_k sin(2 pi k t)``;
  the cosine list starts with the mean ``c0``, the sine list starts at k = 1
* ``sampled``: values on the uniform periodic grid t_j = j / M, interpolated
  piecewise-linearly (first order in the grid spacing)
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

KINDS = ("zero", "constant-offdiagonal", "fourier", "sampled")


@dataclass(frozen=True)
class NormSq:
    """Both candidate normalizations of ||V||^2."""

    single: float  # int_0^1 (V1^2 + V2^2) dt
    doubled: float  # 2 * single, i.e. int_0^1 tr V(t)^2 dt

    @property
    def half_single(self) -> float:
        return 0.5 * self.single

    @property
    def half_doubled(self) -> float:
        return 0.5 * self.doubled


def _as_tuple(values) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    if not all(np.isfinite(out)):
        raise InputError("potential coefficients must be finite reals")
    return out


@dataclass(frozen=True)
class PotentialSpec:
    kind: str
    a: float = 0.0
    v1_cos: tuple[float, ...] = ()
    v1_sin: tuple[float, ...] = ()
    v2_cos: tuple[float, ...] = ()
    v2_sin: tuple[float, ...] = ()
    v1_samples: tuple[float, ...] = ()
    v2_samples: tuple[float, ...] = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown potential kind {self.kind!r}; expected one of {KINDS}")
        for name in ("v1_cos", "v1_sin", "v2_cos", "v2_sin", "v1_samples", "v2_samples"):
            object.__setattr__(self, name, _as_tuple(getattr(self, name)))
        object.__setattr__(self, "a", float(self.a))
        if not np.isfinite(self.a):
            raise InputError("constant potential amplitude must be finite")
        if self.kind == "sampled":
            if len(self.v1_samples) != len(self.v2_samples):
                raise InputError("sampled potential: v1 and v2 need the same node count")
            if len(self.v1_samples) < 2:
                raise InputError("sampled potential needs at least 2 nodes")

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls) -> PotentialSpec:
        return cls("zero")

    @classmethod
    def constant(cls, a: float) -> PotentialSpec:
        return cls("constant-offdiagonal", a=a)

    @classmethod
    def fourier(cls, v1_cos=(), v1_sin=(), v2_cos=(), v2_sin=()) -> PotentialSpec:
        return cls("fourier", v1_cos=v1_cos, v1_sin=v1_sin, v2_cos=v2_cos, v2_sin=v2_sin)

    @classmethod
    def sampled(cls, v1, v2) -> PotentialSpec:
        return cls("sampled", v1_samples=v1, v2_samples=v2)

    # evaluation -------------------------------------------------------------

    def __call__(self, t):
        """Return ``(V1(t), V2(t))``; ``t`` may be a scalar or an array."""
        t = np.asarray(t, dtype=float)
        if self.kind == "zero":
            z = np.zeros_like(t)
            return z, z.copy()
        if self.kind == "constant-offdiagonal":
            return np.zeros_like(t), np.full_like(t, self.a)
        if self.kind == "fourier":
            return (_trig(t, self.v1_cos, self.v1_sin), _trig(t, self.v2_cos, self.v2_sin))
        m = len(self.v1_samples)
        nodes = np.arange(m + 1) / m
        tt = np.mod(t, 1.0)
        v1 = np.interp(tt, nodes, self.v1_samples + self.v1_samples[:1])
        v2 = np.interp(tt, nodes, self.v2_samples + self.v2_samples[:1])
        return v1, v2

    def values_at(self, t: float) -> tuple[float, float]:
        """Scalar fast path used inside the integrator stages."""
        if self.kind == "zero":
            return 0.0, 0.0
        if self.kind == "constant-offdiagonal":
            return 0.0, self.a
        v1, v2 = self(t)
        return float(v1), float(v2)

    def breakpoints(self) -> np.ndarray:
        """Interior points of (0, 1) where V is not smooth; the integrator never steps across them."""
        if self.kind == "sampled":
            m = len(self.v1_samples)
            return np.arange(1, m) / m
        return np.empty(0)

    def sup_bound(self) -> float:
        """Cheap upper bound for max_t |V(t)| (entrywise)."""
        if self.kind == "zero":
            return 0.0
        if self.kind == "constant-offdiagonal":
            return abs(self.a)
        if self.kind == "fourier":
            b1 = sum(map(abs, self.v1_cos)) + sum(map(abs, self.v1_sin))
            b2 = sum(map(abs, self.v2_cos)) + sum(map(abs, self.v2_sin))
            return max(b1, b2)
        return max(max(map(abs, self.v1_samples)), max(map(abs, self.v2_samples)))

    # metadata ---------------------------------------------------------------

    def to_dict(self) -> dict:
        if self.kind == "zero":
            return {"kind": "zero"}
        if self.kind == "constant-offdiagonal":
            return {"kind": self.kind, "a": self.a}
        if self.kind == "fourier":
            return {
                "kind": "fourier",
                "v1": {"cos": list(self.v1_cos), "sin": list(self.v1_sin)},
                "v2": {"cos": list(self.v2_cos), "sin": list(self.v2_sin)},
            }
        return {"kind": "sampled", "v1": list(self.v1_samples), "v2": list(self.v2_samples)}

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _trig(t: np.ndarray, cos: tuple[float, ...], sin: tuple[float, ...]) -> np.ndarray:
    out = np.full_like(t, cos[0] if cos else 0.0)
    for k, c in enumerate(cos[1:], start=1):
        if c:
            out = out + c * np.cos(2 * np.pi * k * t)
    for k, s in enumerate(sin, start=1):
        if s:
            out = out + s * np.sin(2 * np.pi * k * t)
    return out


def potential_norm_sq(pot: PotentialSpec) -> NormSq:
    """||V||^2 under both conventions by composite quadrature.

    Trig polynomials are integrated with the periodic trapezoid rule on enough
    nodes to be exact for V^2; sampled potentials use Simpson's rule per
    segment, exact for the squared piecewise-linear interpolant.
    """
    if pot.kind == "sampled":
        m = len(pot.v1_samples)
        left = np.arange(m) / m
        right = left + 1.0 / m
        l1, l2 = pot(left)
        c1, c2 = pot(0.5 * (left + right))
        # right endpoint of the last segment wraps to t = 0
        r1, r2 = pot(np.mod(right, 1.0))
        f_l = l1**2 + l2**2
        f_c = c1**2 + c2**2
        f_r = r1**2 + r2**2
        total = float(np.sum((f_l + 4 * f_c + f_r) / (6 * m)))
    else:
        degree = max(len(pot.v1_cos), len(pot.v2_cos), len(pot.v1_sin) + 1, len(pot.v2_sin) + 1)
        nodes = 4 * degree + 4
        t = np.arange(nodes) / nodes
        v1, v2 = pot(t)
        total = float(np.mean(v1**2 + v2**2))
    return NormSq(single=total, doubled=2.0 * total)
