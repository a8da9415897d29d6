"""Comb domains and gap configurations without an operator behind them.

* the explicit one-slit map z = sqrt((k - u0)^2 + h0^2),
* reconstruction of v = Im k on a finite union of gaps from the fixed point
  v = v_n (1 + Y_n) with v_n = |(x - z_n^+)(x - z_n^-)|^{1/2},
* the greedy non-overlapping slit selection and its Q0 bounds,
* analytic capacity |E|/4 of a finite union of real segments and its
  extremal function,
* Lindeloef monotonicity checks where both sides are explicitly computable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConvergenceError, InputError

DEFAULT_NODES = 64


# --------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class Comb:
    """Vertical slits [u_n - i h_n, u_n + i h_n].

    ``q0`` and ``bands`` are optional data from a pipeline that knows the
    comb's preimage (operator or gap profile); they make Q0 and band-length
    comparisons possible.
    """

    u: tuple[float, ...]
    h: tuple[float, ...]
    labels: tuple[int, ...] | None = None
    q0: float | None = None
    bands: tuple[float, ...] | None = None

    def __post_init__(self):
        u = tuple(float(x) for x in self.u)
        h = tuple(float(x) for x in self.h)
        if len(u) != len(h):
            raise InputError("comb: u and h must have the same length")
        if any(not math.isfinite(x) for x in u + h):
            raise InputError("comb: abscissas and heights must be finite")
        if any(x < 0 for x in h):
            raise InputError("comb: heights must be nonnegative")
        if any(b <= a for a, b in zip(u, u[1:])):
            raise InputError("comb: abscissas must be strictly increasing")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "h", h)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(int(n) for n in self.labels))
        if self.bands is not None:
            object.__setattr__(self, "bands", tuple(float(b) for b in self.bands))

    @property
    def u_star(self) -> float:
        """min(u_{n+1} - u_n); +inf for fewer than two slits."""
        if len(self.u) < 2:
            return math.inf
        return float(np.min(np.diff(self.u)))

    @property
    def open_slits(self) -> list[int]:
        return [i for i, x in enumerate(self.h) if x > 0]

    def q0_value(self) -> float | None:
        """Q0 when it is known: carried data, or the closed form for at most one slit."""
        if self.q0 is not None:
            return self.q0
        slits = self.open_slits
        if not slits:
            return 0.0
        if len(slits) == 1:
            return single_slit_q0(self.h[slits[0]])
        return None

    def with_heights(self, h) -> Comb:
        return Comb(self.u, tuple(h), self.labels)


@dataclass(frozen=True)
class GapConfiguration:
    """Disjoint ordered open intervals (z_n^-, z_n^+)."""

    gaps: tuple[tuple[float, float], ...]
    labels: tuple[int, ...] | None = None

    def __post_init__(self):
        gaps = tuple((float(a), float(b)) for a, b in self.gaps)
        if not gaps:
            raise InputError("gap configuration needs at least one gap")
        for a, b in gaps:
            if not (math.isfinite(a) and math.isfinite(b)) or b <= a:
                raise InputError(f"gap ({a}, {b}) must be a finite interval with z^- < z^+")
        for (a0, b0), (a1, b1) in zip(gaps, gaps[1:]):
            if a1 <= b0:
                raise InputError(f"gaps ({a0}, {b0}) and ({a1}, {b1}) overlap or touch")
        object.__setattr__(self, "gaps", gaps)
        labels = tuple(range(len(gaps))) if self.labels is None else tuple(int(n) for n in self.labels)
        if len(labels) != len(gaps) or any(b <= a for a, b in zip(labels, labels[1:])):
            raise InputError("gap labels must be strictly increasing, one per gap")
        object.__setattr__(self, "labels", labels)

    @property
    def lower(self) -> np.ndarray:
        return np.array([a for a, _ in self.gaps])

    @property
    def upper(self) -> np.ndarray:
        return np.array([b for _, b in self.gaps])

    @property
    def lengths(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def band_lengths(self) -> np.ndarray:
        return self.lower[1:] - self.upper[:-1]

    @property
    def s(self) -> float:
        """Shortest band between consecutive gaps; +inf for a single gap."""
        b = self.band_lengths
        return float(b.min()) if b.size else math.inf


@dataclass
class GapProfile:
    """Converged v = v_n (1 + Y_n) on every gap of a configuration."""

    config: GapConfiguration
    theta: np.ndarray  # Gauss-Legendre nodes in (-pi/2, pi/2)
    weights: np.ndarray
    w: np.ndarray  # (gaps, nodes) values of 1 + Y_n at the nodes
    iterations: int
    residual: float
    h: np.ndarray = field(default_factory=lambda: np.empty(0))
    z_crit: np.ndarray = field(default_factory=lambda: np.empty(0))
    A: np.ndarray = field(default_factory=lambda: np.empty(0))
    y_minus: np.ndarray = field(default_factory=lambda: np.empty(0))
    y_plus: np.ndarray = field(default_factory=lambda: np.empty(0))
    u: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def nodes(self) -> np.ndarray:
        """Abscissas x of the samples, shape (gaps, nodes)."""
        c = self.config
        mid = 0.5 * (c.lower + c.upper)
        rad = 0.5 * c.lengths
        return mid[:, None] + rad[:, None] * np.sin(self.theta)[None, :]

    @property
    def values(self) -> np.ndarray:
        """v at the nodes, shape (gaps, nodes)."""
        rad = 0.5 * self.config.lengths
        return rad[:, None] * np.cos(self.theta)[None, :] * self.w

    @property
    def y_max(self) -> np.ndarray:
        """max of Y_n over the gap; Y_n is convex there, so it sits at an edge."""
        return np.maximum(self.y_minus, self.y_plus)

    @property
    def mu_plus(self) -> np.ndarray:
        return 0.5 * self.config.lengths * (1 + self.y_plus) ** 2

    @property
    def mu_minus(self) -> np.ndarray:
        return -0.5 * self.config.lengths * (1 + self.y_minus) ** 2

    @property
    def Q0(self) -> float:
        return 0.5 * float(math.fsum(self.A))

    def Y(self, n_index: int, x) -> np.ndarray:
        """Y_n(x) for any x in the closed gap with position ``n_index``."""
        return _y_eval(self.config, self.theta, self.weights, self.w, n_index, np.atleast_1d(x))

    def v(self, n_index: int, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        a, b = self.config.gaps[n_index]
        vn = np.sqrt(np.clip((x - a) * (b - x), 0.0, None))
        return vn * (1 + self.Y(n_index, x))

    def to_comb(self) -> Comb:
        return Comb(
            u=tuple(self.u),
            h=tuple(self.h),
            labels=self.config.labels,
            q0=self.Q0,
            bands=tuple(self.config.band_lengths),
        )


# --------------------------------------------------------------------------
# single slit


def _as_complex(k) -> complex | np.ndarray:
    if isinstance(k, tuple) and len(k) == 2:
        return complex(k[0], k[1])
    return np.asarray(k, dtype=complex) if np.ndim(k) else complex(k)


def single_slit_map(u0: float, h0: float, k):
    """z(k) = sqrt((k - u0)^2 + h0^2) on C minus the slit [u0 - i h0, u0 + i h0].

    The branch is the one with z ~ k - u0 at infinity, written as
    w sqrt(1 + h0^2 / w^2) so the cut of the principal root lies exactly on
    the slit. ``k`` may be complex, an array, or an ``(re, im)`` pair.
    """
    w = _as_complex(k) - u0
    on_slit = (np.real(w) == 0) & (np.abs(np.imag(w)) <= h0)
    if np.any(on_slit):
        raise InputError("k lies on the slit, where the map is not defined")
    return w * np.sqrt(1 + h0**2 / w**2)


def single_slit_q0(h0: float) -> float:
    """Q0 = (1/pi) int sqrt(h0^2 - x^2) dx = h0^2 / 2."""
    return 0.5 * h0 * h0


def single_slit_nu(h0: float) -> float:
    """Tip mass nu = 1 / |k''(0)| for k(z) = u0 + sqrt(z^2 - h0^2)."""
    if h0 <= 0:
        return 0.0
    kpp = -(h0**2) / complex(-(h0**2)) ** 1.5
    return 1.0 / abs(kpp)


# --------------------------------------------------------------------------
# fixed point v = v_n (1 + Y_n)


def _kernel(cfg: GapConfiguration, theta: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """K[n, i, m, j] so that Y_n(x_ni) = sum_{m != n, j} K[n, i, m, j] (1 + Y_m)(t_mj)."""
    a, b = cfg.lower, cfg.upper
    mid, rad = 0.5 * (a + b), 0.5 * (b - a)
    x = mid[:, None] + rad[:, None] * np.sin(theta)[None, :]  # (G, M)
    W = weights[None, :] * (rad[:, None] * np.cos(theta)[None, :]) ** 2  # (G, M)
    G, M = x.shape
    K = np.zeros((G, M, G, M))
    for n in range(G):
        for m in range(G):
            if m == n:
                continue
            t = x[m]
            vn_t = np.sqrt((t - a[n]) * (t - b[n]))  # t lies outside gap n
            K[n, :, m, :] = W[m][None, :] / (np.abs(t[None, :] - x[n][:, None]) * vn_t[None, :])
    return K / math.pi


def _y_eval(cfg, theta, weights, w, n, x):
    a, b = cfg.lower, cfg.upper
    mid, rad = 0.5 * (a + b), 0.5 * (b - a)
    out = np.zeros(x.shape)
    for m in range(len(cfg.gaps)):
        if m == n:
            continue
        t = mid[m] + rad[m] * np.sin(theta)
        W = weights * (rad[m] * np.cos(theta)) ** 2
        vn_t = np.sqrt((t - a[n]) * (t - b[n]))
        out += (W * w[m] / vn_t) @ (1.0 / np.abs(t[:, None] - x[None, :]))
    return out / math.pi


def solve_gap_profile(
    cfg: GapConfiguration,
    tol: float = 1e-12,
    max_iter: int = 1000,
    nodes: int = DEFAULT_NODES,
) -> GapProfile:
    """Jacobi iteration for v = v_n (1 + Y_n[v]) started from v = v_n.

    The iteration is linear with a nonnegative kernel, so the iterates
    increase monotonically; it converges when the kernel's spectral radius
    is below one (gaps short compared with the bands between them).
    """
    t, wts = np.polynomial.legendre.leggauss(nodes)
    theta, weights = 0.5 * math.pi * t, 0.5 * math.pi * wts
    K = _kernel(cfg, theta, weights)
    G = len(cfg.gaps)
    Kmat = K.reshape(G * nodes, G * nodes)
    rad = 0.5 * cfg.lengths
    vn = (rad[:, None] * np.cos(theta)[None, :]).ravel()

    w = np.ones(G * nodes)
    residual = math.inf
    for it in range(1, max_iter + 1):
        w_new = 1.0 + Kmat @ w
        if np.any(w_new < w - 1e-14 * w):
            raise ConvergenceError("fixed-point iterates lost monotonicity", residual)
        residual = float(np.max(np.abs(vn * (w_new - w))))
        w = w_new
        if residual < tol * (1 + float(np.max(vn * w))):
            break
    else:
        raise ConvergenceError(f"gap profile did not converge in {max_iter} iterations", residual)

    prof = GapProfile(cfg, theta, weights, w.reshape(G, nodes), it, residual)
    _derive(prof)
    return prof


def _derive(prof: GapProfile) -> None:
    cfg = prof.config
    a, b = cfg.lower, cfg.upper
    G = len(cfg.gaps)
    W = prof.weights[None, :] * (0.5 * cfg.lengths[:, None] * np.cos(prof.theta)[None, :]) ** 2
    prof.A = (2 / math.pi) * np.sum(W * prof.w, axis=1)
    prof.y_minus = np.array([prof.Y(n, a[n])[0] for n in range(G)])
    prof.y_plus = np.array([prof.Y(n, b[n])[0] for n in range(G)])

    h = np.empty(G)
    zc = np.empty(G)
    vals = prof.values
    xs = prof.nodes
    for n in range(G):
        j = int(np.argmax(vals[n]))
        lo = xs[n, max(j - 1, 0)] if j > 0 else a[n]
        hi = xs[n, min(j + 1, xs.shape[1] - 1)] if j < xs.shape[1] - 1 else b[n]
        res = minimize_scalar(lambda x: -prof.v(n, x)[0], bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13 * max(1.0, abs(lo), abs(hi))})
        h[n], zc[n] = -res.fun, res.x
    prof.h, prof.z_crit = h, zc

    # Re k on gap n equals u_n = z_n^+ + (1/pi) int v(t) / (t - z_n^+) dt
    mid, rad = 0.5 * (a + b), 0.5 * (b - a)
    u = np.empty(G)
    for n in range(G):
        total = 0.0
        for m in range(G):
            if m == n:
                # t - z^+ = r (sin - 1), v dt = r^2 cos^2 w dtheta  ->  -r (1 + sin) w
                total += float(np.sum(prof.weights * -rad[n] * (1 + np.sin(prof.theta)) * prof.w[n]))
            else:
                t = mid[m] + rad[m] * np.sin(prof.theta)
                total += float(np.sum(W[m] * prof.w[m] / (t - b[n])))
        u[n] = b[n] + total / math.pi
    prof.u = u


def profile_residual(prof: GapProfile) -> float:
    """sup |v - v_n (1 + Y_n[v])| over the nodes: the certificate of the fixed point."""
    worst = 0.0
    xs = prof.nodes
    for n in range(len(prof.config.gaps)):
        a, b = prof.config.gaps[n]
        vn = np.sqrt(np.clip((xs[n] - a) * (b - xs[n]), 0, None))
        worst = max(worst, float(np.max(np.abs(prof.values[n] - vn * (1 + prof.Y(n, xs[n]))))))
    return worst


# --------------------------------------------------------------------------
# greedy selection


def greedy_indices(comb: Comb) -> list[int]:
    """Selection order of the greedy rule.

    Each step takes the tallest slit among those farther (strictly) than
    h_s from every already selected abscissa u_s; ties go to the smallest
    abscissa.
    """
    u = np.asarray(comb.u)
    h = np.asarray(comb.h)
    chosen: list[int] = []
    allowed = h > 0
    while allowed.any():
        cand = np.flatnonzero(allowed)
        best = cand[h[cand] == h[cand].max()]
        n = int(best[np.argmin(u[best])])
        chosen.append(n)
        allowed &= np.abs(u - u[n]) > h[n]
    return chosen


def greedy_select(comb: Comb) -> Comb:
    """The comb with every non-selected height set to zero."""
    keep = set(greedy_indices(comb))
    return comb.with_heights([x if i in keep else 0.0 for i, x in enumerate(comb.h)])


# --------------------------------------------------------------------------
# analytic capacity


def _log1p_complex(w: np.ndarray) -> np.ndarray:
    """log(1 + w) accurate for small complex w (Kahan's trick)."""
    u = 1.0 + w
    out = np.log(u)
    d = u - 1.0
    nz = d != 0
    out = np.where(nz, out * np.divide(w, d, out=np.ones_like(w), where=nz), w)
    return out


@dataclass(frozen=True)
class AhlforsFunction:
    """f_E = (exp(phi/2) - 1) / (exp(phi/2) + 1) = tanh(phi/4), phi = int_E dt / (z - t)."""

    intervals: tuple[tuple[float, float], ...]

    def phi(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        total = np.zeros(z.shape, dtype=complex)
        for a, b in self.intervals:
            if b > a:
                total += _log1p_complex((b - a) / (z - b))
        return total

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        for a, b in self.intervals:
            if np.any((np.imag(z) == 0) & (np.real(z) >= a) & (np.real(z) <= b)):
                raise InputError("the extremal function is not defined on E")
        return np.tanh(self.phi(z) / 4)


def capacity_segments(E) -> tuple[float, AhlforsFunction]:
    """Analytic capacity |E| / 4 of a finite union of real segments and its extremal function."""
    ivs = sorted((float(a), float(b)) for a, b in E)
    for a, b in ivs:
        if not (math.isfinite(a) and math.isfinite(b)) or b < a:
            raise InputError(f"segment [{a}, {b}] must be finite with a <= b")
    for (a0, b0), (a1, b1) in zip(ivs, ivs[1:]):
        if a1 < b0:
            raise InputError(f"segments [{a0}, {b0}] and [{a1}, {b1}] overlap")
    total = math.fsum(b - a for a, b in ivs)
    return total / 4, AhlforsFunction(tuple(ivs))


# --------------------------------------------------------------------------
# Lindeloef monotonicity


@dataclass(frozen=True)
class LindelofEntry:
    check: str
    lhs: float  # the quantity for the smaller comb, oriented so that lhs <= rhs is expected
    rhs: float
    ok: bool
    where: str = ""


@dataclass(frozen=True)
class LindelofReport:
    entries: tuple[LindelofEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)


def _y_single(comb: Comb, k) -> np.ndarray:
    """Im z(k) for a comb with at most one open slit."""
    slits = comb.open_slits
    k = np.asarray(k, dtype=complex)
    if not slits:
        return np.imag(k)
    i = slits[0]
    return np.imag(single_slit_map(comb.u[i], comb.h[i], k))


def lindelof_check(h: Comb, h_tilde: Comb, probes=(), rel: float = 1e-12) -> LindelofReport:
    """Check y(k, h~) >= y(k, h), Q0(h~) <= Q0(h) and |sigma_n(h~)| >= |sigma_n(h)|.

    Each comparison is made only where both sides are computable: y for combs
    with at most one open slit, Q0 where it is known, band lengths where both
    combs carry them.
    """
    if len(h.u) != len(h_tilde.u) or not np.allclose(h.u, h_tilde.u, rtol=0, atol=0):
        raise InputError("Lindeloef comparison needs identical abscissas")
    if any(t > x for t, x in zip(h_tilde.h, h.h)):
        raise InputError("Lindeloef comparison needs h~_n <= h_n for every n")
    entries = []
    probes = np.asarray(probes, dtype=complex).ravel()
    if probes.size:
        if len(h.open_slits) > 1 or len(h_tilde.open_slits) > 1:
            raise InputError("pointwise y comparison needs combs with at most one slit")
        slit_pts = [(h.u[i], h.h[i]) for i in h.open_slits]
        for k in probes:
            if k.imag <= 0 or any(k.real == u0 and k.imag <= h0 for u0, h0 in slit_pts):
                raise InputError(f"probe {k} is not in the upper half of the slit domain")
        y_big = _y_single(h, probes)
        y_small = _y_single(h_tilde, probes)
        for k, yb, ys in zip(probes, y_big, y_small):
            entries.append(LindelofEntry("2.23", float(yb), float(ys),
                                         bool(yb <= ys + rel * max(abs(yb), abs(ys))), f"k={k!r}"))
    q_big, q_small = h.q0_value(), h_tilde.q0_value()
    if q_big is not None and q_small is not None:
        entries.append(LindelofEntry("2.26", q_small, q_big, bool(q_small <= q_big + rel * max(q_big, 1e-300))))
    if h.bands is not None and h_tilde.bands is not None:
        if len(h.bands) != len(h_tilde.bands):
            raise InputError("band-length comparison needs the same number of bands")
        for i, (sb, ss) in enumerate(zip(h.bands, h_tilde.bands)):
            entries.append(LindelofEntry("2.27", sb, ss, bool(sb <= ss + rel * max(sb, ss)), f"band {i}"))
    if not entries:
        raise InputError("no comparison is computable for these combs")
    return LindelofReport(tuple(entries))
