"""Imaginary part of the quasimomentum on gaps, actions, masses and moments.

On a gap g_n the quasimomentum is k = pi n + i v with
``cosh v = (-1)^n Delta``. Actions integrate v over the gap with
x = m + r sin(theta), which turns the square-root vanishing of v at both
edges into a smooth periodic integrand, so Gauss-Legendre converges
spectrally.

Near a band edge cos(k - pi n) = (-1)^n Delta is analytic in z with a simple
zero of its derivative in k, so z - z^pm is a function of (k - pi n)^2 and

    (-1)^n Delta'(z^pm) = -mu^pm.

That closed form is what gets reported; it is only accepted after an
independent band-side fit of (k - pi n)^2 / (2 (x - z^pm)) agrees with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bands import GapRecord, SpectralSummary, compute_heights, find_band_edges
from .errors import InconsistencyError, QuadratureError
from .monodromy import DEFAULT_TOL, discriminant
from .potential import NormSq, PotentialSpec, potential_norm_sq

MASS_REL_TOL = 1e-4
FIT_OFFSETS = np.logspace(-3, -5, 5)  # fractions of the adjacent band length
QUAD_LEVELS = (16, 32, 64, 128, 256, 512)
ID_TOL = 1e-8


@dataclass(frozen=True)
class ActionRecord:
    n: int
    A: float
    J: float
    mu_plus: float
    mu_minus: float
    e_charge: float
    d_moment: float
    quad_error: float = 0.0
    mu_plus_fit: float = 0.0
    mu_minus_fit: float = 0.0
    mass_reliable: bool = True

    @property
    def abs_mu_plus(self) -> float:
        return abs(self.mu_plus)

    @property
    def abs_mu_minus(self) -> float:
        return abs(self.mu_minus)


@dataclass(frozen=True)
class MomentSummary:
    Q0: float
    I_D: float
    sum_A: float
    J_norm_sq: float
    norm_sq: NormSq
    id_residual_A: float  # sum A - (1/2) int (V1^2 + V2^2)
    id_residual_B: float  # sum A - (1/2) * 2 int (V1^2 + V2^2)
    id_convention: str | None  # "A", "B", or None when neither / both match

    @property
    def normSqHalf_conventionA(self) -> float:
        return self.norm_sq.half_single

    @property
    def normSqHalf_conventionB(self) -> float:
        return self.norm_sq.half_doubled


def _sign(n: int) -> float:
    return 1.0 if n % 2 == 0 else -1.0


def gap_v(pot: PotentialSpec, gap: GapRecord, x, tol: float = DEFAULT_TOL, ode_tol: float | None = None):
    """v(x) = arccosh((-1)^n Delta(x)) for x in the closure of an open gap."""
    ode_tol = tol * 1e-2 if ode_tol is None else ode_tol
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if gap.is_closed:
        raise InconsistencyError(f"gap {gap.n} is closed; v is only defined on open gaps")
    slack = 100 * tol * max(1.0, gap.length)
    if np.any(xs < gap.z_minus - slack) or np.any(xs > gap.z_plus + slack):
        raise InconsistencyError(f"x outside gap {gap.n} = [{gap.z_minus}, {gap.z_plus}]")
    arg = _sign(gap.n) * discriminant(pot, xs, ode_tol, order=0).delta
    if np.any(arg < 1 - 100 * tol):
        raise InconsistencyError(f"gap {gap.n}: (-1)^n Delta = {arg.min():.6g} < 1 inside the gap")
    v = np.arccosh(np.maximum(arg, 1.0))
    return float(v[0]) if np.ndim(x) == 0 else v


def _gauss_theta(m: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * math.pi * t, 0.5 * math.pi * w


def _actions_batch(pot: PotentialSpec, gaps: list[GapRecord], tol: float, ode_tol: float):
    """Actions of all given open gaps; every quadrature level is one ODE batch."""
    if not gaps:
        return np.empty(0), np.empty(0)
    mid = np.array([g.midpoint for g in gaps])
    rad = np.array([0.5 * g.length for g in gaps])
    sgn = np.array([_sign(g.n) for g in gaps])
    prev = None
    for m in QUAD_LEVELS:
        th, w = _gauss_theta(m)
        x = mid[:, None] + rad[:, None] * np.sin(th)[None, :]
        d = discriminant(pot, x.ravel(), ode_tol, order=0).delta.reshape(x.shape)
        v = np.arccosh(np.maximum(sgn[:, None] * d, 1.0))
        A = (2 / math.pi) * rad * ((v * np.cos(th)[None, :]) @ w)
        if prev is not None:
            err = np.abs(A - prev)
            if np.all(err <= 1e-10 * np.maximum(1.0, A)):
                return A, err
        prev = A
    bad = int(np.argmax(err / np.maximum(1.0, A)))
    raise QuadratureError(f"action quadrature for gap {gaps[bad].n} did not converge", float(err[bad]))


def action(pot: PotentialSpec, gap: GapRecord, tol: float = DEFAULT_TOL, ode_tol: float | None = None) -> tuple[float, float]:
    """A_n = (2/pi) int_gap v dx and J_n = sqrt(A_n); closed gaps give zeros."""
    if gap.is_closed:
        return 0.0, 0.0
    ode_tol = tol * 1e-2 if ode_tol is None else ode_tol
    A, _ = _actions_batch(pot, [gap], tol, ode_tol)
    return float(A[0]), math.sqrt(float(A[0]))


def _masses_batch(pot: PotentialSpec, gaps: list[GapRecord], tol: float, ode_tol: float):
    """Closed-form and fitted masses for open gaps.

    Returns arrays (mu_plus, mu_minus, fit_plus, fit_minus, reliable).
    """
    k = len(gaps)
    if k == 0:
        e = np.empty(0)
        return e, e, e, e, np.empty(0, dtype=bool)
    sgn = np.array([_sign(g.n) for g in gaps])
    zm = np.array([g.z_minus for g in gaps])
    zp = np.array([g.z_plus for g in gaps])
    edges = np.concatenate([zp, zm])
    d = discriminant(pot, edges, ode_tol, order=1)
    closed_form = -np.concatenate([sgn, sgn]) * d.d1

    # band-side samples: above z^+ into sigma_{n+1}, below z^- into sigma_n
    band = np.concatenate([[g.band_above for g in gaps], [g.band_below for g in gaps]])
    direction = np.concatenate([np.ones(k), -np.ones(k)])
    offs = FIT_OFFSETS[None, :] * band[:, None]
    x = edges[:, None] + direction[:, None] * offs
    dx = discriminant(pot, x.ravel(), ode_tol, order=0).delta.reshape(x.shape)
    c = np.clip(np.concatenate([sgn, sgn])[:, None] * dx, -1.0, 1.0)
    kappa = np.arccos(c)
    ratio = kappa**2 / (2 * (x - edges[:, None]))
    fit = np.empty(2 * k)
    for i in range(2 * k):
        slope, intercept = np.polyfit(offs[i], ratio[i], 1)
        fit[i] = intercept
    # Delta noise of a few ode_tol becomes a ratio noise of ~noise / offset
    floor = 50 * ode_tol * (1 + np.abs(edges)) / offs[:, -1]
    agree = np.abs(fit - closed_form) <= MASS_REL_TOL * np.abs(closed_form) + floor
    return closed_form[:k], closed_form[k:], fit[:k], fit[k:], agree[:k] & agree[k:]


def effective_masses(pot: PotentialSpec, gap: GapRecord, tol: float = DEFAULT_TOL,
                     ode_tol: float | None = None) -> tuple[float, float]:
    """(mu_plus, mu_minus); mu_plus > 0 > mu_minus on open gaps, zeros on closed ones.

    Raises InconsistencyError when the closed form and the band-side fit disagree.
    """
    if gap.is_closed:
        return 0.0, 0.0
    ode_tol = tol * 1e-2 if ode_tol is None else ode_tol
    mp, mm, fp, fm, ok = _masses_batch(pot, [gap], tol, ode_tol)
    if not ok[0]:
        raise InconsistencyError(
            f"gap {gap.n}: closed-form masses ({mp[0]:.10g}, {mm[0]:.10g}) disagree with "
            f"band-side fit ({fp[0]:.10g}, {fm[0]:.10g})"
        )
    return float(mp[0]), float(mm[0])


def compute_actions(summary: SpectralSummary, pot: PotentialSpec) -> list[ActionRecord]:
    """One ActionRecord per gap of the window (closed gaps carry zeros)."""
    tol, ode_tol = summary.tol, summary.ode_tol
    open_gaps = [g for g in summary.gaps if not g.is_closed]
    A, err = _actions_batch(pot, open_gaps, tol, ode_tol)
    mp, mm, fp, fm, ok = _masses_batch(pot, open_gaps, tol, ode_tol)
    by_n = {g.n: i for i, g in enumerate(open_gaps)}
    records = []
    for g in summary.gaps:
        e = g.length / (4 * math.pi)
        if g.n not in by_n:
            records.append(ActionRecord(g.n, 0.0, 0.0, 0.0, 0.0, e, 0.0))
            continue
        i = by_n[g.n]
        a = float(A[i])
        records.append(
            ActionRecord(
                n=g.n,
                A=a,
                J=math.sqrt(a),
                mu_plus=float(mp[i]),
                mu_minus=float(mm[i]),
                e_charge=e,
                d_moment=a / 4,
                quad_error=float(err[i]),
                mu_plus_fit=float(fp[i]),
                mu_minus_fit=float(fm[i]),
                mass_reliable=bool(ok[i]),
            )
        )
    return records


def moments(summary: SpectralSummary, norm_sq: NormSq | None = None) -> MomentSummary:
    """Q0 = sum(A)/2, I_D = sum(A), and the check of sum(A) = ||V||^2 / 2 under both norms."""
    if not summary.actions:
        raise ValueError("actions have not been computed for this summary")
    if norm_sq is None:
        if summary.potential is None:
            raise ValueError("a potential or its norm is needed for the norm identity")
        norm_sq = potential_norm_sq(summary.potential)
    A = np.array([r.A for r in summary.actions])
    J = np.array([r.J for r in summary.actions])
    total = float(math.fsum(A))
    res_a = total - norm_sq.half_single
    res_b = total - norm_sq.half_doubled
    scale = max(1.0, abs(total))
    match_a = abs(res_a) <= ID_TOL * scale
    match_b = abs(res_b) <= ID_TOL * scale
    convention = "A" if match_a and not match_b else "B" if match_b and not match_a else None
    return MomentSummary(
        Q0=0.5 * total,
        I_D=total,
        sum_A=total,
        J_norm_sq=float(math.fsum(J**2)),
        norm_sq=norm_sq,
        id_residual_A=res_a,
        id_residual_B=res_b,
        id_convention=convention,
    )


def analyze_potential(pot: PotentialSpec, N: int, tol: float = DEFAULT_TOL, *,
                      scan_step: float = math.pi / 8, refine_heights: bool = False) -> SpectralSummary:
    """Edges, heights, actions, masses and moments over the window -N..N."""
    summary = find_band_edges(pot, N, tol, scan_step=scan_step)
    if refine_heights:
        compute_heights(summary, pot)
    summary.actions = compute_actions(summary, pot)
    summary.moments = moments(summary)
    return summary
