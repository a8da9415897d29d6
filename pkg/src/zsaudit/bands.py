"""Band edges, gap critical points and slit heights of a ZS operator.

Delta' vanishes exactly once per gap [z_n^-, z_n^+] and nowhere inside the
bands, so the zeros of Delta' on a fine scan are the gap centres z_n in
increasing order. Their labels follow from the sign of Delta(z_n), which
fixes the parity, and from k(z) = z + o(1), which fixes the offset: z_n/pi - n
is small. Edges are then roots of (-1)^n Delta - 1 = 0 bracketed between
neighbouring centres, where Delta is monotone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InconsistencyError, InputError, LabelingError
from .monodromy import DEFAULT_TOL, discriminant
from .potential import PotentialSpec


@dataclass(frozen=True)
class GapRecord:
    n: int
    z_minus: float
    z_plus: float
    z_crit: float
    h: float
    is_closed: bool
    band_below: float = math.nan  # |sigma_n|, the band ending at z_minus
    band_above: float = math.nan  # |sigma_{n+1}|, the band starting at z_plus
    error: str | None = None

    @property
    def length(self) -> float:
        return self.z_plus - self.z_minus

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.z_minus + self.z_plus)

    @property
    def sign(self) -> int:
        return 1 if self.n % 2 == 0 else -1


@dataclass
class SpectralSummary:
    window: int
    gaps: list[GapRecord]
    tol: float
    ode_tol: float
    potential: PotentialSpec | None = None
    label_offset_residual: float = 0.0
    label_ambiguous: bool = False
    asymptotic_n0: int | None = None
    actions: list = field(default_factory=list)
    moments: object | None = None

    @property
    def indices(self) -> np.ndarray:
        return np.array([g.n for g in self.gaps])

    @property
    def gap_lengths(self) -> np.ndarray:
        return np.array([g.length for g in self.gaps])

    @property
    def heights(self) -> np.ndarray:
        return np.array([g.h for g in self.gaps])

    @property
    def tail_indicator(self) -> float:
        """Largest height at the window boundary; zero means the truncation is invisible."""
        edge = [g.h for g in self.gaps if abs(g.n) == self.window]
        return max(edge) if edge else 0.0

    @property
    def min_band(self) -> float:
        bands = [g.band_below for g in self.gaps] + [self.gaps[-1].band_above]
        return float(np.nanmin(bands))

    def gap(self, n: int) -> GapRecord:
        for g in self.gaps:
            if g.n == n:
                return g
        raise KeyError(n)


def _newton_bracket(fun, lo, hi, x0, xtol, ftol, maxiter=100):
    """Vectorized safeguarded Newton.

    ``fun(x) -> (f, df)``. Each bracket must satisfy f(lo) < 0 < f(hi) or the
    reverse; the sign at ``lo`` is probed once. Returns ``(x, converged)``.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    x = np.clip(np.array(x0, dtype=float), np.minimum(lo, hi), np.maximum(lo, hi))
    f_lo, _ = fun(lo)
    s_lo = np.where(f_lo < 0, -1.0, 1.0)
    done = np.zeros(x.shape, dtype=bool)
    done |= f_lo == 0
    x[f_lo == 0] = lo[f_lo == 0]
    for _ in range(maxiter):
        act = np.flatnonzero(~done)
        if act.size == 0:
            break
        f, df = fun(x[act])
        xa, la, ha = x[act], lo[act], hi[act]
        same = np.sign(f) == s_lo[act]
        la = np.where(same, xa, la)
        ha = np.where(same, ha, xa)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = xa - f / df
        a, b = np.minimum(la, ha), np.maximum(la, ha)
        bad = ~np.isfinite(newton) | (newton <= a) | (newton >= b)
        x_new = np.where(bad, 0.5 * (la + ha), newton)
        conv = (np.abs(x_new - xa) < xtol) | (np.abs(ha - la) < xtol) | (np.abs(f) <= ftol)
        lo[act], hi[act] = la, ha
        x[act] = np.where(np.abs(f) <= ftol, xa, x_new)
        done[act] = conv
    return x, done


def find_band_edges(
    pot: PotentialSpec,
    N: int,
    tol: float = DEFAULT_TOL,
    *,
    scan_step: float = math.pi / 8,
    scan_margin: float = 2.0,
    ode_tol: float | None = None,
    closed_eps: float | None = None,
) -> SpectralSummary:
    """Edges z_n^-, z_n^+, centres z_n and heights h_n for n = -N..N.

    ``closed_eps`` is the resolution in Delta below which (-1)^n Delta(z_n) - 1
    is treated as zero (closed gap); by default ``tol / 5`` which sits a few
    times above the integration error at ``ode_tol = tol / 100``.
    """
    if N < 1:
        raise InputError("window N must be >= 1")
    ode_tol = tol * 1e-2 if ode_tol is None else ode_tol
    closed_eps = 0.2 * tol if closed_eps is None else closed_eps

    L = (N + 1) * math.pi + scan_margin
    npts = int(math.ceil(2 * L / scan_step)) + 1
    grid = np.linspace(-L, L, npts)
    scan = discriminant(pot, grid, ode_tol, order=1)

    s = np.where(scan.d1 < 0, -1, 1)
    idx = np.flatnonzero(s[:-1] != s[1:])
    if idx.size == 0:
        raise LabelingError("no critical point of Delta found; enlarge the scan")

    def dprime(x):
        d = discriminant(pot, x, ode_tol, order=2)
        return d.d1, d.d2

    lo, hi = grid[idx], grid[idx + 1]
    f_lo, f_hi = scan.d1[idx], scan.d1[idx + 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        x0 = np.where(f_hi != f_lo, lo - f_lo * (hi - lo) / (f_hi - f_lo), 0.5 * (lo + hi))
    zc, ok = _newton_bracket(dprime, lo, hi, x0, xtol=tol * 1e-2, ftol=0.0)
    if not ok.all():
        raise LabelingError("critical point refinement did not converge; refine the scan")
    crit = discriminant(pot, zc, ode_tol, order=2)
    parity = np.where(crit.delta > 0, 1, -1)
    if np.any(np.abs(crit.delta) < 1 - closed_eps):
        raise LabelingError(
            "critical point of Delta inside a band; the scan step is too coarse or the "
            "integration tolerance too loose"
        )
    if np.any(parity[1:] == parity[:-1]):
        raise LabelingError("gap parities do not alternate; refine the scan step")

    j = np.arange(zc.size)
    off_real = float(np.mean(zc / math.pi - j))
    par = 0 if parity[0] > 0 else 1
    offset = 2 * int(round((off_real - par) / 2)) + par
    residual = abs(offset - off_real)
    labels = j + offset

    have = set(labels.tolist())
    if not all(n in have for n in range(-N - 1, N + 2)):
        raise LabelingError(
            f"scan covers labels {labels.min()}..{labels.max()} but the window needs "
            f"{-N - 1}..{N + 1}; increase scan_margin"
        )
    sel = (labels >= -N - 1) & (labels <= N + 1)
    labels, zc = labels[sel], zc[sel]
    dc, d2c = crit.delta[sel], crit.d2[sel]
    sgn = np.where(labels % 2 == 0, 1.0, -1.0)
    excess = sgn * dc - 1.0
    open_ = excess > closed_eps

    # root problems: (label position, side) with side -1 for z^- and +1 for z^+
    probs = [(i, side) for i in range(len(labels)) for side in (-1, 1)
             if open_[i] and 0 <= i + side < len(labels)]
    z_minus = zc.copy()
    z_plus = zc.copy()
    errors: dict[int, str] = {}
    if probs:
        pi_ = np.array([p[0] for p in probs])
        side = np.array([p[1] for p in probs])
        blo = zc[pi_ + side]
        bhi = zc[pi_]
        width = np.sqrt(2 * excess[pi_] / np.maximum(np.abs(d2c[pi_]), 1e-300))
        guess = zc[pi_] + side * width
        psgn = sgn[pi_]

        # the Newton helper evaluates on shrinking subsets, so even and odd
        # gaps (which need opposite signs of Delta) are solved as two batches
        roots = np.empty(len(probs))
        conv = np.empty(len(probs), dtype=bool)
        for s_val in (1.0, -1.0):
            m = psgn == s_val
            if not m.any():
                continue

            def edge_fun(x, s_val=s_val):
                d = discriminant(pot, x, ode_tol, order=1)
                return s_val * d.delta - 1.0, s_val * d.d1

            r, c = _newton_bracket(edge_fun, blo[m], bhi[m], guess[m],
                                   xtol=tol * 1e-2, ftol=5 * ode_tol)
            roots[m], conv[m] = r, c
        for k, (i, sd) in enumerate(probs):
            if sd < 0:
                z_minus[i] = roots[k]
            else:
                z_plus[i] = roots[k]
            if not conv[k]:
                errors[i] = f"edge refinement did not converge (side {'-' if sd < 0 else '+'})"

    heights = np.where(open_, np.arccosh(np.maximum(sgn * dc, 1.0)), 0.0)
    closed = ~open_ | (z_plus - z_minus < 100 * tol)
    z_minus = np.where(closed, zc, z_minus)
    z_plus = np.where(closed, zc, z_plus)
    heights = np.where(closed, 0.0, heights)

    gaps = []
    for i, n in enumerate(labels):
        if abs(n) > N:
            continue
        gaps.append(
            GapRecord(
                n=int(n),
                z_minus=float(z_minus[i]),
                z_plus=float(z_plus[i]),
                z_crit=float(zc[i]),
                h=float(heights[i]),
                is_closed=bool(closed[i]),
                band_below=float(z_minus[i] - z_plus[i - 1]),
                band_above=float(z_minus[i + 1] - z_plus[i]),
                error=errors.get(i),
            )
        )
    for g0, g1 in zip(gaps, gaps[1:]):
        if not (g0.z_minus <= g0.z_plus < g1.z_minus):
            raise LabelingError(f"edges of gaps {g0.n}, {g1.n} do not interlace; refine the scan")

    summary = SpectralSummary(
        window=N,
        gaps=gaps,
        tol=tol,
        ode_tol=ode_tol,
        potential=pot,
        label_offset_residual=residual,
        label_ambiguous=residual > 0.75,
    )
    summary.asymptotic_n0 = _asymptotic_n0(gaps)
    return summary


def _asymptotic_n0(gaps: list[GapRecord]) -> int | None:
    """Smallest n0 with |z_n^pm - pi n| <= pi/2 for every |n| >= n0 in the window."""
    bad = [abs(g.n) for g in gaps
           if max(abs(g.z_minus - math.pi * g.n), abs(g.z_plus - math.pi * g.n)) > math.pi / 2]
    if not bad:
        return 0
    n0 = max(bad) + 1
    return n0 if n0 <= max(abs(g.n) for g in gaps) else None


def compute_heights(summary: SpectralSummary, pot: PotentialSpec, tol: float | None = None) -> SpectralSummary:
    """Re-derive z_n and h_n on every open gap from its edges alone.

    z_n is the unique zero of Delta' in [z_n^-, z_n^+]; it is located by
    safeguarded Newton on Delta' (using Delta'') and h_n = arccosh((-1)^n Delta(z_n)).
    """
    tol = summary.tol if tol is None else tol
    ode_tol = summary.ode_tol
    open_gaps = [g for g in summary.gaps if not g.is_closed]
    if not open_gaps:
        return summary
    lo = np.array([g.z_minus for g in open_gaps])
    hi = np.array([g.z_plus for g in open_gaps])

    def dprime(x):
        d = discriminant(pot, x, ode_tol, order=2)
        return d.d1, d.d2

    zc, _ = _newton_bracket(dprime, lo, hi, 0.5 * (lo + hi), xtol=tol * 1e-2, ftol=0.0)
    d = discriminant(pot, zc, ode_tol, order=0)
    sgn = np.array([g.sign for g in open_gaps])
    val = sgn * d.delta
    updated = {}
    for g, z, v in zip(open_gaps, zc, val):
        if v < 1 - tol:
            raise InconsistencyError(f"gap {g.n}: (-1)^n Delta(z_n) = {v:.6g} < 1; edge mislabeled")
        updated[g.n] = replace(g, z_crit=float(z), h=float(np.arccosh(max(v, 1.0))))
    summary.gaps = [updated.get(g.n, g) for g in summary.gaps]
    return summary
