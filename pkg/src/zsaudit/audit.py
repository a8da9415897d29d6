"""Weighted l^p norms and audits of the identities and two-sided bounds.

Every chained inequality a <= b <= c is split into binary links so a failure
names the exact comparison. Per-index facts are reported at their worst
index. A link passes when ``lhs <= rhs + SLACK * max(|lhs|, |rhs|)``.

Sums run over the computed window only. Bounds whose two sides both grow
with extra terms are therefore not certified for the infinite sequence;
entries computed from a window carry ``truncated = True``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bands import SpectralSummary
from .comb import Comb, GapProfile, greedy_select, single_slit_nu
from .errors import InputError
from .potential import NormSq, potential_norm_sq

SLACK = 1e-8
DEFAULT_P = (1.0, 1.5, 2.0, 3.0, math.inf)
WEIGHTS = ("unit", "linear")

PASS, FAIL, NA = "pass", "fail", "not-applicable"


# --------------------------------------------------------------------------
# norms


def weight_vector(tag: str, labels) -> np.ndarray:
    labels = np.asarray(labels)
    if tag == "unit":
        return np.ones(labels.shape)
    if tag == "linear":
        return 1.0 + np.abs(labels)
    raise InputError(f"unknown weight {tag!r}; expected one of {WEIGHTS}")


def weighted_norm(seq, p: float, omega=None) -> float:
    """(sum omega_n |f_n|^p)^(1/p); p = inf gives max |f_n|."""
    f = np.abs(np.asarray(seq, dtype=float))
    if p < 1:
        raise InputError("p must be >= 1")
    if omega is not None:
        omega = np.asarray(omega, dtype=float)
        if omega.shape != f.shape:
            raise InputError(f"sequence length {f.size} does not match weight length {omega.size}")
        if np.any(omega < 1):
            raise InputError("weights must be >= 1")
    if f.size == 0:
        return 0.0
    if math.isinf(p):
        return float(f.max())
    terms = f**p if omega is None else omega * f**p
    return math.fsum(terms) ** (1.0 / p)


def conjugate(p: float) -> float:
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


# --------------------------------------------------------------------------
# report types


@dataclass(frozen=True)
class AuditEntry:
    id: str
    lhs: float | None
    rhs: float | None
    status: str
    p: float | None = None
    omega: str = "unit"
    relation: str = "<="
    params: dict = field(default_factory=dict)
    note: str = ""

    @property
    def margin(self) -> float | None:
        if self.lhs is None or self.rhs is None:
            return None
        if self.relation == "=":
            return -abs(self.rhs - self.lhs)
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.status == PASS


@dataclass
class AuditReport:
    entries: list[AuditEntry]
    provenance: dict

    @property
    def failures(self) -> list[AuditEntry]:
        return [e for e in self.entries if e.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures

    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, NA: 0}
        for e in self.entries:
            out[e.status] += 1
        return out

    def find(self, id: str, p: float | None = None, omega: str = "unit") -> AuditEntry:
        for e in self.entries:
            if e.id == id and e.omega == omega and (p is None or e.p == p):
                return e
        raise KeyError((id, p, omega))

    def extend(self, other: AuditReport) -> None:
        self.entries.extend(other.entries)

    def to_dict(self) -> dict:
        return {
            "provenance": {k: jsonable(v) for k, v in self.provenance.items()},
            "counts": self.counts(),
            "entries": [
                {
                    "id": e.id,
                    "p": jsonable(e.p),
                    "omega": e.omega,
                    "relation": e.relation,
                    "lhs": jsonable(e.lhs),
                    "rhs": jsonable(e.rhs),
                    "margin": jsonable(e.margin),
                    "status": e.status,
                    "params": {k: jsonable(v) for k, v in e.params.items()},
                    "note": e.note,
                }
                for e in self.entries
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "p", "omega", "lhs", "rhs", "margin", "pass"])
        for e in self.entries:
            flag = {PASS: "true", FAIL: "false", NA: "n/a"}[e.status]
            w.writerow([e.id, fmt(e.p), e.omega, fmt(e.lhs), fmt(e.rhs), fmt(e.margin), flag])
        return buf.getvalue()


def fmt(x) -> str:
    """Shortest round-trip decimal; blanks for missing values."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def jsonable(x):
    if x is None or isinstance(x, (str, bool)):
        return x
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else fmt(x)
    if isinstance(x, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    return str(x)


# --------------------------------------------------------------------------
# audit input


@dataclass(frozen=True)
class AuditData:
    """Sequences over a finite index set plus the scalars the bounds need.

    Missing pieces (None) make the dependent links not applicable.
    """

    labels: np.ndarray
    g: np.ndarray
    h: np.ndarray
    A: np.ndarray | None = None
    mu_plus: np.ndarray | None = None
    mu_minus: np.ndarray | None = None
    u: np.ndarray | None = None
    u_star: float | None = None
    s: float | None = None
    y_max: np.ndarray | None = None
    Q0: float | None = None
    norm_sq: NormSq | None = None
    window: int | None = None
    tail: float = 0.0
    source: str = ""
    truncated: bool = False

    def __post_init__(self):
        n = len(self.labels)
        for name in ("g", "h", "A", "mu_plus", "mu_minus", "u", "y_max"):
            val = getattr(self, name)
            if val is not None:
                arr = np.asarray(val, dtype=float)
                if arr.shape != (n,):
                    raise InputError(f"audit data: {name} has length {arr.size}, expected {n}")
                object.__setattr__(self, name, arr)
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=int))

    @property
    def J(self) -> np.ndarray | None:
        return None if self.A is None else np.sqrt(np.maximum(self.A, 0.0))

    @property
    def I_D(self) -> float | None:
        return None if self.Q0 is None else 2 * self.Q0

    @classmethod
    def from_summary(cls, summary: SpectralSummary, profile: GapProfile | None = None) -> AuditData:
        gaps = summary.gaps
        acts = {r.n: r for r in summary.actions}
        labels = np.array([g.n for g in gaps])
        A = mp = mm = None
        if acts:
            A = np.array([acts[g.n].A for g in gaps])
            mp = np.array([acts[g.n].mu_plus for g in gaps])
            mm = np.array([acts[g.n].mu_minus for g in gaps])
        y_max = None
        if profile is not None:
            ymap = dict(zip(profile.config.labels, profile.y_max))
            y_max = np.array([ymap.get(g.n, 0.0) for g in gaps])
        q0 = summary.moments.Q0 if summary.moments is not None else None
        norm = summary.moments.norm_sq if summary.moments is not None else (
            potential_norm_sq(summary.potential) if summary.potential is not None else None)
        return cls(
            labels=labels,
            g=np.array([g.length for g in gaps]),
            h=np.array([g.h for g in gaps]),
            A=A,
            mu_plus=mp,
            mu_minus=mm,
            u=math.pi * labels,
            u_star=math.pi,
            s=summary.min_band,
            y_max=y_max,
            Q0=q0,
            norm_sq=norm,
            window=summary.window,
            tail=summary.tail_indicator,
            source=summary.potential.digest() if summary.potential is not None else "",
            truncated=True,
        )

    @classmethod
    def from_profile(cls, prof: GapProfile) -> AuditData:
        comb = prof.to_comb()
        return cls(
            labels=np.array(prof.config.labels),
            g=prof.config.lengths,
            h=prof.h,
            A=prof.A,
            mu_plus=prof.mu_plus,
            mu_minus=prof.mu_minus,
            u=prof.u,
            u_star=comb.u_star,
            s=prof.config.s,
            y_max=prof.y_max,
            Q0=prof.Q0,
            source="gap-profile",
        )


# --------------------------------------------------------------------------
# auditor


class _Auditor:
    def __init__(self, data: AuditData, truncated: bool):
        self.d = data
        self.entries: list[AuditEntry] = []
        self.base = {"N": data.window, "tail": data.tail, "truncated": truncated}

    def le(self, id, lhs, rhs, p=None, omega="unit", note="", **params):
        lhs, rhs = float(lhs), float(rhs)
        if math.isnan(lhs) or math.isnan(rhs):
            status = FAIL
        else:
            status = PASS if lhs <= rhs + SLACK * max(abs(lhs), abs(rhs)) else FAIL
        self.entries.append(AuditEntry(id, lhs, rhs, status, p, omega, "<=", {**self.base, **params}, note))

    def eq(self, id, lhs, rhs, p=None, omega="unit", note="", **params):
        lhs, rhs = float(lhs), float(rhs)
        ok = abs(lhs - rhs) <= SLACK * max(abs(lhs), abs(rhs), 1e-300) or lhs == rhs
        self.entries.append(AuditEntry(id, lhs, rhs, PASS if ok else FAIL, p, omega, "=",
                                       {**self.base, **params}, note))

    def na(self, id, reason, p=None, omega="unit", **params):
        self.entries.append(AuditEntry(id, None, None, NA, p, omega, "<=", {**self.base, **params}, reason))

    def worst(self, id, lhs, rhs, note="", **params):
        """Per-index inequality lhs_n <= rhs_n, reported at the tightest index."""
        lhs, rhs = np.asarray(lhs, dtype=float), np.asarray(rhs, dtype=float)
        if lhs.size == 0:
            self.le(id, 0.0, 0.0, note=note or "empty index set", **params)
            return
        scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1e-300)
        with np.errstate(invalid="ignore"):
            rel = np.where(np.isnan(lhs) | np.isnan(rhs), -np.inf, (rhs - lhs) / scale)
        i = int(np.argmin(rel))
        self.le(id, lhs[i], rhs[i], note=note, n=int(self.d.labels[i]), **params)


def _norms(d: AuditData, p: float, omega: str):
    w = weight_vector(omega, d.labels)
    wn = (lambda f: weighted_norm(f, p, w)) if omega != "unit" else (lambda f: weighted_norm(f, p))
    return wn


def _pow(x: float, e: float) -> float:
    """x**e with 0**negative = inf and 0**0 = 1."""
    if x == 0 and e < 0:
        return math.inf
    return x**e


def _unweighted_bounds(a: _Auditor, d: AuditData, p_list, u_star: float, tags: dict[str, str], alpha_fn):
    """Unweighted l^p two-sided bounds shared by the operator and comb statements.

    ``tags`` names the four statements: heights vs gaps for p in [1, 2]
    ("hp_g"), heights vs conjugate gap norm for p >= 2 ("hp_gq"), actions vs
    gaps ("J_g") and heights vs actions ("h_J").
    """
    J = d.J
    has_lower = tags["hp_g"] == "T1-1"  # the comb version states only the upper bound
    for p in p_list:
        q = conjugate(p)
        gp, hp = weighted_norm(d.g, p), weighted_norm(d.h, p)
        al = alpha_fn(p)

        t = tags["hp_g"]
        if 1 <= p <= 2:
            if has_lower:
                a.le(f"{t}:lower", 2.0**-p * gp, hp, p)
            a.le(f"{t}:upper", hp, 2 * gp * (1 + al * gp**p), p, alpha=al)
        else:
            if has_lower:
                a.na(f"{t}:lower", "stated for p in [1, 2]", p)
            a.na(f"{t}:upper", "stated for p in [1, 2]", p)

        t = tags["hp_gq"]
        if p >= 2:
            inv = _inv(p)
            Cp = (math.pi**2 / 2) ** inv
            gq = weighted_norm(d.g, q)
            base = 2 * Cp / (math.pi * u_star)
            # (2/pi) C^2 ||g||_q (1 + base^(2/p-1) ||g||_q^(2/p-1)) with the product
            # expanded so that ||g||_q = 0 is well defined
            rhs = (2 / math.pi) * Cp**2 * (gq + _pow(base, 2 * inv - 1) * _pow(gq, 2 * inv))
            a.le(t, hp, rhs, p, q=q, C_p=Cp,
                 note="" if p == 2 else "bracket exponent 2/p-1 < 0: the bound grows as ||g||_q -> 0")
        else:
            a.na(t, "stated for p >= 2", p)

        for t, kind in ((tags["J_g"], "J_g"), (tags["h_J"], "h_J")):
            if J is None:
                a.na(f"{t}:lower", "actions unavailable", p)
                a.na(f"{t}:upper", "actions unavailable", p)
                continue
            if math.isinf(p):
                a.na(f"{t}:lower", "stated for finite p (the constant is infinite at p = inf)", p)
                a.na(f"{t}:upper", "stated for finite p (the constant is infinite at p = inf)", p)
                continue
            Jp = weighted_norm(J, p)
            if kind == "J_g":
                a.le(f"{t}:lower", 0.5 * gp, Jp, p)
                a.le(f"{t}:upper", Jp, 2 / math.sqrt(math.pi) * gp * math.sqrt(1 + al * gp**p), p, alpha=al)
            else:
                a.le(f"{t}:lower", math.sqrt(math.pi) / 2 * Jp, hp, p)
                a.le(f"{t}:upper", hp, 4 * Jp * (1 + al * 2.0**p * Jp**p), p, alpha=al)


def _weighted_bounds(a: _Auditor, d: AuditData, p_list, weights, c: float, tags: dict[str, str],
                third_factor):
    """Weighted bounds: heights, gaps, actions and masses within powers of c."""
    J = d.J
    hinf = weighted_norm(d.h, math.inf)
    for omega in weights:
        for p in p_list:
            if not 1 <= p <= 2:
                for key in ("h_min", "g_h", "g_J", "J_h", "g_mu"):
                    a.na(tags[key], "stated for p in [1, 2]", p, omega)
                continue
            q = conjugate(p)
            nrm = _norms(d, p, omega)
            gp, hp = nrm(d.g), nrm(d.h)
            al = tags["alpha"](p)
            t = tags["h_min"]
            if d.mu_plus is not None:
                a.le(f"{t}:mu+", hinf, 2 * math.pi * weighted_norm(d.mu_plus, math.inf), p, omega)
                a.le(f"{t}:mu-", hinf, 2 * math.pi * weighted_norm(d.mu_minus, math.inf), p, omega)
            else:
                a.na(f"{t}:mu+", "masses unavailable", p, omega)
                a.na(f"{t}:mu-", "masses unavailable", p, omega)
            if J is not None:
                a.le(f"{t}:J", hinf, nrm(J), p, omega)
            else:
                a.na(f"{t}:J", "actions unavailable", p, omega)
            a.le(f"{t}:g", hinf, third_factor(p) * gp * (1 + al * gp**p) ** _inv(q), p, omega, alpha=al)

            t = tags["g_h"]
            a.le(f"{t}:lower", gp, 2 * hp, p, omega)
            a.le(f"{t}:upper", 2 * hp, c**9 * gp, p, omega, c=c)
            t = tags["g_J"]
            t2 = tags["J_h"]
            if J is not None:
                Jp = nrm(J)
                a.le(f"{t}:lower", gp, 2 * Jp, p, omega)
                a.le(f"{t}:upper", 2 * Jp, c**5 * 2 * gp, p, omega, c=c)
                a.le(f"{t2}:lower", math.sqrt(math.pi) / 2 * Jp, hp, p, omega)
                a.le(f"{t2}:upper", hp, c**5 * math.sqrt(math.pi / 2) * Jp, p, omega, c=c)
            else:
                for tt in (t, t2):
                    a.na(f"{tt}:lower", "actions unavailable", p, omega)
                    a.na(f"{tt}:upper", "actions unavailable", p, omega)
            t = tags["g_mu"]
            for sgn, mu in (("+", d.mu_plus), ("-", d.mu_minus)):
                if mu is None:
                    a.na(f"{t}:mu{sgn}:lower", "masses unavailable", p, omega)
                    a.na(f"{t}:mu{sgn}:upper", "masses unavailable", p, omega)
                    continue
                mp = nrm(mu)
                a.le(f"{t}:mu{sgn}:lower", gp, 2 * mp, p, omega)
                a.le(f"{t}:mu{sgn}:upper", 2 * mp, c**18 * gp, p, omega, c=c)


def _alpha0(p: float) -> float:
    return 2.0 ** ((p + 3) * p) / math.pi if math.isfinite(p) else math.inf


def _alpha_comb(u_star: float):
    def alpha(p: float) -> float:
        if not math.isfinite(p):
            return math.inf
        if math.isinf(u_star):
            return 0.0
        return (2 + math.pi) ** p * 2.0 ** (p * (p + 2)) / (math.pi * u_star**p)
    return alpha


def audit_zs(summary: SpectralSummary, p_list=DEFAULT_P, weights=WEIGHTS,
             profile: GapProfile | None = None) -> AuditReport:
    """Operator-side bounds with u_* = pi, followed by every comb-side audit."""
    d = AuditData.from_summary(summary, profile)
    a = _Auditor(d, truncated=True)
    _zs_series(a, d, p_list, weights, summary)
    rep = AuditReport(a.entries, _provenance(d, summary))
    rep.extend(audit_comb(d, p_list, weights))
    return rep


def _zs_series(a: _Auditor, d: AuditData, p_list, weights, summary: SpectralSummary):
    _unweighted_bounds(a, d, p_list, math.pi,
                {"hp_g": "T1-1", "hp_gq": "T1-2", "J_g": "T1-3", "h_J": "T1-4"}, _alpha0)
    hinf = weighted_norm(d.h, math.inf)
    c0 = math.exp(hinf / math.pi)
    _weighted_bounds(a, d, p_list, weights, c0,
                {"h_min": "T2-1", "g_h": "T2-2", "g_J": "T2-3", "J_h": "T2-4", "g_mu": "T2-5",
                 "alpha": _alpha0},
                third_factor=lambda p: 2.0)

    ns = d.norm_sq
    if ns is None:
        for t in ("id", "T4-1[A]", "T4-1[B]", "T4-2", "T4-3", "T4-4:first", "T4-4:second"):
            a.na(t, "potential norm unavailable")
    else:
        m = summary.moments
        if m is not None:
            conv = m.id_convention
            if conv is None and ns.single == 0 and m.sum_A == 0:
                a.eq("id", m.sum_A, 0.0, note="V = 0: both norm conventions give 0", convention="A=B")
            else:
                chosen = ns.half_doubled if conv == "B" else ns.half_single
                a.eq("id", m.sum_A, chosen, convention=conv or "none",
                     residual_A=m.id_residual_A, residual_B=m.id_residual_B,
                     note=("sum A_n = ||V||^2/2 holds with ||V||^2 = 2 int (V1^2+V2^2)" if conv == "B" else
                           "sum A_n = ||V||^2/2 holds with ||V||^2 = int (V1^2+V2^2)" if conv == "A" else
                           "neither norm convention satisfies the identity"))
        a.le("T4-1[A]", hinf, math.sqrt(ns.single), convention="A")
        a.le("T4-1[B]", hinf, math.sqrt(ns.doubled), convention="B",
             note="convention matching the norm identity" if m is not None and m.id_convention == "B" else "")
        V2 = ns.single
        g1, h1 = weighted_norm(d.g, 1), weighted_norm(d.h, 1)
        for p in p_list:
            q = conjugate(p)
            hp, gq, gp = weighted_norm(d.h, p), weighted_norm(d.g, q), weighted_norm(d.g, p)
            a.le("T4-2", V2, 2 / math.pi * hp * gq, p, convention="A", q=q)
            if 1 <= p <= 2:
                a.le("T4-3", V2, (2 / math.pi) ** (2 * _inv(p)) * hp ** (2 * _inv(q)) * gp ** (2 * _inv(p)),
                     p, convention="A")
            else:
                a.na("T4-3", "stated for p in [1, 2]", p)
        a.le("T4-4:first", V2, 2 / math.pi * hinf * g1, convention="A")
        a.le("T4-4:second", 2 / math.pi * hinf * g1, 4 / math.pi**2 * g1**2)
    g1, h1 = weighted_norm(d.g, 1), weighted_norm(d.h, 1)
    a.le("T4-5:first", hinf, 2 / math.pi * g1)
    a.le("T4-5:second", g1, 2 * h1)


def _provenance(d: AuditData, summary: SpectralSummary | None = None) -> dict:
    prov = {"source": d.source, "window": d.window, "tail_indicator": d.tail,
            "u_star": d.u_star, "slack": SLACK}
    if summary is not None:
        prov.update(tol=summary.tol, ode_tol=summary.ode_tol,
                    label_offset_residual=summary.label_offset_residual,
                    label_ambiguous=summary.label_ambiguous,
                    asymptotic_n0=summary.asymptotic_n0)
    return prov


def audit_comb(data, p_list=DEFAULT_P, weights=WEIGHTS, u_star: float | None = None) -> AuditReport:
    """Comb-side bounds for gap/height/action data from any pipeline.

    ``data`` is an AuditData or a GapProfile; ``u_star`` overrides the
    data's own separation.
    """
    if isinstance(data, GapProfile):
        data = AuditData.from_profile(data)
    d = data
    us = d.u_star if u_star is None else u_star
    a = _Auditor(d, truncated=d.truncated)
    hinf = weighted_norm(d.h, math.inf)
    g1, h1 = weighted_norm(d.g, 1), weighted_norm(d.h, 1)
    g2, h2 = weighted_norm(d.g, 2), weighted_norm(d.h, 2)

    a.worst("1.3", d.g, 2 * d.h)

    if d.A is not None:
        A, J = d.A, d.J
        sumA = math.fsum(A)
        a.worst("2.30:lower-g2", d.g**2 / 4, A)
        a.worst("2.30:lower-gh", d.g * d.h / math.pi, A)
        a.worst("2.30:upper", A, 2 * d.g * d.h / math.pi)
        if d.Q0 is not None:
            a.le("1.5:g2", 0.25 * g2**2, 2 * d.Q0)
            a.eq("1.5:2Q0=I_D", 2 * d.Q0, d.I_D)
            a.eq("1.5:I_D=sumA", d.I_D, sumA)
        a.eq("1.5:sumA=J2", sumA, math.fsum(J**2))
        a.le("1.5:J2", math.fsum(J**2), 2 / math.pi * math.fsum(d.h * d.g))
    else:
        for t in ("2.30:lower-g2", "2.30:lower-gh", "2.30:upper", "1.5:sumA=J2", "1.5:J2"):
            a.na(t, "actions unavailable")

    if d.Q0 is not None:
        Q0, ID = d.Q0, d.I_D
        a.le("2.29", hinf**2 / 2, Q0)
        for p in p_list:
            q = conjugate(p)
            a.le("3.17", math.pi * Q0, weighted_norm(d.h, p) * weighted_norm(d.g, q), p, q=q)
            if 1 <= p <= 2:
                a.le("3.18", ID, (2 / math.pi) ** (2 * _inv(p)) * weighted_norm(d.h, p) ** (2 * _inv(q))
                     * weighted_norm(d.g, p) ** (2 * _inv(p)), p)
            else:
                a.na("3.18", "stated for p in [1, 2]", p)
        a.le("3.19:first", math.pi * Q0, hinf * g1)
        a.le("3.19:second", hinf * g1, 2 / math.pi * g1**2)
        a.le("3.6:first", math.pi / 4 * ID, h2**2)
    else:
        for t in ("2.29", "3.17", "3.18", "3.19:first", "3.6:first"):
            a.na(t, "Q0 unavailable")
        a.le("3.19:second", hinf * g1, 2 / math.pi * g1**2)
    a.le("3.20:first", hinf, 2 / math.pi * g1)
    a.le("3.20:second", g1, 2 * h1)

    if us is None or us <= 0:
        for t in ("2.2", "2.3", "2.4", "2.5", "2.6", "2.7", "2.8", "2.9", "2.10", "3.6:second",
                  "3.6:third", "3.7", "3.8", "3.33", "3.34", "3.35", "3.36", "2.16"):
            a.na(t, "u_* is not positive")
        return AuditReport(a.entries, _provenance(d))

    alpha = _alpha_comb(us)
    _unweighted_bounds(a, d, p_list, us, {"hp_g": "2.2", "hp_gq": "2.3", "J_g": "2.4", "h_J": "2.5"}, alpha)
    c = math.exp(hinf / us) if math.isfinite(us) else 1.0
    _weighted_bounds(a, d, p_list, weights, c,
                {"h_min": "2.6", "g_h": "2.7", "g_J": "2.8", "J_h": "2.9", "g_mu": "2.10", "alpha": alpha},
                third_factor=lambda p: 2 * math.pi ** -_inv(p))

    inv_us = 0.0 if math.isinf(us) else 1.0 / us
    if d.Q0 is not None:
        ID = d.I_D
        mid = math.pi**2 / 2 * max(1.0, hinf * inv_us) * ID
        a.le("3.6:second", h2**2, mid, u_star=us)
        a.le("3.6:third", mid, math.pi**2 / 2 * max(1.0, math.sqrt(ID) * inv_us) * ID, u_star=us)
    a.le("3.7:lower", 0.5 * g2, h2)
    a.le("3.7:upper", h2, math.pi * g2 * (1 + 2 * inv_us**2 * g2**2), u_star=us)
    if d.A is not None:
        J2 = weighted_norm(d.J, 2)
        a.le("3.8:lower", g2 / 2, J2)
        a.le("3.8:upper", J2, math.sqrt(2) * g2 * (1 + math.sqrt(2) * inv_us * g2), u_star=us)
    else:
        a.na("3.8:lower", "actions unavailable")
        a.na("3.8:upper", "actions unavailable")

    s = d.s
    if s is None or not math.isfinite(s) or not math.isfinite(us):
        a.na("3.33:lower", "needs at least two gaps (finite s and u_*)")
        a.na("3.33:upper", "needs at least two gaps (finite s and u_*)")
    else:
        a.le("3.33:lower", s, us, s=s)
        a.le("3.33:upper", us, math.pi * s / 2 * max(math.e**2, c ** (5 * math.pi / 2)), s=s, c=c)
    ratio = 0.0 if s is None or math.isinf(s) else 2 * hinf / (s * math.pi)
    if s is None:
        a.na("3.34", "band lengths unavailable")
    else:
        a.le("3.34", 1 + ratio, c**9, s=s, c=c)
    if d.y_max is not None and s is not None:
        a.worst("3.35", d.y_max, np.full(d.y_max.shape, ratio), s=s)
        a.worst("3.36:first", 2 * d.h, d.g * (1 + d.y_max))
        a.worst("3.36:second", d.g * (1 + d.y_max), d.g * (1 + ratio), s=s)
    else:
        a.na("3.35", "Y_n unavailable (no gap profile)")
        a.na("3.36:first", "Y_n unavailable (no gap profile)")
        a.na("3.36:second", "Y_n unavailable (no gap profile)")
    if s is not None:
        a.worst("3.36:third", d.g * (1 + ratio), d.g * c**9, c=c)
    a.worst("3.36:outer", 2 * d.h, d.g * c**9, c=c)

    if d.u is not None and d.Q0 is not None:
        comb = Comb(tuple(d.u), tuple(d.h))
        ht = np.array(greedy_select(comb).h)
        ht2 = math.fsum(ht**2)
        a.le("2.16:lower", ht2 / math.pi**2, d.Q0, selected=int(np.count_nonzero(ht)))
        a.le("2.16:upper", d.Q0, 2 * math.sqrt(2) / math.pi * ht2)
    else:
        a.na("2.16:lower", "abscissas or Q0 unavailable")
        a.na("2.16:upper", "abscissas or Q0 unavailable")

    slits = [i for i, x in enumerate(d.h) if x > 0]
    if len(slits) == 1 and d.Q0 is not None and abs(d.Q0 - d.h[slits[0]] ** 2 / 2) <= SLACK * d.Q0:
        i = slits[0]
        a.le("2.28", single_slit_nu(d.h[i]), d.h[i], n=int(d.labels[i]))
    else:
        a.na("2.28", "tip mass is explicit only for a single slit")
    return AuditReport(a.entries, _provenance(d))
