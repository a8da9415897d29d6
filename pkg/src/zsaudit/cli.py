"""Command-line front end.

Exit status: 0 when every requested audit passes (or none was requested),
2 when at least one audit link fails, 1 on configuration or numerical errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .audit import AuditData, AuditReport, audit_comb, audit_zs, fmt, jsonable
from .bands import SpectralSummary
from .comb import GapConfiguration, GapProfile, solve_gap_profile
from .config import RunConfig, build, load_config, parse_p, sweep_potentials, validate
from .errors import ConfigError, ConvergenceError, InputError, ZSError
from .quasimomentum import analyze_potential

ENV_OUT = "ZSAUDIT_OUT"
SUMMARY_COLUMNS = ["n", "z_minus", "z_plus", "z_crit", "h", "gap_length", "A", "J",
                   "mu_plus", "mu_minus", "e_charge", "d_moment"]
COMB_COLUMNS = ["n", "z_minus", "z_plus", "z_crit", "u", "h", "gap_length", "A", "J",
                "mu_plus", "mu_minus", "y_minus", "y_plus"]

EXIT_OK, EXIT_ERROR, EXIT_AUDIT = 0, 1, 2


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def summary_csv(summary: SpectralSummary) -> str:
    acts = {r.n: r for r in summary.actions}
    rows = []
    for g in summary.gaps:
        r = acts.get(g.n)
        rows.append([g.n, g.z_minus, g.z_plus, g.z_crit, g.h, g.length,
                     r.A if r else None, r.J if r else None,
                     r.mu_plus if r else None, r.mu_minus if r else None,
                     r.e_charge if r else None, r.d_moment if r else None])
    return _csv(rows, SUMMARY_COLUMNS)


def summary_json(summary: SpectralSummary) -> str:
    m = summary.moments
    doc = {
        "potential": summary.potential.to_dict() if summary.potential else None,
        "source": summary.potential.digest() if summary.potential else "",
        "window": summary.window,
        "tol": summary.tol,
        "ode_tol": summary.ode_tol,
        "tail_indicator": summary.tail_indicator,
        "label_offset_residual": summary.label_offset_residual,
        "label_ambiguous": summary.label_ambiguous,
        "asymptotic_n0": summary.asymptotic_n0,
        "moments": None if m is None else {
            "Q0": m.Q0, "I_D": m.I_D, "sum_A": m.sum_A, "J_norm_sq": m.J_norm_sq,
            "normSqHalf_conventionA": m.normSqHalf_conventionA,
            "normSqHalf_conventionB": m.normSqHalf_conventionB,
            "id_residual_A": m.id_residual_A, "id_residual_B": m.id_residual_B,
            "id_convention": m.id_convention,
        },
        "unreliable_masses": [r.n for r in summary.actions if not r.mass_reliable],
        "gap_errors": {str(g.n): g.error for g in summary.gaps if g.error},
    }
    return json.dumps(jsonable(doc), indent=2, allow_nan=False) + "\n"


def comb_csv(prof: GapProfile) -> str:
    c = prof.config
    rows = []
    for i, n in enumerate(c.labels):
        a = float(prof.A[i])
        rows.append([n, c.gaps[i][0], c.gaps[i][1], prof.z_crit[i], prof.u[i], prof.h[i],
                     c.lengths[i], a, a**0.5, prof.mu_plus[i], prof.mu_minus[i],
                     prof.y_minus[i], prof.y_plus[i]])
    return _csv(rows, COMB_COLUMNS)


def write_profiles(prof: GapProfile, out: Path) -> None:
    xs, vs = prof.nodes, prof.values
    for i, n in enumerate(prof.config.labels):
        a, b = prof.config.gaps[i]
        rows = [[a, 0.0]] + [[x, v] for x, v in zip(xs[i], vs[i])] + [[b, 0.0]]
        _write(out / f"profile_{n}.csv", _csv(rows, ["x", "v"]))


def _profile_for(summary: SpectralSummary, max_iter: int) -> GapProfile | None:
    """Gap profile of the open gaps, used for the Y_n audits; None if it does not converge."""
    open_gaps = [g for g in summary.gaps if not g.is_closed]
    if not open_gaps:
        return None
    cfg = GapConfiguration(tuple((g.z_minus, g.z_plus) for g in open_gaps), tuple(g.n for g in open_gaps))
    try:
        return solve_gap_profile(cfg, max_iter=max_iter)
    except ConvergenceError:
        return None


def _write_report(rep: AuditReport, out: Path) -> None:
    _write(out / "audit.json", rep.to_json())
    _write(out / "audit.csv", rep.to_csv())


def _audit_potential(cfg: RunConfig, pot, out: Path) -> AuditReport:
    summary = analyze_potential(pot, cfg.n_window, cfg.tol)
    _write(out / "summary.csv", summary_csv(summary))
    _write(out / "summary.json", summary_json(summary))
    prof = _profile_for(summary, cfg.max_iter)
    if cfg.profiles and prof is not None:
        write_profiles(prof, out / "profiles")
    rep = audit_zs(summary, cfg.p_list, cfg.weights, profile=prof)
    _write_report(rep, out)
    return rep


def run(cfg: RunConfig, out: Path) -> int:
    if cfg.mode == "analyze-potential":
        summary = analyze_potential(cfg.potential, cfg.n_window, cfg.tol)
        _write(out / "summary.csv", summary_csv(summary))
        _write(out / "summary.json", summary_json(summary))
        if cfg.profiles:
            prof = _profile_for(summary, cfg.max_iter)
            if prof is not None:
                write_profiles(prof, out / "profiles")
        return EXIT_OK

    if cfg.mode == "analyze-comb":
        if cfg.gaps is not None:
            prof = solve_gap_profile(cfg.gaps, max_iter=cfg.max_iter)
            _write(out / "comb_summary.csv", comb_csv(prof))
            if cfg.profiles:
                write_profiles(prof, out / "profiles")
        return EXIT_OK

    if cfg.mode == "audit":
        if cfg.potential is not None:
            rep = _audit_potential(cfg, cfg.potential, out)
        elif cfg.gaps is not None:
            prof = solve_gap_profile(cfg.gaps, max_iter=cfg.max_iter)
            _write(out / "comb_summary.csv", comb_csv(prof))
            if cfg.profiles:
                write_profiles(prof, out / "profiles")
            rep = audit_comb(prof, cfg.p_list, cfg.weights)
            _write_report(rep, out)
        else:
            rep = audit_comb(cfg.comb, cfg.p_list, cfg.weights)
            _write_report(rep, out)
        _report_failures(rep)
        return EXIT_OK if rep.ok else EXIT_AUDIT

    # sweep
    rows = []
    status = EXIT_OK
    for i, (value, pot) in enumerate(sweep_potentials(cfg)):
        rep = _audit_potential(cfg, pot, out / f"sweep_{i:03d}")
        c = rep.counts()
        rows.append([i, cfg.sweep_parameter, value, c["pass"], c["fail"], c["not-applicable"],
                     "pass" if rep.ok else "fail"])
        if not rep.ok:
            status = EXIT_AUDIT
            _report_failures(rep, prefix=f"sweep {i} ({cfg.sweep_parameter}={value!r}): ")
    _write(out / "sweep.csv", _csv(rows, ["index", "parameter", "value", "pass", "fail",
                                          "not_applicable", "status"]))
    return status


def _report_failures(rep: AuditReport, prefix: str = "") -> None:
    for e in rep.failures:
        print(f"{prefix}audit failure {e.id} p={fmt(e.p) or '-'} omega={e.omega}: "
              f"lhs={fmt(e.lhs)} rhs={fmt(e.rhs)}", file=sys.stderr)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zsaudit", description=__doc__.splitlines()[0])
    ap.add_argument("--config", required=True, help="TOML run configuration")
    ap.add_argument("--out", help=f"output directory (default: ${ENV_OUT} or ./zsaudit-out)")
    ap.add_argument("--mode", choices=["analyze-potential", "analyze-comb", "audit", "sweep"])
    ap.add_argument("--n-window", type=int, help="index window N (gaps -N..N)")
    ap.add_argument("--tol", type=float, help="integration / root tolerance")
    ap.add_argument("--p-list", help="comma-separated exponents, e.g. 1,2,inf")
    ap.add_argument("--weights", help="comma-separated weight tags: unit,linear")
    ap.add_argument("--validate-only", action="store_true", help="check the configuration and exit")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        raw = load_config(args.config)
        p_list = None
        if args.p_list is not None:
            try:
                p_list = [parse_p(x) for x in args.p_list.split(",")]
            except ValueError as exc:
                raise ConfigError("p_list", f"cannot parse {args.p_list!r}") from exc
        weights = args.weights.split(",") if args.weights is not None else None
        overrides = dict(mode=args.mode, n_window=args.n_window, tol=args.tol,
                         p_list=p_list, weights=weights)
        if args.validate_only:
            merged = dict(raw, **{k: v for k, v in overrides.items() if v is not None})
            diags = validate(merged)
            for d in diags:
                print(d, file=sys.stderr)
            return EXIT_ERROR if diags else EXIT_OK
        cfg = build(raw, **overrides)
    except ConfigError as exc:
        for d in getattr(exc, "diagnostics", [str(exc)]):
            print(f"config error: {d}", file=sys.stderr)
        return EXIT_ERROR

    out = Path(args.out or os.environ.get(ENV_OUT) or "zsaudit-out")
    try:
        return run(cfg, out)
    except (ZSError, InputError) as exc:
        print(f"computation error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
