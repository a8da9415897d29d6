"""Periodic Zakharov-Shabat spectra, action variables, comb maps and inequality audits."""

from __future__ import annotations

from .audit import AuditData, AuditEntry, AuditReport, audit_comb, audit_zs, weighted_norm
from .bands import GapRecord, SpectralSummary, compute_heights, find_band_edges
from .comb import (
    AhlforsFunction,
    Comb,
    GapConfiguration,
    GapProfile,
    capacity_segments,
    greedy_select,
    lindelof_check,
    single_slit_map,
    solve_gap_profile,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    InconsistencyError,
    InputError,
    IntegrationError,
    LabelingError,
    QuadratureError,
    ZSError,
)
from .monodromy import discriminant, integrate_monodromy
from .potential import PotentialSpec, potential_norm_sq
from .quasimomentum import action, analyze_potential, compute_actions, effective_masses, gap_v, moments

__version__ = "0.1.0"

__all__ = [
    "AhlforsFunction", "AuditData", "AuditEntry", "AuditReport", "Comb", "ConfigError",
    "ConvergenceError", "GapConfiguration", "GapProfile", "GapRecord", "InconsistencyError",
    "InputError", "IntegrationError", "LabelingError", "PotentialSpec", "QuadratureError",
    "SpectralSummary", "ZSError", "action", "analyze_potential", "audit_comb", "audit_zs",
    "capacity_segments", "compute_actions", "compute_heights", "discriminant", "effective_masses",
    "find_band_edges", "gap_v", "greedy_select", "integrate_monodromy", "lindelof_check",
    "moments", "potential_norm_sq", "single_slit_map", "solve_gap_profile", "weighted_norm",
]
