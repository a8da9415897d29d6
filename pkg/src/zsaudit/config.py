"""Run configuration: a TOML file with a versioned schema.

Example::

    schema_version = 1
    mode = "audit"            # analyze-potential | analyze-comb | audit | sweep
    n_window = 3
    tol = 1e-10
    p_list = [1, 1.5, 2, 3, "inf"]
    weights = ["unit", "linear"]
    profiles = false

    [potential]
    kind = "fourier"          # zero | constant-offdiagonal | fourier | sampled
    v2_cos = [0.0, 0.3]

Exactly one of ``[potential]``, ``[gaps]`` (``intervals``, optional ``labels``)
or ``[comb]`` (``g``, ``h`` and optional ``labels``, ``A``, ``mu_plus``,
``mu_minus``, ``u``, ``u_star``, ``s``, ``y_max``, ``Q0``) is required. A
sweep adds ``[sweep]`` with ``parameter`` (a potential key, list entries as
``v2_cos[1]``) and ``values``.
"""

from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass, field

from .audit import DEFAULT_P, WEIGHTS, AuditData
from .comb import GapConfiguration
from .errors import ConfigError, InputError
from .potential import KINDS, PotentialSpec

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

SCHEMA_VERSION = 1
MODES = ("analyze-potential", "analyze-comb", "audit", "sweep")
TOP_KEYS = {"schema_version", "mode", "n_window", "tol", "p_list", "weights", "profiles",
            "potential", "gaps", "comb", "sweep"}
POTENTIAL_KEYS = {
    "zero": set(),
    "constant-offdiagonal": {"a"},
    "fourier": {"v1_cos", "v1_sin", "v2_cos", "v2_sin"},
    "sampled": {"v1", "v2"},
}
COMB_ARRAYS = ("labels", "g", "h", "A", "mu_plus", "mu_minus", "u", "y_max")
COMB_SCALARS = ("u_star", "s", "Q0")


@dataclass
class RunConfig:
    mode: str
    potential: PotentialSpec | None = None
    gaps: GapConfiguration | None = None
    comb: AuditData | None = None
    n_window: int = 3
    tol: float = 1e-10
    p_list: tuple[float, ...] = DEFAULT_P
    weights: tuple[str, ...] = WEIGHTS
    profiles: bool = False
    max_iter: int = 1000
    sweep_parameter: str | None = None
    sweep_values: tuple[float, ...] = ()
    raw: dict = field(default_factory=dict, repr=False)


def load_config(path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("config", f"not valid TOML: {exc}") from exc


def _is_num(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _num_list(x) -> bool:
    return isinstance(x, list) and all(_is_num(v) for v in x)


def parse_p(x) -> float:
    if isinstance(x, str) and x.strip().lower() in ("inf", "infinity", "oo"):
        return math.inf
    if _is_num(x):
        return float(x)
    if isinstance(x, str):
        return float(x)
    raise ValueError(x)


def _check_potential(pot, diags: list[str], prefix="potential") -> None:
    if not isinstance(pot, dict):
        diags.append(f"{prefix}: must be a table")
        return
    kind = pot.get("kind")
    if kind is None:
        diags.append(f"{prefix}.kind: missing (expected one of {', '.join(KINDS)})")
        return
    if kind not in KINDS:
        diags.append(f"{prefix}.kind: unknown kind {kind!r} (expected one of {', '.join(KINDS)})")
        return
    allowed = POTENTIAL_KEYS[kind] | {"kind"}
    for key in sorted(set(pot) - allowed):
        diags.append(f"{prefix}.{key}: not a parameter of kind {kind!r}")
    if kind == "constant-offdiagonal":
        if "a" not in pot:
            diags.append(f"{prefix}.a: missing")
        elif not _is_num(pot["a"]) or not math.isfinite(pot["a"]):
            diags.append(f"{prefix}.a: must be a finite number")
    elif kind == "fourier":
        for key in POTENTIAL_KEYS["fourier"]:
            if key in pot and not _num_list(pot[key]):
                diags.append(f"{prefix}.{key}: must be a list of numbers")
    elif kind == "sampled":
        for key in ("v1", "v2"):
            if key not in pot:
                diags.append(f"{prefix}.{key}: missing")
            elif not _num_list(pot[key]):
                diags.append(f"{prefix}.{key}: must be a list of numbers")
        if _num_list(pot.get("v1")) and _num_list(pot.get("v2")):
            if len(pot["v1"]) != len(pot["v2"]):
                diags.append(f"{prefix}.v2: must have as many nodes as v1")
            elif len(pot["v1"]) < 2:
                diags.append(f"{prefix}.v1: needs at least 2 nodes")


def validate(raw: dict) -> list[str]:
    """Schema diagnostics as ``"key: message"`` strings; empty when the file is valid."""
    diags: list[str] = []
    if not isinstance(raw, dict):
        return ["config: top level must be a table"]
    for key in sorted(set(raw) - TOP_KEYS):
        diags.append(f"{key}: unknown key")
    ver = raw.get("schema_version")
    if ver is None:
        diags.append("schema_version: missing")
    elif ver != SCHEMA_VERSION:
        diags.append(f"schema_version: unsupported version {ver!r} (expected {SCHEMA_VERSION})")
    mode = raw.get("mode")
    if mode is None:
        diags.append("mode: missing")
    elif mode not in MODES:
        diags.append(f"mode: unknown mode {mode!r} (expected one of {', '.join(MODES)})")

    n = raw.get("n_window", 3)
    if not isinstance(n, int) or isinstance(n, bool):
        diags.append("n_window: must be an integer")
    elif n < 1:
        diags.append("n_window: must be >= 1")
    tol = raw.get("tol", 1e-10)
    if not _is_num(tol) or not (0 < tol < 1e-2):
        diags.append("tol: must be a number in (0, 1e-2)")
    if "p_list" in raw:
        pl = raw["p_list"]
        if not isinstance(pl, list) or not pl:
            diags.append("p_list: must be a non-empty list")
        else:
            for i, x in enumerate(pl):
                try:
                    if parse_p(x) < 1:
                        diags.append(f"p_list[{i}]: p must be >= 1")
                except (ValueError, TypeError):
                    diags.append(f"p_list[{i}]: not a number or 'inf'")
    if "weights" in raw:
        w = raw["weights"]
        if not isinstance(w, list) or not w or any(x not in WEIGHTS for x in w):
            diags.append(f"weights: must be a non-empty list drawn from {list(WEIGHTS)}")
    if "profiles" in raw and not isinstance(raw["profiles"], bool):
        diags.append("profiles: must be true or false")

    inputs = [k for k in ("potential", "gaps", "comb") if k in raw]
    if len(inputs) != 1:
        diags.append(f"input: exactly one of [potential], [gaps], [comb] is required (found {inputs or 'none'})")
    if "potential" in raw:
        _check_potential(raw["potential"], diags)
    if "gaps" in raw:
        gp = raw["gaps"]
        if not isinstance(gp, dict):
            diags.append("gaps: must be a table")
        else:
            ivs = gp.get("intervals")
            if ivs is None:
                diags.append("gaps.intervals: missing")
            elif not isinstance(ivs, list) or not ivs or not all(_num_list(iv) and len(iv) == 2 for iv in ivs):
                diags.append("gaps.intervals: must be a non-empty list of [z_minus, z_plus] pairs")
            else:
                try:
                    GapConfiguration(tuple(tuple(iv) for iv in ivs), gp.get("labels"))
                except (InputError, TypeError, ValueError) as exc:
                    diags.append(f"gaps.intervals: {exc}")
            if "max_iter" in gp and (not isinstance(gp["max_iter"], int) or gp["max_iter"] < 1):
                diags.append("gaps.max_iter: must be a positive integer")
    if "comb" in raw:
        cb = raw["comb"]
        if not isinstance(cb, dict):
            diags.append("comb: must be a table")
        else:
            for key in sorted(set(cb) - set(COMB_ARRAYS) - set(COMB_SCALARS)):
                diags.append(f"comb.{key}: unknown key")
            for key in ("g", "h"):
                if key not in cb:
                    diags.append(f"comb.{key}: missing")
            for key in COMB_ARRAYS:
                if key in cb and not _num_list(cb[key]):
                    diags.append(f"comb.{key}: must be a list of numbers")
            for key in COMB_SCALARS:
                if key in cb and not _is_num(cb[key]):
                    diags.append(f"comb.{key}: must be a number")
            if _num_list(cb.get("g")) and _num_list(cb.get("h")):
                m = len(cb["g"])
                for key in COMB_ARRAYS:
                    if _num_list(cb.get(key)) and len(cb[key]) != m:
                        diags.append(f"comb.{key}: length {len(cb[key])} differs from comb.g length {m}")
    if mode == "sweep":
        sw = raw.get("sweep")
        if not isinstance(sw, dict):
            diags.append("sweep: table required in sweep mode")
        else:
            if "potential" not in raw:
                diags.append("sweep: sweeps run over a [potential]")
            par = sw.get("parameter")
            vals = sw.get("values")
            if not isinstance(par, str):
                diags.append("sweep.parameter: missing")
            elif isinstance(raw.get("potential"), dict):
                try:
                    _apply_sweep(raw["potential"], par, 0.0)
                except ConfigError as exc:
                    diags.append(str(exc))
            if not _num_list(vals) or not vals:
                diags.append("sweep.values: must be a non-empty list of numbers")
    elif "sweep" in raw:
        diags.append("sweep: only allowed in sweep mode")
    if mode == "analyze-potential" and "potential" not in raw:
        diags.append("potential: analyze-potential needs a [potential]")
    if mode == "analyze-comb" and not ({"gaps", "comb"} & set(raw)):
        diags.append("gaps: analyze-comb needs [gaps] or [comb]")
    return diags


_ITEM = re.compile(r"^([a-z0-9_]+)(?:\[(\d+)\])?$")


def _apply_sweep(pot: dict, parameter: str, value: float) -> dict:
    """Copy of a potential table with one parameter replaced."""
    m = _ITEM.match(parameter)
    if not m:
        raise ConfigError("sweep.parameter", f"cannot parse {parameter!r}")
    key, idx = m.group(1), m.group(2)
    kind = pot.get("kind")
    if key not in POTENTIAL_KEYS.get(kind, set()):
        raise ConfigError("sweep.parameter", f"{key!r} is not a parameter of kind {kind!r}")
    out = dict(pot)
    if idx is None:
        if key != "a":
            raise ConfigError("sweep.parameter", f"{key!r} is a list; select an entry as {key}[i]")
        out[key] = value
    else:
        i = int(idx)
        lst = list(out.get(key, []))
        lst.extend([0.0] * (i + 1 - len(lst)))
        lst[i] = value
        out[key] = lst
    return out


def potential_from_table(pot: dict) -> PotentialSpec:
    kind = pot["kind"]
    if kind == "zero":
        return PotentialSpec.zero()
    if kind == "constant-offdiagonal":
        return PotentialSpec.constant(pot["a"])
    if kind == "fourier":
        return PotentialSpec.fourier(pot.get("v1_cos", ()), pot.get("v1_sin", ()),
                                     pot.get("v2_cos", ()), pot.get("v2_sin", ()))
    return PotentialSpec.sampled(pot["v1"], pot["v2"])


def _comb_from_table(cb: dict) -> AuditData:
    m = len(cb["g"])
    labels = cb.get("labels", list(range(m)))
    u = cb.get("u")
    u_star = cb.get("u_star")
    if u_star is None and u is not None:
        u_star = min((b - a for a, b in zip(u, u[1:])), default=math.inf)
    return AuditData(
        labels=labels, g=cb["g"], h=cb["h"], A=cb.get("A"), mu_plus=cb.get("mu_plus"),
        mu_minus=cb.get("mu_minus"), u=u, u_star=u_star, s=cb.get("s"), y_max=cb.get("y_max"),
        Q0=cb.get("Q0"), source="comb-table",
    )


def build(raw: dict, *, mode=None, n_window=None, tol=None, p_list=None, weights=None) -> RunConfig:
    """Validated RunConfig; command-line overrides are applied before validation."""
    raw = dict(raw)
    if mode is not None:
        raw["mode"] = mode
    if n_window is not None:
        raw["n_window"] = n_window
    if tol is not None:
        raw["tol"] = tol
    if p_list is not None:
        raw["p_list"] = p_list
    if weights is not None:
        raw["weights"] = weights
    diags = validate(raw)
    if diags:
        key, _, msg = diags[0].partition(": ")
        err = ConfigError(key, msg)
        err.diagnostics = diags
        raise err
    cfg = RunConfig(
        mode=raw["mode"],
        n_window=raw.get("n_window", 3),
        tol=float(raw.get("tol", 1e-10)),
        p_list=tuple(parse_p(x) for x in raw.get("p_list", DEFAULT_P)),
        weights=tuple(raw.get("weights", WEIGHTS)),
        profiles=raw.get("profiles", False),
        raw=raw,
    )
    if "potential" in raw:
        cfg.potential = potential_from_table(raw["potential"])
    if "gaps" in raw:
        gp = raw["gaps"]
        cfg.gaps = GapConfiguration(tuple(tuple(iv) for iv in gp["intervals"]), gp.get("labels"))
        cfg.max_iter = gp.get("max_iter", 1000)
    if "comb" in raw:
        cfg.comb = _comb_from_table(raw["comb"])
    if cfg.mode == "sweep":
        cfg.sweep_parameter = raw["sweep"]["parameter"]
        cfg.sweep_values = tuple(float(v) for v in raw["sweep"]["values"])
    return cfg


def sweep_potentials(cfg: RunConfig) -> list[tuple[float, PotentialSpec]]:
    pot = cfg.raw["potential"]
    return [(v, potential_from_table(_apply_sweep(pot, cfg.sweep_parameter, v))) for v in cfg.sweep_values]
