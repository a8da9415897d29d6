from __future__ import annotations

import math

import numpy as np
import pytest

from zsaudit import PotentialSpec, analyze_potential

# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE: dict[int, tuple[bool, str]] = {}

FAMILIES = {
    "zero": PotentialSpec.zero(),
    "const-0.1": PotentialSpec.constant(0.1),
    "const-1": PotentialSpec.constant(1.0),
    "cos-0.1": PotentialSpec.fourier(v2_cos=(0.0, 0.1)),
    "cos-0.3": PotentialSpec.fourier(v2_cos=(0.0, 0.3)),
    "cos-1": PotentialSpec.fourier(v2_cos=(0.0, 1.0)),
}

_CACHE: dict = {}


def summary_for(name: str, N: int, pot: PotentialSpec | None = None):
    """Cached full analysis of a named potential over the window -N..N."""
    key = (name, N)
    if key not in _CACHE:
        _CACHE[key] = analyze_potential(pot if pot is not None else FAMILIES[name], N)
    return _CACHE[key]


@pytest.fixture
def record_criterion():
    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE[number] = (bool(ok), detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")


def rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


__all__ = ["FAMILIES", "summary_for", "rel", "math"]
