from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import summary_for
from zsaudit import PotentialSpec, action, effective_masses, gap_v, moments
from zsaudit.errors import InconsistencyError


@pytest.mark.parametrize("a", [0.5, 1.0])
def test_v_is_semicircle_for_constant(a):
    s = summary_for(f"const-{a}", 2, PotentialSpec.constant(a))
    g = s.gap(0)
    assert gap_v(PotentialSpec.constant(a), g, 0.0) == pytest.approx(a, rel=1e-9)
    x = np.linspace(-0.99 * a, 0.99 * a, 17)
    v = gap_v(PotentialSpec.constant(a), g, x)
    assert np.max(np.abs(v - np.sqrt(a * a - x * x))) < 1e-7


def test_action_and_masses_constant():
    pot = PotentialSpec.constant(1.0)
    g = summary_for("const-1", 3).gap(0)
    A, J = action(pot, g)
    assert A == pytest.approx(1.0, rel=1e-10) and J == pytest.approx(1.0, rel=1e-10)
    mp, mm = effective_masses(pot, g)
    assert mp == pytest.approx(1.0, rel=1e-9) and mm == pytest.approx(-1.0, rel=1e-9)


def test_closed_gap_conventions():
    pot = PotentialSpec.constant(1.0)
    g = summary_for("const-1", 3).gap(2)
    assert g.is_closed
    assert action(pot, g) == (0.0, 0.0)
    assert effective_masses(pot, g) == (0.0, 0.0)
    with pytest.raises(InconsistencyError):
        gap_v(pot, g, g.z_crit)


def test_gap_v_rejects_points_outside():
    g = summary_for("const-1", 3).gap(0)
    with pytest.raises(InconsistencyError):
        gap_v(PotentialSpec.constant(1.0), g, 1.5)


@pytest.mark.parametrize("name", ["cos-0.3", "cos-1", "const-0.1"])
def test_action_bounds_and_mass_bounds(name):
    s = summary_for(name, 3)
    for g, r in zip(s.gaps, s.actions):
        assert r.n == g.n
        if g.is_closed:
            assert r.A == 0 and r.mu_plus == 0 and r.mu_minus == 0
            continue
        assert r.mass_reliable
        assert r.mu_plus > 0 > r.mu_minus
        slack = 1 + 1e-8
        assert max(g.length**2 / 4, g.length * g.h / math.pi) <= r.A * slack
        assert r.A <= 2 * g.length * g.h / math.pi * slack
        assert g.h <= 2 * math.pi * min(r.abs_mu_plus, r.abs_mu_minus) * slack
        assert r.mu_plus_fit == pytest.approx(r.mu_plus, rel=1e-4)


def test_moments_constant_and_zero():
    m = summary_for("const-1", 3).moments
    assert m.Q0 == pytest.approx(0.5, rel=1e-10) and m.I_D == pytest.approx(1.0, rel=1e-10)
    z = summary_for("zero", 3).moments
    assert z.Q0 == 0 and z.I_D == 0 and z.id_convention is None


@pytest.mark.parametrize("name", ["const-1", "cos-0.3", "cos-1"])
def test_norm_identity_names_one_convention(name):
    m = summary_for(name, 8).moments
    assert m.id_convention == "B"
    assert abs(m.id_residual_B) <= 1e-8 * max(1.0, m.sum_A)
    assert abs(m.id_residual_A) > 1e-8 * max(1.0, m.sum_A)


def test_moments_requires_actions():
    s = summary_for("const-1", 3)
    empty = type(s)(window=s.window, gaps=s.gaps, tol=s.tol, ode_tol=s.ode_tol, potential=s.potential,
                    label_offset_residual=0.0, label_ambiguous=False, asymptotic_n0=None)
    with pytest.raises(ValueError):
        moments(empty)


def test_heights_bounded_by_q0():
    for name in ("cos-0.1", "cos-1", "const-1"):
        s = summary_for(name, 3)
        assert max(s.heights) ** 2 / 2 <= s.moments.Q0 * (1 + 1e-8)
