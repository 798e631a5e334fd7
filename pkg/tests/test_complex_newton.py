"""Complex classical trajectories: Wronskian, Riccati link, observable map."""

import math

import numpy as np
import pytest

from gwpdyn import (
    Centroid,
    ConstantFrequency,
    ErmakovState,
    LambdaState,
    PiecewiseConstantFrequency,
    SystemSpec,
    UncertaintyTriple,
    WronskianError,
    ZeroCentroidError,
    ermakov_from_uncertainties,
    uncertainties_from_ermakov,
)
from gwpdyn.complex_newton import (
    integrate_lambda,
    invariant_observable_form,
    lambda_from_observables,
    lambda_r_from_eta_alpha,
    phase_angles,
    riccati_from_lambda,
    width_lambda_initial,
)
from gwpdyn.ermakov import ermakov_invariant, integrate_ermakov, integrate_joint
from gwpdyn.riccati import integrate_riccati

S = SystemSpec(omega=ConstantFrequency(1.0))
S_FREE = SystemSpec(omega=ConstantFrequency(0.0))


def test_width_initial_state():
    l0 = width_lambda_initial(ErmakovState(2.0, 0.5))
    assert (l0.lambda_r, l0.lambda_i) == (2.0, 0.0)
    assert (l0.lambda_r_dot, l0.lambda_i_dot) == (0.5, 0.5)
    assert math.isclose(l0.wronskian, 1.0, rel_tol=1e-15)


def test_coherent_width_traces_unit_circle():
    t = np.linspace(0.0, 4.0 * math.pi, 401)
    ls = integrate_lambda(S, width_lambda_initial(ErmakovState(1.0, 0.0)), t)
    for ti, l in zip(t, ls):
        assert abs(l.lambda_r - math.cos(ti)) < 1e-10
        assert abs(l.lambda_i - math.sin(ti)) < 1e-10
        # C = d(lambda)/dt / lambda stays pinned at +i
        r = riccati_from_lambda(l)
        assert abs(r.c_r) < 1e-10 and abs(r.c_i - 1.0) < 1e-10


def test_free_motion_riccati_from_lambda():
    t = np.linspace(0.0, 5.0, 26)
    ls = integrate_lambda(S_FREE, width_lambda_initial(ErmakovState(1.0, 0.0)), t)
    for ti, l in zip(t, ls):
        r = riccati_from_lambda(l)
        denom = 1.0 + ti * ti
        assert abs(r.c_r - ti / denom) < 1e-10
        assert abs(r.c_i - 1.0 / denom) < 1e-10


@pytest.mark.parametrize("profile", [
    ConstantFrequency(1.0),
    ConstantFrequency(0.0),
    PiecewiseConstantFrequency(((0.0, 1.0), (5.0, 2.0))),
])
def test_wronskian_is_conserved(profile):
    s = SystemSpec(omega=profile)
    t = np.linspace(0.0, 10.0 * math.pi, 1001)
    e0 = ermakov_from_uncertainties(s, UncertaintyTriple(1.0, 0.5, 0.5))
    ls = integrate_lambda(s, width_lambda_initial(e0), t)
    drift = max(abs(l.wronskian - 1.0) for l in ls)
    assert drift < 1e-9


def test_lambda_route_matches_riccati_route():
    t = np.linspace(0.0, 4.0 * math.pi, 401)
    e0 = ermakov_from_uncertainties(S, UncertaintyTriple(1.0, 0.25, 0.0))
    ls = integrate_lambda(S, width_lambda_initial(e0), t)
    from gwpdyn import riccati_from_ermakov
    rs = integrate_riccati(S, riccati_from_ermakov(e0), t)
    for l, r in zip(ls, rs):
        lr = riccati_from_lambda(l)
        assert abs(lr.c_r - r.c_r) < 1e-7
        assert abs(lr.c_i - r.c_i) < 1e-7


def test_lambda_modulus_equals_amplitude():
    t = np.linspace(0.0, 2.0 * math.pi, 201)
    e0 = ermakov_from_uncertainties(S, UncertaintyTriple(1.0, 0.5, -0.5))
    ls = integrate_lambda(S, width_lambda_initial(e0), t)
    es = integrate_ermakov(S, e0, t)
    for l, e in zip(ls, es):
        assert abs(abs(l.value) - e.alpha) < 1e-8


def test_lambda_r_from_centroid_and_amplitude():
    # coherent packet launched from x = 1: eta = cos t, alpha = 1, I = 1/2
    t = np.linspace(0.0, 2.0 * math.pi, 101)
    cs, es = integrate_joint(S, Centroid(1.0, 0.0), ErmakovState(1.0, 0.0), t)
    inv = ermakov_invariant(S, cs[0], es[0])
    assert math.isclose(inv, 0.5, rel_tol=1e-12)
    for ti, c, e in zip(t, cs, es):
        lr = lambda_r_from_eta_alpha(S, c, e, inv)
        assert abs(lr - (-math.sin(ti))) < 1e-9
    assert abs(lambda_r_from_eta_alpha(S, cs[0], es[0], inv)) < 1e-12


def test_lambda_r_requires_moving_centroid():
    with pytest.raises(ZeroCentroidError):
        lambda_r_from_eta_alpha(S, Centroid(0.0, 0.0), ErmakovState(1.0, 0.0), 0.0)


def test_observable_map_values():
    c = Centroid(1.0, 2.0)
    u = UncertaintyTriple(1.0, 1.25, 1.0)
    inv = invariant_observable_form(S, c, u)
    assert math.isclose(inv.value, 1.25, rel_tol=1e-12)
    l = lambda_from_observables(S, c, u, inv.value)
    cc = math.sqrt(1.0 / 2.5)
    assert math.isclose(l.lambda_i, cc, rel_tol=1e-12)
    assert math.isclose(l.lambda_i_dot, 2.0 * cc, rel_tol=1e-12)
    assert math.isclose(l.lambda_r, 2.0 * cc, rel_tol=1e-12)
    assert math.isclose(l.lambda_r, 1.2649110640673518, rel_tol=1e-12)
    assert math.isclose(l.lambda_r_dot, 1.5 * cc, rel_tol=1e-12)
    # unit Wronskian and modulus matching the reduced width
    assert math.isclose(l.wronskian, 1.0, rel_tol=1e-12)
    alpha = ermakov_from_uncertainties(S, u).alpha
    assert math.isclose(abs(l.value), alpha, rel_tol=1e-12)
    assert math.isclose(abs(l.value) ** 2, 2.0, rel_tol=1e-12)


def test_observable_map_reproduces_trajectory():
    # reconstruct lambda pointwise from observables; it must obey the same
    # Riccati flow and keep W = 1 even though the map fixes the gauge per point
    t = np.linspace(0.0, 2.0 * math.pi, 145)
    u0 = UncertaintyTriple(1.0, 0.5, 0.5)
    c0 = Centroid(1.0, -0.5)
    e0 = ermakov_from_uncertainties(S, u0)
    cs, es = integrate_joint(S, c0, e0, t)
    inv0 = ermakov_invariant(S, cs[0], es[0])
    for c, e in zip(cs, es):
        u = uncertainties_from_ermakov(S, e)
        obs = invariant_observable_form(S, c, u)
        assert abs(obs.value - inv0) < 1e-9
        l = lambda_from_observables(S, c, u, obs.value)
        assert abs(l.wronskian - 1.0) < 1e-9
        assert abs(abs(l.value) - e.alpha) < 1e-9
        r = riccati_from_lambda(l)
        assert abs(complex(r.c_r, r.c_i) - complex(e.alpha_dot / e.alpha,
                                                   1.0 / e.alpha ** 2)) < 1e-8


def test_invariant_observable_components():
    c = Centroid(1.0, 2.0)
    u = UncertaintyTriple(1.0, 1.25, 1.0)
    inv = invariant_observable_form(S, c, u)
    assert np.allclose(inv.components, (1.25, -4.0, 4.0))
    assert math.isclose(sum(inv.components), inv.value, rel_tol=1e-12)


def test_integrate_rejects_degenerate_pair():
    bad = LambdaState(1.0, 0.0, 0.0, 2.0)  # W = 2
    with pytest.raises(WronskianError):
        integrate_lambda(S, bad, np.linspace(0.0, 1.0, 5))


def test_phase_advances_monotonically():
    t = np.linspace(0.0, 4.0 * math.pi, 801)
    ls = integrate_lambda(S, width_lambda_initial(ErmakovState(1.0, 0.0)), t)
    phi = phase_angles(ls)
    assert phi.shape == t.shape
    # d(phi)/dt = 1/alpha^2 = 1 here, with no 2 pi wraps
    np.testing.assert_allclose(np.diff(phi), np.diff(t), atol=1e-9)
    assert math.isclose(phi[-1] - phi[0], 4.0 * math.pi, rel_tol=1e-9)
