"""Steering vectors: unit modulus, analytic derivatives against central
differences, and the Kronecker assembly of the observation vector."""

import math

import numpy as np
import pytest

from conftest import CARRIER, bi_geom, mono_geom, target
from nfcrb.errors import DomainError
from nfcrb.geometry import Mode, SensingScenario, Topology
from nfcrb.steering import (
    build_observation,
    direction_sine_derivs,
    observation_from_scenario,
    rx_steering_far,
    rx_steering_near,
    tx_steering,
)

DTH = 1e-6   # rad
DR = 1e-5    # m


def fd_check(make, tgt, rel=1e-4):
    """Central-difference check of d_theta and d_range."""
    sv = make(tgt)
    up = make(target(tgt.range_m, tgt.angle_rad + DTH)).values
    dn = make(target(tgt.range_m, tgt.angle_rad - DTH)).values
    fd_th = (up - dn) / (2.0 * DTH)
    up = make(target(tgt.range_m + DR, tgt.angle_rad)).values
    dn = make(target(tgt.range_m - DR, tgt.angle_rad)).values
    fd_r = (up - dn) / (2.0 * DR)
    scale_th = max(np.abs(sv.d_theta).max(), 1e-30)
    scale_r = max(np.abs(sv.d_range).max(), 1e-30)
    assert np.abs(sv.d_theta - fd_th).max() < rel * scale_th
    assert np.abs(sv.d_range - fd_r).max() < rel * scale_r


def test_tx_steering_unit_modulus_and_center_phase():
    geom = mono_geom(65)
    tgt = target(18.0, 0.3)
    sv = tx_steering(geom, tgt, CARRIER)
    assert np.abs(np.abs(sv.values) - 1.0).max() < 1e-12
    center = np.exp(-2j * math.pi * tgt.range_m / CARRIER.wavelength)
    assert abs(sv.values[32] - center) < 1e-12


def test_tx_steering_derivatives_match_finite_differences():
    geom = mono_geom(33)
    for th, r in ((0.0, 10.0), (0.4, 5.0), (-1.0, 18.0)):
        fd_check(lambda t: tx_steering(geom, t, CARRIER), target(r, th))


def test_rx_near_degenerates_to_tx_when_colocated():
    geom = mono_geom(9)
    tgt = target(7.0, -0.4)
    a = tx_steering(geom, tgt, CARRIER)
    b = rx_steering_near(geom, tgt, CARRIER)
    assert np.abs(a.values - b.values).max() < 1e-12
    assert np.abs(a.d_theta - b.d_theta).max() < 1e-9
    assert np.abs(a.d_range - b.d_range).max() < 1e-9


def test_rx_near_derivatives_match_finite_differences():
    geom = bi_geom(9, 8, 35.0)
    fd_check(lambda t: rx_steering_near(geom, t, CARRIER), target(18.0, 0.25))


def test_rx_far_unit_modulus_and_center_element():
    geom = bi_geom(9, 9, 35.0)
    sv = rx_steering_far(geom, target(18.0, 0.3), CARRIER)
    assert np.abs(np.abs(sv.values) - 1.0).max() < 1e-12
    assert sv.values[4] == 1.0 + 0.0j  # bulk phase dropped, center index is 0


def test_rx_far_phase_slope_matches_direction_sine():
    geom = bi_geom(9, 8, 35.0)
    tgt = target(18.0, 0.3)
    sv = rx_steering_far(geom, tgt, CARRIER)
    # adjacent-element phase difference = 2 pi d sin(phi)/lambda
    step = np.angle(sv.values[1:] * sv.values[:-1].conj())
    l2 = 35.0 ** 2 + 18.0 ** 2 - 2 * 35.0 * 18.0 * math.cos(0.3)
    sin_phi = 18.0 * math.sin(0.3) / math.sqrt(l2)
    expect = 2.0 * math.pi * geom.rx_spacing * sin_phi / CARRIER.wavelength
    assert np.abs(step - expect).max() < 1e-12


def test_rx_far_derivatives_match_finite_differences():
    geom = bi_geom(9, 8, 35.0)
    for th, r in ((0.0, 18.0), (0.3, 18.0), (-0.8, 50.0)):
        fd_check(lambda t: rx_steering_far(geom, t, CARRIER), target(r, th))


def test_direction_sine_derivs_match_finite_differences():
    R, r, th = 35.0, 18.0, 0.3

    def sphi(rr, tt):
        return rr * math.sin(tt) / math.sqrt(R * R + rr * rr - 2 * R * rr * math.cos(tt))

    g_th, g_r = direction_sine_derivs(R, r, th)
    assert g_th == pytest.approx((sphi(r, th + DTH) - sphi(r, th - DTH)) / (2 * DTH), rel=1e-6)
    assert g_r == pytest.approx((sphi(r + DR, th) - sphi(r - DR, th)) / (2 * DR), rel=1e-6)


# --- observation assembly ------------------------------------------------------

def obs_case(mode, topology):
    if topology is Topology.MONOSTATIC:
        return mono_geom(9), target(10.0, 0.3)
    return bi_geom(9, 8, 35.0), target(18.0, 0.3)


@pytest.mark.parametrize("mode", [Mode.MIMO, Mode.PHASED])
@pytest.mark.parametrize("topology", [Topology.MONOSTATIC, Topology.BISTATIC_NEAR_FAR_TX])
def test_observation_layout_and_factors(mode, topology):
    geom, tgt = obs_case(mode, topology)
    obs = build_observation(geom, tgt, CARRIER, mode, topology)
    assert obs.tx_array_size == geom.num_tx
    assert obs.g.shape[0] == obs.num_tx * obs.num_rx

    a = tx_steering(geom, tgt, CARRIER)
    if topology is Topology.MONOSTATIC:
        expect = np.kron(a.values, a.values) if mode is Mode.MIMO else a.values
        assert (obs.num_tx, obs.num_rx) == ((9, 9) if mode is Mode.MIMO else (9, 1))
    else:
        b = rx_steering_far(geom, tgt, CARRIER)
        expect = np.kron(b.values, a.values) if mode is Mode.MIMO else b.values
        assert (obs.num_tx, obs.num_rx) == ((9, 8) if mode is Mode.MIMO else (1, 8))
    assert np.abs(obs.g - expect).max() < 1e-12
    # reshape contract: y.reshape(num_rx, num_tx) never fails
    obs.g.reshape(obs.num_rx, obs.num_tx)


@pytest.mark.parametrize("mode", [Mode.MIMO, Mode.PHASED])
@pytest.mark.parametrize("topology", [Topology.MONOSTATIC, Topology.BISTATIC_NEAR_FAR_TX])
def test_observation_derivatives_match_finite_differences(mode, topology):
    geom, tgt = obs_case(mode, topology)

    def g_of(t):
        return build_observation(geom, t, CARRIER, mode, topology).g

    obs = build_observation(geom, tgt, CARRIER, mode, topology)
    fd_th = (g_of(target(tgt.range_m, tgt.angle_rad + DTH))
             - g_of(target(tgt.range_m, tgt.angle_rad - DTH))) / (2 * DTH)
    fd_r = (g_of(target(tgt.range_m + DR, tgt.angle_rad))
            - g_of(target(tgt.range_m - DR, tgt.angle_rad))) / (2 * DR)
    assert np.abs(obs.g_theta - fd_th).max() < 1e-4 * np.abs(obs.g_theta).max()
    assert np.abs(obs.g_range - fd_r).max() < 1e-4 * max(np.abs(obs.g_range).max(), 1e-30)


def test_mono_mimo_product_rule():
    geom, tgt = mono_geom(9), target(10.0, 0.3)
    a = tx_steering(geom, tgt, CARRIER)
    obs = build_observation(geom, tgt, CARRIER, Mode.MIMO, Topology.MONOSTATIC)
    expect = np.kron(a.d_theta, a.values) + np.kron(a.values, a.d_theta)
    assert np.abs(obs.g_theta - expect).max() < 1e-12


def test_bistatic_requires_separation():
    with pytest.raises(DomainError):
        build_observation(mono_geom(9), target(10.0, 0.0), CARRIER,
                          Mode.MIMO, Topology.BISTATIC_NEAR_FAR_TX)


def test_observation_from_scenario_matches_direct_build():
    geom, tgt = bi_geom(9, 8, 35.0), target(18.0, 0.1)
    scn = SensingScenario(geom, tgt, CARRIER, Mode.MIMO, Topology.BISTATIC_NEAR_FAR_TX)
    direct = build_observation(geom, tgt, CARRIER, Mode.MIMO, Topology.BISTATIC_NEAR_FAR_TX)
    via = observation_from_scenario(scn)
    assert np.array_equal(via.g, direct.g)
    assert via.tx_array_size == direct.tx_array_size
