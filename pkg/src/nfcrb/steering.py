"""Spherical-wave and far-field steering vectors with analytic derivatives,
and their composition into the unified observation vector."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError, DomainError
from .geometry import (
    ArrayGeometry,
    CarrierConfig,
    Mode,
    SensingScenario,
    TargetLocation,
    Topology,
)


@dataclass(frozen=True)
class SteeringVector:
    """Complex array response with its analytic partials.

    values has unit-modulus entries; d_theta and d_range are elementwise
    derivatives of values with respect to the target angle and range.
    """

    values: np.ndarray
    d_theta: np.ndarray
    d_range: np.ndarray

    @property
    def length(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class ObservationVector:
    """Unified observation vector g with derivatives.

    num_rx/num_tx record the Kronecker factor lengths (g = b (x) a); a
    missing factor is recorded as length 1 so y.reshape(num_rx, num_tx)
    is always valid. tx_array_size is the physical transmit element count,
    which sets the power split/gain even when the transmit factor is absent
    from g (beamformed bistatic data).
    """

    g: np.ndarray
    g_theta: np.ndarray
    g_range: np.ndarray
    mode: Mode
    topology: Topology
    num_tx: int
    num_rx: int
    tx_array_size: int


def tx_steering(geom: ArrayGeometry, tgt: TargetLocation, carrier: CarrierConfig) -> SteeringVector:
    """Transmit-side spherical-wave steering vector.

    values[m] = exp(-j 2 pi r_m / lambda) with r_m the exact element-to-target
    distance; derivatives follow from d r_m/d theta = -m d_tx r cos(theta)/r_m
    and d r_m/d r = (r - m d_tx sin(theta))/r_m.
    """
    lam = carrier.wavelength
    r, th = tgt.range_m, tgt.angle_rad
    md = geom.tx_indices() * geom.tx_spacing
    rm = np.sqrt(r * r - 2.0 * r * md * math.sin(th) + md * md)
    vals = np.exp(-2j * math.pi / lam * rm)
    drm_dth = -r * md * math.cos(th) / rm
    drm_dr = (r - md * math.sin(th)) / rm
    k = -2j * math.pi / lam
    return SteeringVector(values=vals, d_theta=k * drm_dth * vals, d_range=k * drm_dr * vals)


def rx_steering_near(geom: ArrayGeometry, tgt: TargetLocation, carrier: CarrierConfig) -> SteeringVector:
    """Receive-side spherical-wave steering vector using exact distances l_n.

    R = 0 degenerates to the transmit geometry (same formula, R dropped).
    """
    lam = carrier.wavelength
    R = geom.array_separation
    r, th = tgt.range_m, tgt.angle_rad
    nd = geom.rx_indices() * geom.rx_spacing
    ln2 = R * R + r * r - 2.0 * R * r * math.cos(th) - 2.0 * nd * r * math.sin(th) + nd * nd
    if np.any(ln2 <= 0.0):
        raise DegenerateGeometryError("target coincides with a receive element")
    ln = np.sqrt(ln2)
    vals = np.exp(-2j * math.pi / lam * ln)
    dln_dth = (R * r * math.sin(th) - nd * r * math.cos(th)) / ln
    dln_dr = (r - R * math.cos(th) - nd * math.sin(th)) / ln
    k = -2j * math.pi / lam
    return SteeringVector(values=vals, d_theta=k * dln_dth * vals, d_range=k * dln_dr * vals)


def direction_sine_derivs(separation: float, range_m: float, angle_rad: float) -> tuple[float, float]:
    """Derivatives of the receive direction sine sin(phi) = r sin(theta)/l
    with respect to theta and r. Index-independent factors of the far-field
    receive steering derivatives."""
    R, r, th = separation, range_m, angle_rad
    l2 = R * R + r * r - 2.0 * R * r * math.cos(th)
    if l2 <= 0.0:
        raise DegenerateGeometryError("target coincides with the receive-array center")
    l3 = l2 * math.sqrt(l2)
    g_th = (r * math.cos(th) * (R * R + r * r - R * r * math.cos(th)) - R * r * r) / l3
    g_r = R * math.sin(th) * (R - r * math.cos(th)) / l3
    return g_th, g_r


def rx_steering_far(geom: ArrayGeometry, tgt: TargetLocation, carrier: CarrierConfig) -> SteeringVector:
    """Far-field receive steering vector in transmit-side coordinates.

    values[n] = exp(+j 2 pi n d_rx sin(phi)/lambda) with the constant bulk
    phase exp(-j 2 pi l/lambda) dropped (absorbed into the reflection
    coefficient). Derivatives use the index-independent factors
    Gamma_theta = d sin(phi)/d theta and Gamma_r = d sin(phi)/d r.
    """
    lam = carrier.wavelength
    R = geom.array_separation
    r, th = tgt.range_m, tgt.angle_rad
    l2 = R * R + r * r - 2.0 * R * r * math.cos(th)
    if l2 <= 0.0:
        raise DegenerateGeometryError("target coincides with the receive-array center")
    sin_phi = r * math.sin(th) / math.sqrt(l2)
    g_th, g_r = direction_sine_derivs(R, r, th)
    nd = geom.rx_indices() * geom.rx_spacing
    k = 2.0 * math.pi / lam
    vals = np.exp(1j * k * nd * sin_phi)
    return SteeringVector(
        values=vals,
        d_theta=1j * k * nd * g_th * vals,
        d_range=1j * k * nd * g_r * vals,
    )


def _kron_with_derivs(b: SteeringVector, a: SteeringVector):
    g = np.kron(b.values, a.values)
    g_th = np.kron(b.d_theta, a.values) + np.kron(b.values, a.d_theta)
    g_r = np.kron(b.d_range, a.values) + np.kron(b.values, a.d_range)
    return g, g_th, g_r


def build_observation(
    geom: ArrayGeometry,
    tgt: TargetLocation,
    carrier: CarrierConfig,
    mode: Mode,
    topology: Topology,
) -> ObservationVector:
    """Assemble the unified observation vector for a mode/topology pair.

    MIMO: g = b (x) a (monostatic uses b := a). Phased: g = a for monostatic
    and g = b (far-field receive) for bistatic.
    """
    if topology is Topology.BISTATIC_NEAR_FAR_TX and geom.array_separation <= 0.0:
        raise DomainError("bistatic observation requires array_separation > 0")

    if topology is Topology.MONOSTATIC:
        a = tx_steering(geom, tgt, carrier)
        if mode is Mode.PHASED:
            return ObservationVector(
                g=a.values, g_theta=a.d_theta, g_range=a.d_range,
                mode=mode, topology=topology, num_tx=a.length, num_rx=1,
                tx_array_size=geom.num_tx,
            )
        g, g_th, g_r = _kron_with_derivs(a, a)
        return ObservationVector(
            g=g, g_theta=g_th, g_range=g_r,
            mode=mode, topology=topology, num_tx=a.length, num_rx=a.length,
            tx_array_size=geom.num_tx,
        )

    b = rx_steering_far(geom, tgt, carrier)
    if mode is Mode.PHASED:
        return ObservationVector(
            g=b.values, g_theta=b.d_theta, g_range=b.d_range,
            mode=mode, topology=topology, num_tx=1, num_rx=b.length,
            tx_array_size=geom.num_tx,
        )
    a = tx_steering(geom, tgt, carrier)
    g, g_th, g_r = _kron_with_derivs(b, a)
    return ObservationVector(
        g=g, g_theta=g_th, g_range=g_r,
        mode=mode, topology=topology, num_tx=a.length, num_rx=b.length,
        tx_array_size=geom.num_tx,
    )


def observation_from_scenario(scn: SensingScenario) -> ObservationVector:
    return build_observation(scn.geometry, scn.target, scn.carrier, scn.mode, scn.topology)
