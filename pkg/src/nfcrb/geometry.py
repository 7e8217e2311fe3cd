"""Array/target geometry: element placement, exact and approximate distances,
and the bistatic (l, phi) transform.

Angles are radians everywhere; degrees exist only at the CLI boundary.
Element indices are signed integers centered at 0: m in {-(M-1)/2, ..., (M-1)/2}.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError, DomainError, SingularGeometryError

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact

# Proposition-style closed forms assume eps = spacing/range << 1; past this
# threshold results carry a non-fatal accuracy warning.
EPS_WARN_THRESHOLD = 0.1

AMPLITUDE_VALIDITY_FACTOR = 1.2  # r must exceed 1.2 * aperture


class Mode(enum.Enum):
    """Radar operating mode."""

    MIMO = "mimo"
    PHASED = "phased"


class Topology(enum.Enum):
    """Transmit/receive array placement."""

    MONOSTATIC = "monostatic"
    BISTATIC_NEAR_FAR_TX = "bistatic"


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear transmit/receive arrays on a common axis.

    num_tx must be odd so the transmit index set is integer-symmetric about
    the center element; num_rx may be even (half-integer symmetric indices).
    array_separation is the distance R between array centers; 0 means
    monostatic (co-located arrays).
    """

    num_tx: int
    num_rx: int
    tx_spacing: float
    rx_spacing: float
    array_separation: float = 0.0

    def __post_init__(self):
        if self.num_tx < 1 or self.num_tx % 2 == 0:
            raise DomainError(f"num_tx must be a positive odd integer, got {self.num_tx}")
        if self.num_rx < 1:
            raise DomainError(f"num_rx must be a positive integer, got {self.num_rx}")
        if self.tx_spacing <= 0 or self.rx_spacing <= 0:
            raise DomainError("element spacings must be positive")
        if self.array_separation < 0:
            raise DomainError("array separation must be >= 0")

    @property
    def tx_aperture(self) -> float:
        return self.num_tx * self.tx_spacing

    @property
    def rx_aperture(self) -> float:
        return self.num_rx * self.rx_spacing

    @property
    def is_monostatic(self) -> bool:
        return self.array_separation == 0.0

    def tx_indices(self) -> np.ndarray:
        half = (self.num_tx - 1) // 2
        return np.arange(-half, half + 1)

    def rx_indices(self) -> np.ndarray:
        # symmetric about 0; half-integer for even counts
        return np.arange(self.num_rx) - (self.num_rx - 1) / 2.0


@dataclass(frozen=True)
class TargetLocation:
    """Point target at polar (range, angle) relative to the transmit-array center."""

    range_m: float
    angle_rad: float

    def __post_init__(self):
        if not self.range_m > 0:
            raise DomainError(f"target range must be > 0, got {self.range_m}")
        if abs(self.angle_rad) > math.pi / 2:
            raise DomainError(f"target angle must lie in [-pi/2, pi/2], got {self.angle_rad}")


@dataclass(frozen=True)
class CarrierConfig:
    """Carrier frequency; wavelength is always derived (single source of truth)."""

    carrier_freq: float

    def __post_init__(self):
        if not self.carrier_freq > 0:
            raise DomainError("carrier frequency must be positive")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq

    @classmethod
    def from_wavelength(cls, wavelength: float) -> "CarrierConfig":
        if not wavelength > 0:
            raise DomainError("wavelength must be positive")
        return cls(carrier_freq=SPEED_OF_LIGHT / wavelength)


@dataclass(frozen=True)
class SensingScenario:
    """Bundle of geometry + target + carrier + operating mode/topology.

    The single input record consumed by steering, FIM, closed-form, and
    simulation code.
    """

    geometry: ArrayGeometry
    target: TargetLocation
    carrier: CarrierConfig
    mode: Mode = Mode.MIMO
    topology: Topology = Topology.MONOSTATIC

    def __post_init__(self):
        if self.topology is Topology.BISTATIC_NEAR_FAR_TX and self.geometry.array_separation <= 0:
            raise DomainError("bistatic topology requires array_separation > 0")


def epsilon_tx(geom: ArrayGeometry, tgt: TargetLocation) -> float:
    """Spacing-to-range ratio eps = d_tx / r for the transmit side."""
    return geom.tx_spacing / tgt.range_m


def _check_tx_index(geom: ArrayGeometry, m: int):
    half = (geom.num_tx - 1) // 2
    if not -half <= m <= half:
        raise DomainError(f"tx element index {m} outside [-{half}, {half}]")


def _check_rx_index(geom: ArrayGeometry, n: float):
    half = (geom.num_rx - 1) / 2.0
    if not -half <= n <= half:
        raise DomainError(f"rx element index {n} outside [-{half}, {half}]")


def exact_tx_range(geom: ArrayGeometry, tgt: TargetLocation, m: int) -> float:
    """Exact distance from transmit element m to the target.

    Equals the planar Euclidean distance between (0, m*d_tx) and
    (r*cos(theta), r*sin(theta)); the array lies along the y axis.
    """
    _check_tx_index(geom, m)
    r, th = tgt.range_m, tgt.angle_rad
    eps = m * geom.tx_spacing / r
    return r * math.sqrt(1.0 - 2.0 * eps * math.sin(th) + eps * eps)


def taylor_tx_range(geom: ArrayGeometry, tgt: TargetLocation, m: int) -> float:
    """Second-order (Fresnel) approximation of exact_tx_range."""
    _check_tx_index(geom, m)
    r, th = tgt.range_m, tgt.angle_rad
    md = m * geom.tx_spacing
    return r + (md * math.cos(th)) ** 2 / (2.0 * r) - md * math.sin(th)


def bistatic_transform(geom: ArrayGeometry, tgt: TargetLocation) -> tuple[float, float]:
    """Receive-side polar coordinates (l, phi) of the target.

    l is the distance from the receive-array center at (R, 0); phi is the
    direction angle seen from there, phi in [-pi/2, pi/2].
    """
    R = geom.array_separation
    r, th = tgt.range_m, tgt.angle_rad
    l2 = R * R + r * r - 2.0 * R * r * math.cos(th)
    l = math.sqrt(max(l2, 0.0))
    if l <= 0.0:
        raise DegenerateGeometryError("target coincides with the receive-array center")
    s = r * math.sin(th) / l
    # guard rounding excursions just past +-1 before arcsin
    s = min(1.0, max(-1.0, s))
    return l, math.asin(s)


def exact_rx_range(geom: ArrayGeometry, tgt: TargetLocation, n: float) -> float:
    """Exact distance from receive element n at (R, n*d_rx) to the target.

    R = 0 is accepted so the monostatic degeneration (rx == tx array) holds.
    """
    _check_rx_index(geom, n)
    R = geom.array_separation
    r, th = tgt.range_m, tgt.angle_rad
    nd = n * geom.rx_spacing
    d2 = R * R + r * r - 2.0 * R * r * math.cos(th) - 2.0 * nd * r * math.sin(th) + nd * nd
    return math.sqrt(max(d2, 0.0))


def angular_span(geom: ArrayGeometry, tgt: TargetLocation) -> float:
    """Angle subtended by the transmit aperture at the target, in (0, pi)."""
    r, th = tgt.range_m, tgt.angle_rad
    # cos(pi/2) is ~6e-17 in floats, so test the angle, not its cosine
    if abs(th) >= math.pi / 2:
        raise SingularGeometryError("angular span undefined at theta = +-pi/2")
    c = math.cos(th)
    half = geom.tx_aperture / (2.0 * r * c)
    t = math.tan(th)
    return math.atan(half - t) + math.atan(half + t)


def amplitude_model_valid(geom: ArrayGeometry, tgt: TargetLocation) -> bool:
    """Whether the constant-amplitude steering model is inside its stated
    validity region (range comfortably exceeding the transmit aperture)."""
    return tgt.range_m > AMPLITUDE_VALIDITY_FACTOR * geom.tx_aperture
