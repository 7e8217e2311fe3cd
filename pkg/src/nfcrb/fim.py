"""Fisher information over (angle, range, reflection re/im), its Schur
reduction to the angle/range block, and the exact-summation CRB path.

This module is the numerical oracle: it never uses the closed forms, only
analytic steering derivatives and direct element summations.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, NumericalError
from .geometry import ArrayGeometry, CarrierConfig, Mode, TargetLocation, Topology
from .steering import ObservationVector, direction_sine_derivs

# relative determinant threshold below which the angle/range information
# block is declared singular
DET_REL_TOL = 1e-12


@dataclass(frozen=True)
class NoiseAndPowerConfig:
    """Power, noise, and integration bookkeeping.

    snr_linear is gamma = P|kappa|^2/(N0 B); time_bandwidth is L = B T_p.
    When only snr_linear is given the remaining fields become normalized
    representatives (P = gamma, N0 = B = 1, |kappa| = 1); when raw physical
    values are supplied they must be consistent with snr_linear.
    """

    snr_linear: float
    time_bandwidth: float = 1.0
    reflection_coeff: complex = 1.0 + 0.0j
    total_power: float | None = None
    noise_psd: float = 1.0
    bandwidth: float = 1.0

    def __post_init__(self):
        if not self.snr_linear > 0:
            raise ConfigError(f"snr_linear must be > 0, got {self.snr_linear}")
        if not self.time_bandwidth >= 1.0:
            raise ConfigError(f"time_bandwidth must be >= 1, got {self.time_bandwidth}")
        if not (self.noise_psd > 0 and self.bandwidth > 0):
            raise ConfigError("noise_psd and bandwidth must be positive")
        k2 = abs(self.reflection_coeff) ** 2
        if k2 == 0.0:
            raise ConfigError("reflection_coeff must be nonzero")
        if self.total_power is None:
            object.__setattr__(
                self, "total_power",
                self.snr_linear * self.noise_psd * self.bandwidth / k2,
            )
        else:
            implied = self.total_power * k2 / (self.noise_psd * self.bandwidth)
            if abs(implied - self.snr_linear) > 1e-9 * self.snr_linear:
                raise ConfigError(
                    "inconsistent power/noise fields: "
                    f"P|kappa|^2/(N0 B) = {implied}, snr_linear = {self.snr_linear}"
                )

    @property
    def pulse_duration(self) -> float:
        return self.time_bandwidth / self.bandwidth

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.snr_linear)

    @classmethod
    def from_snr(cls, snr_db: float, time_bandwidth: float = 1.0) -> "NoiseAndPowerConfig":
        """Normalized representative config from an SNR in dB."""
        return cls(snr_linear=10.0 ** (snr_db / 10.0), time_bandwidth=time_bandwidth)

    @classmethod
    def from_physical(
        cls,
        total_power: float,
        noise_psd: float,
        bandwidth: float,
        pulse_duration: float,
        reflection_coeff: complex = 1.0 + 0.0j,
    ) -> "NoiseAndPowerConfig":
        if total_power <= 0 or pulse_duration <= 0:
            raise ConfigError("total_power and pulse_duration must be positive")
        gamma = total_power * abs(reflection_coeff) ** 2 / (noise_psd * bandwidth)
        return cls(
            snr_linear=gamma,
            time_bandwidth=bandwidth * pulse_duration,
            reflection_coeff=reflection_coeff,
            total_power=total_power,
            noise_psd=noise_psd,
            bandwidth=bandwidth,
        )


@dataclass(frozen=True)
class FimMatrix:
    """4x4 Fisher information, parameter order (theta, r, kappa_re, kappa_im)."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.shape != (4, 4):
            raise DomainError(f"FIM must be 4x4, got shape {e.shape}")
        scale = max(float(np.abs(e).max()), 1.0)
        if float(np.abs(e - e.T).max()) > 1e-10 * scale:
            raise NumericalError("FIM is not symmetric within tolerance")
        object.__setattr__(self, "entries", e)


class CrbMethod(enum.Enum):
    NUMERICAL_FIM = "NumericalFim"
    EXACT_SUM = "ExactSumQ"
    CLOSED_FORM = "ClosedForm"
    ASYMPTOTIC = "Asymptotic"
    TAYLOR = "Taylor"
    FARFIELD_UPW = "FarFieldUPW"


@dataclass(frozen=True)
class CrbResult:
    """Bounds on angle (rad^2) and range (m^2) variance.

    Unidentifiable scenarios carry +inf bounds; warnings collect regime or
    validity notes without changing values.
    """

    crb_theta: float
    crb_range: float
    identifiable: bool
    method: CrbMethod
    warnings: tuple = ()

    @classmethod
    def unidentifiable(cls, method: CrbMethod, warnings: tuple = ()) -> "CrbResult":
        return cls(
            crb_theta=math.inf, crb_range=math.inf,
            identifiable=False, method=method, warnings=warnings,
        )


def mode_energy_scale(cfg: NoiseAndPowerConfig, tx_array_size: int, mode: Mode) -> float:
    """Coherent post-filter signal energy per observation entry, |rho/kappa|^2.

    T_p P / M when transmitters send orthogonal waveforms (power split),
    T_p P M when they beamform (coherent gain).
    """
    s = cfg.pulse_duration * cfg.total_power
    return s / tx_array_size if mode is Mode.MIMO else s * tx_array_size


def fim_numeric(obs: ObservationVector, cfg: NoiseAndPowerConfig, mode: Mode | None = None) -> FimMatrix:
    """F = (2/N0) Re{J^H J} for the mean w = rho g, J = dw/d(theta,r,k_re,k_im).

    rho = kappa sqrt(T_p P/M) in MIMO mode (power split across transmitters)
    and kappa sqrt(T_p P M) in phased mode (coherent transmit gain).
    """
    mode = obs.mode if mode is None else mode
    root = math.sqrt(mode_energy_scale(cfg, obs.tx_array_size, mode))
    kap = complex(cfg.reflection_coeff)
    jac = np.column_stack([
        kap * root * obs.g_theta,
        kap * root * obs.g_range,
        root * obs.g,
        1j * root * obs.g,
    ])
    f = (2.0 / cfg.noise_psd) * (jac.conj().T @ jac).real
    return FimMatrix(entries=0.5 * (f + f.T))


def _inv_2x2(m: np.ndarray, det: float) -> np.ndarray:
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det


def crb_from_fim(fim: FimMatrix) -> CrbResult:
    """Schur-complement the reflection-coefficient block out of the FIM and
    invert the remaining 2x2 angle/range information."""
    f = fim.entries
    p11, p12, p22 = f[:2, :2], f[:2, 2:], f[2:, 2:]
    det22 = p22[0, 0] * p22[1, 1] - p22[0, 1] * p22[1, 0]
    tr22 = 0.5 * (p22[0, 0] + p22[1, 1])
    if not det22 > DET_REL_TOL * tr22 * tr22:
        # nuisance block singular: no usable information remains
        return CrbResult.unidentifiable(CrbMethod.NUMERICAL_FIM)
    q = p11 - p12 @ _inv_2x2(p22, det22) @ p12.T
    det_q = q[0, 0] * q[1, 1] - q[0, 1] * q[1, 0]
    tr_q = 0.5 * (q[0, 0] + q[1, 1])
    if not det_q > DET_REL_TOL * tr_q * tr_q:
        return CrbResult.unidentifiable(CrbMethod.NUMERICAL_FIM)
    return CrbResult(
        crb_theta=q[1, 1] / det_q,
        crb_range=q[0, 0] / det_q,
        identifiable=True,
        method=CrbMethod.NUMERICAL_FIM,
    )


def transmit_sums(geom: ArrayGeometry, tgt: TargetLocation, carrier: CarrierConfig):
    """Exact element summations of the five transmit-side intermediates.

    Returns (angle_power, angle_overlap, cross_power, range_power,
    range_overlap); the two overlap terms are purely imaginary complex
    numbers, everything else accumulates in real arithmetic.
    """
    lam = carrier.wavelength
    r, th = tgt.range_m, tgt.angle_rad
    md = geom.tx_indices() * geom.tx_spacing
    sth, cth = math.sin(th), math.cos(th)
    dd = 1.0 - 2.0 * (md / r) * sth + (md / r) ** 2
    rng = 1.0 - (md / r) * sth
    k = 2.0 * math.pi / lam
    angle_power = k * k * cth * cth * float(np.sum(md * md / dd))
    angle_im = k * cth * float(np.sum(md / np.sqrt(dd)))
    cross_power = -k * k * cth * float(np.sum(md * rng / dd))
    range_power = k * k * float(np.sum(rng * rng / dd))
    range_im = k * float(np.sum(rng / np.sqrt(dd)))
    return angle_power, -1j * angle_im, cross_power, range_power, 1j * range_im


def receive_sums(geom: ArrayGeometry, tgt: TargetLocation, carrier: CarrierConfig):
    """Receive-side intermediate sums for the far-field receive model.

    The first-moment sums vanish by index symmetry, so only the three
    quadratic terms (angle power, range power, cross power) are returned.
    """
    lam = carrier.wavelength
    g_th, g_r = direction_sine_derivs(geom.array_separation, tgt.range_m, tgt.angle_rad)
    nd = geom.rx_indices() * geom.rx_spacing
    base = (2.0 * math.pi / lam) ** 2 * float(np.sum(nd * nd))
    return base * g_th * g_th, base * g_r * g_r, base * g_th * g_r


def _crb_from_intermediates(
    num_tx: int,
    num_rx: int,
    angle_power: float,
    angle_overlap: complex,
    cross_power: float,
    range_power: float,
    range_overlap: complex,
    rx_angle_power: float,
    rx_range_power: float,
    rx_cross_power: float,
    prefactor: float,
    mode: Mode,
    topology: Topology,
    method: CrbMethod,
    warnings: tuple = (),
) -> CrbResult:
    """Shared determinant algebra turning intermediate sums into CRBs.

    prefactor is 1/(2 gamma L). Used by both the exact-summation and the
    closed-form paths, which differ only in how the sums are produced.
    """
    m = float(num_tx)
    cross_ov = (angle_overlap.conjugate() * range_overlap).real

    if num_tx < 2:
        # no transmit baseline: monostatic information vanishes and the
        # receive-only bistatic block is rank one, exactly in both cases
        return CrbResult.unidentifiable(method, warnings)

    if topology is Topology.BISTATIC_NEAR_FAR_TX:
        if mode is Mode.PHASED:
            # receive-only data: theta and r enter through the single
            # direction sine, so the information block is rank one
            return CrbResult.unidentifiable(method, warnings)
        n = float(num_rx)
        aa = m * rx_angle_power + n * angle_power - (n / m) * abs(angle_overlap) ** 2
        pp = m * rx_range_power + n * range_power - (n / m) * abs(range_overlap) ** 2
        ee = m * rx_cross_power + n * cross_power - (n / m) * cross_ov
        det = aa * pp - ee * ee
        if not det > DET_REL_TOL * aa * pp:
            return CrbResult.unidentifiable(method, warnings)
        return CrbResult(
            crb_theta=prefactor * m * pp / det,
            crb_range=prefactor * m * aa / det,
            identifiable=True, method=method, warnings=warnings,
        )

    aa = m * angle_power - abs(angle_overlap) ** 2
    pp = m * range_power - abs(range_overlap) ** 2
    ee = m * cross_power - cross_ov
    det = aa * pp - ee * ee
    if not det > DET_REL_TOL * aa * pp:
        return CrbResult.unidentifiable(method, warnings)
    if mode is Mode.MIMO:
        crb_t = prefactor * m * pp / (2.0 * det)
        crb_r = prefactor * m * aa / (2.0 * det)
    else:
        crb_t = prefactor * pp / det
        crb_r = prefactor * aa / det
    return CrbResult(
        crb_theta=crb_t, crb_range=crb_r,
        identifiable=True, method=method, warnings=warnings,
    )


def crb_exact_sum(
    geom: ArrayGeometry,
    tgt: TargetLocation,
    carrier: CarrierConfig,
    cfg: NoiseAndPowerConfig,
    mode: Mode,
    topology: Topology,
) -> CrbResult:
    """CRBs with every intermediate accumulated by exact summation over the
    array elements; algebraically identical to the numerical FIM path."""
    pref = 1.0 / (2.0 * cfg.snr_linear * cfg.time_bandwidth)
    a_s, c_ov, e_s, p_s, q_ov = transmit_sums(geom, tgt, carrier)
    if topology is Topology.BISTATIC_NEAR_FAR_TX:
        i_s, s_s, k_s = receive_sums(geom, tgt, carrier)
    else:
        i_s = s_s = k_s = 0.0
    return _crb_from_intermediates(
        geom.num_tx, geom.num_rx, a_s, c_ov, e_s, p_s, q_ov,
        i_s, s_s, k_s, pref, mode, topology, CrbMethod.EXACT_SUM,
    )
