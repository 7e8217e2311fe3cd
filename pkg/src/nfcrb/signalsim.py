"""Waveform-level simulation.

Two layers: synth_snapshot draws directly from the post-matched-filter
observation model y = rho g + noise, and the *_chain_demo functions run a
small sampled transmit/propagate/filter chain that must collapse to that
same model. The chain is the ground truth for the shortcut.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .fim import NoiseAndPowerConfig, mode_energy_scale
from .geometry import ArrayGeometry, CarrierConfig, Mode, TargetLocation, Topology
from .steering import ObservationVector, rx_steering_far, tx_steering

DEMO_MAX_ELEMENTS = 16


class WaveformFamily(enum.Enum):
    ORTHOGONAL_CODES = "OrthogonalCodes"
    SINGLE_PULSE = "SinglePulse"


@dataclass(frozen=True)
class WaveformConfig:
    """Sampled baseband waveform set for one coherent processing interval.

    The chain samples at the bandwidth rate, so the sample count must equal
    the time-bandwidth product B*T_p.
    """

    num_samples_per_cpi: int
    cpi_duration: float
    bandwidth: float
    waveform_family: WaveformFamily = WaveformFamily.ORTHOGONAL_CODES

    def __post_init__(self):
        if self.num_samples_per_cpi < 1:
            raise ConfigError("num_samples_per_cpi must be a positive integer")
        if self.cpi_duration <= 0.0:
            raise ConfigError("cpi_duration must be positive")
        if self.bandwidth <= 0.0:
            raise ConfigError("bandwidth must be positive")
        tb = self.time_bandwidth
        if tb < 1.0 - 1e-12:
            raise ConfigError("time-bandwidth product must be >= 1")
        if abs(tb - self.num_samples_per_cpi) > 1e-6 * tb:
            raise ConfigError(
                "num_samples_per_cpi must equal bandwidth * cpi_duration "
                f"(got {self.num_samples_per_cpi} samples for B*T_p = {tb:g})"
            )

    @property
    def time_bandwidth(self) -> float:
        return self.bandwidth * self.cpi_duration

    @classmethod
    def orthogonal(cls, num_codes: int, bandwidth: float = 1.0) -> "WaveformConfig":
        """Smallest power-of-two code set holding num_codes orthogonal rows."""
        if num_codes < 1:
            raise ConfigError("num_codes must be a positive integer")
        n = 1
        while n < num_codes:
            n *= 2
        return cls(
            num_samples_per_cpi=n,
            cpi_duration=n / bandwidth,
            bandwidth=bandwidth,
            waveform_family=WaveformFamily.ORTHOGONAL_CODES,
        )

    @classmethod
    def single_pulse(cls, num_samples: int, bandwidth: float = 1.0) -> "WaveformConfig":
        return cls(
            num_samples_per_cpi=num_samples,
            cpi_duration=num_samples / bandwidth,
            bandwidth=bandwidth,
            waveform_family=WaveformFamily.SINGLE_PULSE,
        )


@dataclass(frozen=True)
class Snapshot:
    """One post-matched-filter observation and the truth that generated it."""

    y: np.ndarray
    true_params: tuple  # (range_m, angle_rad)
    seed: object


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def _complex_noise(rng: np.random.Generator, shape, variance: float) -> np.ndarray:
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def reflection_amplitude(
    cfg: NoiseAndPowerConfig,
    tx_array_size: int,
    mode: Mode,
    range_m: float | None = None,
    inverse_square_loss: bool = False,
) -> complex:
    """rho = kappa sqrt(T_p P / M) (orthogonal waveforms) or kappa sqrt(T_p P M).

    The optional inverse-square refinement scales kappa by (1 m / r)^2; it is
    off by default because the bound derivation treats kappa as
    location-independent.
    """
    kap = complex(cfg.reflection_coeff)
    if inverse_square_loss:
        if range_m is None or range_m <= 0.0:
            raise DomainError("inverse-square loss needs a positive target range")
        kap *= (1.0 / range_m) ** 2
    return kap * math.sqrt(mode_energy_scale(cfg, tx_array_size, mode))


def synth_snapshot(
    obs: ObservationVector,
    cfg: NoiseAndPowerConfig,
    seed,
    true_target: TargetLocation | None = None,
    include_noise: bool = True,
    inverse_square_loss: bool = False,
) -> Snapshot:
    """Draw y = rho g + n with i.i.d. complex Gaussian noise of variance N0.

    Deterministic in seed (counter-based generator); seed may be an int or a
    tuple of ints for substream derivation.
    """
    rng_m = None if true_target is None else true_target.range_m
    rho = reflection_amplitude(
        cfg, obs.tx_array_size, obs.mode,
        range_m=rng_m, inverse_square_loss=inverse_square_loss,
    )
    y = rho * obs.g
    if include_noise:
        y = y + _complex_noise(_rng(seed), y.shape, cfg.noise_psd)
    params = (np.nan, np.nan) if true_target is None else (
        true_target.range_m, true_target.angle_rad)
    return Snapshot(y=y, true_params=params, seed=seed)


def _hadamard(order: int) -> np.ndarray:
    if order < 1 or order & (order - 1):
        raise ConfigError("orthogonal code set needs a power-of-two length")
    h = np.array([[1.0]])
    block = np.array([[1.0, 1.0], [1.0, -1.0]])
    while h.shape[0] < order:
        h = np.kron(block, h)
    return h


def orthogonal_codes(num_codes: int, num_samples: int) -> np.ndarray:
    """num_codes rows of +/-1 samples with exact discrete orthogonality."""
    if num_samples < num_codes:
        raise ConfigError(
            f"cannot cut {num_codes} orthogonal codes from {num_samples} samples"
        )
    return _hadamard(num_samples)[:num_codes, :]


def _shifted(codes: np.ndarray, shift: int) -> np.ndarray:
    # Zero-padded (non-cyclic) delay: samples shifted out of the CPI are lost.
    if shift == 0:
        return codes
    out = np.zeros_like(codes)
    if abs(shift) < codes.shape[-1]:
        if shift > 0:
            out[..., shift:] = codes[..., :-shift]
        else:
            out[..., :shift] = codes[..., -shift:]
    return out


def _matched_filter(
    samples: np.ndarray, refs: np.ndarray, waveforms: WaveformConfig
) -> np.ndarray:
    """(1/sqrt(T_p)) integral of y(t) conj(ref(t)) dt, sampled at rate B.

    samples: (N, S) received; refs: (K, S) reference waveforms. Returns (N, K).
    """
    dt = 1.0 / waveforms.bandwidth
    return (dt / math.sqrt(waveforms.cpi_duration)) * (samples @ refs.conj().T)


def _demo_scale_check(geom: ArrayGeometry):
    if geom.num_tx > DEMO_MAX_ELEMENTS or geom.num_rx > DEMO_MAX_ELEMENTS:
        raise DomainError(
            "chain demos are capped at "
            f"{DEMO_MAX_ELEMENTS} elements per side (O(M N S) sampling)"
        )


def _rx_factor(geom, tgt, carrier):
    if geom.is_monostatic:
        return tx_steering(geom, tgt, carrier).values
    return rx_steering_far(geom, tgt, carrier).values


def mimo_chain_demo(
    geom: ArrayGeometry,
    tgt: TargetLocation,
    carrier: CarrierConfig,
    waveforms: WaveformConfig,
    cfg: NoiseAndPowerConfig,
    seed,
    include_noise: bool = True,
    delay_mismatch_samples: int = 0,
) -> Snapshot:
    """Orthogonal-waveform chain: transmit, superpose at each receiver, filter.

    Each transmitter sends its own +/-1 code at power P/M. After matched
    filtering against code m at receiver n, the (n, m) output stacks into a
    vector aligned with g = b (x) a, so the noiseless chain reproduces
    synth_snapshot exactly. A common propagation delay is assumed and
    normalized to zero; delay_mismatch_samples shifts the filter reference
    off the true delay (zero-padded, so a shift of a full CPI leaves pure
    noise). Off-peak code correlations are otherwise not modeled as zero.
    """
    _demo_scale_check(geom)
    if waveforms.waveform_family is not WaveformFamily.ORTHOGONAL_CODES:
        raise ConfigError("the orthogonal-waveform chain needs OrthogonalCodes")
    codes = orthogonal_codes(geom.num_tx, waveforms.num_samples_per_cpi)

    a = tx_steering(geom, tgt, carrier).values
    b = _rx_factor(geom, tgt, carrier)
    kap = complex(cfg.reflection_coeff)
    amp = kap * math.sqrt(cfg.total_power / geom.num_tx)

    # (N, S) superposition of all transmit codes seen through the two-way phases
    samples = amp * np.outer(b, a @ codes)
    if include_noise:
        # white noise sampled at rate B: per-sample complex variance N0 B
        samples = samples + _complex_noise(
            _rng(seed), samples.shape, cfg.noise_psd * waveforms.bandwidth)

    refs = _shifted(codes, delay_mismatch_samples)
    filtered = _matched_filter(samples, refs, waveforms)
    return Snapshot(
        y=filtered.reshape(-1),
        true_params=(tgt.range_m, tgt.angle_rad),
        seed=seed,
    )


def phased_chain_demo(
    geom: ArrayGeometry,
    tgt: TargetLocation,
    carrier: CarrierConfig,
    waveforms: WaveformConfig,
    cfg: NoiseAndPowerConfig,
    steer_at: TargetLocation,
    seed,
    include_noise: bool = True,
    delay_mismatch_samples: int = 0,
) -> Snapshot:
    """Beamformed chain: one waveform through weights conj(a(steer))/sqrt(M).

    With the beam steered at the true location the filtered output is
    rho b (monostatic b := a); steering elsewhere scales the signal by
    |a(true)^T conj(a(steer))| / M relative to the matched case.
    """
    _demo_scale_check(geom)
    pulse = np.ones(waveforms.num_samples_per_cpi)

    a_true = tx_steering(geom, tgt, carrier).values
    a_steer = tx_steering(geom, steer_at, carrier).values
    b = _rx_factor(geom, tgt, carrier)
    kap = complex(cfg.reflection_coeff)
    # ||a|| = sqrt(M) normalizes the beamformer to unit total power
    gain = a_true @ a_steer.conj() / math.sqrt(geom.num_tx)
    amp = kap * math.sqrt(cfg.total_power) * gain

    samples = amp * np.outer(b, pulse)
    if include_noise:
        samples = samples + _complex_noise(
            _rng(seed), samples.shape, cfg.noise_psd * waveforms.bandwidth)

    refs = _shifted(pulse[None, :], delay_mismatch_samples)
    filtered = _matched_filter(samples, refs, waveforms)
    return Snapshot(
        y=filtered.reshape(-1),
        true_params=(tgt.range_m, tgt.angle_rad),
        seed=seed,
    )
