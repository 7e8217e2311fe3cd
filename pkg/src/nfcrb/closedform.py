"""Closed-form CRBs: exact-integral intermediates, the theorem-level bounds
for every mode/topology, asymptotic regime formulas, second-order Taylor
results, and far-field plane-wave references."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, SingularGeometryError
from .geometry import (
    EPS_WARN_THRESHOLD,
    ArrayGeometry,
    CarrierConfig,
    Mode,
    TargetLocation,
    Topology,
    amplitude_model_valid,
    epsilon_tx,
)
from .fim import (
    CrbMethod,
    CrbResult,
    NoiseAndPowerConfig,
    _crb_from_intermediates,
    receive_sums,
    transmit_sums,
)


@dataclass(frozen=True)
class IntermediateParams:
    """The quadratic/overlap sums that the closed-form CRBs are built from.

    angle_power and range_power are sums of squared phase derivatives with
    respect to angle and range; cross_power is their mixed sum; the two
    overlap terms (response vs derivative) are purely imaginary. The rx_*
    fields carry the receive-side counterparts for the bistatic topology
    (zero for monostatic; the rx overlap terms vanish by index symmetry).
    """

    angle_power: float
    angle_overlap: complex
    cross_power: float
    range_power: float
    range_overlap: complex
    rx_angle_power: float = 0.0
    rx_range_power: float = 0.0
    rx_cross_power: float = 0.0
    rx_angle_overlap: complex = 0.0j
    rx_range_overlap: complex = 0.0j

    def __post_init__(self):
        if self.angle_power < 0 or self.range_power < 0:
            raise DomainError("power sums must be nonnegative")


def _stable_terms(u: float, th: float):
    # shared pieces of the closed forms, arranged to avoid cancellation for
    # small u: differences of near-equal square roots and logarithms of
    # near-unity ratios are rewritten via their exact difference forms
    sth, cth = math.sin(th), math.cos(th)
    a_plus = 0.25 * u * u + u * sth + 1.0
    a_minus = 0.25 * u * u - u * sth + 1.0
    s_plus, s_minus = math.sqrt(a_plus), math.sqrt(a_minus)
    root_diff = -2.0 * u * sth / (s_minus + s_plus)
    log_ratio = math.log1p(-2.0 * u * sth / a_plus)
    span = math.atan(0.5 * u / cth - math.tan(th)) + math.atan(0.5 * u / cth + math.tan(th))
    rise = math.asinh((0.5 * u - sth) / cth) - math.asinh((-0.5 * u - sth) / cth)
    return s_minus, s_plus, root_diff, log_ratio, span, rise


def _check_transmit_regular(geom: ArrayGeometry, tgt: TargetLocation):
    # the float cos of pi/2 is ~6e-17, so gate on the angle itself
    if abs(tgt.angle_rad) >= math.pi / 2:
        raise SingularGeometryError("closed forms are singular at theta = +-pi/2")
    if epsilon_tx(geom, tgt) >= 1.0:
        raise DomainError("element spacing must be smaller than the target range")


def intermediates_closed(geom: ArrayGeometry, tgt: TargetLocation, carrier: CarrierConfig) -> IntermediateParams:
    """Closed-form (integral) evaluation of the intermediate sums.

    Exact up to the sum-to-integral step, so agreement with the summation
    path improves as the spacing-to-range ratio shrinks. Receive-side terms
    are produced whenever the geometry is bistatic; they involve no
    integral approximation.
    """
    _check_transmit_regular(geom, tgt)
    lam = carrier.wavelength
    r, th = tgt.range_m, tgt.angle_rad
    eps = epsilon_tx(geom, tgt)
    u = geom.num_tx * eps
    sth, cth = math.sin(th), math.cos(th)
    c2th = math.cos(2.0 * th)
    _, _, root_diff, log_ratio, span, rise = _stable_terms(u, th)

    angle_power = (4.0 * math.pi ** 2 * r * r * cth * cth / (lam * lam * eps)) * (
        u + sth * log_ratio - (c2th / cth) * span
    )
    angle_im = (2.0 * math.pi * r * cth / (lam * eps)) * (root_diff + rise * sth)
    cross_power = (4.0 * math.pi ** 2 * r * cth / (lam * lam * eps)) * (
        u * sth - 0.5 * c2th * log_ratio - span * math.sin(2.0 * th)
    )
    range_power = (4.0 * math.pi ** 2 / (lam * lam * eps)) * (
        sth * sth * u - log_ratio * cth * cth * sth + span * cth * c2th
    )
    range_im = (2.0 * math.pi / (lam * eps)) * (rise * cth * cth - sth * root_diff)

    rx_a = rx_s = rx_k = 0.0
    if geom.array_separation > 0.0:
        rx_a, rx_s, rx_k = receive_sums(geom, tgt, carrier)
    return IntermediateParams(
        angle_power=max(angle_power, 0.0),
        angle_overlap=-1j * angle_im,
        cross_power=cross_power,
        range_power=max(range_power, 0.0),
        range_overlap=1j * range_im,
        rx_angle_power=rx_a,
        rx_range_power=rx_s,
        rx_cross_power=rx_k,
    )


def intermediates_exact(geom: ArrayGeometry, tgt: TargetLocation, carrier: CarrierConfig) -> IntermediateParams:
    """Same quantities as intermediates_closed but by direct summation."""
    a_s, c_ov, e_s, p_s, q_ov = transmit_sums(geom, tgt, carrier)
    rx_a = rx_s = rx_k = 0.0
    if geom.array_separation > 0.0:
        rx_a, rx_s, rx_k = receive_sums(geom, tgt, carrier)
    return IntermediateParams(
        angle_power=a_s, angle_overlap=c_ov, cross_power=e_s,
        range_power=p_s, range_overlap=q_ov,
        rx_angle_power=rx_a, rx_range_power=rx_s, rx_cross_power=rx_k,
    )


def _model_warnings(geom: ArrayGeometry, tgt: TargetLocation) -> tuple:
    w = []
    if epsilon_tx(geom, tgt) >= EPS_WARN_THRESHOLD:
        w.append(
            f"tx spacing-to-range ratio {epsilon_tx(geom, tgt):.3g} >= "
            f"{EPS_WARN_THRESHOLD}; closed-form intermediates lose accuracy"
        )
    if not amplitude_model_valid(geom, tgt):
        w.append("target range is close to the transmit aperture; the constant-amplitude model is strained")
    return tuple(w)


def _closed_crb(geom, tgt, carrier, cfg, mode, topology) -> CrbResult:
    ip = intermediates_closed(geom, tgt, carrier)
    pref = 1.0 / (2.0 * cfg.snr_linear * cfg.time_bandwidth)
    return _crb_from_intermediates(
        geom.num_tx, geom.num_rx,
        ip.angle_power, ip.angle_overlap, ip.cross_power, ip.range_power, ip.range_overlap,
        ip.rx_angle_power, ip.rx_range_power, ip.rx_cross_power,
        pref, mode, topology, CrbMethod.CLOSED_FORM, _model_warnings(geom, tgt),
    )


def crb_mono_mimo(geom, tgt, carrier, cfg: NoiseAndPowerConfig) -> CrbResult:
    """Closed-form bounds for the monostatic orthogonal-waveform mode."""
    return _closed_crb(geom, tgt, carrier, cfg, Mode.MIMO, Topology.MONOSTATIC)


def crb_mono_phased(geom, tgt, carrier, cfg: NoiseAndPowerConfig) -> CrbResult:
    """Closed-form bounds for the monostatic beamformed mode; exactly 2/M
    times the orthogonal-waveform bounds."""
    return _closed_crb(geom, tgt, carrier, cfg, Mode.PHASED, Topology.MONOSTATIC)


def crb_bistatic_mimo(geom, tgt, carrier, cfg: NoiseAndPowerConfig) -> CrbResult:
    """Closed-form bounds with near-field transmit and far-field receive."""
    if geom.array_separation <= 0.0:
        raise DomainError("bistatic bounds require array_separation > 0")
    return _closed_crb(geom, tgt, carrier, cfg, Mode.MIMO, Topology.BISTATIC_NEAR_FAR_TX)


def crb_bistatic_phased(geom, tgt, carrier, cfg: NoiseAndPowerConfig) -> CrbResult:
    """Beamformed bistatic sensing with a far-field receive array: the
    angle/range information block is rank one, so nothing is identifiable."""
    if geom.array_separation <= 0.0:
        raise DomainError("bistatic bounds require array_separation > 0")
    return CrbResult.unidentifiable(CrbMethod.CLOSED_FORM)


def crb_closed(geom, tgt, carrier, cfg: NoiseAndPowerConfig, mode: Mode, topology: Topology) -> CrbResult:
    """Dispatch to the closed-form bound for any mode/topology pair."""
    if topology is Topology.MONOSTATIC:
        if mode is Mode.MIMO:
            return crb_mono_mimo(geom, tgt, carrier, cfg)
        return crb_mono_phased(geom, tgt, carrier, cfg)
    if mode is Mode.MIMO:
        return crb_bistatic_mimo(geom, tgt, carrier, cfg)
    return crb_bistatic_phased(geom, tgt, carrier, cfg)


class AsymptoticRegime(enum.Enum):
    LARGE_APERTURE = "LargeAperture"
    INFINITE_APERTURE = "InfiniteAperture"
    SMALL_APERTURE = "SmallAperture"


def xi_correction(theta: float) -> float:
    """Angle-dependent factor in (0.6, 1] relating the small-aperture bound
    to the plane-wave reference."""
    if abs(theta) > math.pi / 2:
        raise DomainError("theta outside [-pi/2, pi/2]")
    sth2 = math.sin(theta) ** 2
    cth = math.cos(theta)
    return (6.0 * sth2 + cth * cth * math.cos(2.0 * theta)) / (9.0 * sth2 + cth ** 6)


def _guarded(crb_t, crb_r, method, warnings) -> CrbResult:
    # asymptotic formulas can leave their validity region; never emit a
    # negative or NaN bound
    ok_t = math.isfinite(crb_t) and crb_t >= 0.0
    ok_r = math.isfinite(crb_r) and crb_r >= 0.0
    if not (ok_t and ok_r):
        return CrbResult.unidentifiable(
            method, warnings + ("formula left its validity region; bound dropped",))
    return CrbResult(crb_theta=crb_t, crb_range=crb_r, identifiable=True,
                     method=method, warnings=warnings)


def _range_blind(crb_t, method, warnings) -> CrbResult:
    # finite angle bound, no range information: reported unidentifiable
    # with the angle value preserved for reference curves
    if not (math.isfinite(crb_t) and crb_t >= 0.0):
        return CrbResult.unidentifiable(method, warnings)
    return CrbResult(crb_theta=crb_t, crb_range=math.inf, identifiable=False,
                     method=method, warnings=warnings + ("no range information in this model",))


def crb_asymptotic(
    geom: ArrayGeometry,
    tgt: TargetLocation,
    carrier: CarrierConfig,
    cfg: NoiseAndPowerConfig,
    regime: AsymptoticRegime,
    mode: Mode,
    topology: Topology,
) -> CrbResult:
    """Regime-limit bounds.

    Monostatic: LARGE_APERTURE keeps the leading aperture terms, trusted for
    aperture >> range; INFINITE_APERTURE is the aperture-to-infinity limit;
    SMALL_APERTURE is the plane-wave reference scaled by xi_correction (no
    range information survives there). Bistatic: the boresight limits, with
    range information vanishing as the aperture grows.
    """
    lam = carrier.wavelength
    m, n = geom.num_tx, geom.num_rx
    d_t, d_r = geom.tx_spacing, geom.rx_spacing
    r, th = tgt.range_m, tgt.angle_rad
    sep = geom.array_separation
    pref = 1.0 / (2.0 * cfg.snr_linear * cfg.time_bandwidth)
    u = m * d_t / r
    sth, cth = math.sin(th), math.cos(th)
    method = CrbMethod.ASYMPTOTIC

    warns = []
    if regime is AsymptoticRegime.LARGE_APERTURE and u < 10.0:
        warns.append(f"aperture-to-range ratio {u:.3g} is below the large-aperture regime")
    elif regime is AsymptoticRegime.INFINITE_APERTURE and u < 100.0:
        warns.append(f"aperture-to-range ratio {u:.3g} is far from the infinite-aperture limit")
    elif regime is AsymptoticRegime.SMALL_APERTURE and u > 0.1:
        warns.append(f"aperture-to-range ratio {u:.3g} is above the small-aperture regime")
    warns = tuple(warns)

    if topology is Topology.BISTATIC_NEAR_FAR_TX:
        if mode is Mode.PHASED:
            return CrbResult.unidentifiable(method, warns)
        if sep <= 0.0:
            raise DomainError("bistatic asymptotics require array_separation > 0")
        if th != 0.0:
            warns = warns + ("boresight-only formula evaluated off boresight",)
        if sep == r:
            raise SingularGeometryError("target range equals the array separation")
        if regime is AsymptoticRegime.SMALL_APERTURE:
            lever = (r / (sep - r)) ** 2
            crb_t = pref * 3.0 * lam * lam / (
                math.pi ** 2 * n * (d_r * d_r * lever * (n * n - 1.0) + d_t * d_t * m * m))
            return _range_blind(crb_t, method, warns + ("range bound diverges in this regime",))
        crb_t = pref * lam * lam / (
            math.pi ** 2 * r * r * n
            * (d_r * d_r * (n * n - 1.0) / (3.0 * (sep - r) ** 2) + 4.0))
        return _range_blind(crb_t, method, warns + ("range bound grows without limit with the aperture",))

    # monostatic
    if abs(th) >= math.pi / 2:
        raise SingularGeometryError("asymptotic bounds are singular at theta = +-pi/2")
    if regime is AsymptoticRegime.SMALL_APERTURE:
        xi = xi_correction(th)
        if mode is Mode.MIMO:
            crb_t = pref * 3.0 * lam * lam * xi / (2.0 * math.pi ** 2 * d_t * d_t * m ** 3 * cth * cth)
        else:
            crb_t = pref * 3.0 * lam * lam * xi / (math.pi ** 2 * d_t * d_t * m ** 4 * cth * cth)
        return _range_blind(crb_t, method, warns + ("range bound diverges in this regime",))

    if regime is AsymptoticRegime.INFINITE_APERTURE:
        if mode is Mode.MIMO:
            crb_t = pref * lam * lam * d_t * sth * sth / (8.0 * math.pi ** 3 * r ** 3 * cth)
            crb_r = pref * lam * lam * d_t * cth / (8.0 * math.pi ** 3 * r)
        else:
            crb_t = pref * lam * lam * d_t * sth * sth / (4.0 * m * math.pi ** 3 * r ** 3 * cth)
            crb_r = pref * lam * lam * d_t * cth / (4.0 * m * math.pi ** 3 * r)
        if th == 0.0:
            warns = warns + ("angle limit degenerates to 0 at boresight",)
        return _guarded(crb_t, crb_r, method, warns)

    # large aperture: leading-order aperture expansion
    if u <= 0.0 or cth <= 0.0:
        raise SingularGeometryError("large-aperture expansion needs u > 0 and |theta| < pi/2")
    log_t = math.log(u / cth)
    core = math.pi * u / cth - 4.0 * log_t * log_t
    c2th = math.cos(2.0 * th)
    num_t = lam * lam * (
        (u * sth) ** 2 + math.pi * u * cth * c2th - 4.0 * (cth * cth * log_t + sth * sth) ** 2)
    num_r = lam * lam * (
        u * u + math.pi * u * c2th / cth - 4.0 * (log_t - 1.0) ** 2 * sth * sth)
    if mode is Mode.MIMO:
        crb_t = pref * num_t / (8.0 * math.pi ** 2 * r * r * m * core * cth * cth)
        crb_r = pref * num_r / (8.0 * math.pi ** 2 * m * core)
    else:
        crb_t = pref * num_t / (4.0 * math.pi ** 2 * r * r * m * m * core * cth * cth)
        crb_r = pref * num_r / (4.0 * math.pi ** 2 * m * m * core)
    return _guarded(crb_t, crb_r, method, warns)


def crb_taylor(geom, tgt, carrier, cfg: NoiseAndPowerConfig, mode: Mode) -> CrbResult:
    """Bounds under the second-order (Fresnel) distance approximation.

    The angle bound collapses to the plane-wave reference; the range bound
    stays finite but scales differently from the exact-distance result.
    """
    lam = carrier.wavelength
    m = geom.num_tx
    d_t = geom.tx_spacing
    r, th = tgt.range_m, tgt.angle_rad
    if abs(th) >= math.pi / 2:
        raise SingularGeometryError("Taylor bounds are singular at theta = +-pi/2")
    cth = math.cos(th)
    if m < 3:
        return CrbResult.unidentifiable(CrbMethod.TAYLOR)
    pref = 1.0 / (2.0 * cfg.snr_linear * cfg.time_bandwidth)
    m2 = float(m) * m
    quartic = (math.pi * d_t * d_t * cth * cth) ** 2
    # range numerator shared by both modes
    inner = 15.0 * r * r + (d_t * math.sin(th)) ** 2 * (m2 - 4.0)
    if mode is Mode.MIMO:
        crb_t = pref * 3.0 * lam * lam / (2.0 * math.pi ** 2 * d_t * d_t * m * (m2 - 1.0) * cth * cth)
        crb_r = pref * 6.0 * lam * lam * r * r * inner / (quartic * m * (m2 - 1.0) * (m2 - 4.0))
    else:
        crb_t = pref * 3.0 * lam * lam / (math.pi ** 2 * d_t * d_t * m2 * (m2 - 1.0) * cth * cth)
        crb_r = pref * 12.0 * lam * lam * r * r * inner / (quartic * m2 * (m2 - 1.0) * (m2 - 4.0))
    return CrbResult(crb_theta=crb_t, crb_range=crb_r, identifiable=True,
                     method=CrbMethod.TAYLOR)


def crb_farfield_upw(geom, tgt, carrier, cfg: NoiseAndPowerConfig, mode: Mode, topology: Topology) -> CrbResult:
    """Plane-wave reference bounds: finite for angle, none for range."""
    lam = carrier.wavelength
    m, n = geom.num_tx, geom.num_rx
    d_t, d_r = geom.tx_spacing, geom.rx_spacing
    if abs(tgt.angle_rad) >= math.pi / 2:
        raise SingularGeometryError("plane-wave bounds are singular at theta = +-pi/2")
    cth = math.cos(tgt.angle_rad)
    pref = 1.0 / (2.0 * cfg.snr_linear * cfg.time_bandwidth)
    m2 = float(m) * m
    if topology is Topology.BISTATIC_NEAR_FAR_TX:
        if mode is Mode.PHASED:
            return CrbResult.unidentifiable(CrbMethod.FARFIELD_UPW)
        denom = math.pi ** 2 * n * (d_r * d_r * (n * n - 1.0) + d_t * d_t * (m2 - 1.0)) * cth * cth
        if denom <= 0.0:
            return CrbResult.unidentifiable(CrbMethod.FARFIELD_UPW)
        return _range_blind(pref * 3.0 * lam * lam / denom, CrbMethod.FARFIELD_UPW, ())
    if m < 2:
        return CrbResult.unidentifiable(CrbMethod.FARFIELD_UPW)
    if mode is Mode.MIMO:
        crb_t = pref * 3.0 * lam * lam / (2.0 * math.pi ** 2 * d_t * d_t * m * (m2 - 1.0) * cth * cth)
    else:
        crb_t = pref * 3.0 * lam * lam / (math.pi ** 2 * d_t * d_t * m2 * (m2 - 1.0) * cth * cth)
    return _range_blind(crb_t, CrbMethod.FARFIELD_UPW, ())


def boresight_range_crb(aperture_ratio: float, num_rx: int, wavelength: float, cfg: NoiseAndPowerConfig) -> float:
    """Bistatic boresight range bound as a function of x = half-aperture
    over range. Independent of the receive spacing and of range itself."""
    x = aperture_ratio
    if x <= 0.0:
        raise DomainError("aperture ratio must be positive")
    shape = math.atan(x) / x - (math.asinh(x) / x) ** 2
    pref = 1.0 / (2.0 * cfg.snr_linear * cfg.time_bandwidth)
    return pref * wavelength ** 2 / (4.0 * math.pi ** 2 * num_rx * shape)


def _golden_min(fn, lo: float, hi: float, tol: float) -> float:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)


def bistatic_range_crb_minimizer(geom, tgt, carrier, cfg: NoiseAndPowerConfig) -> tuple:
    """Golden-section minimum of the boresight range bound over the
    half-aperture-to-range ratio. Returns (best ratio, minimal bound)."""
    if tgt.angle_rad != 0.0:
        raise DomainError("the boresight range bound requires theta = 0")
    fn = lambda x: boresight_range_crb(x, geom.num_rx, carrier.wavelength, cfg)
    x_opt = _golden_min(fn, 1e-3, 100.0, 1e-6)
    return x_opt, fn(x_opt)
