"""Shared constants and helpers for the test suite."""

import math

from nfcrb.geometry import ArrayGeometry, CarrierConfig, TargetLocation

# reference carrier used by most oracle values (wavelength pinned, not freq)
WAVELENGTH = 0.1265
CARRIER = CarrierConfig.from_wavelength(WAVELENGTH)
SPACING = 0.0628


def rel_err(value, reference):
    return abs(value - reference) / abs(reference)


def mono_geom(num_tx, spacing=SPACING):
    return ArrayGeometry(num_tx, num_tx, spacing, spacing, 0.0)


def bi_geom(num_tx, num_rx, separation, spacing=SPACING):
    return ArrayGeometry(num_tx, num_rx, spacing, spacing, separation)


def intermediate_rel_errors(closed, exact, num_tx):
    """Relative errors of the five transmit intermediates.

    The two overlap terms and the cross term change sign with theta and are
    exactly zero at boresight, where the summation path leaves only rounding
    residue; their errors are therefore floored against the Cauchy-Schwarz
    ceiling of each quantity so a zero-vs-residue comparison reads as zero
    error instead of blowing up.
    """
    m = float(num_tx)
    ceil_c = math.sqrt(m * exact.angle_power)
    ceil_e = math.sqrt(exact.angle_power * exact.range_power)
    ceil_q = math.sqrt(m * exact.range_power)
    floor = 1e-9
    return {
        "angle_power": abs(closed.angle_power - exact.angle_power) / exact.angle_power,
        "angle_overlap": abs(closed.angle_overlap - exact.angle_overlap)
        / max(abs(exact.angle_overlap), floor * ceil_c),
        "cross_power": abs(closed.cross_power - exact.cross_power)
        / max(abs(exact.cross_power), floor * ceil_e),
        "range_power": abs(closed.range_power - exact.range_power) / exact.range_power,
        "range_overlap": abs(closed.range_overlap - exact.range_overlap)
        / max(abs(exact.range_overlap), floor * ceil_q),
    }


def target(range_m, angle_rad):
    return TargetLocation(range_m=range_m, angle_rad=angle_rad)
