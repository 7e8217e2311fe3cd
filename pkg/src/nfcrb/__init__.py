"""Cramer-Rao bounds for near-field angle/range sensing with very large
uniform linear arrays: exact element-sum and closed-form bounds, asymptotic
and far-field reference curves, waveform-level simulation, and grid
estimators for empirical verification."""

from .closedform import (
    AsymptoticRegime,
    IntermediateParams,
    bistatic_range_crb_minimizer,
    boresight_range_crb,
    crb_asymptotic,
    crb_bistatic_mimo,
    crb_bistatic_phased,
    crb_closed,
    crb_farfield_upw,
    crb_mono_mimo,
    crb_mono_phased,
    crb_taylor,
    intermediates_closed,
    intermediates_exact,
    xi_correction,
)
from .errors import (
    ConfigError,
    CovarianceLoadingError,
    DegenerateGeometryError,
    DomainError,
    NfcrbError,
    NumericalError,
    SingularGeometryError,
)
from .estimator import (
    EstimateResult,
    EstimatorKind,
    GridSpec,
    ObservationGridBuilder,
    RmseReport,
    capon_spectrum,
    matched_field_ml,
    monte_carlo_rmse,
)
from .experiment import (
    ExperimentConfig,
    MonteCarloConfig,
    SweepSpec,
    csv_text,
    parse_config_file,
    parse_config_text,
    presets,
    run_experiment,
    serialize_config,
    write_csv,
)
from .fim import (
    CrbMethod,
    CrbResult,
    FimMatrix,
    NoiseAndPowerConfig,
    crb_exact_sum,
    crb_from_fim,
    fim_numeric,
    mode_energy_scale,
    receive_sums,
    transmit_sums,
)
from .geometry import (
    ArrayGeometry,
    CarrierConfig,
    Mode,
    SensingScenario,
    TargetLocation,
    Topology,
    amplitude_model_valid,
    angular_span,
    bistatic_transform,
    epsilon_tx,
    exact_rx_range,
    exact_tx_range,
    taylor_tx_range,
)
from .signalsim import (
    Snapshot,
    WaveformConfig,
    WaveformFamily,
    mimo_chain_demo,
    orthogonal_codes,
    phased_chain_demo,
    reflection_amplitude,
    synth_snapshot,
)
from .steering import (
    ObservationVector,
    SteeringVector,
    build_observation,
    direction_sine_derivs,
    observation_from_scenario,
    rx_steering_far,
    rx_steering_near,
    tx_steering,
)

__version__ = "0.1.0"
