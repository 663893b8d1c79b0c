"""Modeling toolkit for two-phase (twist + overtwist) twisted string actuators."""

from .calibration import (ComparisonReport, FitResult, IllPosedError, MeasurementSeries, ModelKind,
                          compare_models, fit_bundle_radius, fit_radius_and_length, rmse)
from .dataio import ParseError, StringSystemConfig, parse_config, parse_cycle_log, parse_measurement_csv
from .geometry import (BundlePacking, bundle_diameter_packed, bundle_diameter_ring, diameter_model_error,
                       pack_bundle, predict_diameter)
from .kinematics import (KinematicParams, OutOfRangeError, contraction_percent, forward_constant,
                         forward_variable, helix_state, inverse_constant, overtwist_onset_turns,
                         rad_to_turns, turns_to_rad)
from .lifecycle import (CycleLog, LifeCycleRecord, LoadLifeFit, detect_failure, fit_load_life,
                        predict_endurance, total_contraction, validate_record)

__version__ = "0.1.0"
