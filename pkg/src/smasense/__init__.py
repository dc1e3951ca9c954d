"""Self-sensing proprioception for an SMA-actuated soft limb.

Library layout:

- beam:       constant-curvature statics (angle <-> force <-> contact)
- poly:       monomial expansion and least-squares fitting
- control:    supervisory temperature saturation + PI motor babbling
- plant:      phenomenological SMA limb simulator
- estimators: pose/force self-sensing and contact-force regression
- detector:   contact classification, threshold and T_max calibration
- datasets:   babbling data collection plans
- fileio:     dataset/model/calibration/report file formats
- cli:        the `smasense` command
- service:    real-time demo loop with a socket/WebSocket interface
"""

from .beam import (
    LimbParams,
    angle_from_force,
    contact_statics,
    sma_force_from_angle,
    tip_displacement,
    zeta_from_geometry,
)
from .control import (
    BabblerParams,
    BabblerState,
    SafetyParams,
    adjusted_max_temp,
    apply_supervisor,
    babble_step,
    random_setpoint_schedule,
    saturation_limit,
    thermal_step,
)
from .detector import (
    CalibrationResult,
    ConfusionCounts,
    calibrate_threshold,
    classify,
    classify3,
    confusion,
    precision_recall_f1,
    sweep_tmax,
)
from .estimators import (
    ErrorReport,
    SwitchingModel,
    fit_contact_model,
    fit_pose_model,
    label_sma_force,
    predict_pose,
    predict_sma_force,
    split_hot_cold,
)
from .plant import PlantParams, PlantState, SampleFrame, Scenario, initial_state, step
from .poly import PolyModel, count_monomials, expand_monomials, fit_least_squares, kfold_split, predict

__version__ = "0.1.0"
