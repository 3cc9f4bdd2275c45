"""vortexgrip: design and analysis toolkit for pneumatic vortex grippers.

Covers print-compensated nozzle sizing, a reduced-order lift model over
flat and curved soft surfaces, synthetic factorial experiment datasets,
and a forest+boost surrogate for lift prediction across the design space.
"""

from .aero import (
    AeroConstants,
    AirModel,
    LiftCurve,
    LiftEvaluator,
    NozzleFlow,
    PressureField,
    VortexFlowState,
    lift_curve,
    lift_force_uniform,
    net_lift,
    nozzle_exit_state,
    pressure_field,
    swirl_state,
)
from .config import Config, load_config, read_config, write_config
from .fabrication import (
    GREY,
    MATERIALS,
    TRANSPARENT,
    CompensationResult,
    ResinMaterial,
    compensate,
    printed_diameter,
    shrinkage_coefficient,
)
from .geometry import (
    FLAT_RADIUS_MM,
    FrictionElementSpec,
    GapField,
    GripperGeometry,
    STANDARD_GRIPPERS,
    STANDARD_RADII_MM,
    SurfaceFamily,
    SurfaceSpec,
    flat_surface,
    gap_field,
    leakage_asymmetry,
)
from .protocol import (
    CalibrationResult,
    Dataset,
    ExperimentCondition,
    ExperimentRecord,
    FactorialPlan,
    ForceTrace,
    STANDARD_PRESSURES_KPA,
    TrendTarget,
    augment,
    calibrate,
    generate_dataset,
    run_protocol,
    standard_plan,
    standard_surfaces,
)

__version__ = "0.1.0"
