from salbp.formulations.config import (
    IMPULSE,
    IMPULSE_FAMILIES,
    LEVELS,
    STEP,
    FormulationConfig,
    all_configs,
    impulse,
    parse_config,
    step,
)
from salbp.formulations.model import (
    Constraint,
    LinearModel,
    ModelStats,
    Variable,
    build_model,
    emit_precedence,
    emit_station_limits,
    model_stats,
)
from salbp.formulations.points import (
    FamilyVerdict,
    FeasibilityReport,
    FractionalPoint,
    check_point,
    convert_impulse_to_step,
)
from salbp.formulations.rows import TAGS, Row

__all__ = [
    "IMPULSE",
    "IMPULSE_FAMILIES",
    "LEVELS",
    "STEP",
    "TAGS",
    "Constraint",
    "FamilyVerdict",
    "FeasibilityReport",
    "FormulationConfig",
    "FractionalPoint",
    "LinearModel",
    "ModelStats",
    "Row",
    "Variable",
    "all_configs",
    "build_model",
    "check_point",
    "convert_impulse_to_step",
    "emit_precedence",
    "emit_station_limits",
    "impulse",
    "model_stats",
    "parse_config",
    "step",
]
