# =============================================================================
# FILE: squeezing/reference_values.py
# PURPOSE:
#   Published scaling amplitudes for the three squeezing protocols, swept over
#   N = 400 ... 1000, together with the model each one is fitted with and the
#   tolerance a reproduction must meet.
# =============================================================================

from dataclasses import dataclass
from typing import Dict, Tuple

from squeezing.fitting import LOG_OVER_N, ScalingModel, power_model
from squeezing.protocols import ProtocolKind


class Quantity:
    T_OPT = "t_opt"
    F_Q_OPT = "f_q_opt"


@dataclass(frozen=True)
class ReferenceAmplitude:
    amplitude: float
    uncertainty: float
    tolerance: float  # relative


FIT_MODELS: Dict[Tuple[ProtocolKind, str], ScalingModel] = {
    (ProtocolKind.TAT, Quantity.T_OPT): LOG_OVER_N,
    (ProtocolKind.TNT, Quantity.T_OPT): LOG_OVER_N,
    (ProtocolKind.OAT, Quantity.T_OPT): power_model(-2.0 / 3.0),
    (ProtocolKind.TAT, Quantity.F_Q_OPT): power_model(2.0),
    (ProtocolKind.TNT, Quantity.F_Q_OPT): power_model(1.5),
    (ProtocolKind.OAT, Quantity.F_Q_OPT): power_model(5.0 / 3.0),
}

REFERENCE_AMPLITUDES: Dict[Tuple[ProtocolKind, str], ReferenceAmplitude] = {
    (ProtocolKind.TAT, Quantity.T_OPT): ReferenceAmplitude(0.4730, 0.0009, 0.02),
    (ProtocolKind.TNT, Quantity.T_OPT): ReferenceAmplitude(0.554, 0.001, 0.02),
    (ProtocolKind.OAT, Quantity.T_OPT): ReferenceAmplitude(1.144, 0.003, 0.01),
    (ProtocolKind.TAT, Quantity.F_Q_OPT): ReferenceAmplitude(0.3627, 0.0014, 0.02),
    (ProtocolKind.TNT, Quantity.F_Q_OPT): ReferenceAmplitude(1.32, 0.02, 0.03),
    (ProtocolKind.OAT, Quantity.F_Q_OPT): ReferenceAmplitude(1.152, 0.009, 0.02),
}

SWEEP_N_VALUES = tuple(range(400, 1001, 50))
