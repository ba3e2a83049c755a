"""Fractional decoding of one-point algebraic geometry codes over extension fields."""

from .code import (DecodeFailure, EvalCode, MiscorrectionDetected,
                   NoInformationSetError)
from .curve import CurveModel, NotDivisibleError, Point, RingElement, exact_divide
from .field import (ExtensionField, ExtensionTower, PrimeField, PrimePowerField,
                    extension_field, parse_field_spec, prime_field,
                    prime_power_field)
from .fractional import (FractionalSpec, InconsistentRows, PartitionPlan, apply_T,
                         build_partition, fractional_decode, project_received,
                         radius_report, recover_function, recover_function_joint,
                         s_projection)
from .harness import (ExperimentConfig, ReceivedWord, SeedStream, build_instance,
                      corrupt, describe, run_experiment)
from .interleaved import (CollabConfig, InterleavedCode, build_collab_system,
                          collab_decode, sweep_locator_excess)

__version__ = "0.1.0"

__all__ = [
    "CollabConfig", "CurveModel", "DecodeFailure", "EvalCode", "ExperimentConfig",
    "ExtensionField", "ExtensionTower", "FractionalSpec", "InconsistentRows",
    "InterleavedCode", "MiscorrectionDetected", "NoInformationSetError",
    "NotDivisibleError",
    "PartitionPlan", "Point", "PrimeField", "PrimePowerField", "ReceivedWord",
    "RingElement", "SeedStream", "apply_T", "build_collab_system",
    "build_instance", "build_partition", "collab_decode", "corrupt", "describe",
    "exact_divide", "extension_field", "fractional_decode", "parse_field_spec",
    "prime_field", "prime_power_field", "project_received", "radius_report",
    "recover_function", "recover_function_joint", "run_experiment",
    "s_projection", "sweep_locator_excess",
]
