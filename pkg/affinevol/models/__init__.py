from .bates import (
    BatesGenerator,
    BatesParams,
    bates_closed_h,
    bates_closed_Tstar,
    bates_closed_w,
    bates_generator,
)
from .bns import (
    BNSClosedForm,
    BNSGenerator,
    BNSParams,
    GammaOU,
    InverseGaussianOU,
    PoissonOU,
    Subordinator,
    bns_closed,
    bns_generator,
)
from .factory import (
    PRESETS,
    Model,
    build_generator,
    build_model,
    load_model_spec,
    preset_spec,
)
from .heston import (
    HestonGenerator,
    HestonJumpGenerator,
    HestonJumpParams,
    HestonParams,
    HestonStationary,
    compensated_jump_cgf,
    heston_closed_h,
    heston_closed_riccati,
    heston_closed_Tstar,
    heston_closed_w,
    heston_excluded_case,
    heston_generator,
    heston_interval_I,
    heston_jump_generator,
    heston_stationary_closed,
    price_jump_cgf,
)

__all__ = [
    "BatesGenerator",
    "BatesParams",
    "bates_closed_h",
    "bates_closed_Tstar",
    "bates_closed_w",
    "bates_generator",
    "BNSClosedForm",
    "BNSGenerator",
    "BNSParams",
    "GammaOU",
    "InverseGaussianOU",
    "PoissonOU",
    "Subordinator",
    "bns_closed",
    "bns_generator",
    "PRESETS",
    "Model",
    "build_generator",
    "build_model",
    "load_model_spec",
    "preset_spec",
    "HestonGenerator",
    "HestonJumpGenerator",
    "HestonJumpParams",
    "HestonParams",
    "HestonStationary",
    "compensated_jump_cgf",
    "heston_closed_h",
    "heston_closed_riccati",
    "heston_closed_Tstar",
    "heston_closed_w",
    "heston_excluded_case",
    "heston_generator",
    "heston_interval_I",
    "heston_jump_generator",
    "heston_stationary_closed",
    "price_jump_cgf",
]
