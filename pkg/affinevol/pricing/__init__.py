from affinevol.pricing.black_scholes import bs_call, implied_variance, intrinsic
from affinevol.pricing.fourier import (
    DEFAULT_FOURIER,
    FourierConfig,
    FourierPricer,
    call_price,
    price_calls,
    stationary_call_price,
)
from affinevol.pricing.smile import (
    ForwardSmilePoint,
    SmilePoint,
    forward_smile,
    forward_smile_table,
    lewis_call_price_heston,
    smile,
    smile_table,
    wing_slope_ratio,
)

__all__ = [
    "DEFAULT_FOURIER",
    "ForwardSmilePoint",
    "FourierConfig",
    "FourierPricer",
    "SmilePoint",
    "bs_call",
    "call_price",
    "forward_smile",
    "forward_smile_table",
    "implied_variance",
    "intrinsic",
    "lewis_call_price_heston",
    "price_calls",
    "smile",
    "smile_table",
    "stationary_call_price",
    "wing_slope_ratio",
]
