"""Long-term and moment-explosion analysis of affine volatility models."""

__version__ = "0.1.0"
