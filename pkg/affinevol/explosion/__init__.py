from affinevol.explosion.moments import (
    CriticalMoments,
    Regime,
    WingSlopes,
    as_regime,
    critical_moments,
    cutoff_time,
    lee_slopes,
    sigma,
    time_function,
)
from affinevol.explosion.times import (
    Branch,
    ExplosionProfile,
    ExplosionTime,
    explosion_profile,
    explosion_time,
    explosion_time_stationary,
)

__all__ = [
    "Branch",
    "CriticalMoments",
    "ExplosionProfile",
    "ExplosionTime",
    "Regime",
    "WingSlopes",
    "as_regime",
    "critical_moments",
    "cutoff_time",
    "explosion_profile",
    "explosion_time",
    "explosion_time_stationary",
    "lee_slopes",
    "sigma",
    "time_function",
]
