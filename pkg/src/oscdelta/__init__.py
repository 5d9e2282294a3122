"""Sideband scattering and tunneling time scales of an oscillating delta barrier."""

from .core import (
    BarrierParams,
    Channel,
    ChannelKind,
    Regime,
    RegimeInfo,
    SidebandSolution,
    channel,
    classify_regime,
    static_transmission,
)
from .fs import assemble, converge_truncation, solve_fs
from .ts import DecayExponents, decay_exponents, solve_ts
from .tdse import PacketSpec, TdseRun, WellSpec, propagate, transmitted_probability
from .analysis import (
    RectBarrierParams,
    SweepResult,
    asymmetry,
    energy_averaged_transmission,
    frequency_sweep,
    regime_c_check,
    tau_bl_opaque,
    tau_bl_rect,
    tau_delta,
)

__all__ = [
    "BarrierParams", "Channel", "ChannelKind", "Regime", "RegimeInfo",
    "SidebandSolution", "channel", "classify_regime", "static_transmission",
    "assemble", "converge_truncation", "solve_fs",
    "DecayExponents", "decay_exponents", "solve_ts",
    "PacketSpec", "TdseRun", "WellSpec", "propagate", "transmitted_probability",
    "RectBarrierParams", "SweepResult", "asymmetry",
    "energy_averaged_transmission", "frequency_sweep", "regime_c_check",
    "tau_bl_opaque", "tau_bl_rect", "tau_delta",
]

__version__ = "0.1.0"
