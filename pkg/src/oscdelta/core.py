"""Shared physics for the oscillating delta barrier.

Potential: V(x, t) = V0 * delta(x) * (1 + eps * cos(Omega * t)).

A scattering state at incident energy E carries sidebands at energies
E + n*hbar*Omega.  Channels with positive energy propagate; channels with
negative energy are evanescent (imaginary wavenumber, decaying branch).

Default units follow the hbar = 2m = 1 convention common in this problem,
but hbar and mass are explicit everywhere so other unit systems work.

Note on the wavenumber: we read the dispersion as k_n^2 = 2*m*E_n/hbar^2
(dimensionally consistent), i.e. k_n = sqrt(2*m*(E + n*hbar*Omega))/hbar.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum


class ChannelKind(Enum):
    PROPAGATING = "propagating"
    EVANESCENT = "evanescent"
    THRESHOLD = "threshold"


class Regime(Enum):
    """Frequency regimes: A: E > 2*hbar*Omega, B: hbar*Omega < E < 2*hbar*Omega,
    C: E < hbar*Omega."""

    A = "a"
    B = "b"
    C = "c"


@dataclass(frozen=True)
class RegimeInfo:
    regime: Regime
    on_boundary: bool = False


@dataclass(frozen=True)
class BarrierParams:
    """Oscillating delta barrier plus incident energy.

    V0    : barrier strength (energy * length), > 0 (0 allowed for the
            free-particle limit used in tests).
    eps   : modulation amplitude, 0 <= eps <= 1.
    Omega : modulation angular frequency, > 0.
    E     : incident energy, > 0.
    hbar, mass : unit system; defaults give hbar = 2m = 1.
    """

    V0: float
    eps: float
    Omega: float
    E: float
    hbar: float = 1.0
    mass: float = 0.5

    def __post_init__(self):
        if self.hbar <= 0 or self.mass <= 0:
            raise ValueError("hbar and mass must be positive")
        if self.V0 < 0:
            raise ValueError("V0 must be non-negative")
        if not (0.0 <= self.eps <= 1.0):
            raise ValueError("eps must be in [0, 1]")
        if self.Omega <= 0:
            raise ValueError("Omega must be positive")
        if self.E <= 0:
            raise ValueError("incident energy E must be positive")
        if not math.isfinite(self.B):
            raise ValueError("derived barrier scale B is not finite")

    @property
    def B(self) -> float:
        """Barrier scale 2*m*V0/hbar^2 entering the matching condition."""
        return 2.0 * self.mass * self.V0 / self.hbar**2


@dataclass(frozen=True)
class Channel:
    """One sideband: index n, frequency omega_n, wavenumber k_n."""

    n: int
    omega_n: float
    k_n: complex
    kind: ChannelKind

    @property
    def propagating(self) -> bool:
        return self.kind is ChannelKind.PROPAGATING


def channel(params: BarrierParams, n: int) -> Channel:
    """Sideband channel n: energy E + n*hbar*Omega, k_n = sqrt(2*m*E_n)/hbar.

    Negative-energy channels take the decaying branch k_n = i*kappa_n with
    kappa_n > 0.
    """
    E_n = params.E + n * params.hbar * params.Omega
    omega_n = E_n / params.hbar
    if E_n > 0:
        k = complex(math.sqrt(2.0 * params.mass * E_n) / params.hbar, 0.0)
        kind = ChannelKind.PROPAGATING
    elif E_n < 0:
        k = complex(0.0, math.sqrt(2.0 * params.mass * (-E_n)) / params.hbar)
        kind = ChannelKind.EVANESCENT
    else:
        k = complex(0.0, 0.0)
        kind = ChannelKind.THRESHOLD
    return Channel(n=n, omega_n=omega_n, k_n=k, kind=kind)


def classify_regime(params: BarrierParams) -> RegimeInfo:
    """Classify E against hbar*Omega and 2*hbar*Omega.

    Boundary equalities fall into the lower regime with on_boundary set.
    """
    hw = params.hbar * params.Omega
    if params.E > 2.0 * hw:
        return RegimeInfo(Regime.A)
    if params.E == 2.0 * hw:
        return RegimeInfo(Regime.B, on_boundary=True)
    if params.E > hw:
        return RegimeInfo(Regime.B)
    if params.E == hw:
        return RegimeInfo(Regime.C, on_boundary=True)
    return RegimeInfo(Regime.C)


def static_transmission(params: BarrierParams) -> float:
    """Transmission probability of the static (eps = 0) delta barrier.

    T0 = |1 + r0|^2 with r0 = 1/(2i*k0/B - 1), i.e. 1/(1 + (B/2k0)^2).
    """
    if params.V0 == 0.0:
        return 1.0
    k0 = channel(params, 0).k_n.real
    ratio = params.B / (2.0 * k0)
    return 1.0 / (1.0 + ratio * ratio)


@dataclass(frozen=True)
class SidebandSolution:
    """Reflection/transmission amplitudes per sideband.

    Continuity forces t_n = r_n for n != 0 and t_0 = 1 + r_0.  Fluxes are
    (k_n/k0)*|amplitude|^2 over propagating channels only; evanescent
    channels carry zero flux.
    """

    r: dict[int, complex]
    t: dict[int, complex]
    intensities: dict[int, float] = field(repr=False)
    transmitted_flux: dict[int, float] = field(repr=False)
    reflected_flux: dict[int, float] = field(repr=False)
    truncation: tuple[int, int] = (0, 0)
    residual: float = 0.0

    def flux_sum(self) -> float:
        return sum(self.transmitted_flux.values()) + sum(self.reflected_flux.values())

    def intensity(self, n: int) -> float:
        return self.intensities[n]


def build_solution(
    params: BarrierParams,
    r: dict[int, complex],
    truncation: tuple[int, int],
    residual: float = 0.0,
) -> SidebandSolution:
    """Derive t, intensities and fluxes from the reflection amplitudes."""
    t = {n: (1.0 + rn if n == 0 else rn) for n, rn in r.items()}
    intensities = {n: abs(tn) ** 2 for n, tn in t.items()}
    k0 = channel(params, 0).k_n.real
    t_flux: dict[int, float] = {}
    r_flux: dict[int, float] = {}
    for n in r:
        ch = channel(params, n)
        if ch.propagating:
            w = ch.k_n.real / k0
            t_flux[n] = w * abs(t[n]) ** 2
            r_flux[n] = w * abs(r[n]) ** 2
    return SidebandSolution(
        r=dict(r),
        t=t,
        intensities=intensities,
        transmitted_flux=t_flux,
        reflected_flux=r_flux,
        truncation=truncation,
        residual=residual,
    )
