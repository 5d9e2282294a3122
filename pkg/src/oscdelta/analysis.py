"""Frequency-sweep analytics and tunneling time scales.

The first-order sideband asymmetry F(Omega) = (I_1 - I_{-1})/(I_1 + I_{-1})
with I_n = |t_n|^2 probes a time scale of the delta barrier,
tau = 2*hbar^3/(m*V0^2): in the deep tunneling limit F = -Omega*tau for
E > hbar*Omega.  The rectangular-barrier traversal time of the
quasi-static sideband analysis is provided for reference; it vanishes in
the delta limit, unlike tau above.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core import BarrierParams, Regime, SidebandSolution, classify_regime
from .fs import converge_truncation
from .ts import solve_ts


class UndefinedAsymmetryError(ValueError):
    """Both first sidebands carry zero intensity."""


def asymmetry(sol: SidebandSolution) -> float:
    """First-sideband asymmetry (I_1 - I_{-1})/(I_1 + I_{-1}), I_n = |t_n|^2."""
    i_p, i_m = sol.intensities[1], sol.intensities[-1]
    if i_p + i_m == 0.0:
        raise UndefinedAsymmetryError("I_1 + I_{-1} = 0")
    return (i_p - i_m) / (i_p + i_m)


def tau_delta(params: BarrierParams) -> float:
    """Delta-barrier time scale 2*hbar^3/(m*V0^2)."""
    return 2.0 * params.hbar**3 / (params.mass * params.V0**2)


@dataclass(frozen=True)
class RectBarrierParams:
    """Rectangular barrier of height V and width d in the tunneling regime.

    kappa = sqrt(2m(V-E))/hbar, k = sqrt(2mE)/hbar, and k0 here denotes
    sqrt(2mV)/hbar, the symbol of the reference traversal-time formula; it
    is unrelated to the incident wavenumber k_0 of the delta problem.
    """

    V: float
    d: float
    E: float
    hbar: float = 1.0
    mass: float = 0.5

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError("width d must be positive")
        if not (self.V > self.E > 0):
            raise ValueError("tunneling configuration requires V > E > 0")

    @property
    def kappa(self) -> float:
        return math.sqrt(2.0 * self.mass * (self.V - self.E)) / self.hbar

    @property
    def k(self) -> float:
        return math.sqrt(2.0 * self.mass * self.E) / self.hbar

    @property
    def k0(self) -> float:
        return math.sqrt(2.0 * self.mass * self.V) / self.hbar


def tau_bl_rect(rect: RectBarrierParams) -> float:
    """Low-frequency traversal time of the modulated rectangular barrier.

    tau = (m/(hbar*kappa^2)) * sqrt(N/D) with
    N = (kappa^2-k^2)^2 kappa^2 d^2 + k0^4 (1+kappa^2 d^2) sinh^2(kappa d)
        + k0^2 kappa d (kappa^2-k^2) sinh(2 kappa d),
    D = 4 k^2 kappa^2 + k0^4 sinh^2(kappa d).

    Vanishes in the delta limit d -> 0 with V*d fixed.
    """
    kap, k, k0, d = rect.kappa, rect.k, rect.k0, rect.d
    kd = kap * d
    num = (
        (kap**2 - k**2) ** 2 * kap**2 * d**2
        + k0**4 * (1.0 + kd**2) * math.sinh(kd) ** 2
        + k0**2 * kd * (kap**2 - k**2) * math.sinh(2.0 * kd)
    )
    den = 4.0 * k**2 * kap**2 + k0**4 * math.sinh(kd) ** 2
    return rect.mass / (rect.hbar * kap**2) * math.sqrt(num / den)


def tau_bl_opaque(rect: RectBarrierParams) -> float:
    """Opaque-limit (kappa*d >> 1) traversal time m*d/(hbar*kappa)."""
    return rect.mass * rect.d / (rect.hbar * rect.kappa)


def asymmetry_highfreq(rect: RectBarrierParams, Omega: float) -> float:
    """High-frequency opaque-barrier asymmetry tanh(Omega * tau_opaque)."""
    return math.tanh(Omega * tau_bl_opaque(rect))


def _solve(params: BarrierParams, solver: str) -> SidebandSolution:
    if solver == "fs":
        return converge_truncation(params)[0]
    if solver == "ts":
        return solve_ts(params)
    raise ValueError(f"unknown solver {solver!r} (use 'fs' or 'ts')")


@dataclass
class SweepResult:
    """Frequency sweep of the first-order sidebands at fixed E, V0, eps."""

    omega: np.ndarray
    i_minus: np.ndarray
    i_zero: np.ndarray
    i_plus: np.ndarray
    f_values: np.ndarray
    regimes: list[str]
    solver: str
    slope: float | None = None
    intercept: float | None = None
    r_squared: float | None = None
    fit_points: int = 0
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = ["omega,I_m1,I_0,I_p1,F,regime"]
        for i in range(len(self.omega)):
            lines.append(
                f"{self.omega[i]:.17g},{self.i_minus[i]:.17g},"
                f"{self.i_zero[i]:.17g},{self.i_plus[i]:.17g},"
                f"{self.f_values[i]:.17g},{self.regimes[i]}"
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "solver": self.solver,
            "omega": list(self.omega),
            "I_m1": list(self.i_minus),
            "I_0": list(self.i_zero),
            "I_p1": list(self.i_plus),
            "F": list(self.f_values),
            "regime": self.regimes,
            "fit": {
                "slope": self.slope,
                "intercept": self.intercept,
                "r_squared": self.r_squared,
                "points": self.fit_points,
            },
            "meta": self.meta,
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def frequency_sweep(
    params_template: BarrierParams,
    omega_grid: np.ndarray,
    solver: str = "fs",
) -> SweepResult:
    """Sweep Omega at fixed (E, V0, eps); fit F vs Omega on regimes a-b.

    The fit keeps an intercept (it should come out near zero; a visible
    intercept flags finite-eps contamination).  The slope approaches
    -tau_delta in deep tunneling.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    if len(omega_grid) == 0 or np.any(omega_grid <= 0):
        raise ValueError("omega grid must be positive")
    if np.any(np.diff(omega_grid) <= 0):
        raise ValueError("omega grid must be strictly increasing")
    rows = []
    for om in omega_grid:
        p = BarrierParams(
            V0=params_template.V0, eps=params_template.eps, Omega=float(om),
            E=params_template.E, hbar=params_template.hbar,
            mass=params_template.mass,
        )
        try:
            sol = _solve(p, solver)
        except Exception as exc:
            raise RuntimeError(f"solver failed at Omega = {om:g}") from exc
        reg = classify_regime(p).regime
        rows.append((om, sol.intensities[-1], sol.intensities[0],
                     sol.intensities[1], asymmetry(sol), reg.value))
    om_a, i_m, i_0, i_p, f_v, regs = map(np.array, zip(*rows))
    result = SweepResult(
        omega=om_a.astype(float), i_minus=i_m.astype(float),
        i_zero=i_0.astype(float), i_plus=i_p.astype(float),
        f_values=f_v.astype(float), regimes=list(regs), solver=solver,
        meta={"E": params_template.E, "V0": params_template.V0,
              "eps": params_template.eps, "hbar": params_template.hbar,
              "mass": params_template.mass},
    )
    mask = np.array([r in ("a", "b") for r in result.regimes])
    if mask.sum() >= 2:
        x, y = result.omega[mask], result.f_values[mask]
        design = np.vstack([x, np.ones_like(x)]).T
        (slope, icpt), res, *_ = np.linalg.lstsq(design, y, rcond=None)
        ss_tot = float(np.sum((y - y.mean()) ** 2))
        ss_res = float(res[0]) if len(res) else float(
            np.sum((y - design @ [slope, icpt]) ** 2))
        result.slope = float(slope)
        result.intercept = float(icpt)
        result.r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
        result.fit_points = int(mask.sum())
    return result


def regime_c_check(
    params_template: BarrierParams, omega_grid: np.ndarray
) -> list[dict]:
    """Tabulate measured F against sqrt(Omega*tau - T0) in regime C.

    Channel -1 is evanescent there, so two readings of I_{-1} are
    reported: the decaying amplitude squared (F_amplitude) and the
    flux-weighted zero (which forces F = 1).  Points with
    Omega*tau < T0 carry a None reference.  Reporting only; no agreement
    is asserted.
    """
    from .core import static_transmission

    rows = []
    tau = tau_delta(params_template)
    for om in np.asarray(omega_grid, dtype=float):
        p = BarrierParams(
            V0=params_template.V0, eps=params_template.eps, Omega=float(om),
            E=params_template.E, hbar=params_template.hbar,
            mass=params_template.mass,
        )
        if classify_regime(p).regime is not Regime.C:
            continue
        sol = converge_truncation(p)[0]
        t0 = static_transmission(p)
        radicand = om * tau - t0
        rows.append({
            "omega": float(om),
            "F_amplitude": asymmetry(sol),
            "F_flux": 1.0,
            "reference": math.sqrt(radicand) if radicand >= 0 else None,
            "radicand": radicand,
        })
    return rows


def energy_averaged_transmission(
    energies: np.ndarray,
    weights: np.ndarray,
    params_template: BarrierParams,
    Omega: float,
) -> float:
    """Weighted average over energy of the FS total transmitted flux."""
    energies = np.asarray(energies, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0):
        raise ValueError("weights must be non-negative")
    if abs(weights.sum() - 1.0) > 1e-10:
        raise ValueError("weights must sum to 1")
    total = 0.0
    for e, w in zip(energies, weights):
        if w == 0.0:
            continue
        p = BarrierParams(
            V0=params_template.V0, eps=params_template.eps, Omega=Omega,
            E=float(e), hbar=params_template.hbar, mass=params_template.mass,
        )
        sol = converge_truncation(p)[0]
        total += w * sum(sol.transmitted_flux.values())
    return total
