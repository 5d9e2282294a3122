"""The sideband asymmetry F(Omega) = (I_1 - I_-1)/(I_1 + I_-1) as a clock:
at low frequency its slope measures the delta-barrier time scale
tau = 2*hbar^3/(m*V0^2), and the rectangular-barrier traversal time of the
quasi-static theory vanishes in the delta limit.

Run:  python3 demos/traversal_time.py
"""

import numpy as np

from oscdelta import (
    BarrierParams,
    RectBarrierParams,
    frequency_sweep,
    tau_bl_opaque,
    tau_bl_rect,
    tau_delta,
)

params = BarrierParams(V0=10.0, eps=1e-3, Omega=1.0, E=2.5)
grid = np.linspace(0.01, 0.2, 20)

print("frequency sweep at E = 2.5, V0 = 10, eps = 1e-3 (weak drive)")
result = frequency_sweep(params, grid, solver="fs")
print(f"{'Omega':>8} {'F':>12}")
for om, f in zip(result.omega[::4], result.f_values[::4]):
    print(f"{om:>8.3f} {f:>12.3e}")

tau = tau_delta(params)
print(f"\nfitted slope        = {result.slope:.6f}  (R^2 = {result.r_squared:.6f})")
print(f"-tau_delta          = {-tau:.6f}")
print(f"exact leading order = {-tau / (1 + 4 * params.E / params.B**2):.6f}")
print("the 4E/B^2 correction separates the fit from -tau_delta; it dies")
print("off only in the deep tunneling limit E << V0^2/4\n")

print("rectangular barrier at fixed area V*d = 10, E = 2.5:")
print(f"{'d':>8} {'kappa*d':>9} {'tau(Eq)':>12} {'tau(opaque)':>12}")
for d in (3.0, 1.0, 0.3, 0.1, 0.01, 0.001):
    rect = RectBarrierParams(V=10.0 / d, d=d, E=2.5)
    print(f"{d:>8.3f} {rect.kappa * rect.d:>9.3f} "
          f"{tau_bl_rect(rect):>12.4e} {tau_bl_opaque(rect):>12.4e}")
print("\nthe rectangular traversal time vanishes as d -> 0; the delta")
print(f"barrier nevertheless keeps its own clock tau = {tau} above.")
