"""Direct wave-packet dynamics for the oscillating delta barrier.

The barrier sits at the center of an infinite well of width L; a Gaussian
packet starts in the middle of the left half and collides with it.  The
state is expanded in the instantaneous eigenstates of the time-frozen
Hamiltonian.  Odd eigenstates (sin(2*j*pi*x/L)) never see the barrier and
are time independent; even eigenstates have the form

    phi(x) = A * sin(k * (L/2 - |x|)),   tan(k*L/2) = -2*k/B(t),

with B(t) = 2*m*V0*(1 + eps*cos(Omega*t))/hbar^2.  Adiabatic couplings
between even states follow from the Hellmann-Feynman route with
dH/dt = V0*eps*(-Omega*sin(Omega*t))*delta(x), so only the boundary values
phi(0) enter.  The coefficient equations are integrated with an adaptive
fifth-order Cash-Karp Runge-Kutta stepper; dynamical phases are carried as
extra quadrature variables in the same stepper.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq


class RootBracketError(RuntimeError):
    """An even-state root bracket failed to change sign."""


class BasisCoverageError(ValueError):
    """Retained basis does not cover the packet's energy bands."""


class PacketSupportError(ValueError):
    """Initial packet leaks outside [-L/2, 0] beyond the allowed tail."""


class NearDegenerateError(ArithmeticError):
    """Two retained even levels are too close for the coupling formula."""


class StepUnderflowError(RuntimeError):
    """Adaptive step size collapsed below the floor."""

    def __init__(self, t: float, state: np.ndarray):
        self.t = t
        self.state = state
        super().__init__(f"step size underflow at t = {t:.6g}")


class NormDriftError(RuntimeError):
    """Coefficient norm drifted beyond 10x the integration tolerance."""


@dataclass(frozen=True)
class WellSpec:
    """Infinite well of width L centred on the barrier; n_levels retained
    instantaneous eigenstates (even + odd).  n_levels = None lets the
    propagator pick a count covering the packet's energy bands."""

    L: float = 20.0
    n_levels: int | None = None

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError("well width L must be positive")
        if self.n_levels is not None and self.n_levels < 4:
            raise ValueError("n_levels must be at least 4")


@dataclass(frozen=True)
class PacketSpec:
    """Gaussian packet exp(-(x-x0)^2/(4 sigma^2) + i k_mean x), normalized."""

    x0: float
    sigma: float
    k_mean: float
    tail_threshold: float = 1e-6

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.k_mean <= 0:
            raise ValueError("k_mean must be positive (rightward packet)")

    @classmethod
    def default_for(cls, well: WellSpec, k_mean: float) -> "PacketSpec":
        # sigma = L/32 keeps the 1e-6 amplitude tail inside [-L/2, 0]
        return cls(x0=-well.L / 4.0, sigma=well.L / 32.0, k_mean=k_mean)

    def amplitude(self, x: np.ndarray) -> np.ndarray:
        g = (2.0 * math.pi * self.sigma**2) ** -0.25
        return g * np.exp(-((x - self.x0) ** 2) / (4.0 * self.sigma**2)
                          + 1j * self.k_mean * x)

    def check_support(self, well: WellSpec):
        peak = abs(self.amplitude(np.array([self.x0])))[0]
        edges = abs(self.amplitude(np.array([-well.L / 2.0, 0.0, well.L / 2.0])))
        if np.any(edges > self.tail_threshold * peak):
            raise PacketSupportError(
                "packet tail at the walls/barrier exceeds "
                f"{self.tail_threshold:g} of the peak"
            )


def even_wavenumbers(B_t: float, L: float, count: int) -> np.ndarray:
    """Lowest `count` roots of tan(kL/2) = -2k/B, one per pi-width bracket.

    Uses the pole-free form B*sin(kL/2) + 2k*cos(kL/2) = 0 bracketed on
    k*L/2 in ((2j-1)pi/2, j*pi) and refined by Brent's method.
    """
    if B_t < 0:
        raise ValueError("B_t must be non-negative")
    if B_t == 0.0:
        return (2.0 * np.arange(1, count + 1) - 1.0) * math.pi / L

    def g(k):
        half = 0.5 * k * L
        return B_t * math.sin(half) + 2.0 * k * math.cos(half)

    roots = np.empty(count)
    shrink = 1e-12
    for j in range(1, count + 1):
        lo = (2 * j - 1) * math.pi / L * (1.0 + shrink)
        hi = 2 * j * math.pi / L * (1.0 - shrink)
        if g(lo) * g(hi) > 0:
            raise RootBracketError(
                f"no sign change in bracket [{lo:.6g}, {hi:.6g}] for level {j}"
            )
        roots[j - 1] = brentq(g, lo, hi, xtol=1e-14, rtol=1e-15)
    return roots


def _even_norms(k: np.ndarray, L: float) -> np.ndarray:
    return 1.0 / np.sqrt(L / 2.0 - np.sin(k * L) / (2.0 * k))


@dataclass(frozen=True)
class InstantBasis:
    """Instantaneous eigenstates at one barrier strength B_t.

    Even states: k, E, normalization A, boundary value psi0 = A sin(kL/2).
    Odd states: k = 2j*pi/L, psi0 = 0, A = sqrt(2/L); time independent.
    """

    B_t: float
    L: float
    hbar: float
    mass: float
    k_even: np.ndarray
    E_even: np.ndarray
    A_even: np.ndarray
    psi0_even: np.ndarray
    k_odd: np.ndarray
    E_odd: np.ndarray

    @property
    def n_even(self) -> int:
        return len(self.k_even)

    def even_values(self, x: np.ndarray) -> np.ndarray:
        """Matrix (n_even, len(x)) of even eigenfunctions."""
        return self.A_even[:, None] * np.sin(
            self.k_even[:, None] * (self.L / 2.0 - np.abs(x)[None, :])
        )

    def odd_values(self, x: np.ndarray) -> np.ndarray:
        return math.sqrt(2.0 / self.L) * np.sin(self.k_odd[:, None] * x[None, :])


def build_basis(
    B_t: float, well: WellSpec, n_even: int, n_odd: int,
    hbar: float = 1.0, mass: float = 0.5,
) -> InstantBasis:
    k_even = even_wavenumbers(B_t, well.L, n_even)
    k_odd = 2.0 * np.arange(1, n_odd + 1) * math.pi / well.L
    pref = hbar**2 / (2.0 * mass)
    A = _even_norms(k_even, well.L)
    return InstantBasis(
        B_t=B_t, L=well.L, hbar=hbar, mass=mass,
        k_even=k_even, E_even=pref * k_even**2, A_even=A,
        psi0_even=A * np.sin(k_even * well.L / 2.0),
        k_odd=k_odd, E_odd=pref * k_odd**2,
    )


def even_spectrum(
    B_t: float, well: WellSpec, n_even: int = 10,
    hbar: float = 1.0, mass: float = 0.5,
) -> list[tuple[float, float, float, float]]:
    """Lowest even levels as (k, E, normalization, psi(0)) tuples."""
    b = build_basis(B_t, well, n_even, 0, hbar=hbar, mass=mass)
    return list(zip(b.k_even, b.E_even, b.A_even, b.psi0_even))


def adiabatic_couplings(
    basis: InstantBasis, dV_dt: float, degeneracy_tol: float = 1e-9
) -> np.ndarray:
    """Coupling matrix M[i, j] = <phi_i | d/dt phi_j> over even states.

    Hellmann-Feynman with dH/dt = dV_dt * delta(x) gives
    M[i, j] = dV_dt * psi_i(0) * psi_j(0) / (E_j - E_i) for i != j;
    diagonals vanish (real normalized basis).  Odd states decouple (their
    boundary value is zero), so only the even block is returned.
    """
    dE = basis.E_even[None, :] - basis.E_even[:, None]
    off = ~np.eye(basis.n_even, dtype=bool)
    gap = np.min(np.abs(dE[off])) if basis.n_even > 1 else np.inf
    if gap < degeneracy_tol:
        i, j = divmod(int(np.argmin(np.abs(np.where(off, dE, np.inf)))), basis.n_even)
        raise NearDegenerateError(f"even levels {i} and {j} nearly degenerate")
    m = np.zeros_like(dE)
    np.divide(
        dV_dt * np.outer(basis.psi0_even, basis.psi0_even), dE, out=m, where=off
    )
    return m


def right_half_overlap_even_odd(basis: InstantBasis) -> np.ndarray:
    """Analytic O[e, o] = int_0^{L/2} phi_e phi_o dx (products of sines).

    Diagonal blocks are 1/2 (same state) and 0 (distinct same-parity
    states, by orthogonality and symmetry); only the even-odd cross block
    is nontrivial.
    """
    ke = basis.k_even[:, None]
    ko = basis.k_odd[None, :]
    ao = math.sqrt(2.0 / basis.L)
    return (
        -basis.A_even[:, None] * ao
        * np.sin(ke * basis.L / 2.0) * ko / (ke**2 - ko**2)
    )


def right_probability(
    basis: InstantBasis,
    c_even: np.ndarray,
    c_odd: np.ndarray,
    gamma_even: np.ndarray,
    gamma_odd: np.ndarray,
) -> float:
    """P(x > 0) for psi = sum_j c_j exp(-i gamma_j / hbar) phi_j."""
    p = 0.5 * (np.sum(np.abs(c_even) ** 2) + np.sum(np.abs(c_odd) ** 2))
    if len(c_odd) and len(c_even):
        o_eo = right_half_overlap_even_odd(basis)
        ph_e = c_even * np.exp(-1j * gamma_even / basis.hbar)
        ph_o = c_odd * np.exp(-1j * gamma_odd / basis.hbar)
        p += 2.0 * np.real(np.conj(ph_e) @ o_eo @ ph_o)
    return float(p)


# Cash-Karp tableau (fifth order with embedded fourth-order error estimate)
_CK_C = np.array([0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8])
_CK_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([3 / 10, -9 / 10, 6 / 5]),
    np.array([-11 / 54, 5 / 2, -70 / 27, 35 / 27]),
    np.array([1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096]),
]
_CK_B5 = np.array([37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771])
_CK_B4 = np.array(
    [2825 / 27648, 0.0, 18575 / 48384, 13525 / 55296, 277 / 14336, 1 / 4]
)


def _cash_karp_step(f, t, y, h):
    """One Cash-Karp trial step; returns (y5, error_estimate)."""
    k = [f(t, y)]
    for i in range(1, 6):
        yi = y + h * (_CK_A[i] @ np.array(k[:i]).reshape(i, -1)).reshape(y.shape)
        k.append(f(t + _CK_C[i] * h, yi))
    karr = np.array(k)
    y5 = y + h * np.tensordot(_CK_B5, karr, axes=1)
    err = h * np.tensordot(_CK_B5 - _CK_B4, karr, axes=1)
    return y5, err


@dataclass
class TdseRun:
    """One wave-packet collision: coefficients, history, diagnostics."""

    well: WellSpec
    packet: PacketSpec
    hbar: float
    mass: float
    times: np.ndarray
    norms: np.ndarray
    p_right: np.ndarray
    energies0: np.ndarray          # instantaneous energies at t = 0, all levels
    weights0: np.ndarray           # |c_j(0)|^2 over all levels, normalized
    c_even: np.ndarray             # final even coefficients
    c_odd: np.ndarray              # constant odd coefficients
    n_even: int
    n_odd: int
    plateau_time: float | None
    p_plateau: float | None
    stats: dict = field(default_factory=dict)

    def transmitted_probability(self, t: float) -> float:
        if not (self.times[0] <= t <= self.times[-1]):
            raise ValueError(f"t = {t:g} outside run history")
        return float(np.interp(t, self.times, self.p_right))

    def post_collision_probability(self) -> float:
        """P_right after the collision: the detected plateau, falling back
        to the mean over the trailing 15% of the run."""
        if self.p_plateau is not None:
            return self.p_plateau
        cut = self.times[-1] - 0.15 * (self.times[-1] - self.times[0])
        return float(np.mean(self.p_right[self.times >= cut]))


def transmitted_probability(run: TdseRun, t: float) -> float:
    """Right-half probability at a sampled time (linear interpolation)."""
    return run.transmitted_probability(t)


def _default_level_counts(well, packet, params, margin_bands=6.0):
    e_mean = params.hbar**2 * packet.k_mean**2 / (2.0 * params.mass)
    e_cut = 1.25 * (e_mean + margin_bands * params.hbar * params.Omega)
    k_cut = math.sqrt(2.0 * params.mass * e_cut) / params.hbar
    k_cut = max(k_cut, packet.k_mean + 6.0 / (2.0 * packet.sigma))
    n_half = max(6, int(math.ceil(k_cut * well.L / (2.0 * math.pi))))
    return n_half, n_half


def _find_plateau(times, p_right, t_arrive, window, slope_tol):
    """First time after arrival where P_right stays flat over `window`."""
    for i, t in enumerate(times):
        if t < t_arrive:
            continue
        j = np.searchsorted(times, t + window)
        if j >= len(times):
            break
        seg = p_right[i:j + 1]
        if seg.max() - seg.min() < slope_tol:
            return float(times[i]), float(np.mean(seg))
    return None, None


def propagate(well, packet, params, t_final=None, tol=1e-8, max_step=None,
              n_spline=41):
    """Propagate one collision; returns a TdseRun with sampled observables.

    params supplies V0, eps, Omega, hbar, mass (its incident energy E is
    not used; the packet fixes the energy content).  Basis sizes default
    to covering E_mean + 6*hbar*Omega with a 25% margin.
    """
    packet.check_support(well)
    hbar, mass = params.hbar, params.mass
    if well.n_levels is None:
        n_even, n_odd = _default_level_counts(well, packet, params)
    else:
        n_even = well.n_levels // 2
        n_odd = well.n_levels - n_even
    B0 = params.B

    # validate coverage against the packet's mean energy
    e_mean = hbar**2 * packet.k_mean**2 / (2.0 * mass)
    e_top = (hbar * 2.0 * n_odd * math.pi / well.L) ** 2 / (2.0 * mass)
    if e_top < e_mean + hbar * params.Omega:
        raise BasisCoverageError(
            f"retained levels reach E = {e_top:.4g} < "
            f"mean packet energy + hbar*Omega = {e_mean + hbar * params.Omega:.4g}"
        )

    # spline cache of even wavenumbers over the visited range of B(t)
    b_lo, b_hi = B0 * (1.0 - params.eps), B0 * (1.0 + params.eps)
    if b_hi > b_lo:
        b_grid = np.linspace(b_lo, b_hi, n_spline)
        k_grid = np.array([even_wavenumbers(b, well.L, n_even) for b in b_grid])
        k_of_b = CubicSpline(b_grid, k_grid, axis=0)
    else:
        k_static = even_wavenumbers(B0, well.L, n_even)
        k_of_b = lambda b: k_static  # noqa: E731

    pref = hbar**2 / (2.0 * mass)
    L = well.L

    def basis_at(B_t):
        k = np.asarray(k_of_b(B_t))
        A = _even_norms(k, L)
        return InstantBasis(
            B_t=B_t, L=L, hbar=hbar, mass=mass,
            k_even=k, E_even=pref * k**2, A_even=A,
            psi0_even=A * np.sin(k * L / 2.0),
            k_odd=2.0 * np.arange(1, n_odd + 1) * math.pi / L,
            E_odd=pref * (2.0 * np.arange(1, n_odd + 1) * math.pi / L) ** 2,
        )

    # initial projection at t = 0 (B = B0 * (1 + eps))
    basis0 = build_basis(B0 * (1.0 + params.eps), well, n_even, n_odd,
                         hbar=hbar, mass=mass)
    x = np.linspace(-L / 2.0, L / 2.0, 8192)
    psi0 = packet.amplitude(x)
    c_even0 = np.trapezoid(basis0.even_values(x) * psi0[None, :], x, axis=1)
    c_odd0 = np.trapezoid(basis0.odd_values(x) * psi0[None, :], x, axis=1)
    captured = np.sum(np.abs(c_even0) ** 2) + np.sum(np.abs(c_odd0) ** 2)
    if captured < 0.999:
        raise BasisCoverageError(
            f"basis captures only {captured:.6f} of the packet norm"
        )
    scale = 1.0 / math.sqrt(captured)
    c_even0 *= scale
    c_odd0 *= scale

    energies0 = np.concatenate([basis0.E_even, basis0.E_odd])
    weights0 = np.concatenate([np.abs(c_even0) ** 2, np.abs(c_odd0) ** 2])
    weights0 = weights0 / weights0.sum()

    v_group = hbar * packet.k_mean / mass
    if t_final is None:
        # one collision: reach the barrier, split, settle; stay clear of
        # wall re-reflections returning to the barrier
        t_final = 1.5 * (abs(packet.x0) + L / 4.0) / v_group
    if max_step is None:
        max_step = t_final / 400.0

    eps_omega = params.eps * params.Omega * params.V0
    odd_norm = float(np.sum(np.abs(c_odd0) ** 2))

    def rhs(t, y):
        c = y[:n_even]
        gamma = y[n_even:].real
        B_t = B0 * (1.0 + params.eps * math.cos(params.Omega * t))
        b = basis_at(B_t)
        dv_dt = -eps_omega * math.sin(params.Omega * t)
        dy = np.empty_like(y)
        if params.eps > 0.0:
            m = adiabatic_couplings(b, dv_dt)
            phase = np.exp(1j * gamma / hbar)
            dy[:n_even] = -phase * (m @ (c / phase))
        else:
            dy[:n_even] = 0.0
        dy[n_even:] = b.E_even
        return dy

    # integrate even coefficients + phases; odd block is exact
    y = np.concatenate([c_even0.astype(complex), np.zeros(n_even, complex)])
    t = 0.0
    h = min(max_step, 1e-3 * t_final)
    times = [0.0]
    b_now = basis_at(B0 * (1.0 + params.eps))
    norms = [float(np.sum(np.abs(c_even0) ** 2)) + odd_norm]
    p_hist = [right_probability(b_now, c_even0, c_odd0,
                                np.zeros(n_even), np.zeros(n_odd))]
    n_steps = n_rejects = 0
    h_floor = 1e-14 * t_final
    while t < t_final:
        h = min(h, t_final - t, max_step)
        if h < h_floor:
            raise StepUnderflowError(t, y)
        y5, err = _cash_karp_step(rhs, t, y, h)
        # error-per-unit-time control so the accumulated drift over the
        # whole run stays within tol
        scale_v = tol * np.maximum(1.0, np.abs(y)) * (h / t_final)
        emax = float(np.max(np.abs(err) / scale_v))
        if emax <= 1.0:
            t += h
            y = y5
            n_steps += 1
            norm = float(np.sum(np.abs(y[:n_even]) ** 2)) + odd_norm
            if abs(norm - 1.0) > 10.0 * tol:
                raise NormDriftError(
                    f"norm drifted to {norm:.12f} at t = {t:.6g}"
                )
            B_t = B0 * (1.0 + params.eps * math.cos(params.Omega * t))
            b = basis_at(B_t)
            gamma_odd = b.E_odd * t
            times.append(t)
            norms.append(norm)
            p_hist.append(right_probability(
                b, y[:n_even], c_odd0, y[n_even:].real, gamma_odd))
            h *= min(5.0, 0.9 * emax ** -0.2) if emax > 0 else 5.0
        else:
            n_rejects += 1
            h *= max(0.1, 0.9 * emax ** -0.25)

    times = np.array(times)
    norms = np.array(norms)
    p_hist = np.array(p_hist)
    t_arrive = abs(packet.x0) / v_group
    window = 0.15 * t_final
    plateau_t, plateau_p = _find_plateau(
        times, p_hist, t_arrive + 4.0 * packet.sigma / v_group,
        window, slope_tol=5e-3)
    return TdseRun(
        well=well, packet=packet, hbar=hbar, mass=mass,
        times=times, norms=norms, p_right=p_hist,
        energies0=energies0, weights0=weights0,
        c_even=y[:n_even].copy(), c_odd=c_odd0,
        n_even=n_even, n_odd=n_odd,
        plateau_time=plateau_t, p_plateau=plateau_p,
        stats={"steps": n_steps, "rejects": n_rejects, "tol": tol,
               "captured_norm": captured, "t_final": t_final},
    )
