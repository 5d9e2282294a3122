"""Full Solution (FS): the truncated tridiagonal sideband system.

Matching the wavefunction derivative jump across the delta barrier couples
neighbouring sidebands and gives, per sideband n,

    (2i*k_n/B - 1) r_n - (eps/2) (r_{n+1} + r_{n-1})
        = delta_{0,n} + (eps/2) (delta_{0,n+1} + delta_{0,n-1}).

The infinite system is truncated to a window [n_min, n_max] with hard zero
boundaries (r outside the window = 0) and solved by a complex Thomas sweep.
Far amplitudes decay quickly, so a window of a dozen or two rows suffices;
converge_truncation grows the window automatically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BarrierParams, SidebandSolution, build_solution, channel


class WindowTooSmallError(ValueError):
    """Truncation window must contain sidebands -1, 0, +1."""


class SingularPivotError(ArithmeticError):
    """Elimination pivot vanished; parameters sit on a degenerate point."""

    def __init__(self, row_index: int):
        self.row_index = row_index
        super().__init__(f"singular pivot at sideband row n={row_index}")


class TruncationConvergenceError(RuntimeError):
    """Window growth hit the cap before central amplitudes converged."""

    def __init__(self, cap: int, last: SidebandSolution, previous: SidebandSolution):
        self.cap = cap
        self.last = last
        self.previous = previous
        super().__init__(f"central amplitudes not converged at window cap |n| <= {cap}")


@dataclass(frozen=True)
class TridiagonalSystem:
    """Truncated sideband system: diag[i] multiplies r_{n_min + i}."""

    n_min: int
    n_max: int
    diag: np.ndarray
    off: complex
    rhs: np.ndarray

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def dense(self) -> np.ndarray:
        size = self.n_max - self.n_min + 1
        a = np.diag(self.diag)
        a += np.diag(np.full(size - 1, self.off), 1)
        a += np.diag(np.full(size - 1, self.off), -1)
        return a

    def residual(self, r: np.ndarray) -> float:
        lhs = self.diag * r
        lhs[:-1] += self.off * r[1:]
        lhs[1:] += self.off * r[:-1]
        return float(np.max(np.abs(lhs - self.rhs)))


def assemble(params: BarrierParams, n_min: int, n_max: int) -> TridiagonalSystem:
    """Build the truncated system on [n_min, n_max]."""
    if n_min > -1 or n_max < 1:
        raise WindowTooSmallError(
            f"window [{n_min}, {n_max}] must include sidebands -1, 0, +1"
        )
    ns = np.arange(n_min, n_max + 1)
    k = np.array([channel(params, int(n)).k_n for n in ns])
    diag = 2j * k / params.B - 1.0
    rhs = np.zeros(len(ns), dtype=complex)
    rhs[ns == 0] = 1.0
    rhs[np.abs(ns) == 1] = params.eps / 2.0
    return TridiagonalSystem(
        n_min=n_min, n_max=n_max, diag=diag, off=-params.eps / 2.0, rhs=rhs
    )


def _thomas(diag: np.ndarray, off: complex, rhs: np.ndarray) -> np.ndarray:
    """Thomas sweep for a symmetric complex tridiagonal system (no pivoting)."""
    n = len(diag)
    cp = np.empty(n - 1, dtype=complex)
    dp = np.empty(n, dtype=complex)
    piv = diag[0]
    if piv == 0:
        raise SingularPivotError(0)
    cp[0] = off / piv
    dp[0] = rhs[0] / piv
    for i in range(1, n):
        piv = diag[i] - off * cp[i - 1]
        if piv == 0:
            raise SingularPivotError(i)
        if i < n - 1:
            cp[i] = off / piv
        dp[i] = (rhs[i] - off * dp[i - 1]) / piv
    x = dp
    for i in range(n - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    return x


def solve_fs(params: BarrierParams, n_min: int, n_max: int) -> SidebandSolution:
    """Solve the truncated system and package amplitudes, fluxes, residual."""
    system = assemble(params, n_min, n_max)
    r_vec = _thomas(system.diag.copy(), system.off, system.rhs)
    residual = system.residual(r_vec)
    r = {int(n): complex(rn) for n, rn in zip(system.indices, r_vec)}
    return build_solution(params, r, truncation=(n_min, n_max), residual=residual)


def converge_truncation(
    params: BarrierParams,
    tol: float = 1e-10,
    initial_half_width: int = 16,
    cap: int = 200,
    step: int = 8,
) -> tuple[SidebandSolution, tuple[int, int]]:
    """Grow the symmetric window until r_{-1}, r_0, r_{+1} stop moving.

    Returns the converged solution and its window.  Raises
    TruncationConvergenceError (carrying the last two iterates) at the cap.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if params.eps == 0.0:
        sol = solve_fs(params, -1, 1)
        return sol, (-1, 1)
    half = max(initial_half_width, 1)
    prev = solve_fs(params, -half, half)
    while half < cap:
        half = min(half + step, cap)
        sol = solve_fs(params, -half, half)
        delta = max(abs(sol.r[n] - prev.r[n]) for n in (-1, 0, 1))
        if delta < tol:
            return sol, (-half, half)
        prev = sol
    raise TruncationConvergenceError(cap, sol, prev)
