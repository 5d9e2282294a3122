"""Toeplitz Solution (TS): analytical 3x3 closure of the sideband system.

Far from the central band the tridiagonal rows become nearly constant and
the amplitudes decay exponentially, r_n ~ r_{-1} e^{(n+1)theta_minus} for
n <= -1 and r_n ~ r_{+1} e^{-(n-1)theta_plus} for n >= +1.  Substituting
this ansatz into a far row with the diagonal frozen at d = 2i*k/B - 1
gives a quadratic in x = e^{-theta}:

    (eps/2) x^2 - d x + (eps/2) = 0,

whose roots multiply to 1; the decaying side picks |x| < 1.  The diagonal
is frozen at k_{-2} for theta_minus and k_{+2} for theta_plus (the side
being closed), which reproduces the measured FS tail ratios r_{-2}/r_{-1}
and r_{+2}/r_{+1}.  The closure then reduces the infinite system to a 3x3
solve for r_{-1}, r_0, r_{+1}.

All regimes go through the same complex quadratic (k frozen at an
evanescent index is simply imaginary); the regime-A closed form for
cos(Im theta) and cosh(Re theta) is kept only as a cross-check, see
regime_a_closed_form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BarrierParams,
    Regime,
    SidebandSolution,
    build_solution,
    channel,
    classify_regime,
)

_UNIT_CIRCLE_TOL = 1e-12


class DegenerateClosureError(ValueError):
    """eps = 0 has no finite exponential closure; use the FS route."""


class NoDecayingRootError(ArithmeticError):
    """Both characteristic roots sit on the unit circle (band edge)."""

    def __init__(self, side: str, roots: tuple[complex, complex]):
        self.side = side
        self.roots = roots
        super().__init__(
            f"no decaying root on side {side}: |x| = "
            f"{abs(roots[0]):.15g}, {abs(roots[1]):.15g}"
        )


class SingularClosureError(ArithmeticError):
    """The closed 3x3 system is singular at these parameters."""

    def __init__(self, determinant: complex, params: BarrierParams):
        self.determinant = determinant
        self.params = params
        super().__init__(f"singular 3x3 closure, det = {determinant!r}")


@dataclass(frozen=True)
class DecayExponents:
    """Tail exponents theta_plus (n >= 1 side) and theta_minus (n <= -1 side).

    root_diagnostics maps side ('minus'/'plus') to (roots, selected root).
    """

    theta_plus: complex
    theta_minus: complex
    regime: Regime
    root_diagnostics: dict[str, tuple[tuple[complex, complex], complex]]


def _characteristic_root(d: complex, eps: float, side: str) -> tuple[tuple[complex, complex], complex]:
    """Roots of (eps/2) x^2 - d x + eps/2 = 0 and the decaying one."""
    disc = cmath.sqrt(d * d - eps * eps)
    roots = ((d + disc) / eps, (d - disc) / eps)
    x = min(roots, key=abs)
    if abs(x) >= 1.0 - _UNIT_CIRCLE_TOL:
        raise NoDecayingRootError(side, roots)
    return roots, x


def decay_exponents(params: BarrierParams) -> DecayExponents:
    """Decay exponents from the frozen-diagonal characteristic quadratic.

    theta = -log(x) with the |x| < 1 root, so Re(theta) > 0 on both sides.
    """
    if params.eps == 0.0:
        raise DegenerateClosureError("eps = 0: system decouples, no tail closure")
    diagnostics = {}
    thetas = {}
    for side, n_freeze in (("minus", -2), ("plus", +2)):
        k = channel(params, n_freeze).k_n
        d = 2j * k / params.B - 1.0
        roots, x = _characteristic_root(d, params.eps, side)
        diagnostics[side] = (roots, x)
        thetas[side] = -cmath.log(x)
    return DecayExponents(
        theta_plus=thetas["plus"],
        theta_minus=thetas["minus"],
        regime=classify_regime(params).regime,
        root_diagnostics=diagnostics,
    )


def regime_a_closed_form(eps: float, B: float, k_frozen: float) -> tuple[float, float]:
    """Printed regime-A closed form for (|cos(Im theta)|, cosh(Re theta)).

    Valid when the frozen wavenumber is real (all channels near the frozen
    index propagating).  cos(Im theta) itself is negative there (cosh must
    be >= 1 while its product with cos is -1/eps), so the first value is
    returned as a magnitude.
    """
    q = (2.0 * k_frozen / B) ** 2
    radicand = (1.0 - eps**2) ** 2 + q * q + 2.0 * (1.0 + eps**2) * q
    inner = 1.0 + eps**2 + q - math.sqrt(radicand)
    if inner < 0:
        raise ValueError("closed form radicand negative outside regime A validity")
    cos_im = math.sqrt(2.0) / (2.0 * eps) * math.sqrt(inner)
    if cos_im == 0.0:
        raise ValueError("cos(Im theta) = 0; cosh undefined in closed form")
    return cos_im, 1.0 / (eps * cos_im)


def solve_ts(params: BarrierParams, tail_extent: int = 8) -> SidebandSolution:
    """Solve the closed 3x3 system for r_{-1}, r_0, r_{+1}.

    Amplitudes for 1 < |n| <= tail_extent are extended by the exponential
    tails for reporting.
    """
    exps = decay_exponents(params)
    eps = params.eps
    k = {n: channel(params, n).k_n for n in (-1, 0, 1)}
    m = np.array(
        [
            [-(eps / 2) * cmath.exp(-exps.theta_minus) + 2j * k[-1] / params.B - 1.0,
             -eps / 2, 0.0],
            [-eps / 2, 2j * k[0] / params.B - 1.0, -eps / 2],
            [0.0, -eps / 2,
             -(eps / 2) * cmath.exp(-exps.theta_plus) + 2j * k[1] / params.B - 1.0],
        ],
        dtype=complex,
    )
    rhs = np.array([eps / 2, 1.0, eps / 2], dtype=complex)
    det = np.linalg.det(m)
    if abs(det) < 1e-300:
        raise SingularClosureError(det, params)
    central = np.linalg.solve(m, rhs)
    residual = float(np.max(np.abs(m @ central - rhs)))
    r = {-1: complex(central[0]), 0: complex(central[1]), 1: complex(central[2])}
    for n in range(2, tail_extent + 1):
        r[n] = r[1] * cmath.exp(-(n - 1) * exps.theta_plus)
        r[-n] = r[-1] * cmath.exp((-n + 1) * exps.theta_minus)
    return build_solution(
        params, r, truncation=(-tail_extent, tail_extent), residual=residual
    )
