"""Command-line interface: reproducible solver runs and figure presets.

Subcommands: fs, ts, sweep, tdse, fig2, fig3.  Every flag can also be set
in a flat TOML config file (--config); explicit flags win.  Exit codes:
0 success, 2 usage error, 3 solver failure, 4 convergence failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from .analysis import energy_averaged_transmission, frequency_sweep
from .core import BarrierParams, SidebandSolution, channel
from .fs import SingularPivotError, TruncationConvergenceError, converge_truncation, solve_fs
from .tdse import (
    BasisCoverageError,
    NearDegenerateError,
    NormDriftError,
    PacketSpec,
    PacketSupportError,
    StepUnderflowError,
    WellSpec,
    propagate,
)
from .ts import DegenerateClosureError, NoDecayingRootError, SingularClosureError, solve_ts

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_CONVERGENCE = 4

_SOLVER_ERRORS = (
    SingularPivotError, DegenerateClosureError, NoDecayingRootError,
    SingularClosureError, BasisCoverageError, PacketSupportError,
    NearDegenerateError, ValueError,
)
_CONVERGENCE_ERRORS = (TruncationConvergenceError, StepUnderflowError, NormDriftError)

DEFAULTS = {
    "hbar": 1.0,
    "mass": 0.5,
    "E": 2.5,
    "V0": 10.0,
    "eps": 1.0,
    "omega": 1.0,
    "trunc": None,
    "tol": 1e-10,
    "omega_min": 0.01,
    "omega_max": 0.2,
    "omega_points": 20,
    "solver": "fs",
    "L": 20.0,
    "x0": None,
    "sigma": None,
    "k_mean": math.sqrt(5.0),
    "levels": None,
    "t_final": None,
    "format": "csv",
    "panel": "a",
    "out": None,
}


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _solution_csv(sol: SidebandSolution, params: BarrierParams) -> str:
    lines = ["n,re_r,im_r,I_n,kind"]
    for n in sorted(sol.r):
        kind = channel(params, n).kind.value
        lines.append(
            f"{n},{_fmt(sol.r[n].real)},{_fmt(sol.r[n].imag)},"
            f"{_fmt(sol.intensities[n])},{kind}"
        )
    return "\n".join(lines) + "\n"


def _solution_json(sol: SidebandSolution, params: BarrierParams) -> str:
    payload = {
        "params": {"E": params.E, "V0": params.V0, "eps": params.eps,
                   "Omega": params.Omega, "hbar": params.hbar,
                   "mass": params.mass},
        "truncation": list(sol.truncation),
        "residual": sol.residual,
        "flux_sum": sol.flux_sum(),
        "amplitudes": [
            {
                "n": n,
                "r": {"re": sol.r[n].real, "im": sol.r[n].imag},
                "t": {"re": sol.t[n].real, "im": sol.t[n].imag},
                "I": sol.intensities[n],
                "kind": channel(params, n).kind.value,
            }
            for n in sorted(sol.r)
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def _get(args, config: dict, key: str):
    v = getattr(args, key, None)
    if v is not None:
        return v
    if key in config:
        return config[key]
    return DEFAULTS.get(key)


def _params(args, config) -> BarrierParams:
    return BarrierParams(
        V0=_get(args, config, "V0"), eps=_get(args, config, "eps"),
        Omega=_get(args, config, "omega"), E=_get(args, config, "E"),
        hbar=_get(args, config, "hbar"), mass=_get(args, config, "mass"),
    )


def _cmd_fs(args, config) -> int:
    params = _params(args, config)
    trunc = _get(args, config, "trunc")
    if trunc is not None:
        sol = solve_fs(params, -int(trunc), int(trunc))
    else:
        sol, _ = converge_truncation(params, tol=_get(args, config, "tol"))
    fmt = _get(args, config, "format")
    text = (_solution_json(sol, params) if fmt == "json"
            else _solution_csv(sol, params))
    _write(text, _get(args, config, "out"))
    return EXIT_OK


def _cmd_ts(args, config) -> int:
    params = _params(args, config)
    sol = solve_ts(params)
    fmt = _get(args, config, "format")
    text = (_solution_json(sol, params) if fmt == "json"
            else _solution_csv(sol, params))
    _write(text, _get(args, config, "out"))
    return EXIT_OK


def _omega_grid(args, config) -> np.ndarray:
    return np.linspace(
        _get(args, config, "omega_min"), _get(args, config, "omega_max"),
        int(_get(args, config, "omega_points")),
    )


def _cmd_sweep(args, config) -> int:
    params = _params(args, config)
    result = frequency_sweep(params, _omega_grid(args, config),
                             solver=_get(args, config, "solver"))
    out = _get(args, config, "out")
    if _get(args, config, "format") == "json":
        _write(result.to_json() + "\n", out)
    else:
        _write(result.to_csv(), out)
        sidecar = (out + ".json") if out else None
        _write(result.to_json() + "\n", sidecar)
    return EXIT_OK


def _tdse_setup(args, config):
    L = _get(args, config, "L")
    levels = _get(args, config, "levels")
    well = WellSpec(L=L, n_levels=int(levels) if levels else None)
    k_mean = _get(args, config, "k_mean")
    x0 = _get(args, config, "x0")
    sigma = _get(args, config, "sigma")
    packet = PacketSpec(
        x0=x0 if x0 is not None else -L / 4.0,
        sigma=sigma if sigma is not None else L / 32.0,
        k_mean=k_mean,
    )
    return well, packet


def _cmd_tdse(args, config) -> int:
    params = _params(args, config)
    well, packet = _tdse_setup(args, config)
    tol = args.tol if args.tol is not None else config.get("tol", 1e-8)
    run = propagate(well, packet, params,
                    t_final=_get(args, config, "t_final"), tol=tol)
    fmt = _get(args, config, "format")
    if fmt == "json":
        payload = {
            "plateau_time": run.plateau_time,
            "p_after_collision": run.post_collision_probability(),
            "stats": {k: (v if not isinstance(v, np.floating) else float(v))
                      for k, v in run.stats.items()},
            "n_even": run.n_even, "n_odd": run.n_odd,
            "samples": [
                {"t": float(t), "norm": float(n), "p_right": float(p)}
                for t, n, p in zip(run.times, run.norms, run.p_right)
            ],
        }
        _write(json.dumps(payload, indent=2, sort_keys=True), _get(args, config, "out"))
    else:
        lines = ["t,norm,p_right"]
        for t, n, p in zip(run.times, run.norms, run.p_right):
            lines.append(f"{_fmt(t)},{_fmt(n)},{_fmt(p)}")
        _write("\n".join(lines) + "\n", _get(args, config, "out"))
    return EXIT_OK


FIG2_PANELS = {
    "a": {"E": 2.5, "eps": 1.0},
    "b": {"E": 1.5, "eps": 1.0},
    "c": {"E": 0.5, "eps": 1.0},
    "d": {"E": 2.5, "eps": 0.5},
}


def _cmd_fig2(args, config) -> int:
    panel = _get(args, config, "panel")
    if panel not in FIG2_PANELS:
        raise ValueError(f"panel must be one of {sorted(FIG2_PANELS)}")
    spec = FIG2_PANELS[panel]
    params = BarrierParams(V0=10.0, eps=spec["eps"], Omega=1.0, E=spec["E"])
    fsol, _ = converge_truncation(params)
    tsol = solve_ts(params)
    lines = ["n,I_fs,I_ts"]
    for n in sorted(set(fsol.r) & set(tsol.r)):
        lines.append(f"{n},{_fmt(fsol.intensities[n])},{_fmt(tsol.intensities[n])}")
    _write("\n".join(lines) + "\n", _get(args, config, "out"))
    return EXIT_OK


def _cmd_fig3(args, config) -> int:
    # packet collision long enough to average over the barrier modulation
    L = getattr(args, "L", None) or config.get("L") or 160.0
    well = WellSpec(L=L)
    packet = PacketSpec.default_for(well, _get(args, config, "k_mean"))
    omega_min = getattr(args, "omega_min", None) or config.get("omega_min") or 2.0
    omega_max = getattr(args, "omega_max", None) or config.get("omega_max") or 10.0
    grid = np.linspace(omega_min, omega_max,
                       int(_get(args, config, "omega_points")))
    lines = ["omega,P_fs,P_tdse"]
    template = BarrierParams(V0=5.0, eps=0.9, Omega=1.0, E=5.0)
    for om in grid:
        p = BarrierParams(V0=5.0, eps=0.9, Omega=float(om), E=5.0)
        run = propagate(well, packet, p, tol=1e-8)
        p_fs = energy_averaged_transmission(
            run.energies0, run.weights0, template, float(om))
        lines.append(f"{_fmt(float(om))},{_fmt(p_fs)},"
                     f"{_fmt(run.post_collision_probability())}")
    _write("\n".join(lines) + "\n", _get(args, config, "out"))
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=str, default=None,
                   help="flat TOML config; flags override its keys")
    p.add_argument("--hbar", type=float, default=None)
    p.add_argument("--mass", type=float, default=None)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--format", choices=("csv", "json"), default=None)


def _add_barrier(p: argparse.ArgumentParser):
    p.add_argument("--E", type=float, default=None, help="incident energy")
    p.add_argument("--V0", type=float, default=None, help="barrier strength")
    p.add_argument("--eps", type=float, default=None, help="modulation amplitude")
    p.add_argument("--omega", type=float, default=None, help="modulation frequency")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscdelta",
        description="Sideband scattering through an oscillating delta barrier",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fs = sub.add_parser("fs", help="full tridiagonal sideband solution")
    _add_common(p_fs); _add_barrier(p_fs)
    p_fs.add_argument("--trunc", type=int, default=None,
                      help="fixed symmetric window half-width (else auto)")
    p_fs.add_argument("--tol", type=float, default=None)
    p_fs.set_defaults(func=_cmd_fs)

    p_ts = sub.add_parser("ts", help="analytical 3x3 Toeplitz closure")
    _add_common(p_ts); _add_barrier(p_ts)
    p_ts.set_defaults(func=_cmd_ts)

    p_sw = sub.add_parser("sweep", help="frequency sweep of sideband asymmetry")
    _add_common(p_sw); _add_barrier(p_sw)
    p_sw.add_argument("--solver", choices=("fs", "ts"), default=None)
    p_sw.add_argument("--omega-min", dest="omega_min", type=float, default=None)
    p_sw.add_argument("--omega-max", dest="omega_max", type=float, default=None)
    p_sw.add_argument("--omega-points", dest="omega_points", type=int, default=None)
    p_sw.set_defaults(func=_cmd_sweep)

    p_td = sub.add_parser("tdse", help="wave-packet collision run")
    _add_common(p_td); _add_barrier(p_td)
    p_td.add_argument("--L", type=float, default=None)
    p_td.add_argument("--x0", type=float, default=None)
    p_td.add_argument("--sigma", type=float, default=None)
    p_td.add_argument("--k-mean", dest="k_mean", type=float, default=None)
    p_td.add_argument("--levels", type=int, default=None)
    p_td.add_argument("--t-final", dest="t_final", type=float, default=None)
    p_td.add_argument("--tol", type=float, default=None)
    p_td.set_defaults(func=_cmd_tdse)

    p_f2 = sub.add_parser("fig2", help="FS vs TS intensity table presets")
    _add_common(p_f2)
    p_f2.add_argument("--panel", choices=tuple(FIG2_PANELS), default=None)
    p_f2.set_defaults(func=_cmd_fig2)

    p_f3 = sub.add_parser("fig3", help="TDSE vs FS-averaged transmission sweep")
    _add_common(p_f3)
    p_f3.add_argument("--L", type=float, default=None)
    p_f3.add_argument("--k-mean", dest="k_mean", type=float, default=None)
    p_f3.add_argument("--omega-min", dest="omega_min", type=float, default=None)
    p_f3.add_argument("--omega-max", dest="omega_max", type=float, default=None)
    p_f3.add_argument("--omega-points", dest="omega_points", type=int, default=None)
    p_f3.set_defaults(func=_cmd_fig3)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config: dict = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, "rb") as fh:
                config = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            print(f"oscdelta: bad config: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args, config)
    except _CONVERGENCE_ERRORS as exc:
        print(f"oscdelta: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except _SOLVER_ERRORS as exc:
        print(f"oscdelta: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
