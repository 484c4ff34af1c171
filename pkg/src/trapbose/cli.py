"""Command-line front end."""

import argparse
from dataclasses import dataclass, field
import math
from pathlib import Path
import sys

import numpy as np

from . import asymptotics as asy
from . import entropy as ent
from . import gp as gpmod
from . import io
from . import scattering as sc
from .errors import InvalidInputError, TrapBoseError
from .idealgas import (
    OscillatorSpectrum,
    canonical_partition,
    critical_temperature,
    solve_mu0,
)
from .manybody import (
    ModeBasis,
    bec_diagnostics,
    contact_tensor_1d,
    entropy_inequality_check,
    gaussian_tensor_1d,
    theorem_sandwich,
)
from .params import TrapParams, regime_report
from .suite import default_suite

COMMANDS = ("scatter", "ideal", "gp", "free-energy", "density", "momentum", "phase-diagram", "verify", "manybody")


@dataclass
class RunConfig:
    command: str
    values: dict = field(default_factory=dict)
    tol: float = 1e-8
    out: Path = Path(".")
    seed: int = 0
    fmt: str = "csv"

    def __post_init__(self):
        if self.tol <= 0:
            raise InvalidInputError("tolerance must be positive")
        for k, v in self.values.items():
            if isinstance(v, list) and not v:
                raise InvalidInputError(f"sweep axis {k!r} is empty")

    def get(self, key, default=None):
        return self.values.get(key, default)

    def floats(self, key, default):
        v = self.values.get(key, default)
        return [float(x) for x in (v if isinstance(v, list) else [v])]


def trap_params(cfg):
    omega = float(cfg.get("omega", 1.0))
    n = int(cfg.get("n", cfg.get("n_particles", 1000)))
    if "t_over_tc" in cfg.values:
        return TrapParams.from_t_over_tc(omega, n, float(cfg.get("t_over_tc")))
    return TrapParams(omega, float(cfg.get("beta", 1.0)), n)


def _emit(cfg, stem, summary, header=None, columns=None):
    cfg.out.mkdir(parents=True, exist_ok=True)
    if columns is not None and cfg.fmt == "csv":
        io.write_csv(cfg.out / f"{stem}.csv", header, columns)
    elif columns is not None:
        summary = dict(summary, table={h: c for h, c in zip(header, columns)})
    io.write_json(cfg.out / f"{stem}.json", summary)
    return summary


def potential_from_config(cfg):
    if cfg.get("potential_file"):
        return io.read_potential(cfg.get("potential_file"), float(cfg.get("core_radius", 0.0)))
    return io.potential_from_mapping(cfg.values)


def scatter_summary(pot, r_max=None, n_grid=20001, b=None):
    sol = sc.solve_zero_energy(pot, r_max=r_max, n_grid=n_grid)
    var = sc.variational_scattering_length(pot, r_max=r_max, n_grid=n_grid)
    summary = {"a": sol.a, "residual": sol.tail_fit_residual, "variational_bound": var.a_bound,
               "integral_v": pot.integral(0.0)}
    if sol.a > 0:
        cut = sc.jastrow(sol, b)
        summary["b"] = cut.b
        summary["eta_integral"] = sc.eta_integral(cut).value
        summary["eta_bound"] = sc.eta_integral(cut).reference
        xi = sc.xi_integral(cut, pot)
        summary["xi_integral"] = xi.value
        summary["xi_closed_form"] = xi.closed_form
    return sol, summary


def cmd_scatter(cfg):
    pot = potential_from_config(cfg)
    r_max = cfg.get("r_max")
    sol, summary = scatter_summary(pot, float(r_max) if r_max else None, int(cfg.get("n_grid", 20001)), cfg.get("b"))
    return _emit(cfg, "scatter", summary, ["r", "u", "f0"], [sol.grid, sol.u, sol.f0(sol.grid)])


def cmd_ideal(cfg):
    p = trap_params(cfg)
    gc = solve_mu0(p)
    spec = OscillatorSpectrum(p.omega, gc.n_max)
    cs = canonical_partition(spec.energies, p.beta, p.n_particles, spec.degeneracies)
    rep = regime_report(p)
    summary = {
        "mu": gc.mu, "n_max": gc.n_max, "n0_gc": gc.n0_gc, "nth_gc": gc.nth_gc,
        "n0_canonical": cs.n0_canonical, "free_energy": cs.free_energy, "free_energy_gc": gc.free_energy_gc,
        "t_c": critical_temperature(p.omega, p.n_particles), "thermo_parameter": rep.thermo_parameter,
        "bec_expected": rep.bec_expected,
    }
    return _emit(cfg, "ideal", summary, ["level", "occupation", "occupation_gc"],
                 [np.arange(gc.n_max + 1), cs.level_occupations, gc.level_occupations])


def cmd_gp(cfg):
    omega = float(cfg.get("omega", 1.0))
    n = float(cfg.get("n", 1.0))
    a = float(cfg.get("a", 0.0))
    grid = gpmod.default_grid(n, a, omega, int(cfg.get("n_points", 4096)))
    res = gpmod.gp_minimize(n, a, omega, grid, tol=cfg.tol)
    summary = {"energy": res.energy, "mu_gp": res.mu_gp, "kinetic": res.kinetic, "potential": res.potential,
               "interaction": res.interaction, "residual": res.residual, "iterations": res.iterations,
               "virial_residual": res.virial_residual}
    return _emit(cfg, "gp", summary, ["r", "phi", "rho"], [res.r, res.phi, res.density])


def cmd_free_energy(cfg):
    p = trap_params(cfg)
    rows = []
    for a_v in cfg.floats("a_v", 0.0):
        est = asy.free_energy_estimate(p, a_v, str(cfg.get("ensemble", "auto")))
        rows.append({"a_v": a_v, "f0": est.f0, "n0": est.n0, "e_gp": est.e_gp, "f_total": est.f_total,
                     "ensemble": est.ensemble})
    return _emit(cfg, "free_energy", {"estimates": rows, "model": "asymptotic, no certified error bar"})


def cmd_density(cfg):
    p = trap_params(cfg)
    a_v = float(cfg.get("a_v", 0.0))
    r_max = float(cfg.get("r_max", 8.0 / (p.omega * math.sqrt(p.beta))))
    r = np.linspace(0.0, r_max, int(cfg.get("n_points", 2001)))
    prof = asy.position_profile(p, a_v, r)
    summary = {"integral": prof.integral(), "n": p.n_particles}
    return _emit(cfg, "density", summary, ["r", "rho_thermal", "rho_condensate", "rho_total"],
                 [r, prof.thermal, prof.condensate, prof.total])


def cmd_momentum(cfg):
    p = trap_params(cfg)
    a_v = float(cfg.get("a_v", 0.0))
    p_max = float(cfg.get("p_max", 8.0 * max(p.beta ** -0.5, p.omega ** 0.5)))
    k = np.linspace(0.0, p_max, int(cfg.get("n_points", 2001)))
    prof = asy.momentum_profile(p, a_v, k)
    summary = {"integral": prof.integral(), "width_ratio": asy.momentum_width_ratio(p, a_v),
               "sqrt_beta_omega": math.sqrt(p.beta_omega)}
    return _emit(cfg, "momentum", summary, ["p", "n_thermal", "n_condensate"], [k, prof.thermal, prof.condensate])


def phase_diagram_rows(n, omega, t_values):
    rows = []
    for t in t_values:
        limit = max(0.0, 1.0 - t ** 3)
        if t == 0:
            rows.append((0.0, 1.0, 1.0, 1.0))
            continue
        p = TrapParams.from_t_over_tc(omega, n, t)
        gc = solve_mu0(p)
        spec = OscillatorSpectrum(omega, gc.n_max)
        cs = canonical_partition(spec.energies, p.beta, n, spec.degeneracies)
        rows.append((t, cs.n0_canonical / n, gc.n0_gc / n, limit))
    return rows


def cmd_phase_diagram(cfg):
    n = int(cfg.get("n", 10000))
    omega = float(cfg.get("omega", 1.0))
    ts = cfg.floats("t_over_tc", [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.2])
    rows = phase_diagram_rows(n, omega, ts)
    cols = list(zip(*rows))
    return _emit(cfg, "phase_diagram", {"n": n, "omega": omega},
                 ["t_over_tc", "n0_over_n_canonical", "n0_over_n_gc", "limit_curve"], cols)


def cmd_verify(cfg):
    rep = default_suite(
        seed=cfg.seed,
        c1=float(cfg.get("c1", ent.C1)),
        c2=float(cfg.get("c2", ent.C2)),
        scalar_pairs=int(cfg.get("scalar_pairs", 10000)),
        operator_pairs=int(cfg.get("operator_pairs", 200)),
        trace_cases=int(cfg.get("trace_cases", 200)),
        gp=bool(cfg.get("gp", True)),
    )
    summary = rep.as_dict()
    summary["seed"] = cfg.seed
    _emit(cfg, "verify", summary)
    summary["exit_status"] = 0 if rep.ok else 1
    return summary


def cmd_manybody(cfg):
    energies = cfg.floats("energies", [0.0, 1.0, 2.0])
    basis = ModeBasis(tuple(energies))
    m = basis.n_modes
    if cfg.get("tensor_file"):
        tensor = io.read_tensor_csv(cfg.get("tensor_file"), m)
    elif str(cfg.get("interaction", "contact")) == "gaussian":
        tensor = gaussian_tensor_1d(m, float(cfg.get("g", 0.1)), float(cfg.get("width", 1.0)))
    else:
        tensor = contact_tensor_1d(m, float(cfg.get("g", 0.1)))
    n = int(cfg.get("n", 3))
    beta = float(cfg.get("beta", 1.0))
    sw = theorem_sandwich(basis, tensor, n, beta)
    ent_rep = entropy_inequality_check(sw.state)
    summary = {"f0": sw.f0, "f": sw.f, "f0_plus_v": sw.f0 + sw.v_expectation, "sandwich_ok": sw.ok,
               "entropy": sw.state.entropy, "bose_entropy": ent_rep.checks[0].rhs, "entropy_ok": ent_rep.ok,
               "bec": bec_diagnostics(sw.state)}
    return _emit(cfg, "manybody", summary)


HANDLERS = {
    "scatter": cmd_scatter, "ideal": cmd_ideal, "gp": cmd_gp, "free-energy": cmd_free_energy,
    "density": cmd_density, "momentum": cmd_momentum, "phase-diagram": cmd_phase_diagram,
    "verify": cmd_verify, "manybody": cmd_manybody,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="trapbose", description="Trapped dilute Bose gas calculations.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=Path, help="key = value configuration file")
    parser.add_argument("--out", type=Path, default=Path("."), help="output directory")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    parser.add_argument("--tol", type=float, default=1e-8, help="solver tolerance")
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a configuration value")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    values = io.read_config(args.config) if args.config else {}
    for item in args.set:
        if "=" not in item:
            print(f"error: --set expects KEY=VALUE, got {item!r}", file=sys.stderr)
            return 2
        k, v = item.split("=", 1)
        values[k.strip()] = io.parse_value(v)
    try:
        cfg = RunConfig(args.command, values, args.tol, args.out, args.seed, args.fmt)
        summary = HANDLERS[args.command](cfg)
    except (TrapBoseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(io.dumps_json(summary))
    return int(summary.get("exit_status", 0)) if isinstance(summary, dict) else 0


if __name__ == "__main__":
    sys.exit(main())
