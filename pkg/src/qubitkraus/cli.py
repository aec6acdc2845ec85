"""Command-line front end: ``qubitkraus <subcommand> [flags]``.

Exit codes: 0 ok, 1 invariant or compute failure, 2 usage, 3 singular
parameters, 4 I/O.
"""
import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import qops
from .analytic import B_FORMS, analytic_kraus
from .dynamics import (
    concurrence_surface,
    esd_time,
    evolve_kraus,
    integrate_master_equation,
)
from .errors import QubitKrausError, SingularFrequencyError
from .generator import tabulated_generator
from .kraus import PICTURES, numeric_kraus, reduce_single_qubit, schrodinger_dress
from .model import ModelParams, bohr_frequencies, damping_rates
from .verify import run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SINGULAR, EXIT_IO = 0, 1, 2, 3, 4

COMMANDS = ("rates", "verify", "evolve", "esd", "surface", "kraus", "reduce")
DEFAULT_BETA_GRID = (0.0, 50.0, 100.0)
DEFAULT_T_MAX = {"evolve": 0.01, "surface": 0.01, "verify": 0.1}
DEFAULT_STEPS = {"evolve": 101, "surface": 101, "verify": 20}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    omega: float = 0.1
    alpha: float = 0.02
    temperature: float = 100.0
    cutoff: float = 100.0
    beta: float = None
    beta_list: list = None
    beta_min: float = None
    beta_max: float = None
    beta_steps: int = None
    t_max: float = None
    steps: int = None
    t: list = None
    initial: str = "bell-plus"
    partner: str = "plus"
    trace_out: int = 2
    picture: str = "schrodinger"
    source: str = "numeric"
    b_form: str = "printed"
    tol: float = 1e-9
    out: str = None

    @property
    def params(self):
        beta = 0.0 if self.beta is None else self.beta
        return ModelParams(self.omega, beta, self.alpha, self.temperature, self.cutoff)

    def betas(self, default=DEFAULT_BETA_GRID):
        """Beta values requested by the flags, or ``default`` when none were given."""
        if self.beta_list is not None:
            betas = list(self.beta_list)
        elif any(v is not None for v in (self.beta_min, self.beta_max, self.beta_steps)):
            if None in (self.beta_min, self.beta_max, self.beta_steps):
                raise UsageError("--beta-min, --beta-max and --beta-steps must be given together")
            if self.beta_steps < 2 or not self.beta_max > self.beta_min:
                raise UsageError("beta grid needs beta-steps >= 2 and beta-max > beta-min")
            betas = list(np.linspace(self.beta_min, self.beta_max, self.beta_steps))
        elif self.beta is not None:
            betas = [self.beta]
        else:
            betas = list(default)
        if not betas or any(np.diff(betas) <= 0):
            raise UsageError("beta values must be strictly increasing")
        for b in betas:
            ModelParams(self.omega, b, self.alpha, self.temperature, self.cutoff)
        return [float(b) for b in betas]

    def time_grid(self, command):
        t_max = DEFAULT_T_MAX.get(command, 0.01) if self.t_max is None else self.t_max
        steps = DEFAULT_STEPS.get(command, 101) if self.steps is None else self.steps
        if not t_max > 0:
            raise UsageError(f"t-max must be positive, got {t_max}")
        if steps < 2:
            raise UsageError(f"steps must be >= 2, got {steps}")
        return np.linspace(0.0, t_max, steps)

    def initial_state(self):
        if self.initial == "bell-plus":
            return qops.bell_plus()
        if self.initial == "maximally-mixed":
            return qops.maximally_mixed()
        return load_state(self.initial, 4)

    def partner_state(self):
        if self.partner in ("plus", "minus"):
            return qops.projector(qops.ket("+" if self.partner == "plus" else "-"))
        if self.partner == "maximally-mixed":
            return qops.maximally_mixed(2)
        return load_state(self.partner, 2)


def load_state(path, dim):
    """Density matrix from ``.npy`` or whitespace-separated text (complex entries allowed)."""
    try:
        if str(path).endswith(".npy"):
            rho = np.load(path)
        else:
            rho = np.loadtxt(path, dtype=complex, ndmin=2)
    except ValueError as exc:
        raise UsageError(f"cannot parse state file {path}: {exc}") from exc
    try:
        return qops.check_density_matrix(rho, dim)
    except ValueError as exc:
        raise UsageError(f"state in {path}: {exc}") from exc


def _float_list(text):
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


_TEXT_KEYS = ("initial", "partner", "picture", "source", "b_form", "out")
_CHOICES = {"picture": PICTURES, "source": ("numeric", "analytic"), "b_form": B_FORMS, "trace_out": (1, 2)}

_CONVERTERS = {
    "beta_list": _float_list,
    "t": _float_list,
    "beta_steps": int,
    "steps": int,
    "trace_out": int,
}


def read_config_file(path):
    """``key = value`` lines; ``#`` starts a comment; keys use flag names."""
    known = {f.name for f in fields(RunConfig)}
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in known:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            conv = _CONVERTERS.get(key, str if key in _TEXT_KEYS else float)
            try:
                values[key] = conv(value)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return values


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model")
    g.add_argument("--omega", type=float, help="qubit frequency (default: 0.1)")
    g.add_argument("--alpha", type=float, help="bath coupling strength (default: 0.02)")
    g.add_argument("--temperature", type=float, help="bath temperature (default: 100)")
    g.add_argument("--cutoff", type=float, help="spectral cutoff frequency (default: 100)")
    g.add_argument("--beta", type=float, help="qubit-qubit coupling (default: 0; grid commands use 0,50,100)")
    g.add_argument("--beta-list", type=_float_list, help="comma-separated beta values")
    g.add_argument("--beta-min", type=float, help="first beta of a uniform grid")
    g.add_argument("--beta-max", type=float, help="last beta of a uniform grid")
    g.add_argument("--beta-steps", type=int, help="number of beta grid points")
    g = common.add_argument_group("time and state")
    g.add_argument("--t-max", type=float, help="end of the time grid (default: 0.01; verify 0.1; esd 5/(16 min gamma))")
    g.add_argument("--steps", type=int, help="time grid points (default: 101; verify 20)")
    g.add_argument("--t", type=_float_list, help="comma-separated times for kraus/reduce (default: 0,0.001,0.01)")
    g.add_argument("--initial", help="bell-plus | maximally-mixed | <path> (default: bell-plus)")
    g.add_argument("--partner", help="reduce: state of the traced qubit, plus | minus | maximally-mixed | <path> (default: plus)")
    g.add_argument("--trace-out", type=int, choices=(1, 2), help="reduce: qubit to trace out (default: 2)")
    g = common.add_argument_group("numerics and output")
    g.add_argument("--picture", choices=PICTURES, help="frame of Kraus operators and states (default: schrodinger)")
    g.add_argument("--source", choices=("numeric", "analytic"), help="kraus: Kraus set origin (default: numeric)")
    g.add_argument("--b-form", choices=B_FORMS, help="analytic B term (default: printed)")
    g.add_argument("--tol", type=float, help="complete-positivity and invariant tolerance (default: 1e-9)")
    g.add_argument("--out", help="output file (default: stdout)")
    g.add_argument("--config", help="key=value file; command-line flags take precedence")

    parser = argparse.ArgumentParser(
        prog="qubitkraus",
        description="Kraus-operator dynamics of two coupled qubits with one qubit in a thermal bath.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "rates": "print Bohr frequencies and damping rates",
        "verify": "run the invariant suite; exit 1 on any hard failure",
        "evolve": "concurrence trajectory as CSV",
        "esd": "entanglement sudden-death times as CSV",
        "surface": "concurrence over a (beta, t) grid as CSV",
        "kraus": "dump Kraus operators as JSON",
        "reduce": "dump single-qubit reduced Kraus operators as JSON",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name], description=helps[name])
    return parser


def resolve_config(args):
    values = {}
    if args.config:
        values.update(read_config_file(args.config))
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    for key, allowed in _CHOICES.items():
        if key in values and values[key] not in allowed:
            raise UsageError(f"{key} must be one of {allowed}, got {values[key]!r}")
    return RunConfig(**values)


def _num(x):
    return "nan" if x is None else repr(float(x))


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) for v in row])
    return buf.getvalue()


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_rates(cfg):
    lines = ["beta,nu1,nu2,nu3,gamma1,gamma2"]
    for beta in cfg.betas(default=(0.0,)):
        p = cfg.params.with_beta(beta)
        nu = bohr_frequencies(p)
        r = damping_rates(p)
        vals = (beta, nu.nu1, nu.nu2, nu.nu3, r.gamma1, r.gamma2)
        lines.append(",".join(f"{v:.12g}" for v in vals))
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_verify(cfg):
    betas = cfg.betas()
    t_max = DEFAULT_T_MAX["verify"] if cfg.t_max is None else cfg.t_max
    steps = DEFAULT_STEPS["verify"] if cfg.steps is None else cfg.steps
    if not t_max > 1e-5 or steps < 2:
        raise UsageError("verify needs t-max > 1e-5 and steps >= 2")
    times = np.logspace(-5, np.log10(t_max), steps)
    report = run_verification(cfg.params, betas, times, cfg.tol)
    _emit(report.format() + "\n", cfg.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_evolve(cfg):
    betas = cfg.betas(default=(0.0,))
    if len(betas) != 1:
        raise UsageError("evolve takes a single beta")
    params = cfg.params.with_beta(betas[0])
    rho0 = cfg.initial_state()
    times = cfg.time_grid("evolve")
    traj = evolve_kraus(params, rho0, times, cfg.picture)
    # the oracle runs in the interaction picture, where the generator is time-independent
    inter = traj if cfg.picture == "interaction" else evolve_kraus(params, rho0, times, "interaction")
    oracle = integrate_master_equation(tabulated_generator(damping_rates(params)), rho0, times)
    dist = [qops.trace_distance(a, b) for a, b in zip(inter.states, oracle.states)]
    rows = zip(times, traj.concurrence, traj.purity, traj.trace_residual, dist)
    _emit(_csv_text(["t", "concurrence", "purity", "trace_residual", "oracle_trace_distance"], rows), cfg.out)
    return EXIT_OK


def cmd_esd(cfg):
    rho0 = cfg.initial_state()
    rows = []
    for beta in cfg.betas():
        res = esd_time(cfg.params.with_beta(beta), rho0, t_max=cfg.t_max, picture=cfg.picture)
        lo, hi = res.bracket if res.found else (None, None)
        rows.append((beta, res.esd_time, lo, hi))
    _emit(_csv_text(["beta", "esd_time", "bracket_lo", "bracket_hi"], rows), cfg.out)
    return EXIT_OK


def cmd_surface(cfg):
    betas = cfg.betas(default=np.linspace(0.0, 100.0, 11))
    data = concurrence_surface(
        cfg.params, betas, cfg.time_grid("surface"), cfg.picture, cfg.initial_state()
    )
    _emit(_csv_text(["beta", "t", "concurrence"], data), cfg.out)
    return EXIT_OK


def _times(cfg):
    times = [0.0, 0.001, 0.01] if cfg.t is None else cfg.t
    if not times or any(t < 0 for t in times):
        raise UsageError("--t needs non-negative times")
    return times


def _matrix_dump(m):
    return {"real": np.real(m).tolist(), "imag": np.imag(m).tolist()}


def _kraus_entry(ks):
    return {
        "time": ks.time,
        "picture": ks.picture,
        "weights": ks.weights.tolist(),
        "operators": [_matrix_dump(k) for k in ks.operators],
        "completeness_residual": ks.completeness_residual(),
    }


def _kraus_set(cfg, params, t):
    rates = damping_rates(params)
    if cfg.source == "analytic":
        ks = analytic_kraus(rates, t, cfg.b_form)
    else:
        ks = numeric_kraus(rates, t, tol=cfg.tol)
    if cfg.picture == "schrodinger":
        ks = schrodinger_dress(ks, params, t)
    return ks


def _params_dump(params):
    return {f.name: getattr(params, f.name) for f in fields(params)}


def cmd_kraus(cfg):
    betas = cfg.betas(default=(0.0,))
    if len(betas) != 1:
        raise UsageError("kraus takes a single beta")
    params = cfg.params.with_beta(betas[0])
    dump = {
        "params": _params_dump(params),
        "source": cfg.source,
        "b_form": cfg.b_form if cfg.source == "analytic" else None,
        "picture": cfg.picture,
        "entries": [_kraus_entry(_kraus_set(cfg, params, t)) for t in _times(cfg)],
    }
    _emit(json.dumps(dump, indent=1) + "\n", cfg.out)
    return EXIT_OK


def cmd_reduce(cfg):
    betas = cfg.betas(default=(0.0,))
    if len(betas) != 1:
        raise UsageError("reduce takes a single beta")
    params = cfg.params.with_beta(betas[0])
    partner = cfg.partner_state()
    entries = []
    for t in _times(cfg):
        red = reduce_single_qubit(_kraus_set(cfg, params, t), partner, cfg.trace_out, cfg.tol)
        entries.append(_kraus_entry(red))
    dump = {
        "params": _params_dump(params),
        "source": cfg.source,
        "picture": cfg.picture,
        "trace_out": cfg.trace_out,
        "partner_state": _matrix_dump(partner),
        "entries": entries,
    }
    _emit(json.dumps(dump, indent=1) + "\n", cfg.out)
    return EXIT_OK


HANDLERS = {
    "rates": cmd_rates,
    "verify": cmd_verify,
    "evolve": cmd_evolve,
    "esd": cmd_esd,
    "surface": cmd_surface,
    "kraus": cmd_kraus,
    "reduce": cmd_reduce,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = resolve_config(args)
        cfg.params  # validate model parameters before any work
        return HANDLERS[args.command](cfg)
    except SingularFrequencyError as exc:
        print(f"qubitkraus: singular parameters: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except UsageError as exc:
        print(f"qubitkraus: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qubitkraus: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QubitKrausError as exc:
        print(f"qubitkraus: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        # invalid model parameters surface as ValueError from ModelParams
        print(f"qubitkraus: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
