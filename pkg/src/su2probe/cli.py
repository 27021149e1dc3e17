"""Command-line front end.

Exit codes: 0 ok, 1 usage/config error, 2 infeasible encoding,
3 verification failure.
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import qubit_estimation as qb
from . import qutrit_estimation as qt
from .effective_hamiltonians import EncodingConfig, eta_pair, reparam
from .errors import EstimationError, Infeasible, InvalidWeight, SingularReparam
from .oracle import reports_to_json, reports_to_text, verify_all

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_VERIFY = 0, 1, 2, 3
COMMUTING_MSG = "commuting encodings: estimation infeasible"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x):
    return format(float(x), ".17g")


def parse_weight(text):
    try:
        w11, w12, w22 = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--w expects w11,w12,w22, got {text!r}")
    try:
        return qb.WeightMatrix(w11, w22, w12)
    except InvalidWeight:
        raise UsageError("weight matrix not positive definite")


def parse_probe(text, model):
    parts = [p.strip() for p in text.split(",")]
    try:
        if model == "qubit":
            if len(parts) != 3:
                raise ValueError
            return np.array([float(p) for p in parts])
        if len(parts) != 3:
            raise ValueError
        return qt.normalize([complex(p.replace(" ", "")) for p in parts])
    except ValueError:
        want = "x,y,z" if model == "qubit" else "c(+1),c(0),c(-1) as complex literals"
        raise UsageError(f"--probe expects {want}, got {text!r}")


def _check_noncommuting(cfg):
    if cfg.sin_theta < 1e-12:
        raise Infeasible(COMMUTING_MSG)


def qubit_bound(cfg, W, probe=None):
    etas = eta_pair(cfg)
    try:
        if probe is None:
            r = qb.optimal_qubit_probe(etas)
            return qb.min_hcrb_qubit(etas, W), r
        if abs(np.linalg.norm(probe) - 1) < 1e-10:
            return qb.hcrb_qubit(probe, etas, W), probe
        return qb.mixed_state_bounds(probe, etas, W).hcrb, probe
    except qb.NoOptimalProbe:
        raise Infeasible(COMMUTING_MSG)


def qutrit_bound(cfg, W, probe=None):
    _check_noncommuting(cfg)
    try:
        if probe is None:
            return qt.min_qcrb_qutrit(cfg, W), qt.optimal_qutrit_probe(reparam(cfg))
        etas = eta_pair(cfg)
        return qt.qcrb_trace(qt.qfim_matrix(probe, etas.eta1, etas.eta2), W), probe
    except SingularReparam:
        raise Infeasible("zero total rotation: estimation infeasible")


def scan_bound(model, theta, phi1, phi2, W):
    """Optimal bound at one grid point; inf when infeasible."""
    cfg = EncodingConfig.planar(theta, phi1, phi2)
    try:
        if model == "qubit":
            return qubit_bound(cfg, W)[0]
        return qutrit_bound(cfg, W)[0]
    except Infeasible:
        return np.inf


@dataclass(frozen=True)
class ScanSpec:
    theta_min: float
    theta_max: float
    steps: int
    phi1: float
    phi2: float
    weight: qb.WeightMatrix
    model: str

    def __post_init__(self):
        if self.steps < 2:
            raise UsageError("--steps must be at least 2")
        if not (0 <= self.theta_min < self.theta_max <= np.pi):
            raise UsageError("need 0 <= theta-min < theta-max <= pi")

    def thetas(self):
        return np.linspace(self.theta_min, self.theta_max, self.steps)


def run_scan(spec):
    rows = []
    for th in spec.thetas():
        b = scan_bound(spec.model, th, spec.phi1, spec.phi2, spec.weight)
        rows.append((th, b, int(np.isfinite(b))))
    return rows


def scan_csv(rows):
    lines = ["theta,bound,feasible"]
    for th, b, ok in rows:
        lines.append(f"{fmt(th)},{fmt(b) if ok else 'inf'},{ok}")
    return "\n".join(lines) + "\n"


def describe_probe(model, probe):
    if model == "qubit":
        return [f"r_x={fmt(probe[0])}", f"r_y={fmt(probe[1])}", f"r_z={fmt(probe[2])}"]
    labels = ("c_+1", "c_0", "c_-1")
    return [f"{lab}={fmt(c.real)}{'+' if c.imag >= 0 else '-'}{fmt(abs(c.imag))}j"
            for lab, c in zip(labels, probe)]


def _cfg(args):
    return EncodingConfig.planar(args.theta, args.phi1, args.phi2)


def cmd_bound(args, out):
    W = parse_weight(args.w)
    probe = parse_probe(args.probe, args.model) if args.probe else None
    cfg = _cfg(args)
    fn = qubit_bound if args.model == "qubit" else qutrit_bound
    value, p = fn(cfg, W, probe)
    kind = "hcrb" if args.model == "qubit" else "qcrb"
    lines = [f"model={args.model}", f"bound_type={kind}", f"bound={fmt(value)}", "feasible=1",
             f"probe={'optimal' if probe is None else 'supplied'}"]
    out.write("\n".join(lines + describe_probe(args.model, p)) + "\n")
    return EXIT_OK


def cmd_optimal_probe(args, out):
    cfg = _cfg(args)
    if args.model == "qubit":
        try:
            r = qb.optimal_qubit_probe(eta_pair(cfg))
        except qb.NoOptimalProbe:
            raise Infeasible(COMMUTING_MSG)
        lines = [f"model=qubit"] + describe_probe("qubit", r)
    else:
        _check_noncommuting(cfg)
        coords = reparam(cfg)
        if coords.B < 1e-12:
            raise Infeasible("zero total rotation: estimation infeasible")
        ket = qt.optimal_qutrit_probe(coords)
        lines = ["model=qutrit", f"B={fmt(coords.B)}", f"phi={fmt(coords.phi)}"]
        lines += describe_probe("qutrit", ket)
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_scan(args, out):
    spec = ScanSpec(args.theta_min, args.theta_max, args.steps, args.phi1, args.phi2,
                    parse_weight(args.w), args.model)
    text = scan_csv(run_scan(spec))
    if args.out:
        try:
            with open(args.out, "w", newline="\n", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror}")
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(args, out):
    if args.budget < 0:
        raise UsageError("--budget must be >= 0")
    reports = verify_all(args.seed, args.budget)
    if not reports:
        print("warning: budget 0, no suites run", file=sys.stderr)
    out.write(reports_to_text(reports))
    failed = [r.name for r in reports if not r.passed]
    out.write(f"summary: {len(reports) - len(failed)}/{len(reports)} passed\n")
    if args.json:
        try:
            with open(args.json, "w", newline="\n", encoding="utf-8") as fh:
                fh.write(reports_to_json(reports))
        except OSError as exc:
            raise UsageError(f"cannot write {args.json}: {exc.strerror}")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser():
    p = _Parser(prog="su2probe", description="Optimal probes and precision bounds for two SU(2) phases.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def encoding(sp, theta=True):
        sp.add_argument("--model", choices=("qubit", "qutrit"), default="qubit")
        sp.add_argument("--phi1", type=float, required=True)
        sp.add_argument("--phi2", type=float, required=True)
        if theta:
            sp.add_argument("--theta", type=float, required=True, help="angle between axes (radians)")

    b = sub.add_parser("bound", help="optimal bound (or bound for a supplied probe)")
    encoding(b)
    b.add_argument("--w", default="1,0.2,1", help="weight matrix as w11,w12,w22")
    b.add_argument("--probe", help="qubit: x,y,z; qutrit: three complex amplitudes")
    b.set_defaults(func=cmd_bound)

    s = sub.add_parser("scan", help="optimal bound versus theta as CSV")
    encoding(s, theta=False)
    s.add_argument("--theta-min", type=float, default=0.05)
    s.add_argument("--theta-max", type=float, default=np.pi - 0.05)
    s.add_argument("--steps", type=int, default=181)
    s.add_argument("--w", default="1,0.2,1", help="weight matrix as w11,w12,w22")
    s.add_argument("--out", help="CSV path (stdout if omitted)")
    s.set_defaults(func=cmd_scan)

    o = sub.add_parser("optimal-probe", help="print the optimal probe state")
    encoding(o)
    o.set_defaults(func=cmd_optimal_probe)

    v = sub.add_parser("verify", help="run the numerical oracle suites")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--budget", type=int, default=100)
    v.add_argument("--json", help="also write the report as JSON records")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Infeasible as exc:
        print(str(exc), file=sys.stderr)
        out.write("feasible=0\n")
        return EXIT_INFEASIBLE
    except EstimationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
