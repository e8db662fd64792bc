"""Command-line front end.

Subcommands: ``generate``, ``analyze``, ``scaling-study``, ``verify``.

Exit codes: 0 success, 1 usage or input error, 2 a bound check failed,
3 I/O failure, 4 (``verify`` only) user-supplied constants do not satisfy
the structural hypotheses.
"""
import argparse
import json
import os
import sys
from dataclasses import fields

import numpy as np

from . import bounds as bnd
from .capacity import capacity_from_fading_eigs
from .channel import fading_matrix
from .linalg import BACKEND, hermitian_eigen, require_hermitian, require_square
from .matio import MatrixFormatError, read_matrix, write_matrix
from .structure import (
    CERT_TOL,
    StructureError,
    build_structure_report,
    minimal_alpha,
    sort_diagonal_descending,
)
from .study import StudyConfig, analyze_transfer_matrix, run_study, write_study

EXIT_OK, EXIT_USAGE, EXIT_BOUND, EXIT_IO, EXIT_HYPOTHESIS = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, msg, code):
        super().__init__(msg)
        self.code = code


def _str2bool(s):
    if s.lower() in ("1", "true", "yes", "on"):
        return True
    if s.lower() in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {s!r}")


def _int_list(s):
    return [int(tok) for tok in s.replace(",", " ").split()]


def _opt_float(s):
    return None if s.lower() in ("none", "null", "") else float(s)


_FIELD_TYPES = {
    "m_values": _int_list,
    "normalize_power": _str2bool,
    "gamma_fixed": _opt_float,
}


def _add_config_args(p):
    p.add_argument("--config", help="JSON file with StudyConfig fields")
    for f in fields(StudyConfig):
        conv = _FIELD_TYPES.get(f.name)
        if conv is None:
            default = f.default
            conv = type(default) if default is not None and not callable(default) else str
        names = [f"--{f.name}"]
        if "_" in f.name:
            names.append(f"--{f.name.replace('_', '-')}")
        p.add_argument(*names, dest=f.name, type=conv, default=None)


def load_config(args):
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise CliError(f"cannot read config: {exc}", EXIT_IO)
        except json.JSONDecodeError as exc:
            raise CliError(f"config is not valid JSON: {exc}", EXIT_USAGE)
    for f in fields(StudyConfig):
        val = getattr(args, f.name, None)
        if val is not None:
            data[f.name] = val
    try:
        return StudyConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid config: {exc}", EXIT_USAGE)


def _read(path):
    try:
        return read_matrix(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO)
    except MatrixFormatError as exc:
        raise CliError(f"{path}: {exc}", EXIT_USAGE)


def _emit(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        try:
            with open(out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(f"cannot write {out}: {exc}", EXIT_IO)
    else:
        sys.stdout.write(text)


def cmd_generate(args):
    config = load_config(args)
    m = args.M
    try:
        os.makedirs(config.output_dir, exist_ok=True)
        h, scen = config.transfer_matrix(m)
        stem = os.path.join(config.output_dir, f"{config.model}_M{m}_seed{config.seed}")
        if scen is not None:
            with open(stem + "_scenario.json", "w") as fh:
                json.dump(scen.to_dict(), fh, indent=2)
                fh.write("\n")
        write_matrix(stem + "_H.txt", h)
    except OSError as exc:
        raise CliError(f"cannot write output: {exc}", EXIT_IO)
    print(stem + "_H.txt")
    return EXIT_OK


def cmd_analyze(args):
    h = _read(args.matrix_file)
    if h.shape[0] != h.shape[1]:
        raise CliError(f"transfer matrix must be square, got {h.shape[0]}x{h.shape[1]}", EXIT_USAGE)
    analysis, _ = analyze_transfer_matrix(h, args.kappa, args.gamma_fixed, bound=args.bound)
    _emit(analysis, args.out)
    failed = any(b["holds"] is False for b in analysis["bounds"])
    return EXIT_BOUND if failed else EXIT_OK


def verify_fading(f, kappa, alpha=None, f_plus=None, gamma=None):
    """Bound verdicts for a fading matrix with optional user-supplied constants.

    Returns ``(result_dict, exit_code)``.
    """
    f = require_hermitian(f)
    m = f.shape[0]
    perm, fs = sort_diagonal_descending(f)
    lam = hermitian_eigen(f).eigenvalues
    d = np.clip(np.diagonal(fs).real, 0.0, None)
    auto = build_structure_report(f, gamma_fixed=gamma, eigenvalues=lam)
    a_min = minimal_alpha(fs)
    alpha = a_min if alpha is None else float(alpha)
    gamma = auto.gamma if gamma is None else float(gamma)
    if f_plus is None:
        f_plus = float(np.max(d * np.arange(1, m + 1) ** gamma))
    problems = []
    if alpha < a_min * (1.0 - CERT_TOL):
        problems.append(f"alpha = {alpha:.6g} is below the minimal admissible {a_min:.6g}")
    env = f_plus * np.arange(1, m + 1, dtype=float) ** (-gamma)
    if np.any(d > env * (1.0 + CERT_TOL)):
        i = int(np.argmax(d - env))
        problems.append(f"envelope violated at i = {i + 1}: f_i = {d[i]:.6g} > {env[i]:.6g}")
    rho_plus = (1.0 + alpha) * f_plus
    report = type(auto)(
        permutation=perm, diag_sorted=d, alpha_min=alpha, f_plus=f_plus, gamma=gamma,
        rho_plus=rho_plus, gamma_admissible=gamma > 1.0,
        spectral_radius=auto.spectral_radius, rho_margin=rho_plus - auto.spectral_radius,
        certified=not problems,
    )
    c_bits = capacity_from_fading_eigs(lam, kappa, m).bits
    checks = [
        bnd.verify_counting_bound(lam, report) if gamma > 0
        else bnd.inapplicable("counting_power", "gamma <= 0"),
        bnd.verify_densta_domination(fs, alpha, lam),
        bnd.verify_diag_counting(report) if gamma > 0
        else bnd.inapplicable("diag_counting", "gamma <= 0"),
    ]
    if gamma > 1.0:
        checks.append(bnd.verify_capacity_bound(c_bits, report, kappa, m))
    else:
        checks.append(bnd.inapplicable("capacity_power", f"gamma = {gamma:.4g} <= 1"))
    if problems:
        checks = [bnd.BoundReport(c.kind, c.holds, c.worst_margin, c.checked_points,
                                  (c.note + "; " if c.note else "") + "informational")
                  for c in checks]
        code = EXIT_HYPOTHESIS
    else:
        code = EXIT_BOUND if any(c.holds is False for c in checks) else EXIT_OK
    result = {
        "M": m,
        "kappa": float(kappa),
        "alpha": alpha,
        "alpha_min": a_min,
        "f_plus": f_plus,
        "gamma": gamma,
        "rho_plus": rho_plus,
        "spectral_radius": auto.spectral_radius,
        "capacity_bits": c_bits,
        "hypothesis_satisfied": not problems,
        "hypothesis_problems": problems,
        "bounds": [c.to_dict() for c in checks],
    }
    return result, code


def _table(result):
    lines = [f"{'check':<22}{'holds':<8}{'worst margin':>16}{'points':>8}  note"]
    for b in result["bounds"]:
        holds = "n/a" if b["holds"] is None else ("yes" if b["holds"] else "NO")
        wm = "" if b["worst_margin"] is None else f"{b['worst_margin']:.6g}"
        lines.append(f"{b['kind']:<22}{holds:<8}{wm:>16}{b['checked_points']:>8}  {b['note']}")
    return "\n".join(lines)


def cmd_verify(args):
    a = _read(args.matrix_file)
    try:
        f = fading_matrix(a) if args.input == "transfer" else require_square(a)
        result, code = verify_fading(f, args.kappa, args.alpha, args.f_plus, args.gamma)
    except (StructureError, ValueError) as exc:
        raise CliError(str(exc), EXIT_USAGE)
    for p in result["hypothesis_problems"]:
        print(f"hypothesis not satisfied: {p}", file=sys.stderr)
    print(_table(result), file=sys.stderr)
    _emit(result, args.out)
    return code


def cmd_scaling_study(args):
    config = load_config(args)
    rows = run_study(config)
    try:
        records = write_study(config, rows)
    except OSError as exc:
        raise CliError(f"cannot write study output: {exc}", EXIT_IO)
    print(f"{'M':>6}{'C_M':>12}{'bound':>12}{'C_M/M':>10}  checks")
    for r in records:
        b = "n/a" if r.bound_bits is None else f"{r.bound_bits:.4g}"
        ok = {None: "n/a", True: "ok", False: "FAIL"}
        print(f"{r.M:>6}{r.capacity_bits:>12.4f}{b:>12}{r.capacity_bits / r.M:>10.4f}  "
              f"count={ok[r.counting_bound_holds]} cap={ok[r.capacity_bound_holds]}")
    return EXIT_BOUND if any(r.failed() for r in records) else EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="subcap", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"subcap 0.1.0 ({BACKEND} kernel)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a scenario and its transfer matrix")
    _add_config_args(g)
    g.add_argument("--M", type=int, required=True)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="full analysis of a transfer-matrix file")
    a.add_argument("matrix_file")
    a.add_argument("--kappa", type=float, default=10.0)
    a.add_argument("--gamma-fixed", "--gamma_fixed", dest="gamma_fixed", type=float)
    a.add_argument("--bound", choices=("power", "exponential"), default="power")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("scaling-study", help="capacity and bounds across system sizes")
    _add_config_args(s)
    s.set_defaults(func=cmd_scaling_study)

    v = sub.add_parser("verify", help="check the bounds on a fading matrix")
    v.add_argument("matrix_file")
    v.add_argument("--input", choices=("fading", "transfer"), default="fading",
                   help="whether the file holds F (default) or H")
    v.add_argument("--alpha", type=float)
    v.add_argument("--f-plus", "--f_plus", dest="f_plus", type=float)
    v.add_argument("--gamma", type=float)
    v.add_argument("--kappa", type=float, default=10.0)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
