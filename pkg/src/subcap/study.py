"""Single-matrix analysis pipeline and the capacity scaling study."""
import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import List, Optional

import numpy as np

from . import bounds as bnd
from .capacity import (
    capacity_from_counting_integral,
    capacity_from_fading_eigs,
    capacity_from_singular_values,
    capacity_logdet,
    singular_values,
)
from .channel import MODELS, build_transfer_matrix, fading_matrix
from .linalg import hermitian_eigen, require_square
from .structure import StructureError, build_structure_report

BOUND_KINDS = ("power", "exponential")


@dataclass
class StudyConfig:
    model: str = "scattering_powerlaw"
    m_values: List[int] = field(default_factory=lambda: [4, 8, 16, 32, 64, 128, 256])
    kappa: float = 10.0
    seed: int = 0
    paths_per_scenario: int = 32
    gain_decay_s: float = 1.0
    wavelength: float = 0.1
    spacing_over_wavelength: float = 0.5
    normalize_power: bool = False
    gamma_fixed: Optional[float] = None
    output_dir: str = "out"
    variance: float = 1.0
    bound: str = "power"
    jobs: int = 1

    def __post_init__(self):
        self.m_values = [int(m) for m in self.m_values]
        self.validate()

    def validate(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if not self.m_values or self.m_values[0] < 1 or any(
            b <= a for a, b in zip(self.m_values, self.m_values[1:])
        ):
            raise ValueError(f"m_values must be strictly increasing positive integers: {self.m_values}")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.paths_per_scenario < 1:
            raise ValueError(f"paths_per_scenario must be >= 1, got {self.paths_per_scenario}")
        if not self.variance > 0:
            raise ValueError(f"variance must be positive, got {self.variance}")
        if self.bound not in BOUND_KINDS:
            raise ValueError(f"bound must be one of {BOUND_KINDS}, got {self.bound!r}")

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self):
        return asdict(self)

    def transfer_matrix(self, m):
        return build_transfer_matrix(
            self.model, m, self.seed,
            paths=self.paths_per_scenario,
            gain_decay_s=self.gain_decay_s,
            wavelength=self.wavelength,
            spacing_over_wavelength=self.spacing_over_wavelength,
            variance=self.variance,
            normalize_power=self.normalize_power,
        )


def analyze_transfer_matrix(h, kappa, gamma_fixed=None, certified_model=True, bound="power"):
    """Structure, spectrum, all capacity forms and bound verdicts for one H.

    ``certified_model=False`` (the i.i.d. baseline) marks the bound checks
    as inapplicable instead of evaluating them.
    """
    h = require_square(h)
    m = h.shape[0]
    f = fading_matrix(h)
    spec = hermitian_eigen(f)
    lam = spec.eigenvalues
    caps = [
        capacity_logdet(h, kappa),
        capacity_from_singular_values(singular_values(h), kappa, m),
        capacity_from_fading_eigs(lam, kappa, m),
        capacity_from_counting_integral(lam, kappa, m),
    ]
    out = {
        "M": m,
        "kappa": float(kappa),
        "fading_eigenvalues": [float(x) for x in lam],
        "eigensolver": {"max_residual": spec.max_residual, "sweeps": spec.iterations},
        "capacity": {c.form: c.to_dict() for c in caps},
    }
    try:
        report = build_structure_report(f, gamma_fixed=gamma_fixed, eigenvalues=lam)
    except StructureError as exc:
        out["structure"] = {"error": str(exc)}
        out["bounds"] = [
            bnd.inapplicable(k, f"no structure certificate: {exc}").to_dict()
            for k in ("counting_power", "densta_domination", "capacity_power")
        ]
        out["bound_bits"] = None
        out["bound_kind"] = "none"
        return out, None

    out["structure"] = report.to_dict()
    reports = _verify_all(f, lam, report, caps[0].bits, kappa, m, certified_model, bound)
    out["bounds"] = [r.to_dict() for r in reports.values()]
    out["bound_bits"], out["bound_kind"] = _bound_value(report, kappa, m, bound)
    return out, (report, reports)


def _bound_value(report, kappa, m, bound):
    if bound == "exponential":
        return bnd.capacity_bound_exponential(m, kappa, report.rho_plus, report.gamma), "capacity_exponential"
    if report.gamma > 1.0:
        return bnd.capacity_bound_power(m, kappa, report.rho_plus, report.gamma), "capacity_power"
    return None, "none"


def _verify_all(f, lam, report, c_bits, kappa, m, certified_model, bound):
    out = {}
    if not certified_model:
        note = "model carries no structural certificate"
        for k in ("counting_power", "densta_domination", "capacity_power"):
            out[k] = bnd.inapplicable(k, note)
        return out
    if report.gamma > 0:
        out["counting_power"] = bnd.verify_counting_bound(lam, report)
    else:
        out["counting_power"] = bnd.inapplicable("counting_power", "fitted gamma <= 0")
    fs = f[np.ix_(report.permutation, report.permutation)]
    out["densta_domination"] = bnd.verify_densta_domination(fs, report.alpha_min, lam)
    if bound == "exponential":
        out["capacity_exponential"] = bnd.verify_exponential_capacity_bound(
            c_bits, m, kappa, report.rho_plus, report.gamma)
    elif report.gamma_admissible:
        out["capacity_power"] = bnd.verify_capacity_bound(c_bits, report, kappa, m)
    else:
        out["capacity_power"] = bnd.inapplicable(
            "capacity_power", f"gamma = {report.gamma:.4g} <= 1")
    return out


RECORD_COLUMNS = (
    "M", "model", "seed", "capacity_bits", "bound_bits", "bound_kind",
    "alpha_min", "f_plus", "gamma", "rho_plus", "spectral_radius",
    "counting_bound_holds", "capacity_bound_holds", "runtime_ms",
)
PLOT_COLUMNS = ("M", "C_M", "bound", "C_M_over_M", "bound_over_M")


@dataclass
class ScalingRecord:
    M: int
    model: str
    seed: int
    capacity_bits: float
    bound_bits: Optional[float]
    bound_kind: str
    alpha_min: float
    f_plus: float
    gamma: float
    rho_plus: float
    spectral_radius: float
    counting_bound_holds: Optional[bool]
    capacity_bound_holds: Optional[bool]
    runtime_ms: float

    def failed(self):
        return self.counting_bound_holds is False or self.capacity_bound_holds is False

    def csv_row(self):
        return [_fmt(getattr(self, c)) for c in RECORD_COLUMNS]


def _fmt(v):
    if v is None:
        return "n/a"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.17g}"
    return str(v)


def run_row(config, m):
    """Compute one scaling-study row; returns ``(record, analysis_dict)``."""
    t0 = time.perf_counter()
    h, _ = config.transfer_matrix(m)
    certified = config.model != "iid_gaussian"
    analysis, parts = analyze_transfer_matrix(
        h, config.kappa, config.gamma_fixed, certified_model=certified, bound=config.bound)
    runtime = (time.perf_counter() - t0) * 1e3
    nan = math.nan
    if parts is None:
        s = dict(alpha_min=nan, f_plus=nan, gamma=nan, rho_plus=nan)
        rho = float(np.max(np.abs(analysis["fading_eigenvalues"])))
        count_ok = cap_ok = None
    else:
        report, reports = parts
        s = dict(alpha_min=report.alpha_min, f_plus=report.f_plus,
                 gamma=report.gamma, rho_plus=report.rho_plus)
        rho = report.spectral_radius
        count_ok = reports["counting_power"].holds
        cap_key = "capacity_exponential" if config.bound == "exponential" else "capacity_power"
        cap_ok = reports[cap_key].holds
    bound_bits = analysis["bound_bits"] if certified else None
    record = ScalingRecord(
        M=m, model=config.model, seed=config.seed,
        capacity_bits=analysis["capacity"]["logdet"]["bits"],
        bound_bits=bound_bits,
        bound_kind=analysis["bound_kind"] if certified else "none",
        spectral_radius=rho,
        counting_bound_holds=count_ok,
        capacity_bound_holds=cap_ok,
        runtime_ms=runtime,
        **s,
    )
    return record, analysis


def _run_row_star(args):
    return run_row(*args)


def run_study(config):
    """All rows of a study, in ``m_values`` order."""
    tasks = [(config, m) for m in config.m_values]
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            return list(pool.map(_run_row_star, tasks))
    return [run_row(config, m) for m in config.m_values]


def records_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_COLUMNS)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def plotdata_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PLOT_COLUMNS)
    for r in records:
        b = r.bound_bits
        w.writerow([
            r.M, _fmt(r.capacity_bits), _fmt(b),
            _fmt(r.capacity_bits / r.M), _fmt(None if b is None else b / r.M),
        ])
    return buf.getvalue()


def write_study(config, rows):
    os.makedirs(config.output_dir, exist_ok=True)
    records = [r for r, _ in rows]
    with open(os.path.join(config.output_dir, "records.csv"), "w") as fh:
        fh.write(records_csv(records))
    with open(os.path.join(config.output_dir, "plotdata.csv"), "w") as fh:
        fh.write(plotdata_csv(records))
    for rec, analysis in rows:
        with open(os.path.join(config.output_dir, f"analysis_{rec.M}.json"), "w") as fh:
            json.dump(analysis, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return records
