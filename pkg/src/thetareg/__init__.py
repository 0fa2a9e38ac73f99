"""Local theta-regulators of algebraic numbers, Fermat quotients and prime scans."""
from __future__ import annotations

try:
    from importlib.metadata import PackageNotFoundError, version as _version

    __version__ = _version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .fields import FieldSpec, parse_field, make_field, conjugate, norm
from .ring import AlphaData, BadPrime, RingElement, alpha_of
from .regulators import RegulatorReport, fermat_quotient, lift_check, regulator_report, relation_module
from .scanner import ScanConfig, scan, fermat_scan
from .montecarlo import StatReport, run_stats, coefficient_independence_probe
from .fermat_lab import factor_phi_tilde, fermat_mean_scan, order_mod, phi_tilde

__all__ = [
    "__version__",
    "FieldSpec", "parse_field", "make_field", "conjugate", "norm",
    "AlphaData", "BadPrime", "RingElement", "alpha_of",
    "RegulatorReport", "fermat_quotient", "lift_check", "regulator_report", "relation_module",
    "ScanConfig", "scan", "fermat_scan",
    "StatReport", "run_stats", "coefficient_independence_probe",
    "factor_phi_tilde", "fermat_mean_scan", "order_mod", "phi_tilde",
]
