"""Exact checks of Floer-side limits against Čech data on nodal curves."""
from .cech import Sheaf, TruncationLeak, build_complex, cohomology, stabilization_check
from .curves import ConfigError, Configuration, build_mirror, parse_builder
from .floer import FloerClass, Scenario, StageOverflow, basis, product
from .linalg import Cokernel, Mat, kernel_basis, rank
from .polys import Poly, Presentation, quotient_dims
from .ratfun import RatFun
from .report import CheckRecord, Report
from .verify import CheckSpec, check_bmodel_theorems, check_closed_string, check_homogeneous

__all__ = [
    "CheckRecord", "CheckSpec", "Cokernel", "ConfigError", "Configuration", "FloerClass", "Mat",
    "Poly", "Presentation", "RatFun", "Report", "Scenario", "Sheaf", "StageOverflow",
    "TruncationLeak", "basis", "build_complex", "build_mirror", "check_bmodel_theorems",
    "check_closed_string", "check_homogeneous", "cohomology", "kernel_basis", "parse_builder",
    "product", "quotient_dims", "rank", "stabilization_check",
]
__version__ = "0.1.0"
