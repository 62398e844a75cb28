"""Double sine function, hyperbolic kernels, wave functions, and verification suites."""

from .params import Params, ResonanceWarning, dualize, validate
from .quadrature import (IntegralResult, QuadratureSpec, integrate_1d,
                         integrate_nd, truncation_radius)
from .double_sine import (PoleZeroIndex, StripPoint, log_s2, log_s2_strip, s2,
                          s2_asymptotic, s2_residue)
from .kernels import (KernelContext, hat_K, hat_mu, kernel_K, measure_mu,
                      norm_d, product_K, product_mu)
from .wavefunction import CoordinateVector, SpectralVector, psi, psi_dual
from .report import VerificationReport
from . import errors

__all__ = [
    "Params", "ResonanceWarning", "validate", "dualize",
    "QuadratureSpec", "IntegralResult", "integrate_1d", "integrate_nd",
    "truncation_radius",
    "PoleZeroIndex", "StripPoint", "s2", "log_s2", "log_s2_strip",
    "s2_residue", "s2_asymptotic",
    "KernelContext", "kernel_K", "measure_mu", "hat_K", "hat_mu",
    "product_K", "product_mu", "norm_d",
    "SpectralVector", "CoordinateVector", "psi", "psi_dual",
    "VerificationReport",
    "errors",
]

__version__ = "0.1.0"
