"""Complex-analytic tools: Gamma factors, jets and residues, Mellin smoothing, quadrature, series."""

from .gamma import complex_gamma, complex_loggamma, gamma_v
from .jets import TaylorJet, contour_residue, residue_extract
from .mellin import SmoothingKernel, mellin_phi, mellin_phi_hat
from .quadrature import QuadratureResult, gauss_kronrod, integrate_real, integrate_vertical
from .series import SeriesValue, dirichlet_eval, smoothed_sum, tail_bound

__all__ = [
    "complex_gamma", "complex_loggamma", "gamma_v",
    "TaylorJet", "contour_residue", "residue_extract",
    "SmoothingKernel", "mellin_phi", "mellin_phi_hat",
    "QuadratureResult", "gauss_kronrod", "integrate_real", "integrate_vertical",
    "SeriesValue", "dirichlet_eval", "smoothed_sum", "tail_bound",
]
