"""Truncated Dirichlet series with certified tails, and exponentially smoothed sums."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as real_gamma, gammaincc

from ..errors import InsufficientXError
from ..rankin_selberg import CoefficientStream

SMOOTHING_RANGE = 50


def tail_bound(degree: int, theta: float, sigma: float, X: int) -> float:
    """Bound for sum_{n > X} |lambda(n)| n^(-sigma) when |lambda(n)| <= d_degree(n) n^theta.

    With sigma' = sigma - theta > 1 and sum_{n<=t} d_m(n) <= t (1 + log t)^(m-1),
    partial summation gives

        sigma' e^(sigma'-1) (sigma'-1)^(-m) Gamma(m, (sigma'-1)(1 + log X)).
    """
    sp = sigma - theta
    if sp <= 1:
        return math.inf
    m = degree
    z = (sp - 1) * (1 + math.log(X))
    upper = float(gammaincc(m, z) * real_gamma(m))
    return sp * math.exp(sp - 1) / (sp - 1) ** m * upper


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    tail: float
    terms: int

    def __complex__(self):
        return complex(self.value)


def _lambda(stream: CoefficientStream) -> np.ndarray:
    if stream.lam is None:
        raise InsufficientXError(f"stream {stream.label} carries no lambda coefficients")
    return np.asarray(stream.lam, dtype=complex)


def dirichlet_eval(stream: CoefficientStream, s: complex, tol: float = 1e-9) -> SeriesValue:
    """sum_{n<=X} lambda(n) n^(-s), refusing when the certified tail exceeds ``tol``.

    The tail uses |lambda(n)| <= d_m(n) n^theta with m the stream's degree,
    which holds for Euler products of degree m with parameters bounded by p^theta.
    """
    s = complex(s)
    X = stream.limit
    tail = tail_bound(stream.degree, stream.theta, s.real, X)
    if not tail <= tol:
        raise InsufficientXError(
            f"{stream.label}: tail bound {tail:.3g} at Re(s) = {s.real:g} with X = {X} exceeds tol = {tol:g}"
        )
    n = np.arange(1, X + 1, dtype=float)
    terms = _lambda(stream)[1:] * np.exp(-s * np.log(n))
    return SeriesValue(complex(math.fsum(terms.real) + 1j * math.fsum(terms.imag)), tail, X)


def smoothed_sum(stream: CoefficientStream, beta: float, x: float) -> complex:
    """sum_{n<=X} lambda(n) n^(-beta) e^(-n/x); needs X >= 50 x."""
    X = stream.limit
    if X < SMOOTHING_RANGE * x:
        raise InsufficientXError(f"{stream.label}: smoothing at x = {x:g} needs X >= {SMOOTHING_RANGE * x:g}, have {X}")
    n = np.arange(1, X + 1, dtype=float)
    terms = _lambda(stream)[1:] * np.exp(-beta * np.log(n) - n / x)
    return complex(math.fsum(terms.real) + 1j * math.fsum(terms.imag))
