"""The ramp kernel phi and its Mellin transform.

phi(r) = 1 on (0, x], falls linearly to 0 on (x, x + y], and vanishes beyond.
Its Mellin transform is

    phi_hat(s) = ((x + y)^(s+1) - x^(s+1)) / (y (s^2 + s)).

At s = -1 both numerator and denominator vanish and phi_hat extends
continuously with phi_hat(-1) = -log(1 + y/x) / y.  At s = 0 the numerator
tends to y, so phi_hat has a simple pole with residue 1 (the transform of
the constant 1 on (0, x]).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, PoleError

_NEAR = 1e-4


@dataclass(frozen=True)
class SmoothingKernel:
    x: float
    y: float

    def __post_init__(self):
        if not (self.x > 0 and 0 < self.y <= self.x):
            raise DomainError(f"need 0 < y <= x, got x = {self.x}, y = {self.y}")

    @property
    def support(self) -> float:
        return self.x + self.y

    def __call__(self, r):
        return mellin_phi(r, self)


def mellin_phi(r, kernel: SmoothingKernel):
    """phi(r) for r > 0 (vectorised)."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("phi is defined for r > 0")
    out = np.clip((kernel.x + kernel.y - r) / kernel.y, 0.0, 1.0)
    return out if out.ndim else float(out)


def _near_minus_one(s: complex, kernel: SmoothingKernel) -> complex:
    # numerator / (s + 1) = sum_k u^(k-1) (L1^k - L0^k) / k!  with u = s + 1
    u = s + 1
    l1, l0 = math.log(kernel.x + kernel.y), math.log(kernel.x)
    ratio = sum(u ** (k - 1) * (l1**k - l0**k) / math.factorial(k) for k in range(1, 5))
    return ratio / (kernel.y * s)


def mellin_phi_hat(s: complex, kernel: SmoothingKernel) -> complex:
    """phi_hat(s) = integral_0^inf phi(r) r^(s-1) dr, continued to s != 0."""
    s = complex(s)
    if s == 0:
        raise PoleError("phi_hat has a simple pole at s = 0")
    if abs(s * s + s) < _NEAR and abs(s + 1) < 0.5:
        return _near_minus_one(s, kernel)
    x, y = kernel.x, kernel.y
    return ((x + y) ** (s + 1) - x ** (s + 1)) / (y * (s * s + s))
