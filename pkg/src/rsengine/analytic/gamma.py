"""Complex Gamma function (Lanczos, g = 7) and the local factors Gamma_R, Gamma_C."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError, PoleError

_G = 7.0
_COEFFS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_TWO_PI = 0.5 * np.log(2 * np.pi)


def _check_poles(s: np.ndarray) -> None:
    bad = (s.imag == 0) & (s.real <= 0) & (s.real == np.round(s.real))
    if bad.any():
        raise PoleError(f"Gamma has a pole at s = {s[bad][0].real:g}")


def _loggamma_right(z: np.ndarray) -> np.ndarray:
    """log Gamma(z) for Re z >= 1/2 (principal branch of the Lanczos form)."""
    z = z - 1
    acc = np.full(z.shape, _COEFFS[0], dtype=complex)
    for k in range(1, len(_COEFFS)):
        acc = acc + _COEFFS[k] / (z + k)
    t = z + _G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * np.log(t) - t + np.log(acc)


def complex_loggamma(s):
    """A logarithm of Gamma(s); reflected for Re s < 1/2, so the branch is not the principal one there."""
    arr = np.asarray(s, dtype=complex)
    _check_poles(np.atleast_1d(arr))
    left = arr.real < 0.5
    out = np.empty(arr.shape, dtype=complex)
    out[~left] = _loggamma_right(arr[~left])
    if left.any():
        z = arr[left]
        # Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        out[left] = np.log(np.pi) - np.log(np.sin(np.pi * z)) - _loggamma_right(1 - z)
    return out if out.ndim else complex(out)


def complex_gamma(s):
    """Gamma(s) for complex s (scalar or array); raises PoleError at 0, -1, -2, ..."""
    arr = np.asarray(s, dtype=complex)
    out = np.exp(np.asarray(complex_loggamma(arr)))
    return out if out.ndim else complex(out)


def gamma_v(s, kind: str = "R"):
    """Gamma_R(s) = pi^(-s/2) Gamma(s/2) or Gamma_C(s) = 2 (2 pi)^(-s) Gamma(s)."""
    s = np.asarray(s, dtype=complex)
    if kind == "R":
        out = np.exp(-s / 2 * np.log(np.pi) + np.asarray(complex_loggamma(s / 2)))
    elif kind == "C":
        out = 2 * np.exp(-s * np.log(2 * np.pi) + np.asarray(complex_loggamma(s)))
    else:
        raise DomainError(f"unknown place type {kind!r}; expected 'R' or 'C'")
    return out if out.ndim else complex(out)
