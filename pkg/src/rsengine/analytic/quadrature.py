"""Adaptive Gauss-Kronrod (7/15) quadrature along vertical lines."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import DomainError, QuadratureError

# positive 15-point Kronrod nodes and weights; the 7-point Gauss rule uses
# nodes 1, 3, 5 and the centre
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
for _i, _w in zip((1, 3, 5), _WG[:3]):
    GAUSS_WEIGHTS[_i] = GAUSS_WEIGHTS[14 - _i] = _w
GAUSS_WEIGHTS[7] = _WG[3]


def gauss_kronrod(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> tuple[complex, float]:
    """(K15 estimate, |K15 - G7|) of the integral of f over [a, b]."""
    half = 0.5 * (b - a)
    vals = np.asarray(f(0.5 * (a + b) + half * NODES), dtype=complex)
    k = half * np.dot(KRONROD_WEIGHTS, vals)
    g = half * np.dot(GAUSS_WEIGHTS, vals)
    return complex(k), float(abs(k - g))


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error: float
    evaluations: int
    panels: int
    converged: bool


def _dyadic_edges(T: float) -> list[float]:
    edges = [0.0]
    b = 1.0
    while b < T:
        edges.append(b)
        b *= 2
    edges.append(T)
    return edges


def _pairwise_sum(values: list[complex]) -> complex:
    while len(values) > 1:
        values = [values[i] + values[i + 1] if i + 1 < len(values) else values[i]
                  for i in range(0, len(values), 2)]
    return values[0] if values else 0j


def integrate_real(f, a: float, b: float, tol: float = 1e-10, max_evals: int = 200_000,
                   edges: list[float] | None = None) -> QuadratureResult:
    """Adaptive integral of a complex-valued f over [a, b], starting from ``edges`` panels."""
    edges = edges or [a, b]
    heap = []
    evals = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = gauss_kronrod(f, lo, hi)
        evals += 15
        heapq.heappush(heap, (-e, lo, hi, v))
    while True:
        err = sum(-item[0] for item in heap)
        if err <= tol:
            converged = True
            break
        if evals + 30 > max_evals:
            converged = False
            break
        e, lo, hi, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        for a2, b2 in ((lo, mid), (mid, hi)):
            v, e2 = gauss_kronrod(f, a2, b2)
            heapq.heappush(heap, (-e2, a2, b2, v))
        evals += 30
    panels = sorted(heap, key=lambda item: item[1])
    value = _pairwise_sum([item[3] for item in panels])
    return QuadratureResult(value, err, evals, len(panels), converged)


def integrate_vertical(sampler: Callable, sigma: float, T: float, tol: float = 1e-10,
                       max_evals: int = 200_000) -> QuadratureResult:
    """(1 / 2 pi i) * integral of sampler(w) dw over the segment [sigma - iT, sigma + iT].

    ``sampler`` should accept an array of complex points; scalar-only
    callables are vectorised.  Panels are dyadic in |t| (edges at 0, +-1,
    +-2, +-4, ...) and refined adaptively until the summed Kronrod error
    estimate is below ``tol``.
    """
    if not (T > 0 and math.isfinite(T)):
        raise DomainError(f"half height must be positive and finite, got {T}")

    def f(t):
        w = sigma + 1j * t
        try:
            out = np.asarray(sampler(w), dtype=complex)
            if out.shape != w.shape:
                raise ValueError
        except (TypeError, ValueError):
            out = np.array([complex(sampler(complex(z))) for z in w])
        return out / (2 * np.pi)

    right = _dyadic_edges(T)
    edges = [-e for e in right[::-1]] + right[1:]
    res = integrate_real(f, -T, T, tol, max_evals, edges)
    if not res.converged:
        raise QuadratureError(
            f"no convergence after {res.evaluations} evaluations (error estimate {res.error:.3g} > {tol:.3g})",
            estimate=res.value, error=res.error, evaluations=res.evaluations,
        )
    return res
