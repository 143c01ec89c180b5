"""Truncated Taylor expansions and the residue of (f g)^k h / (s - s0)^(2k)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from ..errors import DomainError, JetOrderError


@dataclass(frozen=True)
class TaylorJet:
    """Normalised coefficients ``c_l = f^(l)(s0) / l!`` for l = 0..order."""

    base: complex
    coefficients: tuple[complex, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise JetOrderError("a jet needs at least one coefficient")
        object.__setattr__(self, "base", complex(self.base))
        object.__setattr__(self, "coefficients", tuple(complex(c) for c in self.coefficients))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, i):
        return self.coefficients[i]

    @classmethod
    def constant(cls, base: complex, value: complex, order: int) -> TaylorJet:
        return cls(base, (value,) + (0,) * order)

    @classmethod
    def from_derivatives(cls, base: complex, derivatives: Sequence[complex]) -> TaylorJet:
        return cls(base, tuple(d / math.factorial(i) for i, d in enumerate(derivatives)))

    @classmethod
    def exp(cls, base: complex, order: int, scale: complex = 1) -> TaylorJet:
        """Jet of exp(scale (s - s0)) at s0."""
        return cls(base, tuple(scale**i / math.factorial(i) for i in range(order + 1)))

    def _align(self, other: TaylorJet) -> int:
        if abs(self.base - other.base) > 0:
            raise DomainError(f"jets at different points {self.base} and {other.base}")
        return min(self.order, other.order)

    def __add__(self, other: TaylorJet) -> TaylorJet:
        m = self._align(other)
        return TaylorJet(self.base, tuple(a + b for a, b in zip(self.coefficients[: m + 1], other.coefficients)))

    def __mul__(self, other: TaylorJet | complex) -> TaylorJet:
        if not isinstance(other, TaylorJet):
            return TaylorJet(self.base, tuple(other * c for c in self.coefficients))
        m = self._align(other)
        prod = np.convolve(np.array(self.coefficients[: m + 1]), np.array(other.coefficients[: m + 1]))
        return TaylorJet(self.base, tuple(prod[: m + 1]))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> TaylorJet:
        out = TaylorJet.constant(self.base, 1, self.order)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, s):
        """Evaluate the truncated polynomial at s (scalar or array)."""
        u = np.asarray(s, dtype=complex) - self.base
        acc = np.zeros_like(u)
        for c in reversed(self.coefficients):
            acc = acc * u + c
        return acc if acc.ndim else complex(acc)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def residue_extract(f: TaylorJet, g: TaylorJet, h: TaylorJet, k: int) -> complex:
    """Residue at s0 of (f g)^k h / (s - s0)^(2k).

    This is the coefficient of ``(s - s0)^(2k-1)`` in ``f^k g^k h``, written
    out as the sum over l_1 + ... + l_(2k+1) = 2k - 1 of
    ``prod_{j<=k} f_(l_j) g_(l_(j+k)) * h_(l_(2k+1))``.  Every term has some
    l_j = 0 with j <= 2k, so the residue vanishes when f(s0) = g(s0) = 0.
    """
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    need = 2 * k - 1
    for name, jet in (("f", f), ("g", g), ("h", h)):
        if jet.order < need:
            raise JetOrderError(f"jet {name} has order {jet.order}; k = {k} needs {need}")
    f._align(g)
    f._align(h)
    fc, gc, hc = f.coefficients, g.coefficients, h.coefficients
    total = 0j
    for ls in _compositions(need, 2 * k + 1):
        term = hc[ls[-1]]
        for j in range(k):
            term *= fc[ls[j]] * gc[ls[j + k]]
        total += term
    return total


def contour_residue(func: Callable[[np.ndarray], np.ndarray], base: complex, radius: float = 0.1,
                    nodes: int = 4096) -> complex:
    """(1 / 2 pi i) * integral of func over a circle around base (trapezoid rule)."""
    theta = 2 * np.pi * np.arange(nodes) / nodes
    u = radius * np.exp(1j * theta)
    return complex(np.mean(func(base + u) * u))
