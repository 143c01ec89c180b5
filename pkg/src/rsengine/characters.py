"""Dirichlet characters.

Over the rationals with modulus ``(q)`` the narrow ray class group is just
``(Z/qZ)*``: the total-positivity condition only removes the sign, which is
already absorbed by taking ideals rather than numbers.  Its characters are
therefore ordinary Dirichlet characters mod ``q``.

A character is stored as an exponent vector against a fixed generator basis
of ``(Z/qZ)*`` (one cyclic factor per odd prime power, plus ``-1`` and ``5``
for ``2**e`` with ``e >= 3``).  Values are exact: :meth:`DirichletCharacter.angle`
returns ``theta`` in ``[0, 1)`` as a :class:`~fractions.Fraction`, with
``chi(n) = exp(2 pi i theta)``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable

import numpy as np

from .arith import factorize, totient
from .errors import DomainError


def _primitive_root(p: int, e: int) -> int:
    phi = p - 1
    prime_divs = factorize(phi).primes
    g = 2
    while any(pow(g, phi // r, p) == 1 for r in prime_divs):
        g += 1
    if e >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class _Component:
    prime: int
    local_modulus: int
    generator: int  # global lift: == local generator mod p^e, == 1 elsewhere
    order: int
    logs: np.ndarray  # logs[n % q] = discrete log of n in this factor, -1 off units


class _UnitGroup:
    """Generator basis and discrete-log tables for (Z/qZ)*."""

    def __init__(self, q: int):
        self.q = q
        self.components: list[_Component] = []
        residues = np.arange(q, dtype=np.int64)
        for p, e in factorize(q).factors:
            pe = p**e
            rest = q // pe

            def lift(g_local, pe=pe, rest=rest):
                # x == g mod pe, x == 1 mod rest
                if rest == 1:
                    return g_local % pe
                return (g_local * rest * pow(rest, -1, pe) + pe * pow(pe, -1, rest)) % (pe * rest)

            local = residues % pe
            if p == 2:
                if e == 1:
                    continue
                sign = np.where(local % 4 == 1, 0, 1)
                sign[local % 2 == 0] = -1
                self.components.append(_Component(2, pe, lift(pe - 1), 2, sign))
                if e >= 3:
                    order = pe // 4
                    table = np.full(pe, -1, dtype=np.int64)
                    x = 1
                    for k in range(order):
                        table[x] = k
                        table[pe - x] = k
                        x = x * 5 % pe
                    self.components.append(_Component(2, pe, lift(5), order, table[local]))
            else:
                g = _primitive_root(p, e)
                order = pe - pe // p
                table = np.full(pe, -1, dtype=np.int64)
                x = 1
                for k in range(order):
                    table[x] = k
                    x = x * g % pe
                self.components.append(_Component(p, pe, lift(g), order, table[local]))
        self.orders = tuple(c.order for c in self.components)
        self.units = np.gcd(residues, q) == 1 if q > 1 else np.ones(1, dtype=bool)

    @property
    def generators(self) -> tuple[int, ...]:
        return tuple(c.generator for c in self.components)


@lru_cache(maxsize=512)
def unit_group(q: int) -> _UnitGroup:
    if q < 1:
        raise DomainError(f"modulus must be positive, got {q}")
    return _UnitGroup(q)


def _root_of_unity(theta: Fraction) -> complex:
    exact = {Fraction(0): 1 + 0j, Fraction(1, 2): -1 + 0j, Fraction(1, 4): 1j, Fraction(3, 4): -1j}
    if theta in exact:
        return exact[theta]
    return cmath.exp(2j * math.pi * theta)


@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character mod ``modulus`` given by its exponent vector."""

    modulus: int
    exponents: tuple[int, ...]
    _group: _UnitGroup = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        group = unit_group(self.modulus)
        if len(self.exponents) != len(group.orders):
            raise DomainError(
                f"modulus {self.modulus} needs {len(group.orders)} exponents, got {self.exponents}"
            )
        object.__setattr__(self, "_group", group)
        object.__setattr__(
            self, "exponents", tuple(int(a) % o for a, o in zip(self.exponents, group.orders))
        )

    # -- construction ------------------------------------------------------

    @classmethod
    def principal(cls, q: int) -> DirichletCharacter:
        return cls(q, (0,) * len(unit_group(q).orders))

    @classmethod
    def from_angles(cls, q: int, angle: Callable[[int], Fraction]) -> DirichletCharacter:
        """Build the character mod ``q`` whose value at each unit ``n`` is ``exp(2 pi i angle(n))``.

        ``angle`` is only queried at units coprime to ``q``; it must be a
        homomorphism there, which is checked on the generators' orders.
        """
        group = unit_group(q)
        exps = []
        for comp in group.components:
            theta = Fraction(angle(comp.generator)) % 1
            a = theta * comp.order
            if a.denominator != 1:
                raise DomainError(f"angle {theta} at generator {comp.generator} is not a character value")
            exps.append(int(a))
        return cls(q, tuple(exps))

    # -- basic data --------------------------------------------------------

    @cached_property
    def _denominator(self) -> int:
        return math.lcm(1, *self._group.orders)

    @cached_property
    def _numerators(self) -> np.ndarray:
        """``num[r]`` with chi(r) = exp(2 pi i num[r] / D); -1 at non-units."""
        den = self._denominator
        num = np.zeros(self.modulus, dtype=np.int64)
        for a, comp in zip(self.exponents, self._group.components):
            num = (num + a * (den // comp.order) * comp.logs) % den
        num[~self._group.units] = -1
        return num

    @cached_property
    def table(self) -> np.ndarray:
        """Complex values on residues ``0 .. modulus-1``."""
        num = self._numerators
        den = self._denominator
        vals = np.exp(2j * np.pi * num / den)
        # quarter turns are exact
        quarter = (4 * num) % den == 0
        vals[quarter] = np.array([1, 1j, -1, complex(0, -1)])[(4 * num[quarter] // den) % 4]
        vals[num < 0] = 0
        return vals

    @cached_property
    def order(self) -> int:
        return math.lcm(1, *(o // math.gcd(a, o) for a, o in zip(self.exponents, self._group.orders)))

    def angle(self, n: int) -> Fraction | None:
        """Exact argument of ``chi(n)`` as a fraction of a full turn, or None if ``chi(n) = 0``."""
        num = int(self._numerators[int(n) % self.modulus])
        if num < 0:
            return None
        return Fraction(num, self._denominator)

    def value_exact(self, n: int) -> tuple[int, int] | None:
        """``(order, exponent)`` with ``chi(n) = exp(2 pi i exponent / order)``."""
        theta = self.angle(n)
        if theta is None:
            return None
        return theta.denominator, theta.numerator

    def __call__(self, n: int) -> complex:
        theta = self.angle(n)
        return 0j if theta is None else _root_of_unity(theta)

    def values(self, ns) -> np.ndarray:
        """Vectorised evaluation on an integer array."""
        return self.table[np.asarray(ns, dtype=np.int64) % self.modulus]

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    @property
    def parity(self) -> int:
        """0 for even characters, 1 for odd ones."""
        if self.modulus <= 2:
            return 0
        return 0 if self.angle(self.modulus - 1) == 0 else 1

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    # -- group law ---------------------------------------------------------

    def conj(self) -> DirichletCharacter:
        return DirichletCharacter(self.modulus, tuple(-a for a in self.exponents))

    def __mul__(self, other: DirichletCharacter) -> DirichletCharacter:
        if self.modulus == other.modulus:
            return DirichletCharacter(self.modulus, tuple(a + b for a, b in zip(self.exponents, other.exponents)))
        q = math.lcm(self.modulus, other.modulus)
        return DirichletCharacter.from_angles(q, lambda n: self.angle(n) + other.angle(n))

    def __pow__(self, k: int) -> DirichletCharacter:
        return DirichletCharacter(self.modulus, tuple(k * a for a in self.exponents))

    def induce(self, modulus: int) -> DirichletCharacter:
        """The character mod ``modulus`` (a multiple of ours) induced by this one."""
        if modulus % self.modulus:
            raise DomainError(f"{modulus} is not a multiple of {self.modulus}")
        return DirichletCharacter.from_angles(modulus, self.angle)

    # -- conductor ---------------------------------------------------------

    @cached_property
    def conductor(self) -> int:
        cond = 1
        comps = self._group.components
        i = 0
        while i < len(comps):
            comp = comps[i]
            a = self.exponents[i]
            if comp.prime == 2:
                if comp.local_modulus == 4:
                    cond *= 4 if a else 1
                    i += 1
                    continue
                b = self.exponents[i + 1]
                n5 = comps[i + 1].order
                o5 = n5 // math.gcd(b, n5)
                if o5 > 1:
                    cond *= 2 ** (o5.bit_length() - 1 + 2)
                elif a:
                    cond *= 4
                i += 2
                continue
            p = comp.prime
            o = comp.order // math.gcd(a, comp.order)
            if o > 1:
                v = 0
                while o % p == 0:
                    o //= p
                    v += 1
                cond *= p ** (1 + v)
            i += 1
        return cond

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def primitive(self) -> DirichletCharacter:
        """The primitive character inducing this one."""
        d = self.conductor
        if d == self.modulus:
            return self
        q = self.modulus

        def angle(g):
            n = g
            while math.gcd(n, q) != 1:
                n += d
            return self.angle(n)

        return DirichletCharacter.from_angles(d, angle)

    def label(self) -> str:
        return f"{self.modulus}:{characters_mod(self.modulus).index(self)}"

    def __repr__(self):
        return f"DirichletCharacter({self.modulus}, {self.exponents})"


@lru_cache(maxsize=256)
def _characters_mod(q: int) -> tuple[DirichletCharacter, ...]:
    orders = unit_group(q).orders
    return tuple(DirichletCharacter(q, exps) for exps in itertools.product(*(range(o) for o in orders)))


def characters_mod(q: int) -> list[DirichletCharacter]:
    """All ``phi(q)`` characters mod ``q``, sorted by exponent vector (principal first)."""
    return list(_characters_mod(q))


def character(q: int, index: int) -> DirichletCharacter:
    chars = _characters_mod(q)
    if not 0 <= index < len(chars):
        raise DomainError(f"there are {len(chars)} characters mod {q}; index {index} is out of range")
    return chars[index]


def evaluate(chi: DirichletCharacter, n: int) -> complex:
    return chi(n)


def conductor(chi: DirichletCharacter) -> int:
    return chi.conductor


def primitivize(chi: DirichletCharacter) -> tuple[DirichletCharacter, int]:
    prim = chi.primitive()
    return prim, prim.modulus


def orthogonality_sum(q: int, a: int, n: int) -> complex:
    """sum over chi mod q of conj(chi(a)) chi(n)."""
    if math.gcd(a, q) != 1:
        raise DomainError(f"a = {a} is not coprime to q = {q}")
    return complex(sum(chi(a).conjugate() * chi(n) for chi in _characters_mod(q)))


def primitive_count(q: int) -> int:
    """Number of primitive characters mod q, as sum_{d | q} mu(q/d) phi(d)."""
    from .arith import mobius

    return sum(mobius(q // d) * totient(d) for d in factorize(q).divisors())
