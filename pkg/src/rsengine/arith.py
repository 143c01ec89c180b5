"""Integer substrate: primes, factorizations and exact power series.

The power-series side exists to produce Ramanujan's tau function exactly,
which backs the built-in weight 12 level 1 newform.  Series products use
Kronecker substitution: a truncated series with signed integer coefficients
is packed into one big integer (radix ``2**bits``), multiplied with GMP and
unpacked again, so the arithmetic stays exact at any length.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Sequence

import gmpy2
import numpy as np

from .errors import DomainError

# odd entries per sieve segment; 2**18 bytes keeps a block in L2
SEGMENT = 1 << 18

_threads = 1


def set_threads(n: int) -> None:
    """Set the default worker count used by :func:`sieve_primes`."""
    global _threads
    if n < 1:
        raise DomainError(f"thread count must be positive, got {n}")
    _threads = int(n)


def _small_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _sieve_block(low: int, high: int, base: np.ndarray) -> np.ndarray:
    """Odd primes in [low, high) with ``low`` odd."""
    count = (high - low + 1) // 2
    mask = np.ones(count, dtype=bool)
    for p in base:
        p = int(p)
        if p * p >= high:
            break
        start = max(p * p, ((low + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start >= high:
            continue
        mask[(start - low) // 2 :: p] = False
    return low + 2 * np.flatnonzero(mask).astype(np.int64)


def sieve_primes(limit: int, threads: int | None = None) -> np.ndarray:
    """All primes ``<= limit`` in ascending order (segmented, odd-only sieve).

    Blocks may be processed by several threads; they are concatenated in
    block order so the result does not depend on the thread count.
    """
    limit = int(limit)
    if limit < 2:
        raise DomainError(f"no primes below {limit}: limit must be >= 2")
    base = _small_sieve(math.isqrt(limit) + 1)[1:]  # odd base primes
    span = 2 * SEGMENT
    bounds = [(lo, min(lo + span, limit + 1)) for lo in range(3, limit + 1, span)]
    workers = threads or _threads
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(lambda b: _sieve_block(b[0], b[1], base), bounds))
    else:
        blocks = [_sieve_block(lo, hi, base) for lo, hi in bounds]
    return np.concatenate([np.array([2], dtype=np.int64), *blocks])


def von_mangoldt(limit: int) -> np.ndarray:
    """Array ``L`` with ``L[n] = log p`` if ``n = p**k`` and 0 otherwise."""
    out = np.zeros(limit + 1)
    if limit < 2:
        return out
    for p in sieve_primes(limit):
        p = int(p)
        logp = math.log(p)
        pk = p
        while pk <= limit:
            out[pk] = logp
            pk *= p
    return out


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for ``n < 3.3 * 10**24``."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.value < 1:
            raise DomainError("FactoredInteger needs a positive value")
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1 or not is_prime(p):
                raise DomainError(f"bad factor list {self.factors}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise DomainError(f"factors {self.factors} do not multiply to {self.value}")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)

    def totient(self) -> int:
        return reduce(lambda acc, pe: acc * (pe[0] - 1) * pe[0] ** (pe[1] - 1), self.factors, 1)

    def mobius(self) -> int:
        if any(e > 1 for _, e in self.factors):
            return 0
        return -1 if len(self.factors) % 2 else 1


@lru_cache(maxsize=4096)
def factorize(n: int) -> FactoredInteger:
    """Trial-division factorization (desk-scale inputs only)."""
    n = int(n)
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    factors = []
    m = n
    for p in (2, 3):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            factors.append((p, e))
    d = 5
    while d * d <= m:
        for p in (d, d + 2):
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e:
                factors.append((p, e))
        d += 6
    if m > 1:
        factors.append((m, 1))
    return FactoredInteger(n, tuple(factors))


def totient(n: int) -> int:
    return factorize(n).totient()


def mobius(n: int) -> int:
    return factorize(n).mobius()


def divisors(n: int) -> list[int]:
    return factorize(n).divisors()


# --- exact power series -------------------------------------------------


def _pack(coeffs: Sequence[int], bits: int) -> gmpy2.mpz:
    width = bits // 8
    pos = bytearray(width * len(coeffs))
    neg = bytearray(width * len(coeffs))
    for i, c in enumerate(coeffs):
        if c > 0:
            pos[i * width : (i + 1) * width] = int(c).to_bytes(width, "little")
        elif c < 0:
            neg[i * width : (i + 1) * width] = int(-c).to_bytes(width, "little")
    return gmpy2.mpz(int.from_bytes(pos, "little")) - gmpy2.mpz(int.from_bytes(neg, "little"))


def _truncate(value: gmpy2.mpz, bits: int, length: int) -> gmpy2.mpz:
    total = bits * length
    low = gmpy2.f_mod_2exp(value, total)
    if low >> (total - 1):
        low -= gmpy2.mpz(1) << total
    return low


def _unpack(value: gmpy2.mpz, bits: int, length: int) -> list[int]:
    total = bits * length
    width = bits // 8
    raw = int(gmpy2.f_mod_2exp(value, total)).to_bytes(width * length, "little")
    half = 1 << (bits - 1)
    full = 1 << bits
    out = []
    carry = 0
    for i in range(length):
        d = int.from_bytes(raw[i * width : (i + 1) * width], "little") + carry
        if d >= half:
            d -= full
            carry = 1
        else:
            carry = 0
        out.append(d)
    return out


def _radix_bits(bound_bits: int) -> int:
    # one sign bit plus slack, rounded to whole bytes
    return 8 * ((bound_bits + 2 + 7) // 8)


@dataclass(frozen=True)
class IntegerSeries:
    """Power series with exact integer coefficients, truncated at ``order``.

    ``coefficients[m]`` is the coefficient of ``q**m`` for ``m <= order``.
    """

    coefficients: tuple[int, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise DomainError("an IntegerSeries needs at least the constant term")

    @classmethod
    def from_terms(cls, terms: dict[int, int], order: int) -> IntegerSeries:
        coeffs = [0] * (order + 1)
        for m, c in terms.items():
            if 0 <= m <= order:
                coeffs[m] += c
        return cls(tuple(coeffs))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, m):
        return self.coefficients[m]

    def truncate(self, order: int) -> IntegerSeries:
        if order > self.order:
            raise DomainError(f"cannot extend a series of order {self.order} to {order}")
        return IntegerSeries(self.coefficients[: order + 1])

    def __add__(self, other: IntegerSeries) -> IntegerSeries:
        n = min(len(self), len(other))
        return IntegerSeries(tuple(a + b for a, b in zip(self.coefficients[:n], other.coefficients[:n])))

    def __mul__(self, other: IntegerSeries) -> IntegerSeries:
        length = min(len(self), len(other))
        a = self.coefficients[:length]
        b = other.coefficients[:length]
        bound = (
            max(abs(c) for c in a).bit_length()
            + max(abs(c) for c in b).bit_length()
            + length.bit_length()
        )
        bits = _radix_bits(bound)
        prod = _pack(a, bits) * _pack(b, bits)
        return IntegerSeries(tuple(_unpack(prod, bits, length)))

    def __pow__(self, k: int) -> IntegerSeries:
        if k < 0:
            raise DomainError("negative powers are not supported")
        result = IntegerSeries.from_terms({0: 1}, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, by: int) -> IntegerSeries:
        """Multiply by ``q**by``, keeping the truncation order."""
        return IntegerSeries(((0,) * by + self.coefficients)[: len(self)])


def generalized_pentagonals(limit: int):
    """Yield ``(m(3m-1)/2, (-1)**m)`` for m = 0, 1, -1, 2, -2, ... up to ``limit``."""
    yield 0, 1
    m = 1
    while True:
        sign = -1 if m % 2 else 1
        a = m * (3 * m - 1) // 2
        b = m * (3 * m + 1) // 2
        if a > limit:
            return
        yield a, sign
        if b <= limit:
            yield b, sign
        m += 1


def euler_product_series(limit: int) -> IntegerSeries:
    """prod_{n>=1} (1 - q**n) to order ``limit`` (pentagonal number theorem)."""
    if limit < 0:
        raise DomainError("order must be nonnegative")
    return IntegerSeries.from_terms(dict(generalized_pentagonals(limit)), limit)


def _eta_cubed_terms(limit: int) -> dict[int, int]:
    # Jacobi: prod (1 - q^n)^3 = sum_m (-1)^m (2m+1) q^{m(m+1)/2}
    terms = {}
    m = 0
    while m * (m + 1) // 2 <= limit:
        terms[m * (m + 1) // 2] = (-1) ** m * (2 * m + 1)
        m += 1
    return terms


def _tau_table(limit: int) -> tuple[int, ...]:
    # tau(n) = [q^{n-1}] prod (1-q^m)^24 = [q^{n-1}] ((eta^3)^2)^2)^2
    length = limit  # coefficients of q^0 .. q^{limit-1}
    # |tau(n)| <= d(n) n^{11/2} < 2 sqrt(n) n^{11/2}
    bits = _radix_bits(int(6 * math.log2(limit + 2)) + 2)
    value = _pack(IntegerSeries.from_terms(_eta_cubed_terms(length - 1), length - 1).coefficients, bits)
    for _ in range(3):
        value = _truncate(value * value, bits, length)
    return tuple(_unpack(value, bits, length))


_TAU_CHUNK = 1 << 14
_tau_cache: tuple[int, ...] = ()


def ramanujan_tau(limit: int) -> list[int]:
    """``[tau(1), ..., tau(limit)]`` computed exactly."""
    global _tau_cache
    if limit < 1:
        raise DomainError("limit must be >= 1")
    if len(_tau_cache) < limit:
        # round up so nearby requests share one expansion; keep the longest table
        _tau_cache = _tau_table(_TAU_CHUNK * (-(-limit // _TAU_CHUNK)))
    return list(_tau_cache[:limit])
