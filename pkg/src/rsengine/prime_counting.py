"""Prime-power sums of Rankin-Selberg von Mangoldt coefficients in progressions.

The error term measured here is

    E(x; q, a) = psi(x; q, a) - (1/phi(q)) sum_{chi mod q} conj(chi(a)) M(x, chi)

where ``M(x, chi)`` is the main term ``x^(1-iu) / (1-iu)`` of the pair twisted
by the primitive character inducing ``chi``, nonzero only when the twisted
right factor is the contragredient of the left one up to ``|det|^(iu)``.
Such twists are found by comparing Satake data at unramified primes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .arith import factorize, sieve_primes, totient
from .automorphic import contragredient
from .characters import DirichletCharacter, characters_mod
from .analytic.mellin import SmoothingKernel, mellin_phi
from .errors import DomainError, InsufficientDataError
from .rankin_selberg import RSPair, rs_biglambda_stream, twisted_pair

MATCH_PRIMES = 25
MATCH_TOL = 1e-9


def _check_class(q: int, a: int) -> None:
    if q < 1:
        raise DomainError(f"modulus must be positive, got {q}")
    if math.gcd(a, q) != 1:
        raise DomainError(f"residue a = {a} is not coprime to q = {q}")


def _biglambda(pair: RSPair, limit: int) -> np.ndarray:
    if limit > pair.table_limit:
        raise InsufficientDataError(f"{pair.label}: Satake data ends at {pair.table_limit}, need {limit}")
    return rs_biglambda_stream(pair, max(limit, 1)).biglam


def _fsum(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def psi_ap(pair: RSPair, x: float, q: int = 1, a: int = 1) -> complex:
    """sum_{n <= x, n = a mod q} Lambda(n)."""
    _check_class(q, a)
    limit = int(math.floor(x))
    if limit < 2:
        return 0j
    big = _biglambda(pair, limit)
    return _fsum(big[a % q : limit + 1 : q])


def psi_non_coprime(pair: RSPair, x: float, q: int) -> complex:
    """sum of Lambda(n) over n <= x with gcd(n, q) > 1, i.e. powers of primes dividing q."""
    limit = int(math.floor(x))
    if limit < 2 or q == 1:
        return 0j
    big = _biglambda(pair, limit)
    idx = []
    for p in factorize(q).primes:
        pk = p
        while pk <= limit:
            idx.append(pk)
            pk *= p
    return _fsum(big[np.array(sorted(idx), dtype=np.int64)]) if idx else 0j


# --- main term ----------------------------------------------------------


def _multiset_match(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    remaining = list(b)
    for v in a:
        if not remaining:
            return False
        dist = [abs(v - w) for w in remaining]
        j = int(np.argmin(dist))
        if dist[j] > tol:
            return False
        remaining.pop(j)
    return not remaining


def _unramified_primes(pair: RSPair, count: int) -> np.ndarray:
    bad = pair.ramified_primes()
    limit = 200
    while True:
        cand = [int(p) for p in sieve_primes(limit) if int(p) not in bad]
        if len(cand) >= count or limit > pair.table_limit:
            return np.array(cand[:count], dtype=np.int64)
        limit *= 2


def contragredient_shift(pair: RSPair) -> float | None:
    """Real u with right = contragredient(left) (x) |det|^(iu) at the test primes, else None."""
    left, right = pair.left, pair.right
    if left.degree != right.degree:
        return None
    primes = _unramified_primes(pair, MATCH_PRIMES)
    if primes[-1] > pair.table_limit:
        primes = primes[primes <= pair.table_limit]
    if not len(primes):
        return None
    dual = contragredient(left).satake_table(primes)
    target = right.satake_table(primes)
    logs = np.log(primes.astype(float))
    # structural candidates first, then the branch read off at the first prime
    candidates = sorted({round(b.t + c.t, 12) for b in left.atoms() for c in right.atoms()} | {0.0})
    p0 = logs[0]
    for v in target[0]:
        for w in dual[0]:
            if abs(w) > 0.5 and abs(abs(v) - abs(w)) < MATCH_TOL:
                candidates.append(-float(np.angle(v / w)) / p0)
    for u in candidates:
        shifted = dual * np.exp(-1j * u * logs)[:, None]
        if all(_multiset_match(shifted[i], target[i], MATCH_TOL) for i in range(len(primes))):
            return float(u)
    return None


def _main_value(x: float, u: float) -> complex:
    if u == 0:
        return complex(x)
    s = 1 - 1j * u
    return complex(np.exp(s * math.log(x)) / s)


def main_term(pair: RSPair, x: float) -> complex:
    """x^(1-iu)/(1-iu) when right = left~ (x) |det|^(iu), else 0."""
    u = contragredient_shift(pair)
    return 0j if u is None else _main_value(x, u)


# --- Siegel-Walfisz error -------------------------------------------------


@dataclass(frozen=True)
class SWReport:
    x: float
    q: int
    a: int
    psi: complex
    main: complex
    error: complex

    @property
    def normalized_error(self) -> float:
        return abs(self.error) / self.x

    def row(self) -> list:
        return [self.x, self.q, self.a, self.psi.real, self.psi.imag, self.main.real, self.main.imag,
                abs(self.error), self.normalized_error]


def contributing_characters(pair: RSPair, q: int) -> list[tuple[DirichletCharacter, float]]:
    """Characters chi mod q whose primitive twist of the pair has a main term, with its u."""
    out = []
    for chi in characters_mod(q):
        u = contragredient_shift(twisted_pair(pair, chi.primitive()))
        if u is not None:
            out.append((chi, u))
    return out


def main_term_aggregate(pair: RSPair, x: float, q: int, a: int,
                        contributors: list[tuple[DirichletCharacter, float]] | None = None) -> complex:
    if contributors is None:
        contributors = contributing_characters(pair, q)
    total = 0j
    for chi, u in contributors:
        total += chi(a).conjugate() * _main_value(x, u)
    return complex(total) / totient(q)


def sw_error(pair: RSPair, x: float, q: int = 1, a: int = 1, contributors=None) -> SWReport:
    _check_class(q, a)
    psi = psi_ap(pair, x, q, a)
    main = main_term_aggregate(pair, x, q, a, contributors)
    return SWReport(float(x), q, a, psi, main, psi - main)


# --- orthogonality and ramified primes -----------------------------------


@dataclass(frozen=True)
class OrthogonalityDecomposition:
    direct: complex
    via_characters: complex
    scale: float

    @property
    def difference(self) -> float:
        return abs(self.direct - self.via_characters)

    @property
    def relative_difference(self) -> float:
        return self.difference / self.scale if self.scale else self.difference


def _weights(kernel: SmoothingKernel) -> tuple[np.ndarray, np.ndarray]:
    top = int(math.floor(kernel.support))
    n = np.arange(1, top + 1)
    return n, mellin_phi(n.astype(float), kernel)


def default_kernel(x: float) -> SmoothingKernel:
    return SmoothingKernel(float(x), float(x) / 10)


def orthogonality_decomposition(pair: RSPair, x: float, q: int, a: int,
                                kernel: SmoothingKernel | None = None) -> OrthogonalityDecomposition:
    """Both sides of sum_{n = a (q)} Lambda(n) phi(n) = (1/phi(q)) sum_psi conj(psi(a)) sum_n Lambda(n) psi(n) phi(n)."""
    _check_class(q, a)
    kernel = kernel or default_kernel(x)
    n, w = _weights(kernel)
    big = _biglambda(pair, int(n[-1]))[1:] * w
    mask = (n % q == a % q) & (np.gcd(n, q) == 1)
    direct = _fsum(big[mask])
    total = 0j
    for psi in characters_mod(q):
        total += psi(a).conjugate() * _fsum(big * psi.values(n))
    return OrthogonalityDecomposition(direct, total / totient(q), float(np.abs(big).sum()))


@dataclass(frozen=True)
class RamifiedCorrection:
    difference: complex
    bound: float
    primes: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return abs(self.difference) <= self.bound


def ramified_bound(pair: RSPair, x: float, q: int, theta: float | None = None) -> tuple[float, tuple[int, ...]]:
    """n n' sum_{p | q N N'} sum_{l <= log(2x)/log p} p^(l (theta + theta')) log p."""
    theta = pair.theta if theta is None else theta
    primes = tuple(sorted(set(factorize(q).primes) | pair.ramified_primes()))
    total = 0.0
    for p in primes:
        logp = math.log(p)
        top = int(math.floor(math.log(2 * x) / logp + 1e-12))
        total += sum(p ** (l * theta) for l in range(1, top + 1)) * logp
    return pair.left.degree * pair.right.degree * total, primes


def ramified_correction(pair: RSPair, psi: DirichletCharacter, x: float,
                        kernel: SmoothingKernel | None = None,
                        theta: float | None = None) -> RamifiedCorrection:
    """sum Lambda(n) psi(n) phi(n) - sum Lambda_{left x (right (x) chi)}(n) phi(n), chi primitive inducing psi."""
    kernel = kernel or default_kernel(x)
    if kernel.support > 2 * x:
        raise DomainError("kernel support must lie in (0, 2x] for the ramified bound")
    n, w = _weights(kernel)
    top = int(n[-1])
    twisted = twisted_pair(pair, psi.primitive())
    lhs = _biglambda(pair, top)[1:] * psi.values(n) * w
    rhs = _biglambda(twisted, top)[1:] * w
    diff = _fsum(lhs - rhs)
    bound, primes = ramified_bound(twisted, x, psi.modulus, theta)
    return RamifiedCorrection(diff, bound, primes)


# --- short intervals ----------------------------------------------------


@dataclass(frozen=True)
class ShortIntervalReport:
    X: float
    T: float
    sum_abs: float
    cauchy_schwarz: float  # sqrt of the product of the two self-pair interval sums

    @property
    def ratio(self) -> float:
        return self.sum_abs * self.T / self.X

    @property
    def cs_holds(self) -> bool:
        return self.sum_abs <= self.cauchy_schwarz * (1 + 1e-12)


def short_interval_sum(pair: RSPair, X: float, T: float) -> ShortIntervalReport:
    """sum over X < n <= X e^(1/T) of |Lambda(n)|, with the Cauchy-Schwarz majorant."""
    if T < 1:
        raise DomainError(f"T must be >= 1, got {T}")
    lo = int(math.floor(X))
    hi = int(math.floor(X * math.exp(1 / T)))
    if hi <= lo:
        return ShortIntervalReport(float(X), float(T), 0.0, 0.0)
    sl = slice(lo + 1, hi + 1)
    s = math.fsum(np.abs(_biglambda(pair, hi)[sl]))
    self_left = RSPair(pair.left, contragredient(pair.left))
    self_right = RSPair(pair.right, contragredient(pair.right))
    s1 = math.fsum(_biglambda(self_left, hi)[sl].real)
    s2 = math.fsum(_biglambda(self_right, hi)[sl].real)
    return ShortIntervalReport(float(X), float(T), s, math.sqrt(max(s1, 0.0) * max(s2, 0.0)))


# --- experiment harness -------------------------------------------------


CSV_COLUMNS = ["x", "q", "a", "re_psi", "im_psi", "re_main", "im_main", "abs_error", "normalized_error"]


@dataclass
class SWExperiment:
    pair_label: str
    q: int
    A: float
    reports: list[SWReport] = field(default_factory=list)

    def max_normalized(self) -> dict[float, float]:
        out: dict[float, float] = {}
        for r in self.reports:
            out[r.x] = max(out.get(r.x, 0.0), r.normalized_error)
        return out

    @property
    def decreasing(self) -> bool:
        m = self.max_normalized()
        xs = sorted(m)
        return len(xs) < 2 or m[xs[-1]] < m[xs[0]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.reports:
            w.writerow([repr(v) if isinstance(v, float) else v for v in r.row()])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "pair": self.pair_label,
            "q": self.q,
            "A": self.A,
            "max_normalized_error": {repr(x): v for x, v in sorted(self.max_normalized().items())},
            "decreasing": self.decreasing,
        }

    def to_json(self) -> str:
        data = self.summary()
        data["rows"] = [dict(zip(CSV_COLUMNS, r.row())) for r in self.reports]
        return json.dumps(data, indent=2)


def sw_experiment(pair: RSPair, x_grid, q: int, A: float = 1.0) -> SWExperiment:
    """One SWReport per (x, a) with a a unit mod q."""
    if q < 1:
        raise DomainError(f"modulus must be positive, got {q}")
    xs = sorted(float(x) for x in x_grid)
    if xs and q > math.log(xs[-1]) ** A:
        warnings.warn(f"q = {q} exceeds (log x)^A = {math.log(xs[-1]) ** A:.3g}", stacklevel=2)
    contributors = contributing_characters(pair, q)
    if xs:
        _biglambda(pair, int(xs[-1]))
    exp = SWExperiment(pair.label, q, A)
    units = [a for a in range(1, q + 1) if math.gcd(a, q) == 1] if q > 1 else [1]
    for x in xs:
        for a in units:
            exp.reports.append(sw_error(pair, x, q, a % q if q > 1 else 1, contributors))
    return exp
