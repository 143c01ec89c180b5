"""Rankin-Selberg pairs, their coefficient streams and the auxiliary product D(s).

At an unramified prime the local parameters of ``pi x pi'`` are the ``n n'``
products ``alpha_j alpha'_j'``.  Character twists are combined at the pair
level: an atom pair ``(A (x) chi) x (B (x) psi)`` uses the primitive
character inducing ``chi psi``, so ``(pi (x) chi) x (pi~ (x) chibar)`` is
``pi x pi~`` at every prime, including those dividing ``cond(chi)``.  At
primes dividing a base level the zero-padded parameters are multiplied as
they are; that convention replaces the true ramified local factors.

With ``S_k(p) = sum (alpha_j alpha'_j')^k``::

    Lambda(p^k) = S_k(p) log p
    lambda(p^k) = h_k(p),   k h_k = sum_{i=1}^k S_i h_{k-i}   (Newton)

and ``lambda`` is extended multiplicatively.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .arith import sieve_primes
from .automorphic import (
    AutomorphicRep,
    analytic_conductor,
    contragredient,
    trivial,
    twist,
)
from .characters import DirichletCharacter
from .errors import DomainError, InsufficientDataError

ATOL = 1e-9


@dataclass(frozen=True)
class _AtomPair:
    left: AutomorphicRep
    right: AutomorphicRep
    chi: DirichletCharacter | None
    t: float

    def base_params(self, primes):
        a = self.left.base.params(primes)
        b = self.right.base.params(primes)
        if self.left.dual:
            a = np.conj(a)
        if self.right.dual:
            b = np.conj(b)
        return a, b

    def scale(self, primes):
        s = np.ones(len(primes), dtype=complex)
        if self.chi is not None:
            s = s * self.chi.values(primes)
        if self.t:
            s = s * np.exp(-1j * self.t * np.log(primes.astype(float)))
        return s


def _combine(chi1, chi2):
    if chi1 is None:
        return chi2
    if chi2 is None:
        return chi1
    prod = (chi1 * chi2).primitive()
    return None if prod.modulus == 1 else prod


@dataclass(frozen=True, eq=False)
class RSPair:
    """The pair ``(left, right)`` standing for ``L(s, left x right)``."""

    left: AutomorphicRep
    right: AutomorphicRep
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def degree(self) -> int:
        return self.left.degree * self.right.degree

    @property
    def theta(self) -> float:
        return self.left.theta + self.right.theta

    @property
    def label(self) -> str:
        return f"{self.left.name} x {self.right.name}"

    @property
    def table_limit(self) -> float:
        return min(self.left.table_limit, self.right.table_limit)

    def ramified_primes(self) -> set[int]:
        return self.left.ramified_primes() | self.right.ramified_primes()

    def atom_pairs(self) -> list[_AtomPair]:
        return [
            _AtomPair(a, b, _combine(a.chi, b.chi), a.t + b.t)
            for a in self.left.atoms()
            for b in self.right.atoms()
        ]

    def combined_params(self, primes) -> np.ndarray:
        """Array (len(primes), n n') of the local Rankin-Selberg parameters."""
        primes = np.asarray(primes, dtype=np.int64)
        blocks = []
        for ap in self.atom_pairs():
            a, b = ap.base_params(primes)
            outer = (a[:, :, None] * b[:, None, :]).reshape(len(primes), -1)
            blocks.append(outer * ap.scale(primes)[:, None])
        return np.concatenate(blocks, axis=1)

    def power_sums(self, primes, kmax: int, dtype=complex) -> np.ndarray:
        """``S[:, k-1] = sum_j gamma_j(p)^k`` for k = 1..kmax."""
        primes = np.asarray(primes, dtype=np.int64)
        out = np.zeros((len(primes), kmax), dtype=dtype)
        for ap in self.atom_pairs():
            a, b = (v.astype(dtype) for v in ap.base_params(primes))
            s = ap.scale(primes).astype(dtype)
            pa, pb, ps = np.ones_like(a), np.ones_like(b), np.ones_like(s)
            for k in range(kmax):
                pa, pb, ps = pa * a, pb * b, ps * s
                out[:, k] += pa.sum(axis=1) * pb.sum(axis=1) * ps
        return out

    def archimedean_shifts(self) -> list[tuple[complex, float]]:
        """(mu_j + mu'_j', t + t') for every pair of real-place parameters."""
        return [(m1 + m2, t1 + t2) for m1, t1 in self.left.shifts() for m2, t2 in self.right.shifts()]

    def analytic_conductor(self, t: float = 0.0) -> float:
        """``N^n' N'^n * prod (|mu_j + mu'_j' + i(t + t_pair)| + 3)``.

        The arithmetic part is a stand-in for the true pair conductor, exact
        when the two levels are coprime and the twists unramified.
        """
        value = float(self.left.conductor) ** self.right.degree * float(self.right.conductor) ** self.left.degree
        for mu, shift in self.archimedean_shifts():
            value *= abs(mu + 1j * (t + shift)) + 3
        return value

    def is_zeta(self) -> bool:
        pairs = self.atom_pairs()
        if len(pairs) != 1:
            return False
        ap = pairs[0]
        return ap.left.kind == "gl1" and ap.right.kind == "gl1" and ap.chi is None and ap.t == 0

    def _require(self, X: int) -> None:
        if X > self.table_limit:
            raise InsufficientDataError(
                f"{self.label}: Satake data ends at {self.table_limit}, stream needs {X}"
            )


@dataclass(frozen=True, eq=False)
class CoefficientStream:
    """``lam[n]`` and ``biglam[n]`` for 1 <= n <= limit (index 0 unused)."""

    limit: int
    label: str
    lam: np.ndarray | None = None
    biglam: np.ndarray | None = None
    degree: int = 1
    theta: float = 0.0

    def with_lambda(self, other: CoefficientStream) -> CoefficientStream:
        return CoefficientStream(
            self.limit, self.label,
            self.lam if self.lam is not None else other.lam,
            self.biglam if self.biglam is not None else other.biglam,
            self.degree, self.theta,
        )

    def to_csv(self, path_or_file) -> None:
        close = False
        if isinstance(path_or_file, (str, Path)):
            fh = open(path_or_file, "w", newline="")
            close = True
        else:
            fh = path_or_file
        try:
            fh.write(f"# pair: {self.label}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "re_lambda", "im_lambda", "re_Lambda", "im_Lambda"])
            lam = self.lam if self.lam is not None else np.full(self.limit + 1, np.nan)
            big = self.biglam if self.biglam is not None else np.full(self.limit + 1, np.nan)
            for n in range(1, self.limit + 1):
                w.writerow([n, repr(float(lam[n].real)), repr(float(lam[n].imag)),
                            repr(float(big[n].real)), repr(float(big[n].imag))])
        finally:
            if close:
                fh.close()


def _prime_power_data(pair: RSPair, X: int, dtype=complex):
    primes = sieve_primes(X) if X >= 2 else np.zeros(0, dtype=np.int64)
    kmax = max(1, int(math.log2(X))) if X >= 2 else 1
    return primes, kmax, pair.power_sums(primes, kmax, dtype)


def _newton(S: np.ndarray) -> np.ndarray:
    """Complete homogeneous h_0..h_K from power sums S_1..S_K (rowwise)."""
    P, K = S.shape
    H = np.zeros((P, K + 1), dtype=S.dtype)
    H[:, 0] = 1
    for k in range(1, K + 1):
        H[:, k] = (S[:, :k] * H[:, k - 1 :: -1][:, :k]).sum(axis=1) / k
    return H


def multiplicative_extension(primes: np.ndarray, H: np.ndarray, X: int) -> np.ndarray:
    """Array of f(n), n <= X, for f multiplicative with f(p^k) = H[i, k]."""
    lam = np.ones(X + 1, dtype=H.dtype)
    lam[0] = 0
    if X < 2:
        return lam
    root = math.isqrt(X)
    small = primes[primes <= root]
    for i, p in enumerate(small):
        p = int(p)
        pk, k = p, 1
        while pk <= X:
            j = np.arange(1, X // pk + 1)
            j = j[j % p != 0]
            lam[pk * j] *= H[i, k]
            pk *= p
            k += 1
    big = primes[primes > root]
    vals = H[len(small) :, 1]
    # for p > sqrt(X) every multiple p*j <= X has j < p
    for j in range(1, X // (root + 1) + 1):
        m = big <= X // j
        if not m.any():
            break
        lam[big[m] * j] *= vals[m]
    return lam


def rs_lambda_stream(pair: RSPair, X: int, dtype=complex) -> CoefficientStream:
    """Dirichlet coefficients of L(s, pair) up to X.

    ``dtype=np.clongdouble`` runs the recursion in extended precision.
    """
    key = ("lam", X, np.dtype(dtype).str)
    if key in pair._cache:
        return pair._cache[key]
    pair._require(X)
    if pair.is_zeta():
        lam = np.ones(X + 1, dtype=dtype)
        lam[0] = 0
    else:
        primes, _, S = _prime_power_data(pair, X, dtype)
        lam = multiplicative_extension(primes, _newton(S), X)
    out = CoefficientStream(X, pair.label, lam=lam, degree=pair.degree, theta=pair.theta)
    pair._cache[key] = out
    return out


def rs_biglambda_stream(pair: RSPair, X: int) -> CoefficientStream:
    """Coefficients of -L'/L(s, pair) up to X."""
    for (kind, lim, *_), cached in pair._cache.items():
        if kind == "big" and lim >= X:
            if lim == X:
                return cached
            return CoefficientStream(X, pair.label, biglam=cached.biglam[: X + 1],
                                     degree=pair.degree, theta=pair.theta)
    pair._require(X)
    big = np.zeros(X + 1, dtype=complex)
    if X >= 2:
        primes, kmax, S = _prime_power_data(pair, X)
        logp = np.log(primes.astype(float))
        idx = np.arange(len(primes))
        pk = primes.copy()
        for k in range(kmax):
            keep = pk <= X
            idx, pk = idx[keep], pk[keep]
            if not len(idx):
                break
            big[pk] = logp[idx] * S[idx, k]
            pk = pk * primes[idx]
    out = CoefficientStream(X, pair.label, biglam=big, degree=pair.degree, theta=pair.theta)
    pair._cache[("big", X)] = out
    return out


def rs_stream(pair: RSPair, X: int) -> CoefficientStream:
    return rs_lambda_stream(pair, X).with_lambda(rs_biglambda_stream(pair, X))


def _twist_args(chi) -> tuple[DirichletCharacter | None, float]:
    if chi is None:
        return None, 0.0
    if isinstance(chi, AutomorphicRep):
        if chi.degree != 1 or chi.components:
            raise DomainError("a GL(1) twist must be a Dirichlet character or a degree 1 representation")
        return chi.chi, chi.t
    return chi, 0.0


def twisted_pair(pair: RSPair, chi=None, t: float = 0.0) -> RSPair:
    """``(left, right (x) chi (x) |det|^{it})``."""
    c, t0 = _twist_args(chi)
    return RSPair(pair.left, twist(pair.right, c, t0 + t))


def dirichlet_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a * b)(n) = sum_{d | n} a(d) b(n/d) on 1..X (index 0 ignored)."""
    X = min(len(a), len(b)) - 1
    out = np.zeros(X + 1, dtype=np.result_type(a, b))
    for d in range(1, X + 1):
        if a[d] != 0:
            m = X // d
            out[d : d * m + 1 : d] += a[d] * b[1 : m + 1]
    return out


def log_derivative_residual(stream: CoefficientStream) -> float:
    """max_n |lambda(n) log n - sum_{d | n} Lambda(d) lambda(n/d)|."""
    n = np.arange(stream.limit + 1)
    lhs = stream.lam * np.log(np.maximum(n, 1))
    rhs = dirichlet_convolve(stream.biglam, stream.lam)
    return float(np.max(np.abs(lhs[1:] - rhs[1:])))


def euler_product(pair: RSPair, s: complex, prime_limit: int) -> complex:
    """prod_{p <= prime_limit} prod_j (1 - gamma_j(p) p^{-s})^{-1}."""
    primes = sieve_primes(prime_limit)
    gam = pair.combined_params(primes)
    ps = np.exp(-s * np.log(primes.astype(float)))
    return complex(np.exp(-np.log1p(-gam * ps[:, None]).sum()))


# --- the auxiliary product D(s) -----------------------------------------


@dataclass(frozen=True, eq=False)
class AuxiliaryProduct:
    """D(s) = L(s, Pi x Pi~) for Pi = pi + pi(x)chi + pi'~ + pi'~(x)chibar.

    ``factors`` lists the Rankin-Selberg factors with squared ones repeated,
    so it has sixteen entries.
    """

    isobaric: AutomorphicRep
    factors: tuple[tuple[str, RSPair], ...]

    @property
    def pair(self) -> RSPair:
        return self._pair

    def __post_init__(self):
        object.__setattr__(self, "_pair", RSPair(self.isobaric, contragredient(self.isobaric)))

    def distinct_factors(self) -> list[tuple[str, int, RSPair]]:
        seen: dict[str, list] = {}
        for label, p in self.factors:
            seen.setdefault(label, [label, 0, p])[1] += 1
        return [tuple(v) for v in seen.values()]

    def biglambda(self, X: int) -> np.ndarray:
        """Lambda_D as the sum of the factors' Lambda (log of a product)."""
        return sum(rs_biglambda_stream(p, X).biglam for _, p in self.factors)

    def lambda_by_convolution(self, X: int, dtype=complex) -> np.ndarray:
        out = None
        for _, p in self.factors:
            lam = rs_lambda_stream(p, X, dtype).lam
            out = lam.copy() if out is None else dirichlet_convolve(out, lam)
        return out

    def lambda_direct(self, X: int, dtype=complex) -> np.ndarray:
        return rs_lambda_stream(self.pair, X, dtype).lam

    def stream(self, X: int) -> CoefficientStream:
        return CoefficientStream(
            X, f"D[{self.isobaric.name}]",
            lam=self.lambda_direct(X), biglam=self.biglambda(X),
            degree=self.pair.degree, theta=self.pair.theta,
        )


def auxiliary_product(pi: AutomorphicRep, pi2: AutomorphicRep, chi) -> AuxiliaryProduct:
    c, t = _twist_args(chi)
    cb = c.conj() if c is not None else None
    c2 = c * c if c is not None else None
    cb2 = cb * cb if cb is not None else None

    def tw(rep, ch, mult):
        return twist(rep, ch, mult * t)

    pit, pi2t = contragredient(pi), contragredient(pi2)
    factors = []
    for label, left, right, mult in (
        ("pi x pi~", pi, pit, 2),
        ("pi' x pi'~", pi2, pi2t, 2),
        ("pi x (pi' (x) chi)", pi, tw(pi2, c, 1), 2),
        ("pi~ x (pi'~ (x) chibar)", pit, tw(pi2t, cb, -1), 2),
        ("pi x (pi~ (x) chi)", pi, tw(pit, c, 1), 1),
        ("pi' x (pi'~ (x) chi)", pi2, tw(pi2t, c, 1), 1),
        ("pi~ x pi'~", pit, pi2t, 1),
        ("pi x (pi' (x) chi^2)", pi, tw(pi2, c2, 2), 1),
        ("pi x (pi~ (x) chibar)", pi, tw(pit, cb, -1), 1),
        ("pi' x (pi'~ (x) chibar)", pi2, tw(pi2t, cb, -1), 1),
        ("pi x pi'", pi, pi2, 1),
        ("pi~ x (pi'~ (x) chibar^2)", pit, tw(pi2t, cb2, -2), 1),
    ):
        pair = RSPair(left, right)
        factors += [(label, pair)] * mult
    big_pi = AutomorphicRep(components=(pi, twist(pi, c, t), pi2t, twist(pi2t, cb, -t)))
    return AuxiliaryProduct(big_pi, tuple(factors))


def _gl1_conductor(chi) -> float:
    c, t = _twist_args(chi)
    return analytic_conductor(twist(trivial(), c, t))


def conductor_Q(pi: AutomorphicRep, pi2: AutomorphicRep, chi) -> float:
    """(C(pi) C(pi'))^{2(n+n')} C(chi)^{(n+n')^2}."""
    n = pi.degree + pi2.degree
    return (analytic_conductor(pi) * analytic_conductor(pi2)) ** (2 * n) * _gl1_conductor(chi) ** (n * n)


def log_conductor_Q(pi: AutomorphicRep, pi2: AutomorphicRep, chi) -> float:
    n = pi.degree + pi2.degree
    return 2 * n * (math.log(analytic_conductor(pi)) + math.log(analytic_conductor(pi2))) + n * n * math.log(
        _gl1_conductor(chi)
    )


# --- inequality checks --------------------------------------------------


@dataclass
class Violation:
    n: int
    kind: str
    lhs: float
    rhs: float


@dataclass
class DecouplingReport:
    limit: int
    violations: list[Violation]
    worst_margin: float  # min over n of rhs - lhs

    @property
    def ok(self) -> bool:
        return not self.violations


def check_decoupling(pair: RSPair, X: int, tol: float = ATOL) -> DecouplingReport:
    """|c_{pi x pi'}(n)| <= sqrt(c_{pi x pi~}(n) c_{pi' x pi'~}(n)) for c = lambda and Lambda."""
    self1 = RSPair(pair.left, contragredient(pair.left))
    self2 = RSPair(pair.right, contragredient(pair.right))
    violations: list[Violation] = []
    worst = math.inf
    for kind, getter in (("lambda", lambda p: rs_lambda_stream(p, X).lam),
                         ("Lambda", lambda p: rs_biglambda_stream(p, X).biglam)):
        lhs = np.abs(getter(pair)[1:])
        prod = (getter(self1)[1:] * getter(self2)[1:]).real
        rhs = np.sqrt(np.maximum(prod, 0))
        margin = rhs - lhs
        worst = min(worst, float(margin.min()))
        for i in np.flatnonzero(margin < -tol):
            violations.append(Violation(int(i) + 1, kind, float(lhs[i]), float(rhs[i])))
    return DecouplingReport(X, violations, worst)


@dataclass
class LocalBoundReport:
    prime_limit: int
    checked: int
    js_violations: list[tuple[int, float]]
    grc_violations: list[tuple[int, float]]
    worst_js_ratio: float  # max |gamma| / p
    worst_grc_ratio: float  # max |gamma| / p^(theta + theta')

    @property
    def ok(self) -> bool:
        return not self.js_violations and not self.grc_violations


def check_local_bounds(pair: RSPair, prime_limit: int, rtol: float = ATOL) -> LocalBoundReport:
    """Every combined parameter obeys |gamma| <= p and |gamma| <= p^(theta_n + theta_n')."""
    primes = sieve_primes(prime_limit)
    mods = np.abs(pair.combined_params(primes)).max(axis=1)
    pf = primes.astype(float)
    js = mods / pf
    grc = mods / pf**pair.theta
    return LocalBoundReport(
        prime_limit,
        len(primes),
        [(int(p), float(r)) for p, r in zip(primes, js) if r > 1 + rtol],
        [(int(p), float(r)) for p, r in zip(primes, grc) if r > 1 + rtol],
        float(js.max()),
        float(grc.max()),
    )


def check_standard_bounds(rep: AutomorphicRep, prime_limit: int, rtol: float = ATOL) -> list[str]:
    """Violations of |alpha_j(p)| <= p^theta and Re mu_j >= -theta for one representation."""
    problems = []
    primes = sieve_primes(prime_limit)
    mods = np.abs(rep.satake_table(primes)).max(axis=1)
    bad = mods > primes.astype(float) ** rep.theta * (1 + rtol)
    for p, m in zip(primes[bad], mods[bad]):
        problems.append(f"{rep.name}: |alpha({p})| = {m:.6g} exceeds p^{rep.theta:.4f}")
    for mu in rep.archimedean().mus:
        if mu.real < -rep.theta - rtol:
            problems.append(f"{rep.name}: Re mu = {mu.real:.6g} < -theta")
    return problems
