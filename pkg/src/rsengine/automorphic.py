"""Desk-scale automorphic representations and their local data.

Every representation is either *atomic* or an isobaric sum of atomic ones.
An atomic representation is a base object (the trivial character, a
holomorphic newform, or an arbitrary table of Satake parameters) together
with a primitive Dirichlet character twist, a real twist ``|det|^{it}`` and
a contragredient flag:

    rep = base~? (x) chi (x) |det|^{it}

Local parameters at ``p`` are ``alpha_j(p) * chi(p) * p^{-it}`` (conjugated
first when the flag is set).  When ``p`` divides the conductor of ``chi``
every parameter is zero; when ``p`` divides the level of the base, the base
supplies fewer nonzero parameters padded with zeros.  The true local factors
at such primes need local Langlands data that is not available, so this
zero-padded convention is an approximation confined to finitely many primes.

Archimedean data lives at the single real place.  Entries may be of real
type (``Gamma_R(s + mu)``) or complex type (``Gamma_C(s + mu)``); a complex
entry is stored as the equivalent real pair ``{mu, mu + 1}``, so a weight
``k`` newform carries ``{(k-1)/2, (k+1)/2}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .arith import is_prime, ramanujan_tau, sieve_primes
from .characters import DirichletCharacter
from .errors import DomainError, InsufficientDataError


def theta_bound(n: int) -> float:
    """Generic bound 1/2 - 1/(n^2 + 1) towards Ramanujan on GL(n)."""
    return 0.5 - 1.0 / (n * n + 1)


@dataclass(frozen=True)
class SatakeParameters:
    prime: int
    values: tuple[complex, ...]
    theta: float

    @property
    def nonzero(self) -> int:
        return sum(1 for v in self.values if v != 0)

    def within_bound(self, rtol: float = 1e-9) -> bool:
        bound = self.prime**self.theta * (1 + rtol)
        return all(abs(v) <= bound for v in self.values)


@dataclass(frozen=True)
class ArchimedeanParameters:
    """Langlands parameters at the real place, one per Gamma_R factor."""

    mus: tuple[complex, ...]
    kinds: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.kinds:
            object.__setattr__(self, "kinds", ("R",) * len(self.mus))
        if len(self.kinds) != len(self.mus) or any(k not in ("R", "C") for k in self.kinds):
            raise DomainError(f"bad gamma factor kinds {self.kinds}")

    def real_type(self) -> tuple[complex, ...]:
        """Parameters with every Gamma_C(s + mu) split into Gamma_R(s + mu) Gamma_R(s + mu + 1)."""
        out = []
        for mu, kind in zip(self.mus, self.kinds):
            out.append(complex(mu))
            if kind == "C":
                out.append(complex(mu) + 1)
        return tuple(out)


# --- base objects -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class _Base:
    name: str
    degree: int
    level: int
    archimedean: ArchimedeanParameters
    theta: float
    self_dual: bool

    table_limit = math.inf

    def params(self, primes: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _check_limit(self, primes: np.ndarray) -> None:
        if len(primes) and primes[-1] > self.table_limit:
            first = int(primes[np.searchsorted(primes, self.table_limit, side="right")])
            raise InsufficientDataError(
                f"{self.name}: no Satake data at p = {first} (table ends at {self.table_limit})"
            )

    def twisted_archimedean(self, parity: int) -> tuple[complex, ...]:
        # convention for tables: a twist of odd parity shifts each real-type parameter by 1
        return tuple(mu + parity for mu in self.archimedean.real_type())


@dataclass(frozen=True, eq=False)
class TrivialBase(_Base):
    def params(self, primes):
        return np.ones((len(primes), 1), dtype=complex)


@dataclass(frozen=True, eq=False)
class NewformBase(_Base):
    """Holomorphic newform with trivial nebentypus; eigenvalues normalised to unitary size."""

    weight: int = 12
    primes: np.ndarray = field(default=None, repr=False)
    eigenvalues: np.ndarray = field(default=None, repr=False)  # lambda(p) = a_p / p^{(k-1)/2}
    precision: float = 1e-15

    @property
    def table_limit(self):
        return int(self.primes[-1]) if len(self.primes) else 1

    def eigenvalue(self, p: int) -> float:
        return float(self._lookup(np.array([p]))[0])

    def _lookup(self, primes):
        self._check_limit(primes)
        idx = np.searchsorted(self.primes, primes)
        if np.any(self.primes[np.minimum(idx, len(self.primes) - 1)] != primes):
            raise DomainError("Satake lookup at a non-prime")
        return self.eigenvalues[idx]

    def params(self, primes):
        lam = self._lookup(primes).astype(complex)
        disc = np.sqrt(lam * lam - 4)
        out = np.stack([(lam + disc) / 2, (lam - disc) / 2], axis=1)
        ramified = (self.level % primes) == 0
        if ramified.any():
            out[ramified, 0] = lam[ramified]
            out[ramified, 1] = 0
        return out

    def twisted_archimedean(self, parity):
        # Gamma_C absorbs the parity of a twist
        return self.archimedean.real_type()


@dataclass(frozen=True, eq=False)
class SatakeTableBase(_Base):
    """Arbitrary GL(n) data: per-prime parameter rows, zero-padded at ramified primes."""

    primes: np.ndarray = field(default=None, repr=False)
    table: np.ndarray = field(default=None, repr=False)
    complete_to: int = 1

    @property
    def table_limit(self):
        return self.complete_to

    def params(self, primes):
        self._check_limit(primes)
        idx = np.searchsorted(self.primes, primes)
        return self.table[idx]


TRIVIAL_BASE = TrivialBase("trivial", 1, 1, ArchimedeanParameters((0,)), 0.0, True)


# --- representations ----------------------------------------------------


@dataclass(frozen=True)
class AutomorphicRep:
    """Atomic ``base~? (x) chi (x) |det|^{it}``, or an isobaric sum of atomic reps."""

    base: _Base | None = None
    chi: DirichletCharacter | None = None
    t: float = 0.0
    dual: bool = False
    components: tuple[AutomorphicRep, ...] = ()

    def __post_init__(self):
        if (self.base is None) == (not self.components):
            raise DomainError("a representation is either atomic (base) or isobaric (components)")
        if self.chi is not None:
            if not self.chi.is_primitive:
                object.__setattr__(self, "chi", self.chi.primitive())
            if self.chi.modulus == 1:
                object.__setattr__(self, "chi", None)
        if self.base is not None and self.base.self_dual and self.dual:
            object.__setattr__(self, "dual", False)

    # -- structure ---------------------------------------------------------

    @property
    def is_isobaric(self) -> bool:
        return bool(self.components)

    @property
    def kind(self) -> str:
        if self.components:
            return "isobaric"
        if isinstance(self.base, TrivialBase):
            return "gl1"
        if isinstance(self.base, NewformBase):
            return "newform"
        return "generic"

    @property
    def degree(self) -> int:
        if self.components:
            return sum(c.degree for c in self.components)
        return self.base.degree

    @property
    def real_twist(self) -> float:
        return self.t

    def atoms(self) -> list[AutomorphicRep]:
        if not self.components:
            return [self]
        return [a for c in self.components for a in c.atoms()]

    @property
    def theta(self) -> float:
        return max(a.base.theta for a in self.atoms())

    @property
    def table_limit(self) -> float:
        return min(a.base.table_limit for a in self.atoms())

    @property
    def conductor(self) -> int:
        """Arithmetic conductor; ``level * cond(chi)^degree`` for a twist (exact when coprime)."""
        if self.components:
            return math.prod(c.conductor for c in self.components)
        q = self.chi.modulus if self.chi is not None else 1
        return self.base.level * q**self.base.degree

    def ramified_primes(self) -> set[int]:
        from .arith import factorize

        out = set()
        for a in self.atoms():
            out |= set(factorize(a.base.level).primes)
            if a.chi is not None:
                out |= set(factorize(a.chi.modulus).primes)
        return out

    @property
    def name(self) -> str:
        if self.components:
            return " + ".join(c.name for c in self.components)
        s = self.base.name + ("~" if self.dual else "")
        if self.chi is not None:
            s += f"(x)chi[{self.chi.label()}]"
        if self.t:
            s += f"(x)|det|^{self.t:+g}i"
        return s

    # -- local data --------------------------------------------------------

    def satake_table(self, primes) -> np.ndarray:
        """Array of shape (len(primes), degree) with the parameters at each prime."""
        primes = np.asarray(primes, dtype=np.int64)
        if self.components:
            return np.concatenate([c.satake_table(primes) for c in self.components], axis=1)
        vals = self.base.params(primes)
        if self.dual:
            vals = np.conj(vals)
        scale = np.ones(len(primes), dtype=complex)
        if self.chi is not None:
            scale = scale * self.chi.values(primes)
        if self.t:
            scale = scale * np.exp(-1j * self.t * np.log(primes.astype(float)))
        return vals * scale[:, None]

    def archimedean(self) -> ArchimedeanParameters:
        """Real-type Langlands parameters of the starred representative (real twist excluded)."""
        if self.components:
            return ArchimedeanParameters(tuple(m for c in self.components for m in c.archimedean().mus))
        parity = self.chi.parity if self.chi is not None else 0
        mus = self.base.twisted_archimedean(parity)
        if self.dual:
            mus = tuple(np.conj(mus))
        return ArchimedeanParameters(tuple(complex(m) for m in mus))

    def shifts(self) -> list[tuple[complex, float]]:
        """(mu, t_rep) for every real-type parameter, keeping track of each atom's real twist."""
        out = []
        for a in self.atoms():
            out += [(mu, a.t) for mu in a.archimedean().mus]
        return out


def satake_at(rep: AutomorphicRep, p: int) -> SatakeParameters:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    vals = rep.satake_table(np.array([p]))[0]
    return SatakeParameters(int(p), tuple(complex(v) for v in vals), rep.theta)


def contragredient(rep: AutomorphicRep) -> AutomorphicRep:
    if rep.components:
        return AutomorphicRep(components=tuple(contragredient(c) for c in rep.components))
    chi = rep.chi.conj() if rep.chi is not None else None
    return replace(rep, chi=chi, t=-rep.t, dual=not rep.dual)


def twist(rep: AutomorphicRep, chi: DirichletCharacter | None = None, t: float = 0.0) -> AutomorphicRep:
    """``rep (x) chi (x) |det|^{it}``; the character is replaced by its primitive version."""
    if rep.components:
        return AutomorphicRep(components=tuple(twist(c, chi, t) for c in rep.components))
    new_chi = rep.chi
    if chi is not None:
        new_chi = chi.primitive() if new_chi is None else (new_chi * chi).primitive()
    return replace(rep, chi=new_chi, t=rep.t + t)


def isobaric_sum(*reps: AutomorphicRep) -> AutomorphicRep:
    return AutomorphicRep(components=tuple(reps))


def analytic_conductor(rep: AutomorphicRep, t: float = 0.0) -> float:
    """``N * prod_j (|mu_j + i(t + t_rep)| + 3)`` at the real place (discriminant 1)."""
    value = float(rep.conductor)
    for mu, t_rep in rep.shifts():
        value *= abs(mu + 1j * (t + t_rep)) + 3
    return value


# --- built-in objects ---------------------------------------------------


def trivial() -> AutomorphicRep:
    return AutomorphicRep(TRIVIAL_BASE)


def gl1(chi: DirichletCharacter, t: float = 0.0) -> AutomorphicRep:
    return twist(trivial(), chi, t)


_delta_cache: dict[str, NewformBase] = {}


def _delta_base(limit: int) -> NewformBase:
    cached = _delta_cache.get("delta")
    if cached is not None and cached.table_limit >= _largest_prime_at_most(limit):
        return cached
    tau = ramanujan_tau(limit)
    primes = sieve_primes(limit)
    lam = np.array([tau[p - 1] for p in primes], dtype=float) / primes.astype(float) ** 5.5
    base = NewformBase(
        "delta", 2, 1, ArchimedeanParameters((5.5, 6.5)), 0.0, True,
        weight=12, primes=primes, eigenvalues=lam,
    )
    _delta_cache["delta"] = base
    return base


def _largest_prime_at_most(n: int) -> int:
    while not is_prime(n):
        n -= 1
    return n


DEFAULT_LIMIT = 10**5


def delta(limit: int = DEFAULT_LIMIT) -> AutomorphicRep:
    """The discriminant form Delta (weight 12, level 1), Satake data for p <= limit.

    The table may extend further: the longest one built so far is reused.
    """
    size = (1 << 16) * -(-max(int(limit), 2) // (1 << 16))
    return AutomorphicRep(_delta_base(size))


def newform(name: str, weight: int, level: int, eigenvalues: dict[int, float]) -> AutomorphicRep:
    """Newform from a table ``p -> a_p / p^{(k-1)/2}``; must cover every prime up to its maximum."""
    primes = np.array(sorted(eigenvalues), dtype=np.int64)
    _check_complete(primes, name)
    base = NewformBase(
        name, 2, level,
        ArchimedeanParameters(((weight - 1) / 2,), ("C",)), 0.0, True,
        weight=weight, primes=primes, eigenvalues=np.array([eigenvalues[p] for p in primes], dtype=float),
    )
    return AutomorphicRep(base)


def _check_complete(primes: np.ndarray, name: str) -> int:
    if len(primes) == 0:
        return 1
    expected = sieve_primes(int(primes[-1]))
    if len(expected) != len(primes) or np.any(expected != primes):
        missing = sorted(set(expected.tolist()) - set(primes.tolist()))
        raise DomainError(f"{name}: table is missing primes {missing[:5]}")
    return int(primes[-1])


def satake_table_rep(
    name: str,
    degree: int,
    conductor: int,
    mus: Sequence[complex],
    rows: dict[int, Sequence[complex]],
    kinds: Sequence[str] = (),
    theta: float | None = None,
) -> AutomorphicRep:
    primes = np.array(sorted(rows), dtype=np.int64)
    complete = _check_complete(primes, name)
    table = np.zeros((len(primes), degree), dtype=complex)
    for i, p in enumerate(primes):
        vals = list(rows[int(p)])
        if len(vals) > degree:
            raise DomainError(f"{name}: {len(vals)} parameters at p = {p} for degree {degree}")
        table[i, : len(vals)] = vals
    arch = ArchimedeanParameters(tuple(complex(m) for m in mus), tuple(kinds))
    if len(arch.real_type()) != degree:
        raise DomainError(f"{name}: {len(arch.real_type())} archimedean parameters for degree {degree}")
    self_dual = bool(np.allclose(np.sort_complex(table.conj()), np.sort_complex(table), atol=1e-12))
    base = SatakeTableBase(
        name, degree, int(conductor), arch,
        theta_bound(degree) if theta is None else theta, self_dual,
        primes=primes, table=table, complete_to=complete,
    )
    return AutomorphicRep(base)


# --- ingestion files ----------------------------------------------------


def _parse_complex(token: str) -> complex:
    try:
        return complex(token.replace("i", "j"))
    except ValueError as exc:
        raise DomainError(f"cannot parse complex number {token!r}") from exc


def read_satake_file(path: str | Path) -> AutomorphicRep:
    """Parse the line-oriented Satake table format.

    Header lines ``degree n``, ``conductor N``, ``archimedean mu_1 ... mu_n``
    and optionally ``gamma R|C ...`` and ``name <label>``; then one line
    ``p alpha_1 ... alpha_n`` per prime.  ``#`` starts a comment.
    """
    path = Path(path)
    header: dict[str, list[str]] = {}
    rows: dict[int, list[complex]] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head.isdigit():
            p = int(head)
            if not is_prime(p):
                raise DomainError(f"{path}:{lineno}: {p} is not prime")
            rows[p] = [_parse_complex(tok) for tok in rest]
        elif head in ("degree", "conductor", "archimedean", "gamma", "name"):
            header[head] = rest
        else:
            raise DomainError(f"{path}:{lineno}: unknown header {head!r}")
    for key in ("degree", "conductor", "archimedean"):
        if key not in header:
            raise DomainError(f"{path}: missing '{key}' header")
    degree = int(header["degree"][0])
    return satake_table_rep(
        header.get("name", [path.stem])[0],
        degree,
        int(header["conductor"][0]),
        [_parse_complex(tok) for tok in header["archimedean"]],
        rows,
        kinds=header.get("gamma", ()),
    )


def _fmt(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def write_satake_file(rep: AutomorphicRep, path: str | Path, prime_limit: int) -> None:
    primes = sieve_primes(prime_limit)
    table = rep.satake_table(primes)
    arch = rep.archimedean()
    lines = [
        f"name {rep.name.replace(' ', '')}",
        f"degree {rep.degree}",
        f"conductor {rep.conductor}",
        "archimedean " + " ".join(_fmt(m) for m in arch.mus),
    ]
    for p, row in zip(primes, table):
        lines.append(f"{p} " + " ".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def data_path(name: str) -> Path:
    return Path(__file__).with_name("data") / name
