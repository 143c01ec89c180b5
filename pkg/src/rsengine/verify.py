"""Invariant suites run by ``rsengine verify``; each returns a :class:`CheckResult`."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .analytic.jets import TaylorJet, contour_residue, residue_extract
from .analytic.mellin import SmoothingKernel, mellin_phi_hat
from .analytic.quadrature import integrate_real
from .automorphic import AutomorphicRep, contragredient, twist
from .characters import DirichletCharacter, characters_mod
from .prime_counting import orthogonality_decomposition, ramified_correction
from .rankin_selberg import (
    RSPair,
    auxiliary_product,
    check_decoupling,
    check_local_bounds,
    check_standard_bounds,
    log_derivative_residual,
    rs_stream,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst_margin: float
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.worst_margin = float(self.worst_margin)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class VerifyConfig:
    left: AutomorphicRep
    right: AutomorphicRep
    chi: DirichletCharacter
    limit: int = 10**4
    tol: float = 1e-9
    seed: int = 20240601


def check_nonnegativity(cfg: VerifyConfig) -> CheckResult:
    aux = auxiliary_product(cfg.left, cfg.right, cfg.chi)
    stream = aux.stream(cfg.limit)
    lam_min = float(stream.lam.real[1:].min())
    big_min = float(stream.biglam.real[1:].min())
    imag = float(max(np.abs(stream.lam.imag).max(), np.abs(stream.biglam.imag).max()))
    margin = min(lam_min, big_min) + cfg.tol
    return CheckResult("nonnegativity", margin >= 0 and imag <= cfg.tol, margin,
                       {"min_lambda": lam_min, "min_Lambda": big_min, "max_imag": imag})


def check_convolution(cfg: VerifyConfig) -> CheckResult:
    aux = auxiliary_product(cfg.left, cfg.right, cfg.chi)
    a = aux.lambda_by_convolution(cfg.limit, np.clongdouble)
    b = aux.lambda_direct(cfg.limit, np.clongdouble)
    diff = float(np.abs(a[1:] - b[1:]).max())
    return CheckResult("convolution", diff <= 1e-12, 1e-12 - diff, {"max_abs_difference": diff})


def check_decoupling_suite(cfg: VerifyConfig) -> CheckResult:
    pair = RSPair(cfg.left, twist(cfg.right, cfg.chi))
    rep = check_decoupling(pair, cfg.limit, cfg.tol)
    return CheckResult("decoupling", rep.ok, rep.worst_margin + cfg.tol,
                       {"pair": pair.label, "violations": len(rep.violations)})


def check_grc(cfg: VerifyConfig) -> CheckResult:
    problems = []
    worst = math.inf
    reps = [cfg.left, cfg.right, twist(cfg.right, cfg.chi)]
    limit = int(min(cfg.limit, min(r.table_limit for r in reps)))
    for rep in reps:
        problems += check_standard_bounds(rep, limit, cfg.tol)
    for left in (cfg.left, contragredient(cfg.left)):
        for right in reps:
            rep = check_local_bounds(RSPair(left, right), limit, cfg.tol)
            worst = min(worst, 1 + cfg.tol - max(rep.worst_js_ratio, rep.worst_grc_ratio))
            problems += [f"{left.name} x {right.name}: |gamma({p})| / p = {r:.6g}" for p, r in rep.js_violations[:3]]
            problems += [f"{left.name} x {right.name}: |gamma({p})| / p^theta = {r:.6g}" for p, r in rep.grc_violations[:3]]
    return CheckResult("grc", not problems, worst, {"prime_limit": limit, "problems": problems[:10]})


def check_logderivative(cfg: VerifyConfig) -> CheckResult:
    stream = rs_stream(RSPair(cfg.left, twist(cfg.right, cfg.chi)), cfg.limit)
    scale = max(1.0, float(np.abs(stream.lam).max()) * math.log(cfg.limit))
    res = log_derivative_residual(stream) / scale
    return CheckResult("logderivative", res <= cfg.tol, cfg.tol - res, {"relative_residual": res})


def random_jets(rng: np.random.Generator, k: int, base: complex = 0j, zero_value: bool = False):
    order = 2 * k - 1 + int(rng.integers(0, 3))
    jets = []
    for _ in range(3):
        c = rng.normal(size=order + 1) + 1j * rng.normal(size=order + 1)
        jets.append(TaylorJet(base, tuple(c)))
    if zero_value:
        jets[0] = TaylorJet(base, (0,) + jets[0].coefficients[1:])
        jets[1] = TaylorJet(base, (0,) + jets[1].coefficients[1:])
    return jets


def check_residue(cfg: VerifyConfig, trials: int = 100) -> CheckResult:
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    nonzero = 0
    for i in range(trials):
        k = 1 + i % 2
        f, g, h = random_jets(rng, k)
        value = residue_extract(f, g, h, k)
        oracle = contour_residue(
            lambda s: (f(s) * g(s)) ** k * h(s) / (s - f.base) ** (2 * k),
            f.base,
        )
        worst = max(worst, abs(value - oracle) / max(abs(oracle), 1e-300))
        f0, g0, h0 = random_jets(rng, k, zero_value=True)
        nonzero += residue_extract(f0, g0, h0, k) != 0
    return CheckResult("residue", worst <= 1e-8 and nonzero == 0, 1e-8 - worst,
                       {"trials": trials, "max_relative_error": worst, "nonzero_structural": int(nonzero)})


def mellin_by_quadrature(s: complex, kernel: SmoothingKernel) -> complex:
    """integral_0^inf phi(r) r^(s-1) dr, split at x, with r = x e^(-u) on (0, x]."""
    x, y = kernel.x, kernel.y
    top = 45.0 / s.real
    head = integrate_real(lambda u: np.exp(-s * u), 0.0, top, 1e-14, edges=list(np.linspace(0, top, 33))).value
    ramp = integrate_real(lambda r: (x + y - r) / y * r ** (s - 1), x, x + y, 1e-14 * abs(x**s)).value
    return x**s * head + ramp


def mellin_sample_points(rng: np.random.Generator, count: int = 20) -> list[complex]:
    return [complex(rng.uniform(0.5, 3.0), rng.uniform(-10, 10)) for _ in range(count)]


def check_mellin(cfg: VerifyConfig) -> CheckResult:
    rng = np.random.default_rng(cfg.seed + 1)
    kernel = SmoothingKernel(3.0, 1.5)
    worst = 0.0
    for s in mellin_sample_points(rng):
        closed = mellin_phi_hat(s, kernel)
        worst = max(worst, abs(closed - mellin_by_quadrature(s, kernel)))
    exact = abs(mellin_phi_hat(1, kernel) - (kernel.x + kernel.y / 2))
    ok = worst <= 1e-10 and exact <= 4 * np.finfo(float).eps * (kernel.x + kernel.y)
    return CheckResult("mellin", ok, 1e-10 - worst, {"max_abs_error": worst, "phi_hat_1_error": exact})


def check_orthogonality(cfg: VerifyConfig) -> CheckResult:
    pair = RSPair(cfg.left, cfg.right)
    worst = 0.0
    for q in (3, 5, 8):
        for a in range(1, q):
            if math.gcd(a, q) == 1:
                worst = max(worst, orthogonality_decomposition(pair, cfg.limit, q, a).relative_difference)
    return CheckResult("orthogonality", worst <= cfg.tol, cfg.tol - worst, {"max_relative_difference": worst})


def check_ramified(cfg: VerifyConfig) -> CheckResult:
    pair = RSPair(cfg.left, cfg.right)
    worst = math.inf
    rows = []
    for q in (8, 15):
        for psi in characters_mod(q):
            r = ramified_correction(pair, psi, cfg.limit)
            worst = min(worst, r.bound - abs(r.difference))
            rows.append({"psi": psi.label(), "difference": abs(r.difference), "bound": r.bound})
    return CheckResult("ramified", worst >= 0, worst, {"characters": rows})


SUITES = {
    "nonnegativity": check_nonnegativity,
    "convolution": check_convolution,
    "decoupling": check_decoupling_suite,
    "grc": check_grc,
    "logderivative": check_logderivative,
    "residue": check_residue,
    "mellin": check_mellin,
    "orthogonality": check_orthogonality,
    "ramified": check_ramified,
}


def run_suites(cfg: VerifyConfig, only: list[str] | None = None) -> list[CheckResult]:
    names = only or list(SUITES)
    return [SUITES[name](cfg) for name in names]
