"""Desk-scale engine for Rankin-Selberg L-functions over the rationals.

Coefficient streams for pairs of automorphic representations, the auxiliary
product D(s) built from an isobaric sum, Mellin smoothing and residues, and
prime-power sums in arithmetic progressions.
"""

from .arith import factorize, ramanujan_tau, sieve_primes
from .automorphic import (
    AutomorphicRep,
    analytic_conductor,
    contragredient,
    delta,
    gl1,
    isobaric_sum,
    read_satake_file,
    satake_at,
    trivial,
    twist,
)
from .characters import DirichletCharacter, character, characters_mod
from .errors import (
    DomainError,
    EngineError,
    InsufficientDataError,
    InsufficientXError,
    JetOrderError,
    PoleError,
    QuadratureError,
)
from .rankin_selberg import (
    AuxiliaryProduct,
    CoefficientStream,
    RSPair,
    auxiliary_product,
    check_decoupling,
    conductor_Q,
    rs_biglambda_stream,
    rs_lambda_stream,
    rs_stream,
    twisted_pair,
)

__version__ = "0.1.0"
