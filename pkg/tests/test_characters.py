import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rsengine.arith import divisors, totient
from rsengine.characters import (
    DirichletCharacter,
    character,
    characters_mod,
    conductor,
    evaluate,
    orthogonality_sum,
    primitive_count,
    primitivize,
)
from rsengine.errors import DomainError


def brute_conductor(chi):
    """Smallest d | q such that chi is trivial on units congruent to 1 mod d."""
    q = chi.modulus
    units = [n for n in range(1, q + 1) if math.gcd(n, q) == 1]
    for d in divisors(q):
        if all(abs(chi(n) - 1) < 1e-9 for n in units if n % d == 1 % d):
            return d


class TestEnumeration:
    def test_counts(self):
        assert len(characters_mod(5)) == 4
        chars = characters_mod(1)
        assert len(chars) == 1 and all(chars[0](n) == 1 for n in range(-5, 20))

    def test_mod_8(self):
        chars = characters_mod(8)
        assert len(chars) == 4 and all(c.order <= 2 for c in chars)
        # table oracle: values on 1, 3, 5, 7 are +-1 and the four rows differ
        rows = {tuple(int(round(c(n).real)) for n in (1, 3, 5, 7)) for c in chars}
        assert len(rows) == 4 and all(set(r) <= {-1, 1} for r in rows)

    @pytest.mark.parametrize("q", [1, 2, 3, 4, 8, 9, 12, 15, 16, 20, 24, 27, 32, 35, 63, 100])
    def test_group_structure(self, q):
        chars = characters_mod(q)
        assert len(chars) == totient(q) == len(set(chars))
        assert chars[0].is_principal
        as_set = set(chars)
        for a in chars[:6]:
            assert a.conj() in as_set
            for b in chars[:6]:
                assert a * b in as_set
            assert (a * a.conj()).is_principal


class TestEvaluate:
    def test_examples(self):
        chi4 = character(4, 1)
        assert evaluate(chi4, 3) == -1
        for q in (2, 6, 7, 12):
            for chi in characters_mod(q):
                assert evaluate(chi, q) == 0

    def test_order_four_mod_five(self):
        chi = character(5, 1)
        assert chi.order == 4
        v = chi(2)
        assert abs(v**4 - 1) < 1e-15 and abs(v**2 + 1) < 1e-15
        # 2 generates (Z/5)*: direct power table
        assert sorted(pow(2, k, 5) for k in range(4)) == [1, 2, 3, 4]
        assert chi.value_exact(2) == (4, 1)

    @pytest.mark.parametrize("q", [5, 7, 8, 12, 16, 21, 45])
    def test_complete_multiplicativity_and_roots_of_unity(self, q):
        for chi in characters_mod(q):
            assert chi(1) == 1
            for a in range(-q, 2 * q):
                va = chi(a)
                if math.gcd(a, q) > 1:
                    assert va == 0
                else:
                    assert abs(va ** chi.order - 1) < 1e-12
                for b in range(0, q):
                    assert abs(chi(a * b) - va * chi(b)) < 1e-12

    def test_vectorised_values(self):
        chi = character(21, 5)
        ns = np.arange(-30, 60)
        assert np.allclose(chi.values(ns), [chi(int(n)) for n in ns], atol=1e-15)

    def test_angles_are_exact(self):
        chi = character(7, 1)
        assert chi.angle(3) == Fraction(1, 6)
        assert chi.angle(7) is None


class TestConductor:
    def test_examples(self):
        assert conductor(DirichletCharacter.principal(12)) == 1
        induced = character(4, 1).induce(8)
        assert conductor(induced) == 4
        prim, modulus = primitivize(induced)
        assert modulus == 4
        for n in range(1, 8, 2):
            assert induced(n) == prim(n)
        chi5 = character(5, 2)
        assert primitivize(chi5) == (chi5, 5)

    @pytest.mark.parametrize("q", range(1, 201))
    def test_against_brute_force(self, q):
        chars = characters_mod(q)
        assert primitive_count(q) == sum(1 for c in chars if c.is_primitive)
        for chi in chars if q <= 120 else chars[:: max(1, len(chars) // 12)]:
            assert chi.conductor == brute_conductor(chi)
            prim = chi.primitive()
            assert prim.modulus == chi.conductor and prim.is_primitive
            units = np.array([n for n in range(1, q + 1) if math.gcd(n, q) == 1])
            assert np.allclose(chi.values(units), prim.values(units), atol=1e-12)

    def test_labels(self):
        assert character(8, 1).conductor == 8 and character(8, 1).parity == 0
        assert character(8, 2).conductor == 4
        assert character(5, 1).label() == "5:1"

    def test_products_across_moduli(self):
        a, b = character(3, 1), character(4, 1)
        ab = a * b
        assert ab.modulus == 12 and ab.conductor == 12
        for n in range(1, 40):
            assert abs(ab(n) - a(n) * b(n)) < 1e-12


class TestOrthogonality:
    def test_examples(self):
        assert orthogonality_sum(5, 2, 7) == pytest.approx(4)
        assert abs(orthogonality_sum(5, 2, 3)) < 1e-12
        assert abs(orthogonality_sum(12, 5, 10)) < 1e-12

    def test_a_not_coprime(self):
        with pytest.raises(DomainError):
            orthogonality_sum(12, 4, 5)

    @given(st.integers(1, 60), st.integers(0, 10**6), st.integers(-500, 500))
    def test_general(self, q, a, n):
        if math.gcd(a, q) != 1:
            return
        expected = totient(q) if (n - a) % q == 0 and math.gcd(n, q) == 1 else 0
        assert abs(orthogonality_sum(q, a, n) - expected) <= 1e-12 * max(1, totient(q))


def test_domain_errors():
    with pytest.raises(DomainError):
        character(5, 4)
    with pytest.raises(DomainError):
        DirichletCharacter(5, (1, 2))
    with pytest.raises(DomainError):
        character(6, 0).induce(10)
