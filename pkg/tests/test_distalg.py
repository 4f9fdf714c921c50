import math
import random
from fractions import Fraction

import pytest

from helpers import random_support
from padicdist import DistAlgebra, abelian, dominant_log_index, mul_tail_bound
from padicdist.errors import DegreeOverflow, ParseError, ZeroDistribution
from padicdist.radii import Radius, log_tail_exponent

INF = math.inf


@pytest.fixture(scope="module")
def ab1(q3):
    return DistAlgebra(abelian(1, p=3, precision=24), q3, 10)


def test_abelian_monomial_products(ab1):
    b = ab1.generator(0)
    assert ab1.mul(b, b).coeffs == ab1.monomial((2,), 1).coeffs
    assert ab1.mul(ab1.one(), b).coeffs == b.coeffs


def test_delta_unit_and_generator(heis_alg):
    lat = heis_alg.lattice
    assert heis_alg.delta(lat.identity()).coeffs == heis_alg.one().coeffs
    d1 = heis_alg.delta(lat.generator(0))
    assert d1.coeffs == (heis_alg.one() + heis_alg.generator(0)).coeffs


def test_delta_power_binomials(ab1):
    lat = ab1.lattice
    g = lat.generator(0) ** 3
    d = ab1.delta(g)
    for k in range(7):
        want = Fraction(math.comb(3, k))
        got = d.coeffs.get((k,))
        assert (got is None and want == 0) or got == ab1.field.scalar(want)
    # cross-check against the cube of (1 + b)
    cube = ab1.mul(ab1.mul(ab1.delta(lat.generator(0)), ab1.delta(lat.generator(0))),
                   ab1.delta(lat.generator(0)))
    assert cube.coeffs == d.coeffs


def test_delta_homomorphism(heis_alg):
    rng = random.Random(31)
    lat = heis_alg.lattice
    for _ in range(8):
        g = lat.element_second(tuple(rng.randrange(0, 27) for _ in range(3)))
        h = lat.element_second(tuple(rng.randrange(0, 27) for _ in range(3)))
        assert heis_alg.mul(heis_alg.delta(g), heis_alg.delta(h)).coeffs == \
            heis_alg.delta(g * h).coeffs


def test_delta_inverse(heis_alg):
    rng = random.Random(32)
    lat = heis_alg.lattice
    g = lat.element_second(tuple(rng.randrange(0, 9) for _ in range(3)))
    prod = heis_alg.mul(heis_alg.delta(g), heis_alg.delta(g.inverse()))
    assert prod.coeffs == heis_alg.one().coeffs


def test_norm_examples(ab1):
    r = Radius(1, 4)
    assert ab1.one().norm(r).exponent == 0
    lam = ab1.monomial((2,), 3)  # p * b^2
    assert lam.norm(r).exponent == Fraction(3, 2)
    mu = ab1.from_terms({(1,): 1, (2,): 3})
    assert mu.norm(r).exponent == Fraction(1, 4)
    assert ab1.zero().norm(r).is_zero


def test_norm_multiplicative(heis_alg):
    rng = random.Random(33)
    radii = [Radius(1, 8), Radius(2, 3), Radius(7, 9)]
    for _ in range(25):
        lam = random_support(heis_alg, rng, 3)
        mu = random_support(heis_alg, rng, 3)
        prod = heis_alg.mul(lam, mu)
        for r in radii:
            assert prod.norm(r).exponent == lam.norm(r).exponent + mu.norm(r).exponent


def test_principal_symbol_examples(ab1, q3):
    r = Radius(1, 2)
    b = ab1.generator(0)
    sym = b.principal_symbol(r)
    assert sym.terms == {(0, (1,)): q3.residue_field.one()}
    p_sym = ab1.from_terms({(0,): 3}).principal_symbol(r)
    assert p_sym.terms == {(1, (0,)): q3.residue_field.one()}  # sigma(p) = e0
    mixed = ab1.from_terms({(1,): 1, (2,): 3})
    assert mixed.principal_symbol(r).terms == {(0, (1,)): q3.residue_field.one()}


def test_symbol_includes_full_leading_form(ab2_alg):
    r = Radius(1, 2)
    lam = ab2_alg.from_terms({(1, 0): 1, (0, 1): 2})
    sym = lam.principal_symbol(r)
    assert len(sym.terms) == 2
    assert sym.degree == Fraction(1, 2)


def test_symbol_multiplicative(heis_alg):
    rng = random.Random(34)
    r = Radius(1, 4)
    for _ in range(15):
        lam = random_support(heis_alg, rng, 3)
        mu = random_support(heis_alg, rng, 3)
        assert heis_alg.mul(lam, mu).principal_symbol(r) == \
            lam.principal_symbol(r) * mu.principal_symbol(r)


def test_zero_symbol_raises(ab1):
    with pytest.raises(ZeroDistribution):
        ab1.zero().principal_symbol(Radius(1, 2))


def test_log_series(ab1):
    ls = ab1.log_series(0)
    assert ls.coeffs[(1,)] == ab1.field.one()
    assert ls.coeffs[(3,)] == ab1.field.scalar(Fraction(1, 3))
    assert ls.coeffs[(3,)].valuation == -1
    one_term = DistAlgebra(ab1.lattice, ab1.field, 1).log_series(0)
    assert set(one_term.coeffs) == {(1,)}
    # norm r^kappa in the h = 0 range
    r = Radius(2, 3)
    assert ls.norm(r).exponent == Fraction(2, 3)


def test_dominant_log_index_examples():
    # |1/k| s^k with |1/p| = p: at s = 3^(-1/4) the k = 3 term (value 3^(1/4))
    # beats k = 1 (3^(-1/4)) and k = 9 (3^(-1/4)), so h = 1
    assert dominant_log_index(Radius(1, 4), 1, 3) == 1
    assert dominant_log_index(Radius(2, 3), 1, 3) == 0
    # ties exactly at r^kappa = p^(-1/(p-1))
    assert dominant_log_index(Radius(1, 2), 1, 3) is None
    assert dominant_log_index(Radius(1, 2), 1, 2) is None
    # p = 2, r^kappa = 2^(-1/3): k = 4 gives 2^(2/3), beating k = 1, 2, 8
    assert dominant_log_index(Radius(1, 3), 1, 2) == 2
    assert dominant_log_index(Radius(1, 6), 2, 2) == 2


def test_dominant_index_h0_region():
    for b in range(2, 12):
        for a in range(1, b):
            r = Radius(a, b)
            if r.exponent > Fraction(1, 2):
                assert dominant_log_index(r, 1, 3) == 0


def test_log_tail_exponent():
    r = Radius(2, 3)
    tail = log_tail_exponent(8, r, 1, 3)
    # k = 9 realizes the minimum: 9*(2/3) - 2 = 4
    assert tail == 4


def test_mul_tail_bound_abelian_exact(ab1):
    r = Radius(1, 2)
    lam = ab1.monomial((2,), 1)
    mu = ab1.monomial((3,), 1)
    assert mul_tail_bound(lam, mu, r) == INF  # 5 <= N: nothing dropped
    big = ab1.monomial((6,), 1)
    assert mul_tail_bound(big, big, r) == Fraction(6)  # dropped at degree 12


def test_strict_mode_overflow(ab1):
    big = ab1.monomial((6,), 1)
    with pytest.raises(DegreeOverflow):
        ab1.mul(big, big, strict=True)


def test_parse_and_format(ab1, heis_alg):
    lam = ab1.parse("p*b1^2 + 1/3 * b1 - 2")
    assert lam.coeffs[(2,)] == ab1.field.scalar(3)
    assert lam.coeffs[(1,)] == ab1.field.scalar(Fraction(1, 3))
    assert lam.coeffs[(0,)] == ab1.field.scalar(-2)
    text = ab1.format(lam)
    again = ab1.parse(text)
    assert again.coeffs == lam.coeffs
    mixed = heis_alg.parse("b1*b2^2*b3 + pi^2")
    assert mixed.coeffs[(1, 2, 1)] == heis_alg.field.one()
    with pytest.raises(ParseError):
        ab1.parse("b9")
    with pytest.raises(ParseError):
        ab1.parse("$$")


def test_delta_unit_norms(heis_alg):
    rng = random.Random(35)
    r = Radius(1, 4)
    kappa = heis_alg.kappa
    for _ in range(10):
        g = heis_alg.lattice.element_second(
            tuple(rng.randrange(0, 27) for _ in range(3))
        )
        dg = heis_alg.delta(g)
        assert dg.norm(r).exponent == 0
        aug = dg - heis_alg.one()
        assert aug.is_zero or aug.norm(r).exponent >= kappa * r.exponent


def test_truncation_tagging(ab1):
    big = ab1.monomial((6,), 1)
    prod = ab1.mul(big, big)
    assert prod.truncated
    assert prod.is_zero  # everything fell beyond N
    small = ab1.mul(ab1.generator(0), ab1.generator(0))
    assert not small.truncated
