import random
from fractions import Fraction

import pytest

from helpers import heisenberg_second_kind_oracle, heisenberg_bch_oracle
from padicdist import StructureConstants, abelian, mahler_coefficients
from padicdist.errors import DegreeOverflow
from padicdist.indices import iter_multi_indices, unit_index
from padicdist.mahler import chu_vandermonde_identity
from padicdist.radii import vp_rational


def test_mahler_constant_function(q3):
    vals = {(x,): q3.one() for x in range(7)}
    t = mahler_coefficients(vals, 6, 1)
    assert t[(0,)] == q3.one()
    assert all(t[(k,)].is_zero for k in range(1, 7))


def test_mahler_basis_function(q3):
    from padicdist.mahler import binom_rational

    vals = {(x,): q3.scalar(binom_rational(x, 2)) for x in range(7)}
    t = mahler_coefficients(vals, 6, 1)
    assert t[(2,)] == q3.one()
    assert all(t[(k,)].is_zero for k in range(7) if k != 2)


def test_mahler_square():
    # x^2 = binom(x,1) + 2 binom(x,2); plain Fractions work as values too
    vals = {(x,): Fraction(x * x) for x in range(7)}
    t = mahler_coefficients(vals, 6, 1)
    assert [t[(k,)] for k in range(4)] == [0, 1, 2, 0]
    assert t.reconstruct((5,)) == 25


def test_mahler_two_variables():
    vals = {xy: Fraction(xy[0] * xy[1]) for xy in iter_multi_indices(2, 4)}
    t = mahler_coefficients(vals, 4, 2)
    assert t[(1, 1)] == 1
    assert t[(1, 0)] == 0 and t[(2, 1)] == 0
    for x in iter_multi_indices(2, 4):
        assert t.reconstruct(x) == Fraction(x[0] * x[1])


def test_abelian_rows_are_vandermonde():
    table = StructureConstants(abelian(1, p=3), 6)
    for i in range(7):
        for j in range(7):
            assert chu_vandermonde_identity(table, (i,), (j,))


def test_unit_row(heis_alg):
    table = heis_alg.table
    z = (0, 0, 0)
    beta = (1, 2, 0)
    assert table.row(z, beta) == {beta: Fraction(1)}
    assert table.row(beta, z) == {beta: Fraction(1)}


def test_commutator_structure_constant(heis_alg):
    """The b_3 coefficient of b_2 b_1 - b_1 b_2, against the matrix oracle."""
    table = heis_alg.table
    e1, e2, e3 = (unit_index(3, k) for k in range(3))
    got = table.row(e2, e1).get(e3, Fraction(0)) - table.row(e1, e2).get(e3, Fraction(0))
    # oracle: h2 h1 = h1^a h2^b h3^c exactly, so delta-expansion has binom(c,1) at b3
    prod = heisenberg_bch_oracle((0, 1, 0), (1, 0, 0), 3)
    a, b, c = heisenberg_second_kind_oracle(prod, 3)
    assert (a, b) == (1, 1)
    assert got == c  # binom(c, 1) - binom(0, 1)


def test_convolution_identity(heis_alg):
    rng = random.Random(21)
    table = heis_alg.table
    for _ in range(6):
        x = tuple(rng.randrange(0, 3) for _ in range(3))
        y = tuple(rng.randrange(0, 3) for _ in range(3))
        assert table.verify_convolution(x, y)


def test_delta_convolution_50_pairs(q3, heis_alg):
    """delta_{h^x} delta_{h^y} = delta_{h^{F(x,y)}} up to degree N."""
    from padicdist import DistAlgebra

    rng = random.Random(23)
    ab3 = DistAlgebra(abelian(3, p=3, precision=24), q3, 6)
    for _ in range(50):
        g = ab3.lattice.element_second(tuple(rng.randrange(0, 10) for _ in range(3)))
        h = ab3.lattice.element_second(tuple(rng.randrange(0, 10) for _ in range(3)))
        assert ab3.mul(ab3.delta(g), ab3.delta(h)).coeffs == ab3.delta(g * h).coeffs
    for _ in range(8):
        g = heis_alg.lattice.element_second(tuple(rng.randrange(0, 10) for _ in range(3)))
        h = heis_alg.lattice.element_second(tuple(rng.randrange(0, 10) for _ in range(3)))
        assert heis_alg.mul(heis_alg.delta(g), heis_alg.delta(h)).coeffs == \
            heis_alg.delta(g * h).coeffs


def test_filtration_bound_sampled(heis_alg):
    table = heis_alg.table
    rng = random.Random(22)
    kappa = 1
    gammas = list(iter_multi_indices(3, 6))
    for _ in range(40):
        alpha, beta = rng.choice(gammas), rng.choice(gammas)
        for gamma, c in table.row(alpha, beta).items():
            assert vp_rational(c, 3) >= kappa * (sum(alpha) + sum(beta) - sum(gamma))


def test_row_degree_guard(heis_alg):
    with pytest.raises(DegreeOverflow):
        heis_alg.table.row((7, 0, 0), (0, 0, 0))


def test_cache_roundtrip(tmp_path, q3):
    lat = abelian(2, p=3, precision=24)
    t1 = StructureConstants(lat, 3, cache_dir=tmp_path)
    r = t1.row((1, 0), (0, 2))
    t1.save()
    t2 = StructureConstants(lat, 3, cache_dir=tmp_path)
    assert t2._rows[((1, 0), (0, 2))] == r
    # key mismatch is ignored, not an error
    t3 = StructureConstants(lat, 2, cache_dir=tmp_path)
    assert ((1, 0), (0, 2)) not in t3._rows
