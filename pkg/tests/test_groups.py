import math
import random
from fractions import Fraction

import pytest

from helpers import heisenberg_bch_oracle, heisenberg_second_kind_oracle
from padicdist import (
    FiniteQuotient,
    LGroupSpec,
    LieLattice,
    abelian,
    check_p_valuation,
    check_powerful_commutator,
    o_additive,
)
from padicdist.errors import NotPowerful, PrecisionExhausted

INF = math.inf


def test_abelian_bch_is_addition():
    lat = abelian(3, p=3)
    x, y = (Fraction(1), Fraction(2), Fraction(4)), (Fraction(5), Fraction(0), Fraction(1))
    assert lat.bch(x, y) == (6, 2, 5)
    assert lat.bch(x, tuple(-c for c in x)) == (0, 0, 0)


def test_heisenberg_bch_matches_matrix_oracle(heis):
    rng = random.Random(11)
    for _ in range(40):
        x = tuple(Fraction(rng.randrange(-30, 30)) for _ in range(3))
        y = tuple(Fraction(rng.randrange(-30, 30)) for _ in range(3))
        assert heis.bch(x, y) == heisenberg_bch_oracle(x, y, 3)


def test_heisenberg_central_coordinate(heis):
    z = heis.bch((1, 0, 0), (0, 1, 0))
    assert z == (1, 1, Fraction(3, 2))


def test_bch_associative_sampled(heis):
    rng = random.Random(12)
    for _ in range(15):
        x, y, z = (
            tuple(Fraction(rng.randrange(0, 27)) for _ in range(3)) for _ in range(3)
        )
        assert heis.bch(heis.bch(x, y), z) == heis.bch(x, heis.bch(y, z))


def test_chart_roundtrip(heis):
    rng = random.Random(13)
    for _ in range(20):
        g = heis.element_second(tuple(rng.randrange(0, 81) for _ in range(3)))
        assert heis.element_first(g.first()).second() == g.second()
        h = heis.element_first(tuple(rng.randrange(0, 81) for _ in range(3)))
        assert heis.element_second(h.second()).first() == h.first()


def test_second_kind_matches_matrix_oracle(heis):
    rng = random.Random(14)
    for _ in range(20):
        coords = tuple(Fraction(rng.randrange(-20, 20)) for _ in range(3))
        g = heis.element_first(coords)
        assert g.second() == heisenberg_second_kind_oracle(coords, 3)


def test_abelian_chart_is_identity():
    lat = abelian(2, p=3)
    g = lat.element_first((4, 7))
    assert g.second() == (4, 7)
    assert lat.identity().second() == (0, 0)


def test_power_agrees_with_iteration(heis):
    g = heis.element_second((2, 1, 5))
    acc = heis.identity()
    for _ in range(6):
        acc = acc * g
    assert (g**6).second() == acc.second()
    assert (g**0).is_identity
    assert (g**1).second() == g.second()


def test_power_abelian_scaling():
    lat = abelian(2, p=3)
    h1 = lat.generator(0)
    assert (h1**3).second() == (3, 0)


def test_levels(heis):
    h1 = heis.generator(0)
    assert h1.level() == 1
    assert (h1**3).level() == 2
    lat2 = abelian(2, p=3)
    g = lat2.element_second((9, 27))
    assert g.level() == 3
    # h_1^p h_2^{p^2}
    g = lat2.element_second((3, 9))
    assert g.level() == 2


def test_omega(heis, heis2):
    assert heis.generator(0).p_valuation() == 1
    assert heis.identity().p_valuation() == INF
    # p = 2 shift
    assert heis2.generator(0).p_valuation() == 2
    lat = abelian(1, p=2)
    assert (lat.generator(0) ** 2).p_valuation() == 3


def test_level_rejects_identity(heis):
    with pytest.raises(ValueError):
        heis.identity().level()


def test_level_precision_exhausted():
    lat = abelian(1, p=3, precision=5)
    g = lat.element_second((3**6,))
    with pytest.raises(PrecisionExhausted):
        g.level()


def test_p_valuation_axioms(heis, heis2):
    rng = random.Random(15)
    for lat in (heis, heis2, abelian(2, p=3)):
        pairs = []
        for _ in range(60):
            a = lat.element_second(tuple(rng.randrange(0, 64) for _ in range(lat.d)))
            b = lat.element_second(tuple(rng.randrange(0, 64) for _ in range(lat.d)))
            pairs.append((a, b))
        assert check_p_valuation(pairs) == []


def test_commutator_valuation(heis):
    h1, h2 = heis.generator(0), heis.generator(1)
    assert h1.commutator(h2).p_valuation() >= 2


def test_powerfulness_validation():
    with pytest.raises(NotPowerful):
        LieLattice(3, 3, {(0, 1): (0, 0, 1)})  # v_p = 0 < kappa
    with pytest.raises(NotPowerful):
        LieLattice(2, 3, {(0, 1): (0, 0, 2)})  # v_2 = 1 < kappa = 2


def test_jacobi_validation():
    # [X1,X2] = 3X2 and [X2,X3] = -3X1 leave a defect 9X1 in the Jacobi sum
    with pytest.raises(ValueError, match="Jacobi"):
        LieLattice(3, 3, {(0, 1): (0, 3, 0), (1, 2): (-3, 0, 0)})


def test_pro2_commutator_check(heis2):
    q = FiniteQuotient(heis2, 5)
    assert check_powerful_commutator(q, 1, 1) > 0
    assert check_powerful_commutator(q, 1, 2) > 0
    assert check_powerful_commutator(q, 2, 2) > 0


def test_pro2_requires_p2(heis):
    q = FiniteQuotient(heis, 4)
    with pytest.raises(ValueError):
        check_powerful_commutator(q, 1, 1)


def test_scalar_restrict_abelian(k3u2):
    lg = o_additive(k3u2, 1)
    lat = lg.restrict()
    assert lat.d == 2
    assert lat.abelian
    assert lat.labels == ("b11", "b21")
    assert lg.flat_index(1, 1) == 0 and lg.flat_index(2, 1) == 1


def test_scalar_restrict_identity_for_qp(q3):
    lg = o_additive(q3, 2)
    lat = lg.restrict()
    assert lat.d == 2 and lat.abelian


def test_step_scaling(heis, k3u2):
    stepped = heis.step(1)
    assert stepped.brackets[0][1][2] == 9
    lg = o_additive(k3u2, 1)
    assert lg.step(2).restrict().abelian


def test_lgroup_v1_must_be_one(k3u2):
    with pytest.raises(ValueError):
        LGroupSpec(k3u2, [k3u2.unram_gen(), k3u2.one()], 1)


def _nonabelian_lgroup(field):
    # [x_1, x_2] = p x_2 over L; the induced bracket constants carry v_p = 1
    n = field.degree
    zero_o = (0,) * n
    p_o = (field.p,) + (0,) * (n - 1)
    basis = [field.one(), field.unram_gen()]
    return LGroupSpec(field, basis, 2, {(1, 2): (zero_o, p_o)}, name="solv")


def test_restrict_step_commutes(k3u2):
    lg = _nonabelian_lgroup(k3u2)
    direct = lg.step(1).restrict()
    other = lg.restrict().step(1)
    assert direct.brackets == other.brackets
    assert not direct.abelian


def test_restrict_rejects_unpowerful(k3u2):
    n = k3u2.degree
    one_o = (1,) + (0,) * (n - 1)
    lg = LGroupSpec(k3u2, [k3u2.one(), k3u2.unram_gen()], 2,
                    {(1, 2): ((0,) * n, one_o)})
    with pytest.raises(NotPowerful):
        lg.restrict()


def test_o_multiplication_table(k3u2):
    lg = o_additive(k3u2, 1)
    # w * w = -1 mod the defining polynomial w^2 + 1
    prod = lg.o_mul((0, 1), (0, 1))
    assert prod == (Fraction(-1), Fraction(0))
