import math
import random
from fractions import Fraction

import pytest

from padicdist import FieldSpec
from padicdist.errors import DivisionByZero, NonUnit, ParseError

INF = math.inf


def test_cancellation_gives_exact_zero(q3):
    z = q3.one() + q3.scalar(-1)
    assert z.is_zero
    assert z.valuation == INF


def test_valuation_multiplicative(q3):
    p = q3.scalar(3)
    assert (p * p).valuation == 2
    assert p.abs_exponent() == 1


def test_uniformizer_inverse_ramified(k3r2):
    pi = k3r2.uniformizer()
    assert pi.inv().valuation == -1
    assert pi.inv().abs_exponent() == Fraction(-1, 2)
    assert pi.abs_exponent() == Fraction(1, 2)


def test_zero_abs_exponent(q3):
    assert q3.zero().abs_exponent() == INF


def test_residue_basic(q3):
    assert q3.one().residue() == q3.residue_field.one()
    assert (q3.one() + q3.scalar(3)).residue() == q3.residue_field.one()


def test_residue_nontrivial_class(k3u2):
    wbar = k3u2.unram_gen().residue()
    k = k3u2.residue_field
    # wbar lies outside the prime field: it is not a scalar multiple of 1
    assert all(wbar != k.elem(c) for c in range(3))
    assert wbar == k.gen()


def test_residue_requires_unit(q3):
    with pytest.raises(NonUnit):
        q3.scalar(3).residue()


def test_division_by_zero(q3):
    with pytest.raises(DivisionByZero):
        q3.zero().inv()


def test_abs_multiplicative_sampled(k3r2):
    rng = random.Random(0)
    field = k3r2
    elems = []
    for _ in range(12):
        coords = [Fraction(rng.randrange(-8, 9), rng.choice((1, 2, 5))) for _ in range(field.degree)]
        s = field.from_coords(coords)
        if not s.is_zero:
            elems.append(s)
    for x in elems:
        for y in elems:
            assert (x * y).abs_exponent() == x.abs_exponent() + y.abs_exponent()


def test_ultrametric_addition(k3u2):
    rng = random.Random(1)
    for _ in range(40):
        x = k3u2.from_coords([rng.randrange(-20, 20) for _ in range(2)])
        y = k3u2.from_coords([rng.randrange(-20, 20) for _ in range(2)])
        s = x + y
        if x.is_zero or y.is_zero:
            continue
        assert s.valuation >= min(x.valuation, y.valuation)
        if x.valuation != y.valuation:
            assert s.valuation == min(x.valuation, y.valuation)


def test_residue_multiplicative_on_units(k3u2):
    rng = random.Random(2)
    units = []
    for _ in range(10):
        s = k3u2.from_coords([rng.randrange(0, 9) for _ in range(2)])
        if not s.is_zero and s.valuation == 0:
            units.append(s)
    for x in units:
        for y in units:
            assert (x * y).residue() == x.residue() * y.residue()


def test_serialize_roundtrip(q3, k3u2, k3r2):
    rng = random.Random(3)
    for field in (q3, k3u2, k3r2):
        for _ in range(15):
            coords = [Fraction(rng.randrange(-50, 50)) for _ in range(field.degree)]
            x = field.from_coords(coords)
            if x.is_zero:
                continue
            text = x.serialize()
            # parse/serialize is bit-exact at precision M
            assert field.parse_scalar(text).serialize() == text
            # and the parsed value agrees with x to M uniformizer digits
            diff = field.parse_scalar(text) - x
            assert diff.is_zero or diff.valuation >= x.valuation + field.precision


def test_parse_errors(q3):
    with pytest.raises(ParseError):
        q3.parse_scalar("pi^1 * (3)")
    with pytest.raises(ParseError):
        q3.parse_scalar("nonsense")


def test_eisenstein_validation():
    with pytest.raises(ValueError):
        FieldSpec(3, e=2, eisenstein=[1, 0])  # constant term valuation 0
    with pytest.raises(ValueError):
        FieldSpec(3, e=2, eisenstein=[9, 0])  # constant term valuation 2
    with pytest.raises(ValueError):
        FieldSpec(4)  # not prime


def test_residue_field_pth_root(k3u2):
    k = k3u2.residue_field
    rng = random.Random(4)
    for _ in range(20):
        x = k.elem((rng.randrange(3), rng.randrange(3)))
        assert x.pth_root() ** 3 == x
        assert x.pth_root(2) ** 9 == x


def test_tower_with_both_layers():
    field = FieldSpec(3, e=2, f=2, precision=12)
    pi, w = field.uniformizer(), field.unram_gen()
    assert (pi * pi).valuation == 2
    assert field.degree == 4
    x = (w + pi) * (w - pi)
    assert x == w * w - pi * pi
    y = field.one() + pi * w
    assert (y * y.inv()) == field.one()
