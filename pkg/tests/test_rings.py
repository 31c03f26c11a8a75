import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsgkit.errors import CapacityError, MalformedInputError, NotADomainError, PreconditionError
from hsgkit.rings import (
    Poly,
    RationalField,
    brute_force_hom_count,
    check_frac_extension,
    check_free_ring_universal,
    fraction_field,
    free_ring_hom,
    from_tables,
    validate_ring,
    zmod,
)

Z4_ADD = [[0, 1, 2, 3], [1, 2, 3, 0], [2, 3, 0, 1], [3, 0, 1, 2]]
Z4_MUL = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 0, 2], [0, 3, 2, 1]]


def z4_tables():
    return from_tables([0, 1, 2, 3], Z4_ADD, Z4_MUL, 0, 1, "Z/4 (tables)")


x, y = Poly.gen("x"), Poly.gen("y")


def test_poly_normal_form():
    assert x * y == y * x
    assert (x + 1) ** 2 == x * x + 2 * x + 1
    assert x - x == Poly.const(0)


def test_free_hom_examples():
    z2 = zmod(2)
    assert free_ring_hom({"x": 1}, z2)(x * x + x) == 0
    assert free_ring_hom({}, zmod(5))(Poly.const(3)) == 3
    ev = free_ring_hom({"x": 0}, zmod(7))
    assert ev(3 * x * x + 5 * x) == 0


def test_free_hom_rejects_foreign_image():
    with pytest.raises(MalformedInputError):
        free_ring_hom({"x": 9}, zmod(3))


@pytest.mark.parametrize("ring", [zmod(2), zmod(3), z4_tables()], ids=lambda r: r.name)
@pytest.mark.parametrize("gens", [[], ["x"], ["x", "y"]])
def test_free_ring_counts(ring, gens):
    r = check_free_ring_universal(gens, ring)
    assert r.ok
    assert r.data["homs"] == r.data["brute_force"] == len(ring) ** len(gens)


def test_table_ring_matches_zmod():
    z4 = z4_tables()
    assert validate_ring(z4).ok
    m = zmod(4)
    for a, b in itertools.product(range(4), repeat=2):
        assert z4.add(a, b) == m.add(a, b) and z4.mul(a, b) == m.mul(a, b)


def test_broken_tables_reported():
    bad_mul = [row[:] for row in Z4_MUL]
    bad_mul[2][3] = 1
    assert not validate_ring(from_tables([0, 1, 2, 3], Z4_ADD, bad_mul, 0, 1)).ok


def test_capacity():
    with pytest.raises(CapacityError):
        check_free_ring_universal(["a", "b", "c", "d"], zmod(3))


@settings(max_examples=60, deadline=None)
@given(st.integers(-50, 50), st.integers(1, 50), st.integers(-50, 50), st.integers(1, 50), st.integers(-50, 50), st.integers(1, 50))
def test_rationals_field_axioms(a, b, c, d, e, f):
    q = fraction_field("Z").field
    p, r, s = Fraction(a, b), Fraction(c, d), Fraction(e, f)
    assert q.add(p, r) == q.add(r, p) and q.mul(p, r) == q.mul(r, p)
    assert q.add(q.add(p, r), s) == q.add(p, q.add(r, s))
    assert q.mul(q.mul(p, r), s) == q.mul(p, q.mul(r, s))
    assert q.mul(p, q.add(r, s)) == q.add(q.mul(p, r), q.mul(p, s))
    assert q.add(p, q.neg(p)) == q.zero and q.mul(p, q.one) == p
    if p != 0:
        assert q.mul(p, q.inv(p)) == q.one


def test_fraction_normalises():
    q = fraction_field("Z").field
    assert q.element(2, 4) == Fraction(1, 2)


def test_finite_field_is_its_own_fraction_field():
    ff = fraction_field(zmod(3))
    assert all(ff.embedding(v) == v for v in range(3))
    assert ff.field.mul(2, ff.field.inv(2)) == 1


def test_zmod6_rejected_with_witness():
    with pytest.raises(NotADomainError) as e:
        fraction_field(zmod(6))
    assert e.value.witness == (2, 3)


def test_canonical_extension_accepted():
    q = RationalField()
    assert check_frac_extension(q.embed, q).ok


def test_planted_alternative_extension_rejected():
    q = RationalField()

    def alt(v):
        v = Fraction(v)
        return Fraction(7) if v == Fraction(1, 2) else v

    r = check_frac_extension(q.embed, q, alternative=alt)
    assert r.codes() == {"non-unique-extension"}
    assert r.locations() == [("1/2",)]


def test_non_injective_hom_rejected():
    f5 = fraction_field(zmod(5)).field
    with pytest.raises(PreconditionError):
        check_frac_extension(f5.embed, f5)


def test_random_rational_sums_exact():
    rng = random.Random(3)
    q = RationalField()
    vals = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(200)]
    acc = q.zero
    for v in vals:
        acc = q.add(acc, v)
    assert acc == sum(vals, Fraction(0))


def test_brute_force_counts_directly():
    assert brute_force_hom_count([], zmod(4)) == 1
    assert brute_force_hom_count(["x"], zmod(3)) == 3
