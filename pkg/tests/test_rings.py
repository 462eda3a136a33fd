import random

import pytest

from loopgr import QQ, ArtinianRing, PrimeField
from loopgr.errors import DomainError, NonUnitLeading


def test_rational_parse_and_str():
    assert QQ.parse("3/7") * 7 == 3
    assert QQ.parse("-2") == -2
    assert QQ.scalar_str(QQ.parse("4/6")) == "2/3"
    with pytest.raises(DomainError):
        QQ.parse("1.5")
    with pytest.raises(DomainError):
        QQ.parse("1/0")


def test_prime_field_arithmetic():
    F = PrimeField(7)
    assert F.of(10) == 3
    assert F.inv(3) == 5
    assert F.mul(3, F.inv(3)) == 1
    assert F.parse("1/2") == 4
    with pytest.raises(NonUnitLeading):
        F.inv(0)
    with pytest.raises(DomainError):
        PrimeField(6)
    with pytest.raises(DomainError):
        PrimeField(2**31 + 11)


def test_prime_field_accepts_large_primes():
    F = PrimeField(2147483647)  # 2^31 - 1
    assert F.mul(F.inv(12345), 12345) == 1


def test_artinian_units_and_inverse():
    A = ArtinianRing(QQ, 3)
    x = A.gen()
    u = A.add(A.one, x)  # 1 + x
    assert A.is_unit(u)
    assert A.eq(A.mul(u, A.inv(u)), A.one)
    assert not A.is_unit(x)
    with pytest.raises(NonUnitLeading):
        A.inv(x)
    assert A.in_maximal_ideal(x)
    assert not A.in_maximal_ideal(u)


def test_artinian_nilpotence():
    A = ArtinianRing(PrimeField(5), 2)
    x = A.gen()
    assert A.eq(A.mul(x, x), A.zero)
    assert A.residue(A.add(A.one, x)) == 1


def test_artinian_requires_field_base():
    with pytest.raises(DomainError):
        ArtinianRing(ArtinianRing(QQ, 2), 2)


def test_ring_laws_random(any_ring):
    ring = any_ring
    rng = random.Random(f"laws:{ring.name}")
    for _ in range(200):
        a, b, c = (ring.random(rng) for _ in range(3))
        assert ring.eq(ring.add(a, b), ring.add(b, a))
        assert ring.eq(ring.mul(a, b), ring.mul(b, a))
        assert ring.eq(
            ring.mul(a, ring.add(b, c)), ring.add(ring.mul(a, b), ring.mul(a, c))
        )
        assert ring.eq(
            ring.mul(ring.mul(a, b), c), ring.mul(a, ring.mul(b, c))
        )


def test_random_unit_is_unit(any_ring):
    rng = random.Random("units")
    for _ in range(100):
        u = any_ring.random_unit(rng)
        assert any_ring.is_unit(u)
        assert any_ring.eq(any_ring.mul(u, any_ring.inv(u)), any_ring.one)
