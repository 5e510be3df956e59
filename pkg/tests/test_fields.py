import pytest

from apsum.errors import UsageError
from apsum.fields import Field, default_modulus, is_irreducible_gf2, is_prime, parse_descriptor

SMALL_FIELDS = [Field.prime(p) for p in (2, 3, 5, 7, 11, 13)] + [
    Field.binary(k) for k in (1, 2, 3, 4)
]


def test_prime_field_values():
    f = Field.prime(5)
    assert f.add(3, 4) == 2
    assert f.mul(3, 4) == 2
    assert f.sub(1, 3) == 3
    f7 = Field.prime(7)
    for u in range(7):
        assert f7.add(u, 0) == u


def test_binary_field_values():
    f = Field.binary(2)  # modulus x^2 + x + 1
    assert f.modulus == 0b111
    assert f.add(2, 3) == 1
    assert f.mul(2, 2) == 3  # x * x = x + 1


def test_eval_quadratic():
    f11 = Field.prime(11)
    for x in range(11):
        assert f11.eval_quadratic(0, 0, 7, x) == 7
    f5 = Field.prime(5)
    assert f5.eval_quadratic(1, 0, 0, 3) == 4  # 9 mod 5


def test_distinct_quadratics_agree_on_at_most_two_points():
    f = Field.prime(5)
    q = f.q
    triples = [(a, b, c) for a in range(q) for b in range(q) for c in range(q)]
    for i, t1 in enumerate(triples):
        for t2 in triples[i + 1 :]:
            agreements = sum(
                1
                for x in range(q)
                if f.eval_quadratic(*t1, x) == f.eval_quadratic(*t2, x)
            )
            assert agreements <= 2


def test_bijection_roundtrip_all_orders_up_to_64():
    orders = [q for q in range(2, 65) if is_prime(q) or q & (q - 1) == 0]
    for q in orders:
        f = Field.of_order(q)
        for i in range(f.q):
            assert f.index_of(f.element_of(i)) == i
    assert Field.prime(7).element_of(6) == 6
    assert Field.binary(2).element_of(3) == 0b11  # x + 1


def test_bijection_range_errors():
    f = Field.prime(7)
    with pytest.raises(UsageError):
        f.element_of(7)
    with pytest.raises(UsageError):
        f.index_of(-1)


@pytest.mark.parametrize("field", SMALL_FIELDS, ids=lambda f: f.descriptor)
def test_field_axioms_exhaustive(field):
    q = field.q
    elements = range(q)
    for a in elements:
        for b in elements:
            assert field.add(a, b) == field.add(b, a)
            assert field.mul(a, b) == field.mul(b, a)
            if a and b:
                assert field.mul(a, b) != 0  # no zero divisors
            for c in elements:
                assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
                assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
                assert field.mul(a, field.add(b, c)) == field.add(
                    field.mul(a, b), field.mul(a, c)
                )
    for a in range(1, q):
        assert any(field.mul(a, b) == 1 for b in range(1, q))  # inverses exist
    for a in elements:
        assert field.add(a, field.neg(a)) == 0


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8])
def test_nonzero_quadratic_has_at_most_two_roots(q):
    f = Field.of_order(q)
    for a in range(q):
        for b in range(q):
            for c in range(q):
                if (a, b, c) == (0, 0, 0):
                    continue
                roots = sum(1 for x in range(q) if f.eval_quadratic(a, b, c, x) == 0)
                assert roots <= 2


def test_default_moduli_are_smallest_irreducible():
    assert default_modulus(1) == 0b10
    assert default_modulus(2) == 0b111
    assert default_modulus(3) == 0xB
    assert default_modulus(4) == 0b10011
    for k in range(1, 9):
        m = default_modulus(k)
        assert is_irreducible_gf2(m)
        assert all(not is_irreducible_gf2(g) for g in range(1 << k, m))


def test_descriptor_roundtrip():
    for f in (Field.prime(7), Field.binary(3), Field.of_order(16)):
        assert parse_descriptor(f.descriptor) == f
    assert parse_descriptor("b:3:0xB").modulus == 0xB
    with pytest.raises(UsageError):
        parse_descriptor("x:1")
    with pytest.raises(UsageError):
        parse_descriptor("p:6")
    with pytest.raises(UsageError):
        parse_descriptor("b:2:0x5")  # x^2 + 1 = (x+1)^2 is reducible


def test_unsupported_orders_rejected():
    for q in (6, 9, 12, 1):
        with pytest.raises(UsageError):
            Field.of_order(q)
