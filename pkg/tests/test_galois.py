import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ogff import galois as gf
from ogff.errors import CapacityError, DomainError, InvalidArgument


def _brute_smallest_monic_quadratic(p):
    # a monic quadratic is irreducible iff it has no root; scan in the library's lex order
    for code in range(p * p):
        c0, c1 = code % p, code // p
        if all((x * x + c1 * x + c0) % p for x in range(p)):
            return (c0, c1, 1)
    raise AssertionError


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_quadratic_modulus_matches_root_scan(p):
    assert gf.make_field(p, 2).modulus == _brute_smallest_monic_quadratic(p)


def test_moduli_examples():
    assert gf.make_field(2, 1).modulus == (0, 1)
    assert gf.make_field(2, 2).modulus == (1, 1, 1)
    assert gf.make_field(3, 2).modulus == (1, 0, 1)
    assert gf.make_field(2, 2).poly_str() == "x^2 + x + 1"


@pytest.mark.parametrize("p,k", [(2, 3), (2, 4), (2, 5), (3, 3), (5, 3)])
def test_modulus_irreducible_by_exhaustion(p, k):
    # no monic divisor of degree 1..k//2
    f = gf.make_field(p, k).modulus
    for deg in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            g = list(low) + [1]
            assert any(gf._poly_mod(f, g, p)), (f, g)


def test_make_field_errors():
    with pytest.raises(InvalidArgument):
        gf.make_field(6, 1)
    with pytest.raises(InvalidArgument):
        gf.make_field(2, 0)
    with pytest.raises(CapacityError):
        gf.make_field(2, 17)
    with pytest.raises(InvalidArgument):
        gf.field_of_order(12)


def test_make_field_is_deterministic():
    a, b = gf.make_field(3, 3), gf.FieldSpec(3, 3, gf.make_field(3, 3).modulus)
    assert a.modulus == b.modulus
    assert np.array_equal(a.mul_table(), b.mul_table())


def test_arith_examples():
    f7 = gf.make_field(7)
    assert f7.code(f7.mul(3, 5)) == 1
    f4 = gf.make_field(2, 2)
    x = f4.element((0, 1))
    assert f4.mul(x, x) == f4.element((1, 1))
    assert gf.arith(f4, "mul", 2, 2) == f4.element(3)
    assert gf.arith(f7, "inv", 3) == f7.element(5)
    with pytest.raises(DomainError):
        f7.inv(0)
    with pytest.raises(InvalidArgument):
        gf.arith(f7, "frobnicate", 1)


@pytest.mark.parametrize("q", [2, 3, 4, 7, 8, 9, 16, 25, 27])
def test_mul_by_one(q):
    f = gf.field_of_order(q)
    one = f.element(1)
    assert all(f.mul(a, one) == a for a in f.elements())


def test_trace_examples():
    f5 = gf.make_field(5)
    assert [gf.trace(f5, x) for x in range(5)] == list(range(5))
    f4 = gf.make_field(2, 2)
    assert gf.trace(f4, 0) == 0 and gf.trace(f4, 1) == 0


def test_gf9_trace_against_gaussian_integers_mod_3():
    # modulus x^2 + 1 makes GF(9) = Z3[i]; tr(z) = z + z^3 computed independently
    def mul(u, v):
        return ((u[0] * v[0] - u[1] * v[1]) % 3, (u[0] * v[1] + u[1] * v[0]) % 3)

    f9 = gf.make_field(3, 2)
    expected = []
    for code in range(9):
        z = (code % 3, code // 3)
        z3 = mul(z, mul(z, z))
        s = ((z[0] + z3[0]) % 3, (z[1] + z3[1]) % 3)
        assert s[1] == 0
        expected.append(s[0])
    got = [f9.trace(c) for c in range(9)]
    assert got == expected
    assert got[3] == 0  # tr(x) = tr(i) = 0
    assert sorted(got.count(v) for v in range(3)) == [3, 3, 3]
    nonsquares = set(range(1, 9)) - {f9.code(f9.mul(a, a)) for a in range(1, 9)}
    assert any(got[c] for c in nonsquares)


def test_enumerate_examples():
    assert [e.coeffs for e in gf.enumerate_field(gf.make_field(2))] == [(0,), (1,)]
    assert [e.coeffs for e in gf.enumerate_field(gf.make_field(2, 2))] == [(0, 0), (1, 0), (0, 1), (1, 1)]
    f9 = gf.make_field(3, 2)
    els = gf.enumerate_field(f9)
    assert len(set(els)) == 9
    assert {f9.add(a, b) for a in els for b in els} <= set(els)
    assert {f9.mul(a, b) for a in els for b in els} <= set(els)


FIELDS_UP_TO_64 = [(2, k) for k in range(1, 7)] + [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2),
                                                   (11, 1), (13, 1), (17, 1), (31, 1), (37, 1), (61, 1)]


@pytest.mark.parametrize("p,k", FIELDS_UP_TO_64)
def test_field_axioms_exhaustive(p, k):
    f = gf.make_field(p, k)
    q = f.q
    A, M = f.add_table(), f.mul_table()
    a, b, c = np.ix_(range(q), range(q), range(q))
    assert np.array_equal(A, A.T) and np.array_equal(M, M.T)
    assert np.array_equal(A[A[a, b], c], A[a, A[b, c]])
    assert np.array_equal(M[M[a, b], c], M[a, M[b, c]])
    assert np.array_equal(M[a, A[b, c]], A[M[a, b], M[a, c]])
    assert np.array_equal(A[0], np.arange(q)) and np.array_equal(M[1], np.arange(q))
    for row in A:
        assert sorted(row) == list(range(q))
    for row in M[1:, 1:]:
        assert sorted(row) == list(range(1, q))


@pytest.mark.parametrize("p,k", FIELDS_UP_TO_64)
def test_trace_linear_and_balanced(p, k):
    f = gf.make_field(p, k)
    q = f.q
    A, M, T = f.add_table(), f.mul_table(), f.trace_table()
    for alpha in range(p):  # prime-field scalars have codes 0..p-1
        lhs = T[A[M[alpha][:, None], np.arange(q)[None, :]]]
        rhs = (alpha * T[:, None] + T[None, :]) % p
        assert np.array_equal(lhs, rhs)
    assert np.array_equal(np.bincount(T, minlength=p), np.full(p, q // p))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 5), (3, 3), (5, 2), (2, 8), (3, 5)]), st.data())
def test_element_api_agrees_with_inverse_and_frobenius(pk, data):
    f = gf.make_field(*pk)
    a = data.draw(st.integers(1, f.q - 1))
    b = data.draw(st.integers(0, f.q - 1))
    assert f.code(f.mul(a, f.inv(a))) == 1
    assert f.sub(f.add(a, b), b) == f.element(a)
    assert f.pow(a, f.q - 1) == f.element(1)
    # Frobenius is additive
    p = f.p
    assert f.pow(f.add(a, b), p) == f.add(f.pow(a, p), f.pow(b, p))
