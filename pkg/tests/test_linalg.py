import itertools

import numpy as np
import pytest

from reldim import linalg as la
from reldim import _kernels_py


def test_rref_identity_and_zero():
    r = la.rref(la.eye(2), 7)
    assert np.array_equal(r.r, la.eye(2)) and r.pivots == [0, 1] and r.rank == 2
    z = la.rref(la.zeros(3, 2), 7)
    assert not z.r.any() and z.pivots == [] and z.rank == 0


def test_rref_dependent_rows():
    r = la.rref(la.mat([[1, 2], [2, 4]], 7), 7)
    assert r.r.tolist() == [[1, 2], [0, 0]] and r.rank == 1


def test_kernel_examples():
    assert la.kernel_basis(la.eye(3), 7).shape == (3, 0)
    k = la.kernel_basis(la.zeros(2, 2), 7)
    assert k.shape == (2, 2) and la.rank(k, 7) == 2
    k = la.kernel_basis(la.mat([[1, 2]], 7), 7)
    assert k.shape == (2, 1)
    assert (k[:, 0] * pow(int(k[1, 0]), -1, 7) % 7).tolist() == [5, 1]


def test_solve_examples():
    b = la.mat([[3], [6]], 7)
    assert np.array_equal(la.solve(la.eye(2), b, 7), b)
    assert la.solve(la.zeros(2, 2), b, 7) is None
    x = la.solve(la.mat([[2]], 5), la.mat([[3]], 5), 5)
    # oracle: try every residue
    assert [r for r in range(5) if 2 * r % 5 == 3] == [int(x[0, 0])]


def test_empty_shapes():
    assert la.rank(la.zeros(0, 3), 7) == 0
    assert la.kernel_basis(la.zeros(0, 3), 7).shape == (3, 3)
    assert la.mul(la.zeros(2, 0), la.zeros(0, 3), 7).shape == (2, 3)


def test_modulus_must_be_prime():
    with pytest.raises(la.FieldError):
        la.check_modulus(6)
    with pytest.raises(la.FieldError):
        la.check_modulus(1)
    assert la.check_modulus(7) == 7


def test_inverse_brute_force_gf3():
    # every invertible 2x2 matrix over GF(3), checked against the enumeration
    for entries in itertools.product(range(3), repeat=4):
        m = np.array(entries, dtype=np.int64).reshape(2, 2)
        inv = la.inverse(m, 3)
        det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) % 3
        assert (inv is None) == (det == 0)
        if inv is not None:
            assert np.array_equal(la.mul(m, inv, 3), la.eye(2))


def test_backends_agree(rng):
    for _ in range(50):
        r, c = rng.integers(1, 9, size=2)
        m = rng.integers(0, 11, size=(r, c))
        a = _kernels_py.rref_mod_p(m, 11)
        b = la._rref_kernel(m, 11)
        assert np.array_equal(a[0], np.asarray(b[0])) and list(a[1]) == list(b[1])


def test_complement_and_left_inverse(rng):
    for _ in range(20):
        u = la.column_basis(la.random_matrix(rng, 5, 3, 7), 7)
        c = la.complement(u, 7)
        assert la.rank(np.hstack([u, c]), 7) == 5
        li = la.left_inverse(u, 7)
        assert np.array_equal(la.mul(li, u, 7), la.eye(u.shape[1]))
