import numpy as np
import pytest

from tsallisq import DomainError, PartitionError
from tsallisq.linalg import (
    hermitian_eigenvalues,
    hermitian_eigensystem,
    kron,
    partial_trace,
    psd_sqrt,
)


def test_kron_two_factors():
    a = np.array([[1, 2], [3, 4]], dtype=float)
    b = np.eye(2)
    out = kron(a, b)
    assert out.shape == (4, 4)
    assert np.allclose(out, np.kron(a, b))


def test_kron_three_factors():
    a, b, c = np.eye(2), np.diag([1.0, 2.0]), np.eye(3)
    assert np.allclose(kron(a, b, c), np.kron(np.kron(a, b), c))


def test_kron_rejects_oversized_result():
    big = np.eye(64)
    with pytest.raises(DomainError):
        kron(big, np.eye(2))


def test_hermitian_eigenvalues_descending():
    mat = np.diag([1.0, 3.0, 2.0])
    vals = hermitian_eigenvalues(mat)
    assert np.allclose(vals, [3.0, 2.0, 1.0])


def test_hermitian_eigenvalues_rejects_nonhermitian():
    mat = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(DomainError):
        hermitian_eigenvalues(mat)


def test_hermitian_eigensystem_reconstructs():
    rng = np.random.default_rng(0)
    raw = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    mat = raw + raw.conj().T
    vals, vecs = hermitian_eigensystem(mat)
    assert np.all(np.diff(vals) <= 1e-12)
    assert np.allclose(vecs @ np.diag(vals) @ vecs.conj().T, mat, atol=1e-10)


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(1)
    raw = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    mat = raw @ raw.conj().T
    root = psd_sqrt(mat)
    assert np.allclose(root @ root, mat, atol=1e-10)
    assert np.allclose(root, root.conj().T)


def test_psd_sqrt_clamps_tiny_negative():
    mat = np.diag([1.0, -1e-12])
    root = psd_sqrt(mat)
    assert root[1, 1] == 0.0


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(DomainError):
        psd_sqrt(np.diag([1.0, -0.5]))


def test_partial_trace_bell_pair():
    bell = np.zeros((4, 4))
    bell[0, 0] = bell[0, 3] = bell[3, 0] = bell[3, 3] = 0.5
    left = partial_trace(bell, (2, 2), (0,))
    assert np.allclose(left, np.eye(2) / 2)


def test_partial_trace_keeps_in_range_order():
    # keep order is normalized to range order, so (1, 0) == (0, 1)
    rng = np.random.default_rng(2)
    raw = rng.normal(size=(6, 6))
    mat = raw @ raw.T
    mat /= np.trace(mat)
    a = partial_trace(mat, (2, 3), (0, 1))
    assert np.allclose(a, mat)


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(3)
    raw = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    mat = raw @ raw.conj().T
    mat /= np.trace(mat).real
    for keep in ((0,), (1,), (2,), (0, 2)):
        red = partial_trace(mat, (2, 2, 2), keep)
        assert abs(np.trace(red).real - 1.0) < 1e-12


def test_partial_trace_of_product_factors():
    rng = np.random.default_rng(4)
    a = rng.normal(size=(2, 2))
    a = a @ a.T
    a /= np.trace(a)
    b = rng.normal(size=(3, 3))
    b = b @ b.T
    b /= np.trace(b)
    joint = np.kron(a, b)
    assert np.allclose(partial_trace(joint, (2, 3), (0,)), a)
    assert np.allclose(partial_trace(joint, (2, 3), (1,)), b)


@pytest.mark.parametrize("keep", [(), (2,), (-1,)])
def test_partial_trace_bad_keep(keep):
    with pytest.raises(PartitionError):
        partial_trace(np.eye(4) / 4, (2, 2), keep)


def test_partial_trace_dims_mismatch():
    with pytest.raises(PartitionError):
        partial_trace(np.eye(4) / 4, (2, 3), (0,))
