import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from imaginarity.channels import choi_from_kraus
from imaginarity.core import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DimensionError,
    ImaginarityError,
    Tolerance,
    align_phases,
    householder_to_basis,
    is_hermitian,
    is_psd,
    is_symmetric,
    partial_trace,
    partial_transpose_a,
    real_eigh,
    trace_norm,
    unvec,
    vec,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def complex_matrices(draw, n=None):
    n = draw(st.integers(1, 5)) if n is None else n
    re = draw(arrays(float, (n, n), elements=finite))
    im = draw(arrays(float, (n, n), elements=finite))
    return re + 1j * im


def ginibre(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_is_hermitian():
    assert is_hermitian(np.eye(3))
    assert not is_hermitian(np.array([[0, 1j], [1j, 0]]))
    assert is_hermitian(PAULI_Y)
    with pytest.raises(DimensionError):
        is_hermitian(np.zeros((2, 3)))


def test_is_symmetric():
    assert is_symmetric(PAULI_X)
    assert not is_symmetric(PAULI_Y)
    assert is_symmetric(np.diag([1.0, 2j, -3.0]))
    with pytest.raises(DimensionError):
        is_symmetric(np.zeros((3, 2)))


def test_trace_norm_examples(rng):
    assert trace_norm(PAULI_Y) == pytest.approx(2.0, abs=1e-14)
    assert trace_norm(np.diag([3.0, -4.0])) == pytest.approx(7.0, abs=1e-14)
    m = ginibre(rng, 5, 5)
    # oracle: singular values as square roots of the eigenvalues of m^dagger m
    oracle = np.sum(np.sqrt(np.clip(np.linalg.eigvalsh(m.conj().T @ m), 0, None)))
    assert abs(trace_norm(m) - oracle) < 1e-10


@settings(max_examples=60, deadline=None)
@given(complex_matrices(n=3), complex_matrices(n=3), st.floats(-5, 5))
def test_trace_norm_is_a_norm(a, b, c):
    assert trace_norm(a) >= 0
    assert abs(trace_norm(c * a) - abs(c) * trace_norm(a)) <= 1e-9 * (1 + trace_norm(a))
    assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-9


def _pt_oracle(m, da, db):
    out = np.zeros_like(m)
    for a in range(da):
        for b in range(db):
            for a2 in range(da):
                for b2 in range(db):
                    out[a * db + b, a2 * db + b2] = m[a2 * db + b, a * db + b2]
    return out


def test_partial_transpose_of_product(rng):
    x, y = ginibre(rng, 3, 3), ginibre(rng, 2, 2)
    got = partial_transpose_a(np.kron(x, y), 3, 2)
    assert np.allclose(got, np.kron(x.T, y), atol=1e-14)


def test_partial_transpose_involution_and_oracle(rng):
    m = ginibre(rng, 6, 6)
    pt = partial_transpose_a(m, 2, 3)
    assert np.array_equal(pt, _pt_oracle(m, 2, 3))
    assert np.array_equal(partial_transpose_a(pt, 2, 3), m)


def test_partial_transpose_of_swap():
    swap = np.zeros((4, 4))
    for j in range(2):
        for k in range(2):
            swap[j * 2 + k, k * 2 + j] = 1
    expected = np.zeros((4, 4))
    for j in range(2):
        for k in range(2):
            e = np.zeros((2, 2))
            e[j, k] = 1
            expected += np.kron(e, e)
    assert np.array_equal(partial_transpose_a(swap, 2, 2), expected)


def test_partial_transpose_keeps_hermiticity_and_trace(rng):
    g = ginibre(rng, 6, 6)
    h = g + g.conj().T
    pt = partial_transpose_a(h, 3, 2)
    assert is_hermitian(pt)
    assert abs(np.trace(pt) - np.trace(h)) < 1e-12


def test_partial_transpose_dimension_mismatch():
    with pytest.raises(DimensionError):
        partial_transpose_a(np.eye(5), 2, 2)


def test_partial_trace(rng):
    x, y = ginibre(rng, 2, 2), ginibre(rng, 3, 3)
    m = np.kron(x, y)
    assert np.allclose(partial_trace(m, 2, 3, keep="A"), np.trace(y) * x)
    assert np.allclose(partial_trace(m, 2, 3, keep="B"), np.trace(x) * y)


def test_is_psd():
    assert is_psd(np.eye(2) / 2)
    assert not is_psd(PAULI_Z)
    plus_i = np.array([1, 1j]) / np.sqrt(2)
    assert is_psd(np.outer(plus_i, plus_i.conj()))
    with pytest.raises(ImaginarityError):
        is_psd(np.array([[0, 1], [0, 0]]))


def test_vec_layout_and_roundtrip(rng):
    for i in range(2):
        for j in range(3):
            e = np.zeros((2, 3))
            e[i, j] = 1
            assert np.array_equal(vec(e), np.kron(np.eye(2)[i], np.eye(3)[j]))
    m = ginibre(rng, 3, 4)
    assert np.array_equal(unvec(vec(m), 3, 4), m)
    with pytest.raises(DimensionError):
        unvec(np.zeros(5), 2, 3)


def test_vec_reproduces_choi_from_kraus(rng):
    k = [ginibre(rng, 3, 3) for _ in range(3)]
    # make the set complete: K_j <- K_j S^{-1/2}, S = sum K^dag K
    s = sum(x.conj().T @ x for x in k)
    w, v = np.linalg.eigh(s)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    k = [x @ inv_sqrt for x in k]
    assembled = sum(np.outer(vec(x), vec(x).conj()) for x in k)
    assert np.allclose(assembled, choi_from_kraus(k).choi, rtol=0, atol=1e-14)


def test_real_eigh_gives_real_basis(rng):
    g = rng.standard_normal((6, 3))
    j = (g @ g.T).astype(complex)  # rank 3: threefold degenerate zero eigenvalue
    w, v = real_eigh(j)
    assert v.dtype == float
    assert np.allclose(v.T @ v, np.eye(6), atol=1e-12)
    assert np.allclose(v @ np.diag(w) @ v.T, j.real, atol=1e-12)
    ident = np.eye(4, dtype=complex)
    w, v = real_eigh(ident)
    assert np.allclose(v.T @ v, np.eye(4), atol=1e-12)


def test_phase_alignment_removes_imaginary_parts(rng):
    g = rng.standard_normal((5, 5))
    j = g @ g.T
    _, v = np.linalg.eigh(j.astype(complex))
    v = v * np.exp(1j * rng.uniform(0, 2 * np.pi, 5))
    assert np.max(np.abs(align_phases(v).imag)) <= 1e-9


def test_householder_to_basis(rng):
    for _ in range(20):
        v = rng.standard_normal(4)
        v /= np.linalg.norm(v)
        for idx in range(4):
            h = householder_to_basis(v, idx)
            assert np.allclose(h.T @ h, np.eye(4), atol=1e-13)
            assert np.allclose(h @ v, np.eye(4)[idx], atol=1e-13)


def test_tolerance_bounds():
    Tolerance(1e-6, 1e-6)
    for bad in (0.0, -1.0, 0.5):
        with pytest.raises(ValueError):
            Tolerance(atol=bad)
