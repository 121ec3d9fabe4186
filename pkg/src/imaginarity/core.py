"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects. Composite spaces follow the
``A (x) B`` ordering with the B index running fastest, so that a bipartite
index ``(a, b)`` maps to the flat index ``a * dim_b + b``.
"""
from dataclasses import dataclass

import numpy as np

from ._kernels import kernels


class ImaginarityError(ValueError):
    """Base class for invalid inputs."""


class DimensionError(ImaginarityError):
    pass


class InvalidStateError(ImaginarityError):
    pass


class NotCPTPError(ImaginarityError):
    pass


class NotUnitaryError(ImaginarityError):
    pass


@dataclass(frozen=True)
class Tolerance:
    """Absolute tolerances for the numerical predicates.

    ``atol`` bounds entrywise comparisons; ``eig_floor`` is how far below
    zero an eigenvalue may sit before a matrix stops counting as PSD.
    """

    atol: float = 1e-9
    eig_floor: float = 1e-9

    def __post_init__(self):
        for name in ("atol", "eig_floor"):
            value = getattr(self, name)
            if not (0.0 < value < 1e-2):
                raise ValueError(f"{name} must lie in (0, 1e-2), got {value!r}")


DEFAULT_TOL = Tolerance()

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def as_matrix(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ImaginarityError("matrix has non-finite entries")
    return m


def _as_square(m):
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def is_hermitian(m, tol=DEFAULT_TOL):
    m = _as_square(m)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol.atol)


def is_symmetric(m, tol=DEFAULT_TOL):
    m = _as_square(m)
    return bool(np.max(np.abs(m - m.T), initial=0.0) <= tol.atol)


def is_real(m, tol=DEFAULT_TOL):
    return bool(np.max(np.abs(np.imag(m)), initial=0.0) <= tol.atol)


def is_unitary(m, tol=DEFAULT_TOL):
    m = _as_square(m)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol.atol)


def trace_norm(m):
    """Sum of the singular values of ``m``."""
    m = as_matrix(m)
    if m.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def is_psd(m, tol=DEFAULT_TOL):
    m = _as_square(m)
    if not is_hermitian(m, tol):
        raise ImaginarityError("PSD test needs a Hermitian matrix")
    h = 0.5 * (m + m.conj().T)
    return bool(np.linalg.eigvalsh(h)[0] >= -tol.eig_floor)


def partial_transpose_a(m, dim_a, dim_b):
    """Transpose the first tensor factor of an operator on ``A (x) B``.

    Block ``(j, k)`` of the result (blocks indexed by A) is block ``(k, j)``
    of the input.
    """
    m = _as_square(m)
    if m.shape[0] != dim_a * dim_b:
        raise DimensionError(f"side {m.shape[0]} does not match {dim_a}*{dim_b}")
    return kernels.partial_transpose_a(np.ascontiguousarray(m), int(dim_a), int(dim_b))


def partial_trace(m, dim_a, dim_b, keep):
    """Trace out one factor of ``A (x) B``; ``keep`` is ``"A"`` or ``"B"``."""
    m = _as_square(m)
    if m.shape[0] != dim_a * dim_b:
        raise DimensionError(f"side {m.shape[0]} does not match {dim_a}*{dim_b}")
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "A":
        return np.einsum("abcb->ac", t)
    if keep == "B":
        return np.einsum("abad->bd", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def vec(m):
    """Row-major vectorization: ``vec(|i><j|) = |i> (x) |j>``."""
    return as_matrix(m).reshape(-1).copy()


def unvec(v, rows, cols):
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != rows * cols:
        raise DimensionError(f"cannot reshape length {v.size} into {rows}x{cols}")
    return v.reshape(rows, cols).copy()


def align_phases(vectors):
    """Rotate each column so that its largest-magnitude entry is real positive."""
    vectors = np.array(vectors, dtype=complex)
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    mag = np.abs(pivots)
    phases = np.ones_like(pivots)
    nz = mag > 0
    phases[nz] = pivots[nz] / mag[nz]
    return vectors / phases


def real_eigh(m, tol=DEFAULT_TOL):
    """Eigendecomposition of a real symmetric matrix with a real eigenbasis.

    A complex Hermitian solver is used, then every eigenvector is phase
    aligned and each (near-)degenerate eigenspace is re-orthonormalized over
    the reals from the real and imaginary parts of its vectors.

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    v : ndarray
        Real orthogonal matrix whose columns are the eigenvectors.
    """
    m = _as_square(m)
    if not (is_real(m, tol) and is_symmetric(m, tol)):
        raise ImaginarityError("real_eigh needs a real symmetric matrix")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    v = align_phases(v)
    out = np.empty(v.shape, dtype=float)
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and w[stop] - w[stop - 1] <= tol.atol:
            stop += 1
        block = v[:, start:stop]
        k = stop - start
        if k == 1 and np.max(np.abs(block.imag)) <= tol.atol:
            col = block.real[:, 0]
            out[:, start] = col / np.linalg.norm(col)
        else:
            span = np.hstack([block.real, block.imag])
            u, _, _ = np.linalg.svd(span, full_matrices=False)
            out[:, start:stop] = u[:, :k]
        start = stop
    return w, out


def householder_to_basis(v, index=0):
    """Real orthogonal matrix sending the unit real vector ``v`` to ``e_index``.

    Uses the reflection through ``v + e`` (negated) or ``v - e``, picking the
    one that avoids cancellation.
    """
    v = np.asarray(v, dtype=float)
    n = v.shape[0]
    e = np.zeros(n)
    e[index] = 1.0
    if v[index] >= 0:
        u = v + e
        sign = -1.0
    else:
        u = v - e
        sign = 1.0
    nu = u @ u
    h = np.eye(n) - 2.0 * np.outer(u, u) / nu
    return sign * h
