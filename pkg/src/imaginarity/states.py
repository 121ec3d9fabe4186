"""Density matrices, pure states and their canonical forms.

States are numpy arrays: a density matrix is a ``(d, d)`` complex array, a
pure state a length-``d`` complex vector. ``density_matrix`` and
``pure_state`` validate and normalize the dtype; the remaining functions
assume valid input.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import (
    DEFAULT_TOL,
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DimensionError,
    InvalidStateError,
    as_matrix,
    householder_to_basis,
    is_hermitian,
)


class BlochVector(NamedTuple):
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class CanonicalForm:
    """Standard form of a pure state under free unitaries.

    ``u_free @ psi`` equals ``theta_state(theta, d)`` and
    ``u_free = exp(1j * phase) * q`` with ``q`` real orthogonal.
    """

    theta: float
    u_free: np.ndarray
    phase: float
    q: np.ndarray


def density_matrix(m, tol=DEFAULT_TOL):
    """Validate ``m`` as a density matrix and return it as a complex array."""
    try:
        m = as_matrix(m)
    except ValueError as exc:
        raise InvalidStateError(str(exc)) from exc
    if m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise InvalidStateError(f"density matrix must be square, got {m.shape}")
    if not is_hermitian(m, tol):
        raise InvalidStateError("density matrix is not Hermitian")
    if abs(np.trace(m) - 1) > tol.atol:
        raise InvalidStateError(f"density matrix has trace {np.trace(m).real:.12g}")
    if np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0] < -tol.eig_floor:
        raise InvalidStateError("density matrix is not positive semidefinite")
    return m


def pure_state(v, tol=DEFAULT_TOL):
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise InvalidStateError("pure state must be a non-empty finite vector")
    if abs(np.linalg.norm(v) - 1) > tol.atol:
        raise InvalidStateError(f"pure state has norm {np.linalg.norm(v):.12g}")
    return v


def projector(psi):
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def is_free_state(rho, tol=DEFAULT_TOL):
    """True iff every entry of ``rho`` is real (within ``tol.atol``)."""
    return bool(np.max(np.abs(np.imag(rho)), initial=0.0) <= tol.atol)


def split_real_imag(rho):
    """Return ``(rho_R, rho_I)`` with ``rho = rho_R + 1j * rho_I``.

    ``rho_R = (rho + rho.T) / 2`` is real symmetric and itself a free state;
    ``rho_I = (rho - rho.T) / 2i`` is real antisymmetric.
    """
    rho = np.asarray(rho, dtype=complex)
    rho_r = (0.5 * (rho + rho.T)).real
    rho_i = ((rho - rho.T) / 2j).real
    return rho_r, rho_i


def bloch_of_qubit(rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionError(f"Bloch coordinates need a qubit, got shape {rho.shape}")
    return BlochVector(*(float(np.real(np.trace(rho @ p))) for p in (PAULI_X, PAULI_Y, PAULI_Z)))


def qubit_of_bloch(r):
    x, y, z = r
    return 0.5 * (PAULI_I + x * PAULI_X + y * PAULI_Y + z * PAULI_Z)


def decompose_pure(psi):
    """Split ``psi`` (global phase removed) as ``a * psi_R + 1j * b * psi_I``.

    The global phase is fixed by making the largest-magnitude amplitude real
    positive (the first one on ties). ``a, b >= 0`` with ``a**2 + b**2 = 1``
    and ``psi_R``, ``psi_I`` are real unit vectors; when ``b == 0`` the
    imaginary direction defaults to ``|1>`` (``|0>`` in one dimension), and
    when ``a == 0`` the real direction defaults to ``|0>``.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    pivot = psi[np.argmax(np.abs(psi))]
    if abs(pivot) > 0:
        psi = psi * (abs(pivot) / pivot)
    re, im = psi.real.copy(), psi.imag.copy()
    a, b = float(np.linalg.norm(re)), float(np.linalg.norm(im))
    d = psi.size
    if a > 0:
        psi_r = re / a
    else:
        psi_r = np.zeros(d)
        psi_r[0] = 1.0
    if b > 0:
        psi_i = im / b
    else:
        psi_i = np.zeros(d)
        psi_i[min(1, d - 1)] = 1.0
    norm = np.hypot(a, b)
    return a / norm, b / norm, psi_r, psi_i


def theta_state(theta, d=2):
    """``(|0> + e^{i theta}|1>)/sqrt(2)`` padded with zeros to dimension ``d``."""
    if d < 2:
        raise DimensionError("theta states need d >= 2")
    v = np.zeros(d, dtype=complex)
    v[0] = 1 / np.sqrt(2)
    v[1] = np.exp(1j * theta) / np.sqrt(2)
    return v


def maximally_imaginary(d=2):
    """The maximally imaginary state ``|+i>``, zero-padded to dimension ``d``."""
    if d < 2:
        raise DimensionError("the maximally imaginary state needs d >= 2")
    return theta_state(np.pi / 2, d)


def half_diagonal_form(rho, tol=DEFAULT_TOL):
    """Rotate a qubit state to have 1/2 on both diagonal entries.

    Returns ``(x, y, o)`` with ``o`` real orthogonal and
    ``o @ rho @ o.T == [[1/2, x - iy], [x + iy, 1/2]]``, ``x, y >= 0``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionError(f"half-diagonal form needs a qubit, got shape {rho.shape}")
    a = rho[0, 0].real
    two_re_c = 2 * rho[0, 1].real
    # (o rho o^T)_00 = 1/2 + (a - 1/2) cos 2alpha + Re(c) sin 2alpha
    if abs(two_re_c) <= tol.atol:
        alpha = 0.0 if abs(2 * a - 1) <= tol.atol else np.pi / 4
    else:
        alpha = 0.5 * np.arctan2(1 - 2 * a, two_re_c)
    ca, sa = np.cos(alpha), np.sin(alpha)
    o = np.array([[ca, sa], [-sa, ca]])
    w = (o @ rho @ o.T)[1, 0]
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    flip = np.diag([1.0, -1.0])
    # swap conjugates w; flip negates it
    if w.imag < 0:
        o = swap @ o
        w = np.conj(w)
    if w.real < 0:
        o = swap @ flip @ o
        w = -np.conj(w)
    return float(max(w.real, 0.0)), float(max(w.imag, 0.0)), o


def canonical_pure_form(psi, tol=DEFAULT_TOL):
    """Free unitary taking ``psi`` to ``|theta>`` with ``theta`` in [0, pi/2].

    Two Householder reflections move the state into span{|0>, |1>}, the
    qubit is rotated to half-diagonal form, and the leftover global phase is
    recorded so that ``u_free @ psi`` equals the padded ``|theta>`` exactly
    (up to rounding).
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    d = psi.size
    if d == 1:
        phase = float(np.mod(-np.angle(psi[0]), 2 * np.pi))
        return CanonicalForm(0.0, np.exp(1j * phase) * np.eye(1), phase, np.eye(1))
    _, _, psi_r, psi_i = decompose_pure(psi)
    o1 = householder_to_basis(psi_r, 0)
    phi = o1 @ psi_i
    chi = phi[1:]
    o2 = np.eye(d)
    chi_norm = np.linalg.norm(chi)
    if d > 2 and chi_norm > tol.atol:
        o2[1:, 1:] = householder_to_basis(chi / chi_norm, 0)
    elif d == 2 and chi_norm > tol.atol and chi[0] < 0:
        o2[1, 1] = -1.0
    q = o2 @ o1
    v = (q @ psi)[:2]
    _, _, o3 = half_diagonal_form(np.outer(v, v.conj()), tol)
    lift = np.eye(d)
    lift[:2, :2] = o3
    q = lift @ q
    w = q @ psi
    theta = float(np.clip(np.angle(w[1] / w[0]) if abs(w[0]) > 0 else 0.0, 0.0, np.pi / 2))
    phase = float(np.mod(-np.angle(w[0]), 2 * np.pi))
    return CanonicalForm(theta, np.exp(1j * phase) * q, phase, q)


def random_density_matrix(d, rng, rank=None):
    """Ginibre-distributed mixed state; ``rank`` defaults to full."""
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_real_density_matrix(d, rng, rank=None):
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank))
    rho = g @ g.T
    return (rho / np.trace(rho)).astype(complex)


def random_pure_state(d, rng):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)
