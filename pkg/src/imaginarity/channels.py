"""Quantum channels and the free-operation predicates.

A channel ``E: L(H_B) -> L(H_A)`` is stored through its unnormalized Choi
matrix ``J = sum_jk E(|j><k|) (x) |j><k|`` on ``A (x) B`` (output first,
input index fastest), so ``Tr J = dim_in`` and
``E(rho) = Tr_B[J (I (x) rho^T)]``.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._kernels import kernels
from .core import (
    DEFAULT_TOL,
    PAULI_Y,
    PAULI_Z,
    DimensionError,
    ImaginarityError,
    NotCPTPError,
    NotUnitaryError,
    as_matrix,
    is_real,
    is_symmetric,
    is_unitary,
    partial_trace,
    partial_transpose_a,
    real_eigh,
    unvec,
    vec,
)
from .states import is_free_state

# Trace preservation is checked looser than atol: eigensolver error accumulates.
TP_ATOL = 1e-8


def check_cptp(choi, dim_out, dim_in, tol=DEFAULT_TOL):
    """Raise ``NotCPTPError`` unless ``choi`` is the Choi matrix of a channel."""
    n = dim_out * dim_in
    if choi.shape != (n, n):
        raise DimensionError(f"Choi matrix of a {dim_in}->{dim_out} channel must be {n}x{n}, got {choi.shape}")
    if np.max(np.abs(choi - choi.conj().T)) > tol.atol:
        raise NotCPTPError("Choi matrix is not Hermitian")
    lam = np.linalg.eigvalsh(0.5 * (choi + choi.conj().T))[0]
    if lam < -tol.eig_floor:
        raise NotCPTPError(f"Choi matrix has eigenvalue {lam:.3e}: map is not completely positive")
    dev = np.max(np.abs(partial_trace(choi, dim_out, dim_in, keep="B") - np.eye(dim_in)))
    if dev > TP_ATOL:
        raise NotCPTPError(f"Tr_A J deviates from identity by {dev:.3e}: map is not trace preserving")


@dataclass(frozen=True, eq=False)
class Channel:
    """CPTP map held as its Choi matrix; validated on construction."""

    choi: np.ndarray
    dim_out: int
    dim_in: int

    def __post_init__(self):
        choi = np.ascontiguousarray(as_matrix(self.choi))
        object.__setattr__(self, "choi", choi)
        check_cptp(choi, self.dim_out, self.dim_in)

    def __call__(self, rho):
        return apply(self, rho)


@dataclass(frozen=True, eq=False)
class Dilation:
    """Real orthogonal ``u_ae`` on ``A (x) E`` with the environment in ``|0>``."""

    u_ae: np.ndarray
    env_dim: int
    dim: int


@dataclass(frozen=True, eq=False)
class FreeUnitaryFactorization:
    """``u = exp(1j * theta) * q`` with ``q`` real orthogonal."""

    theta: float
    q: np.ndarray


def apply(ch, rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise DimensionError(f"channel expects a {ch.dim_in}-dim input, got shape {rho.shape}")
    return kernels.apply_choi(ch.choi, np.ascontiguousarray(rho), ch.dim_out, ch.dim_in)


def apply_batch(chois, rhos, dim_out, dim_in):
    """Apply ``chois[n]`` to ``rhos[n]`` for every ``n``; no CPTP validation."""
    chois = np.ascontiguousarray(chois, dtype=complex)
    rhos = np.ascontiguousarray(rhos, dtype=complex)
    n = dim_out * dim_in
    if chois.ndim != 3 or chois.shape[1:] != (n, n) or rhos.shape != (chois.shape[0], dim_in, dim_in):
        raise DimensionError(f"batch shapes {chois.shape} and {rhos.shape} do not match ({dim_out}, {dim_in})")
    return kernels.apply_choi_batch(chois, rhos, dim_out, dim_in)


def apply_on_subsystem(ch, sigma, dim_anc):
    """``(E (x) id_k)(sigma)`` for ``sigma`` on ``H_in (x) C^k``."""
    sigma = np.asarray(sigma, dtype=complex)
    n = ch.dim_in * dim_anc
    if sigma.shape != (n, n):
        raise DimensionError(f"expected a {n}x{n} bipartite operator, got shape {sigma.shape}")
    j = ch.choi.reshape(ch.dim_out, ch.dim_in, ch.dim_out, ch.dim_in)
    s = sigma.reshape(ch.dim_in, dim_anc, ch.dim_in, dim_anc)
    out = np.einsum("abxy,bcyd->acxd", j, s)
    m = ch.dim_out * dim_anc
    return out.reshape(m, m)


def choi_from_kraus(kraus):
    """Channel with Kraus operators ``kraus`` (each ``dim_out x dim_in``)."""
    kraus = [as_matrix(k) for k in kraus]
    if not kraus:
        raise ImaginarityError("empty Kraus set")
    dim_out, dim_in = kraus[0].shape
    if any(k.shape != (dim_out, dim_in) for k in kraus):
        raise DimensionError("Kraus operators have mismatched shapes")
    vs = np.stack([vec(k) for k in kraus], axis=1)
    return Channel(vs @ vs.conj().T, dim_out, dim_in)


def kraus_from_choi(ch, tol=DEFAULT_TOL):
    """Kraus operators from the spectral decomposition of the Choi matrix.

    Eigenvalues below ``tol.eig_floor`` are dropped. A real Choi matrix gives
    real Kraus operators.
    """
    choi = ch.choi
    if is_real(choi, tol):
        w, v = real_eigh(choi, tol)
    else:
        w, v = np.linalg.eigh(0.5 * (choi + choi.conj().T))
    if w[0] < -tol.eig_floor:
        raise NotCPTPError(f"Choi matrix has eigenvalue {w[0]:.3e}")
    keep = np.flatnonzero(w > tol.eig_floor)[::-1]
    return [np.sqrt(w[i]) * unvec(v[:, i], ch.dim_out, ch.dim_in) for i in keep]


def check_kraus_complete(kraus, tol=DEFAULT_TOL):
    dim_in = kraus[0].shape[1]
    total = sum(k.conj().T @ k for k in kraus)
    dev = np.max(np.abs(total - np.eye(dim_in)))
    if dev > TP_ATOL:
        raise NotCPTPError(f"Kraus set is not complete (deviation {dev:.3e})")


def dilation_from_kraus(kraus, tol=DEFAULT_TOL):
    """Real orthogonal Stinespring unitary for a real Kraus set.

    ``<j|_E U |0>_E = K_j``: the columns of ``U`` with environment index 0
    hold the stacked Kraus operators, and the remaining columns are a real
    orthonormal basis of their complement.
    """
    kraus = [as_matrix(k) for k in kraus]
    dim = kraus[0].shape[0]
    if any(k.shape != (dim, dim) for k in kraus):
        raise DimensionError("dilation needs square Kraus operators of equal size")
    if not all(is_real(k, tol) for k in kraus):
        raise ImaginarityError("only real Kraus sets admit a free dilation")
    check_kraus_complete(kraus, tol)
    n_env = len(kraus)
    # isometry V[(a, j), b] = K_j[a, b]
    iso = np.stack([k.real for k in kraus], axis=1).reshape(dim * n_env, dim)
    u = np.zeros((dim * n_env, dim * n_env))
    cols = np.arange(dim) * n_env
    u[:, cols] = iso
    if n_env > 1:
        comp = scipy.linalg.null_space(iso.T)
        rest = np.setdiff1d(np.arange(dim * n_env), cols)
        u[:, rest] = comp
    return Dilation(u, n_env, dim)


def apply_dilation(dil, rho):
    """``Tr_E[U (rho (x) |0><0|_E) U^T]``."""
    rho = np.asarray(rho, dtype=complex)
    env0 = np.zeros((dil.env_dim, dil.env_dim))
    env0[0, 0] = 1.0
    big = dil.u_ae @ np.kron(rho, env0) @ dil.u_ae.T
    return partial_trace(big, dil.dim, dil.env_dim, keep="A")


def is_rng(ch, tol=DEFAULT_TOL):
    """Resource non-generating iff ``J - J^{Gamma_A}`` is symmetric."""
    diff = ch.choi - partial_transpose_a(ch.choi, ch.dim_out, ch.dim_in)
    return is_symmetric(diff, tol)


def is_completely_rng(ch, tol=DEFAULT_TOL):
    """Completely RNG iff the Choi matrix is real.

    The same test decides stochastic RNG and free dilatability, which are
    equivalent to it for this resource theory.
    """
    return is_real(ch.choi, tol)


is_stochastically_rng = is_completely_rng
is_physically_consistent = is_completely_rng


def is_transposition_covariant(ch, tol=DEFAULT_TOL):
    """``E(rho)^T == E(rho^T)`` for every ``rho``, i.e. ``J == J^T``."""
    return is_symmetric(ch.choi, tol)


def is_free_unitary(u, tol=DEFAULT_TOL):
    """Factor ``u = e^{i theta} Q`` with ``Q`` real orthogonal, or return None."""
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        raise DimensionError(f"unitary must be square, got {u.shape}")
    if not is_unitary(u, tol):
        raise NotUnitaryError("matrix is not unitary")
    g = u.T @ u
    pivot = g.flat[np.argmax(np.abs(g))]
    two_theta = np.mod(np.angle(pivot), 2 * np.pi)
    if np.max(np.abs(g - np.exp(1j * two_theta) * np.eye(u.shape[0]))) > tol.atol:
        return None
    theta = float(two_theta / 2)
    q = np.exp(-1j * theta) * u
    if not is_real(q, tol):
        return None
    return FreeUnitaryFactorization(theta, q.real.copy())


def spanning_free_states(d):
    """Free density matrices whose affine span is every real state of dimension d."""
    out = []
    for j in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[j, j] = 1.0
        out.append(e)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, j] = m[k, k] = m[j, k] = m[k, j] = 0.5
            out.append(m)
    return out


def rng_oracle(ch, tol=DEFAULT_TOL):
    """Brute-force RNG test: every spanning free state must map to a free state."""
    return all(is_free_state(apply(ch, s), tol) for s in spanning_free_states(ch.dim_in))


def compose(second, first):
    """Choi matrix of ``second o first``."""
    if first.dim_out != second.dim_in:
        raise DimensionError(f"cannot compose {first.dim_out}-dim output into {second.dim_in}-dim input")
    j1 = first.choi.reshape(first.dim_out, first.dim_in, first.dim_out, first.dim_in)
    j2 = second.choi.reshape(second.dim_out, second.dim_in, second.dim_out, second.dim_in)
    j = np.einsum("bcxy,abzx->aczy", j1, j2)
    n = second.dim_out * first.dim_in
    return Channel(j.reshape(n, n), second.dim_out, first.dim_in)


def mix(weights, channels):
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1) > TP_ATOL:
        raise ImaginarityError("mixing weights must be a probability vector")
    first = channels[0]
    choi = sum(w * c.choi for w, c in zip(weights, channels))
    return Channel(choi, first.dim_out, first.dim_in)


def identity_channel(d):
    v = vec(np.eye(d))
    return Channel(np.outer(v, v), d, d)


def replacement_channel(sigma, dim_in):
    sigma = np.asarray(sigma, dtype=complex)
    return Channel(np.kron(sigma, np.eye(dim_in)), sigma.shape[0], dim_in)


def unitary_channel(u):
    return choi_from_kraus([u])


def rng_witness_channel():
    """Qubit channel that is RNG but not completely RNG: ``I/2 - (Z (x) Y)/4``."""
    return Channel(0.5 * np.eye(4) - 0.25 * np.kron(PAULI_Z, PAULI_Y), 2, 2)


def _normalize_tp(j, dim_out, dim_in, max_iter=200):
    for _ in range(max_iter):
        m = partial_trace(j, dim_out, dim_in, keep="B")
        if np.max(np.abs(m - np.eye(dim_in))) <= 1e-13:
            return j
        w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
        inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
        if np.isrealobj(j):
            inv_sqrt = inv_sqrt.real
        s = np.kron(np.eye(dim_out), inv_sqrt)
        j = s @ j @ s
        j = 0.5 * (j + j.conj().T)
    raise RuntimeError(f"trace-preservation normalization did not converge in {max_iter} iterations")


def sample_real_choi_channel(dim, seed, dim_out=None, rank=None):
    """Random channel with a real Choi matrix (real Ginibre, then TP-normalized)."""
    rng = np.random.default_rng(seed)
    dim_out = dim if dim_out is None else dim_out
    if dim < 2:
        raise DimensionError("sampler needs dim >= 2")
    n = dim_out * dim
    g = rng.standard_normal((n, n if rank is None else rank))
    j = _normalize_tp(g @ g.T, dim_out, dim)
    return Channel(j.astype(complex), dim_out, dim)


def sample_channel(dim, seed, dim_out=None, rank=None):
    """Random channel from a complex Ginibre Choi matrix."""
    rng = np.random.default_rng(seed)
    dim_out = dim if dim_out is None else dim_out
    if dim < 2:
        raise DimensionError("sampler needs dim >= 2")
    n = dim_out * dim
    k = n if rank is None else rank
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    j = _normalize_tp(g @ g.conj().T, dim_out, dim)
    return Channel(j, dim_out, dim)


def sample_rng_channel(dim, seed, terms=2):
    """Random RNG channel whose Choi matrix is generically not real.

    Adds ``i * S`` to a real-Choi channel, where ``S`` is a sum of
    ``A (x) K`` with ``A`` real symmetric traceless and ``K`` real
    antisymmetric; such ``S`` leaves ``J - J^{Gamma_A}`` symmetric and
    ``Tr_A J`` unchanged. The weight is capped to keep ``J`` PSD.
    """
    rng = np.random.default_rng(seed)
    base = sample_real_choi_channel(dim, rng.integers(2**63)).choi.real
    s = np.zeros_like(base)
    for _ in range(terms):
        a = rng.standard_normal((dim, dim))
        a = a + a.T
        a -= np.trace(a) / dim * np.eye(dim)
        k = rng.standard_normal((dim, dim))
        k = k - k.T
        s += np.kron(a, k)
    lam_min = np.linalg.eigvalsh(base)[0]
    spread = np.max(np.abs(np.linalg.eigvalsh(1j * s)))
    eps = rng.uniform(0.2, 0.9) * lam_min / spread
    return Channel(base + 1j * eps * s, dim, dim)
