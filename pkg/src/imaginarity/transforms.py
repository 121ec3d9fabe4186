"""Pure-state conversion under free operations.

A pure state ``psi`` converts to ``phi`` iff ``M(psi) >= M(phi)``. The
channel is assembled from free stages: canonicalize ``psi`` to ``|theta>``,
compress onto span{|0>, |1>}, apply a real qubit channel taking ``|theta>``
to ``|theta'>``, embed back and undo the canonicalization of ``phi``.
"""
from dataclasses import dataclass

import numpy as np

from .channels import (
    Channel,
    apply,
    choi_from_kraus,
    compose,
    mix,
    unitary_channel,
)
from .core import DEFAULT_TOL, PAULI_I, PAULIS, DimensionError, ImaginarityError
from .measures import measure_m
from .states import canonical_pure_form, projector, pure_state

EXISTS_SLACK = 1e-12


class NotConvertibleError(ImaginarityError):
    pass


@dataclass(frozen=True)
class AffineMap:
    """Bloch-ball action ``r -> t_mat @ r + t_vec`` of a qubit channel."""

    t_mat: np.ndarray
    t_vec: np.ndarray

    def __call__(self, r):
        return self.t_mat @ np.asarray(r, dtype=float) + self.t_vec


@dataclass(frozen=True, eq=False)
class TransformPlan:
    theta: float
    theta_prime: float
    u_pre: np.ndarray
    qubit_choi: Channel
    u_post: np.ndarray
    compress: list
    embed: list
    affine: AffineMap
    total: Channel


def transform_exists(psi, phi):
    m_src = measure_m(projector(psi)).value
    m_tgt = measure_m(projector(phi)).value
    return m_src >= m_tgt - EXISTS_SLACK


def theorem5_affine(theta, theta_prime):
    """The textbook Bloch map sending ``|theta>`` to ``|theta'>``.

    ``T = diag(1, sin(theta')/sin(theta), 0)``, ``t = (cos(theta') -
    cos(theta), 0, 0)``. It moves the Bloch vector of ``|theta>`` correctly
    but is not a positive map once ``T[0, 0] = 1`` and ``t[0] > 0`` (the
    pole ``(1, 0, 0)`` is pushed outside the ball), so ``synthesize`` uses
    ``qubit_transform_affine`` instead.
    """
    if theta_prime > theta:
        raise ValueError(f"theta' = {theta_prime} exceeds theta = {theta}")
    ratio = np.sin(theta_prime) / np.sin(theta) if np.sin(theta) != 0 else 0.0
    t_mat = np.diag([1.0, ratio, 0.0])
    t_vec = np.array([np.cos(theta_prime) - np.cos(theta), 0.0, 0.0])
    return AffineMap(t_mat, t_vec)


def _qubit_kraus_params(theta, theta_prime):
    # Real Kraus pair written in the basis {|+>, (|1> - |0>)/sqrt 2}, where
    # |theta> ~ cos(theta/2)|+> + i sin(theta/2)|->:
    #   K1 = diag(p, q),  K2 = [[0, mu], [nu, 0]]
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    cp, sp = np.cos(theta_prime / 2), np.sin(theta_prime / 2)
    kappa = (sp * c) / (s * cp)
    p2 = cp**2 * (c**2 * cp**2 - s**2 * sp**2) / (c**2 * (cp**2 - sp**2))
    p2 = min(max(p2, 0.0), 1.0)
    p = np.sqrt(p2)
    q = p * kappa
    mu = np.sqrt(max(1.0 - q * q, 0.0))
    nu = -np.sqrt(max(1.0 - p2, 0.0))
    return p, q, mu, nu


def qubit_transform_affine(theta, theta_prime):
    """Bloch map of a real-Choi qubit channel with ``|theta> -> |theta'>``.

    Requires ``0 <= theta' <= theta <= pi/2``. Equal angles give the
    identity map.
    """
    if theta_prime > theta:
        raise ValueError(f"theta' = {theta_prime} exceeds theta = {theta}")
    if theta < 0 or theta > np.pi / 2 + 1e-12 or theta_prime < 0:
        raise ValueError("angles must lie in [0, pi/2]")
    if theta - theta_prime <= 1e-15:
        return AffineMap(np.eye(3), np.zeros(3))
    p, q, mu, nu = _qubit_kraus_params(theta, theta_prime)
    t_mat = np.diag([0.5 * (p * p + q * q - mu * mu - nu * nu), p * q - mu * nu, p * q + mu * nu])
    t_vec = np.array([0.5 * (p * p - q * q + mu * mu - nu * nu), 0.0, 0.0])
    return AffineMap(t_mat, t_vec)


def bloch_affine_to_choi(am):
    """Qubit channel ``E(X) = (Tr X (I + t.sigma) + sum_kl T_lk Tr(X sigma_k) sigma_l)/2``.

    Raises ``NotCPTPError`` when the affine map is not completely positive.
    """
    t_mat = np.asarray(am.t_mat, dtype=float)
    t_vec = np.asarray(am.t_vec, dtype=float)
    offset = PAULI_I + sum(t_vec[i] * PAULIS[i] for i in range(3))
    choi = np.zeros((4, 4), dtype=complex)
    for j in range(2):
        for k in range(2):
            unit = np.zeros((2, 2))
            unit[j, k] = 1.0
            out = (1.0 if j == k else 0.0) * offset
            for kk in range(3):
                weight = PAULIS[kk][k, j]  # Tr(|j><k| sigma_kk)
                if weight == 0:
                    continue
                for ll in range(3):
                    out = out + t_mat[ll, kk] * weight * PAULIS[ll]
            choi += np.kron(0.5 * out, unit)
    return Channel(choi, 2, 2)


def affine_of_qubit_channel(ch):
    """Recover ``(T, t)`` from a qubit channel: ``t_i = Tr(s_i E(I))/2``, ``T_ij = Tr(s_i E(s_j))/2``."""
    if (ch.dim_out, ch.dim_in) != (2, 2):
        raise DimensionError("affine form is defined for qubit channels")
    t_vec = np.array([0.5 * np.trace(p @ apply(ch, PAULI_I)).real for p in PAULIS])
    t_mat = np.array([[0.5 * np.trace(pi @ apply(ch, pj)).real for pj in PAULIS] for pi in PAULIS])
    return AffineMap(t_mat, t_vec)


def compression_kraus(d):
    """Real Kraus set ``d -> 2``: keep span{|0>,|1>}, send every other |j> to |0>."""
    keep = np.zeros((2, d))
    keep[0, 0] = keep[1, 1] = 1.0
    out = [keep]
    for j in range(2, d):
        k = np.zeros((2, d))
        k[0, j] = 1.0
        out.append(k)
    return out


def embedding_kraus(d):
    v = np.zeros((d, 2))
    v[0, 0] = v[1, 1] = 1.0
    return [v]


def fidelity(ch, psi, phi):
    """``<phi| E(|psi><psi|) |phi>``."""
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    return float(np.real(phi.conj() @ ch(projector(psi)) @ phi))


def synthesize(psi, phi, tol=DEFAULT_TOL):
    """Build a free channel taking ``|psi><psi|`` to ``|phi><phi|``.

    The dimensions of ``psi`` and ``phi`` may differ (both at least 2).
    Raises ``NotConvertibleError`` when ``M(psi) < M(phi)``.
    """
    psi = pure_state(psi, tol)
    phi = pure_state(phi, tol)
    if psi.size < 2 or phi.size < 2:
        raise DimensionError("synthesis needs states of dimension >= 2")
    if not transform_exists(psi, phi):
        raise NotConvertibleError("not convertible: M(source) < M(target)")
    src = canonical_pure_form(psi, tol)
    tgt = canonical_pure_form(phi, tol)
    theta, theta_prime = src.theta, min(tgt.theta, src.theta)
    affine = qubit_transform_affine(theta, theta_prime)
    qubit = bloch_affine_to_choi(affine)
    compress = compression_kraus(psi.size)
    embed = embedding_kraus(phi.size)
    # the global phases of the free unitaries drop out of the channels
    stages = [
        unitary_channel(src.q),
        choi_from_kraus(compress),
        qubit,
        choi_from_kraus(embed),
        unitary_channel(tgt.q.T),
    ]
    total = stages[0]
    for stage in stages[1:]:
        total = compose(stage, total)
    return TransformPlan(
        theta=theta,
        theta_prime=theta_prime,
        u_pre=src.u_free,
        qubit_choi=qubit,
        u_post=tgt.u_free.conj().T,
        compress=compress,
        embed=embed,
        affine=affine,
        total=total,
    )


def synthesize_to_mixed(psi, ensemble, tol=DEFAULT_TOL):
    """Free channel taking ``psi`` to ``sum_j p_j |phi_j><phi_j|``.

    ``ensemble`` is a sequence of ``(p_j, phi_j)``; each branch must be
    convertible and all targets share one dimension.
    """
    if not ensemble:
        raise ValueError("empty ensemble")
    probs = np.array([p for p, _ in ensemble], dtype=float)
    if np.any(probs < 0) or abs(probs.sum() - 1) > tol.atol:
        raise ValueError(f"probabilities must be non-negative and sum to 1, got {probs.sum():.12g}")
    dims = {np.asarray(phi).size for _, phi in ensemble}
    if len(dims) != 1:
        raise DimensionError("ensemble targets must share one dimension")
    totals = [synthesize(psi, phi, tol).total for _, phi in ensemble]
    probs = probs / probs.sum()
    return mix(probs, totals)
