"""Imaginarity measures: trace distance to the real states and robustness."""
from dataclasses import dataclass

import numpy as np

from ._kernels import kernels
from .core import DEFAULT_TOL, PAULI_Y, DimensionError, trace_norm
from .states import is_free_state, split_real_imag

BISECTION_WIDTH = 1e-8
BISECTION_MAX_ITER = 60


@dataclass(frozen=True)
class MeasureReport:
    value: float
    method: str
    iterations: int = 0


def measure_m(rho):
    """Trace distance to the nearest real state, ``||rho - rho^T||_1 / 2``.

    The minimizer is ``rho_R = (rho + rho^T)/2``, so the value also equals
    ``||rho_I||_1``.
    """
    rho = np.asarray(rho, dtype=complex)
    return MeasureReport(0.5 * trace_norm(rho - rho.T), "trace-distance")


def measure_m_qubit(rho):
    """Closed form for qubits: the magnitude of the Bloch y-component."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionError(f"qubit closed form needs a 2x2 state, got shape {rho.shape}")
    return MeasureReport(abs(float(np.real(np.trace(rho @ PAULI_Y)))), "qubit-closed-form")


def robustness_feasible(imag_norm, s):
    """Whether some state ``pi`` makes ``(s*pi + rho)/(1 + s)`` real.

    ``pi`` needs imaginary part ``-rho_I/s``. The cheapest real part that
    completes an antisymmetric ``B`` to a PSD matrix is ``sqrt(B^T B)``, of
    trace ``||B||_1``; the remaining trace is padded with a multiple of the
    identity. So feasibility reduces to ``||rho_I||_1 <= s``.
    """
    if imag_norm == 0.0:
        return True
    return s > 0 and imag_norm / s <= 1.0


def robustness(rho, tol=DEFAULT_TOL):
    """Robustness of imaginarity by bisection on ``s`` over ``[0, d]``."""
    rho = np.asarray(rho, dtype=complex)
    if is_free_state(rho, tol):
        return MeasureReport(0.0, "robustness-bisection", 0)
    _, rho_i = split_real_imag(rho)
    imag_norm = trace_norm(rho_i)
    lo, hi = 0.0, float(rho.shape[0])
    iterations = 0
    while hi - lo > BISECTION_WIDTH and iterations < BISECTION_MAX_ITER:
        mid = 0.5 * (lo + hi)
        if robustness_feasible(imag_norm, mid):
            hi = mid
        else:
            lo = mid
        iterations += 1
    return MeasureReport(hi, "robustness-bisection", iterations)


def bloch_ball_mesh(shells=100, per_shell=1000):
    """Points of the Bloch ball on concentric Fibonacci spheres.

    On each sphere the y-coordinates are evenly spaced, which keeps the
    achievable Bloch-y values dense (spacing ``2r/per_shell``).
    """
    k = np.arange(per_shell)
    y = 1.0 - (2 * k + 1) / per_shell
    ring = np.sqrt(1.0 - y * y)
    phi = k * np.pi * (3.0 - np.sqrt(5.0))
    unit = np.stack([ring * np.cos(phi), y, ring * np.sin(phi)], axis=1)
    radii = np.arange(1, shells + 1) / shells
    return (radii[:, None, None] * unit[None]).reshape(-1, 3)


def robustness_qubit_grid(rho, mesh=None, mismatch=5e-4, s_max=2.0, width=1e-7):
    """Mesh estimate of the qubit robustness, independent of the closed form.

    For a trial weight ``s`` every mesh point ``pi`` is mixed in as
    ``(s*pi + rho)/(1 + s)`` and the mixture counts as real when its Bloch
    y-component is within ``mismatch``; ``s`` is then bisected.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionError("grid oracle is qubit only")
    if mesh is None:
        mesh = bloch_ball_mesh()
    pi_y = np.ascontiguousarray(mesh[:, 1], dtype=float)
    y = float(np.real(np.trace(rho @ PAULI_Y)))

    def feasible(s):
        return kernels.min_y_mismatch(pi_y, s, y) <= mismatch

    if feasible(0.0):
        return 0.0
    lo, hi = 0.0, s_max
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi
