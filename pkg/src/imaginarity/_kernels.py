"""Inner loops shared by the predicates, the sweeps and the grid oracle.

Two implementations are kept side by side: plain numpy (``numpy_kernels``)
and numba ``@njit`` loops (``numba_kernels``, ``None`` when numba is not
importable). ``kernels`` is the one the rest of the package calls. Set
``IMAGINARITY_DISABLE_NUMBA=1`` to force the numpy path.
"""
import os
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None


def _flag_set(name):
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


# --- numpy ---------------------------------------------------------------

def _np_partial_transpose_a(m, dim_a, dim_b):
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    return np.ascontiguousarray(t.transpose(2, 1, 0, 3)).reshape(dim_a * dim_b, dim_a * dim_b)


def _np_apply_choi(choi, rho, dim_out, dim_in):
    j = choi.reshape(dim_out, dim_in, dim_out, dim_in)
    return np.einsum("abcd,bd->ac", j, rho)


def _np_apply_choi_batch(chois, rhos, dim_out, dim_in):
    j = chois.reshape(-1, dim_out, dim_in, dim_out, dim_in)
    return np.einsum("nabcd,nbd->nac", j, rhos)


def _np_min_y_mismatch(pi_y, s, y):
    return float(np.min(np.abs(s * pi_y + y))) / (1.0 + s)


numpy_kernels = SimpleNamespace(
    name="numpy",
    partial_transpose_a=_np_partial_transpose_a,
    apply_choi=_np_apply_choi,
    apply_choi_batch=_np_apply_choi_batch,
    min_y_mismatch=_np_min_y_mismatch,
)


# --- numba ---------------------------------------------------------------

def _build_numba_kernels():
    njit = numba.njit(cache=True, fastmath=False)

    @njit
    def partial_transpose_a(m, dim_a, dim_b):
        n = dim_a * dim_b
        out = np.empty((n, n), dtype=m.dtype)
        for a in range(dim_a):
            for b in range(dim_b):
                for a2 in range(dim_a):
                    for b2 in range(dim_b):
                        out[a * dim_b + b, a2 * dim_b + b2] = m[a2 * dim_b + b, a * dim_b + b2]
        return out

    @njit
    def apply_choi(choi, rho, dim_out, dim_in):
        out = np.zeros((dim_out, dim_out), dtype=np.complex128)
        for a in range(dim_out):
            for a2 in range(dim_out):
                acc = 0j
                for b in range(dim_in):
                    row = a * dim_in + b
                    for b2 in range(dim_in):
                        acc += choi[row, a2 * dim_in + b2] * rho[b, b2]
                out[a, a2] = acc
        return out

    @njit
    def apply_choi_batch(chois, rhos, dim_out, dim_in):
        count = chois.shape[0]
        out = np.zeros((count, dim_out, dim_out), dtype=np.complex128)
        for n in range(count):
            for a in range(dim_out):
                for a2 in range(dim_out):
                    acc = 0j
                    for b in range(dim_in):
                        row = a * dim_in + b
                        for b2 in range(dim_in):
                            acc += chois[n, row, a2 * dim_in + b2] * rhos[n, b, b2]
                    out[n, a, a2] = acc
        return out

    @njit
    def min_y_mismatch(pi_y, s, y):
        best = np.inf
        for k in range(pi_y.shape[0]):
            v = abs(s * pi_y[k] + y)
            if v < best:
                best = v
        return best / (1.0 + s)

    return SimpleNamespace(
        name="numba",
        partial_transpose_a=partial_transpose_a,
        apply_choi=apply_choi,
        apply_choi_batch=apply_choi_batch,
        min_y_mismatch=min_y_mismatch,
    )


numba_kernels = _build_numba_kernels() if numba is not None else None

USE_NUMBA = numba_kernels is not None and not _flag_set("IMAGINARITY_DISABLE_NUMBA")
kernels = numba_kernels if USE_NUMBA else numpy_kernels
