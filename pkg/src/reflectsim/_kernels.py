"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import time: numba when importable, unless
REFLECTSIM_BACKEND=numpy is set in the environment. Both backends produce
run-to-run deterministic results; the numba kernels additionally fix the
per-output accumulation order (sequential over elements, row-major), so
their output is bit-identical for any thread count.
"""

import math
import os

import numpy as np

# the default TBB layer is version-gated; omp is present and stable here
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

try:
    import numba as nb

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba present in the tested env
    HAS_NUMBA = False

njit_kwargs = {"nogil": True, "fastmath": False, "parallel": True, "cache": True}

USE_NUMBA = HAS_NUMBA and os.environ.get("REFLECTSIM_BACKEND", "").lower() != "numpy"


def active_backend():
    """Name of the kernel backend selected at import: 'numba' or 'numpy'."""
    return "numba" if USE_NUMBA else "numpy"


def set_threads(n):
    """Limit the numba thread pool; ignored on the numpy backend."""
    if USE_NUMBA and n is not None:
        nb.set_num_threads(max(1, int(n)))


# --- direct summation over elements for an arbitrary direction list -------


def pattern_sum_numpy(x, y, w, k, us, vs):
    """sum_i w_i * exp(j*k*(x_i*u + y_i*v)) for each (u, v) sample.

    Chunked over samples to bound the phase-matrix size; the per-sample
    reduction uses numpy's fixed pairwise order.
    """
    out = np.empty(us.shape[0], dtype=np.complex128)
    chunk = max(1, 2_000_000 // max(1, x.shape[0]))
    for s0 in range(0, us.shape[0], chunk):
        sl = slice(s0, min(s0 + chunk, us.shape[0]))
        ph = k * (np.outer(us[sl], x) + np.outer(vs[sl], y))
        out[sl] = (np.exp(1j * ph) * w).sum(axis=1)
    return out


if HAS_NUMBA:

    @nb.njit(**njit_kwargs)
    def _pattern_sum_nb(x, y, wre, wim, k, us, vs):
        ns = us.shape[0]
        ne = x.shape[0]
        out_re = np.empty(ns, dtype=np.float64)
        out_im = np.empty(ns, dtype=np.float64)
        for s in nb.prange(ns):
            ku = k * us[s]
            kv = k * vs[s]
            ar = 0.0
            ai = 0.0
            for e in range(ne):  # fixed order, one thread per sample
                ph = ku * x[e] + kv * y[e]
                c = math.cos(ph)
                si = math.sin(ph)
                ar += wre[e] * c - wim[e] * si
                ai += wre[e] * si + wim[e] * c
            out_re[s] = ar
            out_im[s] = ai
        return out_re, out_im

    def pattern_sum_numba(x, y, w, k, us, vs):
        re, im = _pattern_sum_nb(
            np.ascontiguousarray(x),
            np.ascontiguousarray(y),
            np.ascontiguousarray(w.real),
            np.ascontiguousarray(w.imag),
            k,
            np.ascontiguousarray(us),
            np.ascontiguousarray(vs),
        )
        return re + 1j * im

else:  # pragma: no cover
    pattern_sum_numba = None


# --- separable transform on a (u, v) raster --------------------------------


def mft_numpy(w2d, ax, ay):
    """Factorized raster evaluation E = ax^T (w2d ay).

    ax[p, i] = exp(j*k*x_p*u_i), ay[q, j] = exp(j*k*y_q*v_j); exact on any
    axes, not just transform-compatible ones.
    """
    return ax.T @ (w2d @ ay)


if HAS_NUMBA:

    @nb.njit(**njit_kwargs)
    def _mft_nb(w2d, ax, ay):
        nx, ny = w2d.shape
        nu = ax.shape[1]
        nv = ay.shape[1]
        t = np.empty((nx, nv), dtype=np.complex128)
        for p in nb.prange(nx):
            for j in range(nv):
                acc = 0.0 + 0.0j
                for q in range(ny):
                    acc += w2d[p, q] * ay[q, j]
                t[p, j] = acc
        out = np.empty((nu, nv), dtype=np.complex128)
        for i in nb.prange(nu):
            for j in range(nv):
                acc = 0.0 + 0.0j
                for p in range(nx):
                    acc += ax[p, i] * t[p, j]
                out[i, j] = acc
        return out

    def mft_numba(w2d, ax, ay):
        return _mft_nb(
            np.ascontiguousarray(w2d),
            np.ascontiguousarray(ax),
            np.ascontiguousarray(ay),
        )

else:  # pragma: no cover
    mft_numba = None


pattern_sum = pattern_sum_numba if USE_NUMBA else pattern_sum_numpy
mft = mft_numba if USE_NUMBA else mft_numpy
