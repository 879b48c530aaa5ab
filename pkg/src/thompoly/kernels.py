"""Integer kernels over exponent matrices (one monomial per row).

Two interchangeable backends: numba-compiled loops and plain numpy.
``THOMPOLY_KERNELS=numpy`` forces the fallback; the default uses numba when
it imports.  Both return identical arrays; only speed differs.
"""

import os

import numpy as np

BACKEND_ENV = "THOMPOLY_KERNELS"


def _np_divisible_by_any(gens, points):
    # out[p] = some row of gens divides points[p]
    if gens.shape[0] == 0 or points.shape[0] == 0:
        return np.zeros(points.shape[0], dtype=np.bool_)
    le = gens[None, :, :] <= points[:, None, :]
    return le.all(axis=2).any(axis=1)


def _np_minimal_mask(exps):
    n = exps.shape[0]
    keep = np.ones(n, dtype=np.bool_)
    if n == 0:
        return keep
    le = (exps[:, None, :] <= exps[None, :, :]).all(axis=2)  # le[i, j]: row i divides row j
    eq = le & le.T
    for j in range(n):
        for i in range(n):
            if i != j and le[i, j] and (not eq[i, j] or i < j):
                keep[j] = False
                break
    return keep


def _np_chart_map(exps, chart, cluster):
    out = exps.copy()
    others = [j for j in cluster if j != chart]
    if others:
        out[:, chart] += exps[:, others].sum(axis=1)
    return out


def _np_monomial_chart_map(exps, mono, cluster):
    return exps + np.outer(exps[:, cluster].sum(axis=1), mono)


def _np_column_min(exps):
    if exps.shape[0] == 0:
        return np.zeros(exps.shape[1], dtype=np.int64)
    return exps.min(axis=0)


NUMPY_KERNELS = {
    "divisible_by_any": _np_divisible_by_any,
    "minimal_mask": _np_minimal_mask,
    "chart_map": lambda e, c, cl: _np_chart_map(e, c, list(cl)),
    "monomial_chart_map": lambda e, m, cl: _np_monomial_chart_map(e, np.asarray(m, dtype=np.int64), list(cl)),
    "column_min": _np_column_min,
}


def _build_numba_kernels():
    from numba import njit

    @njit(cache=True)
    def divisible_by_any(gens, points):
        n_p, m = points.shape
        out = np.zeros(n_p, dtype=np.bool_)
        for p in range(n_p):
            for g in range(gens.shape[0]):
                ok = True
                for i in range(m):
                    if gens[g, i] > points[p, i]:
                        ok = False
                        break
                if ok:
                    out[p] = True
                    break
        return out

    @njit(cache=True)
    def minimal_mask(exps):
        n, m = exps.shape
        keep = np.ones(n, dtype=np.bool_)
        for j in range(n):
            for i in range(n):
                if i == j:
                    continue
                divides = True
                equal = True
                for c in range(m):
                    if exps[i, c] > exps[j, c]:
                        divides = False
                        break
                    if exps[i, c] != exps[j, c]:
                        equal = False
                if divides and (not equal or i < j):
                    keep[j] = False
                    break
        return keep

    @njit(cache=True)
    def chart_map(exps, chart, cluster):
        out = exps.copy()
        for r in range(exps.shape[0]):
            s = 0
            for j in cluster:
                if j != chart:
                    s += exps[r, j]
            out[r, chart] += s
        return out

    @njit(cache=True)
    def monomial_chart_map(exps, mono, cluster):
        out = exps.copy()
        for r in range(exps.shape[0]):
            s = 0
            for j in cluster:
                s += exps[r, j]
            if s:
                for c in range(exps.shape[1]):
                    out[r, c] += s * mono[c]
        return out

    @njit(cache=True)
    def column_min(exps):
        n, m = exps.shape
        out = np.zeros(m, dtype=np.int64)
        if n == 0:
            return out
        for c in range(m):
            v = exps[0, c]
            for r in range(1, n):
                if exps[r, c] < v:
                    v = exps[r, c]
            out[c] = v
        return out

    return {
        "divisible_by_any": divisible_by_any,
        "minimal_mask": minimal_mask,
        "chart_map": lambda e, c, cl: chart_map(e, c, np.asarray(list(cl), dtype=np.int64)),
        "monomial_chart_map": lambda e, m, cl: monomial_chart_map(e, np.asarray(m, dtype=np.int64),
                                                                  np.asarray(list(cl), dtype=np.int64)),
        "column_min": column_min,
    }


def _select():
    if os.environ.get(BACKEND_ENV, "").lower() == "numpy":
        return "numpy", NUMPY_KERNELS
    try:
        return "numba", _build_numba_kernels()
    except ImportError:
        return "numpy", NUMPY_KERNELS


BACKEND, _K = _select()


def as_matrix(rows, width):
    if not rows:
        return np.zeros((0, width), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), width)


def divisible_by_any(gens, points):
    return _K["divisible_by_any"](gens, points)


def minimal_mask(exps):
    return _K["minimal_mask"](exps)


def chart_map(exps, chart, cluster):
    """Exponent image of x_j -> x_j * x_chart for j in cluster (chart excluded)."""
    return _K["chart_map"](exps, chart, cluster)


def monomial_chart_map(exps, mono, cluster):
    """Exponent image of x_j -> x_j * m for j in cluster, m given by its exponent vector."""
    return _K["monomial_chart_map"](exps, mono, cluster)


def column_min(exps):
    return _K["column_min"](exps)
