"""Independent numeric oracles shared by the unit and acceptance tests.

Nothing here reuses the library's transform paths: peaks come from a
bracketing search plus parabolic refinement, the reference CWT is a
direct O(N^2) DFT evaluation, and smoothing is a literal double loop.
"""

import numpy as np


def _parabolic_vertex(fn, w0, h):
    values = fn(w0 - h), fn(w0), fn(w0 + h)
    if min(values) <= 0.0:
        return w0
    lm, l0, lp = (np.log(v) for v in values)
    denom = lm - 2.0 * l0 + lp
    if denom >= 0.0:
        return w0
    return w0 + 0.5 * h * (lm - lp) / denom


def numeric_peak(fn, lo, hi):
    """Argmax of a smooth positive unimodal function to ~1e-10 absolute.

    A dense geometric pre-scan brackets the peak (very narrow peaks
    underflow to zero over most of a wide interval, which strands plain
    golden section), golden section tightens the bracket, and two
    parabolic fits of log fn at spacings h and 2h are Richardson-combined
    to cancel the h^2 vertex bias.
    """
    grid = np.geomspace(lo, hi, 4096)
    coarse = int(np.argmax([fn(g) for g in grid]))
    a = grid[max(0, coarse - 2)]
    b = grid[min(grid.size - 1, coarse + 2)]
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    while b - a > 1e-6:
        if fn(c) > fn(d):
            b = d
        else:
            a = c
        c = b - inv_phi * (b - a)
        d = a + inv_phi * (b - a)
    w0 = 0.5 * (a + b)
    h = 1e-4 * max(1.0, w0)
    v1 = _parabolic_vertex(fn, w0, h)
    v2 = _parabolic_vertex(fn, w0, 2.0 * h)
    return (4.0 * v1 - v2) / 3.0


def direct_dft_wavelets(filters):
    """Time-domain wavelets via an explicit inverse-DFT matrix product."""
    n = filters.shape[1]
    k = np.arange(n)
    basis = np.exp(2j * np.pi * np.outer(k, k) / n)
    return (filters @ basis.T) / n


def direct_cwt(x, filters):
    """O(N^2) circular correlation with the conjugate wavelets."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.size
    psi = direct_dft_wavelets(filters)
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n  # (m, t)
    out = np.empty((filters.shape[0], n), dtype=np.complex128)
    for j in range(filters.shape[0]):
        out[j] = x @ np.conj(psi[j][idx])
    return out


def brute_force_smooth(mat, time_widths, scale_width):
    """Literal double-loop boxcar smoothing: periodic along time, then a
    truncated renormalized boxcar across scales."""
    m, n = mat.shape
    stage1 = np.zeros_like(mat)
    for j in range(m):
        w = int(time_widths[j])
        lo = (w - 1) // 2
        for t in range(n):
            acc = mat[j, 0] * 0
            for off in range(-lo, w - lo):
                acc += mat[j, (t + off) % n]
            stage1[j, t] = acc / w
    out = np.zeros_like(mat)
    w = int(scale_width)
    lo = (w - 1) // 2
    hi = w // 2
    for j in range(m):
        a, b = max(0, j - lo), min(m, j + hi + 1)
        for t in range(n):
            acc = mat[0, 0] * 0
            for kk in range(a, b):
                acc += stage1[kk, t]
            out[j, t] = acc / (b - a)
    return out
