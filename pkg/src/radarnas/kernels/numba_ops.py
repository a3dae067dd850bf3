"""Numba-jitted twins of the hot kernels in numpy_ops.

Same contracts as numpy_ops; loop bodies are written so parallel threads
only ever write disjoint output cells, keeping results deterministic
regardless of thread count.
"""

import os

os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

import numpy as np
from numba import njit, prange


@njit(cache=True, parallel=True)
def conv2d_forward(x, w, b, stride):
    n, h, wid, ci = x.shape
    kh, kw, _, co = w.shape
    oh = (h - kh) // stride + 1
    ow = (wid - kw) // stride + 1
    y = np.empty((n, oh, ow, co), dtype=x.dtype)
    for ni in prange(n):
        for i in range(oh):
            for j in range(ow):
                i0 = i * stride
                j0 = j * stride
                for f in range(co):
                    acc = b[f]
                    for a in range(kh):
                        for c in range(kw):
                            for d in range(ci):
                                acc += x[ni, i0 + a, j0 + c, d] * w[a, c, d, f]
                    y[ni, i, j, f] = acc
    return y


@njit(cache=True, parallel=True)
def conv2d_backward(x, w, dy, stride):
    n, h, wid, ci = x.shape
    kh, kw, _, co = w.shape
    oh = dy.shape[1]
    ow = dy.shape[2]
    dx = np.zeros_like(x)
    dw = np.zeros_like(w)
    db = np.zeros(co, dtype=dy.dtype)
    for ni in prange(n):
        for i in range(oh):
            for j in range(ow):
                i0 = i * stride
                j0 = j * stride
                for f in range(co):
                    g = dy[ni, i, j, f]
                    for a in range(kh):
                        for c in range(kw):
                            for d in range(ci):
                                dx[ni, i0 + a, j0 + c, d] += g * w[a, c, d, f]
    for f in prange(co):
        for ni in range(n):
            for i in range(oh):
                for j in range(ow):
                    g = dy[ni, i, j, f]
                    db[f] += g
                    i0 = i * stride
                    j0 = j * stride
                    for a in range(kh):
                        for c in range(kw):
                            for d in range(ci):
                                dw[a, c, d, f] += x[ni, i0 + a, j0 + c, d] * g
    return dx, dw, db


@njit(cache=True, parallel=True)
def maxpool2d_forward(x, k):
    n, h, w, c = x.shape
    oh = h // k
    ow = w // k
    y = np.empty((n, oh, ow, c), dtype=x.dtype)
    switches = np.empty((n, oh, ow, c), dtype=np.int64)
    for ni in prange(n):
        for i in range(oh):
            for j in range(ow):
                for d in range(c):
                    bi = i * k
                    bj = j * k
                    best = x[ni, bi, bj, d]
                    bw = bi * w + bj
                    for a in range(k):
                        for e in range(k):
                            v = x[ni, bi + a, bj + e, d]
                            if v > best:
                                best = v
                                bw = (bi + a) * w + (bj + e)
                    y[ni, i, j, d] = best
                    switches[ni, i, j, d] = bw
    return y, switches


@njit(cache=True, parallel=True)
def maxpool2d_backward(dy, switches, h, w):
    n, oh, ow, c = dy.shape
    dx = np.zeros((n, h, w, c), dtype=dy.dtype)
    for ni in prange(n):
        for i in range(oh):
            for j in range(ow):
                for d in range(c):
                    flat = switches[ni, i, j, d]
                    dx[ni, flat // w, flat % w, d] += dy[ni, i, j, d]
    return dx


@njit(cache=True, parallel=True)
def cfar_noise_map(power, win, guard, rank_frac):
    nk, nl = power.shape
    noise = np.empty((nk, nl), dtype=np.float64)
    for idx in prange(nk * nl):
        i = idx // nl
        j = idx % nl
        k0 = max(0, i - win)
        k1 = min(nk, i + win + 1)
        g0 = max(0, i - guard)
        g1 = min(nk, i + guard + 1)
        l0 = max(0, j - win)
        l1 = min(nl, j + win + 1)
        h0 = max(0, j - guard)
        h1 = min(nl, j + guard + 1)
        n_train = (k1 - k0) * (l1 - l0) - (g1 - g0) * (h1 - h0)
        buf = np.empty(n_train, dtype=np.float64)
        pos = 0
        for a in range(k0, k1):
            in_guard_row = g0 <= a < g1
            for b in range(l0, l1):
                if in_guard_row and h0 <= b < h1:
                    continue
                buf[pos] = power[a, b]
                pos += 1
        buf.sort()
        r = min(int(rank_frac * n_train), n_train - 1)
        noise[i, j] = buf[r]
    return noise
