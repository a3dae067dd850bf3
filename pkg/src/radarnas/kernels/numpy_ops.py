"""Pure-numpy reference implementations of the hot kernels.

These are the fallback path when numba is unavailable or disabled via
RADARNAS_NUMBA=0, and the reference the jitted twins are tested against.
"""

import numpy as np


def conv2d_forward(x, w, b, stride):
    """Valid 2D convolution, channels last.

    x: (N, H, W, Ci), w: (kh, kw, Ci, Co), b: (Co,) -> (N, OH, OW, Co)
    """
    n, h, wid, _ = x.shape
    kh, kw, _, co = w.shape
    oh = (h - kh) // stride + 1
    ow = (wid - kw) // stride + 1
    y = np.zeros((n, oh, ow, co), dtype=x.dtype)
    for a in range(kh):
        for c in range(kw):
            xs = x[:, a : a + oh * stride : stride, c : c + ow * stride : stride, :]
            y += np.tensordot(xs, w[a, c], axes=(3, 0))
    y += b
    return y


def conv2d_backward(x, w, dy, stride):
    """Gradients of conv2d_forward. Returns (dx, dw, db)."""
    n, h, wid, ci = x.shape
    kh, kw, _, co = w.shape
    _, oh, ow, _ = dy.shape
    dx = np.zeros_like(x)
    dw = np.zeros_like(w)
    for a in range(kh):
        for c in range(kw):
            xs = x[:, a : a + oh * stride : stride, c : c + ow * stride : stride, :]
            dw[a, c] = np.tensordot(xs, dy, axes=((0, 1, 2), (0, 1, 2)))
            # strided writes within one (a, c) never alias
            dx[:, a : a + oh * stride : stride, c : c + ow * stride : stride, :] += np.tensordot(
                dy, w[a, c], axes=(3, 1)
            )
    db = dy.sum(axis=(0, 1, 2))
    return dx, dw, db


def maxpool2d_forward(x, k):
    """Non-overlapping k x k max pooling (remainder rows/cols dropped).

    Returns (y, switches) where switches holds the flat H*W index of each
    selected input cell, for routing gradients back.
    """
    n, h, w, c = x.shape
    oh, ow = h // k, w // k
    xw = x[:, : oh * k, : ow * k, :].reshape(n, oh, k, ow, k, c)
    xw = xw.transpose(0, 1, 3, 5, 2, 4).reshape(n, oh, ow, c, k * k)
    flat_arg = xw.argmax(axis=4)
    y = np.take_along_axis(xw, flat_arg[..., None], axis=4)[..., 0]
    ii = flat_arg // k
    jj = flat_arg % k
    rows = ii + np.arange(oh)[None, :, None, None] * k
    cols = jj + np.arange(ow)[None, None, :, None] * k
    switches = (rows * w + cols).astype(np.int64)
    return y, switches


def maxpool2d_backward(dy, switches, h, w):
    """Scatter pooled gradients back to the input grid."""
    n, oh, ow, c = dy.shape
    dx = np.zeros((n, h * w, c), dtype=dy.dtype)
    ns = np.arange(n)[:, None, None, None]
    cs = np.arange(c)[None, None, None, :]
    np.add.at(dx, (ns, switches, cs), dy)
    return dx.reshape(n, h, w, c)


def cfar_noise_map(power, win, guard, rank_frac):
    """Ordered-statistic noise estimate per cell of a 2D power map.

    The training set for cell (i, j) is the (2*win+1)^2 square around it,
    clamped at the map borders, minus the (2*guard+1)^2 guard square. The
    estimate is the order statistic at index int(rank_frac * n) of the
    ascending-sorted training cells.
    """
    nk, nl = power.shape
    noise = np.empty((nk, nl), dtype=np.float64)
    p = power.astype(np.float64, copy=False)
    for i in range(nk):
        k0, k1 = max(0, i - win), min(nk, i + win + 1)
        g0, g1 = max(0, i - guard), min(nk, i + guard + 1)
        for j in range(nl):
            l0, l1 = max(0, j - win), min(nl, j + win + 1)
            h0, h1 = max(0, j - guard), min(nl, j + guard + 1)
            block = p[k0:k1, l0:l1]
            n_train = block.size - (g1 - g0) * (h1 - h0)
            buf = np.empty(n_train, dtype=np.float64)
            pos = 0
            for a in range(k0, k1):
                row = p[a]
                if g0 <= a < g1:
                    if h0 > l0:
                        buf[pos : pos + h0 - l0] = row[l0:h0]
                        pos += h0 - l0
                    if l1 > h1:
                        buf[pos : pos + l1 - h1] = row[h1:l1]
                        pos += l1 - h1
                else:
                    buf[pos : pos + l1 - l0] = row[l0:l1]
                    pos += l1 - l0
            buf.sort()
            r = min(int(rank_frac * n_train), n_train - 1)
            noise[i, j] = buf[r]
    return noise
