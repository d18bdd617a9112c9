"""Hot inner loops, each with a jitted and a pure-numpy implementation.

Both implementations perform the same floating point operations in the same
order where the result feeds a reproducibility contract (the tiled sums), so
the two backends agree bit for bit there.  The operator kernels agree to
rounding only.
"""
import numpy as np

from ._backend import USE_NUMBA, njit

TILE = 64


# ---------------------------------------------------------------- tiled sums

@njit
def _tiled_sum_nb(x):
    n = x.shape[0]
    ntiles = (n + TILE - 1) // TILE
    total = 0.0
    comp = 0.0
    for t in range(ntiles):
        s = 0.0
        c = 0.0
        start = t * TILE
        stop = min(start + TILE, n)
        for k in range(start, stop):
            y = x[k] - c
            u = s + y
            c = (u - s) - y
            s = u
        y = s - comp
        u = total + y
        comp = (u - total) - y
        total = u
    return total


def _tiled_sum_np(x):
    n = x.shape[0]
    ntiles = (n + TILE - 1) // TILE
    padded = np.zeros(ntiles * TILE)
    padded[:n] = x
    tiles = padded.reshape(ntiles, TILE)
    s = np.zeros(ntiles)
    c = np.zeros(ntiles)
    for k in range(TILE):
        y = tiles[:, k] - c
        u = s + y
        c = (u - s) - y
        s = u
    total = 0.0
    comp = 0.0
    for t in range(ntiles):
        y = s[t] - comp
        u = total + y
        comp = (u - total) - y
        total = u
    return float(total)


def tiled_sum(values):
    """Compensated sum over fixed 64-point tiles, reduced in index order.

    Zero padding of the last tile is harmless: adding exact zeros through the
    Kahan update leaves both the sum and the compensation unchanged.
    """
    v = np.ascontiguousarray(values).ravel()
    fn = _tiled_sum_nb if USE_NUMBA else _tiled_sum_np
    if np.iscomplexobj(v):
        return complex(fn(np.ascontiguousarray(v.real)),
                       fn(np.ascontiguousarray(v.imag)))
    return float(fn(np.ascontiguousarray(v, dtype=np.float64)))


# ------------------------------------------------- translation-table operator
#
# A real-translation-invariant Fock operator on a square grid has weighted
# kernel  K(z_i,j ; w_m,l) = e^{i pi x_i om_j} e^{-i pi a_m b_l} G[m - i + n - 1, j, l]
# so that applying it needs only the (2n-1, n, n) table G.

@njit
def _apply_table_nb(table, h_in):
    n, nw = h_in.shape
    out = np.zeros((n, nw), dtype=np.complex128)
    off = n - 1
    for i in range(n):
        for j in range(nw):
            acc = 0j
            for m in range(n):
                d = m - i + off
                for l in range(nw):
                    acc += table[d, j, l] * h_in[m, l]
            out[i, j] = acc
    return out


def _apply_table_np(table, h_in):
    n = h_in.shape[0]
    out = np.empty(h_in.shape, dtype=np.complex128)
    off = n - 1
    for i in range(n):
        block = table[off - i:off - i + n]
        out[i] = np.einsum("mjl,ml->j", block, h_in)
    return out


@njit
def _apply_table_adj_nb(table, h_in):
    n, nw = h_in.shape
    out = np.zeros((n, nw), dtype=np.complex128)
    off = n - 1
    for m in range(n):
        for l in range(nw):
            acc = 0j
            for i in range(n):
                d = m - i + off
                for j in range(nw):
                    t = table[d, j, l]
                    acc += (t.real - 1j * t.imag) * h_in[i, j]
            out[m, l] = acc
    return out


def _apply_table_adj_np(table, h_in):
    n = h_in.shape[0]
    out = np.empty(h_in.shape, dtype=np.complex128)
    off = n - 1
    for m in range(n):
        block = table[m:m + n][::-1]
        out[m] = np.einsum("ijl,ij->l", block.conj(), h_in)
    return out


def apply_table(table, h_in, adjoint=False):
    """Contract a translation table against grid data (see module comment)."""
    table = np.ascontiguousarray(table, dtype=np.complex128)
    h_in = np.ascontiguousarray(h_in, dtype=np.complex128)
    if USE_NUMBA:
        fn = _apply_table_adj_nb if adjoint else _apply_table_nb
    else:
        fn = _apply_table_adj_np if adjoint else _apply_table_np
    return fn(table, h_in)


# ------------------------------------------------------------ laguerre table

@njit
def _laguerre_nb(k, x):
    out = np.empty(x.shape[0])
    for idx in range(x.shape[0]):
        xv = x[idx]
        prev = 1.0
        if k == 0:
            out[idx] = 1.0
            continue
        cur = 1.0 - xv
        for j in range(1, k):
            nxt = ((2 * j + 1 - xv) * cur - j * prev) / (j + 1)
            prev = cur
            cur = nxt
        out[idx] = cur
    return out


def _laguerre_np(k, x):
    prev = np.ones_like(x)
    if k == 0:
        return prev
    cur = 1.0 - x
    for j in range(1, k):
        prev, cur = cur, ((2 * j + 1 - x) * cur - j * prev) / (j + 1)
    return cur


def laguerre_array(k, x):
    """L_k on a float array by the three-term recurrence."""
    x = np.asarray(x, dtype=np.float64)
    flat = np.ascontiguousarray(x.ravel())
    res = _laguerre_nb(int(k), flat) if USE_NUMBA else _laguerre_np(int(k), flat)
    return res.reshape(x.shape)
