"""Pure-Python / numpy versions of the compiled kernels.

Same signatures and results as ``_core``; used when the extension is not
built or when ``PERPSYS_PURE_PYTHON=1`` is set.
"""
import numpy as np


def _inverse_table(p):
    inv = [0] * p
    for x in range(1, p):
        inv[x] = pow(x, p - 2, p)
    return inv


def rref(a, p):
    """Reduced row echelon form of ``a``; returns (nonzero rows, pivots)."""
    arr = np.asarray(a)
    ncols = arr.shape[1] if arr.ndim == 2 else 0
    m = [[int(x) % p for x in row] for row in arr.tolist()]
    inv = _inverse_table(p)
    rows = len(m)
    piv = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        k = next((i for i in range(r, rows) if m[i][c]), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        s = inv[m[r][c]]
        if s != 1:
            m[r] = [x * s % p for x in m[r]]
        pr = m[r]
        for i in range(rows):
            f = m[i][c]
            if i != r and f:
                m[i] = [(x - f * y) % p for x, y in zip(m[i], pr)]
        piv.append(c)
        r += 1
    out = np.array(m[:r], dtype=np.uint8).reshape(r, ncols)
    return out, tuple(piv)


def rank(a, p):
    return len(rref(a, p)[1])


def rref_batch(a, p):
    """Row-reduce a stack of matrices (N, k, n), vectorised over N."""
    m = np.array(a, dtype=np.int64) % p
    if m.ndim != 3:
        raise ValueError("expected a (N, k, n) stack")
    N, k, n = m.shape
    inv = np.array(_inverse_table(p), dtype=np.int64)
    r = np.zeros(N, dtype=np.int64)
    rowpos = np.arange(k)[None, :]
    for c in range(n):
        cand = (m[:, :, c] != 0) & (rowpos >= r[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = np.nonzero(has)[0]
        pr = np.argmax(cand[sel], axis=1)
        rr = r[sel]
        top = m[sel, rr].copy()
        m[sel, rr] = m[sel, pr]
        m[sel, pr] = top
        s = inv[m[sel, rr, c]]
        m[sel, rr] = (m[sel, rr] * s[:, None]) % p
        pivot_rows = m[sel, rr]
        f = m[sel, :, c].copy()
        f[np.arange(len(sel)), rr] = 0
        m[sel] = (m[sel] - f[:, :, None] * pivot_rows[:, None, :]) % p
        r[sel] += 1
    return m.astype(np.uint8), r


def pairs_opposite(bases, grams, p, chunk=256):
    """For each gram, whether every pair (i <= j) of lines has an invertible pairing."""
    B = np.asarray(bases, dtype=np.int64)
    G = np.asarray(grams, dtype=np.int64)
    out = np.empty(len(G), dtype=bool)
    iu = np.triu_indices(len(B))
    for start in range(0, len(G), chunk):
        g = G[start:start + chunk]
        T = np.einsum("lrk,gkc->glrc", B, g) % p
        P = np.einsum("glrc,msc->glmrs", T, B) % p
        det = (P[..., 0, 0] * P[..., 1, 1] - P[..., 0, 1] * P[..., 1, 0]) % p
        out[start:start + chunk] = (det[:, iu[0], iu[1]] != 0).all(axis=1)
    return out


def antiflag_counts(adj, lines):
    """counts[P, L] = number of points of line L adjacent to P; -1 where P is on L."""
    A = np.asarray(adj, dtype=np.uint8)
    Ls = np.asarray(lines, dtype=np.int64)
    counts = A[:, Ls].sum(axis=2, dtype=np.int32)
    on = np.zeros((A.shape[0], len(Ls)), dtype=bool)
    on[Ls, np.arange(len(Ls))[:, None]] = True
    counts[on] = -1
    return counts


def common_neighbours(adj):
    """Matrix of common-neighbour counts of a 0/1 adjacency matrix."""
    A = np.asarray(adj, dtype=np.float64)
    return np.rint(A @ A).astype(np.int32)
