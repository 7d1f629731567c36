"""Hot inner loops.

Each kernel has a numba version and a numpy version with the same
signature; the public names are bound to one or the other according to
``holoperc._accel.USE_NUMBA``. Both are always importable so the
benchmark and the tests can compare them.

State sets are uint64 bitmasks (bit ``i`` is state index ``i``), so the
mask kernels cover state sets of up to 64 states, i.e. n <= 6 nodes.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

MAX_MASK_STATES = 64


# ---------------------------------------------------------------------------
# local update rule over every state


@njit
def _step_table_nb(nbr, deg, k1, k2, deactivate):
    n = nbr.shape[0]
    size = 1 << n
    out = np.empty(size, dtype=np.int64)
    for idx in range(size):
        res = 0
        for i in range(n):
            bit = n - 1 - i
            active = 0
            for j in range(n):
                if nbr[i, j]:
                    active += (idx >> (n - 1 - j)) & 1
            if (idx >> bit) & 1:
                if deactivate and active <= deg[i] - k2:
                    pass
                else:
                    res |= 1 << bit
            elif active >= k1:
                res |= 1 << bit
        out[idx] = res
    return out


def _step_table_np(nbr, deg, k1, k2, deactivate):
    n = nbr.shape[0]
    idx = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    bits = (idx[:, None] >> shifts[None, :]) & 1          # (states, n), node 1 first
    active = bits @ nbr.T.astype(np.int64)                # active neighbour counts
    turn_on = (bits == 0) & (active >= k1)
    stay_on = bits == 1
    if deactivate:
        stay_on = stay_on & (active > deg[None, :] - k2)
    new = (turn_on | stay_on).astype(np.int64)
    return new @ (np.int64(1) << shifts)


# ---------------------------------------------------------------------------
# images of state-set bitmasks


@njit
def _mask_images_nb(masks, tables):
    m = masks.shape[0]
    g = tables.shape[0]
    size = tables.shape[1]
    out = np.zeros((m, g), dtype=np.uint64)
    one = np.uint64(1)
    for a in range(m):
        mask = masks[a]
        for x in range(size):
            if (mask >> np.uint64(x)) & one:
                for b in range(g):
                    out[a, b] |= one << np.uint64(tables[b, x])
    return out


def _mask_images_np(masks, tables):
    size = tables.shape[1]
    pos = np.arange(size, dtype=np.uint64)
    member = ((masks[:, None] >> pos[None, :]) & np.uint64(1)).astype(bool)   # (m, size)
    img_bits = np.uint64(1) << tables.astype(np.uint64)                         # (g, size)
    out = np.zeros((masks.shape[0], tables.shape[0]), dtype=np.uint64)
    for x in range(size):
        sel = member[:, x]
        if sel.any():
            out[sel] |= img_bits[:, x][None, :]
    return out


# ---------------------------------------------------------------------------
# reachability in a functional multigraph (succ[i, g] = target of edge g)


@njit
def _reachability_nb(succ):
    m = succ.shape[0]
    g = succ.shape[1]
    reach = np.zeros((m, m), dtype=np.bool_)
    stack = np.empty(m, dtype=np.int64)
    for src in range(m):
        top = 0
        stack[top] = src
        top += 1
        reach[src, src] = True
        while top > 0:
            top -= 1
            v = stack[top]
            for b in range(g):
                w = succ[v, b]
                if not reach[src, w]:
                    reach[src, w] = True
                    stack[top] = w
                    top += 1
    return reach


def _reachability_np(succ):
    m = succ.shape[0]
    reach = np.zeros((m, m), dtype=bool)
    for src in range(m):
        row = reach[src]
        row[src] = True
        frontier = np.array([src])
        while frontier.size:
            nxt = np.unique(succ[frontier].ravel())
            nxt = nxt[~row[nxt]]
            row[nxt] = True
            frontier = nxt
    return reach


# ---------------------------------------------------------------------------
# subduction: leq[q, p] = exists r reachable from q with p subset of r


@njit
def _subduction_nb(masks, reach):
    m = masks.shape[0]
    leq = np.zeros((m, m), dtype=np.bool_)
    for q in range(m):
        for r in range(m):
            if reach[q, r]:
                cover = masks[r]
                for p in range(m):
                    if not leq[q, p] and (masks[p] & ~cover) == 0:
                        leq[q, p] = True
    return leq


def _subduction_np(masks, reach):
    contained = (masks[:, None] & ~masks[None, :]) == 0   # contained[p, r]: p subset of r
    # float32 routes the product through BLAS; counts stay far below 2**24.
    return (reach.astype(np.float32) @ contained.T.astype(np.float32)) > 0


if USE_NUMBA:
    step_table = _step_table_nb
    mask_images = _mask_images_nb
    reachability = _reachability_nb
else:
    step_table = _step_table_np
    mask_images = _mask_images_np
    reachability = _reachability_np
# the BLAS product beats the compiled triple loop at every size seen (benchmarks/)
subduction_matrix = _subduction_np

NUMBA_KERNELS = {
    "step_table": _step_table_nb,
    "mask_images": _mask_images_nb,
    "reachability": _reachability_nb,
    "subduction_matrix": _subduction_nb,
}
NUMPY_KERNELS = {
    "step_table": _step_table_np,
    "mask_images": _mask_images_np,
    "reachability": _reachability_np,
    "subduction_matrix": _subduction_np,
}
