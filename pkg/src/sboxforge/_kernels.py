"""JIT-compiled inner loops for bijection repair and coefficient search.

Everything here operates on raw numpy arrays; the public API and all
object-level contracts live in :mod:`sboxforge.construct`.  The kernels keep
the differential table, per-row maxima, and the Walsh spectrum incrementally
up to date, so a full candidate evaluation costs far less than recomputing
either table from scratch.  All arithmetic is integer, so results are
bit-identical across runs and worker layouts.

Import of this module triggers numba compilation on first use (cached on
disk afterwards); modules that do not need the search path must not import
it at module level.
"""

from __future__ import annotations

import numpy as np
from numba import njit


def _sign_table() -> np.ndarray:
    p = np.arange(1 << 16, dtype=np.uint32)
    p ^= p >> 8
    p ^= p >> 4
    p ^= p >> 2
    p ^= p >> 1
    return (1 - 2 * (p & 1)).astype(np.int32)


#: SIGN[v] = (-1)^popcount_parity(v), v < 2^16
SIGN = _sign_table()


@njit(cache=True)
def ddt_fill(f, out):
    """Dense DDT of table f into out (both sized (N, N))."""
    size = f.shape[0]
    out[:] = 0
    out[0, 0] = size
    for a in range(1, size):
        for x in range(size):
            out[a, f[x] ^ f[x ^ a]] += 1


@njit(cache=True)
def walsh_fill(f, sign, out):
    """Walsh spectrum of table f into out: out[b] = FWHT of (-1)^(b.f(x))."""
    size = f.shape[0]
    for b in range(size):
        for x in range(size):
            out[b, x] = sign[b & f[x]]
        h = 1
        while h < size:
            for i in range(0, size, h * 2):
                for j in range(i, i + h):
                    u = out[b, j]
                    v = out[b, j + h]
                    out[b, j] = u + v
                    out[b, j + h] = u - v
            h *= 2


@njit(cache=True)
def _row_maxes(ddt, rowmax):
    size = ddt.shape[0]
    for a in range(1, size):
        m = 0
        for b in range(size):
            if ddt[a, b] > m:
                m = ddt[a, b]
        rowmax[a] = m


@njit(cache=True)
def _max_abs_nontrivial(w):
    size = w.shape[0]
    m = 0
    for b in range(1, size):
        for a in range(size):
            v = w[b, a]
            if v < 0:
                v = -v
            if v > m:
                m = v
    return m


@njit(cache=True)
def greedy_repair(f, excess, missing, sign, refresh_every):
    """Deterministic greedy bijection repair, in place on f.

    Walks the surplus preimages in ascending input order and gives each the
    still-unused output value minimizing (resulting max DDT entry, then the
    estimated max |Walsh| after the assignment, then the value itself).  The
    DDT and its row maxima are maintained incrementally and stay exact; the
    Walsh estimate is a rank-one delta against a cached spectrum that is
    fully recomputed every `refresh_every` assignments.

    Returns (chosen outputs per excess input, exact final du, exact final nl).
    """
    size = f.shape[0]
    ddt = np.zeros((size, size), dtype=np.int32)
    ddt_fill(f, ddt)
    rowmax = np.zeros(size, dtype=np.int32)
    _row_maxes(ddt, rowmax)
    walsh = np.empty((size, size), dtype=np.int32)
    walsh_fill(f, sign, walsh)

    n_excess = excess.shape[0]
    miss = missing.copy()
    n_miss = miss.shape[0]
    chosen = np.empty(n_excess, dtype=np.int64)
    fxa = np.empty(size, dtype=np.int64)
    costs = np.empty(n_miss, dtype=np.int32)
    row_hi = np.empty(size, dtype=np.int32)
    row_lo = np.empty(size, dtype=np.int32)
    since_refresh = 0

    for idx in range(n_excess):
        x = excess[idx]
        u = f[x]
        for a in range(size):
            fxa[a] = f[x ^ a]

        # lift x's current contribution out of the DDT
        for a in range(1, size):
            b_old = u ^ fxa[a]
            val = ddt[a, b_old] - 2
            ddt[a, b_old] = val
            if val + 2 == rowmax[a]:
                m = 0
                for b in range(size):
                    if ddt[a, b] > m:
                        m = ddt[a, b]
                rowmax[a] = m
        base_max = 0
        for a in range(1, size):
            if rowmax[a] > base_max:
                base_max = rowmax[a]

        if since_refresh >= refresh_every:
            walsh_fill(f, sign, walsh)
            since_refresh = 0

        # primary cost: max DDT entry after the tentative assignment
        best_cost = 1 << 30
        for j in range(n_miss):
            v = miss[j]
            peak = 0
            for a in range(1, size):
                e = ddt[a, v ^ fxa[a]]
                if e > peak:
                    peak = e
            peak += 2
            c = peak if peak > base_max else base_max
            costs[j] = c
            if c < best_cost:
                best_cost = c

        pick = -1
        n_tied = 0
        for j in range(n_miss):
            if costs[j] == best_cost:
                n_tied += 1
                if pick < 0:
                    pick = j

        if n_tied > 1:
            # tiebreak on the Walsh peak estimate; only now pay for the
            # per-row stats of W'[b, a] = W[b, a] * (-1)^(a.x)
            for b in range(1, size):
                hi = -(1 << 30)
                lo = 1 << 30
                for a in range(size):
                    w = walsh[b, a] * sign[a & x]
                    if w > hi:
                        hi = w
                    if w < lo:
                        lo = w
                row_hi[b] = hi
                row_lo[b] = lo
            best_abs = 1 << 30
            for j in range(n_miss):
                if costs[j] != best_cost:
                    continue
                v = miss[j]
                max_abs = 0
                for b in range(1, size):
                    tb = sign[b & v] - sign[b & u]
                    hi = row_hi[b] + tb
                    lo = -(row_lo[b] + tb)
                    m2 = hi if hi > lo else lo
                    if m2 > max_abs:
                        max_abs = m2
                if max_abs < best_abs:
                    best_abs = max_abs
                    pick = j

        v = miss[pick]
        for j in range(pick, n_miss - 1):
            miss[j] = miss[j + 1]
        n_miss -= 1
        f[x] = v
        for a in range(1, size):
            b_new = v ^ fxa[a]
            val = ddt[a, b_new] + 2
            ddt[a, b_new] = val
            if val > rowmax[a]:
                rowmax[a] = val
        since_refresh += 1
        chosen[idx] = v

    du = 0
    for a in range(1, size):
        if rowmax[a] > du:
            du = rowmax[a]
    walsh_fill(f, sign, walsh)
    nl = size // 2 - _max_abs_nontrivial(walsh) // 2
    return chosen, du, nl


@njit(cache=True, inline="always")
def _ddt_shift(ddt, rowmax, log_a, log_b, log_d, cnt, a, b, delta):
    val = ddt[a, b] + delta
    ddt[a, b] = val
    log_a[cnt] = a
    log_b[cnt] = b
    log_d[cnt] = delta
    if delta > 0:
        if val > rowmax[a]:
            rowmax[a] = val
    elif val + 2 == rowmax[a]:
        m = 0
        for bb in range(ddt.shape[1]):
            if ddt[a, bb] > m:
                m = ddt[a, bb]
        rowmax[a] = m
    return cnt + 1


@njit(cache=True)
def hill_climb(f, inputs, vals, props_j, props_k, sign):
    """Seeded hill climb over assignment swaps, in place on f and vals.

    inputs/vals hold the reassigned inputs and their current outputs.  Each
    proposal swaps the outputs of two reassigned inputs and is accepted only
    if the exact (du, -nl) pair strictly improves.  The DDT (with row
    maxima) and the Walsh spectrum are maintained exactly: rejected
    proposals are rolled back from an undo log, accepted ones fold a rank-one
    sign flip into the spectrum.

    Returns (du, nl, accepted proposal count); du/nl are exact.
    """
    size = f.shape[0]
    ddt = np.zeros((size, size), dtype=np.int32)
    ddt_fill(f, ddt)
    rowmax = np.zeros(size, dtype=np.int32)
    _row_maxes(ddt, rowmax)
    walsh = np.empty((size, size), dtype=np.int32)
    walsh_fill(f, sign, walsh)
    wabs = np.zeros(size, dtype=np.int32)
    for b in range(1, size):
        m = 0
        for a in range(size):
            w = walsh[b, a]
            if w < 0:
                w = -w
            if w > m:
                m = w
        wabs[b] = m

    du = 0
    for a in range(1, size):
        if rowmax[a] > du:
            du = rowmax[a]
    max_abs = 0
    for b in range(1, size):
        if wabs[b] > max_abs:
            max_abs = wabs[b]
    nl = size // 2 - max_abs // 2

    rm_save = np.empty(size, dtype=np.int32)
    log_a = np.empty(4 * size, dtype=np.int64)
    log_b = np.empty(4 * size, dtype=np.int64)
    log_d = np.empty(4 * size, dtype=np.int32)
    accepted = 0

    for t in range(props_j.shape[0]):
        j = props_j[t]
        k = props_k[t]
        if j == k:
            continue
        xj = inputs[j]
        xk = inputs[k]
        vj = vals[j]
        vk = vals[k]
        r = xj ^ xk
        for a in range(size):
            rm_save[a] = rowmax[a]
        cnt = 0
        for a in range(1, size):
            if a == r:
                # the (xj, xk) pair keeps its mutual difference under a swap
                continue
            y1 = f[xj ^ a]
            y2 = f[xk ^ a]
            cnt = _ddt_shift(ddt, rowmax, log_a, log_b, log_d, cnt, a, vj ^ y1, -2)
            cnt = _ddt_shift(ddt, rowmax, log_a, log_b, log_d, cnt, a, vk ^ y1, 2)
            cnt = _ddt_shift(ddt, rowmax, log_a, log_b, log_d, cnt, a, vk ^ y2, -2)
            cnt = _ddt_shift(ddt, rowmax, log_a, log_b, log_d, cnt, a, vj ^ y2, 2)
        du_after = 0
        for a in range(1, size):
            if rowmax[a] > du_after:
                du_after = rowmax[a]

        improved = du_after < du
        nl_after = -1
        if not improved and du_after == du:
            m = 0
            for b in range(1, size):
                tb = sign[b & vk] - sign[b & vj]
                if tb == 0:
                    if wabs[b] > m:
                        m = wabs[b]
                else:
                    for a in range(size):
                        ds = sign[a & xj] - sign[a & xk]
                        w = walsh[b, a] + tb * ds
                        if w < 0:
                            w = -w
                        if w > m:
                            m = w
            nl_after = size // 2 - m // 2
            improved = nl_after > nl

        if improved:
            f[xj] = vk
            f[xk] = vj
            vals[j] = vk
            vals[k] = vj
            du = du_after
            for b in range(1, size):
                tb = sign[b & vk] - sign[b & vj]
                if tb != 0:
                    m = 0
                    for a in range(size):
                        ds = sign[a & xj] - sign[a & xk]
                        w = walsh[b, a] + tb * ds
                        walsh[b, a] = w
                        if w < 0:
                            w = -w
                        if w > m:
                            m = w
                    wabs[b] = m
            max_abs = 0
            for b in range(1, size):
                if wabs[b] > max_abs:
                    max_abs = wabs[b]
            nl = size // 2 - max_abs // 2
            accepted += 1
        else:
            for idx in range(cnt - 1, -1, -1):
                ddt[log_a[idx], log_b[idx]] -= log_d[idx]
            for a in range(size):
                rowmax[a] = rm_save[a]

    return du, nl, accepted


def warmup(n: int = 3) -> None:
    """Force compilation of all kernels on a toy table."""
    size = 1 << n
    f = np.arange(size, dtype=np.int64)
    f[1] = 0  # one duplicate, one missing value
    excess = np.array([1], dtype=np.int64)
    missing = np.array([1], dtype=np.int64)
    g = f.copy()
    greedy_repair(g, excess, missing, SIGN, 8)
    props = np.zeros((2, 2), dtype=np.int64)
    hill_climb(g, excess, missing, props[0], props[1], SIGN)
